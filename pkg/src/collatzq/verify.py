"""Brute-force verification: a lemma check suite and a range sweep engine.

Two layers:

* ``run_lemma_suite`` replays the structural claims behind the quotient
  machinery against independent oracles on a window.  The oracle side is
  deliberately naive (forward evaluation with trial division, grouped
  minima, exhaustive membership), so a bug in the closed forms or the
  class computations cannot hide on both sides of a check.

* ``verify_conjecture_range`` sweeps an interval and certifies that every
  restricted-domain element reaches 1.  Per element it iterates only until
  the trajectory drops strictly below its start: combined with the verified
  prefix below ``lo`` (a preceding pass, or nothing when lo == 1) a simple
  induction gives the full claim, and the per-element work is independent
  of processing order, so worker count never changes a reported number.

Findings -- a cycle or a truncated element -- are first-class results,
reported loudly in the output record, never folded into other outcomes.
"""

from __future__ import annotations

import random
import time
from array import array
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import core, quotient
from .cache import OrbitCache
from .core import u0_range
from .errors import DomainError

__all__ = [
    "LemmaCheckResult",
    "RangeVerificationReport",
    "run_lemma_suite",
    "verify_conjecture_range",
    "CHECK_IDS",
]


@dataclass
class LemmaCheckResult:
    """One check of the suite: what was tested, how much, and what failed.

    Every entry of ``failures`` is a plain dict of concrete inputs and the
    disagreeing values, sufficient to replay the instance by hand.
    """

    check_id: str
    range_description: str
    instances_tested: int
    failures: list[dict] = field(default_factory=list)
    elapsed: float = 0.0


@dataclass
class RangeVerificationReport:
    """Aggregate outcome of one range sweep.

    all_reach_one is true exactly when no cycle was found and no element
    exhausted its step budget.  When lo == 1 the step statistics are exact
    steps-to-one (composed across the verified prefix); for lo > 1 they
    count only the steps observed before each element dropped below itself.
    """

    lo: int
    hi: int
    elements_checked: int
    all_reach_one: bool
    max_steps_observed: int
    max_excursion_observed: int
    cycles_found: list[int] = field(default_factory=list)
    truncated_elements: list[int] = field(default_factory=list)


# --------------------------------------------------------------------------
# independent oracle helpers: forward evaluation by trial division only

def _raw_step(v: int) -> int:
    t = 3 * v + 1
    while t % 2 == 0:
        t //= 2
    return t


def _raw_iter(v: int, n: int) -> int:
    for _ in range(n):
        v = _raw_step(v)
    return v


def _draw_u0(rng: random.Random, lo: int, hi: int) -> int:
    while True:
        z = rng.randrange(lo, hi + 1)
        if z % 2 == 1 and z % 3 != 0:
            return z


# --------------------------------------------------------------------------
# the check suite

def _check_shift_invariance(bound, n_cap, rng):
    fails = []
    inst = 0
    for x in range(1, bound + 1, 2):
        inst += 1
        left = core.collatz_step(core.shift(x, 1))
        right = core.collatz_step(x)
        if left != right:
            fails.append({"x": x, "step_of_shift": left, "step": right})
    return f"odd x in [1, {bound}]", inst, fails


def _check_shift_invariance_k(bound, n_cap, rng):
    fails = []
    inst = 0
    for x in range(1, bound + 1, 2):
        right = core.collatz_step(x)
        for k in range(1, 6):
            inst += 1
            left = core.collatz_step(core.shift(x, k))
            if left != right:
                fails.append({"x": x, "k": k, "step_of_shift": left, "step": right})
    return f"odd x in [1, {bound}], k in [1, 5]", inst, fails


def _check_shift_closed_form(bound, n_cap, rng):
    fails = []
    inst = 0
    for x in range(1, bound + 1, 2):
        v = x
        for k in range(6):
            inst += 1
            if core.shift(x, k) != v:
                fails.append({"x": x, "k": k, "closed_form": core.shift(x, k), "iterated": v})
            v = 4 * v + 1
    return f"odd x in [1, {bound}], k in [0, 5]", inst, fails


def _check_min_preimage(bound, n_cap, rng):
    # Grouped forward pass: ascending odd z, first hit per image is the
    # brute-force minimal preimage.
    zmax = (4 * bound) // 3 + 1
    mins: dict[int, int] = {}
    for z in range(1, zmax + 1, 2):
        y = _raw_step(z)
        if y <= bound and y not in mins:
            mins[y] = z
    fails = []
    inst = 0
    for y in u0_range(1, bound):
        inst += 1
        got = core.xi(y)
        want = mins.get(y)
        if got != want:
            fails.append({"y": y, "xi": got, "brute_min": want})
    return f"restricted domain in [1, {bound}]", inst, fails


def _check_preimage_sets(bound, n_cap, rng):
    pbound = 4 * bound
    brute: dict[int, list[int]] = {}
    for z in range(1, pbound + 1, 2):
        y = _raw_step(z)
        if y <= bound:
            brute.setdefault(y, []).append(z)
    fails = []
    inst = 0
    for y in u0_range(1, bound):
        inst += 1
        want = brute.get(y, [])
        got = core.preimages(y, pbound, u0_only=False)
        if got != want:
            fails.append({"y": y, "bound": pbound, "chain": got, "brute": want})
            continue
        inst += 1
        got_u0 = core.preimages(y, pbound, u0_only=True)
        want_u0 = [z for z in want if z % 3 != 0]
        if got_u0 != want_u0:
            fails.append({"y": y, "bound": pbound, "chain_u0": got_u0, "brute_u0": want_u0})
    return f"restricted domain in [1, {bound}], preimages up to {pbound}", inst, fails


def _check_surjectivity(bound, n_cap, rng):
    # Pure coverage: forward images of restricted-domain elements must hit
    # every window element (no inverse formulas involved).
    covered: set[int] = set()
    for z in u0_range(1, 6 * bound):
        y = _raw_step(z)
        if y <= bound:
            covered.add(y)
    fails = []
    inst = 0
    for y in u0_range(1, bound):
        inst += 1
        if y not in covered:
            fails.append({"y": y, "searched_up_to": 6 * bound})
    return f"restricted domain in [1, {bound}]", inst, fails


def _check_quasi_inverse(bound, n_cap, rng):
    # tau is a right inverse, stays in the restricted domain, and is the
    # *minimal* restricted preimage (brute minimum from a forward pass).
    zmax = (16 * bound) // 3 + 2
    mins: dict[int, int] = {}
    for z in u0_range(1, zmax):
        y = _raw_step(z)
        if y <= bound and y not in mins:
            mins[y] = z
    fails = []
    inst = 0
    for y in u0_range(1, bound):
        inst += 1
        t = core.tau(y)
        if core.collatz_step(t) != y or t % 3 == 0 or t != mins.get(y):
            fails.append({"y": y, "tau": t, "step_of_tau": core.collatz_step(t),
                          "brute_min_u0": mins.get(y)})
    return f"restricted domain in [1, {bound}]", inst, fails


def _check_fixed_points(bound, n_cap, rng):
    fails = []
    inst = 0
    for x in range(1, bound + 1, 2):
        inst += 1
        if core.collatz_step(x) == x and x != 1:
            fails.append({"x": x})
    return f"odd x in [1, {bound}]", inst, fails


def _check_strict_inclusion(bound, n_cap, rng):
    fails = []
    inst = 0
    for _ in range(100):
        x = _draw_u0(rng, 1, bound)
        n = rng.randint(0, 8)
        inst += 1
        z = quotient.strict_inclusion_witness(x, n, search_cap=10**60)
        same_next = _raw_iter(z, n + 1) == _raw_iter(x, n + 1)
        differs_now = _raw_iter(z, n) != _raw_iter(x, n)
        if not (same_next and differs_now and z % 3 != 0 and z % 2 == 1):
            fails.append({"x": x, "n": n, "witness": z,
                          "same_at_next_level": same_next, "differs_at_level": differs_now})
    return f"100 sampled (x, n), x in [1, {bound}], n in [0, 8]", inst, fails


def _check_class_pullback(bound, n_cap, rng):
    # Level-(n+1) membership must coincide with level-n membership of the
    # images, for every candidate in a small window.
    win = min(bound, 2500)
    fails = []
    inst = 0
    for _ in range(12):
        x = _draw_u0(rng, 1, min(bound, 500))
        n = rng.randint(0, 4)
        members = set(quotient.class_n(x, n + 1, win, method="scan").members)
        tx_n = _raw_iter(_raw_step(x), n)
        for z in u0_range(1, win):
            inst += 1
            in_class = z in members
            image_matches = _raw_iter(_raw_step(z), n) == tx_n
            if in_class != image_matches:
                fails.append({"x": x, "n": n, "z": z,
                              "in_level_n_plus_1": in_class,
                              "image_in_level_n": image_matches})
    return f"12 sampled (x, n) against the window [1, {win}]", inst, fails


def _check_class_images(bound, n_cap, rng):
    # Pushforward: images of a level-(n+1) class land in the level-n class
    # of the image, and cover every member that has a preimage in range.
    win = min(bound, 2000)
    fails = []
    inst = 0
    for _ in range(10):
        x = _draw_u0(rng, 1, min(bound, 400))
        n = rng.randint(0, 4)
        members = quotient.class_n(x, n + 1, win, method="scan").members
        tx = _raw_step(x)
        tx_n = _raw_iter(tx, n)
        images = sorted({_raw_step(z) for z in members})
        image_set = set(images)
        for w in images:
            inst += 1
            if _raw_iter(w, n) != tx_n:
                fails.append({"x": x, "n": n, "image": w, "reason": "image left the class"})
        img_win = (3 * win + 1) // 2
        for w in quotient.class_n(tx, n, img_win, method="scan").members:
            inst += 1
            if core.preimages(w, win, u0_only=True) and w not in image_set:
                fails.append({"x": x, "n": n, "member": w, "reason": "member not covered"})
    return f"10 sampled (x, n) against the window [1, {win}]", inst, fails


def _check_limit_pullback(bound, n_cap, rng):
    # On decided pairs, limit-level equivalence must be compatible with one
    # forward step, in both directions.
    win = min(bound, 1200)
    fails = []
    inst = 0
    for _ in range(8):
        x = _draw_u0(rng, 1, min(bound, 300))
        tx = core.collatz_step(x)
        for z in u0_range(1, win):
            inst += 1
            m = quotient.merge(x, z, n_cap).merge_time
            mi = quotient.merge(tx, core.collatz_step(z), n_cap).merge_time
            if m is not None and mi is None:
                fails.append({"x": x, "z": z, "merge_time": m,
                              "reason": "images failed to merge"})
            if mi is not None and quotient.merge(x, z, n_cap + 1).merge_time is None:
                fails.append({"x": x, "z": z, "image_merge_time": mi,
                              "reason": "originals failed to merge"})
    return f"8 sampled x against the window [1, {win}], cap {n_cap}", inst, fails


def _check_induced_map(bound, n_cap, rng):
    # The induced map on classes is well-defined and injective on decided
    # pairs: equivalent elements keep equivalent images and vice versa.
    fails = []
    inst = 0
    for _ in range(60):
        x = _draw_u0(rng, 1, bound)
        z = _draw_u0(rng, 1, bound)
        inst += 1
        m = quotient.merge(x, z, n_cap).merge_time
        mi = quotient.merge(core.collatz_step(x), core.collatz_step(z), n_cap).merge_time
        if m is not None and mi is None:
            fails.append({"x": x, "z": z, "merge_time": m, "reason": "not well-defined"})
        if mi is not None and quotient.merge(x, z, n_cap + 1).merge_time is None:
            fails.append({"x": x, "z": z, "image_merge_time": mi, "reason": "not injective"})
    return f"60 sampled pairs in [1, {bound}], cap {n_cap}", inst, fails


def _check_delta_one(bound, n_cap, rng):
    # Exhaustive: the level-1 minimum (grouped brute force) is tau of the image.
    mins: dict[int, int] = {}
    for z in u0_range(1, bound):
        y = _raw_step(z)
        if y not in mins:
            mins[y] = z
    fails = []
    inst = 0
    for x in u0_range(1, bound):
        inst += 1
        want = mins[_raw_step(x)]
        got = core.tau(core.collatz_step(x))
        if got != want:
            fails.append({"x": x, "tau_of_step": got, "brute_level1_min": want})
    for _ in range(40):
        x = _draw_u0(rng, 1, bound)
        inst += 1
        d = quotient.delta_n(x, 1)
        if d != mins[_raw_step(x)]:
            fails.append({"x": x, "delta_1": d, "brute_level1_min": mins[_raw_step(x)]})
    return f"restricted domain in [1, {bound}] plus 40 sampled delta_n calls", inst, fails


def _check_sufficient_set(bound, n_cap, rng):
    fails = []
    inst = 0
    for x in u0_range(1, bound):
        inst += 1
        e = core.nu2(3 * core.tau(x) + 1)
        if not 1 <= e <= 4:
            fails.append({"x": x, "tau": core.tau(x), "nu2": e})
    return f"restricted domain in [1, {bound}]", inst, fails


_CHECKS = [
    ("L-TS", _check_shift_invariance),
    ("L-TSK", _check_shift_invariance_k),
    ("L-SCF", _check_shift_closed_form),
    ("L-XI", _check_min_preimage),
    ("L-PRE", _check_preimage_sets),
    ("L-SURJ", _check_surjectivity),
    ("L-TAU", _check_quasi_inverse),
    ("L-FIX", _check_fixed_points),
    ("L-A2", _check_strict_inclusion),
    ("L-A6", _check_class_pullback),
    ("L-CI", _check_class_images),
    ("L-INF", _check_limit_pullback),
    ("L-TSWD", _check_induced_map),
    ("L-D1", _check_delta_one),
    ("L-SUFF", _check_sufficient_set),
]

CHECK_IDS = [check_id for check_id, _ in _CHECKS]


def run_lemma_suite(bound: int, n_cap: int = 50, sample_seed: int = 0) -> list[LemmaCheckResult]:
    """Run every check against the window [1, bound].

    Exhaustive checks cover the whole window; sampled checks draw their
    instances from a generator seeded with sample_seed, so a run is fully
    reproducible.  An undecided merge never counts as a failure -- only a
    decided instance can contradict a claim.
    """
    if bound < 100:
        raise DomainError(f"bound must be >= 100 for a meaningful suite, got {bound}")
    if n_cap < 1:
        raise DomainError(f"n_cap must be >= 1, got {n_cap}")
    results = []
    for check_id, fn in _CHECKS:
        rng = random.Random(f"{sample_seed}:{check_id}")
        start = time.perf_counter()
        desc, instances, failures = fn(bound, n_cap, rng)
        results.append(LemmaCheckResult(
            check_id=check_id,
            range_description=desc,
            instances_tested=instances,
            failures=failures,
            elapsed=time.perf_counter() - start,
        ))
    return results


# --------------------------------------------------------------------------
# range sweep

def _segment_outcome(x: int, max_steps: int) -> tuple[str, int, int, int]:
    """Iterate from x until the trajectory drops strictly below x.

    Returns (kind, steps, value, seg_max):
      * ("drop", s, v, m): dropped to v < x after s steps, peak m.
        x == 1 is terminal by convention: ("drop", 0, 0, 1).
      * ("cycle", s, x, m): returned to x itself -- a nontrivial cycle
        (every cycle is caught this way at its minimal element).
      * ("truncated", max_steps, 0, m): budget exhausted while still >= x.
    """
    if x == 1:
        return ("drop", 0, 0, 1)
    v = x
    mx = x
    s = 0
    while s < max_steps:
        t = 3 * v + 1
        v = t >> ((t & -t).bit_length() - 1)
        s += 1
        if v < x:
            return ("drop", s, v, mx)
        if v > mx:
            mx = v
        if v == x:
            return ("cycle", s, v, mx)
    return ("truncated", s, 0, mx)


def _sweep_chunk(args: tuple[int, int, int]) -> tuple:
    lo, hi, max_steps = args
    segs = array("i")
    drops = array("q")
    chunk_max = 0
    cycles: list[int] = []
    truncated: list[int] = []
    count = 0
    for x in u0_range(lo, hi):
        kind, s, v, mx = _segment_outcome(x, max_steps)
        count += 1
        segs.append(s)
        if kind == "drop":
            drops.append(v)
        elif kind == "cycle":
            drops.append(-1)
            cycles.append(x)
        else:
            drops.append(-2)
            truncated.append(x)
        if mx > chunk_max:
            chunk_max = mx
    return (lo, hi, count, segs, drops, chunk_max, cycles, truncated)


def _chunk_spans(lo: int, hi: int, workers: int) -> list[tuple[int, int]]:
    span = hi - lo + 1
    n_chunks = min(max(1, workers * 4), max(1, span // 10_000 + 1))
    width = -(-span // n_chunks)
    out = []
    a = lo
    while a <= hi:
        b = min(a + width - 1, hi)
        out.append((a, b))
        a = b + 1
    return out


def verify_conjecture_range(
    lo: int,
    hi: int,
    max_steps: int = 10_000,
    workers: int = 1,
    cache: OrbitCache | None = None,
) -> RangeVerificationReport:
    """Verify that every restricted-domain element of [lo, hi] reaches 1.

    Each element is iterated only until its trajectory drops strictly below
    it.  Elements below lo must have been verified by a preceding pass (or
    there are none, when lo == 1); within the range the usual induction
    closes the argument.  The per-element outcome does not depend on
    processing order, so any worker count produces the identical report.

    A trajectory that returns to its start is a cycle; one that exhausts
    max_steps while at or above its start is truncated.  Either finding is
    reported in its own list and forces all_reach_one to False.

    When lo == 1 the report's step statistics are exact steps-to-one,
    composed from the segments in ascending order, and an attached cache is
    consulted before iterating and extended with every newly computed
    element.  For lo > 1 exact totals are not derivable from the range
    alone, so statistics are segment-local and the cache is left untouched.
    """
    if lo < 1:
        raise DomainError(f"lo must be >= 1, got {lo}")
    if hi < lo:
        raise DomainError(f"range is empty: lo={lo}, hi={hi}")
    if max_steps < 1:
        raise DomainError(f"max_steps must be >= 1, got {max_steps}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")

    if lo == 1 and cache is not None:
        return _sweep_with_cache(hi, max_steps, cache)

    spans = _chunk_spans(lo, hi, workers)
    args = [(a, b, max_steps) for a, b in spans]
    if workers == 1 or len(args) == 1:
        chunks = [_sweep_chunk(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_chunk, args))

    checked = 0
    exc_max = 0
    cycles: list[int] = []
    truncated: list[int] = []
    for (_, _, count, _, _, chunk_max, c_cycles, c_trunc) in chunks:
        checked += count
        if chunk_max > exc_max:
            exc_max = chunk_max
        cycles.extend(c_cycles)
        truncated.extend(c_trunc)

    if lo == 1:
        steps_max = _derive_totals(hi, chunks)
    else:
        steps_max = 0
        for (_, _, _, segs, drops, _, _, _) in chunks:
            for s, d in zip(segs, drops):
                if d >= 0 and s > steps_max:
                    steps_max = s

    return RangeVerificationReport(
        lo=lo,
        hi=hi,
        elements_checked=checked,
        all_reach_one=not cycles and not truncated,
        max_steps_observed=steps_max,
        max_excursion_observed=exc_max,
        cycles_found=sorted(cycles),
        truncated_elements=sorted(truncated),
    )


def _derive_totals(hi: int, chunks: list[tuple]) -> int:
    # totals[x // 3] = exact steps to 1, or -1 where a cycle/truncation
    # upstream leaves the count undefined.  Chunks arrive ascending, and a
    # drop target is always a smaller restricted-domain element, so a single
    # ascending pass resolves every element.
    totals = array("q", b"\xff" * 8 * (hi // 3 + 1))
    steps_max = 0
    for (c_lo, c_hi, _, segs, drops, _, _, _) in chunks:
        for x, s, d in zip(u0_range(c_lo, c_hi), segs, drops):
            if d == 0:
                total = s
            elif d > 0:
                upstream = totals[d // 3]
                total = s + upstream if upstream >= 0 else -1
            else:
                total = -1
            totals[x // 3] = total
            if total > steps_max:
                steps_max = total
    return steps_max


def _sweep_with_cache(hi: int, max_steps: int, cache: OrbitCache) -> RangeVerificationReport:
    # Sequential ascending sweep over [1, hi] with exact per-element totals,
    # consulting the cache before iterating and batching new records at the
    # end.  Results are identical to the parallel path on a consistent cache.
    size = hi // 3 + 1
    steps_totals = array("q", b"\xff" * 8 * size)
    exc_totals: list[int] = [0] * size
    new_records: list[tuple[int, int, int]] = []
    checked = 0
    steps_max = 0
    exc_max = 0
    cycles: list[int] = []
    truncated: list[int] = []
    for x in u0_range(1, hi):
        checked += 1
        idx = x // 3
        entry = cache.lookup(x)
        if entry is not None:
            steps_totals[idx] = entry.steps
            exc_totals[idx] = entry.max_excursion
        else:
            kind, s, v, mx = _segment_outcome(x, max_steps)
            if kind == "cycle":
                cycles.append(x)
            elif kind == "truncated":
                truncated.append(x)
            else:
                upstream = steps_totals[v // 3] if v else 0
                if upstream >= 0:
                    total = s + upstream
                    exc = max(mx, exc_totals[v // 3]) if v else mx
                    steps_totals[idx] = total
                    exc_totals[idx] = exc
                    new_records.append((x, total, exc))
            if mx > exc_max:
                exc_max = mx
        if steps_totals[idx] > steps_max:
            steps_max = steps_totals[idx]
        if exc_totals[idx] > exc_max:
            exc_max = exc_totals[idx]
    if new_records:
        cache.store_many(new_records)
    return RangeVerificationReport(
        lo=1,
        hi=hi,
        elements_checked=checked,
        all_reach_one=not cycles and not truncated,
        max_steps_observed=steps_max,
        max_excursion_observed=exc_max,
        cycles_found=sorted(cycles),
        truncated_elements=sorted(truncated),
    )
