"""Randomized algebraic properties, including far beyond word size."""

from hypothesis import given, settings
from hypothesis import strategies as st

from collatzq import (
    collatz_step,
    delta_sequence,
    is_u0,
    iterate,
    merge,
    nu2,
    preimages,
    shift,
    tau,
    u0_range,
    xi,
)

odd = st.integers(min_value=0, max_value=10**40).map(lambda n: 2 * n + 1)
u0 = st.tuples(
    st.integers(min_value=0, max_value=10**40), st.sampled_from([1, 5])
).map(lambda t: 6 * t[0] + t[1])
small_u0 = st.tuples(st.integers(min_value=0, max_value=400), st.sampled_from([1, 5])).map(
    lambda t: 6 * t[0] + t[1]
)


@given(odd)
def test_step_lands_in_restricted_domain(x):
    assert is_u0(collatz_step(x))


@given(odd, st.integers(min_value=0, max_value=12))
def test_step_ignores_shifts(x, k):
    assert collatz_step(shift(x, k)) == collatz_step(x)


@given(odd, st.integers(min_value=0, max_value=12))
def test_shift_closed_form(x, k):
    v = x
    for _ in range(k):
        v = 4 * v + 1
    assert shift(x, k) == v


@given(odd)
def test_step_factorization(x):
    t = 3 * x + 1
    assert collatz_step(x) << nu2(t) == t
    assert collatz_step(x) % 2 == 1


@given(st.integers(min_value=0, max_value=300), odd)
def test_nu2_reads_off_the_power(a, m):
    assert nu2((1 << a) * m) == a


@given(u0)
def test_tau_is_a_section(y):
    t = tau(y)
    assert collatz_step(t) == y
    assert is_u0(t)


@given(u0)
def test_xi_is_a_preimage_below_tau(y):
    z = xi(y)
    assert collatz_step(z) == y
    assert z <= tau(y)


@given(u0, st.integers(min_value=0, max_value=8))
def test_two_sided_iteration_round_trip(x, k):
    assert iterate(iterate(x, -k), k) == x


@given(small_u0, small_u0)
@settings(max_examples=60)
def test_merge_is_symmetric(x, z):
    assert merge(x, z, 60).merge_time == merge(z, x, 60).merge_time


@given(small_u0)
@settings(max_examples=60)
def test_delta_sequence_monotone(x):
    seq = delta_sequence(x, 10)
    assert seq.values[0] == x
    for a, b in zip(seq.values, seq.values[1:]):
        assert a >= b >= 1
    if seq.stabilization_index is not None:
        assert seq.values[seq.stabilization_index] == 1
        assert all(v == 1 for v in seq.values[seq.stabilization_index :])


@given(small_u0, st.integers(min_value=1, max_value=50_000))
@settings(max_examples=60)
def test_preimages_are_exactly_the_chain_prefix(y, bound):
    chain = preimages(y, bound)
    assert chain == sorted(chain)
    for z in chain:
        assert z <= bound
        assert collatz_step(z) == y
    if chain:
        nxt = 4 * chain[-1] + 1
        assert nxt > bound


@given(st.integers(min_value=1, max_value=500), st.integers(min_value=0, max_value=500))
def test_u0_range_matches_filter(lo, width):
    hi = lo + width
    assert list(u0_range(lo, hi)) == [x for x in range(lo, hi + 1) if x % 2 and x % 3]
