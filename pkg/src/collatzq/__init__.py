"""Accelerated Collatz map on odd integers and its quotient structure.

The map sends odd x to (3x+1) / 2^v, where v is the exact power of two in
3x+1.  Restricted to odd numbers not divisible by 3 it is surjective with
small, fully describable preimage sets, which makes the equivalence
classes "same n-th image" computable on windows.  This package provides
the map algebra (core), the class machinery (quotient), windowed summary
structures (bookkeeping), an orbit cache (cache), and a brute-force
verification engine (verify), all exposed through one CLI (cli).
"""

from .bookkeeping import (
    BookkeepingWindow,
    SufficientSetReport,
    census_class_of_one,
    class_matrices,
    connected_class,
    row_tail_analysis,
    sufficient_set_check,
    sufficient_set_members,
)
from .cache import CacheEntry, OrbitCache
from .core import (
    OrbitRecord,
    collatz_step,
    is_u0,
    iterate,
    nu2,
    orbit,
    preimages,
    shift,
    tau,
    u0_range,
    xi,
)
from .errors import CacheError, DomainError, ResourceLimitError
from .quotient import (
    ClassWindow,
    DeltaSequence,
    MergeResult,
    class_inf,
    class_n,
    delta_inf,
    delta_n,
    delta_sequence,
    merge,
    partition_n,
    strict_inclusion_witness,
    tstar_apply,
)
from .verify import (
    CHECK_IDS,
    LemmaCheckResult,
    RangeVerificationReport,
    run_lemma_suite,
    verify_conjecture_range,
)

__version__ = "0.1.0"

__all__ = [
    "BookkeepingWindow",
    "CacheEntry",
    "CacheError",
    "CHECK_IDS",
    "ClassWindow",
    "DeltaSequence",
    "DomainError",
    "LemmaCheckResult",
    "MergeResult",
    "OrbitCache",
    "OrbitRecord",
    "RangeVerificationReport",
    "ResourceLimitError",
    "SufficientSetReport",
    "census_class_of_one",
    "class_inf",
    "class_matrices",
    "class_n",
    "collatz_step",
    "connected_class",
    "delta_inf",
    "delta_n",
    "delta_sequence",
    "is_u0",
    "iterate",
    "merge",
    "nu2",
    "orbit",
    "partition_n",
    "preimages",
    "row_tail_analysis",
    "run_lemma_suite",
    "shift",
    "strict_inclusion_witness",
    "sufficient_set_check",
    "sufficient_set_members",
    "tau",
    "tstar_apply",
    "u0_range",
    "verify_conjecture_range",
    "xi",
    "__version__",
]
