"""Certified computations with expansions of reals in non-integer bases q over digits {0..M}."""

__version__ = "0.1.0"

from .arith import BaseEnclosure, RefinementBudget, Sign, SignResult, certified_sign, eval_pi
from .constants import (
    VMembershipReport,
    alpha_of_q,
    golden_ratio_general,
    komornik_loreti,
    q_from_alpha,
    resolve_base,
    tribonacci,
    v_membership_check,
)
from .dimension import DimensionEnclosure, ScanRecord, WordCountResult, admissible_word_count, dim_u_q, scan_dimension
from .engine import (
    Ambiguous,
    ExpansionTree,
    NodeStatus,
    UniquenessVerdict,
    Verdict,
    digit_options,
    enumerate_expansions,
    greedy_expansion,
    lazy_expansion,
    quasi_greedy_expansion,
    switch_region,
    uniqueness_certificate,
)
from .errors import (
    AdmissibilityError,
    CertificationFailure,
    DigitRangeError,
    DomainError,
    PrecisionExhausted,
    QExpansionError,
)
from .interval import RationalInterval
from .sequences import (
    DiffSeries,
    DigitWord,
    EventuallyPeriodicSeq,
    Ordering,
    kl_sequence,
    lex_compare,
    reflect,
    shift,
    thue_morse,
)
from .transversality import (
    RootKind,
    RootResult,
    StarFunctionSpec,
    TransversalityCertificate,
    star_function,
    transversality_root,
    verify_inspection_inequalities,
    verify_star,
)
from .u2 import (
    PairSearchRecord,
    U2Certificate,
    check_u2_point,
    construct_u2_candidates,
    reduce_to_u2,
    theorem_bound,
)
