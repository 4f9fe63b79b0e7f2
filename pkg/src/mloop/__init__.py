"""Exact computational algebra for finite commutative Moufang loops."""

from .errors import (
    BadDimension,
    ChainStalled,
    CrossLoop,
    DegreeMismatch,
    LoopError,
    NoIdentity,
    NotASubloop,
    NotCML,
    NotCommutative,
    NotLatinSquare,
    NotNested,
    NotNilpotent,
    NotNormal,
    NotSubgroup,
    OracleDisagreement,
    OrderOverflow,
    ParseError,
)
from .loop_core import (
    CayleyLoop,
    LoopDiagnostics,
    LoopElement,
    associator,
    diagnose,
    direct_product,
    gen_abelian,
    gen_zassenhaus81,
    parse_loop,
    quotient,
)
from .structure import (
    CentralSeries,
    Subloop,
    all_subloops,
    associator_subloop,
    center,
    cube_subloop,
    frattini_subloop,
    generate_subloop,
    is_divisible,
    is_normal,
    join,
    maximal_subloops,
    non_generator_witness,
    normality_witness,
    upper_central_series,
)
from .perm_group import (
    PermGroup,
    Permutation,
    center_of_group,
    derived_subgroup,
    frattini_subgroup,
    group_from_generators,
    is_divisible_group,
    normal_closure,
    normalizer_of_subgroup,
    perm_from_cycles,
)
from .mult_group import (
    MultGroupBundle,
    h_star,
    multiplication_group,
    orbit_of_identity,
    translation,
)
from .normalizer import (
    NormalizerTrace,
    SubnormalSystem,
    ascending_subnormal_system,
    normalizer,
    normalizer_chain,
    normalizer_condition,
    normalizer_oracle,
)
from .reporting import CheckResult
from .verify import VerdictReport, run_suite

__version__ = "0.1.0"

__all__ = [
    "BadDimension",
    "CayleyLoop",
    "CentralSeries",
    "ChainStalled",
    "CheckResult",
    "CrossLoop",
    "DegreeMismatch",
    "LoopDiagnostics",
    "LoopElement",
    "LoopError",
    "MultGroupBundle",
    "NoIdentity",
    "NormalizerTrace",
    "NotASubloop",
    "NotCML",
    "NotCommutative",
    "NotLatinSquare",
    "NotNested",
    "NotNilpotent",
    "NotNormal",
    "NotSubgroup",
    "OracleDisagreement",
    "OrderOverflow",
    "ParseError",
    "PermGroup",
    "Permutation",
    "Subloop",
    "SubnormalSystem",
    "VerdictReport",
    "all_subloops",
    "ascending_subnormal_system",
    "associator",
    "associator_subloop",
    "center",
    "center_of_group",
    "cube_subloop",
    "derived_subgroup",
    "diagnose",
    "direct_product",
    "frattini_subgroup",
    "frattini_subloop",
    "gen_abelian",
    "gen_zassenhaus81",
    "generate_subloop",
    "group_from_generators",
    "h_star",
    "is_divisible",
    "is_divisible_group",
    "is_normal",
    "join",
    "maximal_subloops",
    "multiplication_group",
    "non_generator_witness",
    "normal_closure",
    "normality_witness",
    "normalizer",
    "normalizer_chain",
    "normalizer_condition",
    "normalizer_of_subgroup",
    "normalizer_oracle",
    "orbit_of_identity",
    "parse_loop",
    "perm_from_cycles",
    "quotient",
    "run_suite",
    "translation",
    "upper_central_series",
]
