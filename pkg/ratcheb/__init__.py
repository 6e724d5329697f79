"""
ratcheb

Extremal rational functions with prescribed real poles on finite unions of
real intervals: a Remez-type solver, Green functions and harmonic measures
of the complement, n-extensions and asymptotic experiments.

Main Classes:
    - CompactSet: Finite union of closed intervals of the extended real line
    - PoleDivisor: Allowed poles with multiplicities
    - RationalFn: Element of L(D) in a conditioned basis
    - Problem / Solution: The extremal problem and its certified extremizer
    - GreenModel: Green function of the complement of a set
    - BandSet: The n-extension of a set with its bands
    - PoleSequenceSpec: Pole distribution for asymptotic experiments
"""

from .errors import (
    RatchebError,
    ArgumentError,
    UsageError,
    DomainError,
    NumericError,
    ConvergenceError,
    IntegrityError
)
from .geometry import (
    INF,
    Mobius,
    Gap,
    CompactSet,
    Divisor,
    PoleDivisor,
    cyclically_ordered,
    gap_of,
    sign_function,
    normalize_problem
)
from .rational import (
    Basis,
    OrthoBasis,
    RationalFn,
    ZeroDivisor,
    basis,
    evaluate,
    leading_coeff,
    generalized_zeros,
    cleared_values
)
from .potential import (
    GreenOptions,
    GreenModel,
    GreenCache,
    HarmonicMeasure,
    build_green,
    green_eval,
    green_sum,
    harmonic_measure,
    critical_points,
    koosis_check,
    monotonicity_check
)
from .solver import (
    SolveOptions,
    Problem,
    Solution,
    is_constant_case,
    solve,
    verify_alternation,
    solve_lp_oracle,
    gap_structure_report,
    compare_gap_change,
    conformal_deviation
)
from .extension import (
    ExtensionOptions,
    GapBehavior,
    BandSet,
    n_extension,
    band_measure_check,
    representation_check,
    bernstein_walsh_check
)
from .asymptotics import (
    AsymptoticsOptions,
    PoleSequenceSpec,
    ConvergenceReport,
    generate_divisors,
    run_root_asymptotics,
    zero_measure_compare,
    szego_widom_modulus,
    band_shrinkage
)
from .json_handler import JsonHandler, JsonSaveOptions
from .csv_handler import CSVHandler, CSVSaveOptions

__version__ = "0.1.0"
__all__ = [
    "RatchebError",
    "ArgumentError",
    "UsageError",
    "DomainError",
    "NumericError",
    "ConvergenceError",
    "IntegrityError",
    "INF",
    "Mobius",
    "Gap",
    "CompactSet",
    "Divisor",
    "PoleDivisor",
    "cyclically_ordered",
    "gap_of",
    "sign_function",
    "normalize_problem",
    "Basis",
    "OrthoBasis",
    "RationalFn",
    "ZeroDivisor",
    "basis",
    "evaluate",
    "leading_coeff",
    "generalized_zeros",
    "cleared_values",
    "GreenOptions",
    "GreenModel",
    "GreenCache",
    "HarmonicMeasure",
    "build_green",
    "green_eval",
    "green_sum",
    "harmonic_measure",
    "critical_points",
    "koosis_check",
    "monotonicity_check",
    "SolveOptions",
    "Problem",
    "Solution",
    "is_constant_case",
    "solve",
    "verify_alternation",
    "solve_lp_oracle",
    "gap_structure_report",
    "compare_gap_change",
    "conformal_deviation",
    "ExtensionOptions",
    "GapBehavior",
    "BandSet",
    "n_extension",
    "band_measure_check",
    "representation_check",
    "bernstein_walsh_check",
    "AsymptoticsOptions",
    "PoleSequenceSpec",
    "ConvergenceReport",
    "generate_divisors",
    "run_root_asymptotics",
    "zero_measure_compare",
    "szego_widom_modulus",
    "band_shrinkage",
    "JsonHandler",
    "JsonSaveOptions",
    "CSVHandler",
    "CSVSaveOptions",
]
