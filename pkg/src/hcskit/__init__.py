"""hcskit: hierarchical control sequences for collision-free slot access.

Build multi-level slot schedules in which every user of a TDMA frame hops
pseudo-randomly through its slots while no two users ever collide, check the
capacity bound and the generated sets, drive a central sequence allocator,
and measure what the hopping buys under partial-band interference.
"""

__version__ = "0.1.0"

from .bound import (
    BoundReport,
    EnumerationCapError,
    UserCountTuple,
    check_bound,
    enumerate_user_counts,
    max_users_single_level,
)
from .construction1 import (
    Cons1Params,
    DriverSequences,
    cons1_params,
    construct1,
    derive_drivers,
    unrank_permutation,
)
from .construction2 import (
    Cons2Params,
    MixedRadixIndex,
    cons2_params,
    construct2,
    evaluate_c,
    find_generator,
    initial_set,
    multiplicative_order,
)
from .core import (
    ConfigError,
    HcsError,
    HcsSequence,
    HcsSet,
    LevelSpec,
    SchemaError,
    SystemConfig,
    dumps_document,
    flatten,
    from_document,
    hamming_correlation,
    load_set,
    save_set,
    subsequences,
    to_document,
)
from .sac import SacEvent, SacState, run_script
from .simulator import (
    ComparisonReport,
    ComparisonRow,
    FixedScheme,
    HcsScheme,
    SerCurve,
    SerPoint,
    SimConfig,
    compare_schemes,
    interference_hit_fraction,
    scenario_label,
    simulate_ser,
)
from .verification import VerificationReport, occupancy_histogram, verify

__all__ = [
    "__version__",
    "BoundReport",
    "ComparisonReport",
    "ComparisonRow",
    "ConfigError",
    "Cons1Params",
    "Cons2Params",
    "DriverSequences",
    "EnumerationCapError",
    "FixedScheme",
    "HcsError",
    "HcsScheme",
    "HcsSequence",
    "HcsSet",
    "LevelSpec",
    "MixedRadixIndex",
    "SacEvent",
    "SacState",
    "SchemaError",
    "SerCurve",
    "SerPoint",
    "SimConfig",
    "SystemConfig",
    "UserCountTuple",
    "VerificationReport",
    "check_bound",
    "compare_schemes",
    "cons1_params",
    "cons2_params",
    "construct1",
    "construct2",
    "derive_drivers",
    "dumps_document",
    "enumerate_user_counts",
    "evaluate_c",
    "find_generator",
    "flatten",
    "from_document",
    "hamming_correlation",
    "initial_set",
    "interference_hit_fraction",
    "load_set",
    "max_users_single_level",
    "multiplicative_order",
    "occupancy_histogram",
    "run_script",
    "save_set",
    "scenario_label",
    "simulate_ser",
    "subsequences",
    "to_document",
    "unrank_permutation",
    "verify",
]
