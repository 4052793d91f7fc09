"""Parameter-optimal state transition search with Nelder-Mead and
quadratic-interpolation exploitation stages."""
from .algorithms import RunRecord, Termination, Variant, VariantConfig, run
from .benchmarks import BENCHMARKS, make
from .core import Bounds, EvalCounter, ObjectiveFunction, Solution

__version__ = "0.1.0"

__all__ = [
    "BENCHMARKS",
    "Bounds",
    "EvalCounter",
    "ObjectiveFunction",
    "RunRecord",
    "Solution",
    "Termination",
    "Variant",
    "VariantConfig",
    "make",
    "run",
    "__version__",
]
