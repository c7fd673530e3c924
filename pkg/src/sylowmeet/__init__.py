"""Sylow 2-subgroup intersections in symmetric and alternating groups."""

from .errors import CutoffExceeded, GuardError, GuardExceeded, NotInSylow
from .forest import SylowForest, build_forest
from .perm import Partition, Permutation

__version__ = "0.1.0"

__all__ = [
    "CutoffExceeded",
    "GuardError",
    "GuardExceeded",
    "NotInSylow",
    "Partition",
    "Permutation",
    "SylowForest",
    "build_forest",
]
