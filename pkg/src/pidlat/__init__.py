"""Exact multivariate information decomposition over finite discrete distributions."""

from .dist import (
    JointDistribution,
    conditional_entropy,
    entropy,
    is_deterministic,
    is_independent,
    marginalize,
    mutual_info,
)
from .errors import CapabilityError, InputError, PidlatError
from .gk import gk_common_info, red3
from .lattice import Antichain, AtomTable, Lattice, downset, enumerate_antichains, leq, wesp_sum

__version__ = "0.1.0"

__all__ = [
    "Antichain",
    "AtomTable",
    "CapabilityError",
    "InputError",
    "JointDistribution",
    "Lattice",
    "PidlatError",
    "conditional_entropy",
    "downset",
    "entropy",
    "enumerate_antichains",
    "gk_common_info",
    "is_deterministic",
    "is_independent",
    "leq",
    "marginalize",
    "mutual_info",
    "red3",
    "wesp_sum",
]
