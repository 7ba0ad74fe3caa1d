"""Multiplayer battle game optimizer with baselines, problems and a comparison harness."""

from ._backend import kernels as _kernels
from .core import Bounds, CatalogError, ConfigurationError, Individual, RunTrace
from .mbgo import MbgoConfig, optimize
from .problems import get_problem

__version__ = "0.1.0"
KERNEL_BACKEND = _kernels.BACKEND

__all__ = [
    "Bounds",
    "CatalogError",
    "ConfigurationError",
    "Individual",
    "RunTrace",
    "MbgoConfig",
    "optimize",
    "get_problem",
    "KERNEL_BACKEND",
]
