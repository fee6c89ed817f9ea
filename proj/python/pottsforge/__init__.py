"""Exact Tutte/Potts partition functions, random-cluster sampling and the
#BIS to ferromagnetic Tutte reduction chain. Rationals are fractions.Fraction."""

from ._core import *  # noqa: F401,F403
from ._core import CapExceeded, NoCrossing, ReductionError, CouplingViolation  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
