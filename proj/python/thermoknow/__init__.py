"""Coarse-grained estimates of thermal states, their symmetrization and concentration,
and the thermodynamics of acquiring them. Thin wrapper over the C++ core."""

from ._core import *  # noqa: F401,F403
from ._core import Error, MeasurementSetting, PartitionAssignment

__all__ = [name for name in dir() if not name.startswith("_")]
