"""Superconducting ring persistent currents, switching dynamics and
Aharonov-Bohm two-slit interference."""

from ._backend import BACKEND
from .constants import CONST, PhysicalConstants

__version__ = "0.1.0"

__all__ = ["BACKEND", "CONST", "PhysicalConstants", "__version__"]
