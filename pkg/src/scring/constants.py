"""CODATA physical constants used by every numerical routine in the package."""

from dataclasses import dataclass
import math

import scipy.constants as _codata

SECONDS_PER_YEAR = 3.156e7


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants; defaults are the CODATA values shipped with scipy."""

    hbar: float = _codata.hbar
    k_B: float = _codata.k
    mu0: float = _codata.mu_0
    e_charge: float = _codata.e
    m_electron: float = _codata.m_e

    def __post_init__(self):
        for name in ("hbar", "k_B", "mu0", "e_charge", "m_electron"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


CONST = PhysicalConstants()
