"""Stationary theory of a flux-biased superconducting ring.

Material and geometry types, the quantized velocity ladder, the fluxoid
solver, the Phi0-periodic persistent current, London screening and thermal
occupation of the winding-number ladder. All quantities are SI.
"""

from dataclasses import dataclass, fields
import json
import math

import numpy as np

from . import _backend
from .constants import CONST

# |frac(x) - 1/2| below this counts as the degenerate doublet
DEGENERACY_TOL = 1e-9

# boundary Boltzmann weight relative to the peak
_WINDOW_CUTOFF = 1e-18
_MIN_WINDOW = 10
# below this spacing/k_B T ratio the mean equals x to double precision
_CLASSICAL_LIMIT = 0.01


@dataclass(frozen=True)
class MaterialSpec:
    """Superconductor parameters.

    Give either ``lambda_L0`` or ``n_s0``; the other is derived from
    ``lambda_L0**2 * mu0 * q_pair**2 * n_s0 == m_pair``. Supplying both
    requires them to satisfy that relation to 1e-9 relative.
    """

    T_c: float
    lambda_L0: float = None
    n_s0: float = None
    q_pair: float = 2 * CONST.e_charge
    m_pair: float = 2 * CONST.m_electron

    def __post_init__(self):
        if not self.T_c > 0:
            raise ValueError(f"T_c must be positive, got {self.T_c!r}")
        if self.q_pair == 0:
            raise ValueError("q_pair must be non-zero")
        if not self.m_pair > 0:
            raise ValueError(f"m_pair must be positive, got {self.m_pair!r}")
        if self.lambda_L0 is None and self.n_s0 is None:
            raise ValueError("one of lambda_L0 or n_s0 is required")

        ratio = self.m_pair / (CONST.mu0 * self.q_pair**2)
        if self.n_s0 is None:
            if not self.lambda_L0 > 0:
                raise ValueError(f"lambda_L0 must be positive, got {self.lambda_L0!r}")
            object.__setattr__(self, "n_s0", ratio / self.lambda_L0**2)
        elif self.lambda_L0 is None:
            if not self.n_s0 > 0:
                raise ValueError(f"n_s0 must be positive, got {self.n_s0!r}")
            object.__setattr__(self, "lambda_L0", math.sqrt(ratio / self.n_s0))
        else:
            if not (self.lambda_L0 > 0 and self.n_s0 > 0):
                raise ValueError("lambda_L0 and n_s0 must be positive")
            lhs = self.lambda_L0**2 * CONST.mu0 * self.q_pair**2 * self.n_s0
            if abs(lhs - self.m_pair) > 1e-9 * self.m_pair:
                raise ValueError(
                    "inconsistent material: lambda_L0^2 mu0 q^2 n_s0 != m_pair "
                    f"(relative mismatch {abs(lhs / self.m_pair - 1):.3e})"
                )


@dataclass(frozen=True)
class RingSpec:
    """Ring geometry.

    ``L_geom=None`` selects the thin circular loop estimate
    mu0 r (ln(8 r / a_w) - 2) with wire radius a_w = sqrt(s / pi).
    """

    radius: float
    cross_section: float
    wall_width: float
    N_s: float = 1.0
    L_geom: float = None

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius!r}")
        if not self.cross_section > 0:
            raise ValueError(f"cross_section must be positive, got {self.cross_section!r}")
        if not 0 < self.wall_width <= self.radius:
            raise ValueError("wall_width must satisfy 0 < wall_width <= radius")
        if not self.N_s >= 1:
            raise ValueError(f"N_s must be >= 1, got {self.N_s!r}")
        if self.L_geom is None:
            object.__setattr__(self, "L_geom", loop_inductance_estimate(self.radius, self.cross_section))
        elif not self.L_geom >= 0:
            raise ValueError(f"L_geom must be >= 0, got {self.L_geom!r}")

    @property
    def circumference(self):
        return 2 * math.pi * self.radius


@dataclass(frozen=True)
class RingState:
    n: int
    phi_ext: float
    T: float = 0.0

    def __post_init__(self):
        if not self.T >= 0:
            raise ValueError(f"T must be >= 0, got {self.T!r}")


def loop_inductance_estimate(radius, cross_section):
    a_w = math.sqrt(cross_section / math.pi)
    log_term = math.log(8 * radius / a_w) - 2
    if log_term <= 0:
        raise ValueError("loop inductance formula invalid for such a thick wire; supply L_geom")
    return CONST.mu0 * radius * log_term


def pair_count(ring, material, T=0.0):
    """Number of pairs n_s(T) * s * 2 pi r in the ring."""
    return pair_density(material, T) * ring.cross_section * ring.circumference


def _check_superconducting(material, T):
    if not T >= 0:
        raise ValueError(f"temperature must be >= 0, got {T!r}")
    if T >= material.T_c:
        raise ValueError("normal state: penetration depth undefined (T >= T_c)")


def pair_density(material, T):
    """n_s(T) = n_s0 (1 - T/T_c), the density law matching lambda_L(T)."""
    _check_superconducting(material, T)
    return material.n_s0 * (1 - T / material.T_c)


def lambda_L(material, T):
    """London penetration depth lambda_L(0) (1 - T/T_c)^(-1/2)."""
    _check_superconducting(material, T)
    return material.lambda_L0 / math.sqrt(1 - T / material.T_c)


def lambda_L_from_density(material, T):
    """Penetration depth from (m, q, n_s(T)); must agree with :func:`lambda_L`."""
    n_s = pair_density(material, T)
    return math.sqrt(material.m_pair / (CONST.mu0 * material.q_pair**2 * n_s))


def flux_quantum(q_pair):
    if q_pair == 0:
        raise ValueError("flux quantum undefined for zero charge")
    return 2 * math.pi * CONST.hbar / abs(q_pair)


def permitted_velocity(n, x, ring, material):
    """Pair velocity (hbar / r m)(n - x) of winding state ``n`` at flux ratio ``x``."""
    return CONST.hbar / (ring.radius * material.m_pair) * (np.subtract(n, x))


def velocity_spacing(ring, material):
    return CONST.hbar / (material.m_pair * ring.radius)


def equilibrium_n(x):
    """Winding number minimising (n - x)^2.

    Returns ``(n, degenerate)``. At half-integer ``x`` the lower of the two
    degenerate integers is returned with ``degenerate=True``. Accepts scalars
    or arrays.
    """
    xa = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xa)):
        raise ValueError("flux ratio must be finite")
    lower = np.floor(xa)
    frac = xa - lower
    degenerate = np.abs(frac - 0.5) <= DEGENERACY_TOL
    n = np.where(degenerate | (frac < 0.5), lower, lower + 1).astype(np.int64)
    if n.ndim == 0:
        return int(n), bool(degenerate)
    return n, degenerate


def level_spacing_single(m, r):
    """hbar^2 / (2 m r^2): spacing of the Bohr ladder for one particle."""
    if not (m > 0 and r > 0):
        raise ValueError("mass and radius must be positive")
    return CONST.hbar**2 / (2 * m * r**2)


def level_spacing_condensate(ring, material):
    # energy carries the whole-condensate mass N_s m, velocity spacing only m
    return ring.N_s * level_spacing_single(material.m_pair, ring.radius)


def state_energy(n, x, ring, material):
    return level_spacing_condensate(ring, material) * (np.subtract(n, x)) ** 2


def thermal_window(beta_dE):
    """Half-width K of the summation window around the flux ratio."""
    return max(_MIN_WINDOW, 1 + math.ceil(math.sqrt(-math.log(_WINDOW_CUTOFF) / beta_dE)))


def thermal_n_bar(x, T, ring, material):
    """Boltzmann-averaged winding number at flux ratio ``x`` and temperature ``T``.

    At ``T == 0`` this is :func:`equilibrium_n` (lower member at a tie).
    """
    if not T >= 0:
        raise ValueError(f"temperature must be >= 0, got {T!r}")
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if T == 0:
        out = equilibrium_n(xa)[0].astype(float)
    else:
        if not np.all(np.isfinite(xa)):
            raise ValueError("flux ratio must be finite")
        beta_dE = level_spacing_condensate(ring, material) / (CONST.k_B * T)
        if beta_dE < _CLASSICAL_LIMIT:
            out = xa.copy()
        else:
            out = _backend.boltzmann_mean(np.ascontiguousarray(xa), beta_dE, thermal_window(beta_dE))
    return float(out[0]) if scalar else out


def thermal_distribution(x, T, ring, material):
    """Winding numbers and Boltzmann probabilities around flux ratio ``x``."""
    if T <= 0:
        n, _ = equilibrium_n(x)
        return np.array([n]), np.array([1.0])
    beta_dE = level_spacing_condensate(ring, material) / (CONST.k_B * T)
    K = min(thermal_window(beta_dE), 10**6)
    base = math.floor(x)
    ns = np.arange(base - K, base + K + 2)
    u2 = (ns - x) ** 2
    w = np.exp(-beta_dE * (u2 - u2.min()))
    return ns, w / w.sum()


def kinetic_inductance(ring, material, T):
    """L_k = mu0 lambda_L(T)^2 2 pi r / s."""
    lam = lambda_L(material, T)
    return CONST.mu0 * lam**2 * ring.circumference / ring.cross_section


def kinetic_inductance_from_density(ring, material, T):
    """L_k = m 2 pi r / (q^2 n_s(T) s); algebraically equal to :func:`kinetic_inductance`."""
    n_s = pair_density(material, T)
    return material.m_pair * ring.circumference / (material.q_pair**2 * n_s * ring.cross_section)


def loop_inductance(ring, material, T):
    """Total inductance L_geom + L_k of the intact ring."""
    return ring.L_geom + kinetic_inductance(ring, material, T)


def fluxoid_solve(ring, material, T, phi_ext, n):
    """Circulating current and enclosed flux of winding state ``n``.

    Solves L_k I + Phi_total = n Phi0 with Phi_total = phi_ext + L_geom I.
    Returns ``(I, Phi_total)``.
    """
    L_k = kinetic_inductance(ring, material, T)
    phi0 = flux_quantum(material.q_pair)
    current = (np.multiply(n, phi0) - phi_ext) / (L_k + ring.L_geom)
    return current, phi_ext + ring.L_geom * current


def persistent_current(ring, material, T, phi_ext):
    """Equilibrium current I_p(phi_ext), a Phi0-periodic sawtooth.

    At the degenerate half-integer point the two doublet currents are equal
    and opposite and their mean, zero, is returned, keeping I_p odd about
    both integer and half-integer flux.
    """
    phi0 = flux_quantum(material.q_pair)
    phi = np.asarray(phi_ext, dtype=float)
    n, degenerate = equilibrium_n(phi / phi0)
    current, _ = fluxoid_solve(ring, material, T, phi, n)
    current = np.where(degenerate, 0.0, current)
    return float(current) if current.ndim == 0 else current


def screening_profile(j0, depth, lam):
    """Current density j0 exp(-depth / lambda) at ``depth`` below the surface."""
    if not lam > 0:
        raise ValueError("penetration depth must be positive")
    if np.any(np.asarray(depth) < 0):
        raise ValueError("depth must be >= 0")
    return j0 * np.exp(-np.asarray(depth) / lam)


def vortex_flux(n_vortices, q_pair=2 * CONST.e_charge):
    if n_vortices < 0:
        raise ValueError("vortex count must be >= 0")
    return n_vortices * flux_quantum(q_pair)


def _from_mapping(cls, data, where):
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise KeyError(f"{where}: unknown key {unknown[0]!r}")
    return cls(**data)


def material_from_dict(data, where="material"):
    return _from_mapping(MaterialSpec, data, where)


def ring_from_dict(data, where="ring"):
    return _from_mapping(RingSpec, data, where)


def load_preset(path):
    """Read ``{"material": {...}, "ring": {...}}`` from a JSON file."""
    with open(path) as fh:
        doc = json.load(fh)
    return material_from_dict(doc["material"]), ring_from_dict(doc["ring"])
