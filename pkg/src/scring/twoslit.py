"""Two-slit Aharonov-Bohm interference with an ideal solenoid between the slits.

The enclosed flux adds ``2 pi Phi / Phi0`` to the far-field path phase
difference ``2 pi d y / (lambda L)``. With that sign convention the fringe
system moves towards negative ``y``: ``P(y; Phi) = P(y + flux_shift; 0)``.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import stats

from .constants import CONST
from .ringcore import flux_quantum


@dataclass(frozen=True)
class InterferenceSetup:
    slit_separation: float
    screen_distance: float
    slit_width: float
    particle_mass: float
    particle_speed: float
    enclosed_flux: float = 0.0
    particle_charge: float = CONST.e_charge
    envelope: str = "uniform"

    def __post_init__(self):
        if not self.slit_separation > self.slit_width > 0:
            raise ValueError("slits require slit_separation > slit_width > 0")
        if not self.screen_distance > 0:
            raise ValueError("screen_distance must be positive")
        if not (self.particle_mass > 0 and self.particle_speed > 0):
            raise ValueError("particle mass and speed must be positive")
        if self.particle_charge == 0:
            raise ValueError("particle_charge must be non-zero")
        if self.envelope not in ("uniform", "single-slit"):
            raise ValueError(f"envelope must be 'uniform' or 'single-slit', got {self.envelope!r}")

    @property
    def wavelength(self):
        return de_broglie_wavelength(self.particle_mass, self.particle_speed)

    @property
    def fringe_period(self):
        return self.wavelength * self.screen_distance / self.slit_separation

    @property
    def flux_ratio(self):
        return self.enclosed_flux / flux_quantum(self.particle_charge)

    @property
    def far_field(self):
        """Fraunhofer condition L >> d^2 / lambda (taken as a factor 10)."""
        return self.screen_distance > 10 * self.slit_separation**2 / self.wavelength


@dataclass
class Pattern:
    y: np.ndarray
    intensity: np.ndarray
    fringe_period: float
    flux_shift: float


def de_broglie_wavelength(m, v):
    if not (m > 0 and v > 0):
        raise ValueError("mass and speed must be positive")
    return 2 * math.pi * CONST.hbar / (m * v)


def phase_difference(setup, y):
    """Geometric far-field phase plus the Aharonov-Bohm term 2 pi Phi/Phi0."""
    y = np.asarray(y, dtype=float)
    return 2 * math.pi * (y / setup.fringe_period + setup.flux_ratio)


def _amplitude(setup, y):
    if setup.envelope == "uniform":
        return np.ones_like(y)
    return np.sinc(setup.slit_width * y / (setup.wavelength * setup.screen_distance))


def intensity(setup, y):
    """|psi1|^2 + |psi2|^2 + 2 |psi1| |psi2| cos(phase difference)."""
    y = np.asarray(y, dtype=float)
    # whole flux quanta drop out before the cosine, so Phi and Phi + k Phi0
    # give identical values
    frac = setup.flux_ratio % 1.0
    dphi = 2 * math.pi * (y / setup.fringe_period + frac)
    amp = _amplitude(setup, y)
    return np.maximum(2 * amp**2 * (1 + np.cos(dphi)), 0.0)


def pattern(setup, y_min, y_max, n_points):
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    if not y_min < y_max:
        raise ValueError("y_min must be < y_max")
    if not setup.far_field:
        warnings.warn("screen distance violates the far-field condition", RuntimeWarning, stacklevel=2)
    y = np.linspace(y_min, y_max, n_points)
    return Pattern(
        y=y,
        intensity=intensity(setup, y),
        fringe_period=setup.fringe_period,
        flux_shift=setup.flux_ratio * setup.fringe_period,
    )


def pattern_cdf(pat):
    """Cumulative probability at the grid points (trapezoidal, normalized)."""
    f = np.asarray(pat.intensity, dtype=float)
    cells = 0.5 * (f[1:] + f[:-1]) * np.diff(pat.y)
    total = cells.sum()
    if not total > 0:
        raise ValueError("pattern has zero total intensity")
    return np.concatenate([[0.0], np.cumsum(cells)]) / total


def sample_detections(pat, count, seed=None):
    """Draw ``count`` screen positions with density proportional to the pattern.

    The density is the linear interpolant of the sampled intensity; each
    uniform variate is mapped through the exact inverse of its integral.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    f = np.asarray(pat.intensity, dtype=float)
    y = np.asarray(pat.y, dtype=float)
    cdf = pattern_cdf(pat)
    rng = np.random.default_rng(seed)
    u = rng.random(count)

    cell = np.clip(np.searchsorted(cdf, u, side="right") - 1, 0, y.size - 2)
    # skip zero-mass cells that share a cdf value with their neighbour
    mass = cdf[cell + 1] - cdf[cell]
    h = y[cell + 1] - y[cell]
    f0, f1 = f[cell], f[cell + 1]
    frac = np.where(mass > 0, (u - cdf[cell]) / np.where(mass > 0, mass, 1.0), 0.0)
    c = frac * 0.5 * (f0 + f1)
    # solve f0 s + (f1 - f0) s^2 / 2 = c for s in [0, 1]
    root = np.sqrt(np.maximum(f0 * f0 + 2 * (f1 - f0) * c, 0.0))
    denom = f0 + root
    s = np.where(denom > 0, 2 * c / np.where(denom > 0, denom, 1.0), 0.0)
    return y[cell] + np.clip(s, 0.0, 1.0) * h


def ks_uniform(samples, y_min, y_max):
    """Kolmogorov-Smirnov test of samples against U(y_min, y_max)."""
    return stats.kstest(samples, stats.uniform(loc=y_min, scale=y_max - y_min).cdf)


def chi_square_fit(pat, samples, n_bins=50, min_expected=5.0):
    """Histogram chi-square goodness of fit of samples against the pattern.

    Bins with expected count below ``min_expected`` are merged into their
    neighbour. Returns ``(statistic, dof, p_value)``.
    """
    samples = np.asarray(samples, dtype=float)
    edges = np.linspace(pat.y[0], pat.y[-1], n_bins + 1)
    cdf_at_edges = _cdf_at(pat, edges)
    expected = np.diff(cdf_at_edges) * samples.size
    observed, _ = np.histogram(samples, bins=edges)

    obs_m, exp_m = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_m.append(o_acc)
            exp_m.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        obs_m[-1] += o_acc
        exp_m[-1] += e_acc
    obs_m, exp_m = np.array(obs_m), np.array(exp_m)
    statistic = float(np.sum((obs_m - exp_m) ** 2 / exp_m))
    dof = obs_m.size - 1
    return statistic, dof, float(stats.chi2.sf(statistic, dof))


def _cdf_at(pat, points):
    """Exact CDF of the linear-interpolant density at arbitrary points."""
    y = np.asarray(pat.y, float)
    f = np.asarray(pat.intensity, float)
    cdf = pattern_cdf(pat)
    total = (0.5 * (f[1:] + f[:-1]) * np.diff(y)).sum()
    points = np.clip(points, y[0], y[-1])
    cell = np.clip(np.searchsorted(y, points, side="right") - 1, 0, y.size - 2)
    h = y[cell + 1] - y[cell]
    s = (points - y[cell]) / h
    f0, f1 = f[cell], f[cell + 1]
    partial = h * (f0 * s + 0.5 * (f1 - f0) * s * s) / total
    return cdf[cell] + partial
