"""Event-driven simulation of a ring whose segment switches normal/superconducting.

Between events the circulating current is evaluated in closed form: constant
while the ring is closed, ``I exp(-t / tau)`` with ``tau = L / R_s`` while the
segment is normal. At every closing the current is reset to the quantized
value of the selected winding number and the circulation kick
``2 pi hbar (n - x)`` is recorded.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from . import _backend
from . import io as _io
from .constants import CONST
from .ringcore import (
    equilibrium_n,
    flux_quantum,
    fluxoid_solve,
    loop_inductance,
    thermal_distribution,
)

RESOLUTION_LIMIT = 1e-6
MIN_CYCLES = 10


class ResolutionWarning(UserWarning):
    """Switching intervals are shorter than the resolution limit."""


@dataclass(frozen=True)
class SwitchSchedule:
    """When the segment opens (goes normal) and closes again.

    ``periodic``: one opening per period ``1/omega_sw`` lasting
    ``duty_normal/omega_sw``. ``poisson``: alternating exponential dwell
    times with means ``(1 - duty_normal)/omega_sw`` (closed) and
    ``duty_normal/omega_sw`` (normal), so the mean closing rate is
    ``omega_sw`` in both modes.
    """

    mode: str
    omega_sw: float
    duration: float
    duty_normal: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("periodic", "poisson"):
            raise ValueError(f"mode must be 'periodic' or 'poisson', got {self.mode!r}")
        if not self.omega_sw > 0:
            raise ValueError("omega_sw must be positive")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if not 0 < self.duty_normal < 1:
            raise ValueError("duty_normal must lie in (0, 1)")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class SegmentSpec:
    R_s: float
    l_s: float

    def __post_init__(self):
        if not self.R_s > 0:
            raise ValueError("R_s must be positive")
        if not self.l_s > 0:
            raise ValueError("l_s must be positive")


@dataclass
class SwitchTrace:
    """Result of one :func:`simulate` run.

    Normal interval ``k`` spans ``[open_times[k], close_times[k])``;
    ``levels[k]`` is the current entering it and ``levels[k + 1]`` the
    quantized current after its closing. A final interval cut by the end of
    the run has ``closed[k] == False``, no kick, and its decayed end value
    as the last level.
    """

    duration: float
    x: float
    L: float
    R_s: float
    tau: float
    open_times: np.ndarray
    close_times: np.ndarray
    closed: np.ndarray
    levels: np.ndarray
    end_currents: np.ndarray
    n_selected: np.ndarray
    kick_momenta: np.ndarray
    sample_time: np.ndarray
    sample_current: np.ndarray
    sample_voltage: np.ndarray
    params: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    @property
    def events(self):
        ev = [(float(t), "open") for t in self.open_times]
        ev += [(float(t), "close") for t, c in zip(self.close_times, self.closed) if c]
        return sorted(ev)

    @property
    def samples(self):
        return np.column_stack([self.sample_time, self.sample_current, self.sample_voltage])

    @property
    def n_closings(self):
        return int(np.count_nonzero(self.closed))

    @property
    def interval_charges(self):
        """Integral of the segment voltage over each normal interval."""
        return self.L * (self.levels[: self.open_times.size] - self.end_currents)


def _periodic_events(schedule):
    period = 1.0 / schedule.omega_sw
    # count openings by index so round-off at t = duration cannot add one
    n_opens = math.ceil(schedule.duration * schedule.omega_sw * (1 - 1e-12))
    opens = np.arange(n_opens) * period
    return opens, opens + schedule.duty_normal * period


def _poisson_events(schedule, rng):
    mean_sc = (1 - schedule.duty_normal) / schedule.omega_sw
    mean_n = schedule.duty_normal / schedule.omega_sw
    expected = schedule.duration * schedule.omega_sw
    batch = int(expected + 6 * math.sqrt(expected) + 16)
    opens, closes = [], []
    t = 0.0
    while t < schedule.duration:
        dwell = rng.exponential(1.0, size=(batch, 2)) * (mean_sc, mean_n)
        edges = t + np.cumsum(dwell.ravel())
        opens.append(edges[0::2])
        closes.append(edges[1::2])
        t = edges[-1]
    opens = np.concatenate(opens)
    closes = np.concatenate(closes)
    keep = opens < schedule.duration
    return opens[keep], closes[keep]


def _select_winding(count, x, rng, n_selection, doublet, T, ring, material):
    """Winding numbers for the initial state followed by each closing."""
    if n_selection == "thermal":
        ns, probs = thermal_distribution(x, T, ring, material)
        return rng.choice(ns, size=count, p=probs).astype(np.int64)
    if n_selection != "equilibrium":
        raise ValueError(f"n_selection must be 'equilibrium' or 'thermal', got {n_selection!r}")
    n_star, degenerate = equilibrium_n(x)
    chosen = np.full(count, n_star, dtype=np.int64)
    if degenerate:
        if doublet == "alternate":
            chosen += np.arange(count) % 2
        elif doublet == "sample":
            chosen += rng.integers(0, 2, size=count)
        elif doublet != "lower":
            raise ValueError(f"unknown doublet rule {doublet!r}")
    return chosen


def simulate(ring, material, T, phi_ext, segment, schedule, sample_dt=None,
             n_selection="equilibrium", doublet="auto"):
    """Run the switching simulation and return a :class:`SwitchTrace`.

    ``doublet`` resolves the half-integer degeneracy: ``lower``, ``alternate``
    (deterministic), ``sample`` (50/50 from the seeded generator) or ``auto``
    (alternate for periodic schedules, sample for poisson). ``sample_dt=None``
    skips the sampled time series; event data and integrals are unaffected.
    """
    if not segment.l_s < ring.circumference:
        raise ValueError("segment length must be shorter than the ring circumference")
    if sample_dt is not None and not sample_dt > 0:
        raise ValueError("sample_dt must be positive")
    if doublet == "auto":
        doublet = "alternate" if schedule.mode == "periodic" else "sample"

    L = loop_inductance(ring, material, T)
    tau = L / segment.R_s
    phi0 = flux_quantum(material.q_pair)
    x = phi_ext / phi0
    rng = np.random.default_rng(int(schedule.seed))

    if schedule.mode == "periodic":
        opens, closes = _periodic_events(schedule)
    else:
        opens, closes = _poisson_events(schedule, rng)
    closed = closes < schedule.duration
    closes = np.where(closed, closes, schedule.duration)
    n_closings = int(np.count_nonzero(closed))

    n_sel = _select_winding(n_closings + 1, x, rng, n_selection, doublet, T, ring, material)
    levels, _ = fluxoid_solve(ring, material, T, phi_ext, n_sel)
    levels = np.asarray(levels, dtype=float)
    end_currents = levels[: opens.size] * np.exp(-(closes - opens) / tau)
    if levels.size == opens.size:
        # run ends inside a normal interval: hold the decayed value
        levels = np.append(levels, end_currents[-1])
    kicks = 2 * math.pi * CONST.hbar * (n_sel[1:] - x)

    notes = []
    gaps = np.concatenate([
        (closes - opens)[closed],
        opens[1:] - closes[:-1],
    ])
    if gaps.size and gaps.min() < RESOLUTION_LIMIT * tau:
        notes.append(f"switching interval {gaps.min():.3e} s below {RESOLUTION_LIMIT:g} tau")
        warnings.warn(notes[-1], ResolutionWarning, stacklevel=2)

    if sample_dt is None:
        t = I = V = np.empty(0)
    else:
        t = np.arange(math.ceil(schedule.duration / sample_dt)) * sample_dt
        t = t[t < schedule.duration]
        I, V = _backend.evaluate_trace(
            np.ascontiguousarray(t), opens, closes, levels, tau, segment.R_s
        )

    params = {
        "backend": _backend.BACKEND,
        "mode": schedule.mode,
        "omega_sw": schedule.omega_sw,
        "duty_normal": schedule.duty_normal,
        "seed": int(schedule.seed),
        "duration": schedule.duration,
        "T": T,
        "phi_ext": phi_ext,
        "flux_quantum": phi0,
        "x": x,
        "L": L,
        "L_geom": ring.L_geom,
        "R_s": segment.R_s,
        "l_s": segment.l_s,
        "tau": tau,
        "n_selection": n_selection,
        "doublet": doublet,
        "sample_dt": sample_dt,
    }
    return SwitchTrace(
        duration=schedule.duration, x=x, L=L, R_s=segment.R_s, tau=tau,
        open_times=opens, close_times=closes, closed=closed, levels=levels,
        end_currents=end_currents, n_selected=n_sel, kick_momenta=kicks,
        sample_time=t, sample_current=I, sample_voltage=V,
        params=params, warnings=notes,
    )


def relax_current(I0, t, tau):
    """I0 exp(-t / tau): current left after ``t`` of normal-state relaxation."""
    if not tau > 0:
        raise ValueError("tau must be positive")
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be >= 0")
    return I0 * np.exp(-np.asarray(t) / tau)


def relaxation_time(L_total, R_s):
    if not (L_total > 0 and R_s > 0):
        raise ValueError("inductance and resistance must be positive")
    return L_total / R_s


def closing_kick(n, x):
    if not math.isfinite(x):
        raise ValueError("flux ratio must be finite")
    return 2 * math.pi * CONST.hbar * (n - x)


def _check_nonempty(trace):
    if trace.open_times.size == 0 and trace.sample_time.size == 0:
        raise ValueError("empty trace")


def v_dc(trace):
    """Time-averaged segment voltage, integrated exactly interval by interval."""
    _check_nonempty(trace)
    if trace.n_closings < MIN_CYCLES:
        warnings.warn(f"only {trace.n_closings} switching cycles in trace", RuntimeWarning, stacklevel=2)
    return math.fsum(trace.interval_charges) / trace.duration


def v_dc_stderr(trace):
    """Standard error of :func:`v_dc` from the spread of per-interval charges."""
    q = trace.interval_charges
    if q.size < 2:
        return math.inf
    return math.sqrt(q.size) * float(np.std(q, ddof=1)) / trace.duration


def mean_current(trace):
    """Time-averaged circulating current over the whole run."""
    _check_nonempty(trace)
    k = trace.open_times.size
    starts = np.concatenate([[0.0], trace.close_times])
    ends = np.concatenate([trace.open_times, [trace.duration]])
    held = math.fsum(trace.levels[: k + 1] * np.maximum(ends - starts, 0.0))
    decaying = math.fsum(trace.tau * (trace.levels[:k] - trace.end_currents))
    return (held + decaying) / trace.duration


def quantum_force_circulation(trace):
    """Circulation kicks per unit time, sum(2 pi hbar (n - x)) / duration."""
    if trace.n_closings == 0:
        raise ValueError("trace has no closings")
    return math.fsum(trace.kick_momenta) / trace.duration


def expected_force_circulation(trace):
    """2 pi hbar (n_bar - x) omega_eff from the realized closings."""
    if trace.n_closings == 0:
        raise ValueError("trace has no closings")
    n_bar = float(np.mean(trace.n_selected[1:]))
    omega_eff = trace.n_closings / trace.duration
    return 2 * math.pi * CONST.hbar * (n_bar - trace.x) * omega_eff


def vdc_vs_flux(ring, material, T, segment, schedule, x_grid, **kwargs):
    """V_dc at each flux ratio in ``x_grid``; every point reuses ``schedule.seed``."""
    x_grid = np.asarray(x_grid, dtype=float)
    if x_grid.size == 0:
        raise ValueError("flux grid is empty")
    phi0 = flux_quantum(material.q_pair)
    kwargs.setdefault("sample_dt", None)
    out = np.empty(x_grid.size)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for i, x in enumerate(x_grid):
            trace = simulate(ring, material, T, x * phi0, segment, schedule, **kwargs)
            out[i] = v_dc(trace)
    return out


def export_trace(trace, csv_path, json_path=None):
    """Write the sampled trace CSV and, optionally, the event/parameter sidecar."""
    if csv_path is not None:
        _io.write_csv(
            csv_path,
            ["time_s", "current_A", "voltage_V"],
            [trace.sample_time, trace.sample_current, trace.sample_voltage],
        )
    if json_path is not None:
        _io.write_json(json_path, {
            "parameters": trace.params,
            "events": [{"time_s": t, "kind": kind} for t, kind in trace.events],
            "n_selected": trace.n_selected,
            "kick_momenta_Js": trace.kick_momenta,
            "warnings": trace.warnings,
        })
