"""Order-of-magnitude estimators for observing quantum interference and quantization.

Each estimator is evaluated on :class:`~scring.units.Quantity` values so the
unit of every reported number is checked, not just asserted.
"""

from dataclasses import dataclass, field, asdict
import math

from .constants import CONST, SECONDS_PER_YEAR
from .ringcore import level_spacing_condensate
from .units import q

HBAR = q(CONST.hbar, "J s")
K_B = q(CONST.k_B, "J/K")


def interference_time_constant(g):
    """g / (2 pi hbar) in s/m^5."""
    if not g > 0:
        raise ValueError("mass density must be positive")
    return (q(g, "kg/m^3") / (2 * math.pi * HBAR)).to("s/m^5")


def interference_time(a, g):
    """Minimum two-slit experiment duration a^5 g / (2 pi hbar) for size ``a``.

    Uses the particle mass m = g a^3.
    """
    if not (a > 0 and g > 0):
        raise ValueError("size and density must be positive")
    t = q(a, "m") ** 5 * q(g, "kg/m^3") / (2 * math.pi * HBAR)
    return t.to("s")


def ring_temperature_threshold(m, r):
    """hbar^2 / (2 m r^2 k_B): temperature below which the Bohr ladder is resolved."""
    if not (m > 0 and r > 0):
        raise ValueError("mass and radius must be positive")
    return (HBAR**2 / (2 * q(m, "kg") * q(r, "m") ** 2 * K_B)).to("K")


def object_threshold_coefficient(g):
    """hbar^2 / (2 g k_B), the K m^5 coefficient for an object ring of size a (m = g a^3, r = a)."""
    if not g > 0:
        raise ValueError("mass density must be positive")
    return (HBAR**2 / (2 * q(g, "kg/m^3") * K_B)).to("K m^5")


def object_temperature_threshold(a, g):
    return ring_temperature_threshold(g * a**3, a)


def condensate_temperature_threshold(ring, material):
    return level_spacing_condensate(ring, material) / CONST.k_B


def velocity_uncertainty_bound(m):
    """hbar / 2m in m^2/s."""
    if not m > 0:
        raise ValueError("mass must be positive")
    return (HBAR / (2 * q(m, "kg"))).to("m^2/s")


@dataclass
class UncertaintyEstimate:
    v_z: float
    dv_z: float
    product: float
    bound: float = None
    verdict: str = None


def uncertainty_product(z, t, dz, dt, m=None):
    """Time-of-flight position/velocity uncertainty product.

    v_z = z/t is measured from two positions and two times with
    inaccuracies ``dz`` and ``dt``; Dz Dv_z = Dz v_z (Dz/z + Dt/t). With a
    mass the product is compared against hbar/2m.
    """
    if not (z > 10 * dz and t > 10 * dt and dz > 0 and dt > 0):
        raise ValueError("estimate invalid outside z>>dz regime (requires z > 10 dz and t > 10 dt)")
    v = q(z, "m") / q(t, "s")
    dv = v * (q(dz, "m") / q(z, "m") + q(dt, "s") / q(t, "s"))
    product = (q(dz, "m") * dv).to("m^2/s")
    est = UncertaintyEstimate(v_z=v.to("m/s"), dv_z=dv.to("m/s"), product=product)
    if m is not None:
        est.bound = velocity_uncertainty_bound(m)
        est.verdict = "violates hbar/2m bound" if product < est.bound else "respects hbar/2m bound"
    return est


def violation_distance(dz, dt, v, m):
    """Flight distance beyond which the product drops below hbar/2m.

    With t = z/v the product is dz v (dz + v dt) / z.
    """
    return dz * v * (dz + v * dt) / velocity_uncertainty_bound(m)


@dataclass
class Entry:
    name: str
    value: float
    unit: str
    formula: str
    inputs: dict = field(default_factory=dict)
    quoted: float = None
    quoted_text: str = None
    tolerance_factor: float = None
    verdict: str = None
    note: str = None

    @property
    def ratio(self):
        if self.quoted is None:
            return None
        return self.value / self.quoted

    @property
    def agrees(self):
        if self.quoted is None or self.tolerance_factor is None:
            return None
        return 1 / self.tolerance_factor <= self.ratio <= self.tolerance_factor


@dataclass
class FeasibilityReport:
    inputs: dict
    entries: list = field(default_factory=list)

    def add(self, **kw):
        entry = Entry(**kw)
        self.entries.append(entry)
        return entry

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self):
        rows = []
        for e in self.entries:
            d = asdict(e)
            d["ratio_to_quoted"] = e.ratio
            d["agrees_with_quoted"] = e.agrees
            rows.append(d)
        return {"inputs": self.inputs, "entries": rows}

    def to_text(self):
        head = f"{'quantity':<40} {'value':>12} {'unit':<7} {'quoted':>10} {'ratio':>7}  verdict"
        lines = [head, "-" * len(head)]
        for e in self.entries:
            quoted = f"{e.quoted:10.3g}" if e.quoted is not None else " " * 10
            ratio = f"{e.ratio:7.3g}" if e.ratio is not None else " " * 7
            verdict = e.verdict or ""
            if e.agrees is not None:
                verdict = (verdict + "; " if verdict else "") + ("agrees" if e.agrees else "DISAGREES")
            lines.append(f"{e.name:<40} {e.value:12.4g} {e.unit:<7} {quoted} {ratio}  {verdict}")
        lines.append("")
        lines.append("formulas:")
        for e in self.entries:
            lines.append(f"  {e.name}: {e.formula}")
            if e.note:
                lines.append(f"    note: {e.note}")
        return "\n".join(lines) + "\n"


# quoted lower bounds on the experiment duration, seconds
QUOTED_TIMES = {4e-8: 1.0, 1e-6: SECONDS_PER_YEAR, 1e-5: 3000 * SECONDS_PER_YEAR, 1e-4: 3e8 * SECONDS_PER_YEAR}


ESTIMATORS = ("interference_time", "temperature_threshold", "uncertainty", "condensate")


def build_report(density=1e3, sizes=(4e-8, 1e-6, 1e-5, 1e-4), ring_mass=CONST.m_electron,
                 ring_radius=1e-6, object_size=1e-7, uncertainty=None, condensate=None,
                 estimators=ESTIMATORS):
    """Evaluate the requested estimators and compare with the quoted reference values.

    ``uncertainty`` is a dict with ``z, t, dz, dt, m``; ``condensate`` a
    ``(ring, material)`` pair. Requested estimators missing their inputs
    raise ``KeyError`` naming the key.
    """
    estimators = tuple(estimators)
    if not estimators:
        raise ValueError("at least one estimator must be requested")
    unknown = [e for e in estimators if e not in ESTIMATORS]
    if unknown:
        raise KeyError(f"estimators: unknown estimator {unknown[0]!r}")
    report = FeasibilityReport(inputs={
        "density_kg_m3": density,
        "sizes_m": list(sizes),
        "ring_mass_kg": ring_mass,
        "ring_radius_m": ring_radius,
        "object_size_m": object_size,
        "uncertainty": uncertainty,
        "year_s": SECONDS_PER_YEAR,
    })

    if "interference_time" in estimators:
        _add_interference(report, density, sizes)
    if "temperature_threshold" in estimators:
        _add_thresholds(report, density, ring_mass, ring_radius, object_size)
    if "uncertainty" in estimators:
        if uncertainty is None:
            raise KeyError("uncertainty: missing key 'uncertainty'")
        _add_uncertainty(report, uncertainty)
    if "condensate" in estimators:
        if condensate is None:
            raise KeyError("condensate: missing key 'condensate'")
        _add_condensate(report, *condensate)
    return report


def _add_interference(report, density, sizes):
    report.add(
        name="interference_time_constant", value=interference_time_constant(density),
        unit="s/m^5", formula="g / (2 pi hbar)", inputs={"g": density},
        quoted=1.5e36, quoted_text="g/2 pi hbar ~ 1.5e36 s/m^5", tolerance_factor=10.0,
    )
    for a in sizes:
        t = interference_time(a, density)
        years = t / SECONDS_PER_YEAR
        quoted = QUOTED_TIMES.get(a)
        entry = report.add(
            name=f"interference_time(a={a:g} m)", value=t, unit="s",
            formula="a^5 g / (2 pi hbar), particle mass g a^3", inputs={"a": a, "g": density},
            verdict=f"{years:.3g} years; " + ("exceeds 1 year" if years > 1 else "under 1 year"),
        )
        if quoted is not None:
            entry.quoted = quoted
            entry.quoted_text = f"t_exp > {quoted:g} s"
            entry.tolerance_factor = 3.0 if a == 1e-4 else 10.0
        if a == 1e-6:
            entry.tolerance_factor = None
            entry.verdict += "; quoted value inconsistent with formula (flagged)"
            entry.note = ("quoted 't_exp > 1 year' is inconsistent with the formula, "
                          f"which gives {t:.3g} s ({t / 86400:.3g} days); formula value reported")


def _add_thresholds(report, density, ring_mass, ring_radius, object_size):
    dE = CONST.hbar**2 / (2 * ring_mass * ring_radius**2)
    report.add(
        name="level_spacing(electron ring)", value=dE, unit="J",
        formula="hbar^2 / (2 m r^2)", inputs={"m": ring_mass, "r": ring_radius},
        quoted=5e-27, quoted_text="Delta E ~ 5e-27 J", tolerance_factor=1.3,
    )
    report.add(
        name="temperature_threshold(electron ring)",
        value=ring_temperature_threshold(ring_mass, ring_radius), unit="K",
        formula="hbar^2 / (2 m r^2 k_B)", inputs={"m": ring_mass, "r": ring_radius},
        quoted=4e-4, quoted_text="T < 0.0004 K", tolerance_factor=10.0,
    )
    report.add(
        name="object_threshold_coefficient", value=object_threshold_coefficient(density),
        unit="K m^5", formula="hbar^2 / (2 g k_B)", inputs={"g": density},
        quoted=3e-49, quoted_text="3e-49 / a^5 K/m^5", tolerance_factor=10.0,
    )
    report.add(
        name=f"temperature_threshold(object a={object_size:g} m)",
        value=object_temperature_threshold(object_size, density), unit="K",
        formula="hbar^2 / (2 g a^5 k_B), m = g a^3, r = a",
        inputs={"a": object_size, "g": density},
        quoted=3e-14, quoted_text="3e-14 K at a = 1e-7 m", tolerance_factor=10.0,
    )


def _add_uncertainty(report, u):
    missing = [k for k in ("z", "t", "dz", "dt") if u.get(k) is None]
    if missing:
        raise KeyError(f"uncertainty: missing key {missing[0]!r}")
    if u.get("m") is None:
        raise KeyError("uncertainty: missing key 'm' (mass needed for the hbar/2m verdict)")
    est = uncertainty_product(u["z"], u["t"], u["dz"], u["dt"], u["m"])
    report.add(
        name="velocity_uncertainty_bound", value=est.bound, unit="m^2/s",
        formula="hbar / 2m", inputs={"m": u["m"]},
        quoted=0.3e-10, quoted_text="hbar/2m ~ 0.3e-10 m^2/s", tolerance_factor=10.0,
    )
    report.add(
        name="position_speed_product", value=u["dz"] * est.v_z, unit="m^2/s",
        formula="dz v_z, v_z = z / t", inputs={"dz": u["dz"], "v_z": est.v_z},
        quoted=1e-4, quoted_text="dz v_z < 1e-4 m^2/s", tolerance_factor=10.0,
    )
    z_min = violation_distance(u["dz"], u["dt"], est.v_z, u["m"])
    report.add(
        name="uncertainty_product", value=est.product, unit="m^2/s",
        formula="dz v_z (dz/z + dt/t)", inputs=dict(u),
        verdict=est.verdict + " (as argued from the time-of-flight estimate)",
        note=f"product falls below hbar/2m for z > {z_min:.3g} m at these dz, dt",
    )
    report.add(
        name="violation_distance", value=z_min, unit="m",
        formula="dz v (dz + v dt) / (hbar/2m)", inputs=dict(u),
    )


def _add_condensate(report, ring, material):
    T = condensate_temperature_threshold(ring, material)
    report.add(
        name="condensate_temperature_threshold", value=T, unit="K",
        formula="N_s hbar^2 / (2 m r^2 k_B)",
        inputs={"N_s": ring.N_s, "r": ring.radius, "m": material.m_pair},
        verdict="far above 10 K" if T > 10 else "below 10 K",
    )
