"""Command-line front end.

    scring <sweep|switchsim|interference|feasibility> [--config PATH]
           [--seed N] [--out DIR] [--format csv,json,svg] [--set KEY=VALUE ...]

Each subcommand starts from its shipped default document (``configs/``),
overlays the user config and ``--set`` overrides, and archives the resolved
document as ``run_config.json`` next to its outputs. Exit codes: 0 success,
2 configuration error, 3 numeric or domain error.
"""

import argparse
from dataclasses import dataclass
from importlib import resources
import json
import sys
import warnings

import numpy as np

from . import feasibility, io, ringcore, switchsim, twoslit
from ._backend import BACKEND

SUBCOMMANDS = ("sweep", "switchsim", "interference", "feasibility")
FORMATS = ("csv", "json", "svg")

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict
    out_dir: str
    seed: int
    formats: tuple


def default_config(subcommand):
    text = resources.files("scring").joinpath("configs", f"{subcommand}.json").read_text()
    return json.loads(text)


def _merge(base, update, path=""):
    for key, value in update.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"unknown key {where!r}")
        if isinstance(base[key], dict) and isinstance(value, dict):
            _merge(base[key], value, where)
        else:
            base[key] = value
    return base


def _apply_override(doc, assignment):
    if "=" not in assignment:
        raise ConfigError(f"--set expects KEY=VALUE, got {assignment!r}")
    dotted, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    update = value
    for part in reversed(dotted.split(".")):
        update = {part: update}
    _merge(doc, update)


def resolve_config(subcommand, config_path=None, overrides=(), seed=None):
    doc = default_config(subcommand)
    if config_path is not None:
        try:
            with open(config_path) as fh:
                user = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {config_path!r}: {exc}") from exc
        if not isinstance(user, dict):
            raise ConfigError("config document must be a JSON object")
        _merge(doc, user)
    for assignment in overrides:
        _apply_override(doc, assignment)
    if seed is not None:
        if subcommand == "switchsim":
            doc["schedule"]["seed"] = seed
        elif subcommand == "interference":
            doc["seed"] = seed
    return doc


def _build(cls_builder, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where!r} must be an object")
    kwargs = {k: v for k, v in data.items() if v is not None}
    try:
        return cls_builder(kwargs, where)
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def _material(data, where="material"):
    return _build(ringcore.material_from_dict, data, where)


def _ring(data, material, T, where="ring"):
    data = dict(data)
    if data.get("N_s") is None:
        # pair count of the ring itself when not given
        probe = _build(ringcore.ring_from_dict, {**data, "N_s": 1.0}, where)
        try:
            data["N_s"] = ringcore.pair_count(probe, material, T)
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    return _build(ringcore.ring_from_dict, data, where)


def _require(doc, key, where=""):
    if doc.get(key) is None:
        raise ConfigError(f"missing key {(where + '.' if where else '') + key!r}")
    return doc[key]


def _flux_grid(grid, where):
    if grid is None:
        raise ConfigError(f"missing key {where!r}")
    if grid.get("values") is not None:
        values = np.asarray(grid["values"], dtype=float)
        if values.size == 0:
            raise ConfigError(f"{where}.values is empty")
        return values
    try:
        n = int(_require(grid, "n_points", where))
        return np.linspace(float(_require(grid, "x_min", where)), float(_require(grid, "x_max", where)), n)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def run_sweep(cfg):
    p = cfg.params
    T = float(p["T"])
    material = _material(p["material"])
    ring = _ring(p["ring"], material, T)
    x = _flux_grid(p.get("flux_grid"), "flux_grid")

    phi0 = ringcore.flux_quantum(material.q_pair)
    phi = x * phi0
    n_eq, _ = ringcore.equilibrium_n(x)
    current = ringcore.persistent_current(ring, material, T, phi)
    n_bar = ringcore.thermal_n_bar(x, T, ring, material)
    files = []
    if "csv" in cfg.formats:
        io.write_csv(f"{cfg.out_dir}/sweep.csv",
                     ["x", "phi_ext_Wb", "n_eq", "current_A", "n_bar"],
                     [x, phi, n_eq, current, n_bar])
        files.append("sweep.csv")
    if "json" in cfg.formats:
        io.write_json(f"{cfg.out_dir}/sweep_summary.json", {
            "flux_quantum_Wb": phi0,
            "L_k_H": ringcore.kinetic_inductance(ring, material, T),
            "L_geom_H": ring.L_geom,
            "N_s": ring.N_s,
            "lambda_L_m": ringcore.lambda_L(material, T),
            "max_abs_current_A": float(np.max(np.abs(current))),
            "n_points": int(x.size),
        })
        files.append("sweep_summary.json")
    if "svg" in cfg.formats:
        io.write_svg(f"{cfg.out_dir}/sweep.svg", io.svg_plot(
            [(x, current, "I_p")], "flux / flux quantum", "current (A)", "persistent current"))
        files.append("sweep.svg")
    return files


def run_switchsim(cfg):
    p = cfg.params
    T = float(p["T"])
    material = _material(p["material"])
    ring = _ring(p["ring"], material, T)
    segment = _build(lambda d, w: switchsim.SegmentSpec(**d), _require(p, "segment"), "segment")
    schedule = _build(lambda d, w: switchsim.SwitchSchedule(**d), _require(p, "schedule"), "schedule")
    x = float(_require(p, "flux_ratio"))
    phi0 = ringcore.flux_quantum(material.q_pair)
    options = {"n_selection": p["n_selection"], "doublet": p["doublet"]}

    trace = switchsim.simulate(ring, material, T, x * phi0, segment, schedule,
                               sample_dt=p.get("sample_dt"), **options)
    Ip = ringcore.persistent_current(ring, material, T, x * phi0)
    vdc = switchsim.v_dc(trace)
    i_bar = switchsim.mean_current(trace)
    low = trace.L * schedule.omega_sw * Ip
    high = schedule.duty_normal * segment.R_s * i_bar
    summary = {
        "backend": BACKEND,
        "V_dc_V": vdc,
        "V_dc_stderr_V": switchsim.v_dc_stderr(trace),
        "I_p_A": Ip,
        "mean_current_A": i_bar,
        "L_H": trace.L,
        "tau_s": trace.tau,
        "omega_tau": schedule.omega_sw * trace.tau,
        "ratio_low_frequency": vdc / low if low else None,
        "ratio_high_frequency": vdc / high if high else None,
        "quantum_force_circulation": switchsim.quantum_force_circulation(trace) if trace.n_closings else None,
        "expected_force_circulation": switchsim.expected_force_circulation(trace) if trace.n_closings else None,
        "n_closings": trace.n_closings,
        "warnings": trace.warnings,
    }

    files = []
    if "csv" in cfg.formats and trace.sample_time.size:
        switchsim.export_trace(trace, f"{cfg.out_dir}/trace.csv")
        files.append("trace.csv")
    if "json" in cfg.formats:
        switchsim.export_trace(trace, None, f"{cfg.out_dir}/trace_events.json")
        io.write_json(f"{cfg.out_dir}/summary.json", summary)
        files += ["trace_events.json", "summary.json"]

    curve_cfg = p.get("vdc_curve")
    if curve_cfg is not None:
        grid = _flux_grid(curve_cfg, "vdc_curve")
        curve = switchsim.vdc_vs_flux(ring, material, T, segment, schedule, grid, **options)
        if "csv" in cfg.formats:
            io.write_csv(f"{cfg.out_dir}/vdc_curve.csv", ["x", "V_dc_V"], [grid, curve])
            files.append("vdc_curve.csv")
        if "svg" in cfg.formats:
            io.write_svg(f"{cfg.out_dir}/vdc_curve.svg", io.svg_plot(
                [(grid, curve, "V_dc")], "flux / flux quantum", "V_dc (V)", "rectified voltage"))
            files.append("vdc_curve.svg")
    if "svg" in cfg.formats and trace.sample_time.size:
        keep = min(trace.sample_time.size, 2000)
        io.write_svg(f"{cfg.out_dir}/trace.svg", io.svg_plot(
            [(trace.sample_time[:keep], trace.sample_current[:keep], "I")],
            "time (s)", "current (A)", "circulating current"))
        files.append("trace.svg")
    return files


def run_interference(cfg):
    p = cfg.params
    setup_doc = dict(_require(p, "setup"))
    if p.get("flux_ratio") is not None:
        if setup_doc.get("enclosed_flux") is not None:
            raise ConfigError("set only one of 'flux_ratio' and 'setup.enclosed_flux'")
        charge = setup_doc.get("particle_charge") or twoslit.InterferenceSetup.particle_charge
        setup_doc["enclosed_flux"] = p["flux_ratio"] * ringcore.flux_quantum(charge)
    setup = _build(lambda d, w: twoslit.InterferenceSetup(**d), setup_doc, "setup")
    try:
        y_min, y_max, n_points = float(p["y_min"]), float(p["y_max"]), int(p["n_points"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"grid: {exc}") from exc

    pat = twoslit.pattern(setup, y_min, y_max, n_points)
    summary = {
        "wavelength_m": setup.wavelength,
        "fringe_period_m": pat.fringe_period,
        "flux_ratio": setup.flux_ratio,
        "flux_shift_m": pat.flux_shift,
        "flux_shift_over_period": pat.flux_shift / pat.fringe_period,
        "far_field": setup.far_field,
    }
    files = []
    if "csv" in cfg.formats:
        io.write_csv(f"{cfg.out_dir}/pattern.csv", ["y_m", "intensity"], [pat.y, pat.intensity])
        files.append("pattern.csv")

    count = p.get("detections")
    hits = None
    if count:
        hits = twoslit.sample_detections(pat, int(count), seed=p.get("seed"))
        stat, dof, pval = twoslit.chi_square_fit(pat, hits, n_bins=int(p.get("chi2_bins") or 50))
        summary["chi_square"] = {"statistic": stat, "dof": dof, "p_value": pval,
                                 "passes_1pct": pval > 0.01, "count": int(count)}
        if "csv" in cfg.formats:
            io.write_csv(f"{cfg.out_dir}/detections.csv", ["index", "y_m"], [np.arange(hits.size), hits])
            files.append("detections.csv")
    if "json" in cfg.formats:
        io.write_json(f"{cfg.out_dir}/summary.json", summary)
        files.append("summary.json")
    if "svg" in cfg.formats:
        dots = None if hits is None else hits[: int(p.get("svg_dots") or 5000)]
        io.write_svg(f"{cfg.out_dir}/pattern.svg", io.svg_plot(
            [(pat.y, pat.intensity, "P(y)")], "screen position y (m)", "intensity",
            "two-slit pattern", dots=dots))
        files.append("pattern.svg")
    return files


def run_feasibility(cfg):
    p = cfg.params
    estimators = p.get("estimators") or ()
    if not estimators:
        raise ConfigError("missing key 'estimators' (request at least one estimator)")
    condensate = None
    if "condensate" in estimators:
        cdoc = _require(p, "condensate")
        material = _material(_require(cdoc, "material", "condensate"), "condensate.material")
        condensate = (_ring(_require(cdoc, "ring", "condensate"), material, 0.0, "condensate.ring"), material)
    try:
        report = feasibility.build_report(
            density=p["density"], sizes=tuple(p["sizes"]), ring_mass=p["ring_mass"],
            ring_radius=p["ring_radius"], object_size=p["object_size"],
            uncertainty=p.get("uncertainty"), condensate=condensate, estimators=estimators,
        )
    except KeyError as exc:
        raise ConfigError(exc.args[0]) from exc

    files = []
    if "json" in cfg.formats:
        io.write_json(f"{cfg.out_dir}/report.json", report.to_dict())
        files.append("report.json")
    io.atomic_write_text(f"{cfg.out_dir}/report.txt", report.to_text())
    files.append("report.txt")
    return files


RUNNERS = {
    "sweep": run_sweep,
    "switchsim": run_switchsim,
    "interference": run_interference,
    "feasibility": run_feasibility,
}


def _parse_formats(text):
    formats = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in formats if f not in FORMATS]
    if bad or not formats:
        raise ConfigError(f"unknown output format {bad[0] if bad else text!r}; choose from {','.join(FORMATS)}")
    return formats


def build_parser():
    parser = argparse.ArgumentParser(prog="scring", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", help="JSON parameter document (SI units)")
    parser.add_argument("--seed", type=int, help="override the random seed")
    parser.add_argument("--out", default="scring-out", help="output directory")
    parser.add_argument("--format", default="csv,json", help="comma list from csv,json,svg")
    parser.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key, e.g. schedule.omega_sw=1e8")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        formats = _parse_formats(args.format)
        params = resolve_config(args.subcommand, args.config, args.set, args.seed)
        cfg = RunConfig(args.subcommand, params, args.out, args.seed, formats)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            files = RUNNERS[args.subcommand](cfg)
        io.write_json(f"{cfg.out_dir}/run_config.json", {"subcommand": cfg.subcommand, "params": params})
    except ConfigError as exc:
        print(f"scring: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TypeError as exc:
        # wrong JSON type for a parameter, e.g. null or a string where a number belongs
        print(f"scring: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError) as exc:
        print(f"scring: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    for name in files + ["run_config.json"]:
        print(f"{cfg.out_dir}/{name}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
