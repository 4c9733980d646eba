"""File output: atomic writes, round-trip CSV, JSON and minimal SVG plots."""

import csv
import io
import json
import os
import tempfile

import numpy as np


def fmt(value):
    """Shortest string that round-trips ``value`` exactly."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return repr(float(value))


def atomic_write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([fmt(v) for v in row])
    atomic_write_text(path, buf.getvalue())


def read_csv(path):
    """Return ``{column: float64 array}``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def write_json(path, obj):
    # json emits repr() for floats, so values round-trip
    atomic_write_text(path, json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


_W, _H, _PAD = 640, 360, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _scale(values, lo_px, hi_px):
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        hi, lo = hi + 1.0, lo - 1.0
    return lambda v: lo_px + (np.asarray(v) - lo) * (hi_px - lo_px) / (hi - lo), lo, hi


def svg_plot(series, xlabel, ylabel, title="", dots=None):
    """Line plot of ``[(x, y, label), ...]`` as an SVG string.

    ``dots`` optionally adds a strip of detection marks below the axes.
    """
    all_x = np.concatenate([np.asarray(s[0], float) for s in series])
    all_y = np.concatenate([np.asarray(s[1], float) for s in series])
    height = _H + (60 if dots is not None else 0)
    sx, x0, x1 = _scale(all_x, _PAD, _W - 15)
    sy, y0, y1 = _scale(all_y, _H - _PAD, 25)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{height}" '
        f'viewBox="0 0 {_W} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{_W}" height="{height}" fill="white"/>',
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - 15}" y2="{_H - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="25" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<text x="{_W / 2:.0f}" y="{_H - 15}" text-anchor="middle">{xlabel}</text>',
        f'<text x="12" y="{_H / 2:.0f}" transform="rotate(-90 12 {_H / 2:.0f})" '
        f'text-anchor="middle">{ylabel}</text>',
        f'<text x="{_PAD}" y="{_H - _PAD + 14}">{x0:.4g}</text>',
        f'<text x="{_W - 15}" y="{_H - _PAD + 14}" text-anchor="end">{x1:.4g}</text>',
        f'<text x="{_PAD - 4}" y="{_H - _PAD}" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{_PAD - 4}" y="30" text-anchor="end">{y1:.3g}</text>',
    ]
    if title:
        out.append(f'<text x="{_W / 2:.0f}" y="15" text-anchor="middle">{title}</text>')
    for i, (x, y, label) in enumerate(series):
        px, py = sx(x), sy(y)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = _COLORS[i % len(_COLORS)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{pts}"/>')
        if label:
            out.append(f'<text x="{_W - 20}" y="{40 + 14 * i}" text-anchor="end" fill="{color}">{label}</text>')
    if dots is not None:
        rng = np.random.default_rng(0)  # vertical jitter only, fixed for byte-stable output
        dots = np.asarray(dots, float)
        inside = dots[(dots >= x0) & (dots <= x1)]
        jitter = rng.uniform(_H + 5, _H + 50, size=inside.size)
        for a, b in zip(sx(inside), jitter):
            out.append(f'<circle cx="{a:.1f}" cy="{b:.1f}" r="0.6" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, text):
    atomic_write_text(path, text)
