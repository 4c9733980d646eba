"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also times one end-to-end switching run on whichever backend is active.
Results are printed, nothing is written.
"""

import argparse
import timeit

import numpy as np

from scring import _kernels_py

try:
    from scring import _kernels as compiled
except ImportError:
    compiled = None


def _cases():
    rng = np.random.default_rng(0)
    x = rng.uniform(-5, 5, 200_000)
    edges = np.cumsum(rng.exponential(1.0, 2 * 10_000))
    opens, closes = np.ascontiguousarray(edges[0::2]), np.ascontiguousarray(edges[1::2])
    levels = rng.normal(size=opens.size + 1)
    t = np.linspace(0, closes[-1], 1_000_000)
    return {
        "boltzmann_mean (2e5 points, K=12)": ("boltzmann_mean", (x, 3.0, 12)),
        "evaluate_trace (1e6 samples, 1e4 intervals)": ("evaluate_trace", (t, opens, closes, levels, 0.4, 1.0)),
    }


def _best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    print(f"{'kernel':<46} {'python (ms)':>12} {'cython (ms)':>12} {'speedup':>8}")
    for label, (name, call) in _cases().items():
        slow = _best(getattr(_kernels_py, name), call, args.repeat)
        if compiled is None:
            print(f"{label:<46} {slow * 1e3:12.2f} {'n/a':>12} {'':>8}")
            continue
        fast = _best(getattr(compiled, name), call, args.repeat)
        ref, got = getattr(_kernels_py, name)(*call), getattr(compiled, name)(*call)
        same = all(np.allclose(a, b, rtol=1e-12, atol=1e-12) for a, b in
                   zip(np.atleast_2d(ref), np.atleast_2d(got)))
        note = "" if same else "  MISMATCH"
        print(f"{label:<46} {slow * 1e3:12.2f} {fast * 1e3:12.2f} {slow / fast:7.1f}x{note}")

    from scring import BACKEND, ringcore as rc, switchsim as sw
    material = rc.MaterialSpec(T_c=1.2, lambda_L0=5e-8)
    ring = rc.RingSpec(radius=1e-6, cross_section=1e-14, wall_width=1e-7)
    segment = sw.SegmentSpec(R_s=1.0, l_s=1e-7)
    tau = rc.loop_inductance(ring, material, 0) / segment.R_s
    omega = 1e-3 / tau
    sched = sw.SwitchSchedule("poisson", omega, 1e4 / omega, seed=1)
    phi = 0.25 * rc.flux_quantum(material.q_pair)
    sim = _best(lambda: sw.simulate(ring, material, 0, phi, segment, sched, sample_dt=0.05 / omega), (), args.repeat)
    print(f"\nsimulate, 1e4 poisson cycles, 2e5 samples ({BACKEND} backend): {sim * 1e3:.2f} ms")


if __name__ == "__main__":
    main()
