"""Pure numpy implementations of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def boltzmann_mean(x, a, K):
    x = np.ascontiguousarray(x, dtype=np.float64)
    f = np.floor(x)[:, None]
    j = np.arange(K + 1, dtype=np.float64)[None, :]
    n_lo = f - j
    n_hi = f + 1.0 + j
    u_lo = n_lo - x[:, None]
    u_hi = n_hi - x[:, None]
    ref = np.minimum(u_lo[:, :1] ** 2, u_hi[:, :1] ** 2)
    w_lo = np.exp(-a * (u_lo * u_lo - ref))
    w_hi = np.exp(-a * (u_hi * u_hi - ref))
    # pairwise terms keep the half-integer doublet exactly symmetric
    num = (n_lo * w_lo + n_hi * w_hi).sum(axis=1)
    den = (w_lo + w_hi).sum(axis=1)
    return num / den


def evaluate_trace(t, open_t, close_t, levels, tau, R_s):
    t = np.asarray(t, dtype=np.float64)
    open_t = np.asarray(open_t, dtype=np.float64)
    close_t = np.asarray(close_t, dtype=np.float64)
    levels = np.asarray(levels, dtype=np.float64)

    k = np.searchsorted(open_t, t, side="right")
    idx = np.maximum(k - 1, 0)
    started = k > 0
    if open_t.size:
        normal = started & (t < close_t[idx])
        decay = np.exp(-(t - open_t[idx]) / tau)
    else:
        normal = np.zeros(t.shape, dtype=bool)
        decay = np.ones(t.shape)
    held = np.where(started, levels[np.minimum(idx + 1, levels.size - 1)], levels[0])
    current = np.where(normal, levels[idx] * decay, held)
    voltage = np.where(normal, R_s * current, 0.0)
    return current, voltage
