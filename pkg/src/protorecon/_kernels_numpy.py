"""Vectorized numpy backend for the hot per-epoch kernels.

Same contract as _kernels_numba: loss_and_grad fuses the four loss
components with the analytic gradient of the masked total, hungarian
solves the square assignment problem exactly. Selected via
PROTORECON_BACKEND=numpy (or automatically when numba is unavailable).
"""

from __future__ import annotations

import numpy as np


def loss_and_grad(x, y, a, w, b, c, mo, mc, ms, lo, lc, ls, tau):
    """Loss components and analytic gradient of the masked total loss.

    Returns (fit, overlap, coverage, separation, da, dw, db, dc). The four
    components are always evaluated; the mask bits mo/mc/ms only gate which
    structural terms enter the gradient (and, for the caller, the total).

    The coverage min routes its subgradient through each input's argmin
    prototype, ties broken to the lowest unit index.
    """
    n_pts = x.shape[0]
    z = np.outer(x, w) + b[None, :]
    sig = np.exp(-z * z)
    dsig = -2.0 * z * sig  # d sigma / d z

    # fit
    r = sig @ a + c - y
    fit = float(r @ r) / n_pts
    da = (2.0 / n_pts) * (sig.T @ r)
    t = (2.0 / n_pts) * (r[:, None] * (a[None, :] * dsig))
    dw = t.T @ x
    db = t.sum(axis=0)
    dc = (2.0 / n_pts) * float(r.sum())

    # overlap: sum_i sum_{j<k} sig_ij sig_ik = sum_i (S_i^2 - Q_i)/2
    s_row = sig.sum(axis=1)
    q_row = (sig * sig).sum(axis=1)
    overlap = float(((s_row * s_row - q_row) * 0.5).sum())
    if mo:
        g = dsig * (s_row[:, None] - sig)
        dw += (mo * lo) * (g.T @ x)
        db += (mo * lo) * g.sum(axis=0)

    # prototype locations and their parameter partials
    xh = -b / w
    dxh_dw = b / (w * w)
    dxh_db = -1.0 / w

    # coverage: sum_i min_j (x_i - xh_j)^2
    d_mat = x[:, None] - xh[None, :]
    d2 = d_mat * d_mat
    jstar = np.argmin(d2, axis=1)
    dmin = d_mat[np.arange(n_pts), jstar]
    coverage = float(dmin @ dmin)
    if mc:
        s_cov = np.zeros_like(w)
        np.add.at(s_cov, jstar, -2.0 * dmin)
        dw += (mc * lc) * s_cov * dxh_dw
        db += (mc * lc) * s_cov * dxh_db

    # separation: sum_{j<k} exp(-(xh_j - xh_k)^2 / tau)
    diff = xh[:, None] - xh[None, :]
    e = np.exp(-(diff * diff) / tau)
    separation = float((e.sum() - e.shape[0]) * 0.5)
    if ms:
        g_x = ((-2.0 / tau) * diff * e).sum(axis=1)  # diagonal contributes 0
        dw += (ms * ls) * g_x * dxh_dw
        db += (ms * ls) * g_x * dxh_db

    return fit, overlap, coverage, separation, da, dw, db, dc


def hungarian(cost):
    """Exact minimum-cost assignment on a square matrix.

    Shortest-augmenting-path variant with dual potentials, O(n^3). The
    column scan is vectorized; returns perm with perm[i] = column of row i.
    """
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)  # row matched to column j (0 = free)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = p[j0]
            free = ~used
            free[0] = False
            cur = cost[i0 - 1, :][free[1:]] - u[i0] - v[1:][free[1:]]
            idx = np.flatnonzero(free)
            better = cur < minv[idx]
            minv[idx[better]] = cur[better]
            way[idx[better]] = j0
            j1 = idx[np.argmin(minv[idx])]
            delta = minv[j1]
            u[p[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0 != 0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    perm = np.empty(n, dtype=np.int64)
    for j in range(1, n + 1):
        perm[p[j] - 1] = j - 1
    return perm
