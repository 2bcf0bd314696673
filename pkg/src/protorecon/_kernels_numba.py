"""Numba backend: loop kernels compiled with @njit, disk-cached.

Mirrors _kernels_numpy exactly (same signatures, same tie conventions);
only the execution strategy differs. Kept in loop form because that is
what numba compiles best.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def loss_and_grad(x, y, a, w, b, c, mo, mc, ms, lo, lc, ls, tau):
    n_pts = x.shape[0]
    n_u = a.shape[0]

    z = np.empty((n_pts, n_u))
    sig = np.empty((n_pts, n_u))
    for i in range(n_pts):
        for j in range(n_u):
            zz = w[j] * x[i] + b[j]
            z[i, j] = zz
            sig[i, j] = np.exp(-zz * zz)

    da = np.zeros(n_u)
    dw = np.zeros(n_u)
    db = np.zeros(n_u)
    dc = 0.0

    # fit
    fit = 0.0
    r = np.empty(n_pts)
    for i in range(n_pts):
        f = c
        for j in range(n_u):
            f += a[j] * sig[i, j]
        r[i] = f - y[i]
        fit += r[i] * r[i]
    fit /= n_pts
    inv = 2.0 / n_pts
    for i in range(n_pts):
        dc += inv * r[i]
        for j in range(n_u):
            ds = -2.0 * z[i, j] * sig[i, j]
            da[j] += inv * r[i] * sig[i, j]
            t = inv * r[i] * a[j] * ds
            dw[j] += t * x[i]
            db[j] += t

    # overlap
    overlap = 0.0
    for i in range(n_pts):
        s_row = 0.0
        q_row = 0.0
        for j in range(n_u):
            s_row += sig[i, j]
            q_row += sig[i, j] * sig[i, j]
        overlap += 0.5 * (s_row * s_row - q_row)
        if mo:
            for j in range(n_u):
                g = -2.0 * z[i, j] * sig[i, j] * (s_row - sig[i, j])
                dw[j] += mo * lo * g * x[i]
                db[j] += mo * lo * g

    xh = np.empty(n_u)
    for j in range(n_u):
        xh[j] = -b[j] / w[j]

    # coverage, argmin ties to the lowest unit index
    coverage = 0.0
    s_cov = np.zeros(n_u)
    for i in range(n_pts):
        best = 0
        bestd = (x[i] - xh[0]) * (x[i] - xh[0])
        for j in range(1, n_u):
            d = (x[i] - xh[j]) * (x[i] - xh[j])
            if d < bestd:
                bestd = d
                best = j
        coverage += bestd
        s_cov[best] += -2.0 * (x[i] - xh[best])
    if mc:
        for j in range(n_u):
            dw[j] += mc * lc * s_cov[j] * (b[j] / (w[j] * w[j]))
            db[j] += mc * lc * s_cov[j] * (-1.0 / w[j])

    # separation
    separation = 0.0
    g_x = np.zeros(n_u)
    for j in range(n_u):
        for k in range(j + 1, n_u):
            d = xh[j] - xh[k]
            e = np.exp(-(d * d) / tau)
            separation += e
            g = (-2.0 / tau) * d * e
            g_x[j] += g
            g_x[k] -= g
    if ms:
        for j in range(n_u):
            dw[j] += ms * ls * g_x[j] * (b[j] / (w[j] * w[j]))
            db[j] += ms * ls * g_x[j] * (-1.0 / w[j])

    return fit, overlap, coverage, separation, da, dw, db, dc


@njit(cache=True)
def hungarian(cost):
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    p = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=np.bool_)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = np.inf
            j1 = -1
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
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
