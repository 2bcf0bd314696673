"""Two-sample testing pipeline: normality screen, automatic test routing,
Holm correction, effect sizes, and the 8x8 pairwise significance matrix.

Routing convention: Welch's t when both groups pass the Shapiro-Wilk screen
at p > 0.05, otherwise (including degenerate inputs) the two-sided
Mann-Whitney test. For groups of at most 10 observations each the
Mann-Whitney p comes from the exact permutation distribution of the rank
sum (midranks for ties, no mid-p), computed by subset-sum counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

ALPHA = 0.05
EXACT_MW_MAX = 10


class StatNotApplicable(ValueError):
    """A test's preconditions do not hold (caller should fall back)."""


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _norm_ppf(q: np.ndarray) -> np.ndarray:
    return special.ndtri(q)


# ---------------------------------------------------------------------------
# Shapiro-Wilk (Royston's AS R94 approximation, n in [3, 50])

_C1 = (-2.706056, 4.434685, -2.071190, -0.147981, 0.221157)
_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981)


def _poly(coeffs, u):
    # coefficients for u^5, u^4, ..., u (no constant term)
    return (
        coeffs[0] * u**5
        + coeffs[1] * u**4
        + coeffs[2] * u**3
        + coeffs[3] * u**2
        + coeffs[4] * u
    )


def shapiro_wilk(sample) -> tuple[float, float]:
    """W statistic and upper-tail p-value for normality, 3 <= n <= 50."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.shape[0]
    if n < 3 or n > 50:
        raise StatNotApplicable(f"sample size {n} outside [3, 50]")
    if np.ptp(x) == 0.0:
        raise StatNotApplicable("zero variance sample")

    i = np.arange(1, n + 1)
    m = _norm_ppf((i - 0.375) / (n + 0.25))
    msq = float(m @ m)
    u = 1.0 / math.sqrt(n)

    a = np.zeros(n)
    if n == 3:
        a[0] = math.sqrt(0.5)
        a[2] = -a[0]
    else:
        a_n = _poly(_C1, u) + m[-1] / math.sqrt(msq)
        if n > 5:
            a_n1 = _poly(_C2, u) + m[-2] / math.sqrt(msq)
            fac = math.sqrt(
                (msq - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2)
                / (1.0 - 2.0 * a_n**2 - 2.0 * a_n1**2)
            )
            a[2:-2] = m[2:-2] / fac
            a[-2] = a_n1
            a[1] = -a_n1
        else:
            fac = math.sqrt((msq - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * a_n**2))
            a[1:-1] = m[1:-1] / fac
        a[-1] = a_n
        a[0] = -a_n

    xm = x - x.mean()
    w_stat = float(a @ x) ** 2 / float(xm @ xm)
    w_stat = min(w_stat, 1.0)

    if n == 3:
        p = (6.0 / math.pi) * (math.asin(math.sqrt(w_stat)) - math.asin(math.sqrt(0.75)))
        p = min(max(p, 0.0), 1.0)
        return w_stat, p
    if n <= 11:
        g = -2.273 + 0.459 * n
        mu = 0.5440 - 0.39978 * n + 0.025054 * n**2 - 0.0006714 * n**3
        sigma = math.exp(1.3822 - 0.77857 * n + 0.062767 * n**2 - 0.0020322 * n**3)
        arg = g - math.log1p(-w_stat)
        if arg <= 0.0:
            return w_stat, 0.0
        z = (-math.log(arg) - mu) / sigma
    else:
        ln = math.log(n)
        mu = -1.5861 - 0.31082 * ln - 0.083751 * ln**2 + 0.0038915 * ln**3
        sigma = math.exp(-0.4803 - 0.082676 * ln + 0.0030302 * ln**2)
        z = (math.log1p(-w_stat) - mu) / sigma
    return w_stat, _norm_sf(z)


# ---------------------------------------------------------------------------
# Welch's t

def welch_t(a, b) -> float:
    """Two-sided p of Welch's unequal-variance t-test."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = a.size, b.size
    if na < 2 or nb < 2:
        raise StatNotApplicable("need at least 2 observations per group")
    va = a.var(ddof=1) / na
    vb = b.var(ddof=1) / nb
    if va + vb == 0.0:
        raise StatNotApplicable("both groups have zero variance")
    t = (a.mean() - b.mean()) / math.sqrt(va + vb)
    df = (va + vb) ** 2 / (va**2 / (na - 1) + vb**2 / (nb - 1))
    return 2.0 * float(special.stdtr(df, -abs(t)))


# ---------------------------------------------------------------------------
# Mann-Whitney

def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(pooled.size)
    sorted_vals = pooled[order]
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _u_statistic(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    pooled = np.concatenate([a, b])
    ranks = _midranks(pooled)
    n = a.size
    u = ranks[:n].sum() - n * (n + 1) / 2.0
    return u, ranks


def _exact_mw_p(u_obs: float, ranks: np.ndarray, n: int) -> float:
    """Two-sided exact p: doubled smaller tail of the permutation U law.

    Counts n-subsets of the pooled midranks by (doubled, hence integer)
    rank sum with a subset-sum DP; exact for the tied case too.
    """
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    total = int(doubled.sum())
    dp = np.zeros((n + 1, total + 1))
    dp[0, 0] = 1.0
    for d in doubled:
        for k in range(n, 0, -1):
            dp[k, d:] += dp[k - 1, : total + 1 - d]
    counts = dp[n]
    n_all = counts.sum()
    # doubled U for subset sum s is s - n(n+1)
    u2_obs = int(round(2.0 * u_obs))
    offs = np.arange(total + 1) - n * (n + 1)
    p_le = counts[offs <= u2_obs].sum() / n_all
    p_ge = counts[offs >= u2_obs].sum() / n_all
    return min(1.0, 2.0 * min(p_le, p_ge))


def _asymptotic_mw_p(u_obs: float, ranks: np.ndarray, n: int, m: int) -> float:
    big_n = n + m
    mu = n * m / 2.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    tie_term = float(((tie_counts**3 - tie_counts)).sum()) / (big_n * (big_n - 1))
    var = n * m / 12.0 * ((big_n + 1) - tie_term)
    if var <= 0.0:
        return 1.0
    num = u_obs - mu
    # continuity correction toward the mean
    num -= 0.5 * np.sign(num)
    z = num / math.sqrt(var)
    return min(1.0, 2.0 * _norm_sf(abs(z)))


def mann_whitney(a, b) -> float:
    """Two-sided Mann-Whitney p; exact when both groups have <= 10 points."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 1 or b.size < 1:
        raise StatNotApplicable("need at least 1 observation per group")
    u_obs, ranks = _u_statistic(a, b)
    if a.size <= EXACT_MW_MAX and b.size <= EXACT_MW_MAX:
        return _exact_mw_p(u_obs, ranks, a.size)
    return _asymptotic_mw_p(u_obs, ranks, a.size, b.size)


# ---------------------------------------------------------------------------
# Routing, correction, effect size

def compare_groups(a, b) -> float:
    """Welch if both groups look normal (Shapiro p > 0.05), else Mann-Whitney."""
    try:
        normal = shapiro_wilk(a)[1] > ALPHA and shapiro_wilk(b)[1] > ALPHA
    except StatNotApplicable:
        normal = False
    if normal:
        try:
            return welch_t(a, b)
        except StatNotApplicable:
            pass
    return mann_whitney(a, b)


def holm_correct(pvals) -> np.ndarray:
    """Step-down Holm adjusted p-values, in the input order."""
    p = np.asarray(pvals, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    adjusted = np.empty(m)
    running = 0.0
    for rank, idx in enumerate(order):
        running = max(running, (m - rank) * p[idx])
        adjusted[idx] = min(1.0, running)
    return adjusted


def cohen_d(a, b) -> float:
    """Pooled-variance Cohen's d, (n-1)-weighted."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na, nb = a.size, b.size
    if na < 2 or nb < 2:
        raise StatNotApplicable("need at least 2 observations per group")
    pooled_var = ((na - 1) * a.var(ddof=1) + (nb - 1) * b.var(ddof=1)) / (na + nb - 2)
    if pooled_var == 0.0:
        raise StatNotApplicable("zero pooled variance")
    return float((a.mean() - b.mean()) / math.sqrt(pooled_var))


@dataclass
class PairwiseMatrix:
    """Holm-corrected pairwise verdicts over the 8 masks at one dataset size."""

    labels: tuple[str, ...]
    verdicts: np.ndarray  # dtype '<U1', '=' self, '+' significant, '-' not
    raw_p: np.ndarray
    adjusted_p: np.ndarray
    alpha: float = ALPHA


def significance_matrix(cells: dict[str, np.ndarray], alpha: float = ALPHA) -> PairwiseMatrix:
    """All unordered pairwise comparisons, Holm-corrected as one family."""
    labels = tuple(cells.keys())
    k = len(labels)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    raw = np.array([compare_groups(cells[labels[i]], cells[labels[j]]) for i, j in pairs])
    adj = holm_correct(raw) if len(raw) else raw

    raw_mat = np.full((k, k), np.nan)
    adj_mat = np.full((k, k), np.nan)
    verdicts = np.full((k, k), "-", dtype="<U1")
    np.fill_diagonal(verdicts, "=")
    for (i, j), p_raw, p_adj in zip(pairs, raw, adj):
        raw_mat[i, j] = raw_mat[j, i] = p_raw
        adj_mat[i, j] = adj_mat[j, i] = p_adj
        if p_adj < alpha:
            verdicts[i, j] = verdicts[j, i] = "+"
    return PairwiseMatrix(
        labels=labels, verdicts=verdicts, raw_p=raw_mat, adjusted_p=adj_mat, alpha=alpha
    )
