"""Paired significance tests and multiple-comparison correction.

Implemented directly over math primitives so results are reproducible
bit-for-bit: McNemar's test with continuity correction, odds ratios with
the Haldane-Anscombe half-count fallback, Benjamini-Hochberg step-up
adjustment, and Wilcoxon signed-rank / rank-sum tests under the normal
approximation with tie and continuity corrections.  The chi-square
survival function is computed via the regularized incomplete gamma
function (series / continued-fraction split at x = a + 1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

_EPS = 1e-15
_MAX_ITER = 500
SMALL_SAMPLE = 20


class UndefinedTestError(ValueError):
    pass


@dataclass(frozen=True)
class PairedOutcomeTable:
    """Counts over shared instances: a=both right, b=A-only, c=B-only, d=neither."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("cell counts must be non-negative")

    @property
    def n(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class OddsRatioResult:
    value: float
    haldane_corrected: bool


def _gamma_p_series(a: float, x: float) -> float:
    total = term = 1.0 / a
    k = a
    for _ in range(_MAX_ITER):
        k += 1.0
        term *= x / k
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x)."""
    if a <= 0 or x < 0:
        raise ValueError("require a > 0 and x >= 0")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi2_sf(x: float, df: int = 1) -> float:
    return regularized_gamma_q(df / 2.0, x / 2.0)


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def mcnemar(table: PairedOutcomeTable) -> tuple[float, float]:
    """Continuity-corrected McNemar statistic and chi-square (df=1) p-value."""
    b, c = table.b, table.c
    if b + c == 0:
        raise UndefinedTestError("no discordant pairs: McNemar is undefined")
    stat = (abs(b - c) - 1.0) ** 2 / (b + c)
    return stat, min(1.0, chi2_sf(stat, 1))


def odds_ratio(table: PairedOutcomeTable) -> OddsRatioResult:
    b, c = table.b, table.c
    if b == 0 or c == 0:
        return OddsRatioResult((b + 0.5) / (c + 0.5), True)
    return OddsRatioResult(b / c, False)


def benjamini_hochberg(p_values) -> list[float]:
    """Step-up adjusted p-values, returned in the original order."""
    ps = [float(p) for p in p_values]
    for p in ps:
        if not (0.0 <= p <= 1.0) or math.isnan(p):
            raise ValueError(f"p-value outside [0, 1]: {p}")
    m = len(ps)
    order = sorted(range(m), key=lambda i: ps[i])
    adjusted = [0.0] * m
    running = 1.0
    for rank in range(m, 0, -1):
        idx = order[rank - 1]
        running = min(running, ps[idx] * m / rank)
        adjusted[idx] = running
    return adjusted


def _ranks_with_ties(values) -> tuple[list[float], list[int]]:
    """Average ranks (1-based) and the tie-group sizes."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    tie_sizes = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def wilcoxon_signed_rank(diffs) -> tuple[float, float]:
    """Two-sided signed-rank test on paired differences; zeros are dropped."""
    nz = [float(d) for d in diffs if d != 0]
    if not nz:
        raise UndefinedTestError("all differences are zero")
    n = len(nz)
    if n < SMALL_SAMPLE:
        warnings.warn(
            f"signed-rank normal approximation with only {n} non-zero pairs",
            stacklevel=2,
        )
    ranks, ties = _ranks_with_ties([abs(d) for d in nz])
    w_plus = sum(r for r, d in zip(ranks, nz) if d > 0)
    w_minus = n * (n + 1) / 2.0 - w_plus
    stat = min(w_plus, w_minus)
    mean = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - sum(t**3 - t for t in ties) / 48.0
    if var <= 0:
        return stat, 1.0
    dev = stat - mean
    z = (dev - 0.5 * _sign(dev)) / math.sqrt(var)
    return stat, min(1.0, 2.0 * normal_sf(abs(z)))


def wilcoxon_rank_sum(sample_a, sample_b) -> tuple[float, float]:
    """Two-sided rank-sum (Mann-Whitney) test; statistic is min(U1, U2)."""
    xs = [float(v) for v in sample_a]
    ys = [float(v) for v in sample_b]
    n1, n2 = len(xs), len(ys)
    if n1 == 0 or n2 == 0:
        raise UndefinedTestError("both samples must be non-empty")
    if min(n1, n2) < SMALL_SAMPLE:
        warnings.warn(
            f"rank-sum normal approximation with samples of {n1} and {n2}",
            stacklevel=2,
        )
    ranks, ties = _ranks_with_ties(xs + ys)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2.0
    u2 = n1 * n2 - u1
    stat = min(u1, u2)
    n = n1 + n2
    tie_term = sum(t**3 - t for t in ties) / (n * (n - 1))
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return stat, 1.0
    dev = stat - n1 * n2 / 2.0
    z = (dev - 0.5 * _sign(dev)) / math.sqrt(var)
    return stat, min(1.0, 2.0 * normal_sf(abs(z)))


def _sign(x: float) -> float:
    return (x > 0) - (x < 0)
