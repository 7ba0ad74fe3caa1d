"""Two-sided Mann-Whitney U test, Holm adjustment and +/=/- labelling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .core import ConfigurationError

__all__ = [
    "PairwiseResult",
    "EXACT_MAX_TOTAL",
    "mann_whitney_u",
    "u_statistic",
    "exact_p_value",
    "normal_p_value",
    "holm_adjust",
    "summarize",
    "label_pair",
    "PLUS",
    "EQUAL",
    "MINUS",
]

PLUS, EQUAL, MINUS = "+", "=", "-"
# exact null distribution is used up to this combined sample size (tie-free only)
EXACT_MAX_TOTAL = 16


@dataclass(frozen=True)
class PairwiseResult:
    u_statistic: float
    p_value: float
    adjusted_p: float
    label: str


def _sample(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise ConfigurationError(f"{what} sample is empty")
    if not np.all(np.isfinite(arr)):
        raise ConfigurationError(f"{what} sample has non-finite values")
    return arr


def _midranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(values.size, dtype=float)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def u_statistic(a, b) -> float:
    """U for sample ``a``: pairs with ``a_i > b_j`` plus half the ties."""
    a = _sample(a, "first")
    b = _sample(b, "second")
    ranks = _midranks(np.concatenate([a, b]))
    n = a.size
    return float(ranks[:n].sum() - n * (n + 1) / 2.0)


@lru_cache(maxsize=None)
def _u_counts(n: int, m: int) -> tuple[int, ...]:
    """Number of orderings of n a's and m b's giving each U = 0..n*m."""
    if n == 0 or m == 0:
        return (1,)
    # the largest element is either an a (beats all m b's) or a b (beats nothing)
    top_a = _u_counts(n - 1, m)
    top_b = _u_counts(n, m - 1)
    counts = [0] * (n * m + 1)
    for u, c in enumerate(top_a):
        counts[u + m] += c
    for u, c in enumerate(top_b):
        counts[u] += c
    return tuple(counts)


def exact_p_value(u: float, n: int, m: int) -> float:
    """Two-sided exact p of a tie-free U under the null."""
    counts = _u_counts(n, m)
    k = int(round(u))
    total = sum(counts)
    lower = sum(counts[: k + 1])
    upper = sum(counts[k:])
    return float(min(Fraction(1), Fraction(2 * min(lower, upper), total)))


def normal_p_value(u: float, n: int, m: int, tie_sum: float = 0.0) -> float:
    """Two-sided normal approximation with tie and continuity corrections.

    ``tie_sum`` is the sum of ``t**3 - t`` over groups of tied values.
    """
    total = n + m
    mean = n * m / 2.0
    var = n * m / 12.0 * ((total + 1) - tie_sum / (total * (total - 1)))
    if var <= 0.0:
        return 1.0
    z = (abs(u - mean) - 0.5) / math.sqrt(var)
    if z <= 0.0:
        return 1.0
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def mann_whitney_u(a, b) -> tuple[float, float]:
    """Return ``(U, p)`` for ``a`` against ``b``.

    The p value is exact when the samples are tie-free and together hold at
    most ``EXACT_MAX_TOTAL`` values; otherwise the normal approximation is
    used.
    """
    a = _sample(a, "first")
    b = _sample(b, "second")
    u = u_statistic(a, b)
    pooled = np.concatenate([a, b])
    _, tie_counts = np.unique(pooled, return_counts=True)
    has_ties = bool(np.any(tie_counts > 1))
    if not has_ties and pooled.size <= EXACT_MAX_TOTAL:
        return u, exact_p_value(u, a.size, b.size)
    tie_sum = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts))
    return u, normal_p_value(u, a.size, b.size, tie_sum)


def holm_adjust(p_values: Sequence[float]) -> list[float]:
    """Holm step-down adjusted p values, returned in input order."""
    p = np.asarray(p_values, dtype=float)
    if p.size == 0:
        return []
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise ConfigurationError("p values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="mergesort")
    scaled = np.minimum(1.0, (m - np.arange(m)) * p[order])
    adjusted = np.empty(m)
    adjusted[order] = np.maximum.accumulate(scaled)
    return adjusted.tolist()


def summarize(values) -> tuple[float, float]:
    """Mean and sample standard deviation (0 for a single value)."""
    arr = _sample(values, "trial")
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1))


def label_pair(reference, other, alpha: float = 0.05,
               adjusted_p: Optional[float] = None) -> PairwiseResult:
    """Compare the reference algorithm's trials with another's.

    ``+`` means the reference is significantly better (lower mean), ``-``
    significantly worse, ``=`` no significant difference. Pass
    ``adjusted_p`` when the comparison belongs to a Holm family; otherwise
    the raw p value is used.
    """
    u, p = mann_whitney_u(reference, other)
    adj = p if adjusted_p is None else max(float(adjusted_p), p)
    label = EQUAL
    if adj < alpha:
        mean_ref = float(np.mean(reference))
        mean_other = float(np.mean(other))
        if mean_other > mean_ref:
            label = PLUS
        elif mean_other < mean_ref:
            label = MINUS
    return PairwiseResult(u, p, adj, label)
