"""Empirical quantiles in the inf form used throughout the package.

The phi-quantile of scores s_1..s_n is inf{t : (1/n) sum 1[s_i <= t] >= phi},
i.e. an exact order statistic. No interpolation is applied: interpolated
quantiles would break the direction of the coverage guarantees. Ties are
handled by the mass condition itself.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadParameter, EmptyConditionSet, EmptyInput, TooFewPoints


def check_level(phi: float) -> float:
    """Validate a quantile level. Levels are restricted to the open unit
    interval: at phi = 0 the defining infimum is -inf, and every downstream
    use has phi = 1 - alpha in (0, 1)."""
    phi = float(phi)
    if not 0.0 < phi < 1.0 or not math.isfinite(phi):
        raise BadParameter(f"quantile level must lie in (0, 1), got {phi}")
    return phi


def quantile_rank(n: int, phi: float) -> int:
    """Smallest 1-based rank k with k/n >= phi, under float comparison.

    This is ceil(phi*n) up to floating-point representation of phi; the
    explicit adjustment keeps the result exactly consistent with the mass
    condition (count/n >= phi) evaluated in floats.
    """
    k = int(math.ceil(phi * n))
    k = min(max(k, 1), n)
    while k > 1 and (k - 1) / n >= phi:
        k -= 1
    while k / n < phi:
        k += 1
    return k


def empirical_quantile(scores, phi: float) -> float:
    """Inf-form empirical phi-quantile: the ceil(phi*n)-th smallest score."""
    phi = check_level(phi)
    s = np.asarray(scores, dtype=np.float64)
    if s.size == 0:
        raise EmptyInput("cannot take a quantile of an empty score sequence")
    if not np.all(np.isfinite(s)):
        raise BadParameter("scores must all be finite")
    k = quantile_rank(s.size, phi)
    return float(np.partition(s, k - 1)[k - 1])


def conditional_empirical_quantile(scores, covariates, set_a, phi: float) -> float:
    """Empirical quantile restricted to indices whose covariate lies in the
    set. ``set_a`` is a vectorized membership predicate (n,d) -> bool (n,).

    Raises EmptyConditionSet when no covariate satisfies the predicate.
    """
    s = np.asarray(scores, dtype=np.float64)
    x = np.asarray(covariates, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if s.shape[0] != x.shape[0]:
        raise BadParameter("scores and covariates must have equal length")
    mask = np.asarray(set_a(x), dtype=bool)
    if mask.shape != s.shape:
        raise BadParameter("membership predicate must return one flag per row")
    if not mask.any():
        raise EmptyConditionSet("no calibration covariate lies in the set")
    return empirical_quantile(s[mask], phi)


def roo_quantile(test_scores, held_out_index: int, phi: float) -> float:
    """Empirical quantile over all test scores except the held-out one.

    ``held_out_index`` is 0-based.
    """
    s = np.asarray(test_scores, dtype=np.float64)
    if s.size < 2:
        raise TooFewPoints("rank-one-out needs at least two test points")
    if not 0 <= held_out_index < s.size:
        raise BadParameter(
            f"held_out_index {held_out_index} out of range for {s.size} scores"
        )
    rest = np.delete(s, held_out_index)
    return empirical_quantile(rest, phi)


def roo_quantiles(test_scores, phi: float) -> np.ndarray:
    """All n leave-one-out quantiles at once, in O(n log n).

    threshold_i equals the k-th smallest of the other n-1 scores, where
    k = quantile_rank(n-1, phi): that is sorted[k-1] when score_i ranks at
    or above k, and sorted[k] otherwise. An O(n^2) reduction to
    ``roo_quantile`` is used as the oracle in tests.
    """
    phi = check_level(phi)
    s = np.asarray(test_scores, dtype=np.float64)
    n = s.size
    if n < 2:
        raise TooFewPoints("rank-one-out needs at least two test points")
    k = quantile_rank(n - 1, phi)
    order = np.argsort(s, kind="stable")
    srt = s[order]
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(n)  # 0-based sorted position of each score
    # removing a score at sorted position < k shifts the k-th smallest of
    # the remainder up to srt[k]; otherwise it stays at srt[k-1]
    return np.where(ranks >= k, srt[k - 1], srt[k])
