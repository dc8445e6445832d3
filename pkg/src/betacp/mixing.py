"""Beta-mixing coefficient sequences.

A mixing profile is a nonincreasing map r -> beta(r) in [0, 1]. Profiles come
from exact computation (finite-state Markov chains), numerical integration
(AR(1)), parametric families, or a user-supplied table. Estimating beta(.)
from raw observed data is deliberately not provided; users supply a profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import ndtr

from .errors import (
    BadParameter,
    NonStationaryLambda,
    NoUniqueStationary,
    NotStochastic,
    ParseError,
)

_MONOTONE_TOL = 1e-12


# ---------------------------------------------------------------------------
# Finite-state Markov chains


def _check_stochastic(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] != p.shape[1] or p.shape[0] < 2:
        raise NotStochastic("transition matrix must be square with >= 2 states")
    if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise NotStochastic("transition probabilities must lie in [0, 1]")
    if np.max(np.abs(p.sum(axis=1) - 1.0)) > 1e-12:
        raise NotStochastic("rows must sum to 1 within 1e-12")
    return p


def stationary_distribution(p: np.ndarray) -> np.ndarray:
    """Solve pi P = pi, sum pi = 1, verifying uniqueness.

    Direct linear solve for <= 64 states, power iteration beyond.
    """
    p = _check_stochastic(p)
    k = p.shape[0]
    eigvals = np.linalg.eigvals(p)
    if np.sum(np.abs(eigvals - 1.0) < 1e-10) != 1:
        raise NoUniqueStationary("transition matrix has multiple unit eigenvalues")
    if k <= 64:
        a = np.vstack([p.T - np.eye(k), np.ones((1, k))])
        b = np.zeros(k + 1)
        b[-1] = 1.0
        pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    else:
        pi = np.full(k, 1.0 / k)
        for _ in range(100_000):
            nxt = pi @ p
            if np.max(np.abs(nxt - pi)) <= 1e-14 * max(1.0, np.max(np.abs(nxt))):
                pi = nxt
                break
            pi = nxt
    pi = np.clip(pi, 0.0, None)
    total = pi.sum()
    if total <= 0 or np.any(~np.isfinite(pi)):
        raise NoUniqueStationary("stationary solve failed")
    return pi / total


def _matrix_power(p: np.ndarray, r: int) -> np.ndarray:
    """P^r by repeated squaring."""
    result = np.eye(p.shape[0])
    base = p.copy()
    e = r
    while e > 0:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


def markov_beta(transition_matrix, r: int) -> float:
    """beta(r) of a finite irreducible aperiodic chain:
    sum_x pi(x) * (1/2) sum_y |P^r(x, y) - pi(y)|.
    """
    if int(r) != r or r < 1:
        raise BadParameter(f"lag r must be a positive integer, got {r}")
    p = _check_stochastic(transition_matrix)
    pi = stationary_distribution(p)
    pr = _matrix_power(p, int(r))
    tv_rows = 0.5 * np.abs(pr - pi[None, :]).sum(axis=1)
    return float(pi @ tv_rows)


def two_state_beta(p: float, q: float, r) -> np.ndarray | float:
    """Closed form for the two-state chain with flip probabilities p (0->1)
    and q (1->0): beta(r) = 2pq|1-p-q|^r / (p+q)^2.

    Equivalent to ``markov_beta`` on [[1-p, p], [q, 1-q]] (asserted in tests);
    follows from the eigendecomposition of the chain, whose second eigenvalue
    is 1-p-q.
    """
    if not (0 < p < 1 and 0 < q < 1):
        raise BadParameter("transition probabilities must lie in (0, 1)")
    r_arr = np.asarray(r, dtype=np.float64)
    out = 2.0 * p * q * np.abs(1.0 - p - q) ** r_arr / (p + q) ** 2
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TwoStateChain:
    """Two-state chain with flip probabilities p: 0->1 and q: 1->0."""

    p: float
    q: float

    def __post_init__(self):
        if not (0 < self.p < 1 and 0 < self.q < 1):
            raise BadParameter("p and q must lie in (0, 1)")

    @property
    def pi(self) -> tuple[float, float]:
        s = self.p + self.q
        return (self.q / s, self.p / s)

    @property
    def transition_matrix(self) -> np.ndarray:
        return np.array([[1 - self.p, self.p], [self.q, 1 - self.q]])

    def beta(self, r) -> np.ndarray | float:
        return two_state_beta(self.p, self.q, r)


# ---------------------------------------------------------------------------
# AR(1) via numerical integration


def _gaussian_tv(mu1, sigma1, mu2: float, sigma2: float) -> np.ndarray:
    """Total variation distance between N(mu1, sigma1^2) (vectorized) and a
    fixed N(mu2, sigma2^2), via the densities' crossing points.

    The log-density difference is a quadratic in x; between its roots the
    sign of f - g is constant, so TV = (1/2) * sum |DeltaF| over the sign
    intervals, with DeltaF the CDF-difference increments. Accurate at small
    TV where generic quadrature of |f - g| loses digits.
    """
    mu1 = np.atleast_1d(np.asarray(mu1, dtype=np.float64))
    sigma1 = np.broadcast_to(np.asarray(sigma1, dtype=np.float64), mu1.shape)
    out = np.zeros_like(mu1)

    same_var = np.abs(sigma1 - sigma2) < 1e-300
    if np.any(same_var):
        # single crossing at the midpoint of the means
        m1, s1 = mu1[same_var], sigma1[same_var]
        xs = 0.5 * (m1 + mu2)
        d = ndtr((xs - m1) / s1) - ndtr((xs - mu2) / sigma2)
        out[same_var] = np.abs(d)

    diff = ~same_var
    if np.any(diff):
        m1, s1 = mu1[diff], sigma1[diff]
        a = 1.0 / (2.0 * sigma2**2) - 1.0 / (2.0 * s1**2)
        b = m1 / s1**2 - mu2 / sigma2**2
        c = (
            mu2**2 / (2.0 * sigma2**2)
            - m1**2 / (2.0 * s1**2)
            + np.log(sigma2 / s1)
        )
        disc = np.sqrt(np.maximum(b * b - 4.0 * a * c, 0.0))
        r1 = (-b - disc) / (2.0 * a)
        r2 = (-b + disc) / (2.0 * a)
        lo, hi = np.minimum(r1, r2), np.maximum(r1, r2)
        d_lo = ndtr((lo - m1) / s1) - ndtr((lo - mu2) / sigma2)
        d_hi = ndtr((hi - m1) / s1) - ndtr((hi - mu2) / sigma2)
        out[diff] = 0.5 * (np.abs(d_lo) + np.abs(d_hi - d_lo) + np.abs(d_hi))
    return out


@dataclass(frozen=True)
class QuadratureSpec:
    """Fixed-node Gauss-Legendre rule on [-span_sd, span_sd] stationary
    standard deviations."""

    nodes: int = 512
    span_sd: float = 8.0

    def __post_init__(self):
        if self.nodes < 512 or self.span_sd < 8.0:
            raise BadParameter(
                "quadrature must cover >= 8 stationary standard deviations "
                "with >= 512 nodes"
            )


def ar1_beta(lam: float, r: int, quadrature: QuadratureSpec | None = None) -> float:
    """beta(r) of the AR(1) recurrence W_t = lam*W_{t-1} + N(0,1), computed
    as the stationary average of TV(P^r(x, .), pi).

    P^r(x, .) is Gaussian with mean lam^r x and variance
    (1 - lam^(2r)) / (1 - lam^2); pi is N(0, 1/(1 - lam^2)).
    """
    if int(r) != r or r < 1:
        raise BadParameter(f"lag r must be a positive integer, got {r}")
    lam = float(lam)
    if not abs(lam) < 1:
        raise NonStationaryLambda(f"|lambda| must be < 1, got {lam}")
    if lam == 0.0:
        return 0.0
    spec = quadrature or QuadratureSpec()
    var_pi = 1.0 / (1.0 - lam**2)
    sd_pi = math.sqrt(var_pi)
    lam_r = lam ** int(r)
    var_r = (1.0 - lam ** (2 * int(r))) / (1.0 - lam**2)
    if var_r >= var_pi:  # lam^(2r) underflowed; kernel equals pi
        var_r = var_pi

    nodes, weights = np.polynomial.legendre.leggauss(spec.nodes)
    half = spec.span_sd * sd_pi
    xs = nodes * half
    ws = weights * half
    dens = np.exp(-0.5 * (xs / sd_pi) ** 2) / (sd_pi * math.sqrt(2.0 * math.pi))
    tv = _gaussian_tv(lam_r * xs, math.sqrt(var_r), 0.0, sd_pi)
    return float(np.sum(ws * dens * tv))


# ---------------------------------------------------------------------------
# Profiles


class MixingProfile:
    """Nonincreasing map r -> beta(r) in [0, 1].

    ``beta(r)`` answers single lags; ``beta_array(r_max)`` returns
    [beta(1), ..., beta(r_max)] for the bound optimizers.
    """

    def __init__(self, beta_fn, provenance: str, r_max_hint: int = 0):
        self._beta_fn = beta_fn  # vectorized: int64 array -> float64 array
        self.provenance = provenance
        self._cache: np.ndarray | None = None
        if r_max_hint:
            self._ensure(r_max_hint)

    def _ensure(self, r_max: int) -> np.ndarray:
        if self._cache is None or self._cache.size < r_max:
            rs = np.arange(1, r_max + 1, dtype=np.int64)
            vals = np.asarray(self._beta_fn(rs), dtype=np.float64)
            if np.any(vals < -_MONOTONE_TOL) or np.any(vals > 1 + _MONOTONE_TOL):
                raise BadParameter("beta values must lie in [0, 1]")
            if np.any(np.diff(vals) > _MONOTONE_TOL):
                raise BadParameter("beta values must be nonincreasing in r")
            self._cache = np.clip(vals, 0.0, 1.0)
        return self._cache

    def beta(self, r: int) -> float:
        if int(r) != r or r < 1:
            raise BadParameter(f"lag r must be a positive integer, got {r}")
        return float(self._ensure(int(r))[int(r) - 1])

    def beta_array(self, r_max: int) -> np.ndarray:
        if r_max < 1:
            raise BadParameter("r_max must be >= 1")
        return self._ensure(int(r_max))[:r_max].copy()

    def __repr__(self):
        return f"MixingProfile({self.provenance})"


def parametric_profile(kind: str, *, c: float | None = None, rho: float | None = None,
                       b: float | None = None) -> MixingProfile:
    """Parametric profile families.

    geometric:  beta(r) = min(1, c * rho^r), c > 0, rho in (0, 1)
    polynomial: beta(r) = min(1, r^(-b)), b > 1
    """
    if kind == "geometric":
        if c is None or rho is None or c <= 0 or not 0 < rho < 1:
            raise BadParameter("geometric profile needs c > 0 and rho in (0, 1)")
        return MixingProfile(
            lambda r: np.minimum(1.0, c * rho ** r.astype(np.float64)),
            f"geometric(c={c}, rho={rho})",
        )
    if kind == "polynomial":
        if b is None or b <= 1:
            raise BadParameter("polynomial profile needs b > 1")
        return MixingProfile(
            lambda r: np.minimum(1.0, r.astype(np.float64) ** (-b)),
            f"polynomial(b={b})",
        )
    raise BadParameter(f"unknown profile kind {kind!r}")


def zero_profile() -> MixingProfile:
    """beta identically 0: the independent-data reference profile."""
    return MixingProfile(lambda r: np.zeros(r.shape), "user_table(zero)")


def constant_profile(value: float) -> MixingProfile:
    """beta identically equal to a constant in [0, 1] (degenerate profiles
    such as beta = 1 are useful to exercise infeasibility)."""
    if not 0 <= value <= 1:
        raise BadParameter("constant beta must lie in [0, 1]")
    return MixingProfile(lambda r: np.full(r.shape, float(value)), f"user_table(const={value})")


def two_state_profile(p: float, q: float) -> MixingProfile:
    """Exact profile of the two-state chain (closed form; matches
    ``markov_beta`` on the chain's transition matrix)."""
    chain = TwoStateChain(p, q)
    return MixingProfile(lambda r: chain.beta(r), f"exact_markov(p={p}, q={q})")


def markov_profile(transition_matrix) -> MixingProfile:
    """Exact profile of a finite chain. Uses the closed form for two-state
    matrices; otherwise iterated powers of the transition matrix."""
    p = _check_stochastic(transition_matrix)
    if p.shape == (2, 2):
        pp, qq = float(p[0, 1]), float(p[1, 0])
        if 0 < pp < 1 and 0 < qq < 1:
            return two_state_profile(pp, qq)
    pi = stationary_distribution(p)

    def fn(rs: np.ndarray) -> np.ndarray:
        out = np.empty(rs.size)
        pr = np.eye(p.shape[0])
        r_prev = 0
        for i, r in enumerate(rs):
            for _ in range(int(r) - r_prev):
                pr = pr @ p
            r_prev = int(r)
            out[i] = pi @ (0.5 * np.abs(pr - pi[None, :]).sum(axis=1))
        return out

    return MixingProfile(fn, "exact_markov")


def ar1_profile(lam: float, quadrature: QuadratureSpec | None = None) -> MixingProfile:
    """Numerically integrated AR(1) profile."""
    lam = float(lam)
    if not abs(lam) < 1:
        raise NonStationaryLambda(f"|lambda| must be < 1, got {lam}")
    spec = quadrature or QuadratureSpec()

    def fn(rs: np.ndarray) -> np.ndarray:
        return np.array([ar1_beta(lam, int(r), spec) for r in rs])

    return MixingProfile(fn, f"ar1_numeric(lambda={lam})")


def table_profile(pairs) -> MixingProfile:
    """Profile from (r, beta) pairs with strictly increasing r starting at 1.

    Between tabulated lags the previous value is held; beyond the last lag
    the final value is kept.
    """
    rs = np.array([int(r) for r, _ in pairs], dtype=np.int64)
    vals = np.array([float(v) for _, v in pairs], dtype=np.float64)
    if rs.size == 0:
        raise BadParameter("profile table is empty")
    if rs[0] != 1:
        raise BadParameter("profile table must start at r=1")
    if np.any(np.diff(rs) <= 0):
        raise BadParameter("table lags must be strictly increasing")
    if np.any(vals < 0) or np.any(vals > 1):
        raise BadParameter("beta values must lie in [0, 1]")
    if np.any(np.diff(vals) > _MONOTONE_TOL):
        raise BadParameter("beta values must be nonincreasing in r")

    def fn(query: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(rs, query, side="right") - 1
        return vals[idx]

    return MixingProfile(fn, "user_table")


def load_profile_table(path) -> MixingProfile:
    """Read a two-column ``r,beta`` text file (one pair per line)."""
    pairs = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'r,beta', got {raw!r}")
        try:
            pairs.append((int(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    try:
        return table_profile(pairs)
    except BadParameter as exc:
        raise ParseError(str(exc)) from exc
