"""Moment/tail conversions and p-norm inequalities for linear and quadratic
forms in independent mean-zero variables.

The central object is Theta(s) = 2^(s/2) Gamma((s+1)/2) / sqrt(pi), the
p-th absolute moment of a standard gaussian scaled so that
Theta(s)^(1/s) <= sqrt(s) for s >= 2.  Moment growth of order p^alpha is
equivalent to stretched-exponential tails, and the p-norm of sum v(i) Y_i
(resp. of the centered quadratic form) is bounded by 2 Theta(p)^(1/p) times
the l2 size of the coefficients (resp. with an extra 8 Theta(2p)^(1/2p)).

Monte Carlo checks assert the bounds only up to bootstrap confidence on the
estimated norms, and tail-decay claims are fitted-shape-only: the underlying
constants are existential and never asserted numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "theta_fn",
    "theta_root",
    "moment_to_tail",
    "tail_to_moment",
    "WhittleReport",
    "whittle_check",
    "QuadTailReport",
    "quad_tail_check",
    "splitting_average",
    "survival_points",
    "fit_log_survival_slope",
]

_DISTS = ("rademacher", "gaussian", "uniform")


def theta_fn(s: float) -> float:
    """Theta(s) = 2^(s/2) Gamma((s+1)/2) / sqrt(pi)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    return math.exp(0.5 * s * math.log(2.0) + gammaln((s + 1.0) / 2.0)
                    - 0.5 * math.log(math.pi))


def theta_root(s: float) -> float:
    """Theta(s)^(1/s), the gaussian p-norm; at most sqrt(s) for s >= 2."""
    if s <= 0:
        raise ValueError("s must be positive")
    return math.exp((0.5 * s * math.log(2.0) + gammaln((s + 1.0) / 2.0)
                     - 0.5 * math.log(math.pi)) / s)


def moment_to_tail(alpha: float, t: float) -> float:
    """Tail probability bound exp(alpha (2 - t/e)) (clamped to [0, 1]) for
    Pr(Z > t^alpha) under the moment growth sup_p p^-alpha |Z|_p <= 1."""
    if alpha <= 0 or t <= 0:
        raise ValueError("alpha and t must be positive")
    return min(1.0, math.exp(alpha * (2.0 - t / math.e)))


def tail_to_moment(alpha: float, c: float, p: float) -> float:
    """Moment bound |Z|_p <= p^alpha C^(1/2) (alpha + 1/2)^alpha for p >= 2
    under the tail bound Pr(Z > t^alpha) <= C e^-t."""
    if alpha < 0 or c < 1 or not 2 <= p < math.inf:
        raise ValueError("need alpha >= 0, C >= 1 and finite p >= 2")
    return p**alpha * math.sqrt(c) * (alpha + 0.5) ** alpha


def _draw(dist: str, rng, size) -> np.ndarray:
    """Real mean-zero unit-variance samples."""
    if dist == "rademacher":
        return rng.choice([-1.0, 1.0], size=size)
    if dist == "gaussian":
        return rng.standard_normal(size)
    if dist == "uniform":
        return rng.uniform(-math.sqrt(3.0), math.sqrt(3.0), size=size)
    raise ValueError(f"unknown distribution {dist!r}; pick from {_DISTS}")


def _exact_p_norm(dist: str, p: float) -> float:
    """Closed-form |Y|_p for the unit-variance test distributions."""
    if dist == "rademacher":
        return 1.0
    if dist == "gaussian":
        return theta_root(p)
    if dist == "uniform":
        # E|Y|^p for uniform on [-sqrt(3), sqrt(3)] is 3^(p/2)/(p+1)
        return math.sqrt(3.0) / (p + 1.0) ** (1.0 / p)
    raise ValueError(dist)


def _bootstrap_ucb(samples_p: np.ndarray, p: float, boots: int, rng,
                   level: float = 0.99) -> float:
    """Upper confidence bound for (E|S|^p)^(1/p) by resampling trials."""
    n = len(samples_p)
    idx = rng.integers(0, n, size=(boots, n))
    means = samples_p[idx].mean(axis=1)
    return float(np.quantile(means, level) ** (1.0 / p))


@dataclass
class WhittleReport:
    """One Monte Carlo verdict for the linear or quadratic p-norm bound."""

    mode: str
    dist: str
    n: int
    p: float
    lhs_estimate: float
    lhs_ucb99: float
    rhs_bound: float

    @property
    def holds(self) -> bool:
        return self.lhs_ucb99 <= self.rhs_bound


def whittle_check(dist: str, n: int, p: float, trials: int = 20000,
                  mode: str = "linear", seed: int = 0,
                  boots: int = 200) -> WhittleReport:
    """Monte Carlo check of the p-norm bound for a random coefficient vector
    (linear mode) or zero-diagonal coefficient matrix (quadratic mode).

    The left side is estimated from ``trials`` draws with a bootstrap 99%
    upper confidence bound; the right side uses the closed-form p-norms of
    the entry distribution.  Real mean-zero distributions only.
    """
    if not 2 <= p <= 16:
        raise ValueError("p must lie in [2, 16]")
    rng = np.random.Generator(np.random.Philox(key=[seed, 1]))
    ynorm = _exact_p_norm(dist, p)
    if mode == "linear":
        v = rng.standard_normal(n)
        ys = _draw(dist, rng, (trials, n))
        s = ys @ v
        rhs = 2.0 * theta_root(p) * math.sqrt(float(np.sum(v**2))) * ynorm
    elif mode == "quadratic":
        b = rng.standard_normal((n, n))
        np.fill_diagonal(b, 0.0)
        ys = _draw(dist, rng, (trials, n))
        # centered quadratic form; E[Y_i Y_j] = 0 off the diagonal
        s = np.einsum("ti,ij,tj->t", ys, b, ys, optimize=True)
        y2p = _exact_p_norm(dist, 2.0 * p)
        rhs = (8.0 * theta_root(p) * theta_root(2.0 * p)
               * math.sqrt(float(np.sum(b**2))) * y2p**2)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    abs_p = np.abs(s) ** p
    lhs = float(abs_p.mean() ** (1.0 / p))
    ucb = _bootstrap_ucb(abs_p, p, boots, rng)
    return WhittleReport(mode=mode, dist=dist, n=n, p=p, lhs_estimate=lhs,
                         lhs_ucb99=ucb, rhs_bound=rhs)


def splitting_average(n: int, trials: int = 4000, seed: int = 0):
    """Empirical and exact coefficient q of the random index-splitting
    average: for a uniformly random subset I of size floor(N/2), the matrix
    B restricted to I x I^c averages to q B off the diagonal, with
    q = |I|(N - |I|)/(N(N-1)) >= 1/4 for N >= 2.

    Returns (q_empirical_offdiag_mean, q_exact).  This is the secondary
    oracle behind the quadratic tail bound's splitting step.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = np.random.Generator(np.random.Philox(key=[seed, 5]))
    half = n // 2
    freq = np.zeros((n, n))
    for _ in range(trials):
        perm = rng.permutation(n)
        in_i = np.zeros(n, dtype=bool)
        in_i[perm[:half]] = True
        freq += np.outer(in_i, ~in_i)
    freq /= trials
    off = freq[~np.eye(n, dtype=bool)]
    q_exact = half * (n - half) / (n * (n - 1))
    return float(off.mean()), float(q_exact)


def survival_points(values: np.ndarray, quantiles=None):
    """(t, empirical survival) pairs at the given quantile levels."""
    values = np.sort(np.asarray(values, dtype=float))
    if quantiles is None:
        quantiles = np.linspace(0.5, 0.99, 15)
    ts = np.quantile(values, quantiles)
    surv = np.array([(values > t).mean() for t in ts])
    return ts, surv


def fit_log_survival_slope(ts: np.ndarray, surv: np.ndarray):
    """Least-squares fit of log survival against t, restricted to levels in
    (0, 1); returns (slope, stderr, intercept)."""
    mask = (surv > 0) & (surv < 1)
    t, y = ts[mask], np.log(surv[mask])
    if len(t) < 3:
        raise ValueError("not enough nondegenerate survival points to fit")
    a = np.vstack([t, np.ones_like(t)]).T
    coef, res, *_ = np.linalg.lstsq(a, y, rcond=None)
    dof = max(len(t) - 2, 1)
    sigma2 = (res[0] / dof) if res.size else 0.0
    cov = sigma2 * np.linalg.inv(a.T @ a)
    return float(coef[0]), float(math.sqrt(max(cov[0, 0], 0.0))), float(coef[1])


@dataclass
class QuadTailReport:
    """Empirical survival of the normalized quadratic-form deviation and the
    fitted log-linear decay slope (shape-only: the rate constants are
    existential)."""

    ts: np.ndarray
    survival: np.ndarray
    slope: float
    slope_stderr: float
    intercept: float
    center_abs: float
    center_tol: float

    @property
    def decays(self) -> bool:
        return self.slope + 2.0 * self.slope_stderr < 0.0

    def fitted(self, t: float) -> float:
        """The fitted log-linear survival bound exp(intercept + slope t)."""
        return math.exp(self.intercept + self.slope * t)

    def csv_rows(self):
        """(header, rows) of (t, empirical survival, fitted bound)."""
        header = ["t", "survival", "fitted_bound"]
        rows = [[float(t), float(s), self.fitted(float(t))]
                for t, s in zip(self.ts, self.survival)]
        return header, rows


def quad_tail_check(k: int, n: int, gamma0: float, gamma1: float,
                    b_matrix: np.ndarray, trials: int = 1000,
                    dist: str = "gaussian", seed: int = 0,
                    coupled: bool = True, include_y0: bool = True) -> QuadTailReport:
    """Monte Carlo tail study of |Y B Yhat* - Y0 - E(Y B Yhat*)| normalized
    by (gamma1/sqrt(N)) max(1, |B|_2/sqrt(N)), for k x k blocks Y_i with
    sub-gaussian-type entries of scale sqrt(gamma1/N)/k.

    With ``coupled`` the second family equals the first (Yhat_i = Y_i), which
    makes the centering term nonzero; the expectation is computed in closed
    form from the entry variance.  Only the decay shape of the tail is
    asserted, via the fitted slope of log survival.
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")
    b_matrix = np.asarray(b_matrix, dtype=float)
    if b_matrix.shape != (k * n, k * n):
        raise ValueError("B must be kN x kN")
    rng = np.random.Generator(np.random.Philox(key=[seed, 7]))
    entry_sd = math.sqrt(gamma1 / n) / k
    denom = (gamma1 / math.sqrt(n)) * max(1.0, np.linalg.norm(b_matrix) / math.sqrt(n))
    if coupled:
        # E[Y B Yhat*] = var * sum_i tr(B_ii) * I_k for iid real entries
        diag_trace = sum(np.trace(b_matrix[i * k:(i + 1) * k, i * k:(i + 1) * k])
                         for i in range(n))
        expect = entry_sd**2 * diag_trace * np.eye(k)
    else:
        expect = np.zeros((k, k))
    vals = np.empty(trials)
    means = np.zeros((k, k))
    for t in range(trials):
        y = _draw(dist, rng, (k, k * n)) * entry_sd
        yhat = y if coupled else _draw(dist, rng, (k, k * n)) * entry_sd
        if include_y0:
            y0 = _draw(dist, rng, (k, k)) * math.sqrt(gamma1 / n) / k
        else:
            y0 = np.zeros((k, k))
        stat = y @ b_matrix @ yhat.T - y0 - expect
        means += (y @ b_matrix @ yhat.T - expect) / trials
        vals[t] = np.linalg.norm(stat, 2) / denom
    if b_matrix.any():
        # statistic in normalized t-coordinates: Pr(. > t^(2 gamma0 + 1))
        ts, surv = survival_points(vals ** (1.0 / (2.0 * gamma0 + 1.0)))
        slope, stderr, intercept = fit_log_survival_slope(ts, surv)
    else:
        ts, surv = survival_points(vals)
        slope, stderr, intercept = -math.inf, 0.0, 0.0
    center_tol = 6.0 * entry_sd**2 * np.linalg.norm(b_matrix) / math.sqrt(trials) * k
    return QuadTailReport(ts=ts, survival=surv, slope=slope, slope_stderr=stderr,
                          intercept=intercept, center_abs=float(np.abs(means).max()),
                          center_tol=float(center_tol))
