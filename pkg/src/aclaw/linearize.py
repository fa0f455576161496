"""Self-adjoint linearization of the anticommutator and its resolvent data.

From a Hermitian pair (U, V) build, with a = (U-V)/sqrt(2), b = (-U-V)/sqrt(2),

    X = [[0, a, b],       W = [[I,  0, 0],
         [a, 0, 0],            [-a, I, 0],
         [b, 0, 0]],           [ b, 0, I]],

which satisfy W* (X - Lambda kron I) W = blockdiag({UV} - z, I, -I) with
Lambda = diag(z, -1, 1).  The generalized resolvent R = (X - Lambda kron I)^-1
therefore carries the anticommutator resolvent as its upper-left N x N block,
and per-index statistics of R (3x3 corner blocks G_i, minor averages Ghat_i,
fluctuation blocks Q_i and their normalized sizes) drive the local-law
verification.

Two computation routes are provided for the per-index statistics: the
definitional one, inverting the 3(N-1) minor for every index (quartic cost,
fine at small N), and a Schur-identity route that derives everything from the
full resolvent in roughly matrix-multiplication time.  They are cross-checked
against each other in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sdcore import phi_ac
from .wigner import WignerPair, spectral_norm

__all__ = [
    "IllConditionedError",
    "Linearization",
    "ResolventStats",
    "FluctuationNet",
    "AnticommutatorSpectrum",
    "build_linearization",
    "lambda_kron",
    "generalized_resolvent",
    "bordered_resolvent",
    "resolvent_stats",
    "fluctuation_sup",
    "resolvent_row_sum_check",
    "block_inversion_check",
]

#: condition ceiling on resolvent solves
COND_LIMIT = 1e14

#: minor-route inversions are quartic in N; refuse beyond this
MINOR_ROUTE_MAX_N = 256


class IllConditionedError(RuntimeError):
    """A resolvent solve exceeded the condition ceiling."""


@dataclass
class Linearization:
    """The 3N x 3N matrices X (Hermitian) and W (unit block lower triangular)
    of a pair, with the pair's spectral norms and the norm-hypothesis flag
    max(|U|, |V|) <= 4."""

    pair: WignerPair
    x: np.ndarray
    w: np.ndarray
    anticommutator: np.ndarray
    norm_u: float
    norm_v: float

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def norms_ok(self) -> bool:
        return max(self.norm_u, self.norm_v) <= 4.0


def build_linearization(pair: WignerPair) -> Linearization:
    """Assemble X, W and {UV} from a pair."""
    u, v = pair.u, pair.v
    n = pair.n
    a = (u - v) / math.sqrt(2.0)
    b = (-u - v) / math.sqrt(2.0)
    zero = np.zeros((n, n), dtype=complex)
    eye = np.eye(n, dtype=complex)
    x = np.block([[zero, a, b], [a, zero, zero], [b, zero, zero]])
    w = np.block([[eye, zero, zero], [-a, eye, zero], [b, zero, eye]])
    return Linearization(pair=pair, x=x, w=w, anticommutator=u @ v + v @ u,
                         norm_u=spectral_norm(u), norm_v=spectral_norm(v))


def lambda_kron(z: complex, n: int) -> np.ndarray:
    """diag(z, -1, 1) kron I_N."""
    out = np.zeros((3 * n, 3 * n), dtype=complex)
    idx = np.arange(n)
    out[idx, idx] = z
    out[n + idx, n + idx] = -1.0
    out[2 * n + idx, 2 * n + idx] = 1.0
    return out


def _check_ac_conditioning(lin: Linearization, z: complex) -> None:
    # {UV} is Hermitian, so the solve's condition is (|{UV}| + |z|)/Im z
    bound = (2.0 * lin.norm_u * lin.norm_v + abs(z)) / z.imag
    if bound > COND_LIMIT:
        raise IllConditionedError(
            f"anticommutator resolvent condition bound {bound:.3e} at z={z}")


def generalized_resolvent(lin: Linearization, z: complex,
                          cross_check_max_n: int = 64) -> np.ndarray:
    """R = (X - Lambda kron I)^-1 via the factorized route
    W blockdiag(({UV} - z)^-1, I, -I) W*.

    For N up to ``cross_check_max_n`` the result is verified against direct
    inversion of X - Lambda kron I within 1e-8 relative.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    _check_ac_conditioning(lin, z)
    n = lin.n
    g = np.linalg.inv(lin.anticommutator - z * np.eye(n))
    mid = np.zeros((3 * n, 3 * n), dtype=complex)
    mid[:n, :n] = g
    mid[n:2 * n, n:2 * n] = np.eye(n)
    mid[2 * n:, 2 * n:] = -np.eye(n)
    r = lin.w @ mid @ lin.w.conj().T
    if n <= cross_check_max_n:
        direct = np.linalg.inv(lin.x - lambda_kron(z, n))
        rel = np.linalg.norm(r - direct) / np.linalg.norm(direct)
        if rel > 1e-8:
            raise IllConditionedError(
                f"factorized and direct resolvents disagree ({rel:.3e}) at z={z}")
    return r


def bordered_resolvent(lin: Linearization, z: complex) -> np.ndarray:
    """({UV} - z)^-1 bordered by zeros to 3N x 3N (the matrix r with
    R + diag(0,-1,1) kron I = W r W*)."""
    n = lin.n
    _check_ac_conditioning(lin, z)
    g = np.linalg.inv(lin.anticommutator - z * np.eye(n))
    out = np.zeros((3 * n, 3 * n), dtype=complex)
    out[:n, :n] = g
    return out


def _triple(i: int, n: int) -> list[int]:
    return [i, n + i, 2 * n + i]


@dataclass
class ResolventStats:
    """Per-index statistics of the generalized resolvent at one z.

    ``fluct_i`` is the normalized size of the fluctuation block,
    max(1, |Q_i| / (N^-1/2 max(1, |R_i|_2 / sqrt(N)))), and ``fluct`` its max
    over i.  ``key_identity_residual`` is the relative residual of
    -Q_i = G_i^-1 + Lambda + Phi(Ghat_i) when Q_i was computed from its
    definition (minor route); on the Schur route Q_i is obtained from that
    identity and the field is None.
    """

    z: complex
    g_i: np.ndarray
    g_avg: np.ndarray
    ghat_i: np.ndarray
    q_i: np.ndarray
    r_i_frob: np.ndarray
    fluct_i: np.ndarray
    fluct: float
    route: str
    key_identity_residual: float | None


def _spectral_norms(stack: np.ndarray) -> np.ndarray:
    return np.linalg.svd(stack, compute_uv=False)[..., 0]


def _fluct_from(qnorm: np.ndarray, r_frob: np.ndarray, n: int) -> np.ndarray:
    denom = (1.0 / math.sqrt(n)) * np.maximum(1.0, r_frob / math.sqrt(n))
    return np.maximum(1.0, qnorm / denom)


def _stats_minor(lin: Linearization, z: complex) -> ResolventStats:
    n = lin.n
    if n > MINOR_ROUTE_MAX_N:
        raise ValueError(f"minor route limited to N <= {MINOR_ROUTE_MAX_N}")
    full = lin.x - lambda_kron(z, n)
    r = generalized_resolvent(lin, z)
    lam3 = np.diag([z, -1.0 + 0j, 1.0 + 0j])
    g_i = np.empty((n, 3, 3), dtype=complex)
    ghat_i = np.empty((n, 3, 3), dtype=complex)
    q_i = np.empty((n, 3, 3), dtype=complex)
    r_frob = np.empty(n)
    key_res = 0.0
    all_idx = np.arange(3 * n)
    for i in range(n):
        rows = _triple(i, n)
        keep = np.delete(all_idx, rows)
        r_minor = np.linalg.inv(full[np.ix_(keep, keep)])
        if n <= 64 and np.linalg.cond(r_minor) > COND_LIMIT:
            raise IllConditionedError(f"minor resolvent ill-conditioned at i={i}")
        g_i[i] = r[np.ix_(rows, rows)]
        # Ghat_i: average of the 3x3 corner blocks of the padded minor
        blocks = r_minor.reshape(3, n - 1, 3, n - 1)
        jdx = np.arange(n - 1)
        ghat_i[i] = blocks[:, jdx, :, jdx].sum(axis=0) / n
        y = full[np.ix_(rows, keep)] + 0.0
        # X and X - Lambda kron I agree off the removed triple's diagonal
        q_i[i] = (y @ r_minor @ y.conj().T
                  - lin.x[np.ix_(rows, rows)] - phi_ac(ghat_i[i]))
        r_frob[i] = np.linalg.norm(r_minor)
        lhs = -q_i[i]
        rhs = np.linalg.inv(g_i[i]) + lam3 + phi_ac(ghat_i[i])
        key_res = max(key_res, np.linalg.norm(lhs - rhs)
                      / max(np.linalg.norm(rhs), 1e-300))
    qnorm = _spectral_norms(q_i)
    fluct_i = _fluct_from(qnorm, r_frob, n)
    return ResolventStats(z=complex(z), g_i=g_i, g_avg=g_i.mean(axis=0),
                          ghat_i=ghat_i, q_i=q_i, r_i_frob=r_frob,
                          fluct_i=fluct_i, fluct=float(fluct_i.max()),
                          route="minor", key_identity_residual=float(key_res))


def _stats_schur(lin: Linearization, z: complex) -> ResolventStats:
    n = lin.n
    r = generalized_resolvent(lin, z)
    lam3 = np.diag([z, -1.0 + 0j, 1.0 + 0j])
    idx = np.arange(n)
    r4 = r.reshape(3, n, 3, n)
    g_i = r4[:, idx, :, idx]                       # (N, 3, 3)
    g_inv = np.linalg.inv(g_i)
    g_avg = g_i.mean(axis=0)
    # Schur identity: the padded minor is R - (R e_i*) G_i^-1 (e_i R), so the
    # corner-block average and |R_i|_2 follow from R alone.
    corr = np.einsum("ajbi,ibc,cidj->iad", r4, g_inv, r4, optimize=True)
    ghat_i = g_avg[None, :, :] - corr / n
    q_i = -(g_inv + lam3[None, :, :] + np.stack([phi_ac(gh) for gh in ghat_i]))
    f = r.conj().T @ r
    rf = r @ f
    f4 = f.reshape(3, n, 3, n)
    rf4 = rf.reshape(3, n, 3, n)
    uu = f4[:, idx, :, idx]                        # F[cols_i, cols_i]
    h3 = rf4[:, idx, :, idx]                       # (R F)[rows_i, cols_i]
    r3 = r.reshape(3, n, 3 * n)
    vv = np.einsum("aik,bik->iab", r3, r3.conj(), optimize=True)
    norm_r2 = np.vdot(r, r).real
    t1 = np.einsum("iab,iba->i", h3, g_inv)
    t2 = np.einsum("iba,ibc,icd,ida->i", g_inv.conj(), uu, g_inv, vv, optimize=True)
    r_frob2 = norm_r2 - 2.0 * t1.real + t2.real
    r_frob = np.sqrt(np.maximum(r_frob2, 0.0))
    qnorm = _spectral_norms(q_i)
    fluct_i = _fluct_from(qnorm, r_frob, n)
    return ResolventStats(z=complex(z), g_i=g_i, g_avg=g_avg, ghat_i=ghat_i,
                          q_i=q_i, r_i_frob=r_frob, fluct_i=fluct_i,
                          fluct=float(fluct_i.max()), route="schur",
                          key_identity_residual=None)


def resolvent_stats(lin: Linearization, z: complex, route: str = "minor") -> ResolventStats:
    """Per-index resolvent statistics at z.

    route='minor' inverts every 3(N-1) minor (definitional; N <= 256).
    route='schur' derives the same quantities from the full resolvent via the
    Schur identity at matrix-multiplication cost.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if route == "minor":
        return _stats_minor(lin, z)
    if route == "schur":
        return _stats_schur(lin, z)
    raise ValueError(f"unknown route {route!r}")


@dataclass
class FluctuationNet:
    """Supremum of the fluctuation statistic over a net: ``k2`` is twice the
    observed maximum (the safety factor for net approximation), and
    ``lipschitz_budget`` = c * N^(7/2) * spacing records how much the
    statistic could move between net points."""

    k2: float
    max_fluct: float
    net: np.ndarray
    per_point: np.ndarray
    spacing: float
    lipschitz_budget: float


def fluctuation_sup(lin: Linearization, rect: tuple[float, float, float, float],
                    spacing: float, route: str = "schur",
                    tau: float = 8.0, lipschitz_c: float = 1.0) -> FluctuationNet:
    """Evaluate the fluctuation statistic on a uniform net of the rectangle
    (re_min, re_max, im_min, im_max) and return twice the maximum.

    The rectangle must lie within |Re z| <= 8, 1/N <= Im z <= tau.
    """
    from .grids import uniform_net

    re_min, re_max, im_min, im_max = rect
    n = lin.n
    if not (-8.0 <= re_min <= re_max <= 8.0):
        raise ValueError("rectangle must satisfy |Re z| <= 8")
    if im_min < 1.0 / n - 1e-12 or im_max > tau + 1e-12:
        raise ValueError(f"rectangle must satisfy 1/N <= Im z <= tau={tau}")
    net = uniform_net(re_min, re_max, im_min, im_max, spacing)
    vals = np.array([resolvent_stats(lin, z, route=route).fluct for z in net])
    mx = float(vals.max())
    return FluctuationNet(k2=2.0 * mx, max_fluct=mx, net=net, per_point=vals,
                          spacing=spacing,
                          lipschitz_budget=lipschitz_c * n**3.5 * spacing)


@dataclass
class AnticommutatorSpectrum:
    """Eigendecomposition of {UV}, for cheap resolvent diagonals on grids."""

    evals: np.ndarray
    evecs: np.ndarray

    @classmethod
    def from_pair(cls, pair: WignerPair) -> "AnticommutatorSpectrum":
        ac = pair.u @ pair.v + pair.v @ pair.u
        evals, evecs = np.linalg.eigh(ac)
        return cls(evals=evals, evecs=evecs)

    def resolvent_diag(self, z: complex) -> np.ndarray:
        """Diagonal of ({UV} - z)^-1."""
        return (np.abs(self.evecs) ** 2) @ (1.0 / (self.evals - z))


def resolvent_row_sum_check(h: np.ndarray, z: complex) -> float:
    """Largest relative residual, over rows i, of the identities

        Im (h - z)^-1 (i,i) / Im z = sum_j |(h - z)^-1 (i,j)|^2
                                   = sum_j |(h - z)^-1 (j,i)|^2

    for a Hermitian h."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    h = np.asarray(h, dtype=complex)
    r = np.linalg.inv(h - z * np.eye(h.shape[0]))
    lhs = np.diag(r).imag / z.imag
    rows = (np.abs(r) ** 2).sum(axis=1)
    cols = (np.abs(r) ** 2).sum(axis=0)
    scale = np.maximum(np.abs(lhs), 1e-300)
    return float(max(np.max(np.abs(lhs - rows) / scale),
                     np.max(np.abs(lhs - cols) / scale)))


def block_inversion_check(mat: np.ndarray, split: int) -> dict[str, float]:
    """Relative residuals of the two 2x2-block inversion identities for
    ``mat`` split as [[a, b], [c, d]] with a of size ``split``.

    The first writes the inverse through the Schur complement a - b d^-1 c;
    the second reassembles it from its own corner blocks.
    """
    mat = np.asarray(mat, dtype=complex)
    k = split
    a, b = mat[:k, :k], mat[:k, k:]
    c, d = mat[k:, :k], mat[k:, k:]
    d_inv = np.linalg.inv(d)
    full_inv = np.linalg.inv(mat)
    schur = a - b @ d_inv @ c
    schur_inv = np.linalg.inv(schur)
    pad = np.zeros_like(mat)
    pad[k:, k:] = d_inv
    left = np.vstack([np.eye(k), -d_inv @ c])
    right = np.hstack([np.eye(k), -b @ d_inv])
    first = pad + left @ schur_inv @ right
    p, q = full_inv[:k, :k], full_inv[:k, k:]
    r_blk = full_inv[k:, :k]
    second = pad + np.vstack([p, r_blk]) @ np.linalg.inv(p) @ np.hstack([p, q])
    scale = np.linalg.norm(full_inv)
    return {
        "schur_form": float(np.linalg.norm(first - full_inv) / scale),
        "corner_form": float(np.linalg.norm(second - full_inv) / scale),
    }
