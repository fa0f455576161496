"""Schwinger-Dyson machinery over finite-dimensional algebras.

A triple (Lambda, M, Phi) with Lambda, M in an algebra S and Phi a linear map
on S solves the Schwinger-Dyson equation when 1 + (Lambda + Phi(M))M = 0; it
is nondegenerate when x -> M^-1 x - Phi(x) M is invertible, with inverse
kappa.  The quantity 1/(8 max(1,|kappa|) max(1,|Phi|)) is the stability
radius: approximate solutions within it are pinned to the exact one.

Two instances are built here: the 3x3 anticommutator solution with
Lambda = diag(z, -1, 1), M = diag(m, -1/(m-1), -1/(m+1)) and the sandwich map
Phi(A) = (e12+e21)A(e12+e21) + (e13+e31)A(e13+e31); and the scalar
semicircle solution (z, m, 1, (1/m - m)^-1).

Operator norms of linear maps on Mat3 (with the spectral norm) are not
available in closed form, so every bound that must be *valid* (radii,
implication right-hand sides) uses certified upper bounds, and a Monte Carlo
estimator is provided for diagnostics only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .freelaw import edge_distance, law_constants, m_ac

__all__ = [
    "SingularMapError",
    "PoleProximityError",
    "DeformationPreconditionError",
    "DeformationConvergenceError",
    "SingularStatisticsError",
    "LinMap3",
    "SDQuadruple",
    "ScalarQuadruple",
    "KappaBlocks",
    "ImplicationVerdict",
    "DeformationSolution",
    "GaugeReport",
    "vec3",
    "unvec3",
    "phi_ac",
    "phi_map",
    "op_norm_upper",
    "op_norm_upper_spectral",
    "certified_norm_upper",
    "op_norm_estimate",
    "sd_solution_ac",
    "sd_residual",
    "kappa_blocks",
    "deformation_solve",
    "stability_check",
    "error_gauge",
    "gauge_implication_check",
    "sd_semicircle",
    "stability_constant_estimate",
]

#: condition-number ceiling for the 9x9 inversion defining kappa
COND_LIMIT = 1e12

#: guarded distance to the poles of the explicit kappa blocks
POLE_RADIUS = 1e-8


class SingularMapError(RuntimeError):
    """The 9x9 matrix of the linear map is too ill-conditioned to invert."""


class PoleProximityError(RuntimeError):
    """m is too close to a pole of the explicit block formulas."""


class DeformationPreconditionError(RuntimeError):
    """The requested perturbation exceeds the contraction precondition."""


class DeformationConvergenceError(RuntimeError):
    """The fixed-point iteration did not converge."""


class SingularStatisticsError(RuntimeError):
    """A statistics matrix G_i is numerically singular."""


# Matrix entries of Mat3 are ordered so that the map x -> M^-1 x - Phi(x) M
# becomes block diagonal: diagonal entries first, then the (1,2)/(2,1),
# (1,3)/(3,1) and (2,3)/(3,2) pairs.
_BASIS = ((0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1))
_BLOCK_COORDS = ((0, 1, 2), (3, 4), (5, 6), (7, 8))

_P12 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
_P13 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)


def vec3(a: np.ndarray) -> np.ndarray:
    """Coordinates of a 3x3 matrix in the block-diagonalizing basis order."""
    a = np.asarray(a)
    return np.array([a[i, j] for i, j in _BASIS], dtype=complex)


def unvec3(x: np.ndarray) -> np.ndarray:
    a = np.empty((3, 3), dtype=complex)
    for k, (i, j) in enumerate(_BASIS):
        a[i, j] = x[k]
    return a


class LinMap3:
    """Linear map on Mat3 stored as its 9x9 matrix in the basis above."""

    def __init__(self, mat: np.ndarray):
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (9, 9):
            raise ValueError("LinMap3 expects a 9x9 matrix")
        self.mat = mat

    @classmethod
    def from_action(cls, fn) -> "LinMap3":
        cols = []
        for i, j in _BASIS:
            e = np.zeros((3, 3), dtype=complex)
            e[i, j] = 1.0
            cols.append(vec3(fn(e)))
        return cls(np.array(cols).T)

    @classmethod
    def identity(cls) -> "LinMap3":
        return cls(np.eye(9, dtype=complex))

    def __call__(self, a: np.ndarray) -> np.ndarray:
        return unvec3(self.mat @ vec3(a))

    def inverse(self, cond_limit: float = COND_LIMIT) -> "LinMap3":
        cond = np.linalg.cond(self.mat)
        if not np.isfinite(cond) or cond > cond_limit:
            raise SingularMapError(f"9x9 map condition {cond:.3e} exceeds {cond_limit:.0e}")
        return LinMap3(np.linalg.inv(self.mat))


def phi_ac(a: np.ndarray) -> np.ndarray:
    """Sandwich map (e12+e21) A (e12+e21) + (e13+e31) A (e13+e31)."""
    a = np.asarray(a, dtype=complex)
    return _P12 @ a @ _P12 + _P13 @ a @ _P13


_PHI = LinMap3.from_action(phi_ac)


def phi_map() -> LinMap3:
    """The sandwich map as a LinMap3."""
    return _PHI


def op_norm_upper(t: LinMap3) -> float:
    """Certified upper bound sqrt(3) * sum of the 81 coefficient moduli for
    the operator norm induced by the spectral norm on Mat3."""
    return float(np.sqrt(3.0) * np.abs(t.mat).sum())


def op_norm_upper_spectral(t: LinMap3) -> float:
    """Certified upper bound sqrt(3) * (largest singular value of the 9x9
    matrix).  Valid because |T(A)| <= |T(A)|_F <= smax |A|_F <= smax
    sqrt(3) |A| for 3x3 A."""
    return float(np.sqrt(3.0) * np.linalg.norm(t.mat, 2))


def certified_norm_upper(t: LinMap3) -> float:
    """The smaller of the two certified upper bounds."""
    return min(op_norm_upper(t), op_norm_upper_spectral(t))


def op_norm_estimate(t: LinMap3, samples: int = 2000, seed: int = 0) -> float:
    """Monte Carlo lower estimate of the induced operator norm.

    Draws random unit-spectral-norm inputs, then refines the best one by
    hill climbing.  Diagnostics only: always below the certified bounds.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.Generator(np.random.Philox(key=seed))

    def ratio(x):
        return np.linalg.norm(t(x), 2)

    # structured candidates first (identity and elementary matrices often
    # realize the norm for maps with sparse coefficient structure)
    candidates = [np.eye(3, dtype=complex)]
    for i, j in _BASIS:
        e = np.zeros((3, 3), dtype=complex)
        e[i, j] = 1.0
        candidates.append(e)
    best_val, best_x = 0.0, None
    for x in candidates:
        v = ratio(x)
        if v > best_val:
            best_val, best_x = v, x
    for _ in range(samples):
        x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        x /= np.linalg.norm(x, 2)
        v = ratio(x)
        if v > best_val:
            best_val, best_x = v, x
    step = 0.5
    while step > 1e-7 and best_x is not None:
        improved = False
        for _ in range(60):
            y = best_x + step * (rng.standard_normal((3, 3))
                                 + 1j * rng.standard_normal((3, 3)))
            y /= np.linalg.norm(y, 2)
            v = ratio(y)
            if v > best_val:
                best_val, best_x = v, y
                improved = True
        if not improved:
            step /= 4.0
    return float(best_val)


@dataclass
class SDQuadruple:
    """Nondegenerate Schwinger-Dyson solution over Mat3 at one z, with
    certified norm bounds and the derived stability radius.  Treat as
    immutable after construction."""

    z: complex
    m: complex
    lambda_mat: np.ndarray
    m_mat: np.ndarray
    phi: LinMap3
    kappa: LinMap3
    op_norm_kappa_upper: float
    op_norm_phi_upper: float
    stability_radius: float


def sd_residual(quad: SDQuadruple) -> float:
    """Spectral norm of 1 + (Lambda + Phi(M)) M."""
    r = np.eye(3) + (quad.lambda_mat + phi_ac(quad.m_mat)) @ quad.m_mat
    return float(np.linalg.norm(r, 2))


def sd_solution_ac(z: complex) -> SDQuadruple:
    """The anticommutator solution at z: Lambda = diag(z, -1, 1) and
    M = diag(m, -1/(m-1), -1/(m+1)) with m the upper-half-plane root of the
    defining cubic; kappa is built by inverting the 9x9 matrix of
    x -> M^-1 x - Phi(x) M.

    Raises SingularMapError when that inversion is ill-conditioned beyond
    1e12, and propagates the root-solver errors of m_ac.
    """
    m = m_ac(z).m
    lam = np.diag([z, -1.0 + 0j, 1.0 + 0j])
    m_mat = np.diag([m, -1.0 / (m - 1.0), -1.0 / (m + 1.0)])
    m_inv = np.diag([1.0 / m, -(m - 1.0), -(m + 1.0)])
    kinv = LinMap3.from_action(lambda x: m_inv @ x - phi_ac(x) @ m_mat)
    kappa = kinv.inverse()
    k_up = certified_norm_upper(kappa)
    p_up = certified_norm_upper(_PHI)
    quad = SDQuadruple(
        z=complex(z), m=m, lambda_mat=lam, m_mat=m_mat, phi=_PHI, kappa=kappa,
        op_norm_kappa_upper=k_up, op_norm_phi_upper=p_up,
        stability_radius=1.0 / (8.0 * max(1.0, k_up) * max(1.0, p_up)),
    )
    if sd_residual(quad) > 1e-10:
        raise SingularMapError(f"Schwinger-Dyson residual too large at z={z}")
    return quad


_W = law_constants().omega
_POLES = (0.0, 1.0, -1.0, 0.5, -0.5, _W, -_W, 1j / _W, -1j / _W)


@dataclass
class KappaBlocks:
    """Explicit block decomposition of x -> M^-1 x - Phi(x) M over the
    block-diagonalizing basis: a 3x3 block on the diagonal entries and three
    2x2 blocks on the off-diagonal pairs, with closed-form determinants and
    inverses, plus the assembled inverse map."""

    m: complex
    blocks: list
    dets: list
    det_formulas: list
    inverse_blocks: list
    kappa_assembled: LinMap3


def kappa_blocks(m: complex) -> KappaBlocks:
    """Blocks, determinants and explicit inverses of the linear map at a
    given Stieltjes value m.

    Raises PoleProximityError within 1e-8 of m in {0, +-1, +-1/2, +-omega,
    +-i/omega}, where a block or its determinant degenerates.
    """
    m = complex(m)
    if min(abs(m - p) for p in _POLES) < POLE_RADIUS:
        raise PoleProximityError(f"m={m} too close to a block pole")
    b0 = np.array([
        [1.0 / m, -m, -m],
        [1.0 / (m - 1.0), -(m - 1.0), 0.0],
        [1.0 / (m + 1.0), 0.0, -(m + 1.0)],
    ], dtype=complex)
    b1 = np.array([[1.0 / m, 1.0 / (m - 1.0)], [-m, -(m - 1.0)]], dtype=complex)
    b2 = np.array([[1.0 / m, 1.0 / (m + 1.0)], [-m, -(m + 1.0)]], dtype=complex)
    b3 = np.array([[-(m - 1.0), 0.0], [0.0, -(m + 1.0)]], dtype=complex)
    blocks = [b0, b1, b2, b3]
    dets = [complex(np.linalg.det(b)) for b in blocks]
    q = m**4 + 4.0 * m**2 - 1.0
    det_formulas = [
        -q / (m * (m - 1.0) * (m + 1.0)),
        (2.0 * m - 1.0) / (m * (m - 1.0)),
        -(2.0 * m + 1.0) / (m * (m + 1.0)),
        (m - 1.0) * (m + 1.0),
    ]
    inv0 = np.array([
        [-((m**2 - 1.0) ** 2) * m, m**2 * (m**2 - 1.0) * (m + 1.0), m**2 * (m**2 - 1.0) * (m - 1.0)],
        [-((m + 1.0) ** 2) * m, (2.0 * m + 1.0) * (m - 1.0), m**2 * (m + 1.0)],
        [-((m - 1.0) ** 2) * m, m**2 * (m - 1.0), -(2.0 * m - 1.0) * (m + 1.0)],
    ], dtype=complex) / q
    inv1 = np.array([[-((m - 1.0) ** 2) * m, -m], [m**2 * (m - 1.0), m - 1.0]],
                    dtype=complex) / (2.0 * m - 1.0)
    inv2 = np.array([[((m + 1.0) ** 2) * m, m], [-(m**2) * (m + 1.0), -(m + 1.0)]],
                    dtype=complex) / (2.0 * m + 1.0)
    inv3 = np.array([[-1.0 / (m - 1.0), 0.0], [0.0, -1.0 / (m + 1.0)]], dtype=complex)
    inverse_blocks = [inv0, inv1, inv2, inv3]
    k9 = np.zeros((9, 9), dtype=complex)
    for coords, inv in zip(_BLOCK_COORDS, inverse_blocks):
        k9[np.ix_(coords, coords)] = inv
    return KappaBlocks(m=m, blocks=blocks, dets=dets, det_formulas=det_formulas,
                       inverse_blocks=inverse_blocks, kappa_assembled=LinMap3(k9))


@dataclass
class DeformationSolution:
    """Output of the deformation fixed-point solve: the deformed M together
    with iteration diagnostics."""

    m_new: np.ndarray
    iterations: int
    max_contraction: float
    residual: float


def deformation_solve(base: SDQuadruple, lambda_new: np.ndarray,
                      max_iter: int = 200, tol: float = 1e-12) -> DeformationSolution:
    """Solve the Schwinger-Dyson equation at a nearby Lambda by iterating
    the quadratic map x -> kappa(Theta M0 + Theta x + Phi(x) x) from zero,
    where Theta = lambda_new - Lambda0.

    The certified preconditions eps <= 1/(4 k* p*) and |Theta| <= eps/(4 k* m*)
    (k*, p* the kappa/Phi upper bounds, m* = max(1, |M0|)) guarantee the map
    contracts with factor <= 3/4 on the eps-ball; the observed per-iteration
    ratios are recorded and enforced.
    """
    lambda_new = np.asarray(lambda_new, dtype=complex)
    theta = lambda_new - base.lambda_mat
    k_up = max(1.0, base.op_norm_kappa_upper)
    p_up = max(1.0, base.op_norm_phi_upper)
    m_up = max(1.0, float(np.linalg.norm(base.m_mat, 2)))
    eps = 1.0 / (4.0 * k_up * p_up)
    delta = eps / (4.0 * k_up * m_up)
    t_norm = float(np.linalg.norm(theta, 2))
    if t_norm > delta:
        raise DeformationPreconditionError(
            f"|Theta| = {t_norm:.3e} exceeds the allowed {delta:.3e}")
    x = np.zeros((3, 3), dtype=complex)
    prev_step = None
    max_ratio = 0.0
    for it in range(1, max_iter + 1):
        x_next = base.kappa(theta @ base.m_mat + theta @ x + phi_ac(x) @ x)
        step = float(np.linalg.norm(x_next - x, 2))
        if prev_step is not None and prev_step > 0.0:
            ratio = step / prev_step
            max_ratio = max(max_ratio, ratio)
            if ratio > 0.75 + 1e-6:
                raise DeformationConvergenceError(
                    f"contraction ratio {ratio:.4f} above 3/4 at iteration {it}")
        x = x_next
        if step <= tol:
            break
        prev_step = step
    else:
        raise DeformationConvergenceError(f"no convergence in {max_iter} iterations")
    m_new = base.m_mat + x
    resid = np.eye(3) + (lambda_new + phi_ac(m_new)) @ m_new
    resid_norm = float(np.linalg.norm(resid, 2))
    if resid_norm > 1e-10:
        raise DeformationConvergenceError(f"deformed residual {resid_norm:.3e}")
    return DeformationSolution(m_new=m_new, iterations=it,
                               max_contraction=max_ratio, residual=resid_norm)


@dataclass
class ImplicationVerdict:
    """Evaluation of a stability-style implication: if lhs <= threshold then
    lhs <= rhs.  ``holds`` is vacuously true when the hypothesis is not met."""

    z: complex
    lhs: float
    rhs: float
    hypothesis_met: bool
    holds: bool
    gauge: float | None = None


def stability_check(base: SDQuadruple, g0: np.ndarray) -> ImplicationVerdict:
    """Check the stability implication at an arbitrary G0: with
    E0 = 1 + (Lambda0 + Phi(G0)) G0,

        |G0 - M0| <= radius  =>  |G0 - M0| <= 20 k* p* m*^2 |E0|,

    with certified upper bounds on the right-hand side."""
    g0 = np.asarray(g0, dtype=complex)
    e0 = np.eye(3) + (base.lambda_mat + phi_ac(g0)) @ g0
    lhs = float(np.linalg.norm(g0 - base.m_mat, 2))
    k_up = max(1.0, base.op_norm_kappa_upper)
    p_up = max(1.0, base.op_norm_phi_upper)
    m_up = max(1.0, float(np.linalg.norm(base.m_mat, 2)))
    rhs = 20.0 * k_up * p_up * m_up**2 * float(np.linalg.norm(e0, 2))
    hyp = lhs <= base.stability_radius
    return ImplicationVerdict(z=base.z, lhs=lhs, rhs=rhs, hypothesis_met=hyp,
                              holds=(not hyp) or lhs <= rhs)


@dataclass
class GaugeReport:
    """The self-consistency error gauge of a family {G_i, Ghat_i}: the max
    over i of |G_i^-1 + Lambda0 + Phi(Ghat_i)| / max(1,|Ghat_i|)^(1/2) and of
    sqrt(|Ghat_i - avg G| / (max(1,|G_i|) |G_i^-1|))."""

    value: float
    ratio_equation: np.ndarray
    ratio_average: np.ndarray


def error_gauge(g_list, ghat_list, base: SDQuadruple) -> GaugeReport:
    """Compute the error gauge; raises SingularStatisticsError when some G_i
    has condition number beyond 1e12."""
    g = np.asarray(g_list, dtype=complex)
    ghat = np.asarray(ghat_list, dtype=complex)
    if g.shape != ghat.shape or g.ndim != 3 or g.shape[1:] != (3, 3):
        raise ValueError("expected matching lists of 3x3 matrices")
    conds = np.linalg.cond(g)
    if np.any(~np.isfinite(conds)) or np.any(conds > COND_LIMIT):
        raise SingularStatisticsError("some G_i is numerically singular")
    g_inv = np.linalg.inv(g)
    g_avg = g.mean(axis=0)
    n = g.shape[0]
    r_eq = np.empty(n)
    r_av = np.empty(n)
    for i in range(n):
        num = np.linalg.norm(g_inv[i] + base.lambda_mat + phi_ac(ghat[i]), 2)
        r_eq[i] = num / np.sqrt(max(1.0, np.linalg.norm(ghat[i], 2)))
        dev = np.linalg.norm(ghat[i] - g_avg, 2)
        r_av[i] = np.sqrt(dev / (max(1.0, np.linalg.norm(g[i], 2))
                                 * np.linalg.norm(g_inv[i], 2)))
    return GaugeReport(value=float(max(r_eq.max(), r_av.max())),
                       ratio_equation=r_eq, ratio_average=r_av)


def gauge_implication_check(g_list, ghat_list, base: SDQuadruple) -> ImplicationVerdict:
    """Check the self-consistent implication: if max_i |G_i - M0| <= radius
    then max_i |G_i - M0| <= 2^14 (1+|M0|)^7 max(p*, l*)^4 k* * gauge, with
    certified upper bounds on the right."""
    rep = error_gauge(g_list, ghat_list, base)
    g = np.asarray(g_list, dtype=complex)
    lhs = float(max(np.linalg.norm(gi - base.m_mat, 2) for gi in g))
    k_up = max(1.0, base.op_norm_kappa_upper)
    p_up = max(1.0, base.op_norm_phi_upper)
    l_up = max(1.0, float(np.linalg.norm(base.lambda_mat, 2)))
    m_norm = float(np.linalg.norm(base.m_mat, 2))
    rhs = 2.0**14 * (1.0 + m_norm) ** 7 * max(p_up, l_up) ** 4 * k_up * rep.value
    hyp = lhs <= base.stability_radius
    return ImplicationVerdict(z=base.z, lhs=lhs, rhs=rhs, hypothesis_met=hyp,
                              holds=(not hyp) or lhs <= rhs, gauge=rep.value)


@dataclass(frozen=True)
class ScalarQuadruple:
    """Scalar semicircle solution (z, m, 1, (1/m - m)^-1) and its radius."""

    z: complex
    m: complex
    phi: complex
    kappa: complex
    stability_radius: float


def sd_semicircle(z: complex) -> ScalarQuadruple:
    """Semicircle Schwinger-Dyson solution: m with m^2 + z m + 1 = 0 and
    Im m > 0, kappa = (1/m - m)^-1, stability radius (1 ^ |1/m - m|)/8.

    The radius provably dominates sqrt(1 ^ |z-2| ^ |z+2|)/8; this is checked
    on construction.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError(f"z must lie in the upper half-plane, got {z}")
    s = np.sqrt(complex(z * z - 4.0))
    m = (-z + s) / 2.0
    if m.imag <= 0:
        m = (-z - s) / 2.0
    kappa = 1.0 / (1.0 / m - m)
    radius = 1.0 / (8.0 * max(1.0, abs(kappa)))
    floor = np.sqrt(min(1.0, abs(z - 2.0), abs(z + 2.0))) / 8.0
    if radius < floor - 1e-12:
        raise AssertionError("semicircle radius bound violated")
    return ScalarQuadruple(z=z, m=complex(m), phi=1.0 + 0j, kappa=complex(kappa),
                           stability_radius=float(radius))


def stability_constant_estimate(z_grid) -> float:
    """Empirical estimate of the absolute constant c with stability radius
    >= sqrt(h)/c: the supremum of sqrt(h)/radius over the grid.  Exposed as
    a helper; downstream code takes c as a config input."""
    best = 0.0
    for z in z_grid:
        quad = sd_solution_ac(z)
        best = max(best, np.sqrt(edge_distance(z)) / quad.stability_radius)
    return float(best)
