"""Offline construction of generalized Gaussian quadrature rules.

Pipeline, for a parametrized family of integrands on [0, 1]:

1. sample the family on a parameter grid;
2. discretize [0, 1] with an adaptively refined panel quadrature until the
   whole family (and products of the compressed basis) integrate to the
   requested precision;
3. orthonormalize the sampled functions and truncate at the precision
   threshold, giving a rank-k basis;
4. select k panel points by pivoted QR and solve for weights: a k-point
   rule exact on the basis (a Chebyshev-type rule);
5. shrink the rule one node at a time, re-solving the nonlinear moment
   system with damped Gauss-Newton, while the moment residual stays below
   the design threshold.

The basis is carried as per-panel Legendre expansions, which gives stable
evaluation and differentiation at arbitrary points for the Gauss-Newton
step without touching the (possibly huge) raw family again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .exceptions import BuilderError, DomainError
from .oracle import adaptive_integrate

_ORDER = 16
_REF_X, _REF_W = np.polynomial.legendre.leggauss(_ORDER)  # on [-1, 1]
# Legendre Vandermonde at the reference nodes and its LU factorization, for
# value -> coefficient transforms.
_VAND = np.polynomial.legendre.legvander(_REF_X, _ORDER - 1)
_VAND_LU = scipy.linalg.lu_factor(_VAND)
# Synthesis matrices from parent-panel coefficients to the quadrature nodes
# of its two half-panels, for interpolation-defect checks.
_SYNTH_LEFT = np.polynomial.legendre.legvander(0.5 * (_REF_X - 1.0), _ORDER - 1)
_SYNTH_RIGHT = np.polynomial.legendre.legvander(0.5 * (_REF_X + 1.0), _ORDER - 1)


@dataclass(frozen=True)
class GridSpec:
    """One parameter axis of a function family."""

    lo: float
    hi: float
    count: int
    spacing: str = "chebyshev"  # chebyshev (endpoints included) | equispaced

    def points(self) -> np.ndarray:
        if self.count < 1:
            raise DomainError("grid count must be positive")
        if self.count == 1:
            return np.array([0.5 * (self.lo + self.hi)])
        if self.spacing == "equispaced":
            return np.linspace(self.lo, self.hi, self.count)
        if self.spacing == "chebyshev":
            theta = np.pi * np.arange(self.count) / (self.count - 1)
            pts = 0.5 * (self.lo + self.hi) - 0.5 * (self.hi - self.lo) * np.cos(theta)
            pts[0], pts[-1] = self.lo, self.hi
            return pts
        raise DomainError(f"unknown spacing {self.spacing!r}")


@dataclass(frozen=True)
class FunctionFamily:
    """A parametrized family t in [0,1] -> R to be integrated by one rule.

    evaluator(t, *params) must broadcast: t has shape (m, 1) and each
    parameter column shape (1, n), producing an (m, n) block.
    """

    evaluator: Callable[..., np.ndarray]
    grids: tuple[GridSpec, ...]
    eps: float
    name: str = ""

    def __post_init__(self):
        if not self.grids:
            raise DomainError("family needs at least one parameter grid")
        if not (0.0 < self.eps < 1.0):
            raise DomainError(f"family eps must lie in (0, 1), got {self.eps}")


class SampledFamily:
    """The family frozen on its parameter grid: N concrete functions of t."""

    def __init__(self, family: FunctionFamily):
        self.family = family
        axes = [g.points() for g in family.grids]
        mesh = np.meshgrid(*axes, indexing="ij")
        self.params = np.stack([m.ravel() for m in mesh], axis=1)  # (N, P)
        self.n_functions = self.params.shape[0]

    def __len__(self) -> int:
        return self.n_functions

    def __getitem__(self, i: int) -> Callable[[np.ndarray], np.ndarray]:
        row = self.params[i]

        def fn(t: np.ndarray) -> np.ndarray:
            t = np.atleast_1d(np.asarray(t, dtype=float))
            cols = [np.array([[v]]) for v in row]
            return self.family.evaluator(t[:, None], *cols)[:, 0]

        return fn

    def eval_block(self, t: np.ndarray, lo: int, hi: int) -> np.ndarray:
        """(len(t), hi-lo) block of function values."""
        cols = [self.params[lo:hi, j][None, :] for j in range(self.params.shape[1])]
        return self.family.evaluator(np.asarray(t, dtype=float)[:, None], *cols)

    def blocks(self, block: int = 1024):
        for lo in range(0, self.n_functions, block):
            yield lo, min(lo + block, self.n_functions)


def sample_family(family: FunctionFamily) -> SampledFamily:
    """Freeze the family on its grid (the product of all parameter axes)."""
    return SampledFamily(family)


# ---------------------------------------------------------------------------
# Discretization.


def _panel_points(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = edges[:-1][:, None]
    width = np.diff(edges)[:, None]
    pts = lo + 0.5 * width * (1.0 + _REF_X[None, :])
    wts = 0.5 * width * _REF_W[None, :]
    return pts.ravel(), wts.ravel()


def _children_points(edges: np.ndarray) -> np.ndarray:
    mids = 0.5 * (edges[:-1] + edges[1:])
    child_edges = np.sort(np.concatenate([edges, mids]))
    return child_edges


@dataclass
class DiscretizedBasis:
    """Adaptive panel quadrature plus an orthonormal basis resolved on it."""

    edges: np.ndarray
    points: np.ndarray
    weights: np.ndarray
    basis_values: np.ndarray  # (m, k), unscaled u_l(t_j)
    moments: np.ndarray  # (k,) integrals of the basis over [0, 1]
    leg_coef: np.ndarray  # (P, order, k) per-panel Legendre coefficients
    leg_coef_d: np.ndarray  # (P, order, k) coefficients of d/dt
    rank: int
    eps: float
    singular_values: np.ndarray
    family: SampledFamily
    gram_defect: float = 0.0

    def eval_basis(self, t: np.ndarray, derivative: bool = False) -> np.ndarray:
        """Evaluate all k basis functions (or derivatives) at arbitrary t."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, len(self.edges) - 2)
        lo = self.edges[idx]
        width = self.edges[idx + 1] - self.edges[idx]
        xi = 2.0 * (t - lo) / width - 1.0
        coef = self.leg_coef_d[idx] if derivative else self.leg_coef[idx]  # (n, order, k)
        out = _legval_rows(xi, coef)
        return out

    def family_integrals(self, block: int = 1024) -> np.ndarray:
        out = np.empty(len(self.family))
        for lo, hi in self.family.blocks(block):
            out[lo:hi] = self.weights @ self.family.eval_block(self.points, lo, hi)
        return out


def _legval_rows(xi: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """Sum_p coef[n, p, :] P_p(xi[n]) for each row n; returns (n, k)."""
    n, order, k = coef.shape
    out = np.zeros((n, k))
    p_prev = np.ones_like(xi)
    p_cur = xi.copy()
    out += coef[:, 0, :] * p_prev[:, None]
    if order > 1:
        out += coef[:, 1, :] * p_cur[:, None]
    for p in range(2, order):
        p_next = ((2 * p - 1) * xi * p_cur - (p - 1) * p_prev) / p
        out += coef[:, p, :] * p_next[:, None]
        p_prev, p_cur = p_cur, p_next
    return out


def _refine_family_level(
    sampled: SampledFamily,
    edges: np.ndarray,
    tol: float,
    max_panels: int,
    block: int,
    l2_tol: float | None = None,
) -> np.ndarray:
    """Split panels until the family is resolved on them.

    Two per-panel criteria, checked against one further subdivision for
    every family member: the panel integral must agree to tol absolutely,
    and the panel's polynomial interpolant must agree pointwise to 5*tol
    relative to the panel's largest function value.  The second criterion
    is what the Gauss-Newton stage relies on; a panel whose integral is
    already exact can still carry degree content beyond the panel order
    that only interpolation sees.  The panel touching zero is exempt from
    the interpolation criterion: for families with an integrable
    singularity it can never be met there and no rule nodes live that
    deep.

    l2_tol optionally adds a weight-scaled l2 fit criterion.  Splitting
    always shrinks that metric (even at the evaluation-noise floor), so it
    forces extra oversampling whose averaging pushes the basis moments
    beyond pointwise noise; used for rules that must pin node positions,
    not just integral values.
    """
    int_floor = 0.0
    # Oscillatory phases of size ~100 make pointwise evaluation noise of
    # order 1e-14 relative; fits below that are unreachable.
    fit_floor = 5e-14
    best_int = best_fit = math.inf
    int_stall = fit_stall = 0
    for _ in range(64):
        pts, _w = _panel_points(edges)
        child_edges = _children_points(edges)
        cpts, _cw = _panel_points(child_edges)
        n_panels = len(edges) - 1
        worst_int = np.zeros(n_panels)
        worst_fit = np.zeros(n_panels)
        worst_l2 = np.zeros(n_panels)
        half_w = 0.5 * np.diff(edges)
        quarter_w = 0.5 * np.diff(child_edges)
        for lo, hi in sampled.blocks(block):
            nb = hi - lo
            fv = sampled.eval_block(pts, lo, hi).reshape(n_panels, _ORDER, nb)
            ip = np.einsum("o,pon->pn", _REF_W, fv) * half_w[:, None]
            fc = sampled.eval_block(cpts, lo, hi).reshape(2 * n_panels, _ORDER, nb)
            ic = np.einsum("o,pon->pn", _REF_W, fc) * quarter_w[:, None]
            ic2 = ic[0::2] + ic[1::2]
            worst_int = np.maximum(worst_int, np.max(np.abs(ip - ic2), axis=1))
            coef = scipy.linalg.lu_solve(
                _VAND_LU, fv.transpose(1, 0, 2).reshape(_ORDER, -1)
            )
            pred_l = (_SYNTH_LEFT @ coef).reshape(_ORDER, n_panels, nb)
            pred_r = (_SYNTH_RIGHT @ coef).reshape(_ORDER, n_panels, nb)
            err_l = np.abs(pred_l - fc[0::2].transpose(1, 0, 2))
            err_r = np.abs(pred_r - fc[1::2].transpose(1, 0, 2))
            err = np.maximum(err_l.max(axis=0), err_r.max(axis=0))  # (P, nb)
            scale = np.maximum(1.0, np.abs(fv).max(axis=1))
            worst_fit = np.maximum(worst_fit, np.max(err / scale, axis=1))
            if l2_tol is not None:
                wq = (0.5 * _REF_W)[:, None] * half_w[None, :]
                fit2 = np.sqrt(
                    np.einsum("opn,op->pn", err_l**2, wq)
                    + np.einsum("opn,op->pn", err_r**2, wq)
                )
                worst_l2 = np.maximum(worst_l2, fit2.max(axis=1))
        if edges[1] < 1e-12:
            # The zero-touching panel is exempt once it has shrunk into the
            # singular layer, where self-similar content never interpolates.
            worst_fit[0] = 0.0
            worst_l2[0] = 0.0
        # Neither criterion can beat the family's own evaluation noise.
        # When several consecutive sweeps fail to improve on the best level
        # seen, that level is accepted as the noise floor.
        cur_int, cur_fit = float(worst_int.max()), float(worst_fit.max())
        int_stall = int_stall + 1 if cur_int > 0.8 * best_int else 0
        fit_stall = fit_stall + 1 if cur_fit > 0.8 * best_fit else 0
        if int_stall >= 4:
            int_floor = max(int_floor, 1.05 * cur_int)
        if fit_stall >= 4:
            fit_floor = max(fit_floor, 1.05 * cur_fit)
        best_int, best_fit = min(best_int, cur_int), min(best_fit, cur_fit)
        bad = (worst_int > max(tol, int_floor)) | (
            worst_fit > max(5.0 * tol, fit_floor)
        )
        if l2_tol is not None:
            bad |= worst_l2 > l2_tol
        if not bad.any():
            return edges
        if n_panels + bad.sum() > max_panels:
            raise BuilderError(
                f"panel budget {max_panels} exceeded; family not resolvable at {tol}"
            )
        mids = 0.5 * (edges[:-1] + edges[1:])[bad]
        edges = np.sort(np.concatenate([edges, mids]))
    raise BuilderError("panel refinement did not settle after 64 sweeps")


def _spectral_rank(svals: np.ndarray, eps: float) -> int:
    """Number of directions above both eps and the noise plateau.

    Evaluation roundoff gives the sampled matrix a flat tail of spurious
    singular values; when the tail is flat (less than 3x spread over its
    last third) everything within a factor 4 of it is treated as noise.
    """
    cut = eps
    tail = svals[int(0.7 * len(svals)):]
    if len(tail) >= 8 and tail[-1] > 0 and tail[0] < 3.0 * tail[-1]:
        cut = max(cut, 4.0 * float(tail[0]))
    return int(np.sum(svals > cut))


def _orthonormalize(
    sampled: SampledFamily,
    pts: np.ndarray,
    sqrt_w: np.ndarray,
    eps: float,
    block: int,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (in the discrete weighted inner product) basis of the family.

    Small families are decomposed directly; large ones go through a seeded
    randomized range finder with two power iterations (deterministic for a
    fixed seed), whose captured subspace is then rotated to singular
    directions.  Singular values are extracted via a QR factorization of
    the projected family rather than a Gram matrix, so values near the
    noise plateau are not squared away.
    """
    m, n_fun = len(pts), len(sampled)

    def scaled_block(lo: int, hi: int) -> np.ndarray:
        return sampled.eval_block(pts, lo, hi) * sqrt_w[:, None]

    if n_fun <= 512:
        a = scaled_block(0, n_fun)
        u, s, _ = np.linalg.svd(a, full_matrices=False)
        rank = _spectral_rank(s, eps)
        if rank == 0:
            raise BuilderError("family has numerical rank zero at the requested eps")
        return u[:, :rank], s

    rng = np.random.default_rng(seed)
    k_est = 384
    while True:
        k_est = min(k_est, m, n_fun)
        omega = rng.standard_normal((n_fun, k_est))
        y = np.zeros((m, k_est))
        for lo, hi in sampled.blocks(block):
            y += scaled_block(lo, hi) @ omega[lo:hi]
        q, _ = np.linalg.qr(y)
        for _ in range(2):
            z = np.empty((n_fun, q.shape[1]))
            for lo, hi in sampled.blocks(block):
                z[lo:hi] = scaled_block(lo, hi).T @ q
            y = np.zeros((m, q.shape[1]))
            for lo, hi in sampled.blocks(block):
                y += scaled_block(lo, hi) @ z[lo:hi]
            q, _ = np.linalg.qr(y)
        proj_t = np.empty((n_fun, q.shape[1]))
        for lo, hi in sampled.blocks(block):
            proj_t[lo:hi] = scaled_block(lo, hi).T @ q
        _qq, r = np.linalg.qr(proj_t)
        u_r, s, _ = np.linalg.svd(r.T, full_matrices=False)
        rank = _spectral_rank(s, eps)
        if rank == 0:
            raise BuilderError("family has numerical rank zero at the requested eps")
        if rank < int(0.8 * k_est) or k_est >= min(m, n_fun):
            return q @ u_r[:, :rank], s
        k_est *= 2


def _legendre_rep(
    edges: np.ndarray, values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-panel Legendre coefficients (and d/dt coefficients) of basis values."""
    n_panels = len(edges) - 1
    k = values.shape[1]
    v3 = values.reshape(n_panels, _ORDER, k)
    coef = np.empty_like(v3)
    for p in range(n_panels):
        coef[p] = scipy.linalg.lu_solve(_VAND_LU, v3[p])
    dcoef = np.zeros_like(coef)
    width = np.diff(edges)
    der = np.polynomial.legendre.legder(coef.transpose(1, 0, 2).reshape(_ORDER, -1))
    der = der.reshape(_ORDER - 1, n_panels, k).transpose(1, 0, 2)
    dcoef[:, : _ORDER - 1, :] = der * (2.0 / width)[:, None, None]
    return coef, dcoef


def oversampled_quadrature(
    family: FunctionFamily | SampledFamily,
    eps: float | None = None,
    max_panels: int = 2**14,
    block: int = 1024,
    seed_levels: int = 50,
    gram_retries: int = 2,
    l2_tol: float | None = None,
    seed: int = 0,
) -> DiscretizedBasis:
    """Discretize [0, 1] and compress the family to an orthonormal basis.

    The initial panel layout is graded dyadically toward 0 (the families of
    interest have boundary layers or integrable singularities there), then
    refined wherever any family member's panel integral disagrees with one
    further subdivision.  After compression, the pairwise products of the
    basis are verified against one more refinement level and the panels are
    refined again if needed.
    """
    sampled = family if isinstance(family, SampledFamily) else sample_family(family)
    eps = float(eps if eps is not None else sampled.family.eps)
    edges = np.concatenate([[0.0], 2.0 ** -np.arange(seed_levels, -1, -1, dtype=float)])
    refine_tol = 0.01 * eps

    gram_defect = math.inf
    for attempt in range(gram_retries + 1):
        edges = _refine_family_level(
            sampled, edges, refine_tol, max_panels, block, l2_tol=l2_tol
        )
        pts, wts = _panel_points(edges)
        sqrt_w = np.sqrt(wts)
        q, svals = _orthonormalize(sampled, pts, sqrt_w, eps, block, seed=seed)
        rank = q.shape[1]
        if len(pts) < 2 * rank:
            raise BuilderError(
                f"oversampling too small: {len(pts)} points for rank {rank}"
            )
        basis_values = q / sqrt_w[:, None]
        leg_coef, leg_coef_d = _legendre_rep(edges, basis_values)
        basis = DiscretizedBasis(
            edges=edges,
            points=pts,
            weights=wts,
            basis_values=basis_values,
            moments=sqrt_w @ q,
            leg_coef=leg_coef,
            leg_coef_d=leg_coef_d,
            rank=rank,
            eps=eps,
            singular_values=svals,
            family=sampled,
        )
        # Product check: inner products on one further refinement level must
        # reproduce the identity the discrete basis satisfies by construction.
        child_edges = _children_points(edges)
        cpts, cwts = _panel_points(child_edges)
        uc = basis.eval_basis(cpts) * np.sqrt(cwts)[:, None]
        gram = uc.T @ uc
        prev_defect = gram_defect
        gram_defect = float(np.max(np.abs(gram - np.eye(rank))))
        basis.gram_defect = gram_defect
        # The evaluation-noise floor (~5e-14 relative) scales with the
        # family norm; defects stuck there cannot be refined away.
        scale = max(1.0, float(svals[0]))
        if gram_defect <= 10.0 * max(eps, 5e-14) * scale:
            return basis
        if attempt > 0 and gram_defect > 0.7 * prev_defect:
            return basis
        mids = 0.5 * (edges[:-1] + edges[1:])
        edges = np.sort(np.concatenate([edges, mids]))
    raise BuilderError(
        f"basis product check stuck at {gram_defect:.3e} after {gram_retries} refinements"
    )


# ---------------------------------------------------------------------------
# Rule construction.


@dataclass(frozen=True)
class RawRule:
    """Nodes and weights on (0, 1), the builder's working representation."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.size)


def chebyshev_rule(basis: DiscretizedBasis) -> RawRule:
    """Interpolatory rule on rank-many pivot points, exact on the basis."""
    q = basis.basis_values * np.sqrt(basis.weights)[:, None]
    _qr, _r, piv = scipy.linalg.qr(q.T, mode="economic", pivoting=True)
    idx = np.sort(piv[: basis.rank])
    mat = basis.basis_values[idx].T  # (k, k)
    cond = np.linalg.cond(mat)
    if cond > 1.0 / basis.eps:
        raise BuilderError(
            f"pivot system condition {cond:.3e} exceeds 1/eps; increase oversampling"
        )
    w = np.linalg.solve(mat, basis.moments)
    return RawRule(nodes=basis.points[idx], weights=w)


def _residual(rule: RawRule, basis: DiscretizedBasis) -> np.ndarray:
    return basis.eval_basis(rule.nodes).T @ rule.weights - basis.moments


def _refit_weights(nodes: np.ndarray, basis: DiscretizedBasis) -> tuple[np.ndarray, float]:
    mat = basis.eval_basis(nodes).T  # (k, n)
    w, *_ = np.linalg.lstsq(mat, basis.moments, rcond=None)
    res = float(np.max(np.abs(mat @ w - basis.moments)))
    return w, res


def _gauss_newton_polish(
    rule: RawRule,
    basis: DiscretizedBasis,
    residual_tol: float,
    max_iter: int = 80,
) -> tuple[RawRule, float, bool]:
    """Damped Gauss-Newton on (log node gaps, weights).

    Nodes are parameterized as cumulative sums of exponentiated gaps, so
    ordering and positivity hold for every step and only the t < 1 ceiling
    needs a rejection check.  The line search backtracks on the l2
    residual norm (the norm the step minimizes); convergence is judged in
    the max norm.
    """
    gaps = np.log(np.diff(rule.nodes, prepend=0.0))
    w = rule.weights.copy()
    n = len(w)

    def nodes_of(g: np.ndarray) -> np.ndarray:
        return np.cumsum(np.exp(g))

    res = _residual(RawRule(nodes_of(gaps), w), basis)
    norm2 = float(np.linalg.norm(res))
    mu = 1e-6
    fails = 0
    for _ in range(max_iter):
        if float(np.max(np.abs(res))) <= residual_tol:
            break
        t = nodes_of(gaps)
        u = basis.eval_basis(t)  # (n, k)
        du = basis.eval_basis(t, derivative=True)
        # dF_k/dg_j = exp(g_j) * sum_{i >= j} w_i u'_k(t_i)
        dtw = du * w[:, None]  # (n, k)
        tail = np.cumsum(dtw[::-1], axis=0)[::-1]  # (n, k) suffix sums
        jac = np.concatenate([tail.T * np.exp(gaps)[None, :], u.T], axis=1)
        jtj = jac.T @ jac
        jtr = jac.T @ res
        diag = np.diag(jtj).copy()
        diag = np.maximum(diag, 1e-12 * diag.max())
        improved = False
        for _ in range(40):
            try:
                step = np.linalg.solve(jtj + mu * np.diag(diag), -jtr)
            except np.linalg.LinAlgError:
                mu *= 4.0
                continue
            cand_g = gaps + step[:n]
            cand_w = w + step[n:]
            cand_t = nodes_of(cand_g)
            if cand_t[-1] < 1.0:
                cand_res = _residual(RawRule(cand_t, cand_w), basis)
                cand_norm = float(np.linalg.norm(cand_res))
                if cand_norm < norm2:
                    gaps, w, res, norm2 = cand_g, cand_w, cand_res, cand_norm
                    mu = max(mu / 3.0, 1e-14)
                    improved = True
                    break
            mu *= 4.0
        if not improved:
            fails += 1
            if fails >= 3:
                break
        else:
            fails = 0
    best = float(np.max(np.abs(res)))
    return RawRule(nodes_of(gaps), w), best, best <= residual_tol


def gauss_newton_reduce(
    rule: RawRule,
    basis: DiscretizedBasis,
    residual_tol: float | None = None,
    rank_candidates_cap: int = 128,
) -> tuple[RawRule, list[dict]]:
    """Shrink the rule node by node while the moment residual permits.

    Candidate nodes are ranked by the residual of a weights-only refit
    without them (for rules up to rank_candidates_cap nodes; larger rules
    rank a cheap contribution-score shortlist instead) and re-optimized
    with damped Gauss-Newton in ranked order until one removal meets the
    threshold.  When no candidate survives, the current rule is final.

    Returns the reduced rule and a per-step log.
    """
    if residual_tol is None:
        residual_tol = basis.eps
    current = rule
    log: list[dict] = []
    current, best_res, ok = _gauss_newton_polish(current, basis, residual_tol)
    if not ok:
        raise BuilderError(
            f"starting rule violates the residual threshold: {best_res:.3e}"
        )
    while current.n_nodes > 1:
        n = current.n_nodes
        if n <= rank_candidates_cap:
            cand_idx = range(n)
        else:
            u = basis.eval_basis(current.nodes)
            score = np.abs(current.weights) * np.linalg.norm(u, axis=1)
            cand_idx = np.argsort(score)[:24]
        ranked = []
        for i in cand_idx:
            nodes = np.delete(current.nodes, i)
            _w, res = _refit_weights(nodes, basis)
            ranked.append((res, i))
        ranked.sort()
        accepted = False
        for res0, i in ranked:
            nodes = np.delete(current.nodes, i)
            w0, _ = _refit_weights(nodes, basis)
            cand, res, ok = _gauss_newton_polish(
                RawRule(nodes, w0), basis, residual_tol
            )
            if ok:
                log.append({"n_nodes": cand.n_nodes, "residual": res, "removed": int(i)})
                current = cand
                accepted = True
                break
        if not accepted:
            break
    # Final polish toward the residual floor; only ever improves the rule.
    current, final_res, _ = _gauss_newton_polish(current, basis, 0.0, max_iter=60)
    if log:
        log[-1]["residual"] = final_res
    return current, log


def validate_rule(
    rule: RawRule,
    family: FunctionFamily | SampledFamily,
    n_samples: int,
    seed: int = 0,
    oracle_tol: float | None = None,
) -> dict:
    """Compare the rule against adaptive integration at random parameter tuples.

    Returns {"max_err", "argmax_params", "n_samples", "valid"}; an empty
    sample count is reported as invalid rather than vacuously passing.
    """
    sampled = family if isinstance(family, SampledFamily) else sample_family(family)
    fam = sampled.family
    if n_samples <= 0:
        return {"max_err": 0.0, "argmax_params": None, "n_samples": 0, "valid": False}
    if oracle_tol is None:
        oracle_tol = 0.02 * fam.eps
    rng = np.random.default_rng(seed)
    max_err, arg = 0.0, None
    for _ in range(n_samples):
        tup = tuple(rng.uniform(g.lo, g.hi) for g in fam.grids)
        cols = [np.array([[v]]) for v in tup]

        def fn(t):
            return fam.evaluator(np.asarray(t, dtype=float)[:, None], *cols)[:, 0]

        ref = adaptive_integrate(fn, 0.0, 1.0, abs_tol=oracle_tol).value
        got = float(rule.weights @ fn(rule.nodes))
        err = abs(got - ref)
        if err > max_err:
            max_err, arg = err, tup
    return {"max_err": max_err, "argmax_params": arg, "n_samples": n_samples, "valid": True}
