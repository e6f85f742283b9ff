"""Integrand families for the stable-density quadrature rules and the build
driver that turns a builder spec into a validated rule file entry.

A builder spec is a JSON object naming the target integrand, the parameter
box (alpha, beta), grid sizes, the x-extent convention (the tail-series
accuracy radius), truncation epsilon for the change of variables, and the
compression/optimization tolerances.  Specs for every shipped rule live in
_data/rulespecs/.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from . import ggq, oracle
from .exceptions import BuilderError, RuleFileError
from .params import make_params
from .quadrature import QuadratureRule, RuleTarget

_TWO_OVER_PI = 2.0 / math.pi


def _tan_half_pi(alpha: np.ndarray) -> np.ndarray:
    """Vectorized tan(pi*alpha/2) with accurate branches near 1 and 2."""
    a = np.asarray(alpha, dtype=float)
    out = np.empty_like(a)
    hi = a >= 1.5
    lo = a <= 0.5
    mid = ~(hi | lo)
    out[hi] = np.tan(0.5 * np.pi * (a[hi] - 2.0))
    with np.errstate(divide="ignore"):
        out[mid] = -1.0 / np.tan(0.5 * np.pi * (a[mid] - 1.0))
    out[lo] = np.tan(0.5 * np.pi * a[lo])
    return out


def _binf_radius_vec(alpha, zeta, n_terms: int, eps: float):
    m = n_terms + 1.0
    am = alpha * m
    return np.exp(
        (
            np.log(alpha / (math.pi * eps))
            + 0.5 * m * np.log1p(zeta * zeta)
            + gammaln(am)
            - gammaln(m)
        )
        / (am - 1.0)
    )


def _phase_pieces(t, alpha, beta, s, n_boundary: int, boundary_eps: float, u_trunc: float):
    """Common precomputation: physical t, phase h, damping, and parts.

    t has shape (m, 1); alpha/beta/s shape (1, n).  alpha = 1 columns are
    handled by the continuous-limit branch (possible only when beta = 0
    within these families' regions, where the phase is plain x*t).
    """
    tan_half = _tan_half_pi(alpha)
    zeta = np.where(beta == 0.0, 0.0, -beta * tan_half)
    shifted = s * _binf_radius_vec(alpha, zeta, n_boundary, boundary_eps)
    t_alpha = u_trunc ** (1.0 / alpha)
    tt = t * t_alpha
    log_tt = np.log(tt)
    tt_pow = np.exp(alpha * log_tt)
    damp = np.exp(-tt_pow)
    h = shifted * tt + zeta * tt_pow
    return tan_half, zeta, shifted, tt, log_tt, tt_pow, damp, h


def _make_evaluator(target: RuleTarget, n_boundary: int, boundary_eps: float, u_trunc: float):
    def pdf(t, alpha, beta, s):
        *_rest, damp, h = _phase_pieces(t, alpha, beta, s, n_boundary, boundary_eps, u_trunc)
        return np.cos(h) * damp

    def dx(t, alpha, beta, s):
        _tan, _z, _sh, tt, _lt, _tp, damp, h = _phase_pieces(
            t, alpha, beta, s, n_boundary, boundary_eps, u_trunc
        )
        return -tt * np.sin(h) * damp

    def da(t, alpha, beta, s):
        tan_half, zeta, _sh, tt, log_tt, tt_pow, damp, h = _phase_pieces(
            t, alpha, beta, s, n_boundary, boundary_eps, u_trunc
        )
        dz_da = -0.5 * math.pi * beta * (tan_half * tan_half + 1.0)
        dah = np.where(
            beta == 0.0, 0.0, (tt_pow - tt) * dz_da + tt_pow * log_tt * zeta
        )
        return -(np.sin(h) * dah + tt_pow * np.cos(h) * log_tt) * damp

    def db(t, alpha, beta, s):
        tan_half, _z, _sh, tt, log_tt, tt_pow, damp, h = _phase_pieces(
            t, alpha, beta, s, n_boundary, boundary_eps, u_trunc
        )
        near_one = np.abs(alpha - 1.0) < 1e-12
        with np.errstate(invalid="ignore"):
            dbh = np.where(
                near_one,
                _TWO_OVER_PI * tt * log_tt,
                -tan_half * tt * np.expm1((alpha - 1.0) * log_tt),
            )
        return -np.sin(h) * dbh * damp

    def cdf(t, alpha, beta, s):
        _tan, zeta, shifted, tt, _lt, tt_pow, damp, h = _phase_pieces(
            t, alpha, beta, s, n_boundary, boundary_eps, u_trunc
        )
        with np.errstate(divide="ignore"):
            ratio = np.where(zeta == 0.0, shifted, shifted + zeta * tt_pow / tt)
        return np.sinc(h / math.pi) * ratio * damp

    return {
        RuleTarget.PDF: pdf,
        RuleTarget.DX_PDF: dx,
        RuleTarget.DA_PDF: da,
        RuleTarget.DB_PDF: db,
        RuleTarget.CDF: cdf,
    }[target]


def make_family(spec: dict) -> ggq.FunctionFamily:
    """Function family on [0, 1] for one builder spec."""
    target = RuleTarget(spec["target"])
    a_lo, a_hi = spec["alpha"]
    b_lo, b_hi = spec["beta"]
    evaluator = _make_evaluator(
        target, spec["x_boundary_terms"], spec["x_boundary_eps"], -math.log(spec["trunc_eps"])
    )
    grids = (
        ggq.GridSpec(a_lo, a_hi, spec["n_alpha"], spec.get("alpha_spacing", "chebyshev")),
        ggq.GridSpec(b_lo, b_hi, spec["n_beta"], spec.get("beta_spacing", "equispaced")),
        ggq.GridSpec(0.0, 1.0, spec["n_x"], spec.get("x_spacing", "chebyshev")),
    )
    return ggq.FunctionFamily(
        evaluator=evaluator, grids=grids, eps=spec["eps_rank"], name=spec["name"]
    )


_ORACLES = {
    RuleTarget.PDF: lambda x, p, tol: oracle.pdf_oracle_fourier(x, p, tol).value,
    RuleTarget.DX_PDF: lambda x, p, tol: oracle.grad_oracle(x, p, tol)[0].value,
    RuleTarget.DA_PDF: lambda x, p, tol: oracle.grad_oracle(x, p, tol)[1].value,
    RuleTarget.DB_PDF: lambda x, p, tol: oracle.grad_oracle(x, p, tol)[2].value,
    RuleTarget.CDF: lambda x, p, tol: oracle.cdf_oracle(x, p, tol).value,
}


def validate_stable_rule(
    rule: QuadratureRule, n_samples: int, seed: int = 0, oracle_tol: float | None = None
) -> dict:
    """Max error of a rule against the adaptive oracle at random points.

    Samples uniformly over the rule's (alpha, beta) box and over the
    shifted coordinate up to the rule's own x-boundary.
    """
    from .quadrature import apply_rule  # local import to avoid cycle at module load

    if n_samples <= 0:
        return {"max_err": 0.0, "argmax": None, "n_samples": 0, "valid": False}
    if oracle_tol is None:
        oracle_tol = min(1e-13, 0.1 * rule.accuracy)
    rng = np.random.default_rng(seed)
    fn = _ORACLES[rule.target]
    max_err, arg = 0.0, None
    for _ in range(n_samples):
        a = rng.uniform(rule.alpha_min, rule.alpha_max)
        b = rng.uniform(rule.beta_min, rule.beta_max)
        if abs(b) < 1e-9:
            b = 0.0
        p = make_params(a, b)
        x = p.zeta + rng.uniform(0.0, 1.0) * rule.x_boundary(p)
        got = apply_rule(rule, x, p)
        ref = fn(x, p, oracle_tol)
        err = abs(got - ref)
        if err > max_err:
            max_err, arg = err, (a, b, x)
    return {"max_err": max_err, "argmax": arg, "n_samples": n_samples, "valid": True}


def build_rule(spec: dict, verbose: bool = False) -> tuple[QuadratureRule, dict]:
    """Run the full pipeline for one builder spec.

    Returns the rule plus a report with the reduction log and the
    validation result.  Deterministic for a fixed spec (the validation
    sampling is seeded from the spec).
    """
    family = make_family(spec)
    basis = ggq.oversampled_quadrature(
        family,
        seed_levels=spec.get("seed_levels", 40),
        max_panels=spec.get("max_panels", 2**14),
        seed=spec.get("seed", 0),
    )
    if verbose:
        print(
            f"[{spec['name']}] rank {basis.rank}, {len(basis.edges) - 1} panels, "
            f"gram defect {basis.gram_defect:.2e}"
        )
    cheb = ggq.chebyshev_rule(basis)
    reduced, log = ggq.gauss_newton_reduce(
        cheb, basis, residual_tol=spec["residual_tol"]
    )
    if verbose:
        final_res = log[-1]["residual"] if log else float("nan")
        print(f"[{spec['name']}] {cheb.n_nodes} -> {reduced.n_nodes} nodes, residual {final_res:.2e}")
    rule = QuadratureRule(
        name=spec["name"],
        target=RuleTarget(spec["target"]),
        alpha_min=spec["alpha"][0],
        alpha_max=spec["alpha"][1],
        beta_min=spec["beta"][0],
        beta_max=spec["beta"][1],
        x_max_kind="binf",
        x_max_n=spec["x_boundary_terms"],
        x_max_eps=spec["x_boundary_eps"],
        trunc_eps=spec["trunc_eps"],
        accuracy=spec["accuracy"],
        nodes=reduced.nodes,
        weights=reduced.weights,
        provenance=f"builder:{spec['name']}:seed{spec.get('seed', 0)}",
    )
    report = {
        "rank": basis.rank,
        "n_panels": len(basis.edges) - 1,
        "gram_defect": basis.gram_defect,
        "chebyshev_nodes": cheb.n_nodes,
        "final_nodes": reduced.n_nodes,
        "reduction_log": log,
        "validation": validate_stable_rule(
            rule, spec.get("validation_samples", 300), seed=spec.get("seed", 0)
        ),
    }
    if verbose:
        print(f"[{spec['name']}] validation max err {report['validation']['max_err']:.3e}")
    return rule, report


def load_builder_spec(path: str | Path) -> dict:
    """Read and sanity-check a builder spec file."""
    p = Path(path)
    if not p.exists():
        raise RuleFileError(f"builder spec not found: {p}")
    try:
        spec = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise RuleFileError(f"builder spec {p}: invalid JSON ({exc})") from exc
    required = {
        "name", "target", "alpha", "beta", "n_alpha", "n_beta", "n_x",
        "x_boundary_terms", "x_boundary_eps", "trunc_eps", "eps_rank",
        "residual_tol", "accuracy",
    }
    missing = sorted(required - spec.keys())
    if missing:
        raise RuleFileError(f"builder spec {p}: missing fields {missing}")
    try:
        RuleTarget(spec["target"])
    except ValueError as exc:
        raise BuilderError(f"unknown target {spec['target']!r}") from exc
    return spec
