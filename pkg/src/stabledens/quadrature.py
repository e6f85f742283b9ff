"""Fixed quadrature rules: storage, serialization, and application.

A rule is a set of nodes and weights on (0, 1) valid for a whole box of
shape parameters after the linear change of variables t = tau * T_alpha,
with T_alpha = (-log eps)**(1/alpha) the point where exp(-t**alpha)
reaches the rule's truncation epsilon.  Rules are immutable after
construction and cheap to apply; everything adaptive lives in the builder
and the oracle.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from ._mathutil import binf_radius_for_terms
from .exceptions import DispatchError, DomainError, RuleFileError
from .integrands import cdf_integrand, grad_integrands, pdf_integrand
from .params import StableParams

FORMAT_TAG = "stabledens-rules v1"


class RuleTarget(Enum):
    PDF = "pdf"
    DX_PDF = "dxpdf"
    DA_PDF = "dapdf"
    DB_PDF = "dbpdf"
    CDF = "cdf"


@dataclass(frozen=True)
class TruncationPoint:
    """Upper integration limit T_alpha with exp(-T**alpha) = eps."""

    t_alpha: float


def truncation(alpha: float, eps: float) -> TruncationPoint:
    """Truncation point of the Fourier integrals for a decay target eps."""
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return TruncationPoint((-math.log(eps)) ** (1.0 / alpha))


@dataclass(frozen=True)
class QuadratureRule:
    """Immutable node/weight set with its region of validity.

    The x-extent of the region is either a fixed shifted-coordinate bound
    or, for `x_max_kind="binf"`, the per-(alpha, beta) accuracy radius of
    the x_max_n-term tail series at accuracy x_max_eps — the same curve the
    dispatcher uses as the central/tail boundary.
    """

    name: str
    target: RuleTarget
    alpha_min: float
    alpha_max: float
    beta_min: float
    beta_max: float
    x_max_kind: str  # "binf" | "fixed"
    trunc_eps: float
    accuracy: float
    nodes: np.ndarray
    weights: np.ndarray
    provenance: str = ""
    x_max_n: int = 0
    x_max_eps: float = 0.0
    x_max_value: float = 0.0

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise DomainError("nodes and weights must be 1-d and of equal length")
        if not (np.all(nodes > 0.0) and np.all(nodes < 1.0)):
            raise DomainError("nodes must lie strictly inside (0, 1)")
        if np.any(np.diff(nodes) <= 0.0):
            raise DomainError("nodes must be strictly increasing")
        wsum = float(weights.sum())
        if not (0.0 < wsum < 1.5):
            raise DomainError(f"weight sum {wsum} outside the sanity window (0, 1.5)")
        if np.any(weights <= 0.0):
            warnings.warn(
                f"rule {self.name}: {int(np.sum(weights <= 0.0))} non-positive weights",
                stacklevel=2,
            )
        if self.x_max_kind not in ("binf", "fixed"):
            raise DomainError(f"unknown x_max_kind {self.x_max_kind!r}")

    @property
    def n_nodes(self) -> int:
        return int(self.nodes.size)

    def x_boundary(self, params: StableParams) -> float:
        """Maximum valid shifted coordinate x - zeta for these parameters."""
        if self.x_max_kind == "fixed":
            return self.x_max_value
        return binf_radius_for_terms(
            params.alpha, params.zeta, self.x_max_n, self.x_max_eps
        )

    def contains(self, x: float, params: StableParams) -> bool:
        if not (self.alpha_min <= params.alpha <= self.alpha_max):
            return False
        if not (self.beta_min <= params.beta <= self.beta_max):
            return False
        shifted = x - params.zeta
        # Tiny relative slack: the dispatcher computes the same boundary and
        # must never be rejected for roundoff.
        return -1e-12 <= shifted <= self.x_boundary(params) * (1.0 + 1e-9)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[QuadratureRule, ...]
    source: str = ""

    def find(self, target: RuleTarget, x: float, params: StableParams) -> QuadratureRule:
        """Narrowest-beta rule covering the request (symmetric rules win at beta=0)."""
        candidates = [
            r
            for r in self.rules
            if r.target is target and r.contains(x, params)
        ]
        if not candidates:
            raise DispatchError(
                f"no {target.value} rule covers alpha={params.alpha}, "
                f"beta={params.beta}, x-zeta={x - params.zeta}"
            )
        candidates.sort(key=lambda r: (r.beta_max - r.beta_min, r.n_nodes))
        return candidates[0]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)


def scaled_nodes(rule: QuadratureRule, alpha: float) -> tuple[np.ndarray, float]:
    """Physical integration nodes t = tau * T_alpha and the scale T_alpha."""
    t_alpha = truncation(alpha, rule.trunc_eps).t_alpha
    return rule.nodes * t_alpha, t_alpha


def apply_rule(
    rule: QuadratureRule, x: float, params: StableParams, eps: float | None = None
) -> float:
    """Evaluate the rule's target function at x for the given parameters.

    The truncation epsilon is always the rule's own design value; `eps` is
    the caller's accuracy request and is only checked against the rule's
    design accuracy.

    Raises
    ------
    DispatchError
        If (x, alpha, beta) lies outside the rule's region of validity.
    DomainError
        If eps is tighter than the rule's design accuracy.
    """
    if eps is not None and eps < rule.accuracy:
        raise DomainError(
            f"rule {rule.name} is designed for accuracy {rule.accuracy}, "
            f"cannot honor eps={eps}"
        )
    if not rule.contains(x, params):
        raise DispatchError(
            f"({x}, {params.alpha}, {params.beta}) outside region of rule {rule.name}"
        )
    t, t_alpha = scaled_nodes(rule, params.alpha)
    scale = t_alpha / math.pi
    if rule.target is RuleTarget.PDF:
        vals = pdf_integrand(t, x, params)
    elif rule.target is RuleTarget.CDF:
        vals = cdf_integrand(t, x, params)
    else:
        gx, ga, gb = grad_integrands(t, x, params)
        vals = {RuleTarget.DX_PDF: gx, RuleTarget.DA_PDF: ga, RuleTarget.DB_PDF: gb}[
            rule.target
        ]
    out = scale * float(rule.weights @ vals)
    if rule.target is RuleTarget.CDF:
        out += 0.5
    return out


def apply_pdf_rule_batch(
    rule: QuadratureRule, xs: np.ndarray, params: StableParams
) -> np.ndarray:
    """Vectorized density evaluation at many x for one parameter pair."""
    if rule.target is not RuleTarget.PDF:
        raise DispatchError("batch application is specialized to the pdf target")
    t, t_alpha = scaled_nodes(rule, params.alpha)
    damp = np.exp(-(t**params.alpha))
    if params.alpha == 1.0:
        base = (2.0 / math.pi) * params.beta * t * np.log(t)
        phases = np.outer(np.asarray(xs, dtype=float), t) + base
    else:
        base = params.zeta * t**params.alpha
        phases = np.outer(np.asarray(xs, dtype=float) - params.zeta, t) + base
    return (t_alpha / math.pi) * (np.cos(phases) @ (rule.weights * damp))


# ---------------------------------------------------------------------------
# Serialization.  Versioned plain text: a header block per rule followed by
# one node/weight pair per line; bit-faithful via 17 significant digits.


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def save_rules(ruleset: RuleSet, path: str | Path) -> None:
    lines = [FORMAT_TAG]
    for rule in ruleset.rules:
        lines.append("")
        lines.append(f"rule {rule.name}")
        lines.append(f"target {rule.target.value}")
        lines.append(f"alpha {_fmt(rule.alpha_min)} {_fmt(rule.alpha_max)}")
        lines.append(f"beta {_fmt(rule.beta_min)} {_fmt(rule.beta_max)}")
        if rule.x_max_kind == "binf":
            lines.append(f"xmax binf {rule.x_max_n} {_fmt(rule.x_max_eps)}")
        else:
            lines.append(f"xmax fixed {_fmt(rule.x_max_value)}")
        lines.append(f"trunc_eps {_fmt(rule.trunc_eps)}")
        lines.append(f"accuracy {_fmt(rule.accuracy)}")
        lines.append(f"provenance {rule.provenance}")
        lines.append(f"nodes {rule.n_nodes}")
        for t, w in zip(rule.nodes, rule.weights):
            lines.append(f"{_fmt(t)} {_fmt(w)}")
        lines.append("end")
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_error(lineno: int, msg: str) -> RuleFileError:
    return RuleFileError(f"line {lineno}: {msg}")


def loads_rules(text: str, source: str = "<string>") -> RuleSet:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_TAG:
        got = lines[0].strip() if lines else "<empty>"
        raise RuleFileError(
            f"unsupported rule file version: expected {FORMAT_TAG!r}, got {got!r}"
        )
    rules = []
    i = 1
    n_lines = len(lines)
    while i < n_lines:
        line = lines[i].strip()
        if not line or line.startswith("#"):
            i += 1
            continue
        if not line.startswith("rule "):
            raise _parse_error(i + 1, f"expected 'rule <name>', got {line!r}")
        header: dict[str, str] = {"name": line[5:].strip()}
        i += 1
        while i < n_lines:
            line = lines[i].strip()
            if not line or line.startswith("#"):
                i += 1
                continue
            key = line.split(maxsplit=1)[0]
            if key == "nodes":
                break
            if key in ("target", "alpha", "beta", "xmax", "trunc_eps", "accuracy", "provenance"):
                header[key] = line[len(key):].strip()
                i += 1
            else:
                raise _parse_error(i + 1, f"unknown header field {key!r}")
        if i >= n_lines or not lines[i].strip().startswith("nodes"):
            raise _parse_error(i + 1, "missing 'nodes <count>' line")
        try:
            count = int(lines[i].split()[1])
        except (IndexError, ValueError):
            raise _parse_error(i + 1, "malformed 'nodes <count>' line") from None
        i += 1
        nodes, weights = [], []
        for _ in range(count):
            if i >= n_lines:
                raise _parse_error(i + 1, "unexpected end of file inside node table")
            parts = lines[i].split()
            if len(parts) != 2:
                raise _parse_error(i + 1, f"expected '<node> <weight>', got {lines[i]!r}")
            try:
                nodes.append(float(parts[0]))
                weights.append(float(parts[1]))
            except ValueError:
                raise _parse_error(i + 1, f"non-numeric node/weight {lines[i]!r}") from None
            i += 1
        if i >= n_lines or lines[i].strip() != "end":
            raise _parse_error(i + 1, "missing 'end' after node table")
        i += 1
        try:
            missing = [
                k
                for k in ("target", "alpha", "beta", "xmax", "trunc_eps", "accuracy")
                if k not in header
            ]
            if missing:
                raise RuleFileError(f"rule {header['name']}: missing fields {missing}")
            a_lo, a_hi = (float(v) for v in header["alpha"].split())
            b_lo, b_hi = (float(v) for v in header["beta"].split())
            xparts = header["xmax"].split()
            kwargs: dict = {}
            if xparts[0] == "binf":
                kwargs.update(x_max_n=int(xparts[1]), x_max_eps=float(xparts[2]))
            elif xparts[0] == "fixed":
                kwargs.update(x_max_value=float(xparts[1]))
            else:
                raise RuleFileError(f"rule {header['name']}: bad xmax kind {xparts[0]!r}")
            rules.append(
                QuadratureRule(
                    name=header["name"],
                    target=RuleTarget(header["target"]),
                    alpha_min=a_lo,
                    alpha_max=a_hi,
                    beta_min=b_lo,
                    beta_max=b_hi,
                    x_max_kind=xparts[0],
                    trunc_eps=float(header["trunc_eps"]),
                    accuracy=float(header["accuracy"]),
                    nodes=np.array(nodes),
                    weights=np.array(weights),
                    provenance=header.get("provenance", ""),
                    **kwargs,
                )
            )
        except (ValueError, DomainError) as exc:
            raise RuleFileError(f"rule {header.get('name', '?')}: {exc}") from exc
    return RuleSet(rules=tuple(rules), source=source)


def load_rules(path: str | Path) -> RuleSet:
    """Parse a rule file; malformed content raises RuleFileError with a line number."""
    p = Path(path)
    if not p.exists():
        raise RuleFileError(f"rule file not found: {p}")
    return loads_rules(p.read_text(), source=str(p))


_ENV_VAR = "STABLEDENS_RULES"
_cached: dict[str, RuleSet] = {}


def default_rules() -> RuleSet:
    """The shipped rule set, overridable via the STABLEDENS_RULES variable."""
    override = os.environ.get(_ENV_VAR)
    if override:
        if override not in _cached:
            _cached[override] = load_rules(override)
        return _cached[override]
    if "" not in _cached:
        ref = resources.files("stabledens") / "_data" / "default_rules.txt"
        _cached[""] = loads_rules(ref.read_text(), source="packaged:default_rules.txt")
    return _cached[""]
