"""Command-line front end: batch evaluation, oracle comparison, benchmarks,
and offline rule building.

Exit codes: 0 success, 1 usage or parse error, 2 unsupported parameter
region encountered, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import dispatch, families, oracle
from .config import DispatchConfig
from .exceptions import StableDensError, UnsupportedRegionError
from .params import LocationScale, make_params
from .quadrature import RuleSet, load_rules, save_rules

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNSUPPORTED = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(EXIT_USAGE)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _add_common(p: _Parser, with_params: bool = True) -> None:
    if with_params:
        p.add_argument("--alpha", type=float, required=True, help="stability index in (0, 2]")
        p.add_argument("--beta", type=float, required=True, help="skewness in [-1, 1]")
        p.add_argument("--gamma", type=float, default=0.0, help="location (default 0)")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="scale (default 1)")
        p.add_argument("--x", help="comma- or space-separated evaluation points")
        p.add_argument("--x-file", help="file with one x value per line")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")
    p.add_argument("--rules", help="rule file overriding the bundled rules")
    p.add_argument("--tol", type=float, default=None, help="accuracy override")


def _read_xs(args) -> np.ndarray:
    if (args.x is None) == (args.x_file is None):
        raise StableDensError("exactly one of --x or --x-file is required")
    if args.x is not None:
        toks = args.x.replace(",", " ").split()
    else:
        path = Path(args.x_file)
        if not path.exists():
            raise StableDensError(f"x file not found: {path}")
        toks = path.read_text().split()
    if not toks:
        raise StableDensError("no x values supplied")
    try:
        return np.array([float(t) for t in toks])
    except ValueError as exc:
        raise StableDensError(f"non-numeric x value: {exc}") from exc


def _make_config(args) -> DispatchConfig:
    kwargs = {}
    if args.rules:
        kwargs["rules"] = load_rules(args.rules)
    if args.tol is not None:
        kwargs["eps_target"] = args.tol
    return DispatchConfig(**kwargs)


def _emit(lines: list[str], args) -> None:
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _sep(args) -> str:
    return "\t" if args.format == "tsv" else ","


def _cmd_eval(args, kind: str) -> int:
    xs = _read_xs(args)
    config = _make_config(args)
    params = make_params(args.alpha, args.beta)
    loc = LocationScale(args.gamma, args.lam)
    sep = _sep(args)
    hit_unsupported = False
    lines = []
    if kind == "grad":
        lines.append(sep.join(
            ("x", "df_dx", "df_dalpha", "df_dbeta", "method", "est_abs_err", "region")
        ))
    else:
        lines.append(sep.join(("x", "value", "method", "est_abs_err", "region")))
    for x in xs:
        try:
            if kind == "pdf":
                r = dispatch.pdf(x, params, loc, config)
                row = (_fmt(x), _fmt(r.value), r.method.value, _fmt(r.est_abs_err),
                       r.region.value)
            elif kind == "cdf":
                r = dispatch.cdf(x, params, loc, config)
                row = (_fmt(x), _fmt(r.value), r.method.value, _fmt(r.est_abs_err),
                       r.region.value)
            else:
                dx, da, db = dispatch.grad(x, params, loc, config)
                methods = []
                for comp in (dx, da, db):
                    name = comp.method.value if comp.method else "unavailable"
                    if name not in methods:
                        methods.append(name)
                if any(comp.method is None for comp in (dx, da, db)):
                    hit_unsupported = True
                row = (
                    _fmt(x), _fmt(dx.value), _fmt(da.value), _fmt(db.value),
                    "+".join(methods),
                    _fmt(max(dx.est_abs_err, da.est_abs_err, db.est_abs_err)),
                    dx.region.value,
                )
        except UnsupportedRegionError as exc:
            hit_unsupported = True
            n_val = 3 if kind == "grad" else 1
            row = (_fmt(x), *(("nan",) * n_val), "unsupported", "inf",
                   exc.region.value)
        lines.append(sep.join(row))
    _emit(lines, args)
    return EXIT_UNSUPPORTED if hit_unsupported else EXIT_OK


def _cmd_compare(args) -> int:
    xs = _read_xs(args)
    config = _make_config(args)
    params = make_params(args.alpha, args.beta)
    loc = LocationScale(args.gamma, args.lam)
    tol = args.tol if args.tol is not None else 1e-11
    oracle_tol = min(1e-12, 0.1 * tol)
    what = args.what
    sep = _sep(args)
    lines = [sep.join(("x", "fast", "oracle", "abs_diff"))]
    diffs = []
    hit_unsupported = False
    for x in xs:
        u = (x - loc.gamma) / loc.lam
        try:
            if what == "pdf":
                fast = dispatch.pdf(x, params, loc, config).value
                ref = oracle.pdf_oracle_fourier(u, params, oracle_tol).value / loc.lam
            else:
                fast = dispatch.cdf(x, params, loc, config).value
                ref = oracle.cdf_oracle(u, params, oracle_tol).value
        except UnsupportedRegionError as exc:
            hit_unsupported = True
            lines.append(sep.join((_fmt(x), "nan", "nan", exc.region.value)))
            continue
        d = abs(fast - ref)
        diffs.append(d)
        lines.append(sep.join((_fmt(x), _fmt(fast), _fmt(ref), _fmt(d))))
    if not diffs:
        lines.append("# no comparable points")
        _emit(lines, args)
        return EXIT_USAGE if not hit_unsupported else EXIT_UNSUPPORTED
    lines.append(
        f"# n={len(diffs)} max_diff={max(diffs):.3e} mean_diff={sum(diffs) / len(diffs):.3e}"
    )
    _emit(lines, args)
    if max(diffs) > tol:
        return EXIT_NUMERIC
    return EXIT_UNSUPPORTED if hit_unsupported else EXIT_OK


def _cmd_bench(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.alpha is not None:
        alpha, beta = args.alpha, args.beta if args.beta is not None else 0.0
    else:
        # Random supported parameters, mirroring the two-band partition.
        if rng.uniform() < 0.5:
            alpha = float(rng.uniform(0.5, 0.9))
        else:
            alpha = float(rng.uniform(1.1, 2.0))
        beta = float(rng.uniform(-1.0, 1.0))
    params = make_params(alpha, beta)
    config = _make_config(args)
    n = args.n_points
    xs = params.zeta + rng.uniform(0.0, 20.0, n)

    t0 = time.perf_counter()
    results = dispatch.pdf_batch(xs, params, config=config)
    t_fast = time.perf_counter() - t0
    if any(r.method is None for r in results):
        sys.stderr.write("benchmark hit an unsupported region\n")
        return EXIT_UNSUPPORTED

    n_oracle = min(args.oracle_points, n)
    sub = xs[:n_oracle]
    t0 = time.perf_counter()
    for x in sub:
        oracle.pdf_oracle_fourier(x, params, 1e-10)
    t_fourier = (time.perf_counter() - t0) * n / n_oracle

    t0 = time.perf_counter()
    for x in sub:
        oracle.pdf_oracle_stationary(x, params, 1e-10)
    t_split = (time.perf_counter() - t0) * n / n_oracle

    lines = [
        f"alpha={alpha:.6f} beta={beta:.6f} n_points={n} oracle_sample={n_oracle}",
        f"t_fast={t_fast:.6f}s",
        f"t_oracle_fourier={t_fourier:.6f}s",
        f"t_oracle_split={t_split:.6f}s",
        f"speedup_fourier={t_fourier / t_fast:.1f}",
        f"speedup_split={t_split / t_fast:.1f}",
    ]
    _emit(lines, args)
    return EXIT_OK


def _cmd_build(args) -> int:
    spec = families.load_builder_spec(args.spec)
    rule, report = families.build_rule(spec, verbose=not args.quiet)
    out = Path(args.out) if args.out else Path(f"{spec['name']}.rules.txt")
    save_rules(RuleSet(rules=(rule,)), out)
    val = report["validation"]
    report_lines = [
        f"rule {rule.name}: {rule.n_nodes} nodes (rank {report['rank']}, "
        f"chebyshev {report['chebyshev_nodes']})",
        f"panels {report['n_panels']}, gram defect {report['gram_defect']:.3e}",
        f"validation: n={val['n_samples']} max_err={val['max_err']:.3e} at {val['argmax']}",
        f"rule file: {out}",
    ]
    text = "\n".join(report_lines) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    sys.stdout.write(text)
    if val["max_err"] > 10.0 * rule.accuracy:
        sys.stderr.write(
            f"validation max err {val['max_err']:.3e} exceeds "
            f"10 x design accuracy {rule.accuracy:.1e}\n"
        )
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None) -> int:
    parser = _Parser(prog="stabledens", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for kind in ("pdf", "cdf", "grad"):
        p = sub.add_parser(kind, help=f"evaluate the {kind} at given points")
        _add_common(p)

    p = sub.add_parser("compare", help="compare fast path against the adaptive oracle")
    _add_common(p)
    p.add_argument("--what", choices=("pdf", "cdf"), default="pdf")

    p = sub.add_parser("bench", help="wall-clock comparison against adaptive baselines")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--n-points", type=int, default=10_000)
    p.add_argument("--oracle-points", type=int, default=10_000,
                   help="oracle subsample size (times extrapolated per point)")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p, with_params=False)

    p = sub.add_parser("build", help="build a quadrature rule from a builder spec")
    p.add_argument("--spec", required=True, help="builder spec JSON file")
    p.add_argument("--out", help="output rule file")
    p.add_argument("--report", help="validation report file")
    p.add_argument("--quiet", action="store_true")

    args = parser.parse_args(argv)
    try:
        if args.command in ("pdf", "cdf", "grad"):
            return _cmd_eval(args, args.command)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_build(args)
    except StableDensError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if isinstance(exc, UnsupportedRegionError):
            return EXIT_UNSUPPORTED
        if isinstance(exc, (ArithmeticError,)):
            return EXIT_NUMERIC
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
