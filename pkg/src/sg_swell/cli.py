"""Command line runner: ``sg-swell {run, convergence, project-bottom, demo-overshoot, selftest}``.

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .basis import QuadratureSpec, bivariate_haar_basis, haar_basis, legendre_project_demo, legendre_reconstruct, project
from .config import load_config, resolve_threads
from .diagnostics import entropy_rate, eoc_table, integrate_with_budget, l2_error, moments_and_quantiles, wb_error_l1
from .errors import ConfigError, SGSwellError
from .scenarios import (
    bottom_dambreak_1d,
    bottom_gaussian_2d,
    bottom_uncertain_height_1d,
    bottom_uncertain_height_1d_quadrature,
    bottom_uncertain_position_1d,
    bottom_uncertain_position_2d,
    build,
)

__all__ = ["main", "fmt", "write_csv"]

log = logging.getLogger("sg_swell")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


# {{{ csv


def fmt(value) -> str:
    """Scientific notation with 8 significant digits for reals; integers and text verbatim."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.7e}"
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


# }}}


def _apply_threads(n: int) -> None:
    if n <= 0:
        return
    try:
        import numba
    except ImportError:
        return
    numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _setup_from_config(cfg):
    sc = cfg.scenario_spec()
    try:
        return sc, build(sc)
    except ValueError as exc:
        # unsupported combinations (e.g. K for the manufactured solution) are configuration errors
        raise ConfigError(str(exc)) from None


def _variables(ndim):
    return ("h", "q") if ndim == 1 else ("h", "q1", "q2")


# {{{ run


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    _apply_threads(resolve_threads(cfg.threads))
    sc, setup = _setup_from_config(cfg)
    out = Path(args.output or cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    solver, alg = setup.solver, setup.alg
    log.info("running %s: K=%d N=%d elements=%d dt=%g t_final=%g", sc.name, sc.K, sc.N, sc.elements, sc.dt, sc.t_final)

    res, budget = integrate_with_budget(
        solver, solver.to_cells(setup.U0), 0.0, sc.t_final, sc.dt, cfg.entropy_period
    )
    U = solver.from_cells(res.u)

    rows = [
        ("t_final", "", res.t),
        ("steps", "", res.steps),
        ("dt", "", sc.dt),
        ("g", "", sc.g),
        ("K", "", sc.K),
        ("N", "", sc.N),
        ("elements", "", sc.elements),
    ]
    wb = wb_error_l1(solver, U, setup.U0)
    rows += [("wb_error_l1_raw", k + 1, v) for k, v in enumerate(wb.raw)]
    rows += [("wb_error_l1_normalized", k + 1, v) for k, v in enumerate(wb.normalized)]
    rows += [
        ("entropy_rate", "", entropy_rate(solver, U, res.t)),
        ("entropy_initial", "", budget.eta[0]),
        ("entropy_final", "", budget.eta[-1]),
        ("entropy_max_increase", "", budget.max_increase(balanced=False)),
        ("entropy_boundary_outflow", "", budget.outflow[-1]),
        ("entropy_balanced_max_increase", "", budget.max_increase(balanced=True)),
    ]
    if setup.exact is not None:
        err = l2_error(solver, U, setup.exact(res.t))
        for v, name in enumerate(_variables(sc.ndim)):
            rows += [(f"l2_error_{name}", k + 1, e) for k, e in enumerate(err[v])]
    write_csv(out / "report.csv", ("quantity", "mode", "value"), rows)
    write_csv(
        out / "entropy_series.csv",
        ("t", "entropy", "boundary_outflow", "balanced"),
        zip(budget.times, budget.eta, budget.outflow, budget.balanced),
    )
    _write_field(out / "field_final.csv", sc, solver, U)
    summary = _write_moments(out / "moments.csv", sc, setup, U, cfg.probabilities)

    if cfg.plots:
        from . import plotting

        plotting.plot_entropy(out / "entropy_series.png", budget.times, budget.eta, budget.balanced)
        if sc.ndim == 1:
            plotting.plot_field_1d(
                out / "field_final.png", summary["x"], summary["surface"].mean, summary["surface"].quantiles,
                summary["b"].mean, cfg.probabilities,
            )
        else:
            plotting.plot_field_2d(out / "field_final.png", *summary["x"], summary["surface"].mean, summary["surface"].std)
    print(f"{sc.name}: wrote report to {out}")
    return EXIT_OK


def _write_field(path, sc, solver, U):
    K = U.shape[-1]
    names = _variables(sc.ndim)
    if sc.ndim == 1:
        x = solver.node_coordinates()
        header = ("element", "node", "x", "mode", *names, "b")
        rows = (
            (e, i, x[e, i], k + 1, *U[e, i, :, k], solver.b[e, i, k])
            for e in range(U.shape[0])
            for i in range(U.shape[1])
            for k in range(K)
        )
    else:
        X, Y = solver.node_coordinates()
        header = ("element_x", "element_y", "node_x", "node_y", "x", "y", "mode", *names, "b")
        rows = (
            (ex, ey, i, j, X[ex, ey, i, j], Y[ex, ey, i, j], k + 1, *U[ex, ey, i, j, :, k], solver.b[ex, ey, i, j, k])
            for ex in range(U.shape[0])
            for ey in range(U.shape[1])
            for i in range(U.shape[2])
            for j in range(U.shape[3])
            for k in range(K)
        )
    write_csv(path, header, rows)


def _write_moments(path, sc, setup, U, probabilities):
    alg, basis, solver = setup.alg, setup.basis, setup.solver
    h = U[..., 0, :]
    fields = {"h": h, "surface": h + solver.b, "b": solver.b}
    for d in range(sc.ndim):
        fields["v" if sc.ndim == 1 else f"v{d + 1}"] = alg.solve_height(h, U[..., 1 + d, :])
    stats = {name: moments_and_quantiles(val, basis, probabilities) for name, val in fields.items()}
    qcols = tuple(f"q{p:g}" for p in probabilities)
    if sc.ndim == 1:
        coords = (solver.node_coordinates(),)
        header = ("x", "variable", "mean", "std", *qcols)
    else:
        coords = solver.node_coordinates()
        header = ("x", "y", "variable", "mean", "std", *qcols)
    flat = [np.ravel(c) for c in coords]
    rows = []
    for name, m in stats.items():
        mean, std = np.ravel(m.mean), np.ravel(m.std)
        qs = [np.ravel(q) for q in m.quantiles]
        for n in range(mean.size):
            rows.append((*(c[n] for c in flat), name, mean[n], std[n], *(q[n] for q in qs)))
    write_csv(path, header, rows)
    stats["x"] = coords[0] if sc.ndim == 1 else coords
    return stats


# }}}


# {{{ convergence


def cmd_convergence(args) -> int:
    cfg = load_config(args.config)
    _apply_threads(resolve_threads(cfg.threads))
    if len(cfg.resolutions) < 2:
        raise ConfigError(f"{args.config}: 'resolutions' must list at least two mesh sizes")
    out = Path(args.output or cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    errors = []
    sc = None
    for n in cfg.resolutions:
        sc, setup = _setup_from_config(cfg.__class__(**{**cfg.__dict__, "elements": n}))
        if setup.exact is None:
            raise ConfigError(f"scenario {sc.name!r} has no exact solution for a convergence study")
        solver = setup.solver
        log.info("convergence %s: %d elements per direction", sc.name, n)
        res, _ = integrate_with_budget(solver, solver.to_cells(setup.U0), 0.0, sc.t_final, sc.dt, 10**9)
        errors.append(l2_error(solver, solver.from_cells(res.u), setup.exact(res.t)))
        print(f"{sc.name}: {n} elements done")
    try:
        table = eoc_table(cfg.resolutions, errors)
    except ValueError as exc:
        raise ConfigError(f"{args.config}: {exc}") from None
    names = _variables(sc.ndim)
    rows = []
    for n, err, rate in table:
        for v, name in enumerate(names):
            for k in range(err.shape[-1]):
                r = rate[v, k]
                rows.append((sc.N, n, name, k + 1, err[v, k], "" if np.isnan(r) else r))
    write_csv(out / "convergence.csv", ("N", "elements", "variable", "mode", "l2_error", "eoc"), rows)
    if cfg.plots:
        from . import plotting

        series = {
            f"{name}{k + 1}": [e[v, k] for e in errors] for v, name in enumerate(names) for k in range(errors[0].shape[-1])
        }
        plotting.plot_convergence(out / "convergence.png", cfg.resolutions, series)
    print(f"{sc.name}: wrote convergence table to {out}")
    return EXIT_OK


# }}}


# {{{ utilities


def cmd_project_bottom(args) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    spec = QuadratureSpec(args.points)
    K = args.K
    if K < 1 or K & (K - 1):
        raise ConfigError(f"K must be a power of two, got {K}")
    cols = [f"b{k + 1}" for k in range(K)]
    if args.kind in ("height", "position", "dambreak"):
        lo, hi = (-1.0, 1.0) if args.kind == "dambreak" else (6.0, 14.0)
        x = np.linspace(args.x0 if args.x0 is not None else lo, args.x1 if args.x1 is not None else hi, args.n)
        basis = haar_basis(int(np.log2(K)))
        extra_header, extra = (), None
        if args.kind == "height":
            coeffs = bottom_uncertain_height_1d(basis, args.c, x)
            check = np.max(np.abs(coeffs - bottom_uncertain_height_1d_quadrature(basis, args.c, x, spec=spec)), axis=-1)
            extra_header, extra = ("quadrature_check",), check
        elif args.kind == "position":
            coeffs = bottom_uncertain_position_1d(basis, args.c, spec, x)
        else:
            coeffs = bottom_dambreak_1d(basis, x, spec)
        rows = [(x[i], *coeffs[i], *((extra[i],) if extra is not None else ())) for i in range(x.size)]
        path = write_csv(out / f"bottom_{args.kind}.csv", ("x", *cols, *extra_header), rows)
        if not args.no_plots:
            from . import plotting

            plotting.plot_coefficients(out / f"bottom_{args.kind}.png", x, coeffs)
    elif args.kind in ("position2d", "gaussian2d"):
        lo, hi = (6.0, 14.0) if args.kind == "position2d" else (0.0, 2.0)
        g = np.linspace(args.x0 if args.x0 is not None else lo, args.x1 if args.x1 is not None else hi, args.n)
        X, Y = np.meshgrid(g, g, indexing="ij")
        basis2 = bivariate_haar_basis(K)
        if args.kind == "position2d":
            coeffs = bottom_uncertain_position_2d(basis2, args.c, spec, X, Y)
        else:
            coeffs = bottom_gaussian_2d(basis2, X, Y, spec)
        flat = coeffs.reshape(-1, K)
        rows = [(X.flat[i], Y.flat[i], *flat[i]) for i in range(flat.shape[0])]
        path = write_csv(out / f"bottom_{args.kind}.csv", ("x", "y", *cols), rows)
    else:  # argparse restricts choices; kept for direct calls
        raise ConfigError(f"unknown bathymetry kind {args.kind!r}")
    print(f"wrote {path}")
    return EXIT_OK


def _f1(xi):
    return 1.0 - np.abs(xi)


def _f2(xi):
    return np.where(xi <= 0.0, 1.0, 0.02)


def cmd_demo_overshoot(args) -> int:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    xi = np.linspace(-1.0, 1.0, args.samples)
    spec = QuadratureSpec(50)
    columns = {}
    for name, f, brk in (("f1", _f1, [0.0]), ("f2", _f2, [0.0])):
        columns[name] = f(xi)
        for K in args.legendre_K:
            c = legendre_project_demo(f, K, spec, breakpoints=brk)
            columns[f"{name}_legendre_K{K}"] = legendre_reconstruct(c, xi)
        for K in args.haar_K:
            if K < 1 or K & (K - 1):
                raise ConfigError(f"Haar K must be a power of two, got {K}")
            basis = haar_basis(int(np.log2(K)))
            c = project(basis, f, spec, breakpoints=brk)
            columns[f"{name}_haar_K{K}"] = c @ basis.values[:, basis.cell_index(xi)]
    header = ("xi", *columns)
    rows = [(xi[i], *(v[i] for v in columns.values())) for i in range(xi.size)]
    path = write_csv(out / "overshoot.csv", header, rows)
    if not args.no_plots:
        from . import plotting

        plotting.plot_overshoot(out / "overshoot.png", xi, columns)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import SUITES

    names = args.suite or list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ConfigError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    ok = True
    for n in names:
        for check in SUITES[n]():
            print(check.line())
            ok &= check.passed
    return EXIT_OK if ok else EXIT_RUNTIME


# }}}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sg-swell", description="Stochastic Galerkin shallow water DGSEM runner")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one scenario from a config file")
    r.add_argument("config")
    r.add_argument("-o", "--output", help="output directory (overrides the config)")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("convergence", help="mesh refinement study against the manufactured solution")
    c.add_argument("config")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convergence)

    b = sub.add_parser("project-bottom", help="tabulate stochastic bathymetry coefficients")
    b.add_argument("--kind", required=True, choices=("height", "position", "position2d", "gaussian2d", "dambreak"))
    b.add_argument("--K", type=int, default=8)
    b.add_argument("--c", type=float, default=0.5)
    b.add_argument("--points", type=int, default=50, help="Gauss points per smooth piece")
    b.add_argument("--n", type=int, default=161, help="samples per direction")
    b.add_argument("--x0", type=float)
    b.add_argument("--x1", type=float)
    b.add_argument("-o", "--output", default="out")
    b.add_argument("--no-plots", action="store_true")
    b.set_defaults(func=cmd_project_bottom)

    d = sub.add_parser("demo-overshoot", help="Legendre versus Haar reconstructions of non-smooth functions")
    d.add_argument("--legendre-K", type=int, nargs="+", default=[3, 5, 9])
    d.add_argument("--haar-K", type=int, nargs="+", default=[2, 4, 8])
    d.add_argument("--samples", type=int, default=401)
    d.add_argument("-o", "--output", default="out")
    d.add_argument("--no-plots", action="store_true")
    d.set_defaults(func=cmd_demo_overshoot)

    s = sub.add_parser("selftest", help="run the algebraic property suites")
    s.add_argument("--suite", nargs="*", help="subset of suites to run")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SGSwellError, ArithmeticError, RuntimeError) as exc:
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
