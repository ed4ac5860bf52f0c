"""Command-line interface: ``ficogarch <command> [options]``.

Exit codes: 0 success, 1 validation failure, 2 usage or specification error.
Outputs are CSV with 17 significant digits.  With ``--out DIR`` every run also
writes ``manifest.json`` recording the resolved configuration, so identical
command line, config and seed give byte-identical files.
"""

from __future__ import annotations

import argparse
import functools
import json
import sys
from pathlib import Path

import numpy as np
from scipy import stats as sps

from . import __version__
from .config import RunConfig, load_config
from .covariance import covariance_table
from .errors import FicogarchError
from .fracsub import frac_cumulant, frac_mean, frac_path
from .io import read_columns, write_columns
from .kernels import classify_integrability, kernel_array, kernel_norm
from .levy import PathGrid, ensemble, simulate_levy, two_sided
from .stats import loglog_slope, sample_acf
from .cogarch import ficogarch_1d1
from .validation import SUITES, format_report, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI configuration file")
    p.add_argument("--seed", type=int, help="base seed")
    p.add_argument("--out", help="output directory (default: CSV to stdout)")
    p.add_argument("--paths", type=int, help="number of ensemble members")
    p.add_argument("--step", type=float, help="grid step")
    p.add_argument("--t-end", type=float, help="end of the output grid")
    p.add_argument("--past-horizon", type=float, help="truncation M of the infinite past")
    p.add_argument("--pathological", action="store_true", default=None, help="allow the unmodified MvN kernel")
    p.add_argument("--jobs", type=int, help="worker processes for ensembles")


def _kernel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["modified", "mg", "mvn"])
    p.add_argument("--a", type=float)
    p.add_argument("--d", type=float)


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
    cfg = cfg.override(
        "simulation",
        seed=getattr(args, "seed", None),
        paths=getattr(args, "paths", None),
        step=getattr(args, "step", None),
        t_end=getattr(args, "t_end", None),
        past_horizon=getattr(args, "past_horizon", None),
        pathological=getattr(args, "pathological", None),
        jobs=getattr(args, "jobs", None),
        scheme=getattr(args, "scheme", None),
    )
    return cfg.override("kernel", family=getattr(args, "family", None), a=getattr(args, "a", None), d=getattr(args, "d", None))


def _emit(args, cfg: RunConfig, name: str, tables: list[dict]) -> None:
    """Write one CSV per table; to stdout only when there is a single table."""
    if not getattr(args, "out", None):
        if len(tables) != 1:
            raise FicogarchError("several paths need --out DIR")
        write_columns(None, tables[0])
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, tab in enumerate(tables):
        fname = f"{name}.csv" if len(tables) == 1 else f"{name}_{i:05d}.csv"
        write_columns(out / fname, tab)
        files.append(fname)
    manifest = {"command": args.command_name, "version": __version__, "config": cfg.to_dict(), "files": files}
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# commands


def _levy_one(spec, grid, two, seed):
    p = (two_sided if two else simulate_levy)(spec, grid, seed)
    return {"t": p.times, "L": p.values}


def cmd_levy_simulate(args) -> int:
    cfg = _resolve(args)
    s = cfg.simulation
    grid = PathGrid.from_span(-s.t_end if args.two_sided else 0.0, s.t_end, s.step)
    fn = functools.partial(_levy_one, cfg.levy_spec(), grid, args.two_sided)
    _emit(args, cfg, "levy", ensemble(fn, s.seed, s.paths, s.jobs))
    return EXIT_OK


def _frac_one(fc, seed):
    path, driver = frac_path(fc, seed, return_driver=True)
    return {"t": path.times, "S": np.array([driver.at(t) for t in path.times]), "Sad": path.values}


def cmd_fracsub_simulate(args) -> int:
    cfg = _resolve(args)
    fc = cfg.fracsub_config()
    s = cfg.simulation
    _emit(args, cfg, "fracsub", ensemble(functools.partial(_frac_one, fc), s.seed, s.paths, s.jobs))
    return EXIT_OK


def _frac_at(fc, t, seed):
    return frac_path(fc, seed).at(t)


def cmd_fracsub_moments(args) -> int:
    cfg = _resolve(args)
    if cfg.simulation.paths < 40:
        cfg = cfg.override("simulation", paths=2000)
    cfg = cfg.override("simulation", t_end=max(args.t, cfg.simulation.step))
    fc = cfg.fracsub_config()
    s = cfg.simulation
    x = np.array(ensemble(functools.partial(_frac_at, fc, args.t), s.seed, s.paths, s.jobs))
    ks = np.arange(1, args.kmax + 1)
    analytic = [frac_mean(fc, args.t) if k == 1 else frac_cumulant(fc, int(k), args.t) for k in ks]
    # standard errors of the k-statistics from 20 batch estimates
    batches = np.array_split(x, 20)
    mc = [sps.kstat(x, int(k)) for k in ks]
    se = [np.std([sps.kstat(b, int(k)) for b in batches], ddof=1) / np.sqrt(len(batches)) for k in ks]
    _emit(args, cfg, "moments", [{"k": ks, "analytic": np.array(analytic), "mc": np.array(mc), "mc_stderr": np.array(se)}])
    return EXIT_OK


def cmd_kernel_eval(args) -> int:
    cfg = _resolve(args)
    s = np.linspace(args.s_min, args.s_max, args.n)
    _emit(args, cfg, "kernel", [{"s": s, "f": kernel_array(cfg.kernel_spec(), args.t, s)}])
    return EXIT_OK


def cmd_kernel_norm(args) -> int:
    cfg = _resolve(args)
    spec = cfg.kernel_spec()
    cls = classify_integrability(spec, args.p)
    print("p,t,class,norm")
    norm = kernel_norm(spec, args.t, args.p, tol=args.tol) if cls.value == "integrable" else float("inf")
    print(f"{args.p!r},{args.t!r},{cls.value},{norm:.17g}")
    return EXIT_OK


def cmd_cov_table(args) -> int:
    cfg = _resolve(args)
    lags = np.unique(np.round(np.logspace(np.log10(args.h_min), np.log10(args.h_max), args.n), 6))
    var_s1 = cfg.subordinator_spec().variance() if args.var_s1 is None else args.var_s1
    k = cfg.kernel
    _emit(args, cfg, "cov", [covariance_table(k.a, k.d, var_s1, args.r, lags, args.convention)])
    return EXIT_OK


def cmd_stats_acf(args) -> int:
    x = read_columns(args.input)[args.column]
    acf = sample_acf(x, args.max_lag)
    write_columns(None, {"lag": np.arange(args.max_lag + 1), "acf": acf})
    return EXIT_OK


def cmd_stats_slope(args) -> int:
    cols = read_columns(args.input)
    slope, stderr = loglog_slope(cols[args.x], cols[args.y])
    write_columns(None, {"slope": np.array([slope]), "stderr": np.array([stderr])})
    return EXIT_OK


def _fico_one(params, grid, past, scheme, seed):
    return ficogarch_1d1(params, grid, seed, past_horizon=past, scheme=scheme).columns()


def cmd_simulate(args) -> int:
    cfg = _resolve(args)
    s = cfg.simulation
    params = cfg.ficogarch_params()
    fn = functools.partial(_fico_one, params, cfg.grid(), s.past_horizon, s.scheme)
    _emit(args, cfg, "ficogarch", ensemble(fn, s.seed, s.paths, s.jobs))
    return EXIT_OK


def cmd_validate(args) -> int:
    results = run_suite(args.suite, args.budget, on_result=lambda r: print(r.line(), flush=True))
    print(format_report(results).splitlines()[-1])
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ficogarch", description="Fractional subordinators and FICOGARCH simulation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(group, name, fn, help_):
        p = group.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        return p

    levy = sub.add_parser("levy", help="Lévy driver paths").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(levy, "simulate", cmd_levy_simulate, "simulate L (CSV t,L)")
    _common(p)
    p.add_argument("--two-sided", action="store_true", help="simulate on [-t_end, t_end]")

    frac = sub.add_parser("fracsub", help="fractional subordinator").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, fn, h in (
        ("simulate", cmd_fracsub_simulate, "simulate S^(a,d) (CSV t,S,Sad)"),
        ("moments", cmd_fracsub_moments, "analytic vs Monte Carlo cumulants (CSV k,analytic,mc,mc_stderr)"),
    ):
        p = leaf(frac, name, fn, h)
        _common(p)
        _kernel_flags(p)
        p.add_argument("--scheme", choices=["stochastic_riemann", "parts_integral", "exact"])
        if name == "moments":
            p.add_argument("--t", type=float, default=1.0)
            p.add_argument("--kmax", type=int, default=2, choices=[1, 2, 3, 4])

    kern = sub.add_parser("kernel", help="kernel evaluation and norms").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(kern, "eval", cmd_kernel_eval, "f(t, s) on a grid of s (CSV s,f)")
    _common(p)
    _kernel_flags(p)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--s-min", type=float, default=-5.0)
    p.add_argument("--s-max", type=float, default=2.0)
    p.add_argument("--n", type=int, default=701)
    p = leaf(kern, "norm", cmd_kernel_norm, "integrability class and p-th power integral")
    _kernel_flags(p)
    p.add_argument("--config")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=1e-8)

    cov = sub.add_parser("cov", help="increment covariance").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(cov, "table", cmd_cov_table, "exact vs asymptotic covariance (CSV h,gamma_exact,gamma_asym,ratio)")
    _common(p)
    _kernel_flags(p)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--h-min", type=float, default=1.0)
    p.add_argument("--h-max", type=float, default=1e4)
    p.add_argument("--n", type=int, default=41)
    p.add_argument("--var-s1", type=float, help="Var(S_1); default from the configured driver")
    p.add_argument("--convention", choices=["driver", "fractional"], default="driver")

    st = sub.add_parser("stats", help="estimators on CSV input").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = leaf(st, "acf", cmd_stats_acf, "sample ACF of one column (CSV lag,acf)")
    p.add_argument("--input", required=True)
    p.add_argument("--column", required=True)
    p.add_argument("--max-lag", type=int, default=50)
    p = leaf(st, "slope", cmd_stats_slope, "log-log regression slope (CSV slope,stderr)")
    p.add_argument("--input", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)

    fico = sub.add_parser("ficogarch", help="FICOGARCH(1,d,1)").add_subparsers(dest="action", required=True, parser_class=_Parser)
    for group, name in ((fico, "simulate"), (sub, "simulate")):
        p = leaf(group, name, cmd_simulate, "simulate price and volatility (CSV t,G,dG,sigma2,Sad,X)")
        _common(p)
        _kernel_flags(p)
        p.add_argument("--scheme", choices=["stochastic_riemann", "parts_integral", "exact"])

    p = leaf(sub, "validate", cmd_validate, "run acceptance criteria")
    p.add_argument("--suite", default="all", choices=sorted(SUITES))
    p.add_argument("--budget", default="quick", choices=["quick", "full"])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_name = " ".join(x for x in (args.command, getattr(args, "action", None)) if x)
    try:
        return args.func(args)
    except (FicogarchError, ValueError, KeyError, OSError) as exc:
        print(f"ficogarch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
