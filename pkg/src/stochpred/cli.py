"""Command-line front end.

Verbs:

* ``bench``     run an experiment from a preset or config file, CSV out
* ``sweep``     same, but sweeping one prior parameter over a grid
* ``predict``   evaluate one predictor on user-supplied statistics
* ``dominance`` print analytic dominance regions
* ``simulate``  print one simulated path

Exit codes: 0 success, 2 configuration/usage error (all violations
listed), 1 runtime error.  All randomness flows from the single master
seed; re-running any command with the same arguments reproduces its
output byte for byte, whatever the worker count.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources

from . import __version__
from ._rng import RngStream
from .config import config_from_raw, parse_raw
from .errors import ConfigError
from .harness import run_experiment, sweep_prior
from .ou_continuous import (
    OuSufficientStats,
    bayes_m,
    bayes_predict_theta_unknown,
    dominance_bound_m,
    map_predict_theta_unknown,
    mle_m,
    mle_predict_theta_unknown,
    predict_m_known_theta,
)
from .ou_sampled import (
    SampledStats,
    bayes_m_sampled,
    cmap1_m,
    cmap2_m,
    cmle_m,
    dominance_m_sampled,
    mle_m_sampled,
    predict_sampled_m,
    predict_sampled_rho,
    rho_bayes,
    rho_cmle,
)
from .poisson import (
    bayes_predict,
    dominance_interval_all_s,
    dominance_interval_at_s,
    map_predict,
    up_predict,
)
from .priors import GammaPrior, GaussianPrior
from .simulate import simulate_ou, simulate_poisson

PRESETS = ("table1", "table2", "table3", "table4", "table5", "table6",
           "fig51", "fig71", "fig72m", "fig72rho", "fig73")


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ConfigError([f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"])
    return resources.files("stochpred.presets").joinpath(f"{name}.cfg").read_text()


def _load_raw(args) -> tuple[dict[str, list[str]], list[str]]:
    if getattr(args, "preset", None):
        text = preset_text(args.preset)
    elif getattr(args, "config", None):
        with open(args.config) as fh:
            text = fh.read()
    else:
        raise ConfigError(["either --preset or --config is required"])
    return parse_raw(text)


def _apply_overrides(raw: dict[str, list[str]], args) -> dict[str, list[str]]:
    if getattr(args, "replicates", None) is not None:
        raw["replicates"] = [str(args.replicates)]
    if getattr(args, "seed", None) is not None:
        raw["seed"] = [str(args.seed)]
    overrides: dict[str, list[str]] = {}
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigError([f"--set expects key=value, got {item!r}"])
        key, value = (part.strip() for part in item.split("=", 1))
        overrides.setdefault(key, []).append(value)
    raw.update(overrides)
    return raw


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_bench(args) -> int:
    raw, violations = _load_raw(args)
    raw = _apply_overrides(raw, args)
    config = config_from_raw(raw, violations)
    if config.sweep_axis is not None:
        report = sweep_prior(config, config.sweep_axis, config.sweep_grid,
                             workers=args.workers)
        _print_markers(report.markers)
    else:
        report = run_experiment(config, workers=args.workers)
    _emit(report.csv_text(), args.output)
    return 0


def _cmd_sweep(args) -> int:
    raw, violations = _load_raw(args)
    raw = _apply_overrides(raw, args)
    if args.axis is not None:
        raw["sweep_axis"] = [args.axis]
    if args.grid:
        raw["sweep_grid"] = list(args.grid)
    config = config_from_raw(raw, violations)
    if config.sweep_axis is None:
        raise ConfigError(["sweep needs --axis/--grid or a preset with sweep keys"])
    report = sweep_prior(config, config.sweep_axis, config.sweep_grid,
                         workers=args.workers)
    _print_markers(report.markers)
    _emit(report.csv_text(), args.output)
    return 0


def _print_markers(markers: dict) -> None:
    for key, values in markers.items():
        desc = ",".join(str(k) for k in key)
        vals = " ".join(f"{name}={value:.6g}" for name, value in values.items())
        print(f"# marker [{desc}] {vals}", file=sys.stderr)


def _gamma(args) -> GammaPrior:
    return GammaPrior(args.a, args.b)


def _cmd_predict(args) -> int:
    kind = args.process
    if kind == "poisson":
        if args.predictor == "up":
            value = up_predict(args.ns, args.s, args.h).value
        elif args.predictor == "bayes":
            value = bayes_predict(args.ns, args.s, args.h, _gamma(args)).value
        else:
            value = map_predict(args.ns, args.s, args.h, _gamma(args)).value
    elif kind == "ou-m":
        stats = OuSufficientStats(x0=args.x0, x_end=args.xend, s=args.s,
                                  int_x=args.intx, int_x2=args.intx2)
        if args.predictor == "mle":
            m_est = mle_m(stats, args.theta)
        else:
            m_est = bayes_m(stats, args.theta, GaussianPrior(args.m0, args.u2))
        value = predict_m_known_theta(m_est, args.xend, args.theta, args.h)
    elif kind == "ou-theta":
        stats = OuSufficientStats(x0=args.x0, x_end=args.xend, s=args.s,
                                  int_x=args.intx, int_x2=args.intx2)
        if args.predictor == "mle":
            value = mle_predict_theta_unknown(stats, args.h)
        elif args.predictor == "bayes":
            value = bayes_predict_theta_unknown(stats, GaussianPrior(args.theta0, args.v2), args.h)
        else:
            value = map_predict_theta_unknown(stats, GaussianPrior(args.theta0, args.v2), args.h)
    elif kind == "ou-sampled-m":
        stats = SampledStats(n=args.n, step=args.delta, x0=args.x0, x_end=args.xend,
                             sum_interior=args.sum_interior, sum_all=args.sum_all,
                             sum_lag_prod=0.0, sum_lag_sq=0.0)
        prior = GaussianPrior(args.m0, args.u2) if args.m0 is not None else None
        if args.predictor == "mle":
            m_est = mle_m_sampled(stats, args.theta)
        elif args.predictor == "mean":
            m_est = stats.sum_all / stats.n
        elif args.predictor == "cmle":
            m_est = cmle_m(stats, args.theta)
        elif args.predictor == "bayes":
            m_est = bayes_m_sampled(stats, args.theta, prior)
        elif args.predictor == "cmap1":
            m_est = cmap1_m(stats, args.theta, prior)
        else:
            m_est = cmap2_m(stats, args.theta, prior)
        value = predict_sampled_m(m_est, args.xend, args.theta, args.hsteps, args.delta)
    else:  # ou-sampled-rho
        stats = SampledStats(n=args.n, step=args.delta, x0=0.0, x_end=args.xend,
                             sum_interior=0.0, sum_all=0.0,
                             sum_lag_prod=args.sum_lag_prod, sum_lag_sq=args.sum_lag_sq)
        if args.predictor == "cmle":
            r = rho_cmle(stats)
        else:
            r = rho_bayes(stats, GaussianPrior(args.rho0, args.v2))
        value = predict_sampled_rho(r, args.xend, args.hsteps)
    print(f"{value:.10g}")
    return 0


def _cmd_dominance(args) -> int:
    if args.process == "poisson":
        prior = _gamma(args)
        if args.s is not None:
            lo, hi = dominance_interval_at_s(prior, args.s)
        else:
            lo, hi = dominance_interval_all_s(prior)
        print(f"({lo:.5f}, {hi:.5f})")
    elif args.process == "ou-m":
        bound = dominance_bound_m(args.theta, args.s, args.u2)
        print(f"{bound:.10g}")
    else:  # ou-m-sampled
        bound = dominance_m_sampled(args.theta, args.n, args.delta, args.u2)
        print(f"{bound:.10g}")
    return 0


def _cmd_simulate(args) -> int:
    rng = RngStream(args.seed, args.replicate)
    if args.process == "poisson":
        path = simulate_poisson(args.theta, args.horizon, rng)
        lines = [repr(float(t)) for t in path.event_times]
    else:
        path = simulate_ou(args.m, args.theta, args.step, args.n, rng)
        lines = [repr(float(x)) for x in path.values]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=PRESETS, help="named experiment shipped with the package")
    p.add_argument("--config", help="path to a key=value experiment config")
    p.add_argument("--replicates", type=int, help="override the replicate count")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--workers", type=int, default=1,
                   help="simulation worker threads (results do not depend on this)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override any config key; repeat to build lists")
    p.add_argument("-o", "--output", help="CSV destination (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stochpred",
        description="Bayesian vs classical prediction for Poisson and OU processes")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    bench = sub.add_parser("bench", help="run an experiment, emit the error table as CSV")
    _add_run_options(bench)
    bench.set_defaults(fn=_cmd_bench)

    sweep = sub.add_parser("sweep", help="sweep one prior parameter over a grid")
    _add_run_options(sweep)
    sweep.add_argument("--axis", help="prior parameter to sweep (e.g. a, m0, rho0)")
    sweep.add_argument("--grid", nargs="+", metavar="VALUE", help="grid values")
    sweep.set_defaults(fn=_cmd_sweep)

    predict = sub.add_parser("predict", help="evaluate one predictor on given statistics")
    psub = predict.add_subparsers(dest="process", required=True)

    pp = psub.add_parser("poisson")
    pp.add_argument("--ns", type=int, required=True)
    pp.add_argument("--s", type=float, required=True)
    pp.add_argument("--h", type=float, required=True)
    pp.add_argument("--predictor", choices=("up", "bayes", "map"), required=True)
    pp.add_argument("--a", type=float, default=1.0)
    pp.add_argument("--b", type=float, default=1.0)
    pp.set_defaults(fn=_cmd_predict)

    pm = psub.add_parser("ou-m")
    for flag in ("--x0", "--xend", "--s", "--intx", "--theta", "--h"):
        pm.add_argument(flag, type=float, required=True)
    pm.add_argument("--intx2", type=float, default=0.0)
    pm.add_argument("--predictor", choices=("mle", "bayes"), required=True)
    pm.add_argument("--m0", type=float, default=0.0)
    pm.add_argument("--u2", type=float, default=1.0)
    pm.set_defaults(fn=_cmd_predict)

    pt = psub.add_parser("ou-theta")
    for flag in ("--x0", "--xend", "--s", "--intx2", "--h"):
        pt.add_argument(flag, type=float, required=True)
    pt.add_argument("--intx", type=float, default=0.0)
    pt.add_argument("--predictor", choices=("mle", "bayes", "map"), required=True)
    pt.add_argument("--theta0", type=float, default=1.0)
    pt.add_argument("--v2", type=float, default=1.0)
    pt.set_defaults(fn=_cmd_predict)

    ps = psub.add_parser("ou-sampled-m")
    ps.add_argument("--n", type=int, required=True)
    for flag in ("--delta", "--x0", "--xend", "--sum-interior", "--sum-all", "--theta"):
        ps.add_argument(flag, type=float, required=True)
    ps.add_argument("--hsteps", type=int, required=True)
    ps.add_argument("--predictor", required=True,
                    choices=("mle", "mean", "cmle", "bayes", "cmap1", "cmap2"))
    ps.add_argument("--m0", type=float, default=None)
    ps.add_argument("--u2", type=float, default=1.0)
    ps.set_defaults(fn=_cmd_predict)

    pr = psub.add_parser("ou-sampled-rho")
    pr.add_argument("--n", type=int, required=True)
    for flag in ("--delta", "--xend", "--sum-lag-prod", "--sum-lag-sq"):
        pr.add_argument(flag, type=float, required=True)
    pr.add_argument("--hsteps", type=int, required=True)
    pr.add_argument("--predictor", choices=("cmle", "bayes"), required=True)
    pr.add_argument("--rho0", type=float, default=0.9)
    pr.add_argument("--v2", type=float, default=0.01)
    pr.set_defaults(fn=_cmd_predict)

    dom = sub.add_parser("dominance", help="print analytic dominance regions")
    dsub = dom.add_subparsers(dest="process", required=True)
    dp = dsub.add_parser("poisson")
    dp.add_argument("--a", type=float, required=True)
    dp.add_argument("--b", type=float, required=True)
    dp.add_argument("--s", type=float, help="record length; omit for the all-length interval")
    dp.set_defaults(fn=_cmd_dominance)
    dm = dsub.add_parser("ou-m")
    for flag in ("--theta", "--s", "--u2"):
        dm.add_argument(flag, type=float, required=True)
    dm.set_defaults(fn=_cmd_dominance)
    dms = dsub.add_parser("ou-m-sampled")
    dms.add_argument("--theta", type=float, required=True)
    dms.add_argument("--n", type=int, required=True)
    dms.add_argument("--delta", type=float, required=True)
    dms.add_argument("--u2", type=float, required=True)
    dms.set_defaults(fn=_cmd_dominance)

    sim = sub.add_parser("simulate", help="print one simulated path")
    ssub = sim.add_subparsers(dest="process", required=True)
    sp = ssub.add_parser("poisson")
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--horizon", type=float, required=True)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--replicate", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=_cmd_simulate)
    so = ssub.add_parser("ou")
    so.add_argument("--m", type=float, required=True)
    so.add_argument("--theta", type=float, required=True)
    so.add_argument("--step", type=float, required=True)
    so.add_argument("--n", type=int, required=True)
    so.add_argument("--seed", type=int, default=42)
    so.add_argument("--replicate", type=int, default=0)
    so.add_argument("-o", "--output")
    so.set_defaults(fn=_cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print("configuration error:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  - {violation}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
