"""Command-line interface.

Exit codes: 0 success, 1 numeric/model failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import pc_prior
from .divergence import Branch, alpha_from_distance, distance_array
from .exceptions import CapabilityError, DomainError
from .inference import SENSITIVITY_THETAS, FitConfig, PriorChoice, config_to_dict, fit, sensitivity_sweep
from .pc_prior import PcPriorSpec, TailSpec, theta_from_tail
from .reference_priors import GammaPriorSpec, ImproperUniform, distance_table, prior_on_distance_scale
from .weibull import DatasetFormatError, SurvivalDataset, simulate

CONFIG_VERSION = 1
OUTDIR_ENV = "PCWEIBULL_OUTDIR"
TABLE_DISTANCES = (0.0, 0.1, 0.5, 0.8, 1.45)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(v, prec):
    return f"{v:.{prec}g}"


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _alpha_grid(text):
    try:
        lo, hi, n = text.split(":")
        return np.linspace(float(lo), float(hi), int(n))
    except ValueError:
        raise UsageError(f"--alpha-grid expects lo:hi:n, got {text!r}") from None


def _resolve_out(path):
    if path is None or path == "-":
        return None
    p = Path(path)
    if not p.is_absolute() and os.environ.get(OUTDIR_ENV):
        p = Path(os.environ[OUTDIR_ENV]) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text, out):
    p = _resolve_out(out)
    if p is None:
        sys.stdout.write(text)
    else:
        p.write_text(text, encoding="utf-8")


def _csv(header, rows, prec):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v, prec) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Commands


def _pc_spec(args):
    has_theta = args.theta is not None
    has_tail = args.U is not None or args.p is not None
    if has_theta == has_tail:
        raise UsageError("give exactly one of --theta or (--U and --p)")
    if has_tail:
        if args.U is None or args.p is None:
            raise UsageError("--U and --p must be given together")
        return theta_from_tail(TailSpec(args.U, args.p))
    return PcPriorSpec(args.theta)


def cmd_prior(args):
    spec = _pc_spec(args)
    prec = args.precision
    if args.action == "sample":
        if args.n is None or args.seed is None:
            raise UsageError("prior sample requires --n and --seed")
        draws = pc_prior.sample(args.n, spec, args.seed)
        _emit(_csv(["alpha"], [[a] for a in draws], prec), args.out)
        return 0
    if args.action == "quantile":
        if args.q is None:
            raise UsageError("prior quantile requires --q")
        qs = _floats(args.q)
        vals = pc_prior.quantile(np.array(qs), spec)
        _emit(_csv(["q", "alpha"], zip(qs, vals), prec), args.out)
        return 0
    if (args.alpha is None) == (args.alpha_grid is None):
        raise UsageError(f"prior {args.action} requires exactly one of --alpha or --alpha-grid")
    alpha = np.array(_floats(args.alpha)) if args.alpha is not None else _alpha_grid(args.alpha_grid)
    fn = pc_prior.density if args.action == "density" else pc_prior.cdf
    vals = fn(alpha, spec)
    _emit(_csv(["alpha", args.action], zip(alpha, vals), prec), args.out)
    return 0


def cmd_distance(args):
    if args.direction == "to-distance":
        if args.alpha is None:
            raise UsageError("to-distance requires --alpha")
        vals = _floats(args.alpha)
        res = distance_array(np.array(vals))
        rows = [f"{a:.6f},{d:.6f}" for a, d in zip(vals, res)]
        _emit("alpha,distance\n" + "\n".join(rows) + "\n", args.out)
        return 0
    if args.d is None or args.branch is None:
        raise UsageError("to-alpha requires --d and --branch lower|upper")
    vals = _floats(args.d)
    rows = [f"{d:.6f},{alpha_from_distance(d, Branch(args.branch)):.6f}" for d in vals]
    _emit("distance,alpha\n" + "\n".join(rows) + "\n", args.out)
    return 0


def cmd_tables(args):
    if not args.a > 0:
        raise UsageError("--a must be positive")
    prior = GammaPriorSpec(args.a, args.convention)
    prec = args.precision
    if args.figure5:
        d_grid = np.linspace(0.0, args.d_max, args.points)
        lo = prior_on_distance_scale(prior, Branch.LOWER, d_grid)
        hi = prior_on_distance_scale(prior, Branch.UPPER, d_grid)
        pc = 0.5 * args.theta * np.exp(-args.theta * d_grid)
        rows = zip(d_grid, lo[:, 1], hi[:, 1], pc)
        _emit(_csv(["distance", "gamma_lower", "gamma_upper", "pc_branch"], rows, prec), args.out)
        return 0
    ds = _floats(args.d) if args.d else list(TABLE_DISTANCES)
    rows = [(r.d, r.alpha_lower, r.dens_lower, r.alpha_upper, r.dens_upper)
            for r in distance_table(ds, prior)]
    header = ["distance", "alpha_lower", "dens_lower", "alpha_upper", "dens_upper"]
    _emit(_csv(header, rows, prec), args.out)
    return 0


def _fit_prior(args):
    sd = args.beta_sd
    if args.prior == "pc":
        spec = _pc_spec(args) if (args.theta is not None or args.U is not None) else PcPriorSpec()
        return PriorChoice(spec, sd)
    if args.prior == "gamma":
        return PriorChoice(GammaPriorSpec(args.a, args.convention), sd)
    return PriorChoice(ImproperUniform(), sd)


def cmd_fit(args):
    prec = args.precision
    if args.simulate:
        beta = _floats(args.beta)
        data = simulate(args.alpha, beta, args.n, args.censor_rate, args.seed)
        out = _resolve_out(args.out or "sim.csv")
        data.to_csv(out)
        print(f"wrote {data.n} rows to {out}")
        return 0
    if args.data is None:
        raise UsageError("fit requires --data (or --simulate)")
    data = SurvivalDataset.from_csv(args.data)
    cfg = FitConfig(
        engine=args.engine,
        alpha_range=tuple(args.alpha_range),
        grid_points=args.grid_points,
        beta_grid_points=args.beta_grid_points,
        mcmc_iters=args.mcmc_iters,
        burn_in=args.burn_in,
        seed=args.seed,
        credible_level=args.credible_level,
    )
    prefix = args.out or "fit"
    if args.sweep_theta:
        thetas = _floats(args.sweep_theta) if args.sweep_theta != "default" else list(SENSITIVITY_THETAS)
        results = sensitivity_sweep(data, thetas, cfg, args.beta_sd)
        summary = []
        for theta, res in results:
            path = _resolve_out(f"{prefix}_theta{theta:g}_marginal.csv")
            res.write_marginal_csv(path, prec)
            summary.append({"theta": theta, **res.summary()})
        _resolve_out(f"{prefix}_sweep.json").write_text(
            json.dumps({"config": config_to_dict(cfg), "fits": summary}, indent=2), encoding="utf-8")
        for theta, res in results:
            print(f"theta={theta:g} alpha_mean={_fmt(res.alpha_mean, prec)}")
        return 0
    res = fit(data, _fit_prior(args), cfg)
    res.write_marginal_csv(_resolve_out(f"{prefix}_marginal.csv"), prec)
    doc = {"config": config_to_dict(cfg), **res.summary()}
    _resolve_out(f"{prefix}.json").write_text(json.dumps(doc, indent=2), encoding="utf-8")
    lo, hi = res.alpha_ci
    print(f"alpha mean={_fmt(res.alpha_mean, prec)} mode={_fmt(res.alpha_mode, prec)} "
          f"ci=[{_fmt(lo, prec)}, {_fmt(hi, prec)}]")
    for w in res.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# Parser


def _common(p):
    p.add_argument("--out", help="output file (default stdout); relative paths go under $" + OUTDIR_ENV)
    p.add_argument("--precision", type=int, default=6, help="significant digits (default 6)")


def _pc_flags(p):
    p.add_argument("--theta", type=float)
    p.add_argument("--U", type=float, help="tail statement P(d > U) = p")
    p.add_argument("--p", type=float)


def build_parser():
    parser = _Parser(prog="pcweibull", description="PC prior for the Weibull shape")
    parser.add_argument("--config", help="JSON file with default flag values")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prior", help="evaluate or sample the PC prior")
    p.add_argument("action", choices=["density", "cdf", "quantile", "sample"])
    _pc_flags(p)
    p.add_argument("--alpha", help="comma-separated shapes")
    p.add_argument("--alpha-grid", help="lo:hi:n")
    p.add_argument("--q", help="comma-separated probabilities")
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    _common(p)
    p.set_defaults(func=cmd_prior)

    p = sub.add_parser("distance", help="convert between shape and distance")
    p.add_argument("direction", choices=["to-distance", "to-alpha"])
    p.add_argument("--alpha")
    p.add_argument("--d")
    p.add_argument("--branch", choices=["lower", "upper"])
    _common(p)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("tables", help="gamma-prior densities at matched distances")
    p.add_argument("--a", type=float, default=1.5)
    p.add_argument("--convention", choices=["rate", "scale"], default="scale")
    p.add_argument("--d", help="comma-separated distances")
    p.add_argument("--figure5", action="store_true", help="per-branch curves on a distance grid")
    p.add_argument("--theta", type=float, default=2.5, help="PC rate for the figure5 reference curve")
    p.add_argument("--d-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=301)
    _common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("fit", help="simulate data or fit the Weibull regression")
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--alpha", type=float, default=1.0, help="true shape (simulate)")
    p.add_argument("--beta", default="0", help="true coefficients (simulate)")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--censor-rate", type=float, default=0.0)
    p.add_argument("--data")
    p.add_argument("--prior", choices=["pc", "gamma", "improper"], default="pc")
    _pc_flags(p)
    p.add_argument("--a", type=float, default=0.1)
    p.add_argument("--convention", choices=["rate", "scale"], default="rate")
    p.add_argument("--beta-sd", type=float, default=10.0)
    p.add_argument("--engine", choices=["grid", "mcmc", "both"], default="grid")
    p.add_argument("--alpha-range", type=float, nargs=2, default=[0.05, 20.0])
    p.add_argument("--grid-points", type=int, default=400)
    p.add_argument("--beta-grid-points", type=int, default=200)
    p.add_argument("--mcmc-iters", type=int, default=50_000)
    p.add_argument("--burn-in", type=int, default=10_000)
    p.add_argument("--credible-level", type=float, default=0.95)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweep-theta", help="comma-separated thetas, or 'default' for the ten-value set")
    _common(p)
    p.set_defaults(func=cmd_fit)
    return parser


def _apply_config(parser, argv):
    """Config values become defaults; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        doc = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    if doc.get("version") != CONFIG_VERSION:
        raise UsageError(f"config version must be {CONFIG_VERSION}")
    values = {k.replace("-", "_"): v for k, v in doc.items() if k != "version"}
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**values)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, DatasetFormatError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, CapabilityError) as exc:
        # Invalid parameter values supplied on the command line.
        print(f"error: {exc}", file=sys.stderr)
        return 1 if isinstance(exc, CapabilityError) else 2
    except (ArithmeticError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
