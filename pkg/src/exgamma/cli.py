"""Command-line interface: ``exgamma fit|compare|sample|curve|evaluate``.

Exit status: 0 success, 1 input or validation error, 2 fit did not converge.
"""

import argparse
import json
import sys

import numpy as np

from . import core
from .dataio import DataError, load_dataset
from .fit import fit_model
from .gof import DEFAULT_MODELS, best_model, compare_models
from .models import ModelKind, ModelParams, model_cdf, model_hazard, model_pdf, model_survival
from .sampler import DEFAULT_SEED, RngStream, exg_sample
from .specfn import ConvergenceError

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED = 0, 1, 2
MODEL_TAGS = [k.tag for k in ModelKind]

_CURVES = {
    "pdf": model_pdf,
    "cdf": model_cdf,
    "survival": model_survival,
    "hazard": model_hazard,
}


class UsageError(Exception):
    pass


def _fmt(v):
    return f"{v:.4f}"


def _estimates(params):
    return ", ".join(f"{k}={_fmt(v)}" for k, v in params.named().items())


def _params_from_args(args) -> ModelParams:
    kind = ModelKind.from_tag(args.model)
    given = {"alpha": args.alpha, "theta": args.theta, "beta": args.beta}
    extra = [k for k, v in given.items() if v is not None and k not in kind.param_names]
    if extra:
        raise UsageError(f"{kind.label} does not take parameter(s): {', '.join(extra)}")
    return ModelParams.from_named(kind, **given)


def cmd_fit(args, out):
    kind = ModelKind.from_tag(args.model)
    data = load_dataset(args.path)
    res = fit_model(kind, data)
    if args.format == "json":
        json.dump(
            {
                "model": kind.tag,
                "params": res.params.named(),
                "neg2_loglik": res.neg2_loglik,
                "converged": res.converged,
                "iterations": res.iterations,
                "grad_inf_norm": res.grad_inf_norm,
                "start_points_tried": res.start_points_tried,
                "n": data.n,
            },
            out,
            indent=2,
        )
        out.write("\n")
    else:
        out.write(f"model: {kind.label}  (n = {data.n})\n")
        for name, v in res.params.named().items():
            out.write(f"  {name:<6} = {_fmt(v)}\n")
        out.write(f"-2 log L      = {_fmt(res.neg2_loglik)}\n")
        out.write(f"converged     = {'yes' if res.converged else 'no'}\n")
        out.write(f"iterations    = {res.iterations}\n")
        out.write(f"|score|_inf   = {res.grad_inf_norm:.3e}\n")
    if not res.converged:
        print(f"warning: {kind.label} fit did not converge (|score|_inf = {res.grad_inf_norm:.3e})", file=sys.stderr)
        return EXIT_NONCONVERGED
    return EXIT_OK


def _parse_models(text):
    if text is None:
        return list(DEFAULT_MODELS)
    kinds = [ModelKind.from_tag(tag.strip()) for tag in text.split(",") if tag.strip()]
    if not kinds:
        raise UsageError("--models needs at least one of ed,gd,xg,exg")
    return kinds


def cmd_compare(args, out):
    kinds = _parse_models(args.models)
    data = load_dataset(args.path)
    reports = compare_models(data, kinds)
    if args.format == "json":
        best = best_model(reports)
        json.dump(
            {
                "n": data.n,
                "source": data.source,
                "best": best.model.tag if best else None,
                "models": [r.to_dict() for r in reports],
            },
            out,
            indent=2,
        )
        out.write("\n")
    else:
        head = ("Model", "Estimates", "-2logL", "K-S", "p-value", "AIC", "BIC")
        rows = []
        for r in reports:
            if r.failed:
                rows.append((r.model.label, f"FAILED: {r.error}", "", "", "", "", ""))
            else:
                rows.append(
                    (
                        r.model.label,
                        _estimates(r.params),
                        _fmt(r.neg2_loglik),
                        _fmt(r.ks_stat),
                        _fmt(r.ks_pvalue),
                        _fmt(r.aic),
                        _fmt(r.bic),
                    )
                )
        widths = [max(len(str(row[i])) for row in [head] + rows) for i in range(len(head))]
        line = "  ".join(h.ljust(w) for h, w in zip(head, widths))
        out.write(line + "\n" + "-" * len(line) + "\n")
        for row in rows:
            out.write("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
        for crit, label in (("neg2_loglik", "-2logL"), ("ks_stat", "K-S")):
            best = best_model(reports, crit)
            if best:
                out.write(f"best by {label}: {best.model.label}\n")
        out.write("note: K-S uses estimated parameters without a Lilliefors correction; p-values are asymptotic.\n")
    if all(r.failed for r in reports):
        return EXIT_INPUT
    return EXIT_OK


def cmd_sample(args, out):
    params = _params_from_args(args)
    if args.n < 1:
        raise UsageError(f"-n must be >= 1, got {args.n}")
    draws = exg_sample(RngStream(args.seed), params.to_exg(), args.n)
    if args.format == "json":
        json.dump({"model": params.kind.tag, "params": params.named(), "seed": args.seed, "draws": draws.tolist()}, out)
        out.write("\n")
    else:
        out.writelines(f"{v:.17g}\n" for v in draws)
    return EXIT_OK


def _grid(args, params):
    exg = params.to_exg()
    xmax = args.xmax if args.xmax is not None else core.quantile(exg, 0.999)
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    at_zero_ok = args.which in ("cdf", "survival") or exg.alpha >= 1.0
    if args.xmin is not None:
        xmin = args.xmin
    else:
        xmin = 0.0 if at_zero_ok else xmax / args.points
    if xmin < 0:
        raise UsageError(f"--xmin must be >= 0, got {xmin}")
    if xmin == 0 and not at_zero_ok:
        raise UsageError(f"{args.which} is unbounded at x = 0 when alpha < 1; use --xmin > 0")
    if not xmax > xmin:
        raise UsageError(f"--xmax ({xmax}) must exceed --xmin ({xmin})")
    return np.linspace(xmin, xmax, args.points)


def _curve_values(which, params, xs):
    fn = _CURVES[which]
    if which in ("cdf", "survival") or xs[0] > 0:
        return np.asarray(fn(params, xs))
    # pdf/hazard at x = 0 take the right limit of the density (S(0) = 1)
    vals = np.empty_like(xs)
    vals[0] = core.pdf_at_zero(params.to_exg())
    vals[1:] = fn(params, xs[1:])
    return vals


def cmd_curve(args, out):
    params = _params_from_args(args)
    xs = _grid(args, params)
    vals = _curve_values(args.which, params, xs)
    if args.format == "json":
        json.dump(
            {
                "model": params.kind.tag,
                "which": args.which,
                "params": params.named(),
                "points": [[float(x), float(v)] for x, v in zip(xs, vals)],
            },
            out,
        )
        out.write("\n")
    else:
        out.write(f"# x {args.which}\n")
        out.writelines(f"{x:.17g} {v:.17g}\n" for x, v in zip(xs, vals))
    return EXIT_OK


def cmd_evaluate(args, out):
    params = _params_from_args(args)
    p = params.to_exg()
    ms = core.moment_summary(p)
    info = {
        "model": params.kind.tag,
        "params": params.named(),
        "mean": ms.mean,
        "variance": ms.variance,
        "sd": ms.sd,
        "cv": ms.cv,
        "skewness": ms.skewness,
        "excess_kurtosis": ms.excess_kurtosis,
        "raw_moments": list(ms.raw_moments),
        "mean_deviation": core.mean_deviation(p),
        "mode": core.mode(p),
        "median": core.quantile(p, 0.5),
    }
    if args.format == "json":
        json.dump(info, out, indent=2)
        out.write("\n")
    else:
        out.write(f"model: {params.kind.label}  ({_estimates(params)})\n")
        for key, v in info.items():
            if key in ("model", "params"):
                continue
            shown = ", ".join(_fmt(x) for x in v) if isinstance(v, list) else _fmt(v)
            out.write(f"  {key:<16} {shown}\n")
    return EXIT_OK


def _add_param_flags(p):
    p.add_argument("--alpha", type=float, help="shape (gd, exg)")
    p.add_argument("--theta", type=float, help="rate (all models)")
    p.add_argument("--beta", type=float, help="mixture parameter, >= 0 (exg)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")

    parser = argparse.ArgumentParser(prog="exgamma", description="Extended xgamma lifetime distribution toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="maximum-likelihood fit of one model")
    p.add_argument("model", choices=MODEL_TAGS)
    p.add_argument("path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", parents=[common], help="fit all models and rank them")
    p.add_argument("path")
    p.add_argument("--models", help="comma-separated subset of ed,gd,xg,exg")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sample", parents=[common], help="draw random variates")
    p.add_argument("model", choices=MODEL_TAGS)
    _add_param_flags(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("curve", parents=[common], help="tabulate pdf/cdf/survival/hazard on a grid")
    p.add_argument("model", choices=MODEL_TAGS)
    p.add_argument("which", choices=tuple(_CURVES))
    _add_param_flags(p)
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float, help="default: the 0.999 quantile")
    p.add_argument("--points", type=int, default=200)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("evaluate", parents=[common], help="moments, mean deviation, mode and median")
    p.add_argument("model", choices=MODEL_TAGS)
    _add_param_flags(p)
    p.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as out:
                return args.func(args, out)
        return args.func(args, sys.stdout)
    except (UsageError, DataError, ValueError, OverflowError, ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
