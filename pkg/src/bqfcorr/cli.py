"""Command line front end.

Every subcommand prints JSON to stdout with sorted keys and floats at 12
significant digits, so identical invocations give byte-identical output.
Exit codes: 0 success, 1 internal error, 2 validation failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from .correlation import (
    AffineSystem,
    Box,
    ValidationError,
    ap_average,
    beta_inf,
    build_wtrick,
    normalized_mean,
    predict_and_compare,
    validate_system,
)
from .forms import QuadForm, classify, FormClass, normalize_indefinite, reduce_definite
from .localdensities import beta_p, rho
from .repcount import build_rep_table, count_rep
from .selftest import run_selftest
from .unitcone import fundamental_pell

EXIT_OK, EXIT_ERROR, EXIT_VALIDATION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_round_floats(obj), sort_keys=True)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _form(text: str) -> QuadForm:
    try:
        return QuadForm.parse(text)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad form {text!r}: {exc}") from exc


def load_config(path: str) -> tuple[AffineSystem, list[QuadForm], Box]:
    """Read {"forms": [...], "linear": [[...]], "constant": [...], "box": [[l, u], ...]}."""
    with open(path) as fh:
        cfg = json.load(fh)
    try:
        forms = [QuadForm.parse(s) for s in cfg["forms"]]
        system = AffineSystem(cfg["linear"], cfg["constant"])
        box = Box(tuple((Fraction(str(lo)), Fraction(str(hi))) for lo, hi in cfg["box"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad config {path}: {exc}") from exc
    if len(forms) != system.t or box.d != system.d:
        raise UsageError("config sizes disagree (forms vs linear rows, box vs columns)")
    return system, forms, box


def cmd_reduce(args):
    f = _form(args.form)
    kind = classify(f)
    if kind is FormClass.POSITIVE_DEFINITE:
        g = reduce_definite(f)
    elif kind is FormClass.INDEFINITE:
        g = normalize_indefinite(f)
    else:
        raise ValidationError("negative definite forms are not reduced; pass -f")
    return {"form": str(f), "D": f.D, "class": kind.value, "reduced": str(g)}


def cmd_unit(args):
    sol = fundamental_pell(args.disc)
    return {"D": sol.D, "t0": sol.t0, "u0": sol.u0, "eps": sol.eps, "log_eps": sol.log_eps}


def cmd_rep(args):
    f = _form(args.form)
    if (args.n is None) == (args.limit is None):
        raise UsageError("rep needs exactly one of --n and --limit")
    if args.n is not None:
        return {"form": str(f), "n": args.n, "r": count_rep(f, args.n)}
    table = build_rep_table(f, args.limit)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n", "count"])
        for n, c in enumerate(table.counts.tolist()):
            writer.writerow([n, c])
    finally:
        if args.out:
            out.close()
    if args.out:
        return {"form": str(f), "limit": args.limit, "out": args.out, "total": table.total()}
    return None


def cmd_rho(args):
    f = _form(args.form)
    if args.mod < 1:
        raise UsageError("--mod must be positive")
    return {"form": str(f), "mod": args.mod, "res": args.res % args.mod, "rho": rho(f, args.res, args.mod)}


def cmd_betap(args):
    system, forms, _ = load_config(args.config)
    lf = beta_p(system, forms, args.p, args.mmax)
    return {
        "p": lf.prime,
        "m_used": lf.m_used,
        "value": _frac(lf.value),
        "stabilized": lf.stabilized,
        "history": [_frac(v) for v in lf.history],
    }


def cmd_betainf(args):
    system, forms, box = load_config(args.config)
    report = validate_system(system, forms, box, args.N)
    if not report.ok:
        raise ValidationError(report.describe())
    return {"N": args.N, "beta_inf": beta_inf(box, forms, args.N)}


def cmd_correlate(args):
    system, forms, box = load_config(args.config)
    report = predict_and_compare(system, forms, box, args.N, args.pmax, args.mmax, threads=args.threads)
    data = report.to_dict(with_timings=args.timings)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(data) + "\n")
    return data


def cmd_apavg(args):
    f = _form(args.form)
    res = ap_average(f, args.mod, args.res, args.N)
    return {
        "form": str(f),
        "mod": args.mod,
        "res": args.res,
        "N": args.N,
        "length": res.length,
        "rho": res.rho,
        "empirical": res.empirical,
        "predicted": res.predicted,
        "deviation": res.deviation,
    }


def cmd_wtrick(args):
    cfg = build_wtrick(args.w, args.threshold, args.res)
    out = {
        "w": cfg.w,
        "threshold": cfg.threshold,
        "W": cfg.W,
        "A": cfg.A,
        "alphas": {str(p): a for p, a in cfg.alphas},
        "admissible": cfg.admissible,
    }
    if args.form:
        f = _form(args.form)
        out["form"] = str(f)
        out["rho_W"] = rho(f, cfg.A, cfg.W)
        if args.M:
            out["M"] = args.M
            out["mean"] = normalized_mean(f, cfg, args.M)
    return out


def cmd_selftest(args):
    results = run_selftest()
    if not all(r["ok"] for r in results.values()):
        print(dumps(results))
        raise ValidationError("selftest failed")
    return results


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bqfcorr", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", help="reduced / normalized representative of a form")
    p.add_argument("--form", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("unit", help="minimal solution of t^2 - D u^2 = 4")
    p.add_argument("--disc", type=int, required=True)
    p.set_defaults(func=cmd_unit)

    p = sub.add_parser("rep", help="r_f(n) pointwise, or a CSV table up to --limit")
    p.add_argument("--form", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("rho", help="local count rho_{f,A}(q)")
    p.add_argument("--form", required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--res", type=int, required=True)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("betap", help="local factor beta_p of a system")
    p.add_argument("--config", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mmax", type=int)
    p.set_defaults(func=cmd_betap)

    p = sub.add_parser("betainf", help="archimedean factor of a system")
    p.add_argument("--config", required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_betainf)

    p = sub.add_parser("correlate", help="empirical correlation sum against the prediction")
    p.add_argument("--config", required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--pmax", type=int, default=97)
    p.add_argument("--mmax", type=int)
    p.add_argument("--out")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not reproducible)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("apavg", help="mean of r_f along an arithmetic progression")
    p.add_argument("--form", required=True)
    p.add_argument("--mod", type=int, required=True)
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_apavg)

    p = sub.add_parser("wtrick", help="W-trick modulus, optionally the normalized mean of a form")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--res", type=int, default=1)
    p.add_argument("--form")
    p.add_argument("--M", type=int)
    p.set_defaults(func=cmd_wtrick)

    p = sub.add_parser("selftest", help="run the cross-module oracle checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except UsageError as exc:
        print(f"bqfcorr: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"bqfcorr: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - reported as exit code 1
        print(f"bqfcorr: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if result is not None:
        print(dumps(result))
    return EXIT_OK


def main():
    sys.exit(run())
