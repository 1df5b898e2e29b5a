"""Command-line front end: ``secure-hda {regimes,distortion,region,mismatch,exponent,simulate}``.

SNRs are given in dB on the command line and converted to noise variances
(``N = P / SNR``) before anything else runs. JSON goes to stdout; CSV numbers
use 9 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .core import (
    MismatchParams,
    ParamError,
    SchemeIIIParams,
    SchemeIParams,
    SingularCovariance,
    SystemParams,
    db_to_linear,
    linear_to_db,
    load_params,
)
from .rates import classify_regime, secrecy_rate_maxmin
from .robustness import MismatchScheme, estimate_exponent, mismatch_curve
from .schemes import (
    FeasibilityRegion,
    Scheme,
    feasibility,
    optimal_distortion,
    scheme1_distortion,
    scheme1_optimal,
    scheme2_distortion,
    scheme3_distortion,
    scheme3_eq_params,
    separation_distortion,
)
from .simulation import SimConfig, simulate_scheme

EXIT_CONFIG = 2
EXIT_Z_GUARD = 3
Z_GUARD = 5.0
ALL_MISMATCH = ("separation", "hda1", "hda1-modified", "hda3")


class CliError(Exception):
    pass


def _clean(obj):
    if isinstance(obj, float):
        return None if not math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    return obj


def _emit_json(payload: dict, out) -> None:
    json.dump(_clean(payload), out, indent=2, sort_keys=True, allow_nan=False)
    out.write("\n")


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".9g")


def _grid(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise CliError(f"bad grid {text!r}: expected lo:hi:n") from None
    if not (lo < hi and n >= 2):
        raise CliError(f"bad grid {text!r}: need lo < hi and n >= 2")
    return lo, hi, n


def _window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise CliError(f"bad window {text!r}: expected lo:hi") from None
    if not lo < hi:
        raise CliError(f"bad window {text!r}: need lo < hi")
    return lo, hi


def _design_noise(args, p: SystemParams, nd_file: float | None) -> float:
    if getattr(args, "snrd_db", None) is not None:
        return p.P / db_to_linear(args.snrd_db)
    if nd_file is not None:
        return nd_file
    return p.N1


def cmd_regimes(args, p: SystemParams, nd_file, out) -> int:
    reg = classify_regime(p, allow_zero_interference=True)
    _emit_json({
        "params": p.to_dict(),
        "P_L": reg.P_L,
        "P_H": reg.P_H,
        "regime": reg.regime.value,
        "alpha_star": reg.alpha_star,
        "alpha_0": reg.alpha_0,
        "R_s_bits": reg.R_s,
        "R_s_maxmin_check": secrecy_rate_maxmin(p, args.grid_size),
    }, out)
    return 0


def cmd_distortion(args, p: SystemParams, nd_file, out) -> int:
    scheme = Scheme(args.scheme)
    manual = args.alpha is not None or args.k is not None
    if manual and (args.alpha is None or args.k is None):
        raise CliError("--alpha and --k must be given together")
    if scheme is Scheme.separation:
        rep = separation_distortion(p)
    elif scheme is Scheme.hda1:
        sp = SchemeIParams(args.alpha, args.k) if manual else scheme1_optimal(p)
        rep = scheme1_distortion(p, sp)
    elif scheme is Scheme.hda2:
        if args.rate is None:
            raise CliError("hda2 needs --rate")
        rep = scheme2_distortion(p, args.rate)
    else:
        rate = 0.0 if args.rate is None else args.rate
        sp = SchemeIIIParams(args.alpha, args.k, rate) if manual else scheme3_eq_params(p, rate)
        rep = scheme3_distortion(p, sp)
    d = rep.to_dict()
    d.update({"params": p.to_dict(), "D": rep.closed_form_D, "D_opt": optimal_distortion(p)})
    _emit_json(d, out)
    return 0


def cmd_region(args, p: SystemParams, nd_file, out) -> int:
    a_lo, a_hi, a_n = _grid(args.alpha_grid)
    k_lo, k_hi, k_n = _grid(args.k_grid)
    region = FeasibilityRegion(p)
    cols = ["row_type", "alpha", "k", "feasible", "lower_margin", "upper_margin", "k_lower", "k_upper"]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    opt = scheme1_optimal(p)
    f = feasibility(p, opt)
    w.writerow(["optimum", _fmt(opt.alpha), _fmt(opt.k), _fmt(f.feasible),
                _fmt(f.lower_margin), _fmt(f.upper_margin), "", ""])
    alphas = np.linspace(a_lo, a_hi, a_n)
    for a in alphas:
        for k in np.linspace(k_lo, k_hi, k_n):
            f = feasibility(p, SchemeIParams(float(a), float(k)))
            w.writerow(["grid", _fmt(a), _fmt(k), _fmt(f.feasible),
                        _fmt(f.lower_margin), _fmt(f.upper_margin), "", ""])
    for a in alphas:
        lo2, hi2 = float(region.lower_k2(a)), float(region.upper_k2(a))
        k_lower = math.sqrt(max(lo2, 0.0))
        k_upper = math.sqrt(hi2) if hi2 >= 0 else math.nan
        lm = feasibility(p, SchemeIParams(float(a), k_lower)).lower_margin
        um = feasibility(p, SchemeIParams(float(a), k_upper)).upper_margin if hi2 >= 0 else math.nan
        w.writerow(["boundary", _fmt(a), "", "", _fmt(lm), _fmt(um), _fmt(k_lower), _fmt(k_upper)])
    return 0


def _mismatch_schemes(name: str) -> list[str]:
    return list(ALL_MISMATCH) if name == "all" else [MismatchScheme(name).value]


def cmd_mismatch(args, p: SystemParams, nd_file, out) -> int:
    nd = _design_noise(args, p, nd_file)
    lo, hi, n = _grid(args.snr1_sweep)
    snrd_db = linear_to_db(p.P / nd)
    if lo < snrd_db - 1e-9:
        raise CliError(f"sweep starts at {lo} dB, below the design SNR {snrd_db:.6g} dB")
    snr_db = np.linspace(lo, hi, n)
    schemes = _mismatch_schemes(args.scheme)
    if args.rate is None and any(s in ("hda2", "hda3") for s in schemes):
        raise CliError("hda2/hda3 need --rate")
    curves = [mismatch_curve(p, s, nd, snr_db, args.rate) for s in schemes]
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["snr1_db"] + ["D_" + s.replace("-", "_") for s in schemes])
    for i, s in enumerate(snr_db):
        w.writerow([_fmt(s)] + [_fmt(c.distortion_values[i]) for c in curves])
    return 0


def cmd_exponent(args, p: SystemParams, nd_file, out) -> int:
    nd = _design_noise(args, p, nd_file)
    lo, hi = _window(args.window_db)
    if args.scheme in ("hda2", "hda3") and args.rate is None:
        raise CliError(f"{args.scheme} needs --rate")
    est = estimate_exponent(p, args.scheme, nd, lo, hi, args.points, args.rate)
    _emit_json({
        "params": p.to_dict(),
        "scheme": MismatchScheme(args.scheme).value,
        "design_noise": nd,
        "zeta": est.zeta,
        "fit_range_db": list(est.fit_range_db),
        "residual": est.residual,
        "points": args.points,
    }, out)
    return 0


def cmd_simulate(args, p: SystemParams, nd_file, out) -> int:
    manual = args.alpha is not None or args.k is not None
    if manual and (args.alpha is None or args.k is None):
        raise CliError("--alpha and --k must be given together")
    params = None
    if manual:
        if args.scheme == "hda1":
            params = SchemeIParams(args.alpha, args.k)
        elif args.scheme == "hda3":
            params = SchemeIIIParams(args.alpha, args.k, 0.0 if args.rate is None else args.rate)
        else:
            raise CliError("hda2 parameters are set by --rate")
    mismatch = None
    if args.snr1_db is not None:
        mismatch = MismatchParams(p.N1, p.P / db_to_linear(args.snr1_db))
    cfg = SimConfig(args.samples, args.seed, args.scheme, params, args.rate, mismatch,
                    args.force, args.workers)
    rep = simulate_scheme(cfg, p)
    d = rep.to_dict()
    d["params"] = p.to_dict()
    d["mismatch"] = None if mismatch is None else {"Nd": mismatch.Nd, "N1_actual": mismatch.N1_actual}
    _emit_json(d, out)
    return EXIT_Z_GUARD if abs(rep.z_score) > Z_GUARD else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="secure-hda", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("params_file", help="JSON file with P, Q, N1, N2, sigma_v2 (or snr*_db)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("regimes", cmd_regimes, "power thresholds and secrecy rate")
    sp.add_argument("--grid-size", type=int, default=100)

    sp = add("distortion", cmd_distortion, "closed-form distortion of one scheme")
    sp.add_argument("--scheme", choices=[s.value for s in Scheme], required=True)
    sp.add_argument("--rate", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--k", type=float)

    sp = add("region", cmd_region, "Scheme I valid (alpha, k) region as CSV")
    sp.add_argument("--alpha-grid", default="0:1:51")
    sp.add_argument("--k-grid", default="0:2:51")

    sp = add("mismatch", cmd_mismatch, "distortion versus true SNR as CSV")
    sp.add_argument("--scheme", choices=[s.value for s in MismatchScheme] + ["all"], default="all")
    sp.add_argument("--snrd-db", type=float)
    sp.add_argument("--snr1-sweep", required=True)
    sp.add_argument("--rate", type=float)

    sp = add("exponent", cmd_exponent, "distortion exponent from a log-log fit")
    sp.add_argument("--scheme", choices=[s.value for s in MismatchScheme], required=True)
    sp.add_argument("--snrd-db", type=float)
    sp.add_argument("--window-db", default="60:80")
    sp.add_argument("--points", type=int, default=20)
    sp.add_argument("--rate", type=float)

    sp = add("simulate", cmd_simulate, "Monte Carlo check of a scheme's distortion")
    sp.add_argument("--scheme", choices=["hda1", "hda2", "hda3"], default="hda1")
    sp.add_argument("--samples", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--snr1-db", type=float, help="true SNR; the params file N1 is the design noise")
    sp.add_argument("--rate", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--k", type=float)
    sp.add_argument("--force", action="store_true", help="simulate even if constraints fail")
    sp.add_argument("--workers", type=int, default=1)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        p, nd_file = load_params(args.params_file)
        return args.func(args, p, nd_file, out)
    except (ParamError, SingularCovariance, CliError, ValueError, OSError) as exc:
        name = getattr(exc, "name", type(exc).__name__)
        if not isinstance(name, str):
            name = type(exc).__name__
        print(f"error: {name}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout (used by the tests)."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
