"""Command-line front end: solve, table, curve, critical.

Examples:
    buoyancy solve --method scp --profile linear --epsilon 0 --a2 4.92 --n 4
    buoyancy table --profile mixed --n 4 --compare
    buoyancy curve --method slp --profile linear --epsilon 0.2 --a2-range 4 10 --points 13
    buoyancy critical --method slp --profile linear --epsilon 0 --n 8 --a2-range 2 12

BUOYANCY_THREADS caps sweep parallelism (default 1, 0 = one per CPU).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

from numpy.linalg import LinAlgError

from .analysis import (
    FAMILIES,
    PUBLISHED,
    calibration_info,
    critical_point,
    neutral_curve,
    reproduce_table,
    solve_neutral,
)
from .assembly import GravityProfile, bundled_profile

FULL = "{:.17g}"


@dataclass
class RunConfig:
    method: str = "scp"
    profile_name: str = "linear"
    h_coeffs: tuple = ()
    epsilon: float = 0.0
    a2: float = 4.92
    n: int = 4
    fd_m: int = 400
    output: str = "table"
    out_path: str = None
    workers: int = 1


def _usage_error(message):
    print(f"usage error: {message}", file=sys.stderr)
    raise SystemExit(2)


def _thread_count():
    raw = os.environ.get("BUOYANCY_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        _usage_error(f"BUOYANCY_THREADS must be an integer, got {raw!r}")
    if value < 0:
        _usage_error("BUOYANCY_THREADS must be >= 0")
    return value if value > 0 else (os.cpu_count() or 1)


def _finite(value):
    x = float(value)
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"{value!r} is not a finite number")
    return x


def _profile_from(args):
    if args.profile == "custom":
        if not args.h_coeffs:
            _usage_error("custom profile needs --h-coeffs")
        try:
            coeffs = tuple(float(c) for c in args.h_coeffs.split(","))
        except ValueError:
            _usage_error(f"could not parse --h-coeffs {args.h_coeffs!r}")
        return GravityProfile("custom", coeffs, args.epsilon)
    return bundled_profile(args.profile, args.epsilon)


def _emit(lines, out_path):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args):
    profile = _profile_from(args)
    result = solve_neutral(args.method, profile, args.a2, n=args.n, fd_m=args.fd_m)
    size = args.fd_m if args.method == "fd" else args.n
    lines = [
        "method,profile,epsilon,a2,n,R2,residual",
        ",".join([
            args.method, profile.name,
            FULL.format(args.epsilon), FULL.format(args.a2), str(size),
            FULL.format(result.rayleigh_sq), FULL.format(result.residual),
        ]),
    ]
    _emit(lines, args.out)
    return 0


def _render_table(family, rows, compare, csv_mode):
    if csv_mode:
        if compare:
            lines = ["epsilon,a2,R2_scp,R2_slp,published_scp,published_slp,dev_scp_pct,dev_slp_pct"]
        else:
            lines = ["epsilon,a2,R2_scp,R2_slp"]
        for i, row in enumerate(rows):
            cells = [FULL.format(row.epsilon), FULL.format(row.a2),
                     FULL.format(row.r2_scp), FULL.format(row.r2_slp)]
            if compare:
                pub_scp = PUBLISHED[family]["scp"][i]
                pub_slp = PUBLISHED[family]["slp"][i]
                cells += [pub_scp, pub_slp,
                          FULL.format(100.0 * (row.r2_scp - float(pub_scp)) / float(pub_scp)),
                          FULL.format(100.0 * (row.r2_slp - float(pub_slp)) / float(pub_slp))]
            lines.append(",".join(cells))
        return lines

    header = f"{'eps':>5} {'a2':>6} {'R2 scp':>10} {'R2 slp':>10}"
    if compare:
        header += f" {'ref scp':>9} {'ref slp':>9} {'dev scp':>8} {'dev slp':>8}"
    lines = [header]
    for i, row in enumerate(rows):
        line = f"{row.epsilon:>5g} {row.a2:>6g} {row.r2_scp:>10.3f} {row.r2_slp:>10.3f}"
        if compare:
            pub_scp = PUBLISHED[family]["scp"][i]
            pub_slp = PUBLISHED[family]["slp"][i]
            dev_scp = 100.0 * (row.r2_scp - float(pub_scp)) / float(pub_scp)
            dev_slp = 100.0 * (row.r2_slp - float(pub_slp)) / float(pub_slp)
            line += f" {pub_scp:>9} {pub_slp:>9} {dev_scp:>7.2f}% {dev_slp:>7.2f}%"
        lines.append(line)
    return lines


def cmd_table(args):
    rows = reproduce_table(args.profile, n=args.n, workers=args.workers)
    lines = _render_table(args.profile, rows, args.compare, args.output == "csv")
    if args.compare and args.output != "csv":
        cal = calibration_info()
        lines.append(f"calibrated index span: k = {cal['chosen_span']} at quoted order n = {cal['requested_n']}")
    _emit(lines, args.out)
    return 0


def cmd_curve(args):
    profile = _profile_from(args)
    lo, hi = args.a2_range
    if not 0 < lo < hi:
        _usage_error("need 0 < lo < hi in --a2-range")
    if args.points < 1:
        _usage_error("--points must be >= 1")
    if args.points == 1:
        grid = [lo]
    else:
        step = (hi - lo) / (args.points - 1)
        grid = [lo + i * step for i in range(args.points)]
    pts = neutral_curve(args.method, profile, grid, n=args.n, fd_m=args.fd_m,
                        workers=args.workers)
    lines = ["a2,R2"] + [",".join([FULL.format(a2), FULL.format(r2)]) for a2, r2 in pts]
    _emit(lines, args.out)
    return 0


def cmd_critical(args):
    profile = _profile_from(args)
    lo, hi = args.a2_range
    if not 0 < lo < hi:
        _usage_error("need 0 < lo < hi in --a2-range")
    point = critical_point(args.method, profile, lo, hi, n=args.n, fd_m=args.fd_m,
                           workers=args.workers)
    lines = ["a2_crit,R2_crit",
             ",".join([FULL.format(point.a2_crit), FULL.format(point.r2_crit)])]
    _emit(lines, args.out)
    return 0


def _add_common(sub, with_point=True):
    sub.add_argument("--method", choices=["scp", "slp", "fd"], default="scp")
    sub.add_argument("--profile", choices=list(FAMILIES) + ["custom"], default="linear")
    sub.add_argument("--h-coeffs", default="",
                     help="comma-separated monomial coefficients h1,h2,... for --profile "
                          "custom (write --h-coeffs=-2,1 when the first one is negative)")
    sub.add_argument("--epsilon", type=_finite, default=0.0)
    if with_point:
        sub.add_argument("--a2", type=_finite, default=4.92)
    sub.add_argument("--n", type=int, default=4, help="expansion order (spectral methods)")
    sub.add_argument("--fd-m", type=int, default=400, help="interior grid points (fd method)")
    sub.add_argument("--output", choices=["table", "csv"], default="table")
    sub.add_argument("--out", default=None, help="write output to this path instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="buoyancy", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("solve", help="one neutral-value solve")
    _add_common(sp)
    sp.set_defaults(func=cmd_solve)

    tp = subs.add_parser("table", help="reproduce one published nine-row table")
    tp.add_argument("--profile", choices=list(FAMILIES), default="linear")
    tp.add_argument("--n", type=int, default=4)
    tp.add_argument("--compare", action="store_true",
                    help="append published reference values and percent deviations")
    tp.add_argument("--output", choices=["table", "csv"], default="table")
    tp.add_argument("--out", default=None)
    tp.set_defaults(func=cmd_table)

    cp = subs.add_parser("curve", help="neutral curve R2(a2) over a range")
    _add_common(cp, with_point=False)
    cp.add_argument("--a2-range", type=_finite, nargs=2, required=True, metavar=("LO", "HI"))
    cp.add_argument("--points", type=int, default=25)
    cp.set_defaults(func=cmd_curve)

    kp = subs.add_parser("critical", help="minimize R2 over a2 in a bracket")
    _add_common(kp, with_point=False)
    kp.add_argument("--a2-range", type=_finite, nargs=2, required=True, metavar=("LO", "HI"))
    kp.set_defaults(func=cmd_critical)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args.workers = _thread_count()
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError, LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
