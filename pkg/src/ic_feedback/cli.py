"""Command-line front end.

    ic-feedback ldic region       --n11 4 --n22 4 --n12 2 --n21 2 --cfb1 1 --cfb2 1
    ic-feedback ldic sumrate-sweep --beta 0,0.125,inf --output sumrate.csv --plot sumrate.gp
    ic-feedback ldic simulate     --motivating --blocks 10
    ic-feedback gaussian bounds   --snr-db 40 --inr-db 20 --cfb1 5 --cfb2 5
    ic-feedback gaussian gap-sweep --snr-db 20 --cfb1 10 --optimize

Exit codes: 0 success, 1 a checked claim failed, 2 usage error, 3 regime
not supported by the simulator.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .gaussian_ach import achievable_by_regime, applicable_regimes
from .gaussian_bounds import (GaussianParams, sumrate_outer, symmetric_outer_terms,
                              symmetric_sumrate_outer)
from .ldic_capacity import (appendixB_region, symmetric_sumrate_branches,
                            theorem3_region)
from .ldic_model import InvalidGainError, LdicParams
from .ldic_sim import (MOTIVATING_PARAMS, DecodingAmbiguityError,
                       UnsupportedRegimeError, build_scheme, simulate,
                       trace_to_text)
from .region_core import max_weighted, regions_equal, vertices

EXIT_OK, EXIT_CLAIM, EXIT_USAGE, EXIT_UNSUPPORTED = 0, 1, 2, 3

# stand-in for an unlimited feedback rate on the normalised sum-rate curve
BETA_INF_PROXY = 10


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# formatting and parallel helpers


def fmt(v) -> str:
    """Nine significant digits; integers and exact values print without noise."""
    if isinstance(v, str):
        return v
    return f"{float(v):.9g}"


def _fmt_point(p) -> str:
    return "(" + ", ".join(str(Fraction(c)) for c in p) + ")"


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _workers() -> int:
    raw = os.environ.get("IC_FEEDBACK_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"IC_FEEDBACK_THREADS must be an integer, got {raw!r}")
    return os.cpu_count() or 1


def _ordered_map(fn, items, min_parallel=32):
    """``map`` that fans out to processes for long inputs; order is preserved."""
    items = list(items)
    workers = min(_workers(), len(items))
    if workers <= 1 or len(items) < min_parallel:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _axis(start, stop, step):
    """Inclusive arithmetic grid computed in exact decimals."""
    start, stop, step = Fraction(str(start)), Fraction(str(stop)), Fraction(str(step))
    if step <= 0:
        raise UsageError("axis step must be positive")
    if stop < start:
        raise UsageError("axis stop is below start")
    n = int((stop - start) / step)
    return [start + i * step for i in range(n + 1)]


def _parse_rational(text: str):
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")
    return int(v) if v.denominator == 1 else v


# ---------------------------------------------------------------------------
# ldic


def _ldic_params(args) -> LdicParams:
    return LdicParams(args.n11, args.n22, args.n12, args.n21,
                      _parse_rational(str(args.cfb1)), _parse_rational(str(args.cfb2)))


def _check_row(g):
    return regions_equal(theorem3_region(g), appendixB_region(g))


def cmd_ldic_region(args) -> int:
    if args.grid:
        params = []
        with open(args.grid, encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#") or row[0].strip() == "n11":
                    continue
                if len(row) != 6:
                    raise UsageError(f"grid rows need six fields, got {row}")
                vals = [_parse_rational(x.strip()) for x in row]
                params.append(LdicParams(*vals))
        results = _ordered_map(_check_row, params)
        failed = 0
        for g, ok in zip(params, results):
            print(",".join(str(v) for v in g.as_tuple()) + (" PASS" if ok else " FAIL"))
            failed += not ok
        print(f"{len(params) - failed}/{len(params)} PASS")
        return EXIT_OK if failed == 0 else EXIT_CLAIM

    g = _ldic_params(args)
    region = theorem3_region(g)
    print(f"params n11={g.n11} n22={g.n22} n12={g.n12} n21={g.n21} "
          f"cfb1={g.cfb1} cfb2={g.cfb2}")
    print("constraints:")
    for c in region:
        print(f"  {c}")
    print("vertices:")
    for v in vertices(region):
        print(f"  {_fmt_point(v)}")
    print(f"max sum-rate: {max_weighted(region, 1, 1)}")
    if args.check_appendix_b:
        ok = _check_row(g)
        print("appendix-b equivalence: " + ("PASS" if ok else "FAIL"))
        return EXIT_OK if ok else EXIT_CLAIM
    return EXIT_OK


def _sumrate_plot_script(csv_path, betas):
    lines = [
        "# normalised symmetric sum capacity versus alpha = m/n",
        "set xlabel 'alpha = m/n'",
        "set ylabel 'sum capacity / n'",
        "set key left top",
        "set datafile separator ','",
    ]
    plots = []
    for b in betas:
        label = "beta = inf (plotted as 10)" if b == BETA_INF_PROXY else f"beta = {fmt(b)}"
        plots.append(f"'{csv_path}' every ::1 using 1:($2=={fmt(b)} ? $3 : 1/0) "
                     f"with lines title '{label}'")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def cmd_ldic_sumrate_sweep(args) -> int:
    alphas = _axis(args.alpha_start, args.alpha_stop, args.alpha_step)
    betas = []
    for tok in args.beta.split(","):
        tok = tok.strip().lower()
        if tok in ("inf", "infinity", "∞"):
            betas.append(BETA_INF_PROXY)
        else:
            b = _parse_rational(tok)
            if b < 0:
                raise UsageError("beta must be nonnegative")
            betas.append(b)
    rows = []
    for b in betas:
        for a in alphas:
            rows.append((a, b, symmetric_sumrate_branches(a, Fraction(b))[0]))
    _write_csv(args.output, ["alpha", "beta", "normalized_sumrate"], rows)
    if args.plot:
        if args.output in (None, "-"):
            raise UsageError("--plot needs --output so the script can read the CSV")
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(_sumrate_plot_script(args.output, betas))
    return EXIT_OK


def cmd_ldic_simulate(args) -> int:
    if args.motivating:
        g = MOTIVATING_PARAMS
        variant = "motivating"
    else:
        if args.n is None or args.m is None:
            raise UsageError("give --n and --m, or --motivating")
        g = LdicParams.symmetric(args.n, args.m, _parse_rational(str(args.cfb)))
        variant = "symmetric"
    try:
        scheme = build_scheme(g, variant)
    except UnsupportedRegimeError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if args.blocks < 3:
        raise UsageError("--blocks must be at least 3")
    try:
        res = simulate(g, scheme, args.blocks, args.seed,
                       zero_messages=args.zero_messages, trace=args.trace)
    except DecodingAmbiguityError as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return EXIT_CLAIM
    r1, r2 = res.achieved
    if args.trace:
        print(trace_to_text(res.trace))
    print(f"({float(r1):.3f}, {float(r2):.3f}) {'OK' if res.decode_ok else 'FAIL'}")
    print(f"sum {res.achieved.r1 + res.achieved.r2} over {res.blocks} blocks")
    return EXIT_OK if res.decode_ok else EXIT_CLAIM


# ---------------------------------------------------------------------------
# gaussian


def cmd_gaussian_bounds(args) -> int:
    snr, inr = db_to_linear(args.snr_db), db_to_linear(args.inr_db)
    c1, c2 = args.cfb1, args.cfb2
    terms = symmetric_outer_terms(snr, inr, c1, c2)
    outer = min(terms)
    p = GaussianParams.symmetric(snr, inr, c1, c2)
    print(f"snr {fmt(snr)} inr {fmt(inr)} cfb ({fmt(c1)}, {fmt(c2)})")
    for name, t in zip(("cutset+feedback", "genie", "interference+feedback"), terms):
        print(f"  {name}: {fmt(t)}")
    print(f"symmetric outer bound: {fmt(outer)}")
    print(f"rho-grid outer bound ({args.rho_steps} steps): "
          f"{fmt(sumrate_outer(p, args.rho_steps, refine=args.refine))}")
    per = achievable_by_regime(snr, inr, c1 + c2, args.optimize, args.grid_steps) if snr > 0 else {}
    for case, v in per.items():
        print(f"  regime {case}: achievable {fmt(v)}")
    if per:
        best = max(per.values())
        print(f"achievable: {fmt(best)}")
        print(f"gap: {fmt(outer - best)}")
    return EXIT_OK


def _gap_row(task):
    snr_db, inr_db, c1, c2, optimize, steps = task
    snr, inr = db_to_linear(snr_db), db_to_linear(inr_db)
    outer = symmetric_sumrate_outer(snr, inr, c1, c2)
    per = achievable_by_regime(snr, inr, c1 + c2, optimize, steps)
    ach = max(per.values())
    regime = "|".join(str(c) for c in applicable_regimes(snr, inr))
    return (inr_db, outer, ach, outer - ach, regime)


def _gap_plot_script(csv_path, snr_db):
    return "\n".join([
        f"# gap to the outer bound at SNR = {fmt(snr_db)} dB",
        "set xlabel 'INR (dB)'",
        "set ylabel 'gap (bits/s/Hz)'",
        "set datafile separator ','",
        f"plot '{csv_path}' every ::1 using 1:4 with lines title 'SNR = {fmt(snr_db)} dB'",
    ]) + "\n"


def cmd_gaussian_gap_sweep(args) -> int:
    if args.snr_db is None:
        raise UsageError("--snr-db is required")
    if args.cfb1 < 0 or args.cfb2 < 0:
        raise UsageError("feedback rates must be nonnegative")
    inrs = _axis(args.inr_start, args.inr_stop, args.inr_step)
    tasks = [(float(args.snr_db), float(i), args.cfb1, args.cfb2, args.optimize,
              args.grid_steps) for i in inrs]
    rows = _ordered_map(_gap_row, tasks, min_parallel=8 if args.optimize else 64)
    _write_csv(args.output, ["inr_db", "outer", "achievable", "gap", "regime"], rows)
    if args.plot:
        if args.output in (None, "-"):
            raise UsageError("--plot needs --output so the script can read the CSV")
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(_gap_plot_script(args.output, args.snr_db))
    gaps = [r[3] for r in rows]
    worst = max(range(len(rows)), key=gaps.__getitem__)
    print(f"max gap {fmt(gaps[worst])} at INR {fmt(rows[worst][0])} dB "
          f"(min gap {fmt(min(gaps))})", file=sys.stderr)
    if min(gaps) < -1e-9:
        print("FAIL: negative gap", file=sys.stderr)
        return EXIT_CLAIM
    if args.max_gap is not None and gaps[worst] > args.max_gap:
        print(f"FAIL: gap exceeds {fmt(args.max_gap)}", file=sys.stderr)
        return EXIT_CLAIM
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ic-feedback", description=__doc__.split("\n")[0])
    parser.add_argument("--config", help="JSON file whose keys mirror the flags")
    models = parser.add_subparsers(dest="model", required=True)

    ldic = models.add_parser("ldic", help="linear deterministic model")
    lsub = ldic.add_subparsers(dest="command", required=True)

    p = lsub.add_parser("region", help="capacity region for given gains")
    for name in ("n11", "n22", "n12", "n21"):
        p.add_argument(f"--{name}", type=int, default=0)
    p.add_argument("--cfb1", default="0")
    p.add_argument("--cfb2", default="0")
    p.add_argument("--check-appendix-b", action="store_true",
                   help="also compare against the layered achievable region")
    p.add_argument("--grid", help="CSV of n11,n22,n12,n21,cfb1,cfb2 rows to check")
    p.set_defaults(func=cmd_ldic_region)

    p = lsub.add_parser("sumrate-sweep", help="normalised symmetric sum capacity")
    p.add_argument("--alpha-start", default="0")
    p.add_argument("--alpha-stop", default="4")
    p.add_argument("--alpha-step", default="0.01")
    p.add_argument("--beta", default="0,0.125,inf", help="comma-separated; inf allowed")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--plot", help="write a gnuplot script here")
    p.set_defaults(func=cmd_ldic_sumrate_sweep)

    p = lsub.add_parser("simulate", help="bit-level block-Markov simulation")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--cfb", default="0")
    p.add_argument("--motivating", action="store_true",
                   help="the (4,4,2,2,1,1) schedule with rates (4, 1)")
    p.add_argument("--blocks", "-B", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--zero-messages", action="store_true")
    p.set_defaults(func=cmd_ldic_simulate)

    gauss = models.add_parser("gaussian", help="symmetric Gaussian channel")
    gsub = gauss.add_subparsers(dest="command", required=True)

    p = gsub.add_parser("bounds", help="outer bounds and achievable rate at one point")
    p.add_argument("--snr-db", type=float, required=True)
    p.add_argument("--inr-db", type=float, required=True)
    p.add_argument("--cfb1", type=float, default=0.0)
    p.add_argument("--cfb2", type=float, default=0.0)
    p.add_argument("--rho-steps", type=int, default=201)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--optimize", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--grid-steps", type=int, default=32)
    p.set_defaults(func=cmd_gaussian_bounds)

    p = gsub.add_parser("gap-sweep", help="gap versus INR at fixed SNR")
    p.add_argument("--snr-db", type=float)
    p.add_argument("--inr-start", default="-10")
    p.add_argument("--inr-stop", default="160")
    p.add_argument("--inr-step", default="2")
    p.add_argument("--cfb1", type=float, default=10.0)
    p.add_argument("--cfb2", type=float, default=0.0)
    p.add_argument("--optimize", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--grid-steps", type=int, default=32)
    p.add_argument("--max-gap", type=float, help="exit 1 if any gap exceeds this")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--plot", help="write a gnuplot script here")
    p.set_defaults(func=cmd_gaussian_gap_sweep)
    return parser


def _subparser(parser, path):
    for name in path:
        sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        parser = sub.choices[name]
    return parser


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        leaf = _subparser(parser, (args.model, args.command))
        known = {a.dest for a in leaf._actions}
        defaults = {}
        for key, val in cfg.items():
            dest = key.lstrip("-").replace("-", "_")
            if dest not in known:
                raise UsageError(f"unknown config key {key!r}")
            defaults[dest] = val
        leaf.set_defaults(**defaults)
        # second pass so explicit flags win over file values
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    try:
        args = _parse(argv)
    except SystemExit as exc:      # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, InvalidGainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
