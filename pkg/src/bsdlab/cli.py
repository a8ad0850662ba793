"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data/contract error; every failure
prints a one-line diagnostic on stderr.  Numeric CSV fields carry 17
significant digits so a parse/serialize round trip is byte-identical; JSON
floats use the shortest representation that round-trips.
"""

import argparse
import json
import sys

from . import __version__, bsdprod, catalog, montecarlo, satotate
from . import analytic as analytic_mod
from .curves import CurveQ, cm_detect, derive_invariants, trace_scan
from .errors import BsdlabError, UsageError
from .primes import sieve_primes


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract here wants 1.
    def error(self, message):
        raise UsageError(message)


def _resolve_curve(text: str) -> CurveQ:
    if "," in text:
        parts = text.split(",")
        if len(parts) != 5:
            raise UsageError(f"--curve wants 5 comma-separated integers, got {text!r}")
        try:
            coeffs = [int(t) for t in parts]
        except ValueError:
            raise UsageError(f"--curve wants integers, got {text!r}") from None
        return derive_invariants(*coeffs)
    return catalog.curve_for(text)


def _parse_checkpoints(text, x_max: int):
    if text is None or text == "pow2":
        return bsdprod.default_checkpoints(x_max)
    if text == "halfdec":
        return list(montecarlo.default_checkpoints(x_max))
    try:
        cps = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"--checkpoints wants 'pow2', 'halfdec' or integers, got {text!r}") from None
    return cps


def _open_out(path):
    if path == "-" or path is None:
        return sys.stdout, False
    return open(path, "w"), True


def _write_text(path, text: str):
    fh, close = _open_out(path)
    try:
        fh.write(text)
    finally:
        if close:
            fh.close()


def _print_json(obj):
    print(json.dumps(obj, indent=2))


def _records_csv(records) -> str:
    lines = ["p,ap,np,theta,reduction,supersingular"]
    for r in records:
        if r.good:
            lines.append(
                f"{r.p},{r.a_p},{r.n_p},{r.theta_p:.17g},{r.reduction.value},{r.supersingular}"
            )
        else:
            lines.append(f"{r.p},,,,{r.reduction.value},")
    return "\n".join(lines) + "\n"


def cmd_ap(args):
    curve = _resolve_curve(args.curve)
    table = sieve_primes(args.xmax)
    records = trace_scan(curve, args.xmax, table, cache_dir=args.cache)
    _write_text(args.out, _records_csv(records))


def cmd_pprod(args):
    curve = _resolve_curve(args.curve)
    table = sieve_primes(args.xmax)
    cps = _parse_checkpoints(args.checkpoints, args.xmax)
    records = trace_scan(curve, args.xmax, table, cache_dir=args.cache)
    series = bsdprod.accumulate_logP(records, cps, label=curve.name)
    _write_text(args.out, bsdprod.series_to_csv(series))


def cmd_rankfit(args):
    if args.input == "-":
        text = sys.stdin.read()
    else:
        with open(args.input) as fh:
            text = fh.read()
    series = bsdprod.series_from_csv(text)
    fit = bsdprod.rank_fit(series, x_min=args.xmin)
    obj = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual_rms": fit.residual_rms,
        "window": [fit.window[0], fit.window[1]],
    }
    if args.json:
        _print_json(obj)
    else:
        for k, v in obj.items():
            print(f"{k}: {v}")


def cmd_theta(args):
    curve = _resolve_curve(args.curve)
    table = sieve_primes(args.xmax)
    records = trace_scan(curve, args.xmax, table, cache_dir=args.cache)
    cm = cm_detect(curve)
    report = satotate.theta_distribution_report(records, cm.is_cm, bins=args.bins)
    if args.out:
        _write_text(args.out, report.histogram.to_csv())
    obj = {
        "curve": curve.name,
        "cm": report.cm,
        "n_good": report.n_good,
        "supersingular_density": report.supersingular_density,
        "reports": [r.to_json_obj() for r in report.reports],
    }
    if args.json:
        _print_json(obj)
    else:
        for r in report.reports:
            print(f"KS vs {r.reference}: {r.statistic:.6f} (n={r.n})")
        if report.supersingular_density is not None:
            print(f"supersingular density: {report.supersingular_density:.6f}")


def cmd_mc(args):
    try:
        orders = tuple(int(t) for t in args.moments.split(","))
    except ValueError:
        raise UsageError(f"--moments wants integers, got {args.moments!r}") from None
    cps = tuple(_parse_checkpoints(args.checkpoints or "halfdec", args.xmax))
    config = montecarlo.MCConfig(
        x_max=args.xmax,
        replicas=args.replicas,
        mode=args.mode,
        seed=args.seed,
        moment_orders=orders,
        checkpoints=cps,
    )
    table = sieve_primes(args.xmax)
    result = montecarlo.simulate_logP(config, table)
    if args.json:
        _print_json(result.to_json_obj())
    else:
        for row in result.to_json_obj()["moments"]:
            print(f"n={row['n']} x={row['x']}: {row['estimate']:.6f} +- {row['se']:.6f}")


def cmd_birch(args):
    result = satotate.birch_ensemble(args.p, bins=args.bins)
    if args.out:
        _write_text(args.out, result.histogram.to_csv())
    obj = {
        "p": result.p,
        "ensemble_size": result.ensemble_size,
        "singular_count": result.singular_count,
        "ks": result.ks.to_json_obj(),
    }
    if args.json:
        _print_json(obj)
    else:
        print(
            f"p={result.p}: {result.ensemble_size} equations, "
            f"KS vs {result.ks.reference} = {result.ks.statistic:.6f}"
        )


def cmd_analytic(args):
    checks = (
        analytic_mod.check_st_integrals()
        + analytic_mod.moment_identity_checks(20)
        + analytic_mod.xi_moment_checks()
    )
    rows = [c.to_json_obj() for c in checks]
    if args.json:
        _print_json(rows)
    else:
        for c in checks:
            print(f"{c.name}: {c.computed:.12g} (expected {c.expected:.12g})")


def cmd_compare(args):
    labels = [t for t in args.curves.split(",") if t]
    if not labels:
        raise UsageError("--curves wants a comma-separated list of labels")
    table = sieve_primes(args.xmax)
    series = []
    for label in labels:
        curve = catalog.curve_for(label)
        records = trace_scan(curve, args.xmax, table, cache_dir=args.cache)
        series.append(bsdprod.accumulate_logP(records, [args.xmax], label=curve.name))
    rows = bsdprod.compare_curves(series, args.xmax)
    obj = {"x": args.xmax, "order": rows}
    if args.json:
        _print_json(obj)
    else:
        for r in rows:
            rank = "?" if r["known_rank"] is None else r["known_rank"]
            tie = " (tied)" if r["tied"] else ""
            print(f"{r['label']}: logP = {r['logP']:.6f}, rank {rank}{tie}")


def cmd_catalog(args):
    rows = []
    for label in catalog.labels():
        e = catalog.lookup(label)
        rows.append(
            {
                "label": e.label,
                "coefficients": list(e.coefficients),
                "known_rank": e.known_rank,
                "is_cm": e.cm.is_cm,
                "cm_discriminant": e.cm.cm_discriminant,
            }
        )
    if args.json:
        _print_json(rows)
    else:
        for r in rows:
            print(f"{r['label']}: {r['coefficients']} rank {r['known_rank']}")


def _svg_plot(series: bsdprod.PartialProductSeries, overlays) -> str:
    w, h = 640, 420
    ml, mr, mt, mb = 60, 20, 20, 45
    ts = [llx for _, _, llx in series.checkpoints]
    ys = [lp for _, lp, _ in series.checkpoints]
    for slope in overlays:
        ys.append(ys[0] + slope * (ts[-1] - ts[0]))
    t0, t1 = min(ts), max(ts)
    y0, y1 = min(ys), max(ys)
    t1 = t1 if t1 > t0 else t0 + 1.0
    y1 = y1 if y1 > y0 else y0 + 1.0

    def sx(t):
        return ml + (t - t0) / (t1 - t0) * (w - ml - mr)

    def sy(y):
        return h - mb - (y - y0) / (y1 - y0) * (h - mt - mb)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{ml}" y1="{h - mb}" x2="{w - mr}" y2="{h - mb}" stroke="black"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{h - mb}" stroke="black"/>',
        f'<text x="{(ml + w - mr) / 2:.1f}" y="{h - 10}" text-anchor="middle" '
        f'font-size="13">log log x</text>',
        f'<text x="15" y="{(mt + h - mb) / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 15 {(mt + h - mb) / 2:.1f})">log P</text>',
        f'<text x="{ml}" y="{h - mb + 16}" font-size="11" text-anchor="middle">{t0:.3g}</text>',
        f'<text x="{w - mr}" y="{h - mb + 16}" font-size="11" text-anchor="middle">{t1:.3g}</text>',
        f'<text x="{ml - 6}" y="{sy(y0):.1f}" font-size="11" text-anchor="end">{y0:.3g}</text>',
        f'<text x="{ml - 6}" y="{sy(y1):.1f}" font-size="11" text-anchor="end">{y1:.3g}</text>',
    ]
    for slope in overlays:
        # reference line through the first data point with the given slope
        yb = series.checkpoints[0][1] + slope * (t1 - t0)
        parts.append(
            f'<line x1="{sx(t0):.2f}" y1="{sy(series.checkpoints[0][1]):.2f}" '
            f'x2="{sx(t1):.2f}" y2="{sy(yb):.2f}" stroke="#888" '
            f'stroke-dasharray="6 4"/>'
        )
        parts.append(
            f'<text x="{sx(t1) - 4:.1f}" y="{sy(yb) - 5:.1f}" font-size="11" '
            f'text-anchor="end" fill="#666">slope {slope:g}</text>'
        )
    pts = " ".join(f"{sx(t):.2f},{sy(y):.2f}" for t, y in zip(ts, [lp for _, lp, _ in series.checkpoints]))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="#b33" stroke-width="1.8"/>')
    for t, y in zip(ts, [lp for _, lp, _ in series.checkpoints]):
        parts.append(f'<circle cx="{sx(t):.2f}" cy="{sy(y):.2f}" r="2.5" fill="#b33"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args):
    with open(args.input) as fh:
        series = bsdprod.series_from_csv(fh.read())
    overlays = []
    for ov in args.overlay or []:
        if not ov.startswith("slope:"):
            raise UsageError(f"--overlay wants slope:<r>, got {ov!r}")
        try:
            overlays.append(float(ov[6:]))
        except ValueError:
            raise UsageError(f"--overlay wants a numeric slope, got {ov!r}") from None
    if not series.checkpoints:
        raise UsageError("cannot plot an empty series")
    _write_text(args.out, _svg_plot(series, overlays))


def build_parser() -> _Parser:
    p = _Parser(prog="bsdlab", description="Elliptic-curve partial products and angle statistics")
    p.add_argument("--version", action="version", version=f"bsdlab {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    ap = sub.add_parser("ap", help="scan Frobenius traces to CSV")
    ap.add_argument("--curve", required=True, help="catalog label or a1,a2,a3,a4,a6")
    ap.add_argument("--xmax", type=int, required=True)
    ap.add_argument("--cache", metavar="DIR", default=None)
    ap.add_argument("--out", default="-", help="output path, - for stdout")
    ap.set_defaults(func=cmd_ap)

    pp = sub.add_parser("pprod", help="partial-product checkpoints to CSV")
    pp.add_argument("--curve", required=True)
    pp.add_argument("--xmax", type=int, required=True)
    pp.add_argument("--checkpoints", default="pow2", help="pow2, halfdec, or comma list")
    pp.add_argument("--cache", metavar="DIR", default=None)
    pp.add_argument("--out", default="-")
    pp.set_defaults(func=cmd_pprod)

    rf = sub.add_parser("rankfit", help="least-squares growth fit of a series")
    rf.add_argument("--input", required=True, help="pprod CSV path, - for stdin")
    rf.add_argument("--xmin", type=int, default=bsdprod.DEFAULT_X_MIN)
    rf.add_argument("--json", action="store_true")
    rf.set_defaults(func=cmd_rankfit)

    th = sub.add_parser("theta", help="angle histogram and KS report")
    th.add_argument("--curve", required=True)
    th.add_argument("--xmax", type=int, required=True)
    th.add_argument("--bins", type=int, default=satotate.DEFAULT_BINS)
    th.add_argument("--cache", metavar="DIR", default=None)
    th.add_argument("--out", default=None, help="histogram CSV path")
    th.add_argument("--json", action="store_true")
    th.set_defaults(func=cmd_theta)

    mc = sub.add_parser("mc", help="Monte Carlo replica ensemble")
    mc.add_argument("--xmax", type=int, required=True)
    mc.add_argument("--replicas", type=int, required=True)
    mc.add_argument("--mode", choices=[montecarlo.MODE_NONCM, montecarlo.MODE_CM],
                    default=montecarlo.MODE_NONCM)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--moments", default="1,2")
    mc.add_argument("--checkpoints", default=None)
    mc.add_argument("--json", action="store_true")
    mc.set_defaults(func=cmd_mc)

    bi = sub.add_parser("birch", help="fixed-p curve-ensemble angle statistics")
    bi.add_argument("--p", type=int, required=True)
    bi.add_argument("--bins", type=int, default=satotate.DEFAULT_BINS)
    bi.add_argument("--out", default=None, help="histogram CSV path")
    bi.add_argument("--json", action="store_true")
    bi.set_defaults(func=cmd_birch)

    an = sub.add_parser("analytic", help="exact/quadrature cross-checks")
    an.add_argument("--json", action="store_true")
    an.set_defaults(func=cmd_analytic)

    cp = sub.add_parser("compare", help="order curves by logP at a checkpoint")
    cp.add_argument("--curves", required=True, help="comma-separated catalog labels")
    cp.add_argument("--xmax", type=int, required=True)
    cp.add_argument("--cache", metavar="DIR", default=None)
    cp.add_argument("--json", action="store_true")
    cp.set_defaults(func=cmd_compare)

    pl = sub.add_parser("plot", help="SVG of logP against loglog x")
    pl.add_argument("--input", required=True, help="pprod CSV path")
    pl.add_argument("--out", required=True, help="SVG output path")
    pl.add_argument("--overlay", action="append", metavar="slope:R")
    pl.set_defaults(func=cmd_plot)

    ct = sub.add_parser("catalog", help="dump the built-in curve catalog")
    ct.add_argument("--json", action="store_true")
    ct.set_defaults(func=cmd_catalog)

    return p


def run_command(argv) -> int:
    """Parse and execute one CLI invocation; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.error("a subcommand is required")
        args.func(args)
    except UsageError as e:
        print(f"bsdlab: {e}", file=sys.stderr)
        return 1
    except BsdlabError as e:
        print(f"bsdlab: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # argparse --help / --version
        code = e.code if isinstance(e.code, int) else 0
        return code
    except BrokenPipeError:
        return 0
    return 0


def main(argv=None):
    sys.exit(run_command(argv if argv is not None else sys.argv[1:]))
