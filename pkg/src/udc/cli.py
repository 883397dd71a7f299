"""Command line front end.

Verbs: series, radius, cover, nevan, sl2, holonomy.  Output is JSON by
default (CSV for the tabular reports); precision defaults to 256 bits or the
UDC_DEFAULT_BITS environment variable.  Exit codes: 0 success, 1 domain
error (structured object on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp


def _default_bits():
    try:
        return int(os.environ.get("UDC_DEFAULT_BITS", "256"))
    except ValueError:
        return 256


def _emit(args, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _write_text(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def _mpstr(x, digits=25):
    return mp.nstr(x, digits) if x is not None else None


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def cmd_series(args):
    from . import series as S
    from .series import denominator_profile

    order = args.order
    if args.what == "lambda":
        s = S.lambda_over_16(order)
    elif args.what == "revert":
        s = S.lambda_over_16_reverted(order)
    elif args.what == "h":
        s = S.h_series(order)
    elif args.what == "j3":
        s = S.j_cube_root(order)
    elif args.what == "elliptic-e":
        s = S.elliptic_e_series(order)
    elif args.what == "catalan":
        s = S.catalan_square_series(order)
    elif args.what == "eta":
        s = S.eta_expansion(Fraction(args.scale), order)
    elif args.what == "root":
        base = S.h_series(order) if args.of == "h" else S.lambda_over_16(order)
        s = base.nth_root(args.n)
    else:
        raise S.SeriesError("unknown series %r" % args.what)

    if args.format == "csv":
        lines = ["exponent,coefficient"]
        lines += ["%s,%s" % (e, c) for e, c in s.coefficients()]
        text = "\n".join(lines) + "\n"
        if args.out:
            _write_text(args.out, text)
        else:
            sys.stdout.write(text)
    else:
        payload = s.to_json_dict()
        if args.profile:
            prof = denominator_profile(s)
            payload["denominator_lcms"] = [str(l) for l in prof.lcms]
            if args.plot or args.out:
                from .plots import render_profile_figure
                target = (args.plot or
                          (os.path.splitext(args.out)[0] + ".png"))
                payload["figure"] = render_profile_figure(prof, target)
        _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# radius
# ---------------------------------------------------------------------------

def cmd_radius(args):
    from .hyper import (PrecisionCtx, gamma_n, gamma_n_asymptotic,
                        gamma_n_defect, log_gamma_n_series)

    ctx = PrecisionCtx(args.bits)
    with ctx.working():
        g = gamma_n(args.N, ctx)
        approx = gamma_n_asymptotic(args.N, ctx)
        defect = gamma_n_defect(args.N, ctx)
        logser, tail = log_gamma_n_series(args.N, 3, ctx)
        payload = {
            "N": args.N,
            "bits": args.bits,
            "gamma_N": _mpstr(g, args.bits // 3),
            "asymptotic_truncation": _mpstr(approx, args.bits // 3),
            "defect": _mpstr(defect),
            "defect_times_N6": _mpstr(defect * mp.mpf(args.N) ** 6),
            "log_series_error": _mpstr(abs(mp.log(g) - logser)),
            "log_series_tail_bound": _mpstr(tail),
        }
    _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# cover
# ---------------------------------------------------------------------------

def _parse_point(text):
    re_, _, im_ = text.partition(",")
    return mp.mpc(mp.mpf(re_), mp.mpf(im_ or "0"))


def cmd_cover(args):
    from .cover import f_n_eval, group_generators, sup_scan
    from .hyper import PrecisionCtx

    ctx = PrecisionCtx(args.bits)
    with ctx.working():
        if args.action == "eval":
            x = _parse_point(args.x)
            rep = f_n_eval(args.N, x, ctx)
            payload = {
                "N": args.N,
                "x": [_mpstr(mp.re(x)), _mpstr(mp.im(x))],
                "value": [_mpstr(mp.re(rep.value)), _mpstr(mp.im(rep.value))],
                "word": ["%s^%s" % t for t in rep.word],
                "residual": _mpstr(rep.residual),
            }
        elif args.action == "scan":
            v = sup_scan(args.N, mp.mpf(args.r), args.samples, ctx)
            payload = {
                "N": args.N,
                "r": args.r,
                "samples": args.samples,
                "sup_log_abs": _mpstr(v),
                "normalized": _mpstr(v * (1 - mp.mpf(args.r)) / args.N),
            }
        else:
            gens = group_generators(args.N, ctx)
            payload = {
                "N": args.N,
                "translation_length": _mpstr(gens.translation_length),
                "translation": [[_mpstr(gens.translation.a), _mpstr(gens.translation.b)],
                                [_mpstr(gens.translation.c), _mpstr(gens.translation.d)]],
                "rotation": [[_mpstr(gens.rotation.a), _mpstr(gens.rotation.b)],
                             [_mpstr(gens.rotation.c), _mpstr(gens.rotation.d)]],
            }
    _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# nevan
# ---------------------------------------------------------------------------

def cmd_nevan(args):
    from .hyper import PrecisionCtx
    from .nevan import discrepancy_suite, growth_table, growth_table_csv

    ctx = PrecisionCtx(args.bits)
    if args.action == "growth":
        ns = range(args.n_min, args.n_max + 1)
        rs = [mp.mpf(r) for r in args.r.split(",")]
        rows = growth_table(ns, rs, ctx, nodes=args.nodes, jobs=args.jobs)
        text = growth_table_csv(rows)
        if args.csv:
            _write_text(args.csv, text)
            if not args.no_plot:
                from .plots import render_growth_figure
                render_growth_figure(rows, os.path.splitext(args.csv)[0] + ".png")
        else:
            sys.stdout.write(text)
        return 0
    if args.action == "discrepancy":
        import random
        rng = random.Random(args.seed)
        if args.points == "regular":
            pts = [mp.exp(2j * mp.pi * mp.mpf(k) / args.d) for k in range(args.d)]
        else:
            pts = [mp.exp(2j * mp.pi * rng.random()) for _ in range(args.d)]
        out = discrepancy_suite(pts)
        _emit(args, {k: (str(v) if v == float("-inf") else v)
                     for k, v in out.items()})
        return 0
    raise ValueError("unknown nevan action")


# ---------------------------------------------------------------------------
# sl2
# ---------------------------------------------------------------------------

def _build_group(kind, N):
    from . import sl2
    if kind == "gamma":
        return sl2.principal_congruence(N)
    if kind == "gamma0":
        return sl2.gamma0(N)
    if kind == "gamma-upper0":
        return sl2.gamma_upper0(N)
    if kind == "full":
        return sl2.full_group()
    raise ValueError("unknown group kind %r" % kind)


def cmd_sl2(args):
    from . import sl2

    if args.action == "index":
        rep = sl2.index_gamma2_gammaN(args.N)
        payload = {
            "N": args.N,
            "index_gamma2_gammaN": rep.index,
            "curve_degree": str(rep.half_index),
            "lower_bound_rational": str(rep.bound_rational),
            "lower_bound": rep.bound_float,
        }
        _emit(args, payload)
        return 0
    G = _build_group(args.group, args.N)
    if args.action == "conj":
        G = sl2.conj_A_intersect(G, args.p)
    payload = sl2.subgroup_json(G)
    payload["group"] = args.group
    payload["N"] = args.N
    if args.action == "level":
        payload = {"group": args.group, "N": args.N, "level": payload["level"]}
    _emit(args, payload)
    return 0


# ---------------------------------------------------------------------------
# holonomy
# ---------------------------------------------------------------------------

def cmd_holonomy(args):
    from .hyper import PrecisionCtx
    from .holo import (SiegelInstance, dimension_bound_rhs, gap_report,
                       gap_report_csv, siegel_construct)

    ctx = PrecisionCtx(args.bits)
    if args.action == "bound":
        slack = mp.mpf(args.slack) if args.slack else None
        rep = dimension_bound_rhs(args.N, slack, ctx, nodes=args.nodes)
        _emit(args, {
            "N": rep.N,
            "slack": _mpstr(rep.slack),
            "r": _mpstr(rep.r),
            "log_phi_prime": _mpstr(rep.log_phi_prime),
            "m_value": _mpstr(rep.m_value),
            "rhs": _mpstr(rep.rhs),
            "lower": _mpstr(rep.lower),
            "est_err": _mpstr(rep.est_err),
        })
        return 0
    if args.action == "gap":
        ns = [int(n) for n in args.N_list.split(",")]
        slack = mp.mpf(args.slack) if args.slack else None
        rows = gap_report(ns, ctx, slack, nodes=args.nodes)
        text = gap_report_csv(rows)
        if args.csv:
            _write_text(args.csv, text)
            if not args.no_plot:
                from .plots import render_gap_figure
                render_gap_figure(rows, os.path.splitext(args.csv)[0] + ".png")
        else:
            sys.stdout.write(text)
        return 0
    if args.action == "siegel":
        from .series import binomial_power_series
        fs = [binomial_power_series(Fraction(i, 8), -16,
                                    args.alpha + 40)
              for i in range(1, args.m + 1)]
        inst = SiegelInstance(fs, args.d, args.alpha)
        res = siegel_construct(inst)
        _emit(args, {
            "m": args.m, "d": args.d, "alpha": args.alpha, "D": inst.D,
            "order_of_vanishing": res.ord0,
            "lowest_coefficient": str(res.lowest_coefficient),
            "max_abs_coefficient": res.max_abs_coefficient,
            "nonzero_terms": len(res.coefficients),
        })
        return 0
    raise ValueError("unknown holonomy action")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="udc", description=__doc__)
    p.add_argument("--bits", type=int, default=_default_bits(),
                   help="working precision in bits (default 256 or "
                        "UDC_DEFAULT_BITS)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for grid scans")
    sub = p.add_subparsers(dest="verb", required=True)

    ps = sub.add_parser("series", help="exact q-expansions")
    ps.add_argument("what", choices=["lambda", "revert", "h", "j3",
                                     "elliptic-e", "catalan", "eta", "root"])
    ps.add_argument("--order", type=int, default=50)
    ps.add_argument("--n", type=int, default=2, help="root index for 'root'")
    ps.add_argument("--of", choices=["lambda", "h"], default="lambda")
    ps.add_argument("--scale", default="1", help="eta argument scale")
    ps.add_argument("--format", choices=["json", "csv"], default="json")
    ps.add_argument("--out")
    ps.add_argument("--profile", action="store_true",
                    help="include denominator profile")
    ps.add_argument("--plot", help="write denominator profile figure here")
    ps.set_defaults(func=cmd_series)

    pr = sub.add_parser("radius", help="conformal radius and asymptotics")
    pr.add_argument("--N", type=int, required=True)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_radius)

    pc = sub.add_parser("cover", help="covering map evaluation")
    pc.add_argument("action", choices=["eval", "scan", "generators"])
    pc.add_argument("--N", type=int, required=True)
    pc.add_argument("--x", help="point re,im for eval")
    pc.add_argument("--r", help="radius for scan")
    pc.add_argument("--samples", type=int, default=64)
    pc.add_argument("--out")
    pc.set_defaults(func=cmd_cover)

    pn = sub.add_parser("nevan", help="growth tables and discrepancy")
    pn.add_argument("action", choices=["growth", "discrepancy"])
    pn.add_argument("--n-min", type=int, default=2)
    pn.add_argument("--n-max", type=int, default=8)
    pn.add_argument("--r", default="0.9", help="comma separated radii")
    pn.add_argument("--nodes", type=int, default=1024)
    pn.add_argument("--csv", help="write the table here (figure alongside)")
    pn.add_argument("--no-plot", action="store_true")
    pn.add_argument("--points", choices=["regular", "random"], default="random")
    pn.add_argument("--d", type=int, default=64)
    pn.add_argument("--seed", type=int, default=0)
    pn.add_argument("--out")
    pn.set_defaults(func=cmd_nevan)

    pg = sub.add_parser("sl2", help="subgroup arithmetic")
    pg.add_argument("action", choices=["level", "cusps", "index", "conj"])
    pg.add_argument("--group", choices=["gamma", "gamma0", "gamma-upper0",
                                        "full"], default="gamma")
    pg.add_argument("--N", type=int, required=True)
    pg.add_argument("--p", type=int, default=3)
    pg.add_argument("--out")
    pg.set_defaults(func=cmd_sl2)

    ph = sub.add_parser("holonomy", help="dimension bound pipeline")
    ph.add_argument("action", choices=["bound", "gap", "siegel"])
    ph.add_argument("--N", type=int, default=2)
    ph.add_argument("--N-list", default="2,4,8,16")
    ph.add_argument("--slack", help="defaults to zeta(3)/4")
    ph.add_argument("--nodes", type=int, default=1024)
    ph.add_argument("--alpha", type=int, default=10)
    ph.add_argument("--m", type=int, default=2)
    ph.add_argument("--d", type=int, default=1)
    ph.add_argument("--csv")
    ph.add_argument("--no-plot", action="store_true")
    ph.add_argument("--out")
    ph.set_defaults(func=cmd_holonomy)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    from .hyper import DomainError, PrecisionError
    from .nevan import QuadratureError
    from .series import SeriesError
    from .sl2 import SL2Error
    try:
        return args.func(args)
    except (DomainError, PrecisionError, QuadratureError, SeriesError,
            SL2Error, ValueError) as exc:
        sys.stderr.write(json.dumps({
            "error": type(exc).__name__,
            "message": str(exc),
        }) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
