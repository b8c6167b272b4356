"""Command-line front end.

Exit codes: 0 success / all checks pass, 1 check failure, 2 usage or
input validation error."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import io as kio
from .config import RunConfig, load_config
from .km_polys import km_poly, u_decompose
from .lattice import discriminant_group, split_data
from .theta import (ThetaRequest, siegel_theta, ambient_km_poly,
                    radius_for_tail)
from .weil import weil_generators, GeneratorWord
from .lift import (LiftRequest, fourier_coefficient, strip_integral_check,
                   gauge_frame, GaugeTables, eliminate_coefficients,
                   UNRESOLVED)
from .verify import run_suite, SUITES


class UsageError(Exception):
    pass


def _parse_count(s: str) -> tuple:
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError as e:
        raise UsageError(f"bad count vector {s!r}") from e


def _parse_lam(s: str) -> tuple:
    try:
        return tuple(Fraction(x) for x in s.split(","))
    except ValueError as e:
        raise UsageError(f"bad lattice vector {s!r}") from e


def _emit(obj, as_json: bool):
    if as_json:
        sys.stdout.write(kio.dump_json(obj))
    else:
        for k, v in sorted(obj.items()) if isinstance(obj, dict) else \
                enumerate(obj):
            print(f"{k}: {v}")


# --- subcommands ------------------------------------------------------

def cmd_lattice(args) -> int:
    L, u, up = kio.load_lattice(args.file)
    disc = discriminant_group(L)
    info = {"rank": L.rank, "signature": list(L.signature),
            "discriminant_order": disc.order,
            "elementary_divisors": list(disc.elementary_divisors)}
    if u is not None:
        info["u"] = [kio.rat_str(x) for x in u]
    if up is not None:
        info["u_prime"] = [kio.rat_str(x) for x in up]
    _emit(info, args.json)
    return 0


def cmd_weil(args) -> int:
    L, _, _ = kio.load_lattice(args.lattice)
    rep = weil_generators(L)
    word = GeneratorWord.parse(args.word)
    M = rep.matrix(word)
    out = {"word": args.word, "dim": rep.dim,
           "matrix": [[kio.cx_pair(M[i, j]) for j in range(rep.dim)]
                      for i in range(rep.dim)]}
    sys.stdout.write(kio.dump_json(out))
    return 0


def cmd_poly(args) -> int:
    count = _parse_count(args.count)
    p = km_poly(count, args.mode)
    print(str(p))
    return 0


def cmd_theta(args) -> int:
    L, u, up = kio.load_lattice(args.lattice)
    tau = kio.parse_tau(args.tau)
    if tau.imag <= 0:
        raise UsageError("tau must lie in the upper half plane")
    count = _parse_count(args.poly_count)
    poly = ambient_km_poly(L, count, "P")
    if args.radius is not None and args.radius <= 0:
        raise UsageError("radius must be positive")
    R = args.radius or radius_for_tail(L, tau.imag, 1e-10, sum(count))
    frame_g = None
    B = None
    if args.frame is not None:
        if u is None or up is None:
            raise UsageError("frame evaluation needs u/u_prime in the "
                             "lattice file")
        sd = split_data(L, u, up)
        frame = kio.load_frame(sd, args.frame)
        frame_g, B = frame.g, frame.B
    tv = siegel_theta(ThetaRequest(L, tau, poly, R, frame=frame_g), B=B)
    out = {"tau": kio.cx_pair(tau), "radius": R,
           "tail_bound": tv.tail_bound,
           "components": {",".join(map(str, k)): kio.cx_pair(v)
                          for k, v in tv.components.items()}}
    _emit(out, args.json)
    return 0


def _lift_request(args):
    sd = kio.split_data_from_file(args.lattice)
    f = kio.load_cusp_form(args.cusp_form)
    frame = kio.load_frame(sd, args.frame)
    alpha = _parse_count(args.alpha)
    return LiftRequest(f, alpha, frame, ell=args.ell)


def cmd_lift_fourier(args) -> int:
    req = _lift_request(args)
    res = fourier_coefficient(req, _parse_lam(args.lam), args.method)
    out = {"lam": [kio.rat_str(x) for x in res.lam],
           "value": kio.cx_pair(res.value),
           "term": kio.cx_pair(res.term),
           "negative_norm": res.negative_norm,
           "method": res.y_integral_method,
           "pieces": {f"t={t},h={h}": kio.cx_pair(v)
                      for (t, h), v in sorted(res.pieces.items())}}
    sys.stdout.write(kio.dump_json(out))
    return 0


def cmd_lift_verify_strip(args) -> int:
    req = _lift_request(args)
    series, quad, resid = strip_integral_check(req, _parse_lam(args.lam),
                                               args.method)
    out = {"series": kio.cx_pair(series), "quadrature": kio.cx_pair(quad),
           "residuals": {"strip": resid}, "tolerance": args.tol,
           "pass": resid <= args.tol}
    sys.stdout.write(kio.dump_json(out))
    return 0 if resid <= args.tol else 1


def cmd_lift_eliminate(args) -> int:
    with open(args.tables, encoding="utf-8") as fh:
        d = json.load(fh)
    L, u, up = kio.lattice_from_dict(d["lattice"])
    cutoff = kio.parse_rat(d["norm_cutoff"])
    frames = {}
    sd = None
    entries = {}
    lams = []
    for row in d["entries"]:
        a1 = int(row["alpha1"])
        lam = tuple(kio.parse_rat(x) for x in row["lam"])
        if a1 not in frames:
            sd_i, fr = gauge_frame(L, a1)
            frames[a1] = fr
            sd = sd or sd_i
        if lam not in lams:
            lams.append(lam)
        entries[(a1, lam)] = kio.parse_cx(row["value"])
    tables = GaugeTables(sd, frames, entries, cutoff, lams)
    rec = eliminate_coefficients(tables)
    out = {"coefficients": [
        {"coset": list(k), "n": kio.rat_str(n),
         "c": (None if c is UNRESOLVED else kio.cx_pair(c)),
         "resolved": c is not UNRESOLVED}
        for (k, n), c in sorted(rec.items())]}
    sys.stdout.write(kio.dump_json(out))
    return 0


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    if args.corpus:
        import os
        cfg.corpus = [os.path.join(args.corpus, f)
                      for f in sorted(os.listdir(args.corpus))
                      if f.endswith(".json")]
    only = set(args.only.split(",")) if args.only else None
    if only is not None:
        known = {n for n, _ in SUITES}
        bad = only - known
        if bad:
            raise UsageError(f"unknown suites {sorted(bad)}; "
                             f"choose from {sorted(known)}")
    records, ok = run_suite(cfg, only)
    fmt = "csv" if args.csv else cfg.fmt
    text = kio.write_report(records, args.output or cfg.output, fmt)
    sys.stdout.write(text)
    return 0 if ok else 1


# --- parser -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kmtheta",
        description="theta functions on lattice Grassmannians and "
                    "certification of their lift identities")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("lattice", help="lattice inspection")
    ps = p.add_subparsers(dest="sub", required=True)
    pi = ps.add_parser("info")
    pi.add_argument("file")
    pi.add_argument("--json", action="store_true")
    pi.set_defaults(fn=cmd_lattice)

    p = sub.add_parser("weil", help="representation matrix of an S/T word")
    p.add_argument("--lattice", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(fn=cmd_weil)

    p = sub.add_parser("poly", help="print a weight polynomial")
    p.add_argument("--count", required=True)
    p.add_argument("--mode", choices=("P", "Q"), default="P")
    p.set_defaults(fn=cmd_poly)

    p = sub.add_parser("theta", help="evaluate a theta function")
    p.add_argument("--lattice", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--poly-count", required=True)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--frame", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_theta)

    p = sub.add_parser("lift", help="Fourier expansion of the lift")
    ls = p.add_subparsers(dest="sub", required=True)

    def lift_common(q):
        q.add_argument("--lattice", required=True)
        q.add_argument("--cusp-form", required=True)
        q.add_argument("--alpha", required=True)
        q.add_argument("--frame", default=None)
        q.add_argument("--lam", "--lambda", dest="lam", required=True)
        q.add_argument("--method", choices=("bessel", "quadrature"),
                       default="bessel")
        q.add_argument("--ell", type=int, default=0)

    q = ls.add_parser("fourier")
    lift_common(q)
    q.set_defaults(fn=cmd_lift_fourier)

    q = ls.add_parser("verify-strip")
    lift_common(q)
    q.add_argument("--tol", type=float, default=1e-6)
    q.set_defaults(fn=cmd_lift_verify_strip)

    q = ls.add_parser("eliminate")
    q.add_argument("--tables", required=True)
    q.set_defaults(fn=cmd_lift_eliminate)

    p = sub.add_parser("verify", help="run the certification suite")
    p.add_argument("--corpus", default=None)
    p.add_argument("--config", default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--only", default=None,
                   help="comma-separated suite names")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (FileNotFoundError, json.JSONDecodeError, KeyError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
