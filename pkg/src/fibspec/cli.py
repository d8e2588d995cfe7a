"""Command-line front end: scans and searches with CSV/JSON output.

Every subcommand writes exactly one output file whose header block
echoes all numeric parameters; identical configurations produce
byte-identical files.  Exit codes: 0 ok, 2 configuration error, 3
numerical failure.
"""

import argparse
import math
import sys

import numpy as np

from . import experiments, floquet, nlevp, prufer, tracemap
from .errors import (ConfigError, DegenerateEnergyError, FibspecError,
                     IntegrationFailureError, StepCountTooSmallError)
from .io_utils import write_table
from .kernels import BACKEND
from .potentials import assemble, parse_piece
from .words import approximant_word, rotation_word, validate_word

NUMERICAL_ERRORS = (StepCountTooSmallError, IntegrationFailureError,
                    DegenerateEnergyError)


def parse_word(spec):
    """Word specs: sub:<k> (period-F_k approximant), rot:<num>/<den>[:theta],
    or an explicit 01-string via lit:<word>."""
    if spec.startswith("sub:"):
        return approximant_word(int(spec[4:]))
    if spec.startswith("rot:"):
        body = spec[4:].split(":")
        num, den = body[0].split("/")
        theta = body[1] if len(body) > 1 else 0
        return rotation_word(int(num), int(den), theta)
    if spec.startswith("lit:"):
        return validate_word(spec[4:])
    raise ConfigError(f"unknown word spec {spec!r}")


def parse_range(spec):
    try:
        a, b = spec.split(":")
        a, b = float(a), float(b)
    except ValueError as exc:
        raise ConfigError(f"range must look like a:b, got {spec!r}") from exc
    if not (a <= b):
        raise ConfigError(f"range must be nondecreasing, got {spec!r}")
    return a, b


def parse_float_list(spec):
    try:
        return [float(x) for x in spec.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {spec!r}") from exc


def _add_common(p, word=False):
    p.add_argument("--piece0", default="zero", help="piece spec for letter 0")
    p.add_argument("--piece1", default="const:1", help="piece spec for letter 1")
    if word:
        p.add_argument("--word", default="sub:2",
                       help="word spec: sub:<k> | rot:<num>/<den>[:<theta>] | lit:<01...>")
    p.add_argument("--steps", type=int, default=2048,
                   help="base ODE steps per unit length (scaled up when stiff)")
    p.add_argument("--out", default=None, help="output path (default <command>.<fmt>)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="fibspec",
        description="Spectra and trace-map dynamics of continuum Fibonacci operators")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum-slice", help="discriminant over an (E, lambda) grid")
    _add_common(p, word=True)
    p.add_argument("--e-range", required=True)
    p.add_argument("--lambda-range", required=True)
    p.add_argument("--e-grid", type=int, default=1200)
    p.add_argument("--lambda-grid", type=int, default=400)

    p = sub.add_parser("band-edges", help="spectral bands of the periodic approximant")
    _add_common(p, word=True)
    p.add_argument("--e-range", required=True)
    p.add_argument("--e-grid", type=int, default=4001)
    p.add_argument("--lambda-range", required=True)
    p.add_argument("--lambda-grid", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--split-touching", action="store_true",
                   help="count Floquet-style: split bands meeting at |disc|=2")

    p = sub.add_parser("invariant-scan", help="Fricke-Vogt invariant along an energy window")
    _add_common(p)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--e-range", required=True)
    p.add_argument("--e-grid", type=int, default=501)

    p = sub.add_parser("trace-orbit", help="trace-map orbit of one energy")
    _add_common(p)
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--max-iter", type=int, default=60)
    p.add_argument("--blowup", type=float, default=1e10)

    p = sub.add_parser("prufer-asymptotics", help="(theta, L) changes across a lambda grid")
    _add_common(p)
    p.add_argument("--e", type=float, default=1.0)
    p.add_argument("--lambda-range", default="1e2:1e6")
    p.add_argument("--lambda-grid", type=int, default=41)
    p.add_argument("--theta0", type=float, default=math.pi / 4)
    p.add_argument("--interval", default=None, help="sub-interval a:b of the piece")

    p = sub.add_parser("nlevp-validate", help="NLEVP roots against the Floquet discriminant")
    _add_common(p, word=True)
    p.add_argument("--builder", choices=("general", "halfcell"), default="general")
    p.add_argument("--split-c", type=float, default=4.0)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--e-range", required=True)
    p.add_argument("--e-grid", type=int, default=24001)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("counterexample-search", help="couplings with trace-zero f1 cell")
    _add_common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--lambda-range", default="40:200")
    p.add_argument("--scan-step", type=float, default=0.05)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("trace-divergence", help="min f1-cell trace over a compact window")
    _add_common(p)
    p.add_argument("--e-max", type=float, default=10.0)
    p.add_argument("--lambda-grid", default="1e3,1e4,1e5")
    p.add_argument("--e-grid", type=int, default=801)

    return ap


def _meta(args, extra=None):
    meta = {"backend": BACKEND}
    for k, v in sorted(vars(args).items()):
        if k in ("out", "format", "command"):
            continue
        meta[k.replace("_", "-")] = v
    meta["command"] = args.command
    if extra:
        meta.update(extra)
    return meta


def run(args):
    piece0 = parse_piece(args.piece0)
    piece1 = parse_piece(args.piece1)
    out = args.out or f"{args.command}.{args.format}"

    if args.command == "spectrum-slice":
        word = parse_word(args.word)
        e_lo, e_hi = parse_range(args.e_range)
        l_lo, l_hi = parse_range(args.lambda_range)
        Es = np.linspace(e_lo, e_hi, args.e_grid)
        lams = np.linspace(l_lo, l_hi, args.lambda_grid) if args.lambda_grid > 1 \
            else np.array([l_lo])
        rows = floquet.spectrum_slice(
            lambda lam: assemble(word, piece0, piece1, lam), Es, lams, args.steps)
        write_table(out, args.format,
                    ("lambda", "E", "discriminant", "in_spectrum"),
                    rows, _meta(args, {"word": word}))

    elif args.command == "band-edges":
        word = parse_word(args.word)
        e_lo, e_hi = parse_range(args.e_range)
        l_lo, l_hi = parse_range(args.lambda_range)
        lams = np.linspace(l_lo, l_hi, args.lambda_grid) if args.lambda_grid > 1 \
            else np.array([l_lo])
        rows = []
        for lam in lams:
            cell = assemble(word, piece0, piece1, float(lam))
            bands = floquet.band_scan(cell, e_lo, e_hi, args.e_grid,
                                      args.tol, args.steps)
            if args.split_touching:
                bands = floquet.split_touching_bands(cell, bands,
                                                     tol=args.tol, steps=args.steps)
            for idx, band in enumerate(bands):
                rows.append((float(lam), idx, band.e_lo, band.e_hi))
        write_table(out, args.format, ("lambda", "band_index", "e_lo", "e_hi"),
                    rows, _meta(args, {"word": word}))

    elif args.command == "invariant-scan":
        e_lo, e_hi = parse_range(args.e_range)
        records = experiments.invariant_scan(piece0, piece1, args.lam,
                                             e_lo, e_hi, args.e_grid, args.steps)
        rows = [(r.E, args.lam, r.x0, r.x1, r.x2, r.invariant_value, r.dim_proxy)
                for r in records]
        write_table(out, args.format,
                    ("E", "lambda", "x0", "x1", "x2", "invariant", "dim_proxy"),
                    rows, _meta(args))

    elif args.command == "trace-orbit":
        triple = tracemap.curve_of_initial_conditions(
            piece0, piece1, args.lam, args.e, args.steps)
        verdict = tracemap.escape_test(triple, args.max_iter, args.blowup)
        rows = [(0, triple.x, triple.y, triple.z, tracemap.fricke_vogt(triple))]
        for k, t in enumerate(tracemap.orbit(triple, args.max_iter), start=1):
            rows.append((k, t.x, t.y, t.z, tracemap.fricke_vogt(t)))
        write_table(out, args.format, ("k", "x", "y", "z", "invariant"),
                    rows, _meta(args, {"status": verdict.status,
                                       "escape-index": verdict.escape_index,
                                       "max-abs": verdict.max_abs}))

    elif args.command == "prufer-asymptotics":
        l_lo, l_hi = parse_range(args.lambda_range)
        lams = np.geomspace(l_lo, l_hi, args.lambda_grid)
        interval = None
        if args.interval:
            interval = parse_range(args.interval)
        rows = prufer.asymptotics_table(piece1, args.e, lams, args.theta0,
                                        interval, args.steps)
        write_table(out, args.format, ("lambda", "delta_theta", "delta_L", "steps"),
                    rows, _meta(args))

    elif args.command == "nlevp-validate":
        word = parse_word(args.word)
        e_lo, e_hi = parse_range(args.e_range)
        if args.builder == "halfcell":
            problem = nlevp.NlevpProblem.from_word_halfcell(word, args.split_c)
            from .potentials import discrete_split
            p1 = discrete_split(args.split_c)
        else:
            problem = nlevp.NlevpProblem.from_word(word)
            p1 = piece1
        cell = assemble(word, piece0, p1, args.lam)
        rows = []
        for theta in (0.0, math.pi):
            roots = nlevp.eigenvalue_scan(problem, args.lam, theta,
                                          (e_lo, e_hi), args.e_grid, args.tol)
            for E in roots:
                mat = nlevp.build(problem, E, args.lam, theta)
                sv_min, sv_max = nlevp.singular_values(mat)
                absdet = abs(float(nlevp.scaled_det(problem, np.array([E]),
                                                    args.lam, theta)[0]))
                disc = floquet.discriminant(cell, E, args.steps)
                rows.append((theta, E, absdet, sv_min, disc))
        write_table(out, args.format,
                    ("theta", "E_root", "abs_det", "smallest_singular_value",
                     "floquet_discriminant"),
                    rows, _meta(args, {"word": word}))

    elif args.command == "counterexample-search":
        l_lo, l_hi = parse_range(args.lambda_range)
        hits = experiments.counterexample_search(
            piece1, args.n, l_lo, l_hi, args.scan_step, args.tol, args.steps)
        rows = [(h.lambda_value, h.trace_residual, h.b_squared_residual,
                 h.invariant_at_E) for h in hits]
        write_table(out, args.format,
                    ("lambda", "trace_residual", "b2_residual", "invariant"),
                    rows, _meta(args))

    elif args.command == "trace-divergence":
        lams = parse_float_list(args.lambda_grid)
        rows = experiments.trace_divergence_check(piece1, args.e_max, lams,
                                                  args.e_grid, args.steps)
        write_table(out, args.format, ("lambda", "min_trace", "argmin_E"),
                    rows, _meta(args))

    else:  # pragma: no cover - argparse guards this
        raise ConfigError(f"unknown command {args.command}")
    return 0


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"fibspec: configuration error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"fibspec: numerical failure: {exc}", file=sys.stderr)
        return 3
    except FibspecError as exc:
        print(f"fibspec: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
