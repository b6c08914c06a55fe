"""Command-line interface.

Exit codes: 0 success, 1 data error, 2 usage error, 3 bound violation.
Data goes to stdout (or ``--out``), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from .errors import DiffScatError, TooLargeForExactError
from .experiments import (
    ExperimentSpec,
    average_results,
    classification_csv,
    load_spec,
    run_source_localization,
    run_stability_curve,
    stability_csv,
)
from .graph import lazy_diffusion, read_edge_list, spectral_gap
from .metrics import EXACT_MAX_N, diffusion_distance
from .scattering import coefficients_to_csv, scatter_features
from .verification import rows_to_csv, verify_bounds
from .wavelets import build_bank, frame_bounds, max_scale

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed():
    return int(os.environ.get("SCATTER_SEED", "0"))


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _read_signals(path, n):
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            vals = [float(v) for v in line.split()]
            if len(vals) != n:
                raise DiffScatError(f"{path}:{lineno}: expected {n} values, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise DiffScatError(f"{path}: no signals")
    return np.array(rows).T


def _scales_arg(value):
    if value == "auto":
        return value
    try:
        j = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'") from None
    if j < 1:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'")
    return j


def _resolve_scales(scales, op):
    if scales != "auto":
        return scales
    beta = spectral_gap(op)
    return max_scale(beta) if beta > 0 else 1


def cmd_scatter(args):
    g = read_edge_list(args.graph)
    op = lazy_diffusion(g)
    J = _resolve_scales(args.scales, op)
    if args.signal is not None:
        x = _read_signals(args.signal, g.n)
    else:
        rng = np.random.default_rng(args.seed)
        x = rng.standard_normal((g.n, args.random))
    feats = scatter_features(op, build_bank(op, J), x, args.layers)
    _emit(coefficients_to_csv(feats, args.layers, J), args.out)
    return EXIT_OK


def cmd_distance(args):
    g1, g2 = read_edge_list(args.graph_a), read_edge_list(args.graph_b)
    try:
        res = diffusion_distance(g1, g2, s=args.s, mode=args.mode, max_exact_n=args.max_exact_n)
    except TooLargeForExactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    _emit("value,mode,s,permutation\n" + ",".join(res.as_row()) + "\n", args.out)
    return EXIT_OK


def cmd_frame(args):
    op = lazy_diffusion(read_edge_list(args.graph))
    J = _resolve_scales(args.scales, op)
    _emit(frame_bounds(op, J).to_csv(), args.out)
    return EXIT_OK


def cmd_bounds_verify(args):
    rows, violations = verify_bounds(args.pairs, seed=args.seed, n_min=args.n_min,
                                     n_max=args.n_max, layers=args.layers)
    _emit(rows_to_csv(rows), args.out)
    if violations:
        print(f"{violations} bound violation(s) beyond 1e-9", file=sys.stderr)
        return EXIT_VIOLATION
    print(f"{args.pairs} pairs, {len(rows)} checks, no violations", file=sys.stderr)
    return EXIT_OK


def _spec_from(args, generator):
    overrides = {f.name: getattr(args, f.name, None) for f in dataclasses.fields(ExperimentSpec)}
    overrides["seed"] = args.seed
    base = ExperimentSpec() if generator == "small_world" else ExperimentSpec(
        generator="sbm", n=120, signal="diffusion_source")
    spec = load_spec(args.config, overrides, base=base)
    if spec.generator != generator:
        raise DiffScatError(f"this command requires generator={generator}")
    return spec


def cmd_stability_curve(args):
    spec = _spec_from(args, "small_world")
    _emit(stability_csv(run_stability_curve(spec)), args.out)
    return EXIT_OK


def cmd_source_loc(args):
    spec = _spec_from(args, "sbm")
    runs = [run_source_localization(spec.replace(seed=spec.seed + r))
            for r in range(args.repeats)]
    _emit(classification_csv(average_results(runs)), args.out)
    return EXIT_OK


def _add_spec_flags(p):
    p.add_argument("--config", help="key=value experiment config file")
    for f in dataclasses.fields(ExperimentSpec):
        if f.name == "seed":
            continue
        p.add_argument("--" + f.name.replace("_", "-"), dest=f.name, default=None,
                       metavar="VALUE", help=f"override '{f.name}'")


def build_parser():
    parser = _Parser(prog="diffscat", description="Diffusion scattering on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scatter", help="scattering coefficients of graph signals")
    p.add_argument("graph", help="edge-list file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--signal", help="file with one whitespace-separated signal per line")
    src.add_argument("--random", type=int, metavar="K", help="use K Gaussian signals")
    p.add_argument("--layers", type=int, default=3)
    p.add_argument("--scales", type=_scales_arg, default="auto")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("distance", help="diffusion distance between two graphs")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--mode", choices=("exact", "identity", "heuristic"), default="exact")
    p.add_argument("--s", type=float, default=0.5)
    p.add_argument("--max-exact-n", type=int, default=EXACT_MAX_N)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("frame", help="frame bounds of the wavelet bank")
    p.add_argument("graph")
    p.add_argument("--scales", type=_scales_arg, default="auto")
    p.set_defaults(func=cmd_frame)

    p = sub.add_parser("bounds-verify", help="check every stability bound on random pairs")
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--n-max", type=int, default=EXACT_MAX_N)
    p.add_argument("--n-min", type=int, default=4)
    p.add_argument("--layers", type=int, default=3)
    p.set_defaults(func=cmd_bounds_verify)

    p = sub.add_parser("stability-curve", help="representation distance vs. spectral gap")
    _add_spec_flags(p)
    p.set_defaults(func=cmd_stability_curve)

    p = sub.add_parser("source-loc", help="source localization accuracy on an SBM graph")
    _add_spec_flags(p)
    p.add_argument("--repeats", type=int, default=1,
                   help="average accuracies over this many consecutive seeds")
    p.set_defaults(func=cmd_source_loc)

    for p in sub.choices.values():
        p.add_argument("--seed", type=int, default=_default_seed())
        p.add_argument("--out", default=None, help="output file (default stdout)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "pairs", 0) < 0 or getattr(args, "repeats", 1) < 1:
        parser.error("counts must be nonnegative")
    try:
        return args.func(args)
    except (DiffScatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
