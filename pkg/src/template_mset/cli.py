"""Command-line front end.

Complex values are written ``re,im`` and grids
``re_min,re_max,im_min,im_max,cols,rows``. Each run prints one JSON line to
stdout: ``{subcommand, params, elapsed_ms, output_files, headline_value}``.

Exit codes: 0 success, 1 I/O failure, 2 bad arguments, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numba
import numpy as np

from . import export
from .core import BudgetExceededError, ParamPair, check_budget, estimate_work
from .fields import (GridSpec, central_plateau, classical_mandelbrot_mask, contour_field,
                     hybrid_field, multi_mandelbrot_slice, multi_mandelbrot_voxels)
from .julia import (DEFAULT_ROOT_LENGTH, CoverageError, component_count, connectedness_field,
                    default_z_grid, julia_mask)
from .msets import (DEFAULT_MAX_DEPTH, CriticalMode, accumulation_map, fixed_map_set,
                    loglog_points, plateau_histogram)
from .templates import MAX_DEPTH, RandomTemplateSpec, TemplateRoot, random_root

DEFAULT_BUDGET = 10**10
THREADS_ENV = "TEMPLATE_MSET_THREADS"


class UsageError(ValueError):
    pass


def complex_arg(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}") from None


def grid_arg(text: str) -> GridSpec:
    try:
        return GridSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def range_arg(text: str) -> tuple[float, float]:
    parts = text.split(",")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"expected min,max but got {text!r}") from None
    if len(parts) != 2 or not lo < hi:
        raise argparse.ArgumentTypeError(f"expected min,max with min < max, got {text!r}")
    return lo, hi


def depth_arg(text: str) -> int:
    n = int(text)
    if not 0 <= n <= MAX_DEPTH:
        raise argparse.ArgumentTypeError(f"depth must be in [0, {MAX_DEPTH}]")
    return n


def probability_arg(text: str) -> float:
    p = float(text)
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError("probability must be in [0, 1]")
    return p


def _common(p: argparse.ArgumentParser, mode: bool = True, out: bool = True) -> None:
    if mode:
        p.add_argument("--mode", choices=[m.value for m in CriticalMode], default="regular")
    if out:
        p.add_argument("--out", required=True, help="output file")
        p.add_argument("--format", choices=export.FORMATS, default=None,
                       help="defaults to the output suffix, else csv")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads, 0 = all available (default ${THREADS_ENV} or 0)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum estimated orbit steps")


def _pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c0", type=complex_arg, required=True)
    p.add_argument("--c1", type=complex_arg, required=True)
    p.add_argument("--depth", type=depth_arg, required=True)
    p.add_argument("--max-depth", type=depth_arg, default=DEFAULT_MAX_DEPTH,
                   help="largest depth whose full root list may be materialised")


def _root_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--root", type=str, default=None, help="explicit 0/1 root, first bit applied first")
    p.add_argument("--p", type=probability_arg, default=0.5, help="random root: probability of a 1")
    p.add_argument("--len", type=int, default=DEFAULT_ROOT_LENGTH, help="random root length")
    p.add_argument("--seed", type=int, default=0, help="random root seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="template-mset",
                                     description="Mandelbrot sets of template iterations of two quadratic maps")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name in ("fixed-map", "accum", "plateaus", "loglog"):
        p = sub.add_parser(name)
        _pair_args(p)
        _common(p)
        if name == "loglog":
            p.add_argument("--all-lengths", action="store_true",
                           help="emit every length 1..2^N, unrepresented ones at log(1)")

    p = sub.add_parser("hybrid")
    p.add_argument("--c0", type=complex_arg, required=True)
    p.add_argument("--grid", type=grid_arg, required=True, help="c1 grid")
    p.add_argument("--depth", type=depth_arg, default=20)
    p.add_argument("--plateau", action="store_true", help="emit the b = 1 mask instead of b")
    _common(p)

    p = sub.add_parser("contour")
    p.add_argument("--grid-c0", type=grid_arg, required=True)
    p.add_argument("--grid-c1", type=grid_arg, required=True)
    p.add_argument("--depth", type=depth_arg, default=8)
    p.add_argument("--plateau", action="store_true", help="emit the b = 1 mask instead of b")
    _common(p)

    p = sub.add_parser("multi")
    fixed = p.add_mutually_exclusive_group(required=True)
    fixed.add_argument("--fix-c0", type=complex_arg, help="hold c0, sweep c1 over the grid")
    fixed.add_argument("--fix-c1", type=complex_arg, help="hold c1, sweep c0 over the grid")
    fixed.add_argument("--c0-line", action="store_true",
                       help="3D slice: sweep Re(c0) over --re-range at Im(c0) = --im-offset")
    p.add_argument("--re-range", type=range_arg, default=(-2.0, 1.0))
    p.add_argument("--re-samples", type=int, default=16)
    p.add_argument("--im-offset", type=float, default=0.0)
    p.add_argument("--grid", type=grid_arg, required=True)
    p.add_argument("--depth", type=depth_arg, default=8)
    _common(p, mode=False)

    p = sub.add_parser("classical")
    p.add_argument("--grid", type=grid_arg, required=True)
    p.add_argument("--iters", type=int, default=20)
    _common(p, mode=False)

    p = sub.add_parser("julia-mask")
    p.add_argument("--c0", type=complex_arg, required=True)
    p.add_argument("--c1", type=complex_arg, required=True)
    _root_args(p)
    p.add_argument("--z-grid", type=grid_arg, default=None,
                   help="default 501x501 over [-R_e-0.1, R_e+0.1]^2")
    p.add_argument("--connectivity", type=int, choices=(4, 8), default=4)
    _common(p, mode=False)

    p = sub.add_parser("julia-connect")
    p.add_argument("--c0", type=complex_arg, required=True)
    p.add_argument("--c1-grid", type=grid_arg, required=True)
    _root_args(p)
    p.add_argument("--z-grid", type=grid_arg, default=None,
                   help="default 501x501 covering the largest escape radius on the c1 grid")
    p.add_argument("--connectivity", type=int, choices=(4, 8), default=4)
    _common(p, mode=False)

    p = sub.add_parser("random-root")
    p.add_argument("--p", type=probability_arg, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None, help="optional file receiving the root string")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    return parser


def configure_threads(requested: int | None) -> int:
    if requested is None:
        requested = int(os.environ.get(THREADS_ENV, "0") or 0)
    if requested < 0:
        raise UsageError("--threads must be >= 0")
    available = numba.config.NUMBA_NUM_THREADS
    n = available if requested == 0 else min(requested, available)
    numba.set_num_threads(n)
    return n


def _root_from(args) -> TemplateRoot:
    if args.root is not None:
        return TemplateRoot.parse(args.root)
    if args.len < 0:
        raise UsageError("--len must be non-negative")
    return random_root(RandomTemplateSpec(args.p, args.len, args.seed))


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, GridSpec):
        return export.grid_dict(value)
    if isinstance(value, tuple):
        return list(value)
    return value


def _pair_command(args, out_format):
    pair = ParamPair(args.c0, args.c1)
    check_budget(estimate_work(1, args.depth), args.budget)
    s = fixed_map_set(pair, args.depth, args.mode, max_depth=args.max_depth)
    name = args.subcommand
    if name == "fixed-map":
        if out_format == "json":
            return json.dumps({"depth": s.depth, "members": s.members.tolist()}) + "\n", s.measure()
        return export.intervals_csv(s), s.measure()
    f = accumulation_map(s)
    if name == "accum":
        if out_format == "json":
            return json.dumps({"depth": f.depth, "t": f.breakpoints().tolist(),
                               "phi": f.values.tolist()}) + "\n", float(f.values[-1])
        return export.staircase_csv(f), float(f.values[-1])
    h = plateau_histogram(f)
    if name == "plateaus":
        if out_format == "json":
            return json.dumps({"depth": h.depth,
                               "counts": {str(k): v for k, v in sorted(h.counts.items())}}) + "\n", sum(h.counts.values())
        return export.plateaus_csv(h), sum(h.counts.values())
    pts = loglog_points(h, all_lengths=args.all_lengths)
    if out_format == "json":
        return json.dumps({"points": pts.tolist()}) + "\n", int(pts.shape[0])
    return export.loglog_csv(pts), int(pts.shape[0])


def execute(args) -> tuple[dict, list[str], object]:
    """Run one parsed subcommand; returns (params, output files, headline value)."""
    name = args.subcommand
    params = {k: _jsonable(v) for k, v in vars(args).items()
              if k not in ("subcommand", "out", "format", "threads", "budget")}
    out_format = export.infer_format(args.out, getattr(args, "format", None)) if args.out else None
    outputs: list[str] = []

    def emit(payload):
        export.write_atomic(args.out, payload)
        outputs.append(str(args.out))

    if name in ("fixed-map", "accum", "plateaus", "loglog"):
        if out_format not in ("csv", "json"):
            raise UsageError(f"{name} writes csv or json, not {out_format}")
        payload, headline = _pair_command(args, out_format)
        emit(payload)
        return params, outputs, headline

    if name == "hybrid":
        check_budget(estimate_work(args.grid.size, args.depth), args.budget)
        f = hybrid_field(args.c0, args.grid, args.depth, args.mode)
        out = central_plateau(f) if args.plateau else f
        emit(export.field_payload(out, out_format))
        return params, outputs, float(f.data.max())

    if name == "contour":
        check_budget(estimate_work(args.grid_c0.size * args.grid_c1.size, args.depth), args.budget)
        f = contour_field(args.grid_c0, args.grid_c1, args.depth, args.mode)
        out = central_plateau(f) if args.plateau else f
        emit(export.field_payload(out, out_format))
        return params, outputs, float(f.data.max())

    if name == "multi":
        if args.c0_line:
            if args.re_samples < 1:
                raise UsageError("--re-samples must be >= 1")
            check_budget(estimate_work(args.re_samples * args.grid.size, args.depth), args.budget)
            vox = multi_mandelbrot_voxels(args.re_range, args.re_samples, args.im_offset,
                                          args.grid, args.depth)
            if out_format == "json":
                emit(json.dumps({"voxels": vox.tolist()}) + "\n")
            elif out_format == "csv":
                emit(export.voxel_csv(vox))
            else:
                raise UsageError("3D multi slices write csv or json")
            return params, outputs, int(vox.shape[0])
        check_budget(estimate_work(args.grid.size, args.depth), args.budget)
        mask = multi_mandelbrot_slice(args.grid, args.depth, c0=args.fix_c0, c1=args.fix_c1)
        emit(export.field_payload(mask, out_format))
        return params, outputs, int(mask.data.sum())

    if name == "classical":
        if args.iters < 0:
            raise UsageError("--iters must be >= 0")
        check_budget(args.grid.size * max(args.iters, 1), args.budget)
        mask = classical_mandelbrot_mask(args.grid, args.iters)
        emit(export.field_payload(mask, out_format))
        return params, outputs, int(mask.data.sum())

    if name == "julia-mask":
        root = _root_from(args)
        params["root"] = str(root)
        pair = ParamPair(args.c0, args.c1)
        grid = args.z_grid or default_z_grid(pair.escape_radius)
        check_budget(grid.size * max(len(root), 1), args.budget)
        mask = julia_mask(pair, root, grid)
        emit(export.field_payload(mask, out_format))
        return params, outputs, component_count(mask, args.connectivity)

    if name == "julia-connect":
        root = _root_from(args)
        params["root"] = str(root)
        pts = args.c1_grid.points()
        worst = max(2.0, abs(args.c0), float(np.abs(pts).max()))
        grid = args.z_grid or default_z_grid(worst)
        check_budget(args.c1_grid.size * grid.size * max(len(root), 1), args.budget)
        f = connectedness_field(args.c0, args.c1_grid, root, grid, args.connectivity)
        emit(export.field_payload(f, out_format, counts=True))
        return params, outputs, int((f.data == 1).sum())

    if name == "random-root":
        if args.len < 0 or args.len > 10**7:
            raise UsageError("--len must be in [0, 10^7]")
        root = random_root(RandomTemplateSpec(args.p, args.len, args.seed))
        if args.out:
            emit(str(root) + "\n")
        return params, outputs, str(root)

    raise UsageError(f"unknown subcommand {name}")


def _attach_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-2,2,..." as an option flag; bind it as "--grid=-2,2,..." instead
    out: list[str] = []
    for tok in argv:
        if (out and out[-1].startswith("--") and "=" not in out[-1]
                and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] == ".")):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(_attach_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        configure_threads(args.threads)
        params, outputs, headline = execute(args)
    except BudgetExceededError as exc:
        print(f"template-mset: budget exceeded: estimated {exc.estimate} orbit steps, "
              f"budget {exc.budget}", file=sys.stderr)
        return 3
    except (UsageError, CoverageError, ValueError) as exc:
        print(f"template-mset: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"template-mset: I/O error: {exc}", file=sys.stderr)
        return 1
    summary = {
        "subcommand": args.subcommand,
        "params": params,
        "elapsed_ms": round((time.perf_counter() - start) * 1000.0, 3),
        "output_files": outputs,
        "headline_value": headline,
    }
    print(json.dumps(summary))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
