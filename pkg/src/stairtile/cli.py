"""Command-line interface.

Exit status: 0 on success, 1 on invalid input, 2 when a check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import Config
from .disk import QuarterConvexDisk, disk_from_function, make_disk, normalize_quadrilateral, normalize_triangle
from .errors import GeometryError

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from e


def _eval_expression(expr: str):
    ns = {name: getattr(np, name) for name in ("sqrt", "exp", "log", "sin", "cos", "pi", "minimum", "maximum", "abs")}

    def fn(x):
        return eval(expr, {"__builtins__": {}}, {**ns, "x": x})  # noqa: S307

    return fn


def normalize_polygon(polygon) -> tuple[QuarterConvexDisk, object]:
    pts = [tuple(map(float, p)) for p in polygon]
    if len(pts) == 3:
        return normalize_triangle(*pts)
    if len(pts) == 4:
        return normalize_quadrilateral(*pts)
    raise InputError("only triangles and quadrilaterals can be normalized")


def load_disk(path: str, samples: int = 64) -> QuarterConvexDisk:
    """Read a disk from {"breakpoints"}, {"polygon"} or {"expression"} JSON."""
    data = _read_json(path)
    if "breakpoints" in data:
        return make_disk(data["breakpoints"])
    if "polygon" in data:
        return normalize_polygon(data["polygon"])[0]
    if "expression" in data:
        return disk_from_function(_eval_expression(data["expression"]), samples)
    raise InputError(f"{path}: expected a 'breakpoints', 'polygon' or 'expression' key")


def _config(args) -> Config:
    return Config(
        tolerance=args.tolerance,
        resolution=args.resolution,
        restarts=args.restarts,
        oracle_grid=args.oracle_grid,
        seed=args.seed,
    )


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def cmd_normalize(args) -> int:
    data = _read_json(args.polygon)
    if "polygon" not in data:
        raise InputError(f"{args.polygon}: expected a 'polygon' key")
    disk, amap = normalize_polygon(data["polygon"])
    _emit({**disk.to_json(), "map": amap.to_json(), "image": amap.apply(data["polygon"]).tolist()})
    return EXIT_OK


def cmd_density(args) -> int:
    from .lattice import lattice_covering_density, verify_lattice_covering, verify_lattice_tiling

    disk = load_disk(args.disk, args.samples)
    rep = lattice_covering_density(disk, _config(args))
    out = rep.to_json()
    status = EXIT_OK
    if args.verify:
        l, res = float(args.verify[0]), int(args.verify[1])
        cov = verify_lattice_covering(disk, rep.lattice, l, res)
        til = verify_lattice_tiling(rep.stair, rep.lattice, l, res)
        out["covering"] = cov.to_json()
        out["tiling"] = {**til.to_json(), "is_tiling": til.is_tiling}
        if cov.covered != cov.samples or not til.is_tiling:
            status = EXIT_CHECK
    _emit(out)
    return status


def cmd_inscribe(args) -> int:
    from .inscribe import max_stair_area
    from .stair import build_stair

    disk = load_disk(args.disk, args.samples)
    res = max_stair_area(disk, args.steps, _config(args), oracle_grid=args.oracle)
    out = res.to_json()
    out["stair"] = build_stair(disk, res.xs).to_json()
    _emit(out)
    if res.oracle_gap is not None and res.oracle_gap > _config(args).oracle_tol:
        return EXIT_CHECK
    return EXIT_OK


def _load_covering(args, disk):
    from .cutops import CoveringInstance

    data = _read_json(args.covering)
    if "translates" not in data:
        raise InputError(f"{args.covering}: expected a 'translates' key")
    l = args.l if args.l is not None else data.get("l")
    if l is None:
        raise InputError("window half-size missing: pass --l or put 'l' in the covering file")
    return CoveringInstance(disk, tuple(tuple(map(float, t)) for t in data["translates"]), float(l),
                            resolution=min(args.resolution, 512))


def cmd_decompose(args) -> int:
    from .cutops import audit_decomposition, decompose_covering

    disk = load_disk(args.disk, args.samples)
    inst = _load_covering(args, disk)
    cells = decompose_covering(inst)
    audit = audit_decomposition(inst, cells, resolution=min(args.resolution, 1024))
    if args.render:
        Path(args.render).write_text(_render_cells(inst, cells))
    _emit({"audit": audit.to_json(), "cells": [c.to_json() for c in cells]})
    return EXIT_OK if audit.ok else EXIT_CHECK


def cmd_check(args) -> int:
    from . import properties as P

    disk = load_disk(args.disk, args.samples)
    sqcap = P.sqcap_mask if args.mutant is None else {**P.MUTANTS, "swapped-tie": P.sqcap_swapped_tie}[args.mutant]
    if args.lemma == "sqcap-chain":
        rep = P.check_sqcap_chain(disk, args.trials, args.seed, sqcap=sqcap)
    elif args.lemma == "cut-chain":
        rep = P.check_cut_chain(disk, args.trials, args.seed, sqcap=sqcap)
    elif args.lemma == "concavity":
        rep = P.check_concavity(disk, 6, _config(args))
    else:
        rep = P.check_counting(disk, args.trials, args.seed)
    _emit(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_CHECK


def _render_cells(inst, cells) -> str:
    from .svg import Shape, color, render_svg

    l = inst.l
    shapes = [Shape(c.polygon(), fill=color(c.owner), opacity=0.6, label=f"S_{c.owner} r={c.r_i}") for c in cells]
    return render_svg(shapes, (-l - 0.1 * l, l + 0.1 * l, -l - 0.1 * l, l + 0.1 * l), window=l)


def cmd_render(args) -> int:
    from .lattice import _translates_for_window, lattice_covering_density
    from .stair import build_stair
    from .svg import Shape, bounds_of, color, render_svg

    disk = load_disk(args.disk, args.samples)
    if args.covering:
        inst = _load_covering(args, disk)
        if args.cells:
            from .cutops import decompose_covering

            text = _render_cells(inst, decompose_covering(inst))
        else:
            base = disk.polygon()
            shapes = [Shape([(x + u[0], y + u[1]) for x, y in base], fill=color(i), opacity=0.3)
                      for i, u in enumerate(inst.translates)]
            l = inst.l
            text = render_svg(shapes, (-1.1 * l, 1.1 * l, -1.1 * l, 1.1 * l), window=l)
    elif args.lattice is not None:
        rep = lattice_covering_density(disk, _config(args))
        l = float(args.lattice)
        pts = _translates_for_window(rep.lattice, l, (0.0, 1.0, 0.0, 1.0), np.sqrt(2.0))
        base = disk.polygon()
        sv = np.asarray(rep.stair.vertices)
        shapes = []
        for i, p in enumerate(pts):
            shapes.append(Shape([(x + p[0], y + p[1]) for x, y in base], stroke=color(i), fill="none"))
            shapes.append(Shape((sv + p).tolist(), fill=color(i), opacity=0.4, stroke="none"))
        text = render_svg(shapes, (-1.1 * l, 1.1 * l, -1.1 * l, 1.1 * l), window=l)
    else:
        shapes = [Shape(disk.polygon(), fill="#dddddd")]
        if args.stair:
            xs = [float(v) for v in args.stair.split(",")]
            shapes.append(Shape(build_stair(disk, xs).vertices, fill=color(0), opacity=0.6))
        text = render_svg(shapes, bounds_of([s.vertices for s in shapes]))
    Path(args.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=64, help="breakpoints used for an 'expression' disk")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=32)
    common.add_argument("--resolution", type=int, default=1024)
    common.add_argument("--oracle-grid", type=int, default=2000)
    common.add_argument("--tolerance", type=float, default=1e-9)

    p = argparse.ArgumentParser(prog="stairtile", description="Covering densities of quarter-convex disks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="affine normal form of a triangle or quadrilateral")
    s.add_argument("--polygon", required=True, help='JSON file {"polygon": [[x, y], ...]}')
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("density", parents=[common], help="lattice covering density")
    s.add_argument("--disk", required=True)
    s.add_argument("--verify", nargs=2, metavar=("L", "RES"), help="raster-check the covering and tiling")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("inscribe", parents=[common], help="largest inscribed stair polygon")
    s.add_argument("--disk", required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--oracle", type=int, default=None, metavar="GRID_N")
    s.set_defaults(func=cmd_inscribe)

    s = sub.add_parser("decompose", parents=[common], help="decompose a covering into stair cells and audit it")
    s.add_argument("--disk", required=True)
    s.add_argument("--covering", required=True)
    s.add_argument("--l", type=float, default=None)
    s.add_argument("--render", default=None, metavar="OUT_SVG")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("check", parents=[common], help="randomised property checks")
    s.add_argument("--disk", required=True)
    s.add_argument("--lemma", required=True, choices=["sqcap-chain", "cut-chain", "concavity", "counting"])
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--mutant", default=None, choices=["swapped-orientation", "loose-tolerance", "swapped-tie"])
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("render", parents=[common], help="SVG drawings")
    s.add_argument("--disk", required=True)
    s.add_argument("--out", required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--covering", default=None, help="covering JSON file")
    g.add_argument("--lattice", default=None, metavar="L", help="optimal lattice covering of [-L, L]^2")
    g.add_argument("--stair", default=None, metavar="X1,X2,...")
    s.add_argument("--cells", action="store_true", help="with --covering: draw the decomposition cells")
    s.add_argument("--l", type=float, default=None)
    s.set_defaults(func=cmd_render)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GeometryError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
