"""Command-line driver.

Exit codes: 0 success, 1 domain failure (the answer is "no"), 2 bad input,
3 search budget exhausted. JSON on stdout is canonical; ``--format text``
renders the same record as ``key: value`` lines.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import bounds
from .complex import AbstractTriangulation, boundary, validate
from .complex import load as load_complex
from .errors import BoundaryError, BudgetExceeded, FillingError, InvariantError, MeshError
from .metrics import as_fraction, lipschitz_constant

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("fillings")


class InputError(Exception):
    pass


def _frac_str(q) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _emit(record: dict, fmt: str) -> None:
    if fmt == "text":
        for key in sorted(record):
            val = record[key]
            if isinstance(val, (dict, list)):
                val = json.dumps(val, sort_keys=True)
            print(f"{key}: {val}")
    else:
        print(json.dumps(record, sort_keys=True, indent=2))


def _write(out: Path | None, name: str, text: str) -> None:
    if out is None:
        return
    (out / name).write_text(text)


def _out_dir(args) -> Path | None:
    if args.output is None:
        return None
    out = Path(args.output)
    if out.exists() and not out.is_dir():
        raise InputError(f"output path {out} exists and is not a directory")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _input_complex(args) -> AbstractTriangulation:
    if args.preset == "wheel":
        if args.n is None:
            raise InputError("--preset wheel needs --n")
        from .search import wheel

        return wheel(args.n)
    if args.preset is not None:
        raise InputError(f"preset {args.preset} does not give a triangulation; use it with 'mesh'")
    if args.input is None:
        raise InputError("an input file (-i) or --preset wheel is required")
    path = Path(args.input)
    if not path.is_file():
        raise InputError(f"input file {path} not found")
    return load_complex(path)


def cmd_verify(args) -> int:
    K = _input_complex(args)
    delta = as_fraction(args.delta if args.delta is not None else 1)
    if not (0 < delta <= 1):
        raise FillingError(f"delta must lie in (0, 1], got {delta}")
    report = validate(K)
    record = {"valid": report.ok, "validation": report.to_dict(), "delta": _frac_str(delta), "lipschitz": None}
    ok = report.ok
    if ok:
        try:
            lip = lipschitz_constant(K)
        except BoundaryError as exc:
            record["boundary_error"] = str(exc)
            ok = False
        else:
            record["lipschitz"] = lip.to_dict()
            ok = lip.delta >= delta
    record["is_delta_filling"] = ok
    _emit(record, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(args) -> int:
    if args.n is None:
        raise InputError("bounds needs --n")
    delta = as_fraction(args.delta if args.delta is not None else 1)
    ell = args.ell if args.ell is not None else 2 * math.pi
    v = bounds.vertex_lower_bound(args.n, delta)
    t = bounds.triangle_lower_bound(args.n, delta, args.chi)
    record = {
        "n": args.n,
        "delta": _frac_str(delta),
        "chi": args.chi,
        "ell": ell,
        "vertex_lower_bound": {"value": _frac_str(v.value), "ceiling": v.ceiling},
        "triangle_lower_bound": {"value": _frac_str(t.value), "ceiling": t.ceiling},
        "path_sum_bound": {str(k): _frac_str(bounds.path_sum_bound(k)) for k in range(1, 5)},
        "continuous_area_bound": bounds.continuous_area_bound(delta, ell),
        "menger_path_floor": _frac_str(bounds.menger_path_floor(args.n, delta)),
    }
    _emit(record, args.format)
    return EXIT_OK


def cmd_search(args) -> int:
    from .complex import dumps
    from .search import compute_D

    if args.n is None:
        raise InputError("search needs --n")
    if args.threads < 1:
        raise InputError("--threads must be at least 1")
    out = _out_dir(args)
    res = compute_D(
        args.n,
        args.epsilon if args.epsilon is not None else 0,
        budget_nodes=args.budget_nodes,
        budget_seconds=args.budget_seconds,
        threads=args.threads,
    )
    record = res.to_dict()
    _write(out, "search.json", json.dumps(record, sort_keys=True) + "\n")
    if res.witness is not None:
        _write(out, "witness.json", dumps(res.witness))
    _emit(record, args.format)
    if res.exhausted_budget:
        return EXIT_BUDGET
    return EXIT_OK if res.d_value is not None else EXIT_FAIL


def cmd_certificates(args) -> int:
    from .separators import check_certificate, check_walk, make_cut_instance, max_disjoint_paths, sperner_walk

    K = _input_complex(args)
    if args.x is None or args.y is None:
        raise InputError("certificates needs --x and --y")
    report = validate(K)
    if not report.ok:
        raise FillingError(f"input is not a valid triangulation: {report.violations[0].message}")
    out = _out_dir(args)
    inst = make_cut_instance(K, args.x, args.y)
    cert = max_disjoint_paths(inst)
    walk = sperner_walk(K, args.x, args.y, cert.separator)
    lip = lipschitz_constant(K)
    n = len(boundary(K)[0])
    problems = check_certificate(inst, cert) + check_walk(K, args.x, args.y, cert.separator, walk)
    record = {
        "x": args.x,
        "y": args.y,
        "menger": cert.to_dict(),
        "sperner": walk.to_dict(),
        "path_count": len(cert.paths),
        "separator_size": len(cert.separator),
        "lipschitz": lip.to_dict(),
        "menger_path_floor": _frac_str(bounds.menger_path_floor(n, lip.delta)),
        "problems": problems,
    }
    _write(out, "menger.json", json.dumps(cert.to_dict(), sort_keys=True) + "\n")
    _write(out, "sperner.json", json.dumps(walk.to_dict(), sort_keys=True) + "\n")
    _emit(record, args.format)
    return EXIT_OK if not problems else EXIT_FAIL


def _input_surface(args):
    from .plmesh import presets
    from .plmesh.surface import PLSurface

    if args.preset == "hemisphere":
        n = args.n if args.n is not None else 12
        return presets.hemisphere(n, max(2, round(n / 16))), 2 * math.sin(math.pi / n) / 16
    if args.preset == "disk":
        n = args.n if args.n is not None else 16
        return presets.flat_disk(n), 1 / 36
    if args.preset is not None:
        raise InputError(f"preset {args.preset} is not a surface")
    if args.input is None:
        raise InputError("mesh needs an input surface (-i) or --preset hemisphere|disk")
    path = Path(args.input)
    if not path.is_file():
        raise InputError(f"input file {path} not found")
    return PLSurface.loads(path.read_text()), None


def cmd_mesh(args) -> int:
    from .plmesh.pipeline import balanced_triangulation, k_for_epsilon, mesh_filling_report

    M, target = _input_surface(args)
    out = _out_dir(args)
    k = args.k
    if k is None:
        if target is None:
            raise InputError("mesh needs --k for a surface file")
        k = k_for_epsilon(M, min(target, 1 / 40))
    mesh = balanced_triangulation(M, k)
    record = {"stats": mesh.stats, "plan": mesh.plan.to_dict()}
    if mesh.complex.boundary_n is not None:
        report, _, _ = mesh_filling_report(M, k, mesh)
        record["report"] = report
        _write(out, "report.json", json.dumps(report, sort_keys=True) + "\n")
    _write(out, "mesh.json", mesh.dumps())
    _write(out, "mesh.off", mesh.to_off())
    _emit(record, args.format)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input")
    common.add_argument("-o", "--output", help="directory for output files")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--preset", choices=("hemisphere", "disk", "wheel"))
    common.add_argument("--n", type=int)

    p = argparse.ArgumentParser(prog="fillings", description="Lipschitz fillings of cycles: verify, bound, search, certify, mesh.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check a triangulation is a delta-Lipschitz filling")
    s.add_argument("--delta", help="p/q, default 1")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bounds", parents=[common], help="evaluate the lower-bound formulas")
    s.add_argument("--delta", help="p/q, default 1")
    s.add_argument("--chi", type=int, default=2)
    s.add_argument("--ell", type=float, help="circumference, default 2*pi")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("search", parents=[common], help="exhaustive search for D(n; epsilon)")
    s.add_argument("--epsilon", help="p/q, default 0")
    s.add_argument("--budget-nodes", type=int, default=10**7)
    s.add_argument("--budget-seconds", type=float)
    s.add_argument("--threads", type=int, default=1)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("certificates", parents=[common], help="Menger paths, separator and Sperner walk for x, y")
    s.add_argument("--x", type=int)
    s.add_argument("--y", type=int)
    s.set_defaults(func=cmd_certificates)

    s = sub.add_parser("mesh", parents=[common], help="balanced triangulation of a PL surface")
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_mesh)
    return p


def main(argv=None) -> int:
    level = os.environ.get("FILLINGS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FillingError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MeshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
