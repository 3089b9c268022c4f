"""Command-line entry point.

    gascasimir <mode> --config <path> [--out <dir>] [--workers N]

Exit codes: 0 success, 1 numerical failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from . import __version__
from .config import MODES, ConfigError, RunConfig, build_pair, build_slab, load_config, parse_config
from .errors import ConvergenceError, DomainError
from .pairpot import potential_finite_T, potential_matsubara, potential_T0_ground_ground
from .quad import QuadratureSpec
from .report import emit_report, summary_lines
from .slab import force_total, pairwise_halfspace_force
from .units import UnitSystem

__all__ = ["main", "run", "evaluate_pair", "evaluate_slab", "PAIR_HEADER", "SLAB_HEADER"]

EXIT_OK, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2

PAIR_HEADER = ["x", "R", "U_total", "U_nonres", "U_res", "error_estimate", "method", "width_floor"]
SLAB_HEADER = ["x", "L", "F_total", "F_res", "F_nres", "F_Lif", "L_ph1", "L_ph2",
               "valid_LT", "valid_L_lambda", "valid_L_Lph", "warning"]
PAIRWISE_COLUMNS = ["F_res_pairwise", "F_nres_pairwise"]


def evaluate_pair(sec: dict, tol: QuadratureSpec):
    built = build_pair(sec)
    cfg, method = built["config"], built["method"]
    if method == "auto":
        if cfg.temperature > 0:
            method = "matsubara"
        else:
            method = "real_axis" if cfg.excited else "imag_axis"
    if method == "matsubara":
        r = potential_matsubara(cfg, tol)
    elif method == "imag_axis":
        r = potential_T0_ground_ground(cfg, tol)
    else:
        r = potential_finite_T(cfg, tol, built["width_floor"])
    floor = r.width_floor if r.width_floor is not None else 0.0
    return [cfg.R, r.total, r.nonres, r.res, r.error, r.method, floor]


def evaluate_slab(sec: dict, tol: QuadratureSpec):
    built = build_slab(sec)
    cfg = built["config"]
    r = force_total(cfg, built["force_mode"])
    v = r.validity
    bad = [k for k, ok in v.items() if not ok]
    row = [cfg.L, r.total, r.res, r.nres, r.lifshitz, r.L_ph1, r.L_ph2,
           v["LT>>1"], v["L>>lambda"], v["L>>L_ph"], ";".join(bad)]
    if built["pairwise"]:
        p = pairwise_halfspace_force(cfg, tol)
        row += [p.res, p.nres]
    return row


def _metadata(rc: RunConfig, header, floors):
    meta = {
        "library": "gascasimir",
        "version": __version__,
        "mode": rc.mode,
        "inputs": rc.raw,
        "units": {
            "internal": "natural (hbar = c = k_B = 1)",
            "outputs": "natural units",
            "conversion": rc.units.metadata() if isinstance(rc.units, UnitSystem) else None,
        },
        "tolerances": {"abs_tol": rc.tolerances.abs_tol, "rel_tol": rc.tolerances.rel_tol,
                       "max_evals": rc.tolerances.max_evals},
        "columns": list(header),
        "sign_convention": "slab force > 0 is attraction",
    }
    if rc.pair is not None:
        meta["width_floor"] = {"relative_floor": rc.pair["width_floor"],
                               "applied": bool(any(f > 0 for f in floors))}
    if rc.sweep is not None:
        meta["sweep"] = {"target": rc.sweep.target, "variable": rc.sweep.variable,
                         "values": list(rc.sweep.values)}
    return meta


def run(rc: RunConfig, out_dir=None, workers: int = 1, stream=None) -> int:
    stream = stream or sys.stdout
    if rc.mode == "validate":
        return _validate(rc, out_dir, stream)
    target, points = rc.points()
    func = evaluate_pair if target == "pair" else evaluate_slab
    job = partial(func, tol=rc.tolerances)
    secs = [sec for _, sec in points]
    if workers > 1 and len(secs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, secs))
    else:
        results = [job(s) for s in secs]

    header = list(PAIR_HEADER if target == "pair" else SLAB_HEADER)
    if target == "slab" and rc.slab["pairwise"]:
        header += PAIRWISE_COLUMNS
    rows = [[x] + res for (x, _), res in zip(points, results)]
    floors = [r[7] for r in rows] if target == "pair" else []
    for line in summary_lines(header, rows):
        print(line, file=stream)
    if target == "slab":
        n_warn = sum(1 for r in rows if r[11])
        if n_warn:
            print(f"warning: {n_warn} row(s) outside the stated validity regime (see 'warning' column)",
                  file=sys.stderr)
    if out_dir is not None:
        for path in emit_report(out_dir, rc.stem, header, rows, _metadata(rc, header, floors)):
            print(f"wrote {path}", file=stream)
    return EXIT_OK


def _validate(rc: RunConfig, out_dir, stream) -> int:
    from .acceptance import run_all

    results = run_all()
    rows = []
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.number:2d} {r.name}: {r.detail}", file=stream)
        rows.append([r.number, r.name, r.passed, r.detail])
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria passed", file=stream)
    if out_dir is not None:
        header = ["criterion", "name", "passed", "detail"]
        meta = {"library": "gascasimir", "version": __version__, "mode": "validate", "columns": header}
        emit_report(out_dir, rc.stem, header, rows, meta)
    return EXIT_OK if n_ok == len(results) else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gascasimir",
                                 description="Pair potentials and slab forces in dilute absorbing gases.")
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", help="JSON run configuration (optional for validate)")
    ap.add_argument("--out", help="output directory for the CSV table and JSON sidecar")
    ap.add_argument("--workers", type=int, default=1, help="parallel worker processes for sweeps")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.workers < 1:
        print("error: --workers: must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.config is None:
            if args.mode != "validate":
                raise ConfigError("--config", "required for this mode")
            rc = parse_config({}, "validate")
        else:
            rc = load_config(args.config, args.mode)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(rc, args.out, args.workers)
    except (ConvergenceError, ArithmeticError, DomainError) as exc:
        diag = getattr(exc, "diagnostics", None)
        print(f"numerical failure: {exc}", file=sys.stderr)
        if diag:
            for k, v in sorted(diag.items()):
                print(f"  {k} = {v}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
