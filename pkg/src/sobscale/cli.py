"""Command-line experiment runner.

Every command writes a JSON report (schema ``sobscale/1``) or plot-ready CSV
and exits 0 when all checks pass, 1 when any fails, 2 on a bad configuration.
Reports are a pure function of the configuration and seed; the wall-clock
timestamp goes to a separate ``<out>.meta.json`` file.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SobscaleError, TruncationWarning
from .interp import verify_theorem2
from .lattice import LatticeBox, LatticeFunction
from .pdo import (
    Symbol,
    ellipticity_estimate,
    fredholm_surrogate,
    mapping_norm_scan,
    pdo_apply_with_leakage,
    symbol_class_estimate,
    verify_theorem7,
)
from .presets import PRESETS, check
from .ro import ROFunction, check_pseudoconcave, estimate_matuszewska, make_interp_parameter, verify_ro
from .rng import generator, random_function
from .spaces import duality_pairing_bound, duality_sup, sobolev_norm
from .torus import TorusGrid

SCHEMA = "sobscale/1"
COMMANDS = (
    "ro-analyze",
    "verify-interp",
    "verify-duality",
    "pdo-apply",
    "symbol-check",
    "mapping-scan",
    "fredholm",
    "a-scale",
    "suite",
)
N_LIMITS = {1: 4096, 2: 32, 3: 8}
NAIVE_LIMIT = 20_000_000


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# parsing and validation


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sobscale", description="Extended Sobolev scale experiments on lattice truncations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="lattice dimension (1-3)")
    common.add_argument("--N", type=int, default=8, help="box radius")
    common.add_argument("--M", type=int, default=None, help="torus points per axis (odd)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--symbol", default=None, help="symbol JSON file or inline JSON")
    common.add_argument("--phi", default=None, help="RO function JSON file or inline JSON")
    common.add_argument("--out", default=None, help="output path (stdout if omitted)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "ro-analyze":
            sp.add_argument("--a", type=float, default=2.0)
            sp.add_argument("--t-max", type=float, default=1e6)
            sp.add_argument("--lambda-max", type=float, default=1e4)
        if name in ("verify-interp",):
            sp.add_argument("--s0", type=float, default=1.0)
            sp.add_argument("--s1", type=float, default=2.0)
        if name in ("verify-duality", "fredholm"):
            sp.add_argument("--s", type=float, nargs="+", default=None)
        if name in ("mapping-scan", "a-scale"):
            sp.add_argument("--radii", type=int, nargs="+", default=[4, 8, 16])
        if name == "symbol-check":
            sp.add_argument("--max-alpha", type=int, default=1)
            sp.add_argument("--max-beta", type=int, default=1)
        if name == "suite":
            sp.add_argument("--preset", required=True, choices=sorted(PRESETS) + ["all"])
    return p


def validate(args) -> None:
    if not 1 <= args.n <= 3:
        raise UsageError(f"--n must be in [1, 3], got {args.n}")
    if args.N < 1:
        raise UsageError(f"--N must be positive, got {args.N}")
    if args.N > N_LIMITS[args.n]:
        raise UsageError(f"--N={args.N} exceeds the dense-matrix limit {N_LIMITS[args.n]} for n={args.n}")
    if args.M is not None:
        least = 2 * (2 * args.N + 1) - 1
        if args.M % 2 == 0 or args.M < least:
            raise UsageError(
                f"--M={args.M} violates the Nyquist rule: M must be odd and at least 2(2N+1)-1 = {least}"
            )
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be positive")


def _load_json(text: str):
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return json.loads(Path(text).read_text())


def load_phi(args, default: dict) -> ROFunction:
    return ROFunction.from_spec(_load_json(args.phi) if args.phi else default)


def load_symbol(args, default: dict) -> Symbol:
    return Symbol.from_spec(_load_json(args.symbol) if args.symbol else default, n=args.n)


def _grid(args, box: LatticeBox):
    return None if args.M is None else TorusGrid(box.n, args.M)


def _trials(args, default: int) -> int:
    return default if args.trials is None else args.trials


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("out", "format")}
    for key in ("phi", "symbol"):
        if cfg.get(key):
            cfg[key] = _load_json(cfg[key])
    return cfg


# --------------------------------------------------------------------------
# commands; each returns (checks, results, table)


def cmd_ro_analyze(args):
    phi = load_phi(args, {"family": "power_log", "s": 1.5, "r": 1})
    ro = verify_ro(phi, args.a, args.t_max)
    mat = estimate_matuszewska(phi, args.lambda_max, args.t_max)
    results = {"phi": phi.spec(), "verify_ro": ro.to_dict(), "matuszewska": mat.to_dict(), "index_bounds": phi.index_bounds()}
    checks = [check("ro_bound_finite", ro.verdict == "pass", c_estimate=ro.c_estimate)]
    checks.append(check("indices_ordered", mat.sigma0 <= mat.sigma1, sigma=[mat.sigma0, mat.sigma1]))
    lo, hi = mat.sigma0, mat.sigma1
    psi = make_interp_parameter(phi, lo - 1.0, hi + 1.0)
    pc = check_pseudoconcave(psi)
    results["pseudoconcavity"] = pc.to_dict()
    checks.append(check("psi_pseudoconcave", pc.verdict == "pass", ratio=pc.ratio, ratio_doubled=pc.ratio_doubled))
    t = np.geomspace(1.0, args.t_max, 25)
    table = (["t", "phi"], [[float(a), float(b)] for a, b in zip(t, phi(t))])
    return checks, results, table


def cmd_verify_interp(args):
    phi = load_phi(args, {"family": "power_log", "s": 1.5, "r": 1})
    box = LatticeBox(args.n, args.N)
    r = verify_theorem2(phi, args.s0, args.s1, box, _trials(args, 200), args.seed)
    checks = [check("interp_equals_h_phi", r["pass"], max_rel_deviation=r["max_rel_deviation"], tolerance=r["tolerance"])]
    return checks, r, (["trials", "max_rel_deviation"], [[r["trials"], r["max_rel_deviation"]]])


def cmd_verify_duality(args):
    box = LatticeBox(args.n, args.N)
    rng = generator(args.seed)
    trials = _trials(args, 1000)
    rows, checks = [], []
    for s in args.s or [1.5]:
        worst, dev, unit = 0.0, 0.0, 0.0
        for _ in range(trials):
            u, v = random_function(box, rng), random_function(box, rng)
            pairing, bound = duality_pairing_bound(u, v, s)
            worst = max(worst, abs(pairing) / bound)
            sup, vstar = duality_sup(u, s)
            norm = sobolev_norm(u, s)
            dev = max(dev, abs(sup - norm) / norm)
            unit = max(unit, abs(sobolev_norm(vstar, -s) - 1.0))
        rows.append([s, worst, dev, unit])
        checks.append(check(f"cauchy_schwarz[s={s}]", worst <= 1.0 + 1e-12, max_ratio=worst))
        checks.append(check(f"duality_sup[s={s}]", dev <= 1e-12 and unit <= 1e-12, max_rel_deviation=dev, unit_deviation=unit))
    return checks, {"trials": trials}, (["s", "max_pairing_ratio", "sup_deviation", "unit_deviation"], rows)


def _naive_apply(a: Symbol, u: LatticeFunction, grid: TorusGrid) -> np.ndarray:
    """Literal double sum, chunked over output points."""
    nodes = grid.nodes
    box = u.box
    phase = np.exp(-2j * np.pi * (nodes @ box.points.T.astype(float)))
    uh = phase @ u.values
    out = np.empty(box.cardinality, dtype=np.complex128)
    for start in range(0, box.cardinality, 64):
        k = box.points[start:start + 64]
        sym = a.evaluate(k, nodes)
        kern = np.exp(2j * np.pi * (k.astype(float) @ nodes.T))
        out[start:start + 64] = (kern * sym) @ uh / grid.size
    return out


def cmd_pdo_apply(args):
    a = load_symbol(args, {"m": 0, "terms": [{"k_factor": {"family": "constant", "c": 1}}]})
    box = LatticeBox(args.n, args.N)
    grid = _grid(args, box) or TorusGrid.for_box(box, a.mode_radius)
    u = random_function(box, generator(args.seed))
    out, leak = pdo_apply_with_leakage(a, u, grid)
    nu = float(np.linalg.norm(u.values))
    results = {"leakage": leak, "input_norm": nu, "M": grid.M}
    checks = []
    if box.cardinality * grid.size <= NAIVE_LIMIT:
        ref = _naive_apply(a, u, grid)
        res = float(np.linalg.norm(out.values - ref)) / max(float(np.linalg.norm(ref)), 1e-300)
        results["residual_vs_direct_sum"] = res
        checks.append(check("matches_direct_sum", res <= 1e-12, residual=res))
    if a.is_multiplier and np.allclose(a.multiplier_values(box), 1.0, rtol=0, atol=0):
        res = float(np.linalg.norm(out.values - u.values)) / nu
        results["residual_vs_input"] = res
        checks.append(check("identity_symbol_returns_input", res <= 1e-13, residual=res))
    table = ([f"k{j + 1}" for j in range(box.n)] + ["re", "im"], [[*map(int, k), float(z.real), float(z.imag)] for k, z in zip(box.points, out.values)])
    return checks, results, table


def cmd_symbol_check(args):
    a = load_symbol(args, {"m": 1, "terms": [{"k_factor": {"family": "bracket_power", "s": 1}}]})
    box = LatticeBox(args.n, args.N)
    grid = _grid(args, box)
    est = symbol_class_estimate(a, box, grid, args.max_alpha, args.max_beta)
    ell = ellipticity_estimate(a, box, grid)
    results = est.to_dict()
    results["ellipticity"] = ell.to_dict()
    checks = [check("consistent_with_order", est.consistent)]
    rows = [[list(e[0]), list(e[1]), e[2], e[3]] for e in est.entries]
    return checks, results, (["alpha", "beta", "C", "slope"], rows)


def cmd_mapping_scan(args):
    a = load_symbol(args, {"m": 0, "terms": [{"k_factor": {"family": "constant", "c": 1}, "x_modes": [{"q": [1] + [0] * (args.n - 1), "coeff": [1, 0]}, {"q": [0] * args.n, "coeff": [-1, 0]}]}]})
    phi = load_phi(args, {"family": "power", "s": 1})
    radii = sorted(args.radii)
    if max(radii) > N_LIMITS[args.n]:
        raise UsageError(f"radius {max(radii)} exceeds the dense-matrix limit {N_LIMITS[args.n]} for n={args.n}")
    scan = mapping_norm_scan(a, phi, radii, args.n)
    vals = [v for _, v in scan]
    checks = [check("norms_finite", all(math.isfinite(v) for v in vals))]
    if len(vals) >= 2:
        change = abs(vals[-1] - vals[-2]) / vals[-2]
        checks.append(check("norm_settles", change < 0.05, relative_change=change))
    return checks, {"scan": scan}, (["N", "opnorm"], [list(r) for r in scan])


def cmd_fredholm(args):
    a = load_symbol(args, {"m": 1, "terms": [{"k_factor": {"family": "bracket_power", "s": 1}}]})
    box = LatticeBox(args.n, args.N)
    grid = _grid(args, box)
    reports = [fredholm_surrogate(a, s, box, grid) for s in (args.s or [0.0, 1.0])]
    defects = {r.rank_defect for r in reports}
    checks = [check(f"index_zero[s={r.s}]", r.index == 0, dim_ker=r.dim_ker, dim_coker=r.dim_coker) for r in reports]
    checks.append(check("rank_defect_s_independent", len(defects) == 1 and all(r.s_independent for r in reports)))
    rows = [[r.s, r.dim_ker, r.dim_coker, r.index] for r in reports]
    return checks, {"reports": [r.to_dict() for r in reports]}, (["s", "dim_ker", "dim_coker", "index"], rows)


def cmd_a_scale(args):
    a = load_symbol(args, {"m": 1, "terms": [{"k_factor": {"family": "bracket_power", "s": 1}}]})
    phi = load_phi(args, {"family": "power", "s": 1})
    radii = sorted(args.radii)
    if max(radii) > N_LIMITS[args.n]:
        raise UsageError(f"radius {max(radii)} exceeds the dense-matrix limit {N_LIMITS[args.n]} for n={args.n}")
    r = verify_theorem7(a, phi, radii, _trials(args, 200), args.seed)
    checks = [check("ratio_band_stable", r["pass"])]
    rows = [[b["N"], b["min_ratio"], b["max_ratio"], b["shift"]] for b in r["bands"]]
    return checks, r, (["N", "min_ratio", "max_ratio", "shift"], rows)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SOBSCALE_THREADS", "1")))
    except ValueError:
        return 1


def cmd_suite(args):
    names = sorted(PRESETS) if args.preset == "all" else [args.preset]

    def one(name):
        return PRESETS[name](args.seed) if args.trials is None else PRESETS[name](args.seed, args.trials)

    with ThreadPoolExecutor(max_workers=min(_threads(), len(names))) as pool:
        outcomes = list(pool.map(one, names))
    checks, results, rows = [], {}, []
    for name, (c, r) in zip(names, outcomes):
        for item in c:
            item = dict(item, name=f"{name}/{item['name']}")
            checks.append(item)
            rows.append([item["name"], item["pass"]])
        results[name] = r
    return checks, results, (["check", "pass"], rows)


HANDLERS = {
    "ro-analyze": cmd_ro_analyze,
    "verify-interp": cmd_verify_interp,
    "verify-duality": cmd_verify_duality,
    "pdo-apply": cmd_pdo_apply,
    "symbol-check": cmd_symbol_check,
    "mapping-scan": cmd_mapping_scan,
    "fredholm": cmd_fredholm,
    "a-scale": cmd_a_scale,
    "suite": cmd_suite,
}


# --------------------------------------------------------------------------
# output


def _plain(x):
    """Make ``x`` JSON-safe: numpy scalars, complex numbers, tuples, non-finite floats."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_plain(x.real), _plain(x.imag)]
    return x


def render(report: dict, table, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header, rows = table
    w.writerow(header)
    for row in rows:
        w.writerow([json.dumps(_plain(v)) if isinstance(v, (list, tuple)) else _plain(v) for v in row])
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        validate(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            checks, results, table = HANDLERS[args.command](args)
        config = _config(args)
    except (UsageError, SobscaleError, json.JSONDecodeError, OSError, KeyError) as exc:
        print(f"sobscale {args.command}: error: {exc}", file=sys.stderr)
        return 2
    ok = all(c["pass"] for c in checks)
    report = {"schema": SCHEMA, "command": args.command, "config": config, "checks": checks, "results": results, "pass": ok}
    text = render(report, table, args.format)
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        meta = {"schema": SCHEMA, "created": _dt.datetime.now(_dt.timezone.utc).isoformat(), "version": __version__, "report": out.name}
        Path(str(out) + ".meta.json").write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
