"""Config-driven experiment runner.

Every verification in the package is exposed as a subcommand reading a single
JSON config (a key/value tree, see `dwlab schema`). Runs are persisted under
one directory per config hash with the result JSON, spectra and profile CSVs,
and plot-data CSVs; integer outputs are bit-reproducible given the config.

Exit codes: 0 success, 1 a verification identity failed, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .errors import ConfigInvalid, DWLabError
from .operators import (Lattice1D, TorusLattice2D, apply_domain_wall,
                        build_cylinder_extension, build_jackiw_rebbi_line,
                        build_torus_dirac, make_gauge_flux,
                        random_chiral_operator, smooth_wall_profile,
                        step_profile_1d, step_profile_torus)
from .aps import main_theorem_check
from .localization import excision_count_compare, make_wall_excision_instance
from .spectral import (as_eta_identity_check, chiral_index, eigen,
                       eta_of_operator, mode_localization, spectral_gap_check)

EXPERIMENTS = {}


def experiment(kind, doc, claim):
    def wrap(fn):
        EXPERIMENTS[kind] = {"run": fn, "doc": doc, "claim": claim}
        return fn
    return wrap


class Ledger:
    """Collects (name, passed, residual) verdicts during a run."""

    def __init__(self):
        self.entries = []

    def check(self, name, passed, residual=0.0):
        self.entries.append({"name": name, "passed": bool(passed),
                             "residual": float(residual)})
        return bool(passed)

    def operator_invariants(self, name, op):
        self.check(f"{name}.hermiticity", True, op.hermiticity_residual)
        if op.chiral_flag:
            self.check(f"{name}.odd", True, op.chirality_residual)

    def all_passed(self):
        return all(e["passed"] for e in self.entries)


# -- config handling -----------------------------------------------------------


def _require(cfg, key, types, diags, path=""):
    if key not in cfg:
        diags.append(f"{path}{key}: missing")
        return None
    val = cfg[key]
    if not isinstance(val, types):
        diags.append(f"{path}{key}: expected {types}, got {type(val).__name__}")
        return None
    return val


def validate_config(cfg: dict) -> dict:
    diags = []
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        diags.append(f"{'.'.join(str(p) for p in exc.path) or '<root>'}: {exc.message}")
    kind = _require(cfg, "kind", str, diags)
    if kind is not None and kind not in EXPERIMENTS:
        diags.append(f"kind: unknown experiment {kind!r}; "
                     f"choose from {sorted(EXPERIMENTS)}")
    seed = cfg.get("seed", 0)
    if not isinstance(seed, int):
        diags.append("seed: must be an integer")
    for block in ("geometry", "operator", "scan"):
        if block in cfg and not isinstance(cfg[block], dict):
            diags.append(f"{block}: must be an object")
    for key, val in _walk_numbers(cfg):
        if key in ("m", "mass", "extent", "width", "circumference") and val is not None:
            if not val > 0:
                diags.append(f"{key}: must be positive, got {val}")
    scan = cfg.get("scan", {})
    for key in ("masses", "widths", "indices", "sizes"):
        if key in scan and (not isinstance(scan[key], list) or not scan[key]):
            diags.append(f"scan.{key}: must be a nonempty array")
    if diags:
        raise ConfigInvalid("config validation failed", diagnostics=diags)
    # round-trip check: serialization must be lossless
    rt = json.loads(json.dumps(cfg))
    if rt != cfg:
        raise ConfigInvalid("config does not round-trip through JSON",
                            diagnostics=["non-serializable values present"])
    return cfg


def _walk_numbers(tree, prefix=""):
    if isinstance(tree, dict):
        for k, v in tree.items():
            if isinstance(v, (dict, list)):
                yield from _walk_numbers(v, prefix + k + ".")
            elif isinstance(v, (int, float)):
                yield k, v


def config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "dwlab experiment configuration",
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"type": "string"},
        "seed": {"type": "integer"},
        "geometry": {"type": "object"},
        "operator": {"type": "object"},
        "scan": {"type": "object"},
        "output": {"type": "string"},
        "workers": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": True,
}

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "dwlab experiment result",
    "type": "object",
    "required": ["artifact_version", "config_hash", "kind", "config",
                 "derived", "ledger", "timings"],
    "properties": {
        "artifact_version": {"type": "string"},
        "config_hash": {"type": "string"},
        "kind": {"type": "string"},
        "config": {"type": "object"},
        "derived": {"type": "object"},
        "tables": {"type": "object"},
        "ledger": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "passed", "residual"],
                "properties": {
                    "name": {"type": "string"},
                    "passed": {"type": "boolean"},
                    "residual": {"type": "number"},
                },
            },
        },
        "timings": {"type": "object"},
    },
    "additionalProperties": True,
}


# -- experiments ----------------------------------------------------------------


@experiment("jr", "single-wall line operator: unique exact zero mode",
            "a sharp wall binds exactly one zero mode of definite chirality "
            "decaying at the mass rate")
def run_jr(cfg, ledger, workers):
    geo = cfg.get("geometry", {})
    opc = cfg.get("operator", {})
    n = int(geo.get("n_sites", 512))
    extent = float(geo.get("extent", 40.0))
    boundary = geo.get("boundary", "dirichlet")
    m = float(opc.get("m", 1.0))
    walls = opc.get("walls", [0.0])
    lat = Lattice1D(n, extent, boundary)
    prof = step_profile_1d(lat, walls)
    op = build_jackiw_rebbi_line(lat, m, prof, scheme=opc.get("scheme"))
    ledger.operator_invariants("jr", op)
    spec = eigen(op, want_vectors=True)
    i0 = int(np.argmin(np.abs(spec.eigenvalues)))
    lam0 = float(spec.eigenvalues[i0])
    v0 = spec.eigenvectors[:, i0]
    chirality = float(np.real(v0.conj() @ (op.grading * v0)))
    gap = spectral_gap_check(spec, -0.9 * m, 0.9 * m, whitelist_zero=True)
    loc = mode_localization(spec, i0, lat, dof_coords=op.dof_coords, walls=walls)
    ledger.check("jr.zero_mode_small", abs(lam0) < 1e-6, abs(lam0))
    ledger.check("jr.window_clear", gap.gap_holds, len(gap.eigenvalues_inside))
    ledger.check("jr.chirality_negative", abs(chirality + 1.0) < 1e-6,
                 abs(chirality + 1.0))
    ledger.check("jr.decay_rate", abs(loc["fitted_decay_rate"] - m) <= 0.02 * m,
                 abs(loc["fitted_decay_rate"] - m))
    derived = {"zero_eigenvalue": lam0, "chirality": chirality,
               "decay_rate": loc["fitted_decay_rate"], "fit_r2": loc["fit_r2"],
               "n_in_window": len(gap.eigenvalues_inside)}
    tables = {
        "spectrum": {"index": list(range(spec.n)),
                     "eigenvalue": [float(x) for x in spec.eigenvalues]},
        "zero_mode_profile": {"coordinate": [float(x) for x in loc["coordinates"]],
                              "amplitude": [float(x) for x in loc["amplitude"]]},
        "wall_profile": {"coordinate": [float(x) for x in lat.site_coords],
                         "kappa": [float(x) for x in prof.samples]},
    }
    return derived, tables


@experiment("gap-scan", "mass scan of the walled torus spectrum near zero",
            "beyond a finite mass the walled spectrum clears the window set "
            "by half the boundary gap")
def run_gap_scan(cfg, ledger, workers):
    geo = cfg.get("geometry", {})
    opc = cfg.get("operator", {})
    scan = cfg.get("scan", {})
    lat = TorusLattice2D(int(geo.get("n_x", 16)), int(geo.get("n_y", 16)))
    hol = float(opc.get("holonomy", 0.3))
    q = int(opc.get("charge", 1))
    window = tuple(opc.get("window", (lat.cut_a + 2, lat.cut_a + 6)))
    gauge = make_gauge_flux(lat, q, ("localized", window), holonomy=hol)
    base = build_torus_dirac(lat, gauge, "wilson",
                             wilson_r=float(opc.get("wilson_r", 1.0)))
    ledger.operator_invariants("torus", base)
    lam_a = (2 * np.pi / lat.extent_y) * min(hol % 1, 1 - hol % 1)
    step = step_profile_torus(lat)
    masses = [float(v) for v in scan.get("masses",
                                         np.geomspace(0.005, 1.6, 15).tolist())]

    def point(m):
        spec = eigen(apply_domain_wall(base, m, step))
        rep = spectral_gap_check(spec, -lam_a / 2, lam_a / 2)
        return {"m": m, "gap_holds": rep.gap_holds,
                "n_inside": len(rep.eigenvalues_inside),
                "min_abs_eig": float(np.min(np.abs(spec.eigenvalues)))}

    rows = list(_pool_map(point, masses, workers))
    m_star = None
    for i, row in enumerate(rows):
        if row["gap_holds"] and all(r["gap_holds"] for r in rows[i:]):
            m_star = row["m"]
            break
    ledger.check("gap.m_star_found", m_star is not None)
    if m_star is not None:
        ledger.check("gap.persists_above_m_star",
                     all(r["gap_holds"] for r in rows if r["m"] >= m_star))
    derived = {"lambda_boundary": lam_a, "m_star": m_star,
               "n_failing": sum(not r["gap_holds"] for r in rows)}
    tables = {"scan": _columns(rows)}
    return derived, tables


@experiment("as-eta", "index versus sign-sum difference on closed geometries",
            "the chirality-trace index equals half the difference of the "
            "sign sums of the two constant-mass deformations, exactly")
def run_as_eta(cfg, ledger, workers):
    opc = cfg.get("operator", {})
    scan = cfg.get("scan", {})
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    count = int(opc.get("count", 50))
    dim_max = int(opc.get("dim_max", 64))
    masses = [float(v) for v in scan.get("masses", [0.1, 1.0, 10.0])]
    rows = []
    all_equal = True
    for trial in range(count):
        p = int(rng.integers(2, dim_max // 2))
        q = int(rng.integers(2, dim_max // 2))
        rank = int(rng.integers(0, min(p, q) + 1))
        d = random_chiral_operator(rng, p, q, rank)
        for m in masses:
            rep = as_eta_identity_check(d, m)
            rows.append({"trial": trial, "dim": p + q, "index": rep["lhs"],
                         "m": m, "rhs": rep["rhs"], "equal": rep["equal"]})
            all_equal &= rep["equal"]
    ledger.check("as_eta.all_equal", all_equal)
    if bool(opc.get("include_torus", True)):
        lat = TorusLattice2D(16, 16)
        gauge = make_gauge_flux(lat, 0, "uniform",
                                holonomy=float(opc.get("holonomy", 0.3)))
        d = build_torus_dirac(lat, gauge, "spectral_chiral")
        ledger.operator_invariants("torus_chiral", d)
        rep = as_eta_identity_check(d, masses[0])
        ledger.check("as_eta.torus_equal",
                     rep["equal"] and rep["lhs"] == 0)
    derived = {"checks": len(rows), "all_equal": all_equal}
    return derived, {"identity": _columns(rows)}


@experiment("product", "index of the doubled cylinder extension",
            "extending a graded operator over a walled axis flips its index "
            "and keeps zero isolated in the gap window")
def run_product(cfg, ledger, workers):
    scan = cfg.get("scan", {})
    opc = cfg.get("operator", {})
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    indices = [int(k) for k in scan.get("indices", [-2, -1, 0, 1, 2, -2, -1, 0, 1, 2])]
    m = float(opc.get("m", 1.0))
    n_s = int(opc.get("n_s", 128))
    extent = float(opc.get("s_extent", 32.0))
    lat_s = Lattice1D(n_s, extent, "dirichlet")
    sprof = step_profile_1d(lat_s, [0.0])
    rows = []
    ok = True
    sign_consistent = True
    for k in indices:
        p = 5 + max(k, 0)
        q = 5 + max(-k, 0)
        d = random_chiral_operator(rng, p, q, rank=min(p, q), sval_range=(0.8, 2.0))
        cyl = build_cylinder_extension(d, m, sprof, lat_s)
        spec = eigen(cyl, want_vectors=True, k_lowest=abs(k) + 6)
        res = chiral_index(cyl, k_lowest=abs(k) + 6)
        evs = np.sort(np.abs(spec.eigenvalues))
        s_min = min(m, 0.8)
        delta = 0.15 * s_min
        inside = evs[(evs > 1e-7) & (evs < s_min - delta)]
        rows.append({"k": k, "cyl_index": res.index,
                     "first_nonzero": float(evs[abs(k)]) if abs(k) < evs.size else None,
                     "window_clear": inside.size == 0})
        ok &= abs(res.index) == abs(k) and inside.size == 0
        sign_consistent &= res.index == -k
    ledger.check("product.magnitude_and_gap", ok)
    ledger.check("product.sign_consistent", sign_consistent)
    derived = {"cases": len(indices), "sign": -1 if sign_consistent else None}
    return derived, {"cases": _columns(rows)}


@experiment("aps-index", "constrained-kernel boundary index of the inner half",
            "the kernel of the half-space operator under the spectral boundary "
            "condition carries exactly the enclosed flux")
def run_aps_index(cfg, ledger, workers):
    from .aps import aps_index, positive_spectral_projection
    from .operators import build_aps_extended_operator
    from .operators.graded import GradedOperator as GO
    geo = cfg.get("geometry", {})
    opc = cfg.get("operator", {})
    lat = TorusLattice2D(int(geo.get("n_x", 16)), int(geo.get("n_y", 16)))
    hol = float(opc.get("holonomy", 0.3))
    q = int(opc.get("charge", 1))
    window = tuple(opc.get("window", (lat.cut_a + 2, lat.cut_a + 6)))
    gauge = make_gauge_flux(lat, q, ("localized", window), holonomy=hol)
    cols = int(opc.get("extension_columns", 40))
    rows = []
    values = set()
    for ext_cols in (cols, cols + 12):
        op, meta = build_aps_extended_operator(lat, gauge, ext_cols)
        ledger.operator_invariants(f"aps_ext_{ext_cols}", op)
        setup = positive_spectral_projection(GO(meta["ring_left"],
                                                geometry_tag={"kind": "ring"}))
        res = aps_index(op, setup, meta=meta)
        rows.append({"extension_columns": ext_cols, "index": res.index,
                     "lambda_boundary": setup.lambda_boundary})
        values.add(res.index)
    ledger.check("aps.extension_invariant", len(values) == 1)
    ledger.check("aps.equals_charge", values == {q})
    derived = {"aps_index": rows[0]["index"], "charge": q}
    return derived, {"runs": _columns(rows)}


@experiment("main-theorem", "boundary index versus the wall eta difference",
            "the half-space boundary index equals half the difference of the "
            "walled and uniformly-massive sign sums on an integer plateau")
def run_main_theorem(cfg, ledger, workers):
    geo = cfg.get("geometry", {})
    opc = cfg.get("operator", {})
    scan = cfg.get("scan", {})
    lat = TorusLattice2D(int(geo.get("n_x", 16)), int(geo.get("n_y", 16)))
    hol = float(opc.get("holonomy", 0.3))
    q = int(opc.get("charge", 1))
    window = tuple(opc.get("window", (lat.cut_a + 2, lat.cut_a + 6)))
    gauge = make_gauge_flux(lat, q, ("localized", window), holonomy=hol)
    masses = [float(v) for v in scan.get("masses", [0.4, 0.55, 0.75, 1.0, 1.3])]
    widths = [float(v) for v in scan.get("widths", [4.2, 2.1])]
    rep = main_theorem_check(
        lat, gauge, masses, widths=widths,
        level_plus=float(opc.get("level_plus", 1.0)),
        level_minus=float(opc.get("level_minus", -1.0)))
    ledger.check("main.plateau_found", rep.plateau_found)
    ledger.check("main.identity", rep.rhs == rep.aps_index,
                 abs(rep.rhs - rep.aps_index))
    rows = [{"m": row["m"],
             **{f"rhs_w{w}": row["rhs"][w] for w in row["rhs"]}}
            for row in rep.scan]
    derived = {"aps_index": rep.aps_index, "rhs": rep.rhs,
               "plateau_start": rep.plateau_start,
               "lambda_boundary": rep.parameters["lambda_boundary"]}
    return derived, {"plateau": _columns(rows)}


@experiment("excision", "low-eigenvalue counts of two geometries sharing a wall region",
            "with a certified gap and heavy mass, the low-lying counts of two "
            "operators agreeing near the walls coincide")
def run_excision(cfg, ledger, workers):
    opc = cfg.get("operator", {})
    kind = opc.get("pair", "line_line")
    inst = make_wall_excision_instance(
        kind, m=float(opc.get("m", 6.0)),
        n_sites=opc.get("n_sites"), extent=opc.get("extent"),
        transition_width=opc.get("transition_width"),
        wilson_r=opc.get("wilson_r"))
    rep = excision_count_compare(inst)
    ledger.check("excision.gap_certified", rep.gap_certified)
    ledger.check("excision.mass_bound", inst.m ** 2 > rep.mass_bound,
                 rep.mass_bound)
    ledger.check("excision.counts_equal", rep.equal,
                 abs(rep.count_L - rep.count_Lp))
    derived = {"count_L": rep.count_L, "count_Lp": rep.count_Lp,
               "equal": rep.equal, **rep.constants}
    return derived, {"constants": _columns([rep.constants])}


@experiment("smoothing", "sign-sum invariance under wall mollification",
            "mollified walls of different widths give identical sign sums once "
            "the levels are reached")
def run_smoothing(cfg, ledger, workers):
    geo = cfg.get("geometry", {})
    opc = cfg.get("operator", {})
    scan = cfg.get("scan", {})
    lat = TorusLattice2D(int(geo.get("n_x", 16)), int(geo.get("n_y", 16)))
    hol = float(opc.get("holonomy", 0.3))
    q = int(opc.get("charge", 1))
    window = tuple(opc.get("window", (lat.cut_a + 2, lat.cut_a + 6)))
    gauge = make_gauge_flux(lat, q, ("localized", window), holonomy=hol)
    base = build_torus_dirac(lat, gauge, "wilson")
    step = step_profile_torus(lat)
    masses = [float(v) for v in scan.get("masses", [0.55, 0.75, 1.0])]
    width = float(scan.get("width", 4.2))
    rows = []
    all_equal = True
    for m in masses:
        etas = {}
        for w in (width, width / 2.0):
            prof, l2 = smooth_wall_profile(step, w)
            etas[w] = eta_of_operator(apply_domain_wall(base, m, prof)).value
        equal = len(set(etas.values())) == 1
        all_equal &= equal
        rows.append({"m": m, **{f"eta_w{w}": v for w, v in etas.items()},
                     "equal": equal})
    ledger.check("smoothing.etas_equal", all_equal)
    derived = {"masses": masses, "width": width, "all_equal": all_equal}
    return derived, {"scan": _columns(rows)}


# -- plumbing --------------------------------------------------------------------


def _columns(rows):
    if not rows:
        return {}
    keys = list(rows[0].keys())
    return {k: [row.get(k) for row in rows] for k in keys}


def _pool_map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_experiment(cfg: dict, out_root: Path, workers: int = 1) -> tuple[dict, Path]:
    validate_config(cfg)
    kind = cfg["kind"]
    chash = config_hash(cfg)
    out_dir = _fresh_dir(out_root / f"{kind}-{chash}")
    ledger = Ledger()
    timings = {}
    t0 = time.perf_counter()
    derived, tables = EXPERIMENTS[kind]["run"](cfg, ledger, workers)
    timings["run_seconds"] = time.perf_counter() - t0

    result = {
        "artifact_version": __version__,
        "config_hash": chash,
        "kind": kind,
        "config": cfg,
        "derived": derived,
        "tables": {},
        "ledger": ledger.entries,
        "timings": timings,
        "passed": ledger.all_passed(),
    }
    for name, cols in tables.items():
        path = out_dir / f"{name}.csv"
        _write_csv(path, cols)
        result["tables"][name] = path.name
    (out_dir / "result.json").write_text(json.dumps(result, indent=2, default=_json_default))
    return result, out_dir


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_csv(path: Path, cols: dict):
    import csv as _csv
    keys = list(cols.keys())
    n = max((len(v) for v in cols.values()), default=0)
    with path.open("w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(keys)
        for i in range(n):
            writer.writerow([cols[k][i] if i < len(cols[k]) else "" for k in keys])


def _fresh_dir(base: Path) -> Path:
    """One directory per run; existing results are never overwritten."""
    path = base
    counter = 1
    while path.exists():
        counter += 1
        path = base.parent / f"{base.name}__{counter}"
    path.mkdir(parents=True)
    return path


# -- entry points ------------------------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigInvalid(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"config is not valid JSON: {exc}")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dwlab",
        description="Run spectral-asymmetry and boundary-index verifications.")
    sub = parser.add_subparsers(dest="command", required=True)

    for kind, meta in sorted(EXPERIMENTS.items()):
        p = sub.add_parser(kind, help=meta["doc"])
        p.add_argument("--config", help="JSON config file (defaults are built in)")
        p.add_argument("--out", default="runs", help="output root directory")
        p.add_argument("--workers", type=int, default=1,
                       help="worker pool size for scan points")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("validate", help="validate a config file and exit")
    p.add_argument("--config", required=True)

    sub.add_parser("schema", help="print the config and result JSON schemas")
    sub.add_parser("list-experiments", help="print the experiment catalog")

    args = parser.parse_args(argv)

    if args.command == "schema":
        print(json.dumps({"config": CONFIG_SCHEMA, "result": RESULT_SCHEMA}, indent=2))
        return 0
    if args.command == "list-experiments":
        catalog = [{"kind": k, "doc": v["doc"], "claim": v["claim"]}
                   for k, v in sorted(EXPERIMENTS.items())]
        print(json.dumps(catalog, indent=2))
        return 0

    try:
        if args.command == "validate":
            validate_config(_load_config(args.config))
            print("config OK")
            return 0
        cfg = _load_config(args.config) if args.config else {"kind": args.command}
        cfg.setdefault("kind", args.command)
        if cfg["kind"] != args.command:
            raise ConfigInvalid(
                f"config kind {cfg['kind']!r} does not match subcommand {args.command!r}")
        if args.seed is not None:
            cfg["seed"] = args.seed
        cfg.setdefault("seed", 0)
        result, out_dir = run_experiment(cfg, Path(args.out), workers=args.workers)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        for d in exc.diagnostics:
            print(f"  - {d}", file=sys.stderr)
        return 2
    except DWLabError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return 1

    for entry in result["ledger"]:
        status = "pass" if entry["passed"] else "FAIL"
        print(f"[{status}] {entry['name']} (residual {entry['residual']:.3e})")
    print(f"result written to {out_dir}")
    return 0 if result["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
