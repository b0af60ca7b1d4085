"""Command-line front end: ``subthurston <command> --config <path> [--out <path>] [--csv <path>]``.

Every command writes one JSON document (stdout unless ``--out``) and, where a
convergence table exists, a CSV with columns ``n,value,error_bar,target,gap``.
Output is deterministic: keys are sorted, floats use ``repr`` and no
timestamps or host data are recorded. Computation is single threaded; the
``SUBTHURSTON_THREADS`` variable is accepted for compatibility and ignored.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from .combinatorics import (
    Subsystem,
    TileMatrix,
    check_structure,
    classify_matrix,
    limit_set_diagnostics,
    tile_matrix,
    tile_matrix_level,
    transitivity_report,
)
from .equilibrium import (
    entropy_estimate,
    equilibrium_state,
    gibbs_check,
    invariance_check,
    pressure_derivative_check,
)
from .errors import AssumptionViolation, BudgetExceeded, ConfigError, ConvergenceError, SubthurstonError
from .geometry import Colour, SplitPoint
from .potential import Potential, potential_from_config
from .statistics import (
    MarkovMeasure,
    ldp_empirical,
    ldp_rate_bound,
    markov_integral,
    mgf_pressure_check,
    preimage_integrals,
    rate_function,
)
from .transfer import pressure_via_operator, pressure_via_tiles, spectral_data

EXIT_OK, EXIT_BUDGET, EXIT_CONFIG, EXIT_ASSUMPTION = 0, 2, 3, 4

DEFAULT_BASEPOINT = {"face": "white", "x": "2/7", "y": "3/7"}

COMMANDS = ("describe", "tile-matrix", "check", "pressure", "spectral", "gibbs", "invariance",
            "derivative", "equidistribute", "mgf", "rate", "ldp")


def load_schema() -> dict:
    with resources.files("subthurston").joinpath("config.schema.json").open() as fh:
        return json.load(fh)


def validate_config(cfg) -> None:
    try:
        jsonschema.validate(cfg, load_schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {exc.message}") from None


class Experiment:
    """A validated configuration with its subsystem and potential built."""

    def __init__(self, cfg: dict):
        validate_config(cfg)
        self.cfg = cfg
        self.params = cfg.get("params", {})
        sub_cfg = cfg["subsystem"]
        self.preset = sub_cfg["preset"]
        s = cfg.get("map", {}).get("s")
        self.sub = None
        self.abstract = None
        try:
            if self.preset == "gasket":
                # no geometry: only the tile matrix of the abstract model
                middle = Colour.parse(sub_cfg.get("middle_colour_in_white_face", "black"))
                self.abstract = TileMatrix([[3, 0], [0, 3]] if middle == Colour.BLACK else [[0, 3], [3, 0]])
            elif self.preset == "full":
                self.sub = Subsystem.full(s or 3)
            elif self.preset == "carpet":
                self.sub = Subsystem.carpet(s or 3)
            elif self.preset == "same_colour":
                self.sub = Subsystem.same_colour(s or 3)
            elif self.preset == "two_fixed_tiles":
                self.sub = Subsystem.two_fixed_tiles(s or 4)
            else:
                if s is None or "tiles" not in sub_cfg:
                    raise ConfigError("custom subsystem needs map.s and subsystem.tiles")
                tiles = [(int(Colour.parse(f)), i, j) for f, i, j in sub_cfg["tiles"]]
                self.sub = Subsystem(s, tiles)
            self.phi = potential_from_config(cfg.get("potential", {"kind": "constant", "value": 0.0}))
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None

    def param(self, name, default):
        return self.params.get(name, default)

    def potential(self, name, default=None) -> Potential:
        if name in self.params:
            try:
                return potential_from_config(self.params[name])
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"params.{name}: {exc}") from None
        if default is None:
            raise ConfigError(f"params.{name} is required for this command")
        return default

    def basepoint(self) -> SplitPoint:
        bp = self.params.get("basepoint", DEFAULT_BASEPOINT)
        try:
            return SplitPoint(Colour.parse(bp["face"]), Fraction(str(bp["x"])), Fraction(str(bp["y"])))
        except ValueError as exc:
            raise ConfigError(f"params.basepoint: {exc}") from None

    def geometric(self) -> Subsystem:
        if self.sub is None:
            raise AssumptionViolation(f"preset {self.preset!r} has no geometric realisation")
        return self.sub

    def operator_subsystem(self) -> Subsystem:
        sub = self.geometric()
        sub.require_surjective()
        return sub

    def spectral(self, phi=None):
        return spectral_data(self.operator_subsystem(), self.phi if phi is None else phi,
                             self.param("depth", 5), self.param("tol", 1e-10),
                             self.param("max_iter", 100000))


def est(value, error_bar) -> dict:
    return {"value": value, "error_bar": error_bar}


def table_row(n, value, error_bar, target=None, gap=None) -> dict:
    if gap is None and target is not None and math.isfinite(value) and math.isfinite(target):
        gap = abs(value - target)
    return {"n": int(n), "value": value, "error_bar": error_bar, "target": target, "gap": gap}


def cmd_describe(ex: Experiment, args) -> dict:
    out = {"preset": ex.preset}
    if ex.abstract is not None:
        out["tile_matrix"] = ex.abstract.as_lists()
        out["classification"] = classify_matrix(ex.abstract)
        out["geometry"] = None
        return out
    sub = ex.sub
    out.update(sub.describe())
    out["map"] = {"s": sub.pmap.s, "degree": sub.pmap.degree, "expansion": est(float(sub.pmap.s), 0.0)}
    out["tile_matrix"] = tile_matrix(sub).as_lists()
    out["potential"] = ex.phi.to_config()
    if ex.phi.continuous:
        hd = ex.phi.holder_data()
        out["holder"] = {"alpha": hd.alpha, "seminorm": est(hd.seminorm, 0.0), "sup": est(hd.sup, 0.0)}
    return out


def cmd_tile_matrix(ex: Experiment, args) -> dict:
    level = args.level if args.level is not None else ex.param("n_max", 1)
    A = ex.abstract if ex.abstract is not None else tile_matrix(ex.sub)
    An = A.power(level)
    out = {"level": level, "tile_matrix": A.as_lists(), "power": An.as_lists(),
           "classification": classify_matrix(A),
           "colour_counts": list(An.colour_counts()), "position_counts": list(An.position_counts()),
           "error_bar": 0}
    if ex.sub is not None and ex.sub.n_tiles ** level <= 10 ** 6:
        out["enumeration_agrees"] = tile_matrix_level(ex.sub, level, "enumerate").as_lists() == An.as_lists()
    rows = [table_row(n, A.power(n).total(), 0, None) for n in range(1, level + 1)]
    return out, rows


def cmd_check(ex: Experiment, args) -> dict:
    sub = ex.geometric()
    max_level = ex.param("max_level", 6)
    rep = check_structure(sub, max_level)
    return {"structure": rep.as_dict(), "transitivity": transitivity_report(sub, max_level),
            "limit_set": limit_set_diagnostics(sub, ex.param("n_max", 8)), "surjective": sub.surjective,
            "error_bar": 0}


def cmd_pressure(ex: Experiment, args) -> dict:
    sub = ex.operator_subsystem()
    n_max = ex.param("n_max", 6)
    sp = ex.spectral()
    target = sp.pressure
    tiles = pressure_via_tiles(sub, ex.phi, n_max, ex.param("max_tiles", 10 ** 7))
    oper = pressure_via_operator(sub, ex.phi, ex.basepoint(), n_max)

    def rows(tab):
        return [table_row(r["n"], r["value"], r["error_bar"], target) for r in tab.rows()]

    out = {"spectral": est(target, sp.tol + sp.residual_right), "depth": sp.depth,
           "tiles": rows(tiles), "operator": rows(oper),
           "tiles_total": [float(v) for v in tiles.extra["value_total"]]}
    return out, out[ex.param("method", "tiles")]


def cmd_spectral(ex: Experiment, args) -> dict:
    sp = ex.spectral()
    u, m = sp.u.values, sp.m.weights
    out = sp.summary()
    out["pressure"] = est(sp.pressure, sp.tol)
    out["lambda"] = est(sp.lam, sp.tol * sp.lam)
    out["u"] = {"min": float(u.min()), "max": float(u.max()), "error_bar": sp.residual_right}
    out["m"] = {"face_mass": [sp.m.face_mass(c) for c in (0, 1)], "min": float(m.min()),
                "max": float(m.max()), "error_bar": sp.residual_left}
    return out


def cmd_gibbs(ex: Experiment, args) -> dict:
    state = equilibrium_state(ex.spectral())
    rep = gibbs_check(state, ex.param("n_levels", state.depth))
    out = {"rows": rep.rows(), "lower_bound": rep.lower_bound, "upper_bound": rep.upper_bound,
           "slope": est(rep.slope, rep.slope_tol), "midpoint_slope": rep.midpoint_slope,
           "within_bounds": rep.within_bounds, "stable": rep.stable,
           "entropy": entropy_estimate(state)}
    rows = [table_row(r["n"], r["mean_log_ratio"],
                      0.5 * math.log(r["max_ratio"] / r["min_ratio"]), None) for r in rep.rows()]
    return out, rows


def cmd_invariance(ex: Experiment, args) -> dict:
    state = equilibrium_state(ex.spectral())
    checks = [invariance_check(state, n) for n in range(1, state.depth + 1)]
    rows = [table_row(c["n"], c["max_defect"], c["tol"], 0.0) for c in checks]
    return {"checks": checks, "error_bar": checks[0]["tol"]}, rows


def cmd_derivative(ex: Experiment, args) -> dict:
    sub = ex.operator_subsystem()
    gamma = ex.potential("gamma")
    res = pressure_derivative_check(sub, ex.phi, gamma, ex.param("eps", 1e-3), ex.param("depth", 5),
                                    ex.param("richardson", False), ex.param("tol", 1e-12))
    rows = [table_row(res["depth"], res["finite_difference"], res["error_bar"], res["integral"])]
    return res, rows


def cmd_equidistribute(ex: Experiment, args) -> dict:
    sub = ex.operator_subsystem()
    g = ex.potential("g")
    sp = ex.spectral()
    ref = equilibrium_state(sp).integrate(g)
    hd = g.holder_data()
    quad = hd.seminorm * (math.sqrt(2.0) / 2.0 * sub.pmap.s ** (-sp.depth)) ** hd.alpha
    n_min = ex.param("n_min", 1)
    res = preimage_integrals(sub, ex.phi, g, ex.basepoint(), ex.param("n_max", 6))
    rows = [table_row(n, float(v), quad, ref) for n, v in zip(res["n"], res["birkhoff"]) if n >= n_min]
    plain = [table_row(n, float(v), quad, ref) for n, v in zip(res["n"], res["plain"]) if n >= n_min]
    return {"reference": est(ref, quad), "birkhoff": rows, "plain": plain}, rows


def cmd_mgf(ex: Experiment, args) -> dict:
    sub = ex.operator_subsystem()
    psi = ex.potential("psi")
    res = mgf_pressure_check(sub, ex.phi, psi, ex.param("n_max", 10), ex.param("depth", 5),
                             ex.param("tol", 1e-12))
    err = ex.param("tol", 1e-12)
    rows = [table_row(n, float(v), err, res["target"]) for n, v in zip(res["n"], res["value"])]
    direct = [table_row(n, float(v), err, res["target"]) for n, v in enumerate(res["direct"], 1)]
    return {"target": est(res["target"], 2 * err), "matrix": rows, "direct": direct}, rows


def cmd_rate(ex: Experiment, args) -> dict:
    sub = ex.operator_subsystem()
    if "seed" not in ex.params:
        raise ConfigError("params.seed is required for sampled operations")
    sp = ex.spectral()
    depth = ex.param("depth", 5)
    rng = np.random.default_rng(ex.params["seed"])
    n_chains = ex.param("n_chains", 10)
    family = [("uniform", MarkovMeasure.uniform(sub))]
    family += [(f"random_{k}", MarkovMeasure.random(sub, rng)) for k in range(n_chains)]
    family.append(("deterministic", MarkovMeasure.deterministic(sub, rng)))
    entries = []
    for name, mm in family:
        rep = rate_function(mm, ex.phi, sp.pressure, depth).as_dict()
        rep["name"] = name
        entries.append(rep)
    rows = [table_row(k, e["value"], e["error_bar"], 0.0) for k, e in enumerate(entries)]
    return {"pressure": est(sp.pressure, sp.tol), "measures": entries,
            "min_rate": est(min(e["value"] for e in entries), max(e["error_bar"] for e in entries))}, rows


def cmd_ldp(ex: Experiment, args) -> dict:
    sub = ex.operator_subsystem()
    if "seed" not in ex.params:
        raise ConfigError("params.seed is required for sampled operations")
    g = ex.potential("g")
    sp = ex.spectral()
    depth = ex.param("depth", 5)
    state = equilibrium_state(sp)
    a = ex.param("center", state.integrate(g) + 0.1)
    radii = ex.param("radii", [0.05])
    n_list = ex.param("n_list", [2, 4, 6])
    emp = ldp_empirical(sub, ex.phi, g, ex.basepoint(), a, radii, n_list)
    bounds = {r: ldp_rate_bound(sub, ex.phi, sp.pressure, g, a, r, ex.param("n_chains", 200),
                                ex.params["seed"], depth) for r in radii}
    _, err = markov_integral(MarkovMeasure.uniform(sub), ex.phi, depth)
    rows = []
    for e in emp:
        target = bounds[e["radius"]]["predicted_rate"]
        rows.append(table_row(e["n"], e["value"], err, target))
    return {"center": a, "empirical": emp, "rate_bounds": [bounds[r] for r in radii],
            "rows": rows}, rows


HANDLERS = {
    "describe": cmd_describe, "tile-matrix": cmd_tile_matrix, "check": cmd_check,
    "pressure": cmd_pressure, "spectral": cmd_spectral, "gibbs": cmd_gibbs,
    "invariance": cmd_invariance, "derivative": cmd_derivative,
    "equidistribute": cmd_equidistribute, "mgf": cmd_mgf, "rate": cmd_rate, "ldp": cmd_ldp,
}


def run(command: str, cfg: dict, level=None):
    """Run one command on a config dict; returns ``(document, csv_rows)``."""
    if command not in HANDLERS:
        raise ConfigError(f"unknown command {command!r}")
    ex = Experiment(cfg)
    res = HANDLERS[command](ex, argparse.Namespace(level=level))
    doc, rows = res if isinstance(res, tuple) else (res, None)
    return {"command": command, "status": "ok", "version": __version__, "result": doc}, rows


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(doc) -> str:
    return json.dumps(_clean(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def csv_text(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "value", "error_bar", "target", "gap"])
    for r in _clean(rows):
        writer.writerow(["" if r[k] is None else r[k] for k in ("n", "value", "error_bar", "target", "gap")])
    return buf.getvalue()


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subthurston", description="Subsystems of grid pillow maps.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON configuration file")
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.add_argument("--csv", help="write the convergence table here")
    p.add_argument("--level", type=int, help="power of the tile matrix (tile-matrix only)")
    p.add_argument("--version", action="version", version=__version__)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, rows = EXIT_OK, None
    try:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if args.level is not None and args.level < 1:
            raise ConfigError("--level must be positive")
        doc, rows = run(args.command, cfg, args.level)
    except SubthurstonError as exc:
        code = {BudgetExceeded: EXIT_BUDGET, ConvergenceError: EXIT_BUDGET, ConfigError: EXIT_CONFIG,
                AssumptionViolation: EXIT_ASSUMPTION}.get(type(exc), EXIT_ASSUMPTION)
        doc = {"command": args.command, "status": "error", "reason": exc.reason, "message": str(exc)}
    _emit(dumps(doc), args.out)
    if args.csv and rows is not None:
        _emit(csv_text(rows), args.csv)
    return code


if __name__ == "__main__":
    sys.exit(main())
