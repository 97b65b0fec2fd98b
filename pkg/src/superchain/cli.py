"""Batch front-end: JSON job in, JSON or CSV report out.

Exit codes: 0 when every judged quantity passes, 1 when a task fails (the
report is still written), 2 for unreadable or invalid configurations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

import numpy as np

from .bethe import (RootSet, SingularConfigurationError, SolverConfig, analyticity_check, bethe_residual_general,
                    check_feasible, eigenvalue_lambda, is_singular, solve_bethe)
from .chain import ChainSpec, build_transfer, cartan_eigenvalue, cartan_operator, check_rtt
from .graded import GradedSpace
from .oracle import DEFAULT_CAP, check_commuting, match_eigenvalue, spectrum
from .presets import PRESET_NAMES, preset
from .rmatrix import KINDS, Family, SingularParameterError, check_unitarity, check_ybe
from .vectors import (MAX_SUPERTRACE_DIM, BetheVector, TooLargeError, phi_explicit, phi_supertrace,
                      proportionality_defect, shapovalov_defect, shapovalov_pairing)

__all__ = ["ConfigError", "JobConfig", "parse_config", "run", "emit_report", "main", "TASKS"]

VERSION = "0.1.0"
TASKS = ("check", "solve", "verify", "vector", "spectrum")

DEFAULT_TOLERANCES = {
    "residual": 1e-10,
    "eigenvector": 1e-8,
    "match": 1e-7,
    "analyticity": 1e-8,
    "cartan": 1e-9,
    "check": 1e-9,
    "proportionality": 1e-9,
    "orthogonality": 1e-8,
    "trace": 1e-9,
}

_TOP_KEYS = {"preset", "family", "L", "inhomogeneities", "hbar", "q", "counts", "solver", "tasks", "roots",
             "tolerances", "samples", "seed", "u0", "output", "format"}
_SOLVER_KEYS = {"seeds", "seed_radius", "max_iterations", "residual_tol", "dedupe_tol", "reject_continuum"}


class ConfigError(ValueError):
    """Invalid job description."""


@dataclass(frozen=True)
class JobConfig:
    spec: ChainSpec
    counts: tuple[int, ...]
    preset: str | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    tasks: tuple[str, ...] = ("solve", "verify")
    roots: tuple[RootSet, ...] | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    samples: int = 5
    seed: int = 0
    u0: complex | None = None
    output: str | None = None
    format: str = "json"


# ---------------------------------------------------------------- parsing

def _complex(value: Any, what: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"{what}: expected a number")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, dict) and set(value) <= {"re", "im"} and "re" in value:
        re, im = value["re"], value.get("im", 0.0)
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            return complex(re, im)
    raise ConfigError(f"{what}: expected a number or {{\"re\": .., \"im\": ..}}")


def _int(value: Any, what: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{what}: expected an integer >= {minimum}")
    return value


def _roots_from_json(value: Any, counts: Sequence[int] | None, nlevels: int) -> RootSet:
    if not isinstance(value, list):
        raise ConfigError("roots: each root set must be a list of {level, re, im} objects")
    levels: list[list[complex]] = [[] for _ in range(nlevels)]
    for item in value:
        if not isinstance(item, dict) or "level" not in item:
            raise ConfigError("roots: each root needs a level")
        lvl = _int(item["level"], "roots.level", 1)
        if lvl > nlevels:
            raise ConfigError(f"roots: level {lvl} exceeds {nlevels}")
        levels[lvl - 1].append(_complex({k: item[k] for k in ("re", "im") if k in item}, "roots"))
    rs = RootSet(tuple(tuple(l) for l in levels))
    if counts is not None and tuple(rs.counts) != tuple(counts):
        raise ConfigError(f"roots: counts {rs.counts} differ from the configured counts {tuple(counts)}")
    return rs


def parse_config(data: Any) -> JobConfig:
    """Validate a decoded JSON job description."""
    if not isinstance(data, dict):
        raise ConfigError("the configuration must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    L = _int(data["L"], "L", 1) if "L" in data else None
    inh = None
    if "inhomogeneities" in data:
        if not isinstance(data["inhomogeneities"], list) or not data["inhomogeneities"]:
            raise ConfigError("inhomogeneities: expected a non-empty list")
        inh = [_complex(a, "inhomogeneities") for a in data["inhomogeneities"]]
    hbar = _complex(data["hbar"], "hbar") if "hbar" in data else None
    q = _complex(data["q"], "q") if "q" in data else None
    name = data.get("preset")
    try:
        if name is not None:
            if "family" in data:
                raise ConfigError("give either preset or family, not both")
            if name not in PRESET_NAMES:
                raise ConfigError(f"unknown preset {name!r}; expected one of {list(PRESET_NAMES)}")
            p = preset(name, L=L, inhomogeneities=inh, hbar=hbar, q=q)
            spec, default_counts = p.spec, p.default_counts
        elif "family" in data:
            spec = _explicit_spec(data["family"], L, inh, hbar, q)
            default_counts = None
        else:
            raise ConfigError("either preset or family is required")
    except ConfigError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc)) from exc
    nlevels = spec.space.dim - 1
    if "counts" in data:
        if not isinstance(data["counts"], list):
            raise ConfigError("counts: expected a list")
        counts = tuple(_int(c, "counts") for c in data["counts"])
    elif default_counts is not None:
        counts = tuple(default_counts)
    else:
        raise ConfigError("counts are required with an explicit family")
    try:
        check_feasible(spec, counts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    seed = _int(data.get("seed", 0), "seed")
    solver = SolverConfig(rng_seed=seed)
    if "solver" in data:
        sv = data["solver"]
        if not isinstance(sv, dict) or set(sv) - _SOLVER_KEYS:
            raise ConfigError(f"solver: expected an object with keys among {sorted(_SOLVER_KEYS)}")
        kw = {}
        for key in ("seeds", "max_iterations"):
            if key in sv:
                kw[key] = _int(sv[key], f"solver.{key}")
        for key in ("seed_radius", "residual_tol", "dedupe_tol"):
            if key in sv:
                val = sv[key]
                if isinstance(val, bool) or not isinstance(val, (int, float)) or val <= 0:
                    raise ConfigError(f"solver.{key}: expected a positive number")
                kw[key] = float(val)
        if "reject_continuum" in sv:
            if not isinstance(sv["reject_continuum"], bool):
                raise ConfigError("solver.reject_continuum: expected true or false")
            kw["reject_continuum"] = sv["reject_continuum"]
        solver = _solver_config(solver, kw)
    tasks = data.get("tasks", ["solve", "verify"])
    if not isinstance(tasks, list) or not tasks or any(t not in TASKS for t in tasks):
        raise ConfigError(f"tasks: expected a non-empty list drawn from {list(TASKS)}")
    tol = dict(DEFAULT_TOLERANCES)
    tol["residual"] = solver.residual_tol
    if "tolerances" in data:
        tv = data["tolerances"]
        if not isinstance(tv, dict) or set(tv) - set(DEFAULT_TOLERANCES):
            raise ConfigError(f"tolerances: keys must be among {sorted(DEFAULT_TOLERANCES)}")
        for key, val in tv.items():
            if isinstance(val, bool) or not isinstance(val, (int, float)) or val <= 0:
                raise ConfigError(f"tolerances.{key}: expected a positive number")
            tol[key] = float(val)
    roots = None
    if "roots" in data:
        if not isinstance(data["roots"], list):
            raise ConfigError("roots: expected a list of root sets")
        roots = tuple(_roots_from_json(r, counts, nlevels) for r in data["roots"])
    fmt = data.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError("format: expected json or csv")
    output = data.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output: expected a path")
    return JobConfig(
        spec=spec,
        counts=counts,
        preset=name,
        solver=solver,
        tasks=tuple(t for t in TASKS if t in tasks),
        roots=roots,
        tolerances=tol,
        samples=_int(data.get("samples", 5), "samples", 1),
        seed=seed,
        u0=_complex(data["u0"], "u0") if "u0" in data else None,
        output=output,
        format=fmt,
    )


def _solver_config(base: SolverConfig, kw: dict) -> SolverConfig:
    try:
        return replace(base, **kw)
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}") from exc


def _explicit_spec(fam: Any, L, inh, hbar, q) -> ChainSpec:
    if not isinstance(fam, dict) or set(fam) - {"kind", "m", "n", "hbar", "q"}:
        raise ConfigError("family: expected an object with kind, m, n and hbar or q")
    kind = fam.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"family.kind: expected one of {list(KINDS)}")
    space = GradedSpace(_int(fam.get("m"), "family.m"), _int(fam.get("n", 0), "family.n"))
    if hbar is None and "hbar" in fam:
        hbar = _complex(fam["hbar"], "family.hbar")
    if q is None and "q" in fam:
        q = _complex(fam["q"], "family.q")
    family = Family(kind, space, hbar=hbar, q=q)
    if inh is None:
        raise ConfigError("inhomogeneities are required with an explicit family")
    if L is not None and L != len(inh):
        raise ConfigError(f"L = {L} but {len(inh)} inhomogeneities given")
    return ChainSpec(family, tuple(inh))


# ---------------------------------------------------------------- helpers

def _num(x: float) -> float | None:
    x = float(x)
    if not math.isfinite(x):
        return None
    return x + 0.0


def _cx(z: complex) -> dict:
    z = complex(z)
    return {"re": _num(z.real), "im": _num(z.imag)}


def _judged(value: float, tol: float, below: bool = True) -> dict:
    ok = bool(math.isfinite(value) and (value < tol if below else value > tol))
    return {"value": _num(value), "tol": tol, "pass": ok}


def _roots_json(rs: RootSet) -> list[dict]:
    out = []
    for k, lvl in enumerate(rs.levels, start=1):
        for z in lvl:
            out.append({"level": k, **_cx(z)})
    return out


def _residual_table(spec: ChainSpec, rs: RootSet) -> tuple[list[dict], float]:
    try:
        res = bethe_residual_general(spec, rs)
    except (SingularParameterError, ZeroDivisionError) as exc:
        return [{"error": str(exc)}], float("inf")
    rows = []
    i = 0
    for k, lvl in enumerate(rs.levels, start=1):
        for j in range(len(lvl)):
            rows.append({"level": k, "index": j + 1, **_cx(res[i]), "abs": _num(abs(res[i]))})
            i += 1
    worst = float(np.max(np.abs(res))) if res.size else 0.0
    return rows, worst


def _sample_points(spec: ChainSpec, n: int, seed: int) -> list[complex]:
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1, 1, size=n) + 1j * rng.uniform(-1, 1, size=n)
    if spec.family.is_rational:
        return [complex(u) for u in z]
    return [complex(np.exp(0.5 * u)) for u in z]


def _vector(spec: ChainSpec, rs: RootSet) -> BetheVector:
    try:
        return phi_supertrace(spec, rs, MAX_SUPERTRACE_DIM)
    except TooLargeError:
        vec = phi_explicit(spec, rs, reduced=True)
        if vec is None:
            raise
        return vec


# ---------------------------------------------------------------- tasks

def _task_check(cfg: JobConfig) -> dict:
    spec = cfg.spec
    tol = cfg.tolerances["check"]
    rng = np.random.default_rng(cfg.seed)
    fam = spec.family

    def draw():
        z = complex(rng.normal(), rng.normal())
        return z if fam.is_rational else complex(np.exp(0.3 * z))

    ybe = max(check_ybe(fam, draw(), draw(), draw()) for _ in range(3))
    unit = max(check_unitarity(fam, draw(), draw()) for _ in range(3))
    rtt = check_rtt(spec, draw(), draw()) if spec.space.dim ** (spec.L + 2) <= 8 ** 4 else None
    comm = check_commuting(spec, draw(), draw()) if spec.dim <= DEFAULT_CAP else None
    out = {"ybe": _judged(ybe, tol), "unitarity": _judged(unit, tol)}
    out["rtt"] = _judged(rtt, tol) if rtt is not None else {"skipped": "too large"}
    out["commuting"] = _judged(comm, tol) if comm is not None else {"skipped": "too large"}
    return out


def _task_solve(cfg: JobConfig) -> tuple[dict, list[RootSet]]:
    sols = solve_bethe(cfg.spec, cfg.counts, cfg.solver)
    tol = cfg.tolerances["residual"]
    items = []
    for rs in sols:
        rows, worst = _residual_table(cfg.spec, rs)
        items.append({
            "roots": _roots_json(rs),
            "residuals": rows,
            "max_residual": _judged(worst, tol),
            "singular": is_singular(cfg.spec, rs),
        })
    s = cfg.solver
    settings = {"seeds": s.seeds, "seed_radius": s.seed_radius, "max_iterations": s.max_iterations,
                "residual_tol": s.residual_tol, "dedupe_tol": s.dedupe_tol, "reject_continuum": s.reject_continuum,
                "rng_seed": s.rng_seed}
    return {"settings": settings, "count": len(items), "solutions": items}, sols


def _task_verify(cfg: JobConfig, sets: list[RootSet]) -> dict:
    spec = cfg.spec
    tol = cfg.tolerances
    points = _sample_points(spec, cfg.samples, cfg.seed + 1)
    spectra = [spectrum(spec, u0) for u0 in points] if spec.dim <= DEFAULT_CAP else None
    results = []
    for idx, rs in enumerate(sets):
        rows, worst = _residual_table(spec, rs)
        entry: dict[str, Any] = {"set": idx, "roots": _roots_json(rs), "residuals": rows,
                                 "max_residual": _judged(worst, tol["residual"])}
        if is_singular(spec, rs):
            entry["skipped"] = "singular root set"
            results.append(entry)
            continue
        analytic = 0.0
        for k, lvl in enumerate(rs.levels, start=1):
            for j in range(1, len(lvl) + 1):
                analytic = max(analytic, analyticity_check(spec, rs, k, j))
        entry["analyticity"] = _judged(analytic, tol["analyticity"])
        try:
            vec = _vector(spec, rs)
        except (TooLargeError, SingularConfigurationError) as exc:
            entry["eigenvector"] = {"skipped": str(exc)}
            results.append(entry)
            continue
        entry["constructor"] = vec.constructor
        if vec.norm < 1e-12:
            entry["eigenvector"] = {"skipped": "vector vanishes", "norm": _num(vec.norm), "pass": False}
            results.append(entry)
            continue
        samples = []
        worst_vec = 0.0
        for n, u0 in enumerate(points):
            lam = eigenvalue_lambda(spec, rs, u0)
            t = build_transfer(spec, u0).matrix
            res = float(np.linalg.norm(t @ vec.state - lam * vec.state) / vec.norm)
            worst_vec = max(worst_vec, res)
            item = {"u0": _cx(u0), "eigenvalue": _cx(lam)}
            if spectra is not None:
                item["matched"] = match_eigenvalue(spectra[n], lam, tol["match"])
            samples.append(item)
        entry["eigenvector"] = _judged(worst_vec, tol["eigenvector"])
        entry["samples"] = samples
        if spectra is not None:
            entry["oracle_match"] = {"tol": tol["match"], "pass": all(s["matched"] for s in samples)}
        results.append(entry)
    return {"count": len(results), "results": results}


def _task_vector(cfg: JobConfig, sets: list[RootSet]) -> dict:
    spec = cfg.spec
    tol = cfg.tolerances
    results = []
    vectors: list[BetheVector] = []
    for idx, rs in enumerate(sets):
        entry: dict[str, Any] = {"set": idx}
        try:
            vec = _vector(spec, rs)
        except (TooLargeError, SingularConfigurationError) as exc:
            entry["skipped"] = str(exc)
            results.append(entry)
            continue
        entry["constructor"] = vec.constructor
        entry["norm"] = _num(vec.norm)
        entry["state"] = [_cx(z) for z in vec.state] if spec.dim <= 64 else None
        try:
            explicit = phi_explicit(spec, rs, reduced=False)
        except SingularConfigurationError as exc:
            explicit = None
            entry["explicit"] = {"skipped": str(exc)}
        if explicit is not None and explicit is not vec:
            entry["explicit"] = {"constructor": explicit.constructor,
                                 "defect": _judged(proportionality_defect(vec, explicit), tol["proportionality"])}
        cartan = 0.0
        for j in range(1, spec.space.dim + 1):
            h = cartan_operator(spec, j)
            pred = cartan_eigenvalue(spec, j, rs.counts)
            if vec.norm > 0:
                cartan = max(cartan, float(np.linalg.norm(h @ vec.state - pred * vec.state) / vec.norm))
        entry["cartan"] = _judged(cartan, tol["cartan"])
        results.append(entry)
        if vec.norm > 1e-12:
            vectors.append(vec)
    out: dict[str, Any] = {"count": len(results), "results": results}
    if len(vectors) >= 2:
        defect = shapovalov_defect(spec)
        pairs = []
        if defect < 1e-10:
            mult = not spec.family.is_rational
            for a in range(len(vectors)):
                for b in range(a + 1, len(vectors)):
                    value = shapovalov_pairing(spec, vectors[a], vectors[b]).value
                    same = vectors[a].roots.distance(vectors[b].roots, mult) < 1e-8
                    scale = max(1.0, vectors[a].norm * vectors[b].norm)
                    pairs.append({"pair": [a, b], "value": _cx(value),
                                  **({} if same else {"orthogonal": _judged(abs(value) / scale, tol["orthogonality"])})})
        out["pairing"] = {"adjoint_defect": _num(defect), "verified": defect < 1e-10, "pairs": pairs}
    return out


def _task_spectrum(cfg: JobConfig, sets: list[RootSet]) -> dict:
    spec = cfg.spec
    if spec.dim > DEFAULT_CAP:
        return {"skipped": f"dimension {spec.dim} exceeds {DEFAULT_CAP}"}
    u0 = cfg.u0 if cfg.u0 is not None else (2.0 if spec.family.is_rational else 1.5)
    rep = spectrum(spec, u0)
    vals = sorted(rep.eigenvalues, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    out: dict[str, Any] = {
        "u0": _cx(u0),
        "eigenvalues": [_cx(z) for z in vals],
        "diagonalizable": rep.diagonalizable,
        "trace": _judged(rep.trace_defect / (1 + max(abs(z) for z in vals)), cfg.tolerances["trace"]),
    }
    matches = []
    for idx, rs in enumerate(sets):
        if is_singular(spec, rs):
            continue
        try:
            lam = eigenvalue_lambda(spec, rs, u0)
        except (SingularParameterError, ZeroDivisionError):
            continue
        matches.append({"set": idx, "eigenvalue": _cx(lam), "tol": cfg.tolerances["match"],
                        "pass": match_eigenvalue(rep, lam, cfg.tolerances["match"])})
    out["matches"] = matches
    return out


def _collect_pass(node: Any) -> bool:
    if isinstance(node, dict):
        if node.get("pass") is False:
            return False
        return all(_collect_pass(v) for v in node.values())
    if isinstance(node, list):
        return all(_collect_pass(v) for v in node)
    return True


def run(cfg: JobConfig, timings: bool = False) -> dict:
    """Execute the configured tasks in the fixed order and build the report."""
    spec = cfg.spec
    fam = spec.family
    chain = {"kind": fam.kind, "m": spec.space.m, "n": spec.space.n, "L": spec.L,
             ("hbar" if fam.is_rational else "q"): _cx(fam.param),
             "inhomogeneities": [_cx(a) for a in spec.inhomogeneities]}
    report: dict[str, Any] = {"metadata": {"program": "superchain", "version": VERSION, "preset": cfg.preset,
                                           "chain": chain, "counts": list(cfg.counts), "seed": cfg.seed,
                                           "tasks": list(cfg.tasks), "tolerances": cfg.tolerances}}
    clock: dict[str, float] = {}
    sets: list[RootSet] = list(cfg.roots) if cfg.roots is not None else []
    for task in cfg.tasks:
        start = time.perf_counter()
        if task == "check":
            report["check"] = _task_check(cfg)
        elif task == "solve":
            report["solve"], found = _task_solve(cfg)
            if cfg.roots is None:
                sets = found
        elif task == "verify":
            report["verify"] = _task_verify(cfg, sets) if sets else {"skipped": "no root sets"}
        elif task == "vector":
            report["vector"] = _task_vector(cfg, sets) if sets else {"skipped": "no root sets"}
        elif task == "spectrum":
            report["spectrum"] = _task_spectrum(cfg, sets)
        clock[task] = time.perf_counter() - start
    report["passed"] = _collect_pass({k: v for k, v in report.items() if k != "metadata"})
    if timings:
        report["timings"] = clock
    return report


# ---------------------------------------------------------------- output

def emit_report(report: dict, path: str | None, fmt: str = "json") -> str:
    """Serialize ``report``; write it to ``path`` (stdout when None)."""
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    elif fmt == "csv":
        text = _csv(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def _csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["set", "level", "index", "re", "im", "residual"])
    source = report.get("verify", {}).get("results") or report.get("solve", {}).get("solutions") or []
    for s, item in enumerate(source):
        residuals = {(r["level"], r["index"]): r.get("abs") for r in item.get("residuals", []) if "level" in r}
        counter: dict[int, int] = {}
        for root in item["roots"]:
            lvl = root["level"]
            counter[lvl] = counter.get(lvl, 0) + 1
            writer.writerow([s, lvl, counter[lvl], repr(root["re"]), repr(root["im"]),
                             repr(residuals.get((lvl, counter[lvl])))])
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superchain", description=__doc__.splitlines()[0])
    parser.add_argument("command", nargs="?", default="run", choices=("run",) + TASKS,
                        help="run the configured tasks, or a single task")
    parser.add_argument("--config", required=True, help="JSON job file ('-' for stdin)")
    parser.add_argument("--out", help="report path (default: config output, else stdout)")
    parser.add_argument("--format", choices=("json", "csv"), help="report format")
    parser.add_argument("--tol", type=float, help="Bethe residual tolerance for solving and verification")
    parser.add_argument("--seed", type=int, help="random seed for solver starts and sample points")
    parser.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.config == "-":
            raw = sys.stdin.read()
        else:
            with open(args.config, encoding="utf-8") as fh:
                raw = fh.read()
        data = json.loads(raw)
        if isinstance(data, dict):
            if args.seed is not None:
                data["seed"] = args.seed
            if args.tol is not None:
                data.setdefault("solver", {})
                if isinstance(data["solver"], dict):
                    data["solver"]["residual_tol"] = args.tol
        cfg = parse_config(data)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"superchain: invalid configuration: {exc}", file=sys.stderr)
        return 2
    if args.command != "run":
        tasks = [args.command]
        if args.command in ("verify", "vector") and cfg.roots is None:
            tasks = ["solve"] + tasks
        cfg = replace(cfg, tasks=tuple(tasks))
    report = run(cfg, timings=args.timings)
    fmt = args.format or cfg.format
    try:
        emit_report(report, args.out or cfg.output, fmt)
    except OSError as exc:
        print(f"superchain: cannot write report: {exc}", file=sys.stderr)
        return 1
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
