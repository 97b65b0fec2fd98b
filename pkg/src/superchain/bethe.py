"""Nested Bethe equations, the transfer-matrix eigenvalue and a root solver.

For a chain with weights ``Lambda_k`` the equations at level ``k`` read::

    Lambda_{k+1}(u_j)/Lambda_k(u_j) =
        (-1)^(M_k - 1) prod_{i} a_k(u_j, w_i)/b(u_j, w_i)          w = level k-1
                      prod_{i != j} a_k(u_i, u_j)/a_{k+1}(u_j, u_i)
                      prod_{i} b(x_i, u_j)/a_{k+1}(x_i, u_j)         x = level k+1

The overall sign ``(-1)^(M_k - 1)`` is the one under which on-shell vectors
are transfer-matrix eigenvectors; see the decisions ledger for the
comparison with other normalizations in the literature.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .chain import ChainSpec, weight_lambda
from .rmatrix import SingularParameterError, structure

__all__ = [
    "RootSet",
    "SolverConfig",
    "SingularConfigurationError",
    "bethe_residual_general",
    "bethe_residual_distinguished",
    "bethe_residual_cleared",
    "eigenvalue_lambda",
    "solve_bethe",
    "analyticity_check",
    "is_singular",
    "check_feasible",
]


class SingularConfigurationError(SingularParameterError):
    """A root collides with another root or an inhomogeneity."""


@dataclass(frozen=True)
class RootSet:
    """Bethe roots grouped by nesting level (level 1 first)."""

    levels: tuple[tuple[complex, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(complex(x) for x in lvl) for lvl in self.levels))

    @classmethod
    def empty(cls, nlevels: int) -> "RootSet":
        return cls(((),) * nlevels)

    @classmethod
    def from_flat(cls, flat: Sequence[complex], counts: Sequence[int]) -> "RootSet":
        out, pos = [], 0
        for c in counts:
            out.append(tuple(flat[pos:pos + c]))
            pos += c
        return cls(tuple(out))

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(lvl) for lvl in self.levels)

    def flat(self) -> np.ndarray:
        return np.array([x for lvl in self.levels for x in lvl], dtype=complex)

    def canonical(self, multiplicative: bool = False) -> "RootSet":
        """Sort each level by (real, imag); optionally fold ``u -> -u``.

        Trigonometric equations are invariant under flipping the sign of any
        root, so with ``multiplicative=True`` each root is moved to the
        half-plane ``Re u > 0`` (or ``Re u = 0, Im u > 0``).
        """
        levels = []
        for lvl in self.levels:
            vals = [_fold(x) if multiplicative else x for x in lvl]
            levels.append(tuple(sorted(vals, key=lambda z: (round(z.real, 12), round(z.imag, 12)))))
        return RootSet(tuple(levels))

    def distance(self, other: "RootSet", multiplicative: bool = False) -> float:
        """Largest root mismatch after canonical ordering."""
        a = self.canonical(multiplicative)
        b = other.canonical(multiplicative)
        if a.counts != b.counts:
            return float("inf")
        best = 0.0
        for la, lb in zip(a.levels, b.levels):
            if not la:
                continue
            # multisets: minimise over matchings (levels are small)
            best = max(best, min(max(abs(x - y) for x, y in zip(la, perm)) for perm in itertools.permutations(lb)))
        return best


def _fold(z: complex) -> complex:
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        z = -z
    return complex(z.real + 0.0, z.imag + 0.0)


@dataclass(frozen=True)
class SolverConfig:
    seeds: int = 64
    seed_radius: float = 2.0
    max_iterations: int = 200
    residual_tol: float = 1e-10
    dedupe_tol: float = 1e-8
    rng_seed: int = 0
    reject_continuum: bool = True

    def __post_init__(self):
        if self.seeds < 0 or self.seed_radius <= 0 or self.max_iterations <= 0:
            raise ValueError("solver settings must be positive")
        if self.residual_tol <= 0 or self.dedupe_tol <= 0:
            raise ValueError("tolerances must be positive")


def _check_counts(spec: ChainSpec, roots: RootSet) -> None:
    if len(roots.levels) != spec.space.dim - 1:
        raise ValueError(f"expected {spec.space.dim - 1} root levels, got {len(roots.levels)}")


def _div(num: complex, den: complex, what: str, scale: float = 1.0) -> complex:
    if abs(den) <= 1e-13 * max(scale, 1.0):
        raise SingularConfigurationError(f"vanishing denominator {what}")
    return num / den


def bethe_residual_general(spec: ChainSpec, roots: RootSet) -> np.ndarray:
    """``LHS - RHS`` of the level-by-level Bethe equations, one per root."""
    _check_counts(spec, roots)
    sf = structure(spec.family)
    lam = weight_lambda(spec)
    lv = roots.levels
    K = len(lv)
    out = []
    for k in range(1, K + 1):
        mine = lv[k - 1]
        lower = lv[k - 2] if k > 1 else ()
        upper = lv[k] if k < K else ()
        for j, uj in enumerate(mine):
            rhs = (-1) ** (len(mine) - 1)
            for w in lower:
                rhs *= _div(sf.a(k, uj, w), sf.b(uj, w), f"b(u[{k}][{j + 1}], level-{k - 1} root)")
            for i, ui in enumerate(mine):
                if i != j:
                    rhs *= _div(sf.a(k, ui, uj), sf.a(k + 1, uj, ui), f"a_{k + 1}(u[{k}][{j + 1}], u[{k}][{i + 1}])")
            for x in upper:
                rhs *= _div(sf.b(x, uj), sf.a(k + 1, x, uj), f"a_{k + 1}(level-{k + 1} root, u[{k}][{j + 1}])")
            lk = lam(k, uj)
            lhs = _div(lam(k + 1, uj), lk, f"Lambda_{k}(u[{k}][{j + 1}])", abs(lam(k + 1, uj)))
            out.append(lhs - rhs)
    return np.array(out, dtype=complex)


def bethe_residual_distinguished(spec: ChainSpec, roots: RootSet) -> np.ndarray:
    """The same equations rewritten through the single function ``f``.

    Levels below the even/odd boundary ``m`` use ``f(u_j, u_i)``, the boundary
    level has no self-interaction, and levels above use the flipped
    arguments.
    """
    _check_counts(spec, roots)
    sf = structure(spec.family)
    f = sf.f
    lam = weight_lambda(spec)
    m = spec.space.m
    lv = roots.levels
    K = len(lv)
    out = []
    for k in range(1, K + 1):
        mine = lv[k - 1]
        lower = lv[k - 2] if k > 1 else ()
        upper = lv[k] if k < K else ()
        for j, uj in enumerate(mine):
            others = [ui for i, ui in enumerate(mine) if i != j]
            rhs = 1.0 + 0j
            if k < m:
                for w in lower:
                    rhs *= f(w, uj)
                for ui in others:
                    rhs *= f(uj, ui) / f(ui, uj)
                for x in upper:
                    rhs /= f(uj, x)
            elif k == m:
                for w in lower:
                    rhs *= f(w, uj)
                for x in upper:
                    rhs /= f(x, uj)
            else:
                for w in lower:
                    rhs *= f(uj, w)
                for ui in others:
                    rhs *= f(ui, uj) / f(uj, ui)
                for x in upper:
                    rhs /= f(x, uj)
            lhs = _div(lam(k + 1, uj), lam(k, uj), f"Lambda_{k}(u[{k}][{j + 1}])", abs(lam(k + 1, uj)))
            out.append(lhs - rhs)
    return np.array(out, dtype=complex)


def bethe_residual_cleared(spec: ChainSpec, roots: RootSet) -> np.ndarray:
    """Denominator-free form of the equations used internally by the solver.

    Each equation is multiplied through by its denominators and divided by
    ``prod_{i != j} b(u_j, u_i)``, which keeps Newton iterates away from
    coincident roots.
    """
    sf = structure(spec.family)
    lam = weight_lambda(spec)
    lv = roots.levels
    K = len(lv)
    out = []
    for k in range(1, K + 1):
        mine = lv[k - 1]
        lower = lv[k - 2] if k > 1 else ()
        upper = lv[k] if k < K else ()
        sign = (-1) ** (len(mine) - 1)
        for j, uj in enumerate(mine):
            left = lam(k + 1, uj)
            right = sign * lam(k, uj)
            for w in lower:
                left *= sf.b(uj, w)
                right *= sf.a(k, uj, w)
            for i, ui in enumerate(mine):
                if i != j:
                    left *= sf.a(k + 1, uj, ui)
                    right *= sf.a(k, ui, uj)
            for x in upper:
                left *= sf.a(k + 1, x, uj)
                right *= sf.b(x, uj)
            den = 1.0 + 0j
            for i, ui in enumerate(mine):
                if i != j:
                    den *= sf.b(uj, ui)
            out.append((left - right) / den if den != 0 else np.inf)
    return np.array(out, dtype=complex)


def eigenvalue_lambda(spec: ChainSpec, roots: RootSet, u: complex) -> complex:
    """Transfer-matrix eigenvalue predicted by the root set at ``u``.

    ``sum_k (-1)^[k] Lambda_k(u) prod f_k(w, u) prod f_k(u, x)`` with ``w`` the
    level k-1 roots and ``x`` the level k roots.
    """
    _check_counts(spec, roots)
    sf = structure(spec.family)
    lam = weight_lambda(spec)
    grades = spec.space.grades
    lv = roots.levels
    total = 0j
    for k in range(1, spec.space.dim + 1):
        term = (-1) ** grades[k - 1] * lam(k, u)
        if k > 1:
            for w in lv[k - 2]:
                term *= _div(sf.a(k, u, w), sf.b(u, w), "b(u, root): u sits on a root")
        if k <= len(lv):
            for x in lv[k - 1]:
                term *= _div(sf.a(k, x, u), sf.b(x, u), "b(root, u): u sits on a root")
        total += term
    return complex(total)


def is_singular(spec: ChainSpec, roots: RootSet, tol: float = 1e-8) -> bool:
    """Whether a root sits on an inhomogeneity or on a root of another level.

    Trigonometric chains also count the negatives, since their structure
    functions depend on ``u^2``. Either collision makes denominators of the
    vector constructors vanish.
    """
    mult = not spec.family.is_rational
    inh = list(spec.inhomogeneities)
    if mult:
        inh = inh + [-a for a in inh]
    if any(abs(x - a) < tol for x in roots.flat() for a in inh):
        return True
    for (k, lk), (l, ll) in itertools.combinations(enumerate(roots.levels), 2):
        for x in lk:
            for y in ll:
                if abs(x - y) < tol or (mult and abs(x + y) < tol):
                    return True
    return False


def _max_residual(spec: ChainSpec, roots: RootSet) -> float:
    try:
        res = bethe_residual_general(spec, roots)
    except (SingularParameterError, ZeroDivisionError, FloatingPointError):
        return float("inf")
    if res.size == 0:
        return 0.0
    if not np.all(np.isfinite(res)):
        return float("inf")
    return float(np.max(np.abs(res)))


def _distinct(spec: ChainSpec, roots: RootSet, tol: float) -> bool:
    mult = not spec.family.is_rational
    for lvl in roots.levels:
        for x, y in itertools.combinations(lvl, 2):
            if abs(x - y) < tol or (mult and abs(x + y) < tol):
                return False
    if mult and any(abs(x) < tol for x in roots.flat()):
        return False
    return True


def _jacobian(evaluate, x: np.ndarray, size: int) -> np.ndarray | None:
    """Central-difference complex Jacobian; None if a probe is singular."""
    jac = np.empty((size, x.size), dtype=complex)
    for c in range(x.size):
        h = 1e-7 * (1.0 + abs(x[c]))
        step = np.zeros(x.size, dtype=complex)
        step[c] = h
        rp, _ = evaluate(x + step)
        rm, _ = evaluate(x - step)
        if rp is None or rm is None:
            return None
        jac[:, c] = (rp - rm) / (2 * h)
    return jac


def _safe(fun: Callable[[np.ndarray], np.ndarray]):
    def evaluate(x):
        try:
            with np.errstate(all="ignore"):
                r = fun(x)
        except (ZeroDivisionError, SingularParameterError, FloatingPointError):
            return None, np.inf
        if not np.all(np.isfinite(r)):
            return None, np.inf
        return r, float(np.linalg.norm(r))
    return evaluate


def _on_continuum(cleared: Callable[[np.ndarray], np.ndarray], x: np.ndarray, rng_seed: int,
                  probes: int = 3, step: float = 1e-5) -> bool:
    """Whether ``x`` lies on a continuous family of solutions.

    Newton restarted from small random offsets returns to an isolated root
    (drift ~ round-off) but settles elsewhere on a continuum (drift ~ 1).
    """
    rng = np.random.default_rng(rng_seed)
    for _ in range(probes):
        d = step * (1 + np.abs(x)) * (rng.normal(size=x.size) + 1j * rng.normal(size=x.size))
        y = _newton(cleared, x + d, 50, 1e-13)
        if y is not None and np.linalg.norm(y - x) > 1e-3 * np.linalg.norm(d):
            return True
    return False


def _newton(fun: Callable[[np.ndarray], np.ndarray], x0: np.ndarray, max_iter: int, tol: float) -> np.ndarray | None:
    """Damped Newton with a central-difference complex Jacobian."""
    evaluate = _safe(fun)
    x = np.array(x0, dtype=complex)
    r, nrm = evaluate(x)
    if r is None:
        return None
    for _ in range(max_iter):
        if nrm < tol:
            return x
        jac = _jacobian(evaluate, x, r.size)
        if jac is None:
            return None
        dx = np.linalg.lstsq(jac, -r, rcond=None)[0]
        t = 1.0
        while t > 1e-6:
            xn = x + t * dx
            rn, nn = evaluate(xn)
            if rn is not None and nn < nrm:
                break
            t *= 0.5
        else:
            return None
        if np.linalg.norm(xn - x) < 1e-15 * (1 + np.linalg.norm(x)):
            x, r, nrm = xn, rn, nn
            break
        x, r, nrm = xn, rn, nn
    return x if nrm < tol else None


def _seeds(spec: ChainSpec, total: int, cfg: SolverConfig) -> np.ndarray:
    rng = np.random.default_rng(cfg.rng_seed)
    inh = np.array(spec.inhomogeneities)
    out = np.empty((cfg.seeds, total), dtype=complex)
    for s in range(cfg.seeds):
        radius = cfg.seed_radius * np.sqrt(rng.uniform(size=total))
        angle = rng.uniform(0, 2 * np.pi, size=total)
        disk = radius * np.exp(1j * angle)
        if spec.family.is_rational:
            out[s] = np.mean(inh) + disk
        else:
            centre = np.exp(np.mean(np.log(np.abs(inh))))
            # log-polar disk; the u -> -u symmetry lets the phase stay in (-pi/2, pi/2)
            out[s] = centre * np.exp(disk.real * 0.5) * np.exp(0.5j * disk.imag * np.pi / cfg.seed_radius)
    return out


def solve_bethe(spec: ChainSpec, counts: Sequence[int], cfg: SolverConfig | None = None) -> list[RootSet]:
    """Multi-start deflated Newton search for solutions with the given counts.

    Returned sets are canonical, satisfy every equation to ``residual_tol``,
    have pairwise distinct roots within each level and are free of
    duplicates. With ``reject_continuum`` points of continuous solution
    families are dropped; their Bethe vectors vanish.
    Completeness is not claimed.
    """
    cfg = cfg or SolverConfig()
    counts = [int(c) for c in counts]
    check_feasible(spec, counts)
    total = sum(counts)
    mult = not spec.family.is_rational
    if total == 0:
        return [RootSet.empty(len(counts))]
    found: list[RootSet] = []

    def cleared(x):
        return bethe_residual_cleared(spec, RootSet.from_flat(x, counts))

    def deflated(x):
        r = cleared(x)
        for sol in found:
            r = r * _deflation(x, sol, counts, mult)
        return r

    scale_tol = max(cfg.residual_tol * 1e-3, 1e-14)
    for seed in _seeds(spec, total, cfg):
        x = _newton(deflated, seed, cfg.max_iterations, scale_tol)
        if x is None:
            continue
        polished = _newton(cleared, x, 20, 1e-15)
        if polished is not None:
            x = polished
        cand = RootSet.from_flat([_snap(z) for z in x], counts).canonical(mult)
        if not _distinct(spec, cand, cfg.dedupe_tol):
            continue
        if _max_residual(spec, cand) >= cfg.residual_tol:
            continue
        if any(cand.distance(s, mult) < cfg.dedupe_tol for s in found):
            continue
        if cfg.reject_continuum and _on_continuum(cleared, np.array(cand.flat(), dtype=complex), cfg.rng_seed):
            continue
        found.append(cand)
    return sorted(found, key=lambda s: [(round(z.real, 10), round(z.imag, 10)) for z in s.flat()])


def _snap(z: complex, tol: float = 1e-13) -> complex:
    """Zero out round-off sized real or imaginary parts."""
    scale = tol * (1 + abs(z))
    re = 0.0 if abs(z.real) < scale else z.real
    im = 0.0 if abs(z.imag) < scale else z.imag
    return complex(re, im)


def check_feasible(spec: ChainSpec, counts: Sequence[int]) -> None:
    """Reject counts whose vectors vanish identically on fundamental sites.

    Occupation numbers ``L - M_1, M_1 - M_2, ..., M_{m+n-1}`` must be
    non-negative.
    """
    counts = list(counts)
    if len(counts) != spec.space.dim - 1 or any(c < 0 for c in counts):
        raise ValueError(f"counts must be {spec.space.dim - 1} non-negative integers")
    occ = [spec.L - (counts[0] if counts else 0)]
    occ += [counts[k] - counts[k + 1] for k in range(len(counts) - 1)]
    if any(o < 0 for o in occ):
        raise ValueError(f"counts {counts} need L >= M_1 >= M_2 >= ... on a chain of {spec.L} sites")


def _deflation(x: np.ndarray, sol: RootSet, counts: Sequence[int], mult: bool) -> float:
    """Shifted Farrell-type factor penalising every relabelling of ``sol``."""
    target = sol.levels
    pos = 0
    best = np.inf
    parts = []
    for c in counts:
        parts.append(x[pos:pos + c])
        pos += c
    options = []
    for lvl, mine in zip(target, parts):
        cand = []
        for perm in itertools.permutations(lvl):
            p = np.array(perm, dtype=complex)
            if mult:
                d = np.sum(np.minimum(np.abs(mine - p), np.abs(mine + p)) ** 2)
            else:
                d = np.sum(np.abs(mine - p) ** 2)
            cand.append(d)
        options.append(min(cand) if cand else 0.0)
    best = float(sum(options))
    return 1.0 + 1.0 / max(best, 1e-300)


def analyticity_check(spec: ChainSpec, roots: RootSet, level: int, j: int, npoints: int = 128) -> float:
    """Magnitude of the residue of the eigenvalue at the root ``u[level][j]``.

    The residue is the trapezoidal contour integral of ``Lambda(u)`` over a
    circle small enough to exclude every other potential pole.
    """
    _check_counts(spec, roots)
    centre = roots.levels[level - 1][j - 1]
    poles = [x for x in roots.flat() if x != centre]
    if not spec.family.is_rational:
        poles += [-x for x in roots.flat()] + [0j]
    gaps = [abs(centre - p) for p in poles]
    radius = 0.1 * (1 + abs(centre))
    if gaps:
        radius = min(radius, 0.25 * min(gaps))
    theta = 2 * np.pi * np.arange(npoints) / npoints
    pts = centre + radius * np.exp(1j * theta)
    vals = np.array([eigenvalue_lambda(spec, roots, p) for p in pts])
    residue = np.mean(vals * radius * np.exp(1j * theta))
    return float(abs(residue))
