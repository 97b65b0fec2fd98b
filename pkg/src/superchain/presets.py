"""Named chains with default sizes and hand-written Bethe equations.

Each graded preset carries the Bethe equations for its algebra written out
factor by factor, independently of the general residual in :mod:`bethe`.
The two codings are compared by :func:`cross_check_preset`. Commonly
quoted versions of these tables carry a handful of typos; they are kept as
``literal`` overrides so :func:`printed_divergence` can report how far they
drift from the general equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bethe import RootSet, bethe_residual_general
from .chain import ChainSpec, weight_lambda
from .graded import GradedSpace
from .rmatrix import Family

__all__ = [
    "PRESET_NAMES",
    "Preset",
    "preset",
    "specialized_residual",
    "cross_check_preset",
    "printed_divergence",
    "DivergenceReport",
    "random_offshell",
]

PRESET_NAMES = ("gl2", "gl11", "uq-gl2", "uq-gl11", "gl21", "uq-gl21", "gl22", "uq-gl22", "gl44", "uq-gl44")

DEFAULT_HBAR = 1.0
DEFAULT_Q = 1.3
# generic points; rational chains take the first L, trigonometric ones likewise
_RATIONAL_POINTS = (0.1, -0.4, 0.3 + 0.2j, -0.15 - 0.35j, 0.45 + 0.05j, -0.3 + 0.4j, 0.2 - 0.25j)
_TRIG_POINTS = (1.1, 0.8, 0.9 + 0.3j, 1.2 - 0.2j, 0.7 + 0.1j, 1.05 + 0.4j, 0.95 - 0.35j)

_ALGEBRA = {
    "gl2": (2, 0, True),
    "gl11": (1, 1, True),
    "uq-gl2": (2, 0, False),
    "uq-gl11": (1, 1, False),
    "gl21": (2, 1, True),
    "uq-gl21": (2, 1, False),
    "gl22": (2, 2, True),
    "uq-gl22": (2, 2, False),
    "gl44": (4, 4, True),
    "uq-gl44": (4, 4, False),
}

_DEFAULT_COUNTS = {
    "gl2": (1,),
    "gl11": (1,),
    "uq-gl2": (1,),
    "uq-gl11": (1,),
    "gl21": (1, 0),
    "uq-gl21": (1, 1),
    "gl22": (1, 0, 0),
    "uq-gl22": (1, 1, 0),
    "gl44": (1, 0, 0, 0, 0, 0, 0),
    "uq-gl44": (1, 0, 0, 0, 0, 0, 0),
}


# One factor of a hand-written equation: (neighbour, function). The neighbour
# is "lower", "self" or "upper"; the function takes (x, u_j) with x the other
# root and returns the factor.
Factor = tuple[str, Callable[[complex, complex], complex]]


def _rational_factors(h: complex) -> dict[str, Callable[[complex, complex], complex]]:
    return {
        "self_even": lambda x, u: (x - u - h) / (x - u + h),
        "self_odd": lambda x, u: (x - u + h) / (x - u - h),
        "upper_even": lambda x, u: (x - u) / (x - u - h),
        "upper_odd": lambda x, u: (x - u) / (x - u + h),
        "lower_even": lambda x, u: (u - x - h) / (u - x),
        "lower_odd": lambda x, u: (u - x + h) / (u - x),
    }


def _trig_factors(q: complex) -> dict[str, Callable[[complex, complex], complex]]:
    qi = 1 / q
    return {
        "self_even": lambda x, u: (q * x**2 - qi * u**2) / (qi * x**2 - q * u**2),
        "self_odd": lambda x, u: (qi * x**2 - q * u**2) / (q * x**2 - qi * u**2),
        "upper_even": lambda x, u: (x**2 - u**2) / (q * x**2 - qi * u**2),
        "upper_odd": lambda x, u: (x**2 - u**2) / (qi * x**2 - q * u**2),
        "lower_even": lambda x, u: (q * u**2 - qi * x**2) / (u**2 - x**2),
        "lower_odd": lambda x, u: (qi * u**2 - q * x**2) / (u**2 - x**2),
    }


def _level_table(m: int, n: int) -> list[tuple[str, ...]]:
    """Factor names per level in the distinguished grading.

    Levels below ``m`` are even, level ``m`` is the fermionic node with no
    self-interaction, levels above are odd.
    """
    K = m + n - 1
    rows = []
    for k in range(1, K + 1):
        if k < m:
            row = ("lower_even", "self_even", "upper_even")
        elif k == m:
            row = ("lower_even", "upper_odd")
        else:
            row = ("lower_odd", "self_odd", "upper_odd")
        rows.append(row)
    return rows


# Literal typos of the quoted tables relative to the level table above,
# keyed by (preset, level). ``None`` marks a printed factor that mixes indices
# of different levels; it is evaluated in its consistent form.
_LITERAL_OVERRIDES: dict[tuple[str, int], dict[str, str | None]] = {
    ("gl22", 3): {"lower_odd": "lower_even"},
    ("uq-gl22", 3): {"lower_odd": "lower_even", "self_odd": "self_even"},
    ("uq-gl44", 2): {"lower_even": None},
    ("uq-gl44", 3): {"lower_even": None},
    ("uq-gl44", 7): {"self_odd": None},
}

_PRINTED_NOTES = {
    "gl22": ["level 3: the lower-level factor is printed with -hbar; the general equations give +hbar"],
    "uq-gl22": ["level 3: both products are printed in their even-level form; the general equations give the odd-level form"],
    "uq-gl44": [
        "levels 2, 3: the lower-level factor's denominator mixes roots of levels k+1 and k; evaluated as the level k-1 form",
        "level 7: the self-interaction factor mixes roots of levels 6 and 7; evaluated with level 7 roots",
    ],
    "gl44": ["level 7: the left-hand side is printed as Lambda_8/Lambda_k; read as Lambda_8/Lambda_7"],
}


@dataclass(frozen=True)
class Preset:
    """A ready-made chain with default excitation counts.

    ``specialized`` is None for rank-one presets, whose equations coincide
    with the general form symbol for symbol.
    """

    name: str
    spec: ChainSpec
    default_counts: tuple[int, ...]
    specialized: Callable[[ChainSpec, RootSet], np.ndarray] | None = None
    notes: tuple[str, ...] = field(default=())


def preset(name: str, L: int | None = None, inhomogeneities: Sequence[complex] | None = None,
           hbar: complex | None = None, q: complex | None = None) -> Preset:
    """Build a named preset.

    Defaults: ``hbar = 1``, ``q = 1.3``, ``L = 2`` (``L = 1`` for the
    eight-dimensional ``gl44`` sites). ``gl2`` is homogeneous with all
    inhomogeneities zero; the others take generic points, rational
    ``0.1, -0.4, 0.3+0.2i, ...`` and trigonometric ``1.1, 0.8, 0.9+0.3i, ...``.
    """
    if name not in _ALGEBRA:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    m, n, rational = _ALGEBRA[name]
    space = GradedSpace(m, n)
    if rational:
        kind = "rational-super" if n else "rational"
        family = Family(kind, space, hbar=DEFAULT_HBAR if hbar is None else hbar)
    else:
        kind = "trig-super" if n else "trig"
        family = Family(kind, space, q=DEFAULT_Q if q is None else q)
    if inhomogeneities is None:
        if L is None:
            L = 1 if m + n > 4 else 2
        inhomogeneities = _default_points(name, rational, L)
    elif L is not None and L != len(inhomogeneities):
        raise ValueError(f"L = {L} but {len(inhomogeneities)} inhomogeneities given")
    spec = ChainSpec(family, tuple(inhomogeneities))
    specialized = specialized_residual if n > 0 and m + n > 2 else None
    return Preset(name, spec, _DEFAULT_COUNTS[name], specialized, tuple(_PRINTED_NOTES.get(name, ())))


def _default_points(name: str, rational: bool, L: int) -> tuple[complex, ...]:
    if L < 1:
        raise ValueError("L must be at least 1")
    if name == "gl2":
        return (0.0,) * L
    pts = _RATIONAL_POINTS if rational else _TRIG_POINTS
    if L <= len(pts):
        return pts[:L]
    rng = np.random.default_rng(L)
    extra = rng.normal(size=L - len(pts)) + 1j * rng.normal(size=L - len(pts))
    if not rational:
        extra = np.exp(0.3 * extra)
    return tuple(pts) + tuple(complex(z) for z in extra)


def _hand_written(spec: ChainSpec, roots: RootSet, literal_key: str | None, printed_sign: bool) -> np.ndarray:
    space = spec.space
    fam = spec.family
    funcs = _rational_factors(fam.param) if fam.is_rational else _trig_factors(fam.param)
    table = _level_table(space.m, space.n)
    lam = weight_lambda(spec)
    lv = roots.levels
    K = len(lv)
    if K != space.dim - 1:
        raise ValueError("root set does not match the algebra")
    out = []
    for k in range(1, K + 1):
        row = list(table[k - 1])
        if literal_key is not None:
            over = _LITERAL_OVERRIDES.get((literal_key, k), {})
            row = [over.get(name) or name for name in row]
        mine = lv[k - 1]
        lower = lv[k - 2] if k > 1 else ()
        upper = lv[k] if k < K else ()
        sign = -1.0 if printed_sign else 1.0
        for j, uj in enumerate(mine):
            rhs = sign + 0j
            for name in row:
                fn = funcs[name]
                if name.startswith("lower"):
                    for x in lower:
                        rhs *= fn(x, uj)
                elif name.startswith("self"):
                    for i, x in enumerate(mine):
                        if i != j:
                            rhs *= fn(x, uj)
                else:
                    for x in upper:
                        rhs *= fn(x, uj)
            out.append(lam(k + 1, uj) / lam(k, uj) - rhs)
    return np.array(out, dtype=complex)


def specialized_residual(spec: ChainSpec, roots: RootSet) -> np.ndarray:
    """Hand-written Bethe equations in the distinguished grading.

    Same ordering and normalization as
    :func:`superchain.bethe.bethe_residual_general`.
    """
    return _hand_written(spec, roots, None, printed_sign=False)


def random_offshell(spec: ChainSpec, counts: Sequence[int], rng: np.random.Generator) -> RootSet:
    """Random generic roots (rational: unit disk around 0, trig: annulus near 1)."""
    total = int(sum(counts))
    z = rng.normal(size=total) + 1j * rng.normal(size=total)
    if not spec.family.is_rational:
        z = np.exp(0.3 * z)
    return RootSet.from_flat(list(z), counts)


def _trial_counts(space: GradedSpace, rng: np.random.Generator) -> list[int]:
    return [int(c) for c in rng.integers(0, 3, size=space.dim - 1)]


def cross_check_preset(name: str, trials: int = 50, rng_seed: int = 0) -> float:
    """Max of ``|specialized - general|`` over random off-shell root sets.

    Returns 0 for presets without a specialized form.
    """
    p = preset(name)
    if p.specialized is None:
        return 0.0
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(trials):
        counts = _trial_counts(p.spec.space, rng)
        roots = random_offshell(p.spec, counts, rng)
        a = p.specialized(p.spec, roots)
        b = bethe_residual_general(p.spec, roots)
        if a.size:
            worst = max(worst, float(np.max(np.abs(a - b) / (1 + np.abs(b)))))
    return worst


@dataclass(frozen=True)
class DivergenceReport:
    name: str
    sign_only: float
    factors_only: float
    notes: tuple[str, ...]


def printed_divergence(name: str, trials: int = 20, rng_seed: int = 0) -> DivergenceReport:
    """How far the quoted tables drift from the general equations.

    ``sign_only`` uses the printed overall sign ``-1`` with otherwise correct
    factors; ``factors_only`` keeps the correct sign and applies the printed
    factor typos. Both are maxima of relative discrepancies over random
    off-shell roots with two roots per level.
    """
    p = preset(name)
    if p.specialized is None:
        return DivergenceReport(name, 0.0, 0.0, p.notes)
    rng = np.random.default_rng(rng_seed)
    sign_only = factors = 0.0
    counts = [2] * (p.spec.space.dim - 1)
    for _ in range(trials):
        roots = random_offshell(p.spec, counts, rng)
        ref = bethe_residual_general(p.spec, roots)
        s = _hand_written(p.spec, roots, None, printed_sign=True)
        t = _hand_written(p.spec, roots, name, printed_sign=False)
        sign_only = max(sign_only, float(np.max(np.abs(s - ref) / (1 + np.abs(ref)))))
        factors = max(factors, float(np.max(np.abs(t - ref) / (1 + np.abs(ref)))))
    return DivergenceReport(name, sign_only, factors, p.notes)
