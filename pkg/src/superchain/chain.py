"""Closed chains of fundamental-representation sites.

The monodromy matrix lives on the factor list ``[aux, site_1, ..., site_L]``
and is the ordered product ``R_{a,1}(u, a_1) R_{a,2}(u, a_2) ... R_{a,L}(u, a_L)``
(site 1 leftmost). Generator blocks ``t_ij(u)`` are the quantum-space matrices
multiplying ``E_ij`` in the auxiliary factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graded import GradedSpace, Operator, embed_at, from_coefficients, identity, partial_supertrace, to_coefficients
from .rmatrix import Family, build_r, structure

__all__ = [
    "ChainSpec",
    "WeightFunctions",
    "site_factor",
    "build_monodromy",
    "extract_tij",
    "generator",
    "build_transfer",
    "weight_lambda",
    "vacuum",
    "cartan_eigenvalue",
    "cartan_operator",
    "validate_weights",
    "check_rtt",
]


@dataclass(frozen=True)
class ChainSpec:
    """A family together with the inhomogeneities of its L sites."""

    family: Family
    inhomogeneities: tuple[complex, ...]

    def __post_init__(self):
        inh = tuple(complex(a) for a in self.inhomogeneities)
        if len(inh) < 1:
            raise ValueError("a chain needs at least one site")
        if not self.family.is_rational and any(a == 0 for a in inh):
            raise ValueError("trigonometric inhomogeneities must be non-zero")
        object.__setattr__(self, "inhomogeneities", inh)

    @property
    def space(self) -> GradedSpace:
        return self.family.space

    @property
    def L(self) -> int:
        return len(self.inhomogeneities)

    @property
    def dim(self) -> int:
        return self.space.dim ** self.L

    @property
    def site_factors(self) -> tuple[GradedSpace, ...]:
        return (self.space,) * self.L


def site_factor(spec: ChainSpec, l: int, u: complex) -> Operator:
    """The two-factor matrix ``R(u, a_l)`` for the 1-based site ``l``."""
    if not 1 <= l <= spec.L:
        raise IndexError(f"site {l} outside 1..{spec.L}")
    return build_r(spec.family, u, spec.inhomogeneities[l - 1])


def build_monodromy(spec: ChainSpec, u: complex) -> Operator:
    factors = (spec.space,) * (spec.L + 1)
    mono = identity(factors)
    for l in range(1, spec.L + 1):
        mono = mono @ embed_at(site_factor(spec, l, u), factors, [1, l + 1])
    return mono


def extract_tij(mono: Operator, i: int, j: int) -> Operator:
    """The quantum-space block of ``mono`` multiplying ``E_ij`` in factor 1."""
    aux = mono.factors[0]
    aux._check_label(i)
    aux._check_label(j)
    rest = mono.factors[1:]
    d = aux.dim
    side = mono.matrix.shape[0] // d
    coef = to_coefficients(mono).reshape(d, side, d, side)
    grade = None
    if mono.grade is not None:
        grade = (mono.grade + aux.grade(i) + aux.grade(j)) % 2
    return from_coefficients(coef[i - 1, :, j - 1, :], rest, grade)


def generator(spec: ChainSpec, i: int, j: int, u: complex) -> np.ndarray:
    """Dense matrix of ``t_ij(u)`` on the chain."""
    return extract_tij(build_monodromy(spec, u), i, j).matrix


def build_transfer(spec: ChainSpec, u: complex) -> Operator:
    """Supertrace of the monodromy over the auxiliary factor."""
    return partial_supertrace(build_monodromy(spec, u), 1)


class WeightFunctions:
    """Vacuum eigenvalues ``Lambda_j(u)`` of the diagonal generators."""

    def __init__(self, spec: ChainSpec):
        self.spec = spec
        self._sf = structure(spec.family)

    def __call__(self, j: int, u: complex) -> complex:
        self.spec.space._check_label(j)
        sf = self._sf
        if j == 1:
            factors = [sf.a(1, u, a) for a in self.spec.inhomogeneities]
        else:
            factors = [sf.b(u, a) for a in self.spec.inhomogeneities]
        return complex(np.prod(factors))


def weight_lambda(spec: ChainSpec) -> WeightFunctions:
    return WeightFunctions(spec)


def vacuum(spec: ChainSpec) -> np.ndarray:
    """The highest-weight state ``e_1 (x) ... (x) e_1``."""
    omega = np.zeros(spec.dim, dtype=complex)
    omega[0] = 1.0
    return omega


def _pad_counts(spec: ChainSpec, counts: Sequence[int]) -> list[int]:
    d = spec.space.dim
    counts = list(counts)
    if len(counts) != d - 1:
        raise ValueError(f"expected {d - 1} excitation counts, got {len(counts)}")
    return [0] + counts + [0]


def cartan_eigenvalue(spec: ChainSpec, j: int, counts: Sequence[int]) -> complex:
    """Predicted eigenvalue of the j-th Cartan generator on a Bethe vector.

    Rational kinds: ``-(-1)^[j] hbar (M_{j-1} - M_j + L delta_{j1})``.
    Trigonometric kinds: ``q^{(1 - 2[j]) (M_{j-1} - M_j + L delta_{j1})}``,
    the eigenvalue of the site-wise product of ``q^{(1 - 2[j]) E_jj}``.
    """
    space = spec.space
    g = space.grade(j)
    padded = _pad_counts(spec, counts)
    occupation = padded[j - 1] - padded[j] + (spec.L if j == 1 else 0)
    fam = spec.family
    if fam.is_rational:
        return complex(-((-1) ** g) * fam.param * occupation)
    return complex(fam.param ** ((1 - 2 * g) * occupation))


def cartan_operator(spec: ChainSpec, j: int) -> np.ndarray:
    """Cartan generator whose eigenvalues :func:`cartan_eigenvalue` predicts.

    For rational kinds this is the first-order coefficient of ``t_jj(u)`` at
    large ``u``, ``-(-1)^[j] hbar sum_l E_jj^{(l)}``; for trigonometric kinds
    the group-like element ``q^{(1 - 2[j]) E_jj}`` on every site.
    """
    space = spec.space
    g = space.grade(j)
    d = space.dim
    occ = np.zeros(1)
    for _ in range(spec.L):
        occ = np.add.outer(occ, (np.arange(d) == j - 1).astype(float)).ravel()
    fam = spec.family
    if fam.is_rational:
        return np.diag(-((-1) ** g) * fam.param * occ).astype(complex)
    return np.diag(fam.param ** ((1 - 2 * g) * occ)).astype(complex)


_ETA_UNGRADED = (1, -1, 1j, -1j)


def validate_weights(space: GradedSpace, weights: Sequence[float], kind: str = "rational",
                     etas: Sequence[complex] | None = None) -> bool:
    """Whether ``weights`` label a finite-dimensional irreducible module.

    Consecutive differences must be non-negative integers, except across the
    even/odd boundary ``i = m`` of a graded space. For trigonometric kinds the
    optional ``etas`` must lie in ``{+-1, +-i}`` (non-graded) or ``{+-1}``
    (graded).
    """
    lam = list(weights)
    if len(lam) != space.dim:
        return False
    for i in range(1, space.dim):
        if space.n > 0 and i == space.m:
            continue
        diff = lam[i - 1] - lam[i]
        if diff < 0 or abs(diff - round(diff)) > 1e-12:
            return False
    if etas is not None and kind.startswith("trig"):
        allowed = (1, -1) if space.n > 0 else _ETA_UNGRADED
        if len(etas) != space.dim or any(min(abs(e - a) for a in allowed) > 1e-12 for e in etas):
            return False
    return True


def check_rtt(spec: ChainSpec, u: complex, v: complex) -> float:
    """Norm of ``R_12(u, v) T_1(u) T_2(v) - T_2(v) T_1(u) R_12(u, v)``."""
    L = spec.L
    space = spec.space
    factors = (space,) * (L + 2)
    quantum = list(range(3, L + 3))
    t1 = embed_at(build_monodromy(spec, u), factors, [1] + quantum)
    t2 = embed_at(build_monodromy(spec, v), factors, [2] + quantum)
    r12 = embed_at(build_r(spec.family, u, v), factors, [1, 2])
    lhs = r12 @ t1 @ t2
    rhs = t2 @ t1 @ r12
    return float(np.linalg.norm(lhs.matrix - rhs.matrix))
