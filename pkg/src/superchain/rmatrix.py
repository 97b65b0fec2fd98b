"""R-matrix families and their scalar structure functions.

Four families are supported: the rational (Yangian) R-matrix with parameter
``hbar`` and the trigonometric (quantum affine) R-matrix with parameter ``q``,
each in a non-graded (``n = 0``) and a graded (``n > 0``) version. All share
the form::

    R(u, v) = sum_a a_a E_aa (x) E_aa + b sum_{a != b} E_aa (x) E_bb
              + sum_{a != b} c_ab E_ab (x) E_ba

Trigonometric families use multiplicative spectral parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .graded import GradedSpace, Operator, embed_at, frobenius_distance, from_coefficients, identity, permutation_operator

__all__ = [
    "KINDS",
    "Family",
    "StructureFunctions",
    "SingularParameterError",
    "structure",
    "build_r",
    "build_reduced_r",
    "build_normalized_r",
    "check_ybe",
    "check_unitarity",
]

KINDS = ("rational", "rational-super", "trig", "trig-super")


class SingularParameterError(ZeroDivisionError):
    """Raised when a formula would divide by a vanishing structure function."""


@dataclass(frozen=True)
class Family:
    """An R-matrix family on the superspace ``space``.

    Rational kinds use ``hbar``; trigonometric kinds use ``q``. The ``-super``
    kinds are required exactly when ``space.n > 0``.
    """

    kind: str
    space: GradedSpace
    hbar: complex | None = None
    q: complex | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {KINDS}")
        graded = self.kind.endswith("-super")
        if graded != (self.space.n > 0):
            raise ValueError(f"kind {self.kind!r} is incompatible with (m, n) = ({self.space.m}, {self.space.n})")
        if self.is_rational:
            if self.hbar is None or self.hbar == 0:
                raise ValueError("rational families need a non-zero hbar")
        else:
            if self.q is None or self.q == 0 or self.q in (1, -1):
                raise ValueError("trigonometric families need q outside {0, 1, -1}")

    @property
    def is_rational(self) -> bool:
        return self.kind.startswith("rational")

    @property
    def param(self) -> complex:
        return complex(self.hbar if self.is_rational else self.q)


class StructureFunctions:
    """Scalar functions entering the R-matrix and the Bethe ansatz.

    Basis labels (``k``, ``x``, ``y``) are 1-based.
    """

    def __init__(self, family: Family):
        self.family = family
        self._grades = family.space.grades
        self._rational = family.is_rational
        self._p = family.param

    def _g(self, k: int) -> int:
        return self._grades[k - 1]

    def a(self, k: int, u: complex, v: complex) -> complex:
        """Diagonal weight a_k(u, v)."""
        g = self._g(k)
        if self._rational:
            return u - v - (-1) ** g * self._p
        q = self._p
        return (u / v) * q ** (1 - 2 * g) - (v / u) * q ** (-1 + 2 * g)

    def b(self, u: complex, v: complex) -> complex:
        if self._rational:
            return u - v
        return u / v - v / u

    def c(self, x: int, y: int, u: complex, v: complex) -> complex:
        """Coefficient of E_xy (x) E_yx for x != y."""
        if x == y:
            raise ValueError("c is defined for distinct labels only")
        sgn = (-1) ** self._g(y)
        if self._rational:
            return -sgn * self._p
        q = self._p
        return (q - 1 / q) * (u / v) ** (1 if y > x else -1) * sgn

    def zeta(self, u: complex, v: complex) -> complex:
        """Unitarity factor a_1(u, v) a_1(v, u)."""
        return self.a(1, u, v) * self.a(1, v, u)

    def f_k(self, k: int, u: complex, v: complex) -> complex:
        """Level function a_k(v, u) / b(v, u)."""
        return self.a(k, v, u) / _nonzero(self.b(v, u), "b")

    def g_plus(self, i: int, u: complex, v: complex) -> complex:
        return self.c(i + 1, i, u, v) / _nonzero(self.b(u, v), "b")

    def g_minus(self, i: int, u: complex, v: complex) -> complex:
        return self.c(i - 1, i, u, v) / _nonzero(self.b(u, v), "b")

    def h(self, u: complex, v: complex) -> complex:
        """Exchange factor of the rank-one creation operators."""
        sgn = (-1) ** (self._g(1) + self._g(2))
        return sgn * self.a(2, u, v) / _nonzero(self.a(1, u, v), "a_1")

    def f(self, u: complex, v: complex) -> complex:
        """The single function of the distinguished-grading equations.

        ``(u - v + hbar)/(u - v)`` for rational kinds and
        ``(u^2/q - q v^2)/(u^2 - v^2)`` for trigonometric kinds.
        """
        return self.a(1, v, u) / _nonzero(self.b(v, u), "b")


def _nonzero(x: complex, name: str, tol: float = 1e-300) -> complex:
    if abs(x) <= tol:
        raise SingularParameterError(f"vanishing {name} in denominator")
    return x


def structure(family: Family) -> StructureFunctions:
    return StructureFunctions(family)


def build_reduced_r(family: Family, k: int, u: complex, v: complex) -> Operator:
    """R-matrix with every term carrying a label below ``k`` removed."""
    d = family.space.dim
    if not 1 <= k <= d:
        raise IndexError(f"level {k} outside 1..{d}")
    sf = structure(family)
    coef = np.zeros((d, d, d, d), dtype=complex)
    for x in range(k, d + 1):
        coef[x - 1, x - 1, x - 1, x - 1] = sf.a(x, u, v)
        for y in range(k, d + 1):
            if y != x:
                coef[x - 1, y - 1, x - 1, y - 1] = sf.b(u, v)
                coef[x - 1, y - 1, y - 1, x - 1] = sf.c(x, y, u, v)
    space = family.space
    return from_coefficients(coef.reshape(d * d, d * d), (space, space), 0)


def build_r(family: Family, u: complex, v: complex) -> Operator:
    return build_reduced_r(family, 1, u, v)


def build_normalized_r(family: Family, k: int, u: complex, v: complex, tol: float = 1e-14) -> Operator:
    """``R^(k)(u, v) / a_k(u, v)``, extended by the identity off the level-k block."""
    sf = structure(family)
    ak = sf.a(k, u, v)
    if abs(ak) <= tol:
        raise SingularParameterError(f"a_{k}(u, v) vanishes at u={u!r}, v={v!r}")
    reduced = build_reduced_r(family, k, u, v).matrix / ak
    d = family.space.dim
    keep = np.array([i >= k - 1 and j >= k - 1 for i in range(d) for j in range(d)])
    mat = reduced + np.diag((~keep).astype(complex))
    space = family.space
    return Operator((space, space), mat, 0)


RFun = Callable[[complex, complex], Operator]


def check_ybe(family: Family, u1: complex, u2: complex, u3: complex, rfun: RFun | None = None) -> float:
    """Frobenius norm of ``R12 R13 R23 - R23 R13 R12``."""
    rf = rfun or (lambda x, y: build_r(family, x, y))
    space = family.space
    fac = (space,) * 3
    r12 = embed_at(rf(u1, u2), fac, [1, 2])
    r13 = embed_at(rf(u1, u3), fac, [1, 3])
    r23 = embed_at(rf(u2, u3), fac, [2, 3])
    return frobenius_distance(r12 @ r13 @ r23, r23 @ r13 @ r12)


def check_unitarity(family: Family, u: complex, v: complex) -> float:
    """Norm of ``R12(u, v) R21(v, u) - zeta(u, v) I`` with ``R21 = P R12 P``."""
    p = permutation_operator(family.space)
    r = build_r(family, u, v)
    r21 = p @ build_r(family, v, u) @ p
    zeta = structure(family).zeta(u, v)
    ident = identity(r.factors)
    return frobenius_distance(r @ r21, ident.scaled(zeta))
