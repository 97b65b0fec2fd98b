"""Dense linear algebra on ordered tensor products of Z2-graded spaces.

Operators are stored as plain complex matrices in the lexicographic product
basis. The Koszul signs of the graded tensor product are folded into the
entries once, at construction time, so ordinary matrix products of the stored
arrays are the graded products.

Internally every operator on N factors is related to its coefficient array
C (the coefficients of ``E_{i1 j1} (x) ... (x) E_{iN jN}``) by an elementwise
sign::

    M[I, J] = C[I, J] * (-1) ** sum_{p<q} ([i_q] + [j_q]) [j_p]

The map is an involution, so the same mask converts in both directions.

Public index conventions follow the usual mathematical labelling: basis labels
``i, j`` run over ``1..m+n`` and factor positions over ``1..N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "GradedSpace",
    "Operator",
    "elementary",
    "identity",
    "kron_graded",
    "embed_at",
    "permutation_operator",
    "partial_supertrace",
    "supertrace",
    "frobenius_distance",
    "apply_embedded",
    "sign_mask",
    "to_coefficients",
    "from_coefficients",
]


@dataclass(frozen=True)
class GradedSpace:
    """The superspace C^(m|n) with the distinguished grading.

    Basis vectors ``e_1..e_m`` are even and ``e_{m+1}..e_{m+n}`` are odd.
    """

    m: int
    n: int = 0

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be non-negative")
        if self.m + self.n < 1:
            raise ValueError("m + n must be at least 1")

    @property
    def dim(self) -> int:
        return self.m + self.n

    @property
    def grades(self) -> tuple[int, ...]:
        return (0,) * self.m + (1,) * self.n

    def grade(self, i: int) -> int:
        """Grade of the 1-based basis label ``i``."""
        self._check_label(i)
        return 0 if i <= self.m else 1

    def _check_label(self, i: int) -> None:
        if not 1 <= i <= self.dim:
            raise IndexError(f"basis label {i} outside 1..{self.dim}")


@dataclass(frozen=True, eq=False)
class Operator:
    """A dense matrix acting on an ordered list of graded factors."""

    factors: tuple[GradedSpace, ...]
    matrix: np.ndarray
    grade: int | None = field(default=None)

    def __post_init__(self):
        factors = tuple(self.factors)
        mat = np.asarray(self.matrix, dtype=complex)
        side = int(np.prod([f.dim for f in factors]))
        if mat.shape != (side, side):
            raise ValueError(f"matrix shape {mat.shape} does not match factor dimension {side}")
        mat.setflags(write=False)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "matrix", mat)

    @property
    def nfactors(self) -> int:
        return len(self.factors)

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_same_factors(self, other)
        grade = None
        if self.grade is not None and other.grade is not None:
            grade = (self.grade + other.grade) % 2
        return Operator(self.factors, self.matrix @ other.matrix, grade)

    def __add__(self, other: "Operator") -> "Operator":
        _check_same_factors(self, other)
        grade = self.grade if self.grade == other.grade else None
        return Operator(self.factors, self.matrix + other.matrix, grade)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_same_factors(self, other)
        grade = self.grade if self.grade == other.grade else None
        return Operator(self.factors, self.matrix - other.matrix, grade)

    def scaled(self, s: complex) -> "Operator":
        return Operator(self.factors, s * self.matrix, self.grade)


def _check_same_factors(a: Operator, b: Operator) -> None:
    if a.factors != b.factors:
        raise ValueError("operators act on different factor lists")


def _grade_key(factors: Sequence[GradedSpace]) -> tuple[tuple[int, ...], ...]:
    return tuple(f.grades for f in factors)


@lru_cache(maxsize=64)
def _sign_mask_cached(grade_key: tuple[tuple[int, ...], ...]) -> np.ndarray:
    n = len(grade_key)
    dims = [len(g) for g in grade_key]

    def axis(k: int, g: tuple[int, ...]) -> np.ndarray:
        shape = [1] * (2 * n)
        shape[k] = len(g)
        return np.array(g, dtype=np.int64).reshape(shape)

    total = np.zeros([1] * (2 * n), dtype=np.int64)
    for q in range(1, n):
        row_col = axis(q, grade_key[q]) + axis(n + q, grade_key[q])
        col_before = sum(axis(n + p, grade_key[p]) for p in range(q))
        total = total + row_col * col_before
    total = np.broadcast_to(total, dims + dims)
    side = int(np.prod(dims))
    mask = np.where(total % 2 == 0, 1.0, -1.0).reshape(side, side)
    mask.setflags(write=False)
    return mask


def sign_mask(factors: Sequence[GradedSpace]) -> np.ndarray:
    """The +-1 array relating coefficient arrays and matrix entries."""
    return _sign_mask_cached(_grade_key(factors))


def to_coefficients(op: Operator) -> np.ndarray:
    """Coefficients of ``op`` in the basis of graded tensor products of E_ij."""
    return op.matrix * sign_mask(op.factors)


def from_coefficients(coef: np.ndarray, factors: Sequence[GradedSpace], grade: int | None = None) -> Operator:
    """Inverse of :func:`to_coefficients`."""
    factors = tuple(factors)
    return Operator(factors, np.asarray(coef, dtype=complex) * sign_mask(factors), grade)


def elementary(space: GradedSpace, i: int, j: int) -> Operator:
    """The elementary matrix E_ij on a single factor, of grade [i] + [j]."""
    space._check_label(i)
    space._check_label(j)
    mat = np.zeros((space.dim, space.dim), dtype=complex)
    mat[i - 1, j - 1] = 1.0
    return Operator((space,), mat, (space.grade(i) + space.grade(j)) % 2)


def identity(factors: Sequence[GradedSpace]) -> Operator:
    factors = tuple(factors)
    side = int(np.prod([f.dim for f in factors]))
    return Operator(factors, np.eye(side, dtype=complex), 0)


def kron_graded(a: Operator, b: Operator) -> Operator:
    """Graded tensor product ``a (x) b`` on the concatenated factor list.

    With this product ``(A (x) B)(C (x) D) = (-1)^{|B||C|} AC (x) BD`` for
    homogeneous operators. Without odd factors it is the Kronecker product.
    """
    coef = np.kron(to_coefficients(a), to_coefficients(b))
    grade = None
    if a.grade is not None and b.grade is not None:
        grade = (a.grade + b.grade) % 2
    return from_coefficients(coef, a.factors + b.factors, grade)


def _positions_to_axes(positions: Sequence[int], nfactors: int) -> list[int]:
    axes = [p - 1 for p in positions]
    if len(set(axes)) != len(axes):
        raise ValueError(f"position collision in {list(positions)}")
    if any(not 0 <= x < nfactors for x in axes):
        raise IndexError(f"positions {list(positions)} outside 1..{nfactors}")
    return axes


def embed_at(a: Operator, factors: Sequence[GradedSpace], positions: Sequence[int]) -> Operator:
    """Place ``a`` at strictly increasing ``positions`` of ``factors``.

    The result acts as the identity on the remaining factors; Koszul signs for
    odd components passing intermediate factors are included.
    """
    factors = tuple(factors)
    axes = _positions_to_axes(positions, len(factors))
    if sorted(axes) != axes:
        raise ValueError("positions must be strictly increasing")
    if tuple(factors[x] for x in axes) != a.factors:
        raise ValueError("operator factors do not match the targeted slots")
    n = len(factors)
    dims = [f.dim for f in factors]
    coef = to_coefficients(a).reshape([f.dim for f in a.factors] * 2)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise ValueError("too many factors")
    rows, cols = letters[:n], letters[n:2 * n]
    operands = [coef]
    subs = ["".join(rows[x] for x in axes) + "".join(cols[x] for x in axes)]
    for p in range(n):
        if p not in axes:
            operands.append(np.eye(dims[p]))
            subs.append(rows[p] + cols[p])
    full = np.einsum(",".join(subs) + "->" + rows + cols, *operands)
    side = int(np.prod(dims))
    return from_coefficients(full.reshape(side, side), factors, a.grade)


def permutation_operator(space: GradedSpace) -> Operator:
    """Graded flip ``P = sum_ij (-1)^[j] E_ij (x) E_ji``.

    On homogeneous vectors ``P(a (x) b) = (-1)^{[a][b]} b (x) a``.
    """
    d = space.dim
    g = space.grades
    coef = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            coef[i, j, j, i] = (-1) ** g[j]
    return from_coefficients(coef.reshape(d * d, d * d), (space, space), 0)


def partial_supertrace(a: Operator, factor: int) -> Operator:
    """Supertrace over the 1-based ``factor``; the others keep their order."""
    n = a.nfactors
    (axis,) = _positions_to_axes([factor], n)
    dims = [f.dim for f in a.factors]
    coef = to_coefficients(a).reshape(dims * 2)
    weights = (-1.0) ** np.array(a.factors[axis].grades)
    coef = np.moveaxis(coef, [axis, n + axis], [0, 1])
    reduced = np.einsum("ii...,i->...", coef, weights)
    rest = a.factors[:axis] + a.factors[axis + 1:]
    if not rest:
        return reduced
    side = int(np.prod([f.dim for f in rest]))
    return from_coefficients(reduced.reshape(side, side), rest, a.grade)


def supertrace(a: Operator) -> complex:
    """Full supertrace: ``sum_I (-1)^{|I|} a[I, I]``."""
    parity = np.zeros(1, dtype=np.int64)
    for f in a.factors:
        parity = np.add.outer(parity, np.array(f.grades)).ravel()
    return complex(np.sum(np.diag(a.matrix) * (-1.0) ** parity))


def frobenius_distance(a: Operator | np.ndarray, b: Operator | np.ndarray) -> float:
    """Entrywise Euclidean distance between two operators of equal shape."""
    x = a.matrix if isinstance(a, Operator) else np.asarray(a)
    y = b.matrix if isinstance(b, Operator) else np.asarray(b)
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.linalg.norm(x - y))


@lru_cache(maxsize=256)
def _prefix_parity(grade_key: tuple[tuple[int, ...], ...], axis: int) -> np.ndarray:
    """Parity of the basis labels strictly before ``axis``, as a broadcastable array."""
    n = len(grade_key)
    dims = [len(g) for g in grade_key]
    total = np.zeros([1] * n, dtype=np.int64)
    for p in range(axis):
        shape = [1] * n
        shape[p] = dims[p]
        total = total + np.array(grade_key[p], dtype=np.int64).reshape(shape)
    out = np.broadcast_to(total % 2, dims).copy()
    out.setflags(write=False)
    return out


def apply_embedded(a: Operator, vec: np.ndarray, factors: Sequence[GradedSpace], positions: Sequence[int]) -> np.ndarray:
    """Apply ``embed_at(a, factors, positions)`` to a vector without forming it.

    Positions may come in any order; the k-th factor of ``a`` acts on
    ``positions[k]``. Out-of-order placements are reduced to increasing order
    by graded flips of the operator. The vector may carry trailing batch axes.
    """
    factors = tuple(factors)
    axes = _positions_to_axes(positions, len(factors))
    op = a
    order = sorted(range(len(axes)), key=lambda t: axes[t])
    if order != list(range(len(axes))):
        op = _reorder(a, order)
        axes = [axes[t] for t in order]
    n = len(factors)
    dims = [f.dim for f in factors]
    vec = np.asarray(vec, dtype=complex)
    batch = vec.shape[1:]
    psi = vec.reshape(dims + list(batch))
    k = len(axes)
    odims = [f.dim for f in op.factors]
    coef = to_coefficients(op).reshape(odims * 2)
    key = _grade_key(factors)
    out = np.zeros_like(psi)
    # split the coefficient array by the parity of each elementary component
    parities = [np.add.outer(np.array(f.grades), np.array(f.grades)) % 2 for f in op.factors]
    for pattern in np.ndindex(*(2,) * k):
        block = coef.copy()
        for t in range(k):
            shape = [1] * (2 * k)
            shape[t] = odims[t]
            shape[k + t] = odims[t]
            block = block * (parities[t].reshape(shape) == pattern[t])
        if not np.any(block):
            continue
        expo = np.zeros(dims, dtype=np.int64)
        for t in range(k):
            if pattern[t]:
                expo = expo + _prefix_parity(key, axes[t])
        phase = np.where(expo % 2 == 0, 1.0, -1.0).reshape(dims + [1] * len(batch))
        signed = psi * phase
        res = np.tensordot(block, signed, axes=(list(range(k, 2 * k)), axes))
        out = out + np.moveaxis(res, list(range(k)), axes)
    return out.reshape(vec.shape)


def _reorder(a: Operator, order: list[int]) -> Operator:
    """Re-express ``a`` with its factors permuted so that new factor t is old ``order[t]``."""
    k = a.nfactors
    odims = [f.dim for f in a.factors]
    coef = to_coefficients(a).reshape(odims * 2)
    coef = np.transpose(coef, order + [k + t for t in order])
    # Koszul sign for reordering homogeneous elementary components
    grades = [np.add.outer(np.array(f.grades), np.array(f.grades)) % 2 for f in a.factors]
    expo = np.zeros([1] * (2 * k), dtype=np.int64)
    for s in range(k):
        for t in range(s + 1, k):
            if order[s] > order[t]:
                gs = _expand(grades[order[s]], s, k, odims[order[s]])
                gt = _expand(grades[order[t]], t, k, odims[order[t]])
                expo = expo + gs * gt
    coef = coef * np.where(expo % 2 == 0, 1.0, -1.0)
    new_factors = tuple(a.factors[t] for t in order)
    side = int(np.prod(odims))
    return from_coefficients(coef.reshape(side, side), new_factors, a.grade)


def _expand(g: np.ndarray, t: int, k: int, d: int) -> np.ndarray:
    shape = [1] * (2 * k)
    shape[t] = d
    shape[k + t] = d
    return g.reshape(shape)
