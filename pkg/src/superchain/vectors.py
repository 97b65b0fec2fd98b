"""Bethe vectors, the Shapovalov pairing and orthogonality checks.

Explicit constructors apply strings of generator matrices ``t_ij(u)`` to the
vacuum. The supertrace constructor evaluates the nested formula on an
auxiliary space per root without ever forming the full operator: the
lowering matrices in the auxiliary spaces select a single auxiliary basis
state, so one vector propagation suffices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bethe import RootSet, SingularConfigurationError, eigenvalue_lambda
from .chain import ChainSpec, build_monodromy, build_transfer, extract_tij, vacuum
from .graded import GradedSpace, Operator, apply_embedded, elementary, embed_at
from .rmatrix import build_normalized_r, build_r, structure

__all__ = [
    "BetheVector",
    "PairingReport",
    "OrthogonalityReport",
    "TooLargeError",
    "GeneratorCache",
    "phi_rank2",
    "phi_rank3",
    "phi_rank4",
    "phi_rank3_reduced",
    "phi_rank4_reduced",
    "phi_supertrace",
    "shapovalov_form",
    "shapovalov_pairing",
    "shapovalov_defect",
    "orthogonality_check",
    "eigen_residual",
    "phi_explicit",
    "proportionality_defect",
]

MAX_SUPERTRACE_DIM = 4 ** 8


class TooLargeError(ValueError):
    """The requested construction exceeds the dense-size limit."""


@dataclass(frozen=True, eq=False)
class BetheVector:
    state: np.ndarray
    constructor: str
    roots: RootSet

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.state))


class GeneratorCache:
    """Memoised ``t_ij(u)`` matrices of one chain."""

    def __init__(self, spec: ChainSpec):
        self.spec = spec
        self._mono: dict[complex, Operator] = {}

    def t(self, i: int, j: int, u: complex) -> np.ndarray:
        u = complex(u)
        if u not in self._mono:
            self._mono[u] = build_monodromy(self.spec, u)
        return extract_tij(self._mono[u], i, j).matrix


def _apply_string(cache: GeneratorCache, ops: Sequence[tuple[int, int, complex]]) -> np.ndarray:
    """``t_{i1 j1}(u1) t_{i2 j2}(u2) ... Omega`` (rightmost acts first)."""
    vec = vacuum(cache.spec)
    for i, j, u in reversed(ops):
        vec = cache.t(i, j, u) @ vec
    return vec


def _grade(spec: ChainSpec, i: int) -> int:
    return spec.space.grade(i)


def _b_checked(sf, u, v, what):
    val = sf.b(u, v)
    if abs(val) < 1e-13:
        raise SingularConfigurationError(f"b({what}) vanishes")
    return val


def phi_rank2(spec: ChainSpec, roots: Sequence[complex], cache: GeneratorCache | None = None) -> BetheVector:
    """``(-1)^{M[2]} t_12(u_1) ... t_12(u_M) Omega``."""
    cache = cache or GeneratorCache(spec)
    roots = [complex(u) for u in roots]
    if spec.space.dim < 2:
        raise ValueError("needs m + n >= 2")
    sign = (-1) ** (len(roots) * _grade(spec, 2))
    vec = sign * _apply_string(cache, [(1, 2, u) for u in roots])
    levels = (tuple(roots),) + ((),) * (spec.space.dim - 2)
    return BetheVector(vec, "rank2", RootSet(levels))


def _rank3_terms(spec, cache, u1, w):
    """String terms shared by the rank-3 constructors."""
    M = len(u1)
    head = _apply_string(cache, [(1, 2, u) for u in u1] + [(2, 3, w)])
    swapped = []
    for i in range(M):
        ops = [(1, 2, u) for u in u1[:i]] + [(1, 3, u1[i])] + [(1, 2, u) for u in u1[i + 1:]] + [(2, 2, w)]
        swapped.append(_apply_string(cache, ops))
    return head, swapped


def phi_rank3(spec: ChainSpec, level1: Sequence[complex], w: complex, cache: GeneratorCache | None = None) -> BetheVector:
    """Explicit vector with ``M`` level-1 roots and one level-2 root ``w``.

    ``s prod_i b(w, u_i)/a_2(w, u_i) { (-1)^[3] t_12...t_12 t_23(w)
    + (-1)^[2] sum_i c_23(w, u_i)/b(w, u_i) prod_{k>i} a_2(w, u_k)/b(w, u_k)
    t_12...t_13(u_i)...t_12 t_22(w) } Omega`` with
    ``s = (-1)^{M(M+1)/2 [1] + M[2]}``.
    """
    if spec.space.dim < 3:
        raise ValueError("needs m + n >= 3")
    cache = cache or GeneratorCache(spec)
    sf = structure(spec.family)
    u1 = [complex(u) for u in level1]
    w = complex(w)
    M = len(u1)
    g = spec.space.grades
    pref = (-1) ** ((M * (M + 1) // 2) * g[0] + M * g[1])
    for u in u1:
        pref *= _b_checked(sf, w, u, "w, u_i") / sf.a(2, w, u)
    head, swapped = _rank3_terms(spec, cache, u1, w)
    vec = (-1) ** g[2] * head
    for i in range(M):
        coef = sf.c(2, 3, w, u1[i]) / _b_checked(sf, w, u1[i], "w, u_i")
        for k in range(i + 1, M):
            coef *= sf.a(2, w, u1[k]) / sf.b(w, u1[k])
        vec = vec + (-1) ** g[1] * coef * swapped[i]
    levels = (tuple(u1), (w,)) + ((),) * (spec.space.dim - 3)
    return BetheVector(pref * vec, "rank3", RootSet(levels))


def phi_rank3_reduced(spec: ChainSpec, level1: Sequence[complex], w: complex, cache: GeneratorCache | None = None) -> BetheVector:
    """Unnormalised rank-3 vector written with the function ``f``.

    ``t_12...t_12 t_23(w) Omega - sum_i c_23(w, u_i)/b(w, u_i)
    prod_{k>i} f(u_k, w) t_12...t_13(u_i)...t_12 t_22(w) Omega``.
    """
    cache = cache or GeneratorCache(spec)
    sf = structure(spec.family)
    u1 = [complex(u) for u in level1]
    w = complex(w)
    head, swapped = _rank3_terms(spec, cache, u1, w)
    vec = head.copy()
    for i in range(len(u1)):
        coef = sf.c(2, 3, w, u1[i]) / _b_checked(sf, w, u1[i], "w, u_i")
        for k in range(i + 1, len(u1)):
            coef *= sf.f(u1[k], w)
        vec = vec - coef * swapped[i]
    levels = (tuple(u1), (w,)) + ((),) * (spec.space.dim - 3)
    return BetheVector(vec, "rank3-reduced", RootSet(levels))


def _rank4_terms(spec, cache, u1, w2, w3):
    M = len(u1)
    ones = [(1, 2, u) for u in u1]
    t_a = _apply_string(cache, ones + [(2, 3, w2), (3, 4, w3)])
    t_b = _apply_string(cache, ones + [(2, 4, w2), (3, 3, w3)])
    t_c, t_d = [], []
    for k in range(M):
        left = [(1, 2, u) for u in u1[:k]]
        right = [(1, 2, u) for u in u1[k + 1:]]
        t_c.append(_apply_string(cache, left + [(1, 3, u1[k])] + right + [(2, 2, w2), (3, 4, w3)]))
        t_d.append(_apply_string(cache, left + [(1, 4, u1[k])] + right + [(2, 2, w2), (3, 3, w3)]))
    return t_a, t_b, t_c, t_d


def phi_rank4(spec: ChainSpec, level1: Sequence[complex], w2: complex, w3: complex,
              cache: GeneratorCache | None = None) -> BetheVector:
    """Explicit vector with ``M`` level-1 roots and one root on levels 2 and 3.

    The overall factor is ``(-1)^{A + [2]M + [4]} prod_j b(w3, u_j)/a_3(w3, u_j)
    prod_j b(w2, u_j)/a_2(w2, u_j) b(w3, w2)/a_3(w3, w2)`` with
    ``A = sum_{i <= m+n-2} M_i(M_i+1)/2 [i]``.
    """
    if spec.space.dim < 4:
        raise ValueError("needs m + n >= 4")
    cache = cache or GeneratorCache(spec)
    sf = structure(spec.family)
    u1 = [complex(u) for u in level1]
    w2, w3 = complex(w2), complex(w3)
    M = len(u1)
    g = spec.space.grades
    counts = [M, 1, 1] + [0] * (spec.space.dim - 4)
    A = _a_exponent(spec, counts, 1)
    pref = (-1) ** (A + g[1] * M + g[3])
    for u in u1:
        pref *= _b_checked(sf, w3, u, "w3, u_j") / sf.a(3, w3, u)
        pref *= _b_checked(sf, w2, u, "w2, u_j") / sf.a(2, w2, u)
    pref *= _b_checked(sf, w3, w2, "w3, w2") / sf.a(3, w3, w2)
    t_a, t_b, t_c, t_d = _rank4_terms(spec, cache, u1, w2, w3)
    c34 = sf.c(3, 4, w3, w2) / sf.b(w3, w2)
    vec = (-1) ** g[2] * t_a + (-1) ** g[3] * c34 * t_b
    for k in range(M):
        tail = 1.0 + 0j
        for j in range(k + 1, M):
            tail *= sf.a(2, w2, u1[j]) / sf.b(w2, u1[j])
        bk = _b_checked(sf, w2, u1[k], "w2, u_k")
        vec = vec + (-1) ** g[1] * sf.c(2, 3, w2, u1[k]) / bk * tail * t_c[k]
        vec = vec + (-1) ** g[1] * sf.c(2, 4, w2, u1[k]) / bk * c34 * tail * t_d[k]
    levels = (tuple(u1), (w2,), (w3,)) + ((),) * (spec.space.dim - 4)
    return BetheVector(pref * vec, "rank4", RootSet(levels))


def phi_rank4_reduced(spec: ChainSpec, level1: Sequence[complex], w2: complex, w3: complex,
                      cache: GeneratorCache | None = None) -> BetheVector:
    """Unnormalised rank-4 vector written with the function ``f``."""
    cache = cache or GeneratorCache(spec)
    sf = structure(spec.family)
    u1 = [complex(u) for u in level1]
    w2, w3 = complex(w2), complex(w3)
    t_a, t_b, t_c, t_d = _rank4_terms(spec, cache, u1, w2, w3)
    c34 = sf.c(3, 4, w3, w2) / _b_checked(sf, w3, w2, "w3, w2")
    vec = t_a + c34 * t_b
    for k in range(len(u1)):
        tail = 1.0 + 0j
        for j in range(k + 1, len(u1)):
            tail *= sf.f(u1[j], w2)
        bk = _b_checked(sf, w2, u1[k], "w2, u_k")
        vec = vec - sf.c(2, 3, w2, u1[k]) / bk * tail * t_c[k]
        vec = vec - sf.c(2, 4, w2, u1[k]) / bk * c34 * tail * t_d[k]
    levels = (tuple(u1), (w2,), (w3,)) + ((),) * (spec.space.dim - 4)
    return BetheVector(vec, "rank4-reduced", RootSet(levels))


def phi_explicit(spec: ChainSpec, roots: RootSet, reduced: bool = False) -> BetheVector | None:
    """The explicit constructor covering ``roots``, or None if there is none.

    Covers a single occupied first level, one extra root on level 2, and one
    extra root on each of levels 2 and 3. ``reduced`` selects the
    unnormalised f-forms.
    """
    counts = roots.counts
    lv = roots.levels
    rest = counts[1:]
    if not any(rest):
        return phi_rank2(spec, lv[0])
    if rest[0] == 1 and not any(rest[1:]):
        fn = phi_rank3_reduced if reduced else phi_rank3
        return fn(spec, lv[0], lv[1][0])
    if len(rest) >= 2 and rest[0] == rest[1] == 1 and not any(rest[2:]):
        fn = phi_rank4_reduced if reduced else phi_rank4
        return fn(spec, lv[0], lv[1][0], lv[2][0])
    return None


def proportionality_defect(a: np.ndarray | BetheVector, b: np.ndarray | BetheVector) -> float:
    """``min_c |a - c b| / |a|``; zero iff the vectors are parallel."""
    x = a.state if isinstance(a, BetheVector) else np.asarray(a)
    y = b.state if isinstance(b, BetheVector) else np.asarray(b)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0 or ny == 0:
        return 0.0 if nx == ny else 1.0
    c = np.vdot(y, x) / ny**2
    return float(np.linalg.norm(x - c * y) / nx)


def _a_exponent(spec: ChainSpec, counts: Sequence[int], k: int) -> int:
    """``A_k = sum_{i=k}^{m+n-2} M_i (M_i + 1)/2 [i]``."""
    g = spec.space.grades
    return sum(counts[i - 1] * (counts[i - 1] + 1) // 2 * g[i - 1] for i in range(k, spec.space.dim - 1))


def phi_supertrace(spec: ChainSpec, roots: RootSet, max_dim: int = MAX_SUPERTRACE_DIM) -> BetheVector:
    """Bethe vector from the nested supertrace formula.

    One auxiliary space per root, ordered level by level. The auxiliary space
    of a level-k root carries ``E_{k+1,k}``; auxiliary pairs (level-j root
    ``x``, level-k root ``y``, ``j < k``) are coupled by ``R(y, x)/a_k(y, x)``.
    The auxiliary contraction is a supertrace, with the overall sign
    ``(-1)^{A_1}``.
    """
    counts = roots.counts
    if len(counts) != spec.space.dim - 1:
        raise ValueError("root set does not match the chain")
    space = spec.space
    d = space.dim
    M = sum(counts)
    L = spec.L
    if d ** (M + L) > max_dim:
        raise TooLargeError(f"(m+n)^(M+L) = {d ** (M + L)} exceeds {max_dim}")
    if M == 0:
        return BetheVector(vacuum(spec), "supertrace", roots)
    aux = [(k + 1, u) for k, lvl in enumerate(roots.levels) for u in lvl]
    factors = (space,) * (M + L)
    labels = [lvl for lvl, _ in aux]
    # start from |A>(x)Omega with A the unique auxiliary state surviving the E's
    state = np.zeros((d,) * (M + L), dtype=complex)
    state[tuple(x - 1 for x in labels) + (0,) * L] = 1.0
    vec = state.ravel()
    for pos in range(M, 0, -1):
        k = labels[pos - 1]
        vec = apply_embedded(elementary(space, k + 1, k), vec, factors, [pos])
    sf = structure(spec.family)
    for pos_y, pos_x in reversed(_r_order(aux)):
        k = aux[pos_y][0]
        y, x = aux[pos_y][1], aux[pos_x][1]
        ak = sf.a(k, y, x)
        if abs(ak) < 1e-13:
            raise SingularConfigurationError(f"a_{k} vanishes between auxiliary roots")
        r = build_r(spec.family, y, x).scaled(1 / ak)
        vec = apply_embedded(r, vec, factors, [pos_y + 1, pos_x + 1])
    for pos in range(M, 0, -1):
        u = aux[pos - 1][1]
        for l in range(L, 0, -1):
            r = build_r(spec.family, u, spec.inhomogeneities[l - 1])
            vec = apply_embedded(r, vec, factors, [pos, M + l])
    final_labels = [x for x, _ in aux]
    block = vec.reshape((d,) * (M + L))[tuple(x - 1 for x in final_labels)]
    block = block.reshape(-1)
    parity_a = sum(space.grade(x) for x in final_labels) % 2
    q_par = _site_parity(space, L)
    phase = np.where((parity_a * (1 + q_par)) % 2 == 0, 1.0, -1.0)
    sign = (-1) ** _a_exponent(spec, counts, 1)
    return BetheVector(sign * phase * block, "supertrace", roots)


def _r_order(aux: list[tuple[int, complex]]) -> list[tuple[int, int]]:
    """Left-to-right order of the auxiliary R factors.

    Outer loop over the higher level k and its roots in increasing order,
    inner loop over lower levels j < k in increasing order with their roots
    in decreasing order.
    """
    by_level: dict[int, list[int]] = {}
    for idx, (lvl, _) in enumerate(aux):
        by_level.setdefault(lvl, []).append(idx)
    pairs = []
    for k in sorted(by_level):
        for y in by_level[k]:
            for j in sorted(by_level):
                if j >= k:
                    continue
                for x in reversed(by_level[j]):
                    pairs.append((y, x))
    return pairs


def _site_parity(space: GradedSpace, L: int) -> np.ndarray:
    par = np.zeros(1, dtype=np.int64)
    for _ in range(L):
        par = np.add.outer(par, np.array(space.grades)).ravel()
    return par % 2


def shapovalov_form(spec: ChainSpec) -> np.ndarray:
    """Matrix ``G`` of the pairing ``<x, y> = x^T G y``.

    ``G`` is the parity operator ``(-1)^(number of odd labels)`` times the
    ordered product over site pairs ``i < j`` of ``R_ij(a_j, a_i) / a_1``.
    For a homogeneous chain the product collapses to the graded site
    reversal. For rational families ``t_ij(u)^T G = G t_ji(u)`` holds
    exactly; trigonometric families admit no constant form of this kind
    since their R-matrix is not symmetric under exchange of its factors.
    ``<vacuum, vacuum> = 1``.
    """
    L = spec.L
    fac = (spec.space,) * L
    a = spec.inhomogeneities
    G = np.diag(np.where(_site_parity(spec.space, L) == 0, 1.0, -1.0)).astype(complex)
    for i in range(1, L + 1):
        for j in range(i + 1, L + 1):
            r = build_normalized_r(spec.family, 1, a[j - 1], a[i - 1])
            G = G @ embed_at(r, fac, [i, j]).matrix
    return G


@dataclass(frozen=True)
class PairingReport:
    value: complex
    shapovalov_verified: bool
    defect: float


def shapovalov_defect(spec: ChainSpec, samples: int = 3, rng_seed: int = 0) -> float:
    """Largest violation of ``<t_ij(u) x, y> = <x, t_ji(u) y>`` over random data."""
    rng = np.random.default_rng(rng_seed)
    J = shapovalov_form(spec)
    d = spec.space.dim
    worst = 0.0
    for _ in range(samples):
        u = complex(rng.normal(), rng.normal())
        mono = build_monodromy(spec, u)
        x = rng.normal(size=spec.dim) + 1j * rng.normal(size=spec.dim)
        y = rng.normal(size=spec.dim) + 1j * rng.normal(size=spec.dim)
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                tij = extract_tij(mono, i, j).matrix
                tji = extract_tij(mono, j, i).matrix
                lhs = (tij @ x) @ J @ y
                rhs = x @ J @ (tji @ y)
                scale = 1 + np.linalg.norm(tij) * np.linalg.norm(x) * np.linalg.norm(y)
                worst = max(worst, abs(lhs - rhs) / scale)
    return float(worst)


def shapovalov_pairing(spec: ChainSpec, x: np.ndarray | BetheVector, y: np.ndarray | BetheVector,
                       tol: float = 1e-10) -> PairingReport:
    xs = x.state if isinstance(x, BetheVector) else np.asarray(x)
    ys = y.state if isinstance(y, BetheVector) else np.asarray(y)
    value = complex(xs @ shapovalov_form(spec) @ ys)
    defect = shapovalov_defect(spec)
    return PairingReport(value, defect < tol, defect)


@dataclass(frozen=True)
class OrthogonalityReport:
    value: complex
    same_roots: bool
    shapovalov_verified: bool
    passed: bool
    message: str


def orthogonality_check(spec: ChainSpec, a: BetheVector, b: BetheVector, zero_tol: float = 1e-8,
                        nonzero_tol: float = 1e-6) -> OrthogonalityReport:
    """Pairing of two on-shell vectors and the expected (non-)vanishing.

    The outcome is only judged when the pairing passes the Shapovalov check
    for this chain; otherwise ``passed`` is false with an explanatory message.
    """
    mult = not spec.family.is_rational
    same = a.roots.distance(b.roots, mult) < 1e-8
    rep = shapovalov_pairing(spec, a, b)
    if not rep.shapovalov_verified:
        return OrthogonalityReport(rep.value, same, False, False,
                                   f"pairing fails the adjoint property (defect {rep.defect:.2e})")
    scale = a.norm * b.norm
    if same:
        ok = abs(rep.value) > nonzero_tol * scale
        msg = "self-pairing non-zero" if ok else "self-pairing vanishes"
    else:
        ok = abs(rep.value) < zero_tol * max(scale, 1.0)
        msg = "distinct roots orthogonal" if ok else "distinct roots not orthogonal"
    return OrthogonalityReport(rep.value, same, True, ok, msg)


def eigen_residual(spec: ChainSpec, vec: BetheVector, u0: complex) -> float:
    """``|t(u0) phi - Lambda(u0) phi| / |phi|`` at a single point."""
    lam = eigenvalue_lambda(spec, vec.roots, u0)
    t = build_transfer(spec, u0).matrix
    return float(np.linalg.norm(t @ vec.state - lam * vec.state) / np.linalg.norm(vec.state))
