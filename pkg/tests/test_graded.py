import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superchain.graded import (
    GradedSpace,
    Operator,
    apply_embedded,
    elementary,
    embed_at,
    frobenius_distance,
    identity,
    kron_graded,
    partial_supertrace,
    permutation_operator,
    supertrace,
)

SPACES = [GradedSpace(1, 0), GradedSpace(2, 0), GradedSpace(1, 1), GradedSpace(2, 1), GradedSpace(1, 2), GradedSpace(0, 2)]


def basis(space, i):
    v = np.zeros(space.dim, dtype=complex)
    v[i - 1] = 1
    return v


def random_homogeneous(space, grade, rng):
    """Random operator on one factor whose entries all have the given grade."""
    g = np.array(space.grades)
    mask = ((g[:, None] + g[None, :]) % 2) == grade
    m = (rng.normal(size=mask.shape) + 1j * rng.normal(size=mask.shape)) * mask
    return Operator((space,), m, grade)


def test_grades_follow_distinguished_order():
    s = GradedSpace(2, 3)
    assert s.grades == (0, 0, 1, 1, 1)
    assert s.grade(2) == 0 and s.grade(3) == 1
    with pytest.raises(ValueError):
        GradedSpace(0, 0)


def test_elementary_examples():
    e = elementary(GradedSpace(1, 1), 1, 2)
    assert np.array_equal(e.matrix, [[0, 1], [0, 0]]) and e.grade == 1
    e = elementary(GradedSpace(2, 0), 2, 2)
    assert np.array_equal(e.matrix, np.diag([0, 1])) and e.grade == 0
    e = elementary(GradedSpace(2, 1), 3, 1)
    assert e.matrix[2, 0] == 1 and e.matrix.sum() == 1 and e.grade == 1
    with pytest.raises(IndexError):
        elementary(GradedSpace(2, 0), 3, 1)


def test_kron_even_spaces_is_ordinary_kronecker():
    s = GradedSpace(2, 0)
    a, b = elementary(s, 1, 2), elementary(s, 2, 1)
    assert np.array_equal(kron_graded(a, b).matrix, np.kron(a.matrix, b.matrix))


def test_kron_graded_product_sign():
    s = GradedSpace(1, 1)
    e12, e21 = elementary(s, 1, 2), elementary(s, 2, 1)
    graded = kron_graded(e12, e21).matrix @ kron_graded(e21, e12).matrix
    plain = np.kron(e12.matrix, e21.matrix) @ np.kron(e21.matrix, e12.matrix)
    assert np.allclose(graded, -plain)


def test_kron_identity():
    s = GradedSpace(1, 2)
    assert np.array_equal(kron_graded(identity([s]), identity([s])).matrix, np.eye(9))


def test_embed_identity_and_single_factor():
    s = GradedSpace(2, 1)
    fac = (s, s, s)
    assert frobenius_distance(embed_at(identity([s]), fac, [2]), identity(fac)) == 0
    t = GradedSpace(2, 0)
    e11 = elementary(t, 1, 1)
    assert np.array_equal(embed_at(e11, (t, t), [2]).matrix, np.kron(np.eye(2), e11.matrix))


def test_embed_permutation_on_outer_slots():
    s = GradedSpace(2, 0)
    p13 = embed_at(permutation_operator(s), (s, s, s), [1, 3]).matrix
    direct = np.zeros((8, 8))
    for i, j, k in itertools.product(range(2), repeat=3):
        direct[k * 4 + j * 2 + i, i * 4 + j * 2 + k] = 1
    assert np.array_equal(p13, direct)


def test_embed_rejects_bad_positions():
    s = GradedSpace(2, 0)
    p = permutation_operator(s)
    with pytest.raises(ValueError):
        embed_at(p, (s, s, s), [2, 2])
    with pytest.raises(IndexError):
        embed_at(p, (s, s, s), [3, 4])


def test_permutation_examples():
    s = GradedSpace(2, 0)
    p = permutation_operator(s).matrix
    assert np.allclose(p @ np.kron(basis(s, 1), basis(s, 2)), np.kron(basis(s, 2), basis(s, 1)))
    f = GradedSpace(1, 1)
    pf = permutation_operator(f).matrix
    assert np.allclose(pf @ np.kron(basis(f, 2), basis(f, 2)), -np.kron(basis(f, 2), basis(f, 2)))
    for sp in SPACES:
        pm = permutation_operator(sp).matrix
        assert np.allclose(pm @ pm, np.eye(sp.dim ** 2))


@pytest.mark.parametrize("space", SPACES)
def test_permutation_swaps_homogeneous_vectors_with_sign(space):
    p = permutation_operator(space).matrix
    for a in range(1, space.dim + 1):
        for b in range(1, space.dim + 1):
            sign = (-1) ** (space.grade(a) * space.grade(b))
            assert np.allclose(p @ np.kron(basis(space, a), basis(space, b)), sign * np.kron(basis(space, b), basis(space, a)))


def test_partial_supertrace_examples():
    s = GradedSpace(2, 0)
    assert np.allclose(partial_supertrace(identity([s, s]), 1).matrix, 2 * np.eye(2))
    f = GradedSpace(1, 1)
    assert np.allclose(partial_supertrace(identity([f, f]), 1).matrix, 0)
    assert np.allclose(partial_supertrace(permutation_operator(f), 1).matrix, np.eye(2))
    with pytest.raises(IndexError):
        partial_supertrace(identity([f, f]), 3)


def test_frobenius_examples():
    s = GradedSpace(2, 0)
    a = identity([s])
    assert frobenius_distance(a, a) == 0
    assert frobenius_distance(a, a.scaled(2)) == pytest.approx(np.sqrt(2))
    p = permutation_operator(s)
    assert frobenius_distance(p.matrix, p.matrix.T) == 0


space_st = st.sampled_from(SPACES[:5])


@settings(max_examples=40, deadline=None)
@given(space_st, space_st, space_st, st.integers(0, 1), st.integers(0, 1), st.integers(0, 1), st.integers(0, 2**31))
def test_kron_associative(s1, s2, s3, g1, g2, g3, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_homogeneous(s, g, rng) for s, g in ((s1, g1), (s2, g2), (s3, g3)))
    left = kron_graded(kron_graded(a, b), c)
    right = kron_graded(a, kron_graded(b, c))
    assert frobenius_distance(left, right) < 1e-12 * (1 + np.linalg.norm(left.matrix))


@settings(max_examples=40, deadline=None)
@given(space_st, st.integers(0, 1), st.integers(0, 1), st.integers(0, 2**31))
def test_graded_exchange(space, ga, gb, seed):
    rng = np.random.default_rng(seed)
    a = random_homogeneous(space, ga, rng)
    b = random_homogeneous(space, gb, rng)
    fac = (space, space)
    a1 = embed_at(a, fac, [1]).matrix
    b2 = embed_at(b, fac, [2]).matrix
    assert np.allclose(a1 @ b2, (-1) ** (ga * gb) * b2 @ a1, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(space_st, space_st, st.integers(0, 2**31))
def test_supertrace_multiplicative(s1, s2, seed):
    rng = np.random.default_rng(seed)
    a = random_homogeneous(s1, 0, rng)
    b = random_homogeneous(s2, 0, rng)
    assert supertrace(kron_graded(a, b)) == pytest.approx(supertrace(a) * supertrace(b), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**31))
def test_even_spaces_match_plain_kronecker(d, nfac, seed):
    rng = np.random.default_rng(seed)
    s = GradedSpace(d, 0)
    mats = [rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)) for _ in range(nfac)]
    graded = Operator((s,), mats[0])
    plain = mats[0]
    for m in mats[1:]:
        graded = kron_graded(graded, Operator((s,), m))
        plain = np.kron(plain, m)
    assert np.allclose(graded.matrix, plain)
    fac = (s,) * (nfac + 1)
    emb = embed_at(Operator((s,), mats[0]), fac, [nfac + 1]).matrix
    assert np.allclose(emb, np.kron(np.eye(d ** nfac), mats[0]))


@settings(max_examples=30, deadline=None)
@given(space_st, st.integers(0, 2**31), st.permutations([1, 2, 3]))
def test_apply_embedded_matches_dense(space, seed, order):
    rng = np.random.default_rng(seed)
    fac = (space,) * 3
    a = Operator((space, space), rng.normal(size=(space.dim ** 2,) * 2) + 0j)
    # random operator with no definite grade still embeds linearly
    vec = rng.normal(size=space.dim ** 3) + 1j * rng.normal(size=space.dim ** 3)
    pos = sorted(order[:2])
    dense = embed_at(a, fac, pos).matrix @ vec
    assert np.allclose(apply_embedded(a, vec, fac, pos), dense)
