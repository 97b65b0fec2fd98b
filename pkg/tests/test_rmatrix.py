import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superchain.graded import GradedSpace, Operator, embed_at, frobenius_distance, permutation_operator
from superchain.rmatrix import (
    Family,
    SingularParameterError,
    build_normalized_r,
    build_r,
    build_reduced_r,
    check_unitarity,
    check_ybe,
    structure,
)

MN = [(2, 0), (3, 0), (1, 1), (2, 1), (2, 2)]


def family(kind, m, n, hbar=1.0, q=1.3 + 0.2j):
    space = GradedSpace(m, n)
    sup = "-super" if n else ""
    if kind == "rational":
        return Family("rational" + sup, space, hbar=hbar)
    return Family("trig" + sup, space, q=q)


ALL = [family(k, m, n) for k in ("rational", "trig") for m, n in MN]


def draw(fam, rng):
    z = complex(rng.normal(), rng.normal())
    return z if fam.is_rational else complex(np.exp(0.4 * z))


def test_family_validation():
    with pytest.raises(ValueError):
        Family("rational", GradedSpace(1, 1), hbar=1.0)
    with pytest.raises(ValueError):
        Family("rational-super", GradedSpace(2, 0), hbar=1.0)
    with pytest.raises(ValueError):
        Family("rational", GradedSpace(2, 0), hbar=0)
    with pytest.raises(ValueError):
        Family("trig", GradedSpace(2, 0), q=1)
    with pytest.raises(ValueError):
        Family("elliptic", GradedSpace(2, 0), q=2)


def test_structure_examples():
    sf = structure(family("rational", 2, 0))
    assert sf.b(2, 0.5) == 1.5
    assert sf.a(1, 2, 0.5) == 0.5
    assert sf.b(0.3 + 1j, 0.3 + 1j) == 0
    sg = structure(family("rational", 1, 1))
    assert sg.a(2, 0.7, 0.2) == pytest.approx(0.5 + 1)
    q = 1.3
    st_ = structure(family("trig", 2, 0, q=q))
    v = 0.8
    assert st_.f(2 * v, v) == pytest.approx((4 / q - q) / 3)


def test_rational_r_example_entries():
    r = build_r(family("rational", 2, 0), 1.5, 0.5).matrix
    expected = np.array([[0, 0, 0, 0], [0, 1, -1, 0], [0, -1, 1, 0], [0, 0, 0, 0]])
    assert np.allclose(r, expected)


@pytest.mark.parametrize("mn", MN)
def test_rational_r_at_equal_arguments(mn):
    fam = family("rational", *mn, hbar=0.7)
    p = permutation_operator(fam.space)
    assert frobenius_distance(build_r(fam, 0.4, 0.4), p.scaled(-0.7)) < 1e-14


def test_trig_super_diagonal_entry():
    q = 1.3 + 0.2j
    fam = family("trig", 1, 1, q=q)
    u, v = 0.9 + 0.1j, 1.2
    r = build_r(fam, u, v).matrix
    assert r[3, 3] == pytest.approx((u / v) / q - (v / u) * q)


def test_reduced_r_levels():
    fam = family("rational", 3, 0)
    u, v = 0.3 + 0.1j, -0.4
    assert frobenius_distance(build_reduced_r(fam, 1, u, v), build_r(fam, u, v)) == 0
    top = build_reduced_r(fam, 3, u, v).matrix
    expected = np.zeros((9, 9), dtype=complex)
    expected[8, 8] = structure(fam).a(3, u, v)
    assert np.allclose(top, expected)
    r2 = build_reduced_r(fam, 2, u, v).matrix.reshape(3, 3, 3, 3)
    assert np.all(r2[0] == 0) and np.all(r2[:, 0] == 0) and np.all(r2[:, :, 0] == 0) and np.all(r2[:, :, :, 0] == 0)
    with pytest.raises(IndexError):
        build_reduced_r(fam, 4, u, v)


@pytest.mark.parametrize("fam", ALL, ids=lambda f: f"{f.kind}-{f.space.m}{f.space.n}")
def test_normalized_r_unitarity(fam):
    rng = np.random.default_rng(1)
    u, v = draw(fam, rng), draw(fam, rng)
    p = permutation_operator(fam.space)
    for k in range(1, fam.space.dim + 1):
        r_uv = build_normalized_r(fam, k, u, v)
        r_vu = build_normalized_r(fam, k, v, u)
        r21 = p @ r_vu @ p
        assert frobenius_distance(r_uv @ r21, np.eye(fam.space.dim ** 2)) < 1e-12


def test_normalized_r_at_equal_arguments_is_permutation():
    fam = family("rational", 2, 1)
    assert frobenius_distance(build_normalized_r(fam, 1, 0.2, 0.2), permutation_operator(fam.space)) < 1e-14


def test_normalized_r_singular():
    fam = family("rational", 2, 0)
    with pytest.raises(SingularParameterError):
        build_normalized_r(fam, 1, 1.0, 0.0)


@pytest.mark.parametrize("fam", ALL, ids=lambda f: f"{f.kind}-{f.space.m}{f.space.n}")
def test_ybe_and_unitarity(fam):
    rng = np.random.default_rng(7)
    for _ in range(5):
        assert check_ybe(fam, draw(fam, rng), draw(fam, rng), draw(fam, rng)) < 1e-10
        assert check_unitarity(fam, draw(fam, rng), draw(fam, rng)) < 1e-10


def test_perturbed_r_breaks_ybe():
    fam = family("rational", 2, 0)

    def perturbed(u, v):
        m = build_r(fam, u, v).matrix.copy()
        m[1, 2] += 1e-3
        return Operator(build_r(fam, u, v).factors, m)

    assert check_ybe(fam, 0.3, -0.7, 1.1, perturbed) > 1e-4


def test_unitarity_examples():
    fam = family("rational", 2, 0)
    sf = structure(fam)
    u, v = 0.4, -0.3
    assert sf.zeta(u, v) == pytest.approx((u - v - 1) * (v - u - 1))
    assert check_unitarity(fam, u, u) < 1e-14
    q = 1.3 + 0.2j
    tf = family("trig", 2, 0, q=q)
    u, v = 1.1, 0.7j
    assert structure(tf).zeta(u, v) == pytest.approx((u * q / v - v / (u * q)) * (v * q / u - u / (v * q)))


@pytest.mark.parametrize("fam", ALL, ids=lambda f: f"{f.kind}-{f.space.m}{f.space.n}")
def test_reduced_r_satisfies_ybe(fam):
    rng = np.random.default_rng(3)
    for k in range(2, fam.space.dim + 1):
        rf = lambda x, y, k=k: build_reduced_r(fam, k, x, y)
        assert check_ybe(fam, draw(fam, rng), draw(fam, rng), draw(fam, rng), rf) < 1e-10


def test_rational_even_r_is_symmetric():
    fam = family("rational", 3, 0)
    p = permutation_operator(fam.space)
    r = build_r(fam, 0.3 + 0.2j, -1.1)
    assert frobenius_distance(p @ r @ p, r) < 1e-14


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(ALL), st.integers(0, 2**31))
def test_structure_identities(fam, seed):
    rng = np.random.default_rng(seed)
    sf = structure(fam)
    u, v = draw(fam, rng), draw(fam, rng)
    d = fam.space.dim
    ref = sf.a(1, u, v) * sf.a(1, v, u)
    for k in range(1, d + 1):
        assert abs(sf.a(k, u, v) * sf.a(k, v, u) - ref) < 1e-12 * (1 + abs(ref))
    assert abs(sf.b(u, v) + sf.b(v, u)) < 1e-12 * (1 + abs(sf.b(u, v)))
    g = fam.space.grades
    for x in range(1, d + 1):
        for y in range(1, d + 1):
            if x != y:
                lhs = sf.c(x, y, u, v)
                rhs = (-1) ** (g[x - 1] + g[y - 1]) * sf.c(y, x, v, u)
                assert abs(lhs - rhs) < 1e-12 * (1 + abs(lhs))
