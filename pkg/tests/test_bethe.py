import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superchain.bethe import (
    RootSet,
    SingularConfigurationError,
    SolverConfig,
    analyticity_check,
    bethe_residual_cleared,
    bethe_residual_distinguished,
    bethe_residual_general,
    check_feasible,
    eigenvalue_lambda,
    is_singular,
    solve_bethe,
)
from superchain.chain import ChainSpec, weight_lambda
from superchain.graded import GradedSpace
from superchain.oracle import eigenvector_residual, match_eigenvalue, spectrum
from superchain.presets import PRESET_NAMES, preset, random_offshell
from superchain.rmatrix import Family, structure
from superchain.vectors import phi_supertrace


def magnon_chain():
    return preset("gl2").spec


def one(*levels):
    return RootSet(tuple(tuple(complex(x) for x in lvl) for lvl in levels))


def test_rootset_canonical_and_distance():
    rs = one([0.3 + 1j, -0.2, 0.3 - 1j])
    assert rs.canonical().levels[0] == (-0.2, 0.3 - 1j, 0.3 + 1j)
    flipped = one([-1.2, 0.5j]).canonical(multiplicative=True)
    assert flipped.levels[0] == (0.5j, 1.2)
    assert one([1, 2]).distance(one([2, 1])) == 0
    assert one([1], []).distance(one([1, 2], [])) == float("inf")
    assert RootSet.from_flat([1, 2, 3], [2, 1]).levels == ((1, 2), (3,))


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(residual_tol=0)
    with pytest.raises(ValueError):
        SolverConfig(seeds=-1)


def test_residual_examples():
    spec = magnon_chain()
    assert abs(bethe_residual_general(spec, one([0.5]))[0]) < 1e-15
    off = bethe_residual_general(spec, one([0.3]))[0]
    assert off == pytest.approx(0.09 / 0.49 - 1)
    assert bethe_residual_general(spec, one([])).size == 0


def test_singular_residual_names_factor():
    spec = magnon_chain()
    with pytest.raises(SingularConfigurationError, match="Lambda_1"):
        bethe_residual_general(spec, one([1.0]))
    with pytest.raises(SingularConfigurationError, match="a_2"):
        bethe_residual_general(spec, one([0.2, 1.2]))


def test_eigenvalue_examples():
    spec = magnon_chain()
    assert eigenvalue_lambda(spec, one([0.5]), 2.0) == pytest.approx(3.0)
    lam = weight_lambda(spec)
    assert eigenvalue_lambda(spec, one([]), 1.3) == pytest.approx(lam(1, 1.3) + lam(2, 1.3))
    sspec = ChainSpec(Family("rational-super", GradedSpace(1, 1), hbar=0.8), (0.25,))
    assert eigenvalue_lambda(sspec, one([]), 0.9 + 0.1j) == pytest.approx(-0.8)


@pytest.mark.parametrize("name", [n for n in PRESET_NAMES if n not in ("gl2", "uq-gl2", "gl11", "uq-gl11")])
def test_distinguished_matches_general(name):
    spec = preset(name).spec
    rng = np.random.default_rng(5)
    for _ in range(20):
        counts = list(rng.integers(0, 3, size=spec.space.dim - 1))
        rs = random_offshell(spec, counts, rng)
        a = bethe_residual_distinguished(spec, rs)
        b = bethe_residual_general(spec, rs)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_node_level_has_no_self_interaction():
    # level-2 equation of gl(2|1) depends on level-2 roots only through their own argument
    spec = preset("gl21").spec
    base = one([0.3 + 0.1j, -0.2], [0.7 - 0.4j, 0.1 + 0.9j])
    moved = one([0.3 + 0.1j, -0.2], [0.7 - 0.4j, 1.4 - 0.6j])
    assert bethe_residual_general(spec, base)[2] == pytest.approx(bethe_residual_general(spec, moved)[2])


def test_rank_one_reduction():
    for spec in (preset("gl2", L=3).spec, preset("gl11", L=3).spec, preset("uq-gl2", L=3).spec):
        sf = structure(spec.family)
        lam = weight_lambda(spec)
        rng = np.random.default_rng(2)
        rs = random_offshell(spec, [3], rng)
        u = rs.levels[0]
        res = bethe_residual_general(spec, rs)
        M = len(u)
        for k in range(M):
            prod = 1.0 + 0j
            for j in range(M):
                if j != k:
                    prod *= sf.a(2, u[k], u[j]) / sf.a(1, u[j], u[k])
            ratio = lam(1, u[k]) / lam(2, u[k])
            general_rhs = 1 / ratio - res[k]
            assert general_rhs * (-1) ** (M - 1) * prod == pytest.approx(1.0, rel=1e-12)


def test_cleared_form_vanishes_with_general():
    spec = preset("gl21", L=3).spec
    rs = one([0.4537 - 0.1492j, 0.5463 + 0.2825j], [1 + 0.0667j])
    # off-shell both are non-zero
    assert np.all(np.abs(bethe_residual_cleared(spec, rs)) > 1e-6)
    sols = solve_bethe(spec, [2, 1])
    assert sols
    for s in sols:
        assert np.max(np.abs(bethe_residual_cleared(spec, s))) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["gl21", "uq-gl21", "gl22", "uq-gl22"]), st.integers(0, 2**31))
def test_residual_permutation_invariance(name, seed):
    spec = preset(name).spec
    rng = np.random.default_rng(seed)
    counts = [int(c) for c in rng.integers(0, 3, size=spec.space.dim - 1)]
    rs = random_offshell(spec, counts, rng)
    shuffled = RootSet(tuple(tuple(rng.permutation(np.array(lvl, dtype=complex))) for lvl in rs.levels))
    a = np.sort_complex(bethe_residual_general(spec, rs))
    b = np.sort_complex(bethe_residual_general(spec, shuffled))
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_solver_magnon():
    spec = magnon_chain()
    sols = solve_bethe(spec, [1])
    assert len(sols) == 1
    assert sols[0].levels[0][0] == pytest.approx(0.5, abs=1e-12)
    assert solve_bethe(spec, [0]) == [RootSet.empty(1)]
    assert solve_bethe(spec, [1], SolverConfig(seeds=0)) == []


def test_solver_two_magnons_are_eigenvectors():
    spec = magnon_chain()
    for s in solve_bethe(spec, [2]):
        vec = phi_supertrace(spec, s)
        if vec.norm > 1e-10:
            assert eigenvector_residual(spec, vec, lambda u: eigenvalue_lambda(spec, s, u)) < 1e-8


def test_solver_inhomogeneous_two_magnons():
    spec = preset("gl2", inhomogeneities=(0.1, 0.3, -0.2, 0.5)).spec
    sols = solve_bethe(spec, [2])
    assert len(sols) >= 2
    rep = spectrum(spec, 0.4 + 0.3j)
    for s in sols:
        assert np.max(np.abs(bethe_residual_general(spec, s))) < 1e-10
        assert match_eigenvalue(rep, eigenvalue_lambda(spec, s, 0.4 + 0.3j), 1e-7)


def test_solver_is_deterministic():
    spec = preset("uq-gl21").spec
    assert solve_bethe(spec, [1, 1]) == solve_bethe(spec, [1, 1])


def test_infeasible_counts_rejected():
    spec = magnon_chain()
    with pytest.raises(ValueError):
        solve_bethe(spec, [3])
    with pytest.raises(ValueError):
        check_feasible(preset("gl21").spec, [0, 1])
    with pytest.raises(ValueError):
        solve_bethe(spec, [1, 0])


def test_analyticity_examples():
    spec = magnon_chain()
    assert analyticity_check(spec, one([0.5]), 1, 1) < 1e-8
    assert analyticity_check(spec, one([0.3]), 1, 1) > 1e-3


def test_is_singular():
    spec = preset("gl21").spec
    assert is_singular(spec, one([0.1], []))
    assert not is_singular(spec, one([0.2], []))
    tspec = preset("uq-gl21").spec
    assert is_singular(tspec, one([-1.1], []))


def test_continuum_solutions_are_rejected():
    # two level-1 roots on two sites: a one-parameter family solves the equations
    spec = preset("gl21").spec
    assert solve_bethe(spec, [2, 0]) == []
    loose = solve_bethe(spec, [2, 0], SolverConfig(seeds=8, reject_continuum=False))
    assert loose
    for rs in loose:
        assert np.max(np.abs(bethe_residual_general(spec, rs))) < 1e-10
        assert phi_supertrace(spec, rs).norm < 1e-10


def test_ill_conditioned_isolated_solution_is_kept():
    # one root pair is a near-string with a badly conditioned Jacobian
    spec = preset("gl2", inhomogeneities=(0.1, 0.3, -0.2, 0.5)).spec
    sols = solve_bethe(spec, [2])
    assert any(abs(abs(s.levels[0][0] - s.levels[0][1]) - 1) < 1e-2 for s in sols)


def test_cross_level_collision_is_singular():
    spec = preset("uq-gl22").spec
    assert is_singular(spec, one([0.8j], [0.7], [0.8j]))
    assert is_singular(spec, one([0.8j], [0.7], [-0.8j]))
    assert not is_singular(spec, one([0.8j], [0.7], [0.9]))
    assert is_singular(preset("gl21").spec, one([0.25], [0.25]))
