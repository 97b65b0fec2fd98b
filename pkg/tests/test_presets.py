import numpy as np
import pytest

from superchain.bethe import bethe_residual_general
from superchain.presets import (
    PRESET_NAMES,
    cross_check_preset,
    preset,
    printed_divergence,
    random_offshell,
    specialized_residual,
)


def test_unknown_preset():
    with pytest.raises(ValueError):
        preset("gl33")


def test_default_sizes():
    assert preset("gl2").spec.inhomogeneities == (0.0, 0.0)
    assert preset("gl21").spec.L == 2
    assert preset("gl44").spec.L == 1
    assert preset("uq-gl44", L=2).spec.L == 2
    assert preset("gl21", L=9).spec.L == 9
    assert len(preset("gl44").default_counts) == 7
    with pytest.raises(ValueError):
        preset("gl21", L=3, inhomogeneities=(0.1, 0.2))


def test_parameter_overrides():
    p = preset("gl21", hbar=0.5, inhomogeneities=(0.2, 0.3, 0.4))
    assert p.spec.family.param == 0.5 and p.spec.L == 3
    assert preset("uq-gl22", q=2.0).spec.family.param == 2.0


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_hand_written_tables_match_general(name):
    assert cross_check_preset(name, trials=50) < 1e-11


@pytest.mark.parametrize("name", ["gl21", "uq-gl21", "gl22", "uq-gl22", "gl44", "uq-gl44"])
def test_printed_sign_is_a_real_discrepancy(name):
    rep = printed_divergence(name, trials=5)
    assert rep.sign_only > 1e-3


def test_printed_factor_misprints_are_detected():
    assert printed_divergence("gl22", trials=5).factors_only > 1e-3
    assert printed_divergence("uq-gl22", trials=5).factors_only > 1e-3
    assert printed_divergence("gl21", trials=5).factors_only < 1e-11


def test_rank_one_presets_have_no_table():
    assert preset("gl2").specialized is None
    assert cross_check_preset("gl11") == 0.0


def test_specialized_residual_length():
    spec = preset("gl44").spec
    rs = random_offshell(spec, [1, 0, 2, 0, 0, 1, 0], np.random.default_rng(0))
    assert specialized_residual(spec, rs).shape == bethe_residual_general(spec, rs).shape == (4,)
