"""Numerical workbench for graded integrable spin chains.

R-matrices of rational and trigonometric type on superspaces, closed-chain
transfer matrices, nested Bethe equations and their numerical solution,
Bethe vectors, and a dense-diagonalization oracle.
"""

from .graded import GradedSpace, Operator
from .rmatrix import Family, SingularParameterError, build_r
from .chain import ChainSpec, build_monodromy, build_transfer
from .bethe import RootSet, SolverConfig, SingularConfigurationError, bethe_residual_general, eigenvalue_lambda, solve_bethe
from .vectors import BetheVector, phi_supertrace
from .presets import PRESET_NAMES, Preset, preset

__all__ = [
    "GradedSpace",
    "Operator",
    "Family",
    "SingularParameterError",
    "build_r",
    "ChainSpec",
    "build_monodromy",
    "build_transfer",
    "RootSet",
    "SolverConfig",
    "SingularConfigurationError",
    "bethe_residual_general",
    "eigenvalue_lambda",
    "solve_bethe",
    "BetheVector",
    "phi_supertrace",
    "PRESET_NAMES",
    "Preset",
    "preset",
]
