"""Brute-force checks against dense diagonalization of the transfer matrix."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .chain import ChainSpec, build_transfer
from .vectors import BetheVector

__all__ = [
    "SpectrumReport",
    "SpectrumTooLargeError",
    "spectrum",
    "match_eigenvalue",
    "multiplicity",
    "eigenvector_residual",
    "check_commuting",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 2187


class SpectrumTooLargeError(ValueError):
    """The chain Hilbert space exceeds the configured dense-size cap."""


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of ``t(u0)``.

    ``diagonalizable`` is False when the eigenvector matrix is numerically
    singular (condition number above 1e12). ``trace_defect`` is
    ``|sum(eigenvalues) - tr t(u0)|``.
    """

    u0: complex
    eigenvalues: tuple[complex, ...]
    diagonalizable: bool
    trace_defect: float = 0.0


def spectrum(spec: ChainSpec, u0: complex, cap: int = DEFAULT_CAP) -> SpectrumReport:
    if spec.dim > cap:
        raise SpectrumTooLargeError(f"dimension {spec.dim} exceeds the cap {cap}")
    t = build_transfer(spec, u0).matrix
    vals, vecs = np.linalg.eig(t)
    cond = np.linalg.cond(vecs)
    trace_defect = float(abs(np.sum(vals) - np.trace(t)))
    return SpectrumReport(complex(u0), tuple(complex(v) for v in vals), bool(np.isfinite(cond) and cond < 1e12),
                          trace_defect)


def multiplicity(report: SpectrumReport, lam: complex, tol: float = 1e-7) -> int:
    """Number of eigenvalues with ``|x - lam| <= tol (1 + |lam|)``."""
    bound = tol * (1 + abs(lam))
    return sum(1 for x in report.eigenvalues if abs(x - lam) <= bound)


def match_eigenvalue(report: SpectrumReport, lam: complex, tol: float = 1e-7) -> bool:
    return multiplicity(report, lam, tol) > 0


def eigenvector_residual(spec: ChainSpec, phi: BetheVector | np.ndarray, lam_fun: Callable[[complex], complex],
                         samples: int | Sequence[complex] = 5, rng_seed: int = 0) -> float:
    """Max over sample points of ``|t(u0) phi - lam(u0) phi| / |phi|``.

    ``samples`` is either a count of random points or the points themselves.
    """
    state = phi.state if isinstance(phi, BetheVector) else np.asarray(phi, dtype=complex)
    norm = np.linalg.norm(state)
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("eigenvector residual of a zero vector")
    points = _sample_points(spec, samples, rng_seed)
    worst = 0.0
    for u0 in points:
        t = build_transfer(spec, u0).matrix
        res = np.linalg.norm(t @ state - lam_fun(u0) * state) / norm
        worst = max(worst, float(res))
    return worst


def _sample_points(spec: ChainSpec, samples: int | Sequence[complex], rng_seed: int) -> list[complex]:
    if not isinstance(samples, (int, np.integer)):
        return [complex(u) for u in samples]
    rng = np.random.default_rng(rng_seed)
    z = rng.uniform(-1, 1, size=samples) + 1j * rng.uniform(-1, 1, size=samples)
    if spec.family.is_rational:
        return [complex(u) for u in z]
    return [complex(np.exp(0.5 * u)) for u in z]


def check_commuting(spec: ChainSpec, u: complex, v: complex) -> float:
    """``|t(u) t(v) - t(v) t(u)|`` in the Frobenius norm."""
    tu = build_transfer(spec, u).matrix
    if u == v:
        return 0.0
    tv = build_transfer(spec, v).matrix
    return float(np.linalg.norm(tu @ tv - tv @ tu))
