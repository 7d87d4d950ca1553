"""Gaussian states at the level of first and second moments.

Units: hbar = 1, so the vacuum covariance is I/2 and a covariance ``alpha``
describes a state iff ``alpha + (i/2) Delta >= 0``. Entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .errors import DimensionMismatch, UncertaintyViolation
from .symplectic import DEFAULT_TOL, SymplecticSpace, symplectic_eigenvalues

NATS_TO_BITS = 1.0 / np.log(2.0)
PURITY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class GaussianState:
    space: SymplecticSpace
    mean: np.ndarray
    covariance: np.ndarray

    @property
    def modes(self) -> int:
        return self.space.modes


def uncertainty_margin(covariance, space: SymplecticSpace) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``covariance + (i/2) Delta``."""
    herm = np.asarray(covariance, dtype=float) + 0.5j * space.form
    return float(np.linalg.eigvalsh(herm)[0])


def _check_covariance(covariance, space, tol):
    n = space.dim
    if covariance.shape != (n, n):
        raise DimensionMismatch(f"covariance must be {n}x{n}, got {covariance.shape}")
    scale = max(1.0, np.abs(covariance).max())
    if np.abs(covariance - covariance.T).max() > tol * scale:
        raise ValueError("covariance is not symmetric")
    # eigvalsh roundoff grows with the norm, so the threshold does too
    margin = uncertainty_margin(covariance, space)
    if margin < -tol * max(1.0, np.linalg.norm(covariance, 2)):
        raise UncertaintyViolation(
            f"covariance + (i/2)Delta has eigenvalue {margin:.3e} < 0"
        )


def make_state(mean, covariance, space: SymplecticSpace, tol: float = DEFAULT_TOL) -> GaussianState:
    """Validated Gaussian state; ``mean=None`` means centered."""
    covariance = np.array(covariance, dtype=float)
    mean = np.zeros(space.dim) if mean is None else np.array(mean, dtype=float)
    if mean.shape != (space.dim,):
        raise DimensionMismatch(f"mean must have length {space.dim}, got {mean.shape}")
    _check_covariance(covariance, space, tol)
    covariance = 0.5 * (covariance + covariance.T)
    mean.setflags(write=False)
    covariance.setflags(write=False)
    return GaussianState(space, mean, covariance)


def vacuum(space: SymplecticSpace) -> GaussianState:
    return make_state(None, 0.5 * np.eye(space.dim), space)


def g_function(x, tol: float = DEFAULT_TOL):
    """``g(x) = (x+1) ln(x+1) - x ln x``, the entropy of a thermal mode.

    Accepts scalars or arrays; inputs in ``[-tol, 0]`` are clamped to 0.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < -tol):
        raise ValueError(f"g is undefined for x < 0 (got min {x.min():.3e})")
    x = np.clip(x, 0.0, None)
    out = (x + 1.0) * np.log1p(x) - xlogy(x, x)
    return float(out) if out.ndim == 0 else out


def entropy_from_covariance(covariance, space: SymplecticSpace) -> float:
    """Von Neumann entropy (nats) of a Gaussian state with this covariance."""
    nu = symplectic_eigenvalues(covariance, space)
    return float(np.sum(g_function(nu - 0.5, tol=PURITY_TOL)))


def entropy(state: GaussianState) -> float:
    return entropy_from_covariance(state.covariance, state.space)


def is_pure(state: GaussianState, tol: float = PURITY_TOL) -> bool:
    nu = symplectic_eigenvalues(state.covariance, state.space)
    return bool(np.all(np.abs(nu - 0.5) <= tol))


def displace(state: GaussianState, shift) -> GaussianState:
    shift = np.asarray(shift, dtype=float)
    if shift.shape != state.mean.shape:
        raise DimensionMismatch(
            f"shift must have length {state.mean.shape[0]}, got {shift.shape}"
        )
    mean = state.mean + shift
    mean.setflags(write=False)
    return GaussianState(state.space, mean, state.covariance)
