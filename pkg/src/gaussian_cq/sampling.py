"""Seeded random generators for property checks (canonical forms only)."""

import numpy as np
from scipy.linalg import expm

from .channel import GaussianChannel, make_channel
from .gaussian import GaussianState, make_state
from .symplectic import SymplecticSpace, canonical_form


def random_symplectic(modes: int, rng: np.random.Generator, scale: float = 0.5) -> np.ndarray:
    """``expm(Delta H)`` for a random symmetric ``H``; satisfies ``S^t Delta S = Delta``."""
    n = 2 * modes
    H = rng.normal(scale=scale, size=(n, n))
    return expm(canonical_form(modes) @ (H + H.T) / 2)


def random_covariance(modes: int, rng: np.random.Generator, pure: bool = False,
                      max_thermal: float = 2.0) -> np.ndarray:
    """Williamson-form covariance ``S^t diag(nu) S`` with ``nu >= 1/2``."""
    nu = np.full(modes, 0.5) if pure else 0.5 + rng.uniform(0, max_thermal, size=modes)
    S = random_symplectic(modes, rng)
    return S.T @ np.diag(np.repeat(nu, 2)) @ S


def random_state(space: SymplecticSpace, rng: np.random.Generator, pure: bool = False) -> GaussianState:
    return make_state(rng.normal(size=space.dim), random_covariance(space.modes, rng, pure), space)


def random_cq_channel(rng: np.random.Generator, max_in: int = 3, max_out: int = 2,
                      minimal_noise: bool = False) -> GaussianChannel:
    """Random c-q channel: ``K`` maps into a random isotropic subspace of ``Z_A``."""
    s_a = int(rng.integers(1, max_in + 1))
    s_b = int(rng.integers(1, max_out + 1))
    k = int(rng.integers(1, min(s_a, 2 * s_b) + 1))
    S = random_symplectic(s_a, rng)
    # q-directions of the first k modes pushed through a symplectic map span an isotropic subspace
    e = S[:, 0:2 * k:2]
    K = e @ rng.normal(size=(k, 2 * s_b))
    noise = random_covariance(s_b, rng, pure=minimal_noise)
    return make_channel(K, noise, SymplecticSpace.canonical(s_a), SymplecticSpace.canonical(s_b))
