"""Gaussian channels given by matrix data ``(K, alpha)``.

Orientation: canonical variables are row vectors and the channel acts as
``R_B' = R_A K + R_D K_D``. Hence ``K`` has shape ``(2 s_A, 2 s_B)``, a
state with mean ``m`` and covariance ``beta`` on A is sent to mean
``K^t m`` and covariance ``K^t beta K + alpha`` on B, and the channel is
valid iff ``alpha + (i/2)(Delta_B - K^t Delta_A K) >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoiseNotState, NoiseViolation, NotClassicalQuantum
from .gaussian import GaussianState, entropy, make_state, uncertainty_margin
from .symplectic import DEFAULT_TOL, SymplecticSpace, canonicalize_skew


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    input: SymplecticSpace
    output: SymplecticSpace
    K: np.ndarray
    noise: np.ndarray

    @property
    def commutator_defect(self) -> np.ndarray:
        """``Delta_B - K^t Delta_A K``."""
        return self.output.form - self.K.T @ self.input.form @ self.K


@dataclass(frozen=True, eq=False)
class Dilation:
    """Symplectic ``T = [[K, L], [K_D, L_D]]`` plus the environment state."""

    channel: GaussianChannel
    K_D: np.ndarray
    L: np.ndarray
    L_D: np.ndarray
    env_form: SymplecticSpace
    env_state: GaussianState

    @property
    def out_env_form(self) -> SymplecticSpace:
        """Form of the output environment E (equal to the input form here)."""
        return self.channel.input

    @property
    def T(self) -> np.ndarray:
        return np.block([[self.channel.K, self.L], [self.K_D, self.L_D]])

    @property
    def form_in(self) -> SymplecticSpace:
        return self.channel.input.direct_sum(self.env_form)

    @property
    def form_out(self) -> SymplecticSpace:
        return self.channel.output.direct_sum(self.out_env_form)


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def make_channel(K, noise, input: SymplecticSpace, output: SymplecticSpace,
                 tol: float = DEFAULT_TOL) -> GaussianChannel:
    K = np.asarray(K, dtype=float)
    noise = np.asarray(noise, dtype=float)
    if K.shape != (input.dim, output.dim):
        raise DimensionMismatch(f"K must be {(input.dim, output.dim)}, got {K.shape}")
    if noise.shape != (output.dim, output.dim):
        raise DimensionMismatch(f"noise must be {output.dim}x{output.dim}, got {noise.shape}")
    if np.abs(noise - noise.T).max(initial=0.0) > tol * max(1.0, np.abs(noise).max()):
        raise ValueError("noise is not symmetric")
    noise = 0.5 * (noise + noise.T)
    defect = output.form - K.T @ input.form @ K
    margin = float(np.linalg.eigvalsh(noise + 0.5j * defect)[0])
    if margin < -tol * max(1.0, np.linalg.norm(noise, 2)):
        raise NoiseViolation(f"noise + (i/2)Delta_K has eigenvalue {margin:.3e} < 0")
    return GaussianChannel(input, output, _readonly(K), _readonly(noise))


def is_cq(channel: GaussianChannel, tol: float = DEFAULT_TOL) -> bool:
    """Classical-quantum criterion ``K^t Delta_A K = 0``."""
    K = channel.K
    return bool(np.abs(K.T @ channel.input.form @ K).max() <= tol)


def apply(channel: GaussianChannel, state: GaussianState) -> GaussianState:
    if state.space != channel.input:
        raise DimensionMismatch("state does not live on the channel input space")
    K = channel.K
    return make_state(
        K.T @ state.mean, K.T @ state.covariance @ K + channel.noise, channel.output
    )


def minimal_dilation(channel: GaussianChannel, tol: float = DEFAULT_TOL) -> Dilation:
    """Dilation of a c-q channel with ``D = B``, ``E = A``, ``K_D = I``.

    ``L`` solves ``L^t M L = Delta_A`` for
    ``M = Delta_A + Delta_A K Delta_B^{-1} K^t Delta_A`` and
    ``L_D = -Delta_B^{-1} K^t Delta_A L``.
    """
    if not is_cq(channel, tol):
        raise NotClassicalQuantum("K^t Delta_A K != 0")
    d_a, d_b = channel.input.form, channel.output.form
    K = channel.K
    if uncertainty_margin(channel.noise, channel.output) < -tol * max(
        1.0, np.linalg.norm(channel.noise, 2)
    ):
        raise NoiseNotState("noise is not a valid covariance on the output space")

    M = d_a + d_a @ K @ np.linalg.solve(d_b, K.T @ d_a)
    M = 0.5 * (M - M.T)
    # S_M^t M S_M = J and S_A^t Delta_A S_A = J, so L = S_M S_A^{-1}
    S_M = canonicalize_skew(M, tol)
    S_A = canonicalize_skew(d_a, tol)
    L = S_M @ np.linalg.inv(S_A)
    L_D = -np.linalg.solve(d_b, K.T @ d_a @ L)
    env_state = make_state(None, channel.noise, channel.output, tol)
    return Dilation(
        channel=channel,
        K_D=_readonly(np.eye(channel.output.dim)),
        L=_readonly(L),
        L_D=_readonly(L_D),
        env_form=channel.output,
        env_state=env_state,
    )


def weak_complementary(dilation: Dilation, tol: float = DEFAULT_TOL) -> GaussianChannel:
    """Channel ``A -> E`` with matrix ``L`` and noise ``L_D^t alpha_D L_D``."""
    L_D = dilation.L_D
    noise = L_D.T @ dilation.env_state.covariance @ L_D
    return make_channel(dilation.L, noise, dilation.channel.input,
                        dilation.out_env_form, tol)


def entropy_gain(channel: GaussianChannel, state: GaussianState) -> float:
    """``S(Phi[rho]) - S(rho)`` in nats."""
    return entropy(apply(channel, state)) - entropy(state)


def identity_channel(space: SymplecticSpace) -> GaussianChannel:
    return make_channel(np.eye(space.dim), np.zeros((space.dim, space.dim)), space, space)


def example1_channel(N: float = 0.0) -> GaussianChannel:
    """Two-dimensional classical signal plus thermal noise with N quanta.

    Input modes ``(q1, p1, q2, p2)`` carry ``m_q = q1, m_p = q2``; output
    ``q' = q + q1, p' = p + q2``.
    """
    K = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    return make_channel(K, (N + 0.5) * np.eye(2),
                        SymplecticSpace.canonical(2), SymplecticSpace.canonical(1))


def example2_channel(sigma2: float = 1.0) -> GaussianChannel:
    """One-dimensional signal ``q' = q1 + q`` with squeezed-vacuum noise."""
    K = np.array([[1.0, 0.0], [0.0, 0.0]])
    noise = np.diag([sigma2, 1.0 / (4.0 * sigma2)])
    space = SymplecticSpace.canonical(1)
    return make_channel(K, noise, space, space)
