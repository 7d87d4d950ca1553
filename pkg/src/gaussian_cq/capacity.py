"""Mutual information, constrained output entropy and capacity formulas.

All quantities are in nats. ``EnergyConstraint(weight, bound)`` stands for
the input constraint ``Tr rho H <= bound`` with ``H = R K weight K^t R^t``,
which for centered Gaussian inputs with covariance ``beta`` reads
``Sp(weight K^t beta K) <= bound``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag, orth
from scipy.optimize import minimize
from scipy.special import xlogy

from .channel import Dilation, GaussianChannel, apply, is_cq, minimal_dilation, weak_complementary
from .errors import NonConvergence, NonPositiveKn, NotClassicalQuantum, RankDeficient
from .gaussian import GaussianState, entropy, entropy_from_covariance, g_function, make_state
from .symplectic import DEFAULT_TOL, complete_isotropic_basis


@dataclass(frozen=True, eq=False)
class EnergyConstraint:
    weight: np.ndarray
    bound: float

    def __post_init__(self):
        w = np.array(self.weight, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weight must be square, got {w.shape}")
        if np.abs(w - w.T).max() > DEFAULT_TOL * max(1.0, np.abs(w).max()):
            raise ValueError("weight is not symmetric")
        if np.linalg.eigvalsh(w)[0] <= 0:
            raise ValueError("weight must be strictly positive definite")
        if not self.bound >= 0:
            raise ValueError(f"bound must be nonnegative, got {self.bound}")
        w.setflags(write=False)
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bound", float(self.bound))

    def energy(self, mu) -> float:
        """``Sp(weight mu)`` for an output-side covariance ``mu = K^t beta K``."""
        return float(np.trace(self.weight @ mu))


@dataclass(frozen=True)
class CapacityResult:
    value: float
    optimal_mu: np.ndarray
    iterations: int
    converged: bool
    residual: float


@dataclass(frozen=True)
class EnsembleStep:
    n: int
    eps_n: float
    gamma_n: np.ndarray
    k_n: float
    chi_n: float


def mutual_information(channel: GaussianChannel, dilation: Dilation,
                       state: GaussianState) -> float:
    """``I(rho, Phi) = S(rho) + S(Phi[rho]) - S(Phi_w[rho])``."""
    if dilation.channel is not channel:
        raise ValueError("dilation does not belong to this channel")
    comp = weak_complementary(dilation)
    return entropy(state) + entropy(apply(channel, state)) - entropy(apply(comp, state))


def _require_cq(channel, tol=DEFAULT_TOL):
    if not is_cq(channel, tol):
        raise NotClassicalQuantum("K^t Delta_A K != 0")


def _tril_from(params, d):
    C = np.zeros((d, d))
    C[np.tril_indices(d)] = params
    return C


def max_output_entropy(channel: GaussianChannel, constraint: EnergyConstraint, *,
                       restarts: int = 4, seed: int = 0, max_evals: int = 100_000,
                       ftol: float = 1e-10) -> CapacityResult:
    """Maximize the output entropy over ``mu >= 0`` with ``Sp(weight mu) <= bound``.

    ``mu = C C^t`` with ``C`` lower triangular, rescaled so the constraint is
    active (the objective increases with ``mu``). A Nelder-Mead search is
    restarted from seeded random points and polished from the incumbent
    until the objective stops moving by more than ``ftol`` (relative).
    """
    _require_cq(channel)
    d = channel.output.dim
    if np.linalg.matrix_rank(channel.K) < d:
        raise RankDeficient("Ran K^t != Z_B; output covariances are not all reachable")
    if constraint.weight.shape != (d, d):
        raise ValueError(f"constraint weight must be {d}x{d}")
    alpha, space, E = channel.noise, channel.output, constraint.bound

    if E == 0:
        mu0 = np.zeros((d, d))
        return CapacityResult(entropy_from_covariance(alpha, space), mu0, 0, True, 0.0)

    def scaled_mu(params):
        C = _tril_from(params, d)
        mu = C @ C.T
        t = constraint.energy(mu)
        return mu * (E / t) if t > 0 else None

    def objective(params):
        mu = scaled_mu(params)
        if mu is None:
            return 0.0
        return -entropy_from_covariance(mu + alpha, space)

    rng = np.random.default_rng(seed)
    n_par = d * (d + 1) // 2
    evals = 0
    best = None
    for _ in range(max(1, restarts)):
        x0 = rng.normal(size=n_par)
        prev = np.inf
        while evals < max_evals:
            res = minimize(objective, x0, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-14, "adaptive": True,
                                    "maxfev": max_evals - evals})
            evals += res.nfev
            x0 = res.x / np.linalg.norm(res.x)
            if abs(prev - res.fun) <= ftol * max(1.0, abs(res.fun)):
                break
            prev = res.fun
        if best is None or res.fun < best.fun:
            best = res

    h = 1e-5
    x = best.x / np.linalg.norm(best.x)
    grad = np.array([
        (objective(x + h * ei) - objective(x - h * ei)) / (2 * h) for ei in np.eye(n_par)
    ])
    residual = float(np.abs(grad).max())
    converged = evals < max_evals and residual < 1e-4
    if not converged:
        raise NonConvergence(
            "output-entropy maximization did not converge",
            diagnostics={"evaluations": evals, "residual": residual, "value": -best.fun},
        )
    mu0 = scaled_mu(best.x)
    return CapacityResult(-float(best.fun), mu0, evals, converged, residual)


def beta_from_mu(channel: GaussianChannel, mu) -> np.ndarray:
    """A solution ``beta`` of ``K^t beta K = mu`` (pseudoinverse)."""
    Kp = np.linalg.pinv(channel.K)
    return Kp.T @ np.asarray(mu, dtype=float) @ Kp


def gamma_sequence(channel: GaussianChannel, n: int, eps: float | None = None) -> np.ndarray:
    """Input covariance squeezed along ``Ran K``.

    In the adapted basis ``{e, h, g}`` of ``Ran K`` this is
    ``diag(eps I_k, I_k / (4 eps), I/2)`` with ``eps = 2**-n`` unless given,
    so it is a valid covariance and ``K^t gamma K = eps K^t K``.
    """
    _require_cq(channel)
    eps = 2.0 ** (-n) if eps is None else float(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    split = complete_isotropic_basis(orth(channel.K), channel.input)
    k = split.e_block.shape[1]
    m = split.g_block.shape[1]
    adapted = block_diag(eps * np.eye(k), np.eye(k) / (4 * eps), 0.5 * np.eye(m))
    B_inv = np.linalg.inv(split.basis)
    gamma = B_inv.T @ adapted @ B_inv
    return 0.5 * (gamma + gamma.T)


def chi_sequence(channel: GaussianChannel, constraint: EnergyConstraint, beta0, n: int,
                 eps: float | None = None) -> EnsembleStep:
    """Holevo quantity of the displaced-``gamma_n`` ensemble with signal covariance ``k_n beta0``."""
    gamma = gamma_sequence(channel, n, eps)
    eps_n = 2.0 ** (-n) if eps is None else float(eps)
    K, alpha, space = channel.K, channel.noise, channel.output
    k_n = 1.0 - float(np.trace(gamma @ K @ constraint.weight @ K.T)) / constraint.bound
    if k_n <= 0:
        raise NonPositiveKn(f"k_n = {k_n:.3e} <= 0 at n = {n}; take n larger")
    squeezed = K.T @ gamma @ K
    signal = K.T @ np.asarray(beta0, dtype=float) @ K
    chi = (entropy_from_covariance(squeezed + k_n * signal + alpha, space)
           - entropy_from_covariance(squeezed + alpha, space))
    return EnsembleStep(n, eps_n, gamma, k_n, chi)


def example1_capacity(N: float, E: float) -> float:
    """Unassisted capacity ``g(N + E) - g(N)`` of the two-dimensional signal channel."""
    return g_function(N + E) - g_function(N)


def example2_capacities(sigma2: float, E: float) -> tuple[float, float]:
    """``(C, C_ea)`` for the one-dimensional signal channel at SNR ``r = E / sigma2``."""
    if sigma2 <= 0 or E < 0:
        raise ValueError("need sigma2 > 0 and E >= 0")
    r = E / sigma2
    C = 0.5 * np.log1p(r)
    # (sqrt(1+r) - 1)/2 without cancellation
    x = r / (2.0 * (np.sqrt(1.0 + r) + 1.0))
    return float(C), g_function(x)


def gain_ratio(r: float) -> float:
    """``C_ea / C`` for the one-dimensional signal channel."""
    if r <= 0:
        raise ValueError("gain ratio is undefined for r <= 0")
    C, C_ea = example2_capacities(1.0, r)
    return C_ea / C


def _check_domain(E, E1):
    if E <= 0 or E * E1 < 0.25 * (1 - 1e-12):
        raise ValueError(f"need E > 0 and E*E1 >= 1/4, got E={E}, E1={E1}")


def delta1(E: float, sigma2: float, E1: float) -> float:
    _check_domain(E, E1)
    return (g_function(np.sqrt(E * E1 + E / (4 * sigma2)) - 0.5)
            - g_function(np.sqrt(E * E1) - 0.5))


def environment_eigenvalues(E: float, E1: float) -> tuple[float, float]:
    """Closed-form symplectic eigenvalues of the environment output for Example 1."""
    E1t = E1 + 0.5 + E / 4
    return (np.sqrt(E) * (np.sqrt(E1t) + 0.5 * np.sqrt(E)),
            np.sqrt(E) * (np.sqrt(E1t) - 0.5 * np.sqrt(E)))


def environment_covariance(E: float, E1: float) -> np.ndarray:
    """Environment covariance for input ``diag(E, E1, E, E1)`` through Example 1 at N = 0."""
    E1t = E1 + 0.5 + E / 4
    h = E / 2
    return np.array([
        [E, 0.0, 0.0, h],
        [0.0, E1t, -h, 0.0],
        [0.0, -h, E, 0.0],
        [h, 0.0, 0.0, E1t],
    ])


def delta_environment(E: float, E1: float) -> float:
    _check_domain(E, E1)
    hi, lo = environment_eigenvalues(E, E1)
    return g_function(hi - 0.5) + g_function(lo - 0.5) - 2 * g_function(np.sqrt(E * E1) - 0.5)


def cea_sweep(channel: GaussianChannel, E: float, E1_grid) -> list[tuple[float, float]]:
    """Mutual information along inputs ``diag(E, E1)`` on every input mode."""
    dilation = minimal_dilation(channel)
    s = channel.input.modes
    out = []
    for E1 in E1_grid:
        cov = np.kron(np.eye(s), np.diag([E, E1]))
        state = make_state(None, cov, channel.input)
        out.append((float(E1), mutual_information(channel, dilation, state)))
    return out


def default_e1_grid(E: float, points: int = 60, top: float = 1e8) -> np.ndarray:
    return np.geomspace(1.0 / (4.0 * E), top, points)


def f1_f2(x):
    """``f1 = ln x`` and ``f2 = g((x - 1)/2)`` in the variable ``x = sqrt(1 + r)``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 1):
        raise ValueError("f1_f2 requires x >= 1")
    f1 = np.log(x)
    f2 = xlogy((x + 1) / 2, (x + 1) / 2) - xlogy((x - 1) / 2, (x - 1) / 2)
    if f1.ndim == 0:
        return float(f1), float(f2)
    return f1, f2
