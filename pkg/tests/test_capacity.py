import mpmath as mp
import numpy as np
import pytest

from gaussian_cq.capacity import (EnergyConstraint, environment_covariance,
                                  environment_eigenvalues, beta_from_mu, cea_sweep,
                                  chi_sequence, default_e1_grid, delta1, delta_environment,
                                  example1_capacity, example2_capacities, f1_f2, gain_ratio,
                                  gamma_sequence, max_output_entropy, mutual_information)
from gaussian_cq.channel import (apply, example1_channel, example2_channel, identity_channel,
                                 minimal_dilation)
from gaussian_cq.errors import (NonPositiveKn, NotClassicalQuantum, RankDeficient,
                                UncertaintyViolation)
from gaussian_cq.gaussian import entropy, g_function, make_state
from gaussian_cq.sampling import random_cq_channel, random_state
from gaussian_cq.symplectic import SymplecticSpace, symplectic_eigenvalues

ONE = SymplecticSpace.canonical(1)
TWO = SymplecticSpace.canonical(2)
HALF = EnergyConstraint(np.eye(2) / 2, 1.0)

G1 = 1.3862943611198906
C_R1 = 0.34657359027997264
CEA_R1 = 0.5533032997205157


def g_mp(x):
    x = mp.mpf(x)
    return (x + 1) * mp.log(x + 1) - (x * mp.log(x) if x > 0 else 0)


def test_energy_constraint_validation():
    with pytest.raises(ValueError):
        EnergyConstraint(np.diag([1.0, 0.0]), 1.0)
    with pytest.raises(ValueError):
        EnergyConstraint(np.eye(2), -1.0)


# ------------------------------------------------------------ mutual information

def test_mutual_information_pure_input_zero():
    ch = example2_channel(1.0)
    E = 1.3
    rho = make_state(None, np.diag([E, 1 / (4 * E)]), ONE)
    assert mutual_information(ch, minimal_dilation(ch), rho) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("E,E1,s2", [(1.0, 1.0, 1.0), (2.0, 3.0, 0.5), (0.4, 50.0, 2.0)])
def test_mutual_information_example2(E, E1, s2):
    ch = example2_channel(s2)
    rho = make_state(None, np.diag([E, E1]), ONE)
    expected = g_function(np.sqrt(E / (4 * s2) + 0.25) - 0.5) - delta1(E, s2, E1)
    assert mutual_information(ch, minimal_dilation(ch), rho) == pytest.approx(expected, abs=1e-11)


@pytest.mark.parametrize("E,E1", [(1.0, 1.0), (0.5, 0.5), (3.0, 10.0)])
def test_mutual_information_example1_environment(E, E1):
    ch = example1_channel(0.0)
    rho = make_state(None, np.diag([E, E1, E, E1]), TWO)
    expected = g_function(E) - delta_environment(E, E1)
    assert mutual_information(ch, minimal_dilation(ch), rho) == pytest.approx(expected, abs=1e-11)


def test_mutual_information_needs_matching_dilation():
    with pytest.raises(ValueError):
        mutual_information(example2_channel(1.0), minimal_dilation(example2_channel(1.0)),
                           make_state(None, np.eye(2), ONE))


@pytest.mark.parametrize("seed", range(15))
def test_mutual_information_bounded_by_output_entropy(seed):
    rng = np.random.default_rng(seed)
    ch = random_cq_channel(rng, minimal_noise=True)
    dil = minimal_dilation(ch)
    for _ in range(5):
        rho = random_state(ch.input, rng)
        assert mutual_information(ch, dil, rho) <= entropy(apply(ch, rho)) + 1e-8


# ------------------------------------------------------------ optimizer

@pytest.mark.parametrize("E", [0.1, 1.0, 10.0])
def test_max_output_entropy_example1(E):
    res = max_output_entropy(example1_channel(0.0), EnergyConstraint(np.eye(2) / 2, E))
    assert res.value == pytest.approx(float(g_mp(E)), abs=1e-4)
    assert res.converged
    c = EnergyConstraint(np.eye(2) / 2, E)
    assert c.energy(res.optimal_mu) == pytest.approx(E, rel=1e-6)
    np.testing.assert_allclose(res.optimal_mu, E * np.eye(2), atol=1e-3 * max(E, 1))


def test_max_output_entropy_single_restart():
    res = max_output_entropy(example1_channel(0.0), HALF, restarts=1, seed=99)
    assert res.value == pytest.approx(G1, abs=1e-6)


def test_max_output_entropy_anisotropic_weight():
    # one output mode: S = g(sqrt(det(mu + I/2)) - 1/2), off-diagonal terms only lower det,
    # so a brute-force scan of diagonal splits a*mu11 + b*mu22 = E is an exact oracle
    a, b, E = 0.25, 2.0, 1.5
    res = max_output_entropy(example1_channel(0.0), EnergyConstraint(np.diag([a, b]), E))
    t = np.linspace(0, 1, 200001)
    det = (t * E / a + 0.5) * ((1 - t) * E / b + 0.5)
    best = g_function(np.sqrt(det.max()) - 0.5)
    assert res.value == pytest.approx(best, abs=1e-6)


def test_max_output_entropy_zero_bound():
    res = max_output_entropy(example1_channel(0.0), EnergyConstraint(np.eye(2) / 2, 0.0))
    assert res.value == pytest.approx(0, abs=1e-12)
    np.testing.assert_array_equal(res.optimal_mu, 0)


def test_max_output_entropy_rank_deficient_example2():
    with pytest.raises(RankDeficient):
        max_output_entropy(example2_channel(1.0), HALF)


def test_max_output_entropy_not_cq():
    with pytest.raises(NotClassicalQuantum):
        max_output_entropy(identity_channel(ONE), HALF)


# ------------------------------------------------------------ gamma / chi

@pytest.mark.parametrize("n", [0, 3, 10])
def test_gamma_sequence_example1(n):
    eps = 2.0 ** -n
    expected = np.diag([eps, 1 / (4 * eps), eps, 1 / (4 * eps)])
    np.testing.assert_allclose(gamma_sequence(example1_channel(), n), expected, rtol=1e-12,
                               atol=1e-12)


def test_gamma_sequence_example2():
    np.testing.assert_allclose(gamma_sequence(example2_channel(1.0), 4),
                               np.diag([1 / 16, 4.0]), rtol=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_gamma_sequence_conditions(seed):
    ch = random_cq_channel(np.random.default_rng(seed))
    prev = np.inf
    for n in range(1, 12):
        gamma = gamma_sequence(ch, n)
        assert symplectic_eigenvalues(gamma, ch.input).min() >= 0.5 - 1e-9
        squeezed = ch.K.T @ gamma @ ch.K
        np.testing.assert_allclose(squeezed, 2.0 ** -n * ch.K.T @ ch.K, atol=1e-9)
        cur = np.abs(squeezed).max()
        assert cur < prev
        prev = cur


def test_gamma_sequence_not_cq():
    with pytest.raises(NotClassicalQuantum):
        gamma_sequence(identity_channel(ONE), 3)


def test_chi_sequence_converges_example1():
    ch = example1_channel(0.0)
    res = max_output_entropy(ch, HALF)
    beta0 = beta_from_mu(ch, res.optimal_mu)
    np.testing.assert_allclose(ch.K.T @ beta0 @ ch.K, res.optimal_mu, atol=1e-12)
    step = chi_sequence(ch, HALF, beta0, 30)
    assert step.chi_n == pytest.approx(G1, abs=1e-6)
    assert step.k_n == pytest.approx(1 - 2.0 ** -30)


def test_chi_sequence_nonpositive_k():
    ch = example1_channel(0.0)
    with pytest.raises(NonPositiveKn):
        chi_sequence(ch, HALF, np.eye(4), 0)


def test_chi_sequence_monotone_example1():
    ch = example1_channel(0.0)
    beta0 = beta_from_mu(ch, np.eye(2))
    chis = [chi_sequence(ch, HALF, beta0, n).chi_n for n in range(4, 30)]
    assert all(b >= a - 1e-10 for a, b in zip(chis, chis[1:]))
    assert chis[-1] <= G1 + 1e-12


# ------------------------------------------------------------ closed forms

def test_example1_capacity():
    assert example1_capacity(0, 1.0) == pytest.approx(G1, abs=1e-14)
    assert example1_capacity(0, 1e-12) == pytest.approx(0, abs=1e-10)
    assert example1_capacity(1, 1) == pytest.approx(3 * np.log(3) - 4 * np.log(2), abs=1e-13)


def test_example2_capacities():
    assert example2_capacities(1.0, 0.0) == (0.0, 0.0)
    C, C_ea = example2_capacities(1.0, 1.0)
    assert C == pytest.approx(C_R1, abs=1e-14)
    assert C_ea == pytest.approx(CEA_R1, abs=1e-14)
    for r in np.geomspace(1e-5, 1e5, 50):
        C, C_ea = example2_capacities(2.0, 2.0 * r)
        assert C_ea > C


def test_example2_capacities_scale_only_through_r():
    a = example2_capacities(0.5, 1.5)
    b = example2_capacities(2.0, 6.0)
    np.testing.assert_allclose(a, b, rtol=1e-14)


def test_delta1():
    E, s2 = 1.0, 1.0
    assert delta1(E, s2, 0.25) == pytest.approx(g_function(np.sqrt(0.5) - 0.5), abs=1e-14)
    assert delta1(E, s2, 1.0) == pytest.approx(0.12125109996779087, abs=1e-13)
    assert delta1(E, s2, 1e12) < 1e-12
    with pytest.raises(ValueError):
        delta1(E, s2, 0.1)


def test_delta_environment():
    for E in (0.2, 1.0, 7.0):
        assert delta_environment(E, 1 / (4 * E)) == pytest.approx(g_function(E), abs=1e-10)
    assert delta_environment(1.0, 1.0) == pytest.approx(0.41319791340604448, abs=1e-13)
    assert delta_environment(1.0, 1e12) < 1e-10
    with pytest.raises(ValueError):
        delta_environment(1.0, 0.2)


def test_environment_eigenvalues_formula():
    hi, lo = environment_eigenvalues(1.0, 1.0)
    assert (hi, lo) == pytest.approx((1.822875655532295, 0.822875655532295), abs=1e-14)
    nu = symplectic_eigenvalues(environment_covariance(1.0, 1.0), TWO)
    np.testing.assert_allclose(nu, [hi, lo], atol=1e-12)


def test_environment_covariance_matches_our_dilation_spectrum():
    ch = example1_channel(0.0)
    from gaussian_cq.channel import weak_complementary
    comp = weak_complementary(minimal_dilation(ch))
    for E, E1 in [(1.0, 1.0), (0.3, 2.0), (4.0, 0.0625)]:
        out = apply(comp, make_state(None, np.diag([E, E1, E, E1]), TWO))
        np.testing.assert_allclose(symplectic_eigenvalues(out.covariance, TWO),
                                   environment_eigenvalues(E, E1), atol=1e-10)


def test_f1_f2():
    assert f1_f2(1.0) == (0.0, 0.0)
    f1, f2 = f1_f2(np.sqrt(2))
    assert (f1, f2) == pytest.approx((C_R1, CEA_R1), abs=1e-14)
    x = np.geomspace(1.001, 1e3, 100)
    f1, f2 = f1_f2(x)
    assert np.all(f2 > f1)
    with pytest.raises(ValueError):
        f1_f2(0.5)


def test_gain_ratio():
    assert gain_ratio(1e12) < 1.05
    r = 1e-6
    expansion = -0.5 * np.log(r) + (1 + 2 * np.log(2)) / 2
    assert gain_ratio(r) == pytest.approx(8.100904672267001, abs=1e-9)
    assert gain_ratio(r) == pytest.approx(expansion, abs=1e-3)
    assert all(gain_ratio(r) > 1 for r in np.geomspace(1e-8, 1e8, 40))
    with pytest.raises(ValueError):
        gain_ratio(0.0)


# ------------------------------------------------------------ E1 sweep

def test_cea_sweep_example2():
    ch = example2_channel(1.0)
    grid = default_e1_grid(1.0)
    sweep = cea_sweep(ch, 1.0, grid)
    assert sweep[0][1] == pytest.approx(0, abs=1e-12)
    values = [i for _, i in sweep]
    assert all(b > a for a, b in zip(values, values[1:]))
    _, C_ea = example2_capacities(1.0, 1.0)
    assert max(values) <= C_ea + 1e-12
    (_, at_1e6), = cea_sweep(ch, 1.0, [1e6])
    assert C_ea - at_1e6 < 1e-3


def test_cea_sweep_example1_family():
    ch = example1_channel(0.0)
    sweep = cea_sweep(ch, 1.0, [0.25, 1.0, 100.0])
    expected = [g_function(1.0) - delta_environment(1.0, e1) for e1 in (0.25, 1.0, 100.0)]
    np.testing.assert_allclose([i for _, i in sweep], expected, atol=1e-11)


def test_cea_sweep_rejects_invalid_point():
    with pytest.raises(UncertaintyViolation):
        cea_sweep(example2_channel(1.0), 1.0, [0.1])
