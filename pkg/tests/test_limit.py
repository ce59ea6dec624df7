import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from memwalk.errors import InvalidInputError
from memwalk.limit import (
    SUPPORT_EDGE,
    LimitLaw,
    delta_mass,
    delta_mass_k_integral,
    empirical_rescaled_moment,
    f_k,
    h_j,
    integrate_fk,
    ks_distance,
    limit_cdf,
    limit_cdf_at,
    limit_law,
    poly_coeffs,
    theoretical_moment,
    two_state_density,
    two_state_limit_cdf,
    x_space_moment,
)
from memwalk.spectral import hadamard_eigenvalues, stationary_total
from memwalk.walk import ANTISYMMETRIC_INIT, SYMMETRIC_INIT, CoinParams, InitialState, evolve, HADAMARD

from conftest import inits, random_inits
from oracles import EDGE, fk_poly_integral, fk_quad

R2 = np.sqrt(2)
# int x^2 f_K over the support, from the closed-form antiderivative
X2_MASS = fk_poly_integral(0, 0, 1)


# -- density f_K and quadrature ---------------------------------------------------------


def test_f_k_examples():
    assert f_k(0.0) == pytest.approx(1 / np.pi, abs=1e-15)
    assert f_k(0.8) == 0.0 and f_k(-0.8) == 0.0
    assert f_k(SUPPORT_EDGE) == 0.0
    xs = np.linspace(-0.7, 0.7, 57)
    np.testing.assert_array_equal(f_k(xs), f_k(-xs))


def test_oracle_closed_forms_are_consistent():
    assert fk_poly_integral(1, 0, 0) == pytest.approx(1.0, abs=1e-15)
    assert fk_poly_integral(0, 1, 0) == pytest.approx(0.0, abs=1e-15)
    assert X2_MASS == pytest.approx(1 - 1 / R2, abs=1e-15)
    assert fk_quad(lambda x: x * x) == pytest.approx(X2_MASS, abs=1e-12)


@pytest.mark.parametrize("power", [0, 1, 2, 3, 4, 6])
def test_integrate_fk_full_support(power):
    ours = integrate_fk(lambda x: x**power)
    assert ours == pytest.approx(fk_quad(lambda x: x**power), abs=1e-8)


@pytest.mark.parametrize("a, b", [(-0.5, 0.2), (0.0, 1.0), (-1.0, -0.3), (0.1, 0.6)])
@pytest.mark.parametrize("coeffs", [(1, 0, 0), (0.5, -0.3, 2.0), (0.0, 1.0, -1.0)])
def test_integrate_fk_intervals(a, b, coeffs):
    c0, c1, c2 = coeffs
    ours = integrate_fk(lambda x: c0 + c1 * x + c2 * x * x, a, b)
    assert ours == pytest.approx(fk_poly_integral(c0, c1, c2, a, b), abs=1e-8)


def test_integrate_fk_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        integrate_fk(lambda x: x, 1.0, 0.0)
    with pytest.raises(InvalidInputError):
        integrate_fk(lambda x: x, panels=7)
    assert integrate_fk(lambda x: 1 + 0 * x, 0.8, 0.9) == 0.0


# -- delta mass and coefficients ----------------------------------------------------------


def test_delta_examples():
    assert delta_mass(SYMMETRIC_INIT) == pytest.approx(1 / R2, abs=1e-12)
    assert delta_mass(ANTISYMMETRIC_INIT) == pytest.approx(0.0, abs=1e-12)
    assert delta_mass(InitialState(0, 0, 1, 0)) == pytest.approx(1 - R2 / 4, abs=1e-12)


@pytest.mark.parametrize("init", random_inits(21, 15) + [SYMMETRIC_INIT, ANTISYMMETRIC_INIT])
def test_delta_dual_routes(init):
    assert delta_mass(init) == pytest.approx(delta_mass_k_integral(init), abs=1e-8)
    assert delta_mass(init) == pytest.approx(stationary_total(init), abs=1e-10)


def test_poly_coeff_examples():
    np.testing.assert_allclose(poly_coeffs(SYMMETRIC_INIT), (0, 0, 1), atol=1e-15)
    np.testing.assert_allclose(poly_coeffs(InitialState(1, 0, 0, 0)), (0.5, 0, -0.5), atol=1e-15)
    assert poly_coeffs(ANTISYMMETRIC_INIT)[0] == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("j", range(4))
def test_basis_inits_normalize(j):
    init = InitialState(*np.eye(4)[j])
    law = limit_law(init)
    assert law.delta + fk_poly_integral(law.c0, law.c1, law.c2) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(inits())
def test_normalization_and_positivity(init):
    law = limit_law(init)
    assert law.delta + law.continuous_mass() == pytest.approx(1.0, abs=1e-8)
    assert law.delta + fk_poly_integral(law.c0, law.c1, law.c2) == pytest.approx(1.0, abs=1e-12)
    xs = np.linspace(-SUPPORT_EDGE, SUPPORT_EDGE, 2001)[1:-1]
    assert np.min(law.density(xs)) >= -1e-10
    assert -1e-12 <= law.delta <= 1 + 1e-12


# -- CDF -------------------------------------------------------------------------------------


def test_cdf_examples():
    law = limit_law(SYMMETRIC_INIT)
    assert limit_cdf(law, -1, 1) == pytest.approx(1.0, abs=1e-8)
    assert limit_cdf(law, 0.9, 1.0) == 0.0
    left = limit_cdf(law, -1, -1e-300)
    right = limit_cdf(law, 1e-300, 1)
    assert left == pytest.approx((1 - 1 / R2) / 2, abs=1e-8)
    assert right == pytest.approx(left, abs=1e-12)
    assert limit_cdf_at(law, -1e-12) == pytest.approx(left, abs=1e-8)
    assert limit_cdf_at(law, 0.0) == pytest.approx(left + 1 / R2, abs=1e-8)
    with pytest.raises(InvalidInputError):
        limit_cdf(law, 1, 0)


@pytest.mark.parametrize("init", random_inits(22, 5))
def test_cdf_matches_oracle(init):
    law = limit_law(init)
    for a, b in [(-0.6, -0.1), (-0.3, 0.4), (0.05, 0.7)]:
        atom = law.delta if a <= 0 <= b else 0.0
        assert limit_cdf(law, a, b) == pytest.approx(atom + fk_poly_integral(law.c0, law.c1, law.c2, a, b), abs=1e-8)


# -- group velocity and moments ---------------------------------------------------------------


def test_h_examples():
    assert h_j(0.0, 3) == 0.0
    ks = np.linspace(-np.pi, np.pi, 100001)
    assert np.max(np.abs(h_j(ks, 3))) == pytest.approx(1 / R2, abs=1e-6)
    np.testing.assert_array_equal(h_j(ks, 3), -h_j(ks, 4))
    with pytest.raises(InvalidInputError):
        h_j(0.0, 1)


@settings(max_examples=300, deadline=None)
@given(st.floats(-np.pi, np.pi))
def test_h_matches_finite_difference(k):
    step = 1e-5
    for j, idx in ((3, 2), (4, 3)):
        lp, lm, l0 = (hadamard_eigenvalues(q)[idx] for q in (k + step, k - step, k))
        fd = 1j * (lp - lm) / (2 * step) / l0
        assert abs(fd.imag) <= 1e-7
        assert abs(fd.real - h_j(k, j)) <= 1e-7


def test_moment_examples():
    assert theoretical_moment(SYMMETRIC_INIT, 0) == pytest.approx(1.0, abs=1e-10)
    x4 = fk_quad(lambda x: x**4)
    assert theoretical_moment(SYMMETRIC_INIT, 2) == pytest.approx(x4, abs=1e-8)
    assert theoretical_moment(ANTISYMMETRIC_INIT, 2) == pytest.approx(1 - 1 / R2, abs=1e-8)
    law = limit_law(ANTISYMMETRIC_INIT)
    assert theoretical_moment(ANTISYMMETRIC_INIT, 1) == pytest.approx(x_space_moment(law, 1), abs=1e-6)
    with pytest.raises(InvalidInputError):
        theoretical_moment(SYMMETRIC_INIT, 2, gridsize=128)
    with pytest.raises(InvalidInputError):
        x_space_moment(law, -1)


@pytest.mark.parametrize("init", random_inits(23, 8))
@pytest.mark.parametrize("r", range(5))
def test_moment_duality(init, r):
    law = limit_law(init)
    k_side = theoretical_moment(init, r)
    assert k_side == pytest.approx(x_space_moment(law, r), abs=1e-6)
    oracle = (law.delta if r == 0 else 0.0) + fk_quad(lambda x: x**r * (law.c0 + law.c1 * x + law.c2 * x * x))
    assert k_side == pytest.approx(oracle, abs=1e-6)


def test_empirical_moments_small_t():
    for t in (1, 5, 30):
        s = evolve(SYMMETRIC_INIT, HADAMARD, t)
        assert empirical_rescaled_moment(s, 0) == pytest.approx(1.0, abs=1e-10)
        assert empirical_rescaled_moment(s, 1) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(InvalidInputError):
        empirical_rescaled_moment(evolve(SYMMETRIC_INIT, HADAMARD, 0), 1)


@pytest.mark.slow
@pytest.mark.parametrize("init", [SYMMETRIC_INIT, ANTISYMMETRIC_INIT])
def test_empirical_moments_t2000(init):
    s = evolve(init, HADAMARD, 2000)
    for r in (1, 2):
        assert abs(empirical_rescaled_moment(s, r) - theoretical_moment(init, r)) <= 1e-2


# -- KS distance ------------------------------------------------------------------------------


def test_ks_localized_walk_is_zero():
    # swapping block parks the walker: every even time it sits back at the origin
    coin = CoinParams(0, 1, 1, 0)
    s = evolve(InitialState(1, 0, 0, 0), coin, 40)
    assert ks_distance(s, LimitLaw(1.0, 0.0, 0.0, 0.0)) <= 1e-12


def test_ks_rejects_t0():
    with pytest.raises(InvalidInputError):
        ks_distance(evolve(SYMMETRIC_INIT, HADAMARD, 0), limit_law(SYMMETRIC_INIT))


@pytest.mark.slow
@pytest.mark.parametrize("init", [SYMMETRIC_INIT, ANTISYMMETRIC_INIT])
def test_ks_decreases_and_meets_threshold(init):
    law = limit_law(init)
    d500 = ks_distance(evolve(init, HADAMARD, 500), law)
    d2000 = ks_distance(evolve(init, HADAMARD, 2000), law)
    assert d2000 < d500
    assert d2000 <= 0.05


# -- 2-state reference -----------------------------------------------------------------------


def test_two_state_examples():
    assert two_state_limit_cdf(1 / R2, 1j / R2, -1, 1) == pytest.approx(1.0, abs=1e-8)
    assert two_state_limit_cdf(1, 0, 0, 1) == pytest.approx(fk_poly_integral(1, -1, 0, 0, 1), abs=1e-8)
    assert two_state_limit_cdf(1, 0, 0, 1) == pytest.approx(0.25, abs=1e-8)
    xs = np.linspace(-0.7, 0.7, 11)
    np.testing.assert_allclose(two_state_density(1 / R2, 1j / R2, xs), f_k(xs), atol=1e-15)
    assert np.all(two_state_density(1, 0, np.array([-0.9, 0.75, 1.0])) == 0)
    with pytest.raises(InvalidInputError):
        two_state_limit_cdf(1, 1, -1, 1)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, np.pi / 2), st.floats(-np.pi, np.pi))
def test_two_state_total_mass(theta, phi):
    a2, b2 = np.cos(theta), np.exp(1j * phi) * np.sin(theta)
    assert two_state_limit_cdf(a2, b2, -1, 1) == pytest.approx(1.0, abs=1e-8)
    assert EDGE == SUPPORT_EDGE
