from fractions import Fraction
import numpy as np
import pytest
from hypothesis import given, strategies as st
from qdeform.errors import (DivergentSeriesError, PrecisionLossError, QRangeError,
                            ReciprocalPathWarning)
from qdeform.qcore.deformation import DeformationParameter, as_deformation
from qdeform.qcore.funcs import (basic_number, basic_number_table,
                                 basic_factorial, q_binomial, q_pascal_defect,
                                 basic_binomial_power, basic_binomial_sum)
from qdeform.qcore.exact import (exact_basic_number, exact_basic_factorial,
                                 exact_q_binomial, exact_basic_binomial_power)
from qdeform.qcore.exp import (DomainFlag, convergence_radius, q_exp,
                               q_exp_values, q_exp_inverse_defect,
                               q_exp_addition_defect, q_plane_wave,
                               plane_wave_unit_modulus_defect)

st_q = st.fractions(min_value = Fraction(1, 10), max_value = 3,
                    max_denominator = 16).filter(lambda q: q != 1)
st_n = st.integers(min_value = 0, max_value = 30)

def test_deformation_partner_is_linked():
    q = DeformationParameter(1.3)
    assert q.inverse().q == pytest.approx(1 / 1.3)
    assert q.inverse().inverse() is q
    assert as_deformation(q) is q
    assert DeformationParameter(1 + 1e-10).is_classical
    with pytest.raises(ValueError):
        DeformationParameter(-1.)

@pytest.mark.parametrize('n, q, expected', [(0, 0.7, 0.), (3, 2., 7.),
                                            (5, 1., 5.), (4, 0.5, 1.875)])
def test_basic_number_values(n, q, expected):
    assert basic_number(n, q) == pytest.approx(expected, rel = 1e-15)

@given(n = st_n, q = st_q)
def test_basic_number_matches_exact(n, q):
    exact = float(exact_basic_number(n, q))
    assert basic_number(n, float(q)) == pytest.approx(exact, rel = 1e-12)

def test_basic_number_table_matches_scalar():
    table = basic_number_table(20, 1.7)
    assert np.allclose(table, [basic_number(n, 1.7) for n in range(21)],
                       rtol = 1e-15, atol = 0)

def test_basic_number_rejects_negative_index():
    with pytest.raises(ValueError):
        basic_number(-1, 2.)

@pytest.mark.parametrize('n, expected', [(0, 1.), (3, 21.), (4, 315.)])
def test_basic_factorial_values(n, expected):
    assert basic_factorial(n, 2.) == expected

@given(n = st.integers(min_value = 0, max_value = 15), q = st_q)
def test_basic_factorial_matches_exact(n, q):
    exact = float(exact_basic_factorial(n, q))
    assert basic_factorial(n, float(q)) == pytest.approx(exact, rel = 1e-12)

def test_basic_factorial_overflow_names_index():
    with pytest.raises(QRangeError) as info:
        basic_factorial(200, 10.)
    assert 2 <= info.value.k <= 200

@pytest.mark.parametrize('n, r, q, expected', [(4, 0, 3., 1.), (4, 2, 1., 6.),
                                               (4, 2, 2., 35.), (4, 5, 2., 0.),
                                               (4, -1, 2., 0.)])
def test_q_binomial_values(n, r, q, expected):
    assert q_binomial(n, r, q) == pytest.approx(expected, rel = 1e-14)

@given(n = st.integers(min_value = 1, max_value = 20), data = st.data(),
       q = st_q)
def test_q_binomial_pascal_and_symmetry(n, data, q):
    r = data.draw(st.integers(min_value = 0, max_value = n))
    value = q_binomial(n, r, float(q))
    assert value == pytest.approx(float(exact_q_binomial(n, r, q)), rel = 1e-10)
    assert value == pytest.approx(q_binomial(n, n - r, float(q)), rel = 1e-10)
    assert q_pascal_defect(n, r, float(q)) <= 1e-10

def test_basic_binomial_power_values():
    assert basic_binomial_power(1., 2., 0, 2.) == 1.
    assert basic_binomial_power(1., 1., 2, 2.) == 6.
    for k in range(1, 6):
        assert basic_binomial_power(0.7, -0.7, k, 1.5) == 0.

@given(x = st.fractions(-2, 2, max_denominator = 8),
       y = st.fractions(-2, 2, max_denominator = 8),
       n = st.integers(min_value = 0, max_value = 10), q = st_q)
def test_basic_binomial_sum_equals_product(x, y, n, q):
    exact = float(exact_basic_binomial_power(x, y, n, q))
    scale = float(exact_basic_binomial_power(abs(x), abs(y), n, q)) or 1.
    product = basic_binomial_power(float(x), float(y), n, float(q))
    total = basic_binomial_sum(float(x), float(y), n, float(q))
    assert abs(product - exact) <= 1e-12 * scale
    assert abs(total - exact) <= 1e-10 * scale

@given(n = st.integers(min_value = 1, max_value = 40),
       q = st.floats(min_value = 0.2, max_value = 3.).filter(
           lambda q: abs(q - 1.) > 1e-6))
def test_basic_number_inverse_scaling(n, q):
    assert basic_number(n, 1. / q) == pytest.approx(
        q ** (1 - n) * basic_number(n, q), rel = 1e-10)

def test_convergence_radius():
    assert convergence_radius(0.5) == 2.
    assert convergence_radius(2.) == np.inf
    assert convergence_radius(1.) == np.inf

def test_q_exp_values():
    assert q_exp(0., 0.5).value == 1.
    assert q_exp(1., 2.).value.real == pytest.approx(2.384231, abs = 1e-6)
    assert q_exp(0.8, 1.).value.real == pytest.approx(np.exp(0.8), rel = 1e-14)
    result = q_exp(0.3, 0.5)
    assert result.domain_flag is DomainFlag.INSIDE
    assert result.terms_used > 1
    assert result.truncation_bound < 1e-14

def test_q_exp_close_to_one_approaches_exp():
    for offset in (1e-3, -1e-3):
        value = q_exp(1.5, 1. + offset).value.real
        assert value == pytest.approx(np.exp(1.5), rel = 1e-2)

def test_q_exp_divergent_outside_disc():
    with pytest.raises(DivergentSeriesError) as info:
        q_exp(3., 0.5)
    assert info.value.radius == 2.
    with pytest.raises(DivergentSeriesError):
        q_exp(2.5j, 0.5)

def test_q_exp_reciprocal_path():
    with pytest.warns(ReciprocalPathWarning):
        result = q_exp(-3., 0.5)
    assert result.domain_flag is DomainFlag.VIA_RECIPROCAL
    inner = q_exp(3., 2.).value
    assert result.value == pytest.approx(1. / inner, rel = 1e-13)
    with pytest.warns(ReciprocalPathWarning):
        assert q_exp(-1.5, 2.).domain_flag is DomainFlag.VIA_RECIPROCAL

def test_q_exp_large_negative_matches_product_form():
    k = np.arange(4000)
    for z, q in ((-100., 1.1), (-64., 1.2), (-7., 2.)):
        expected = np.prod(1. + (1. - 1. / q) * q ** -k * z)
        with pytest.warns(ReciprocalPathWarning):
            result = q_exp(z, q)
        assert result.domain_flag is DomainFlag.VIA_RECIPROCAL
        assert result.value.real == pytest.approx(expected, rel = 1e-10)
        assert result.truncation_bound <= 1e-12 * max(abs(expected), 1.)
    with pytest.warns(ReciprocalPathWarning):
        assert q_exp(-100., 1.1).value.real == pytest.approx(0.0011587,
                                                            rel = 1e-4)

def test_q_exp_cancelling_sum_is_rerouted():
    q = 1. - 1e-6
    with pytest.warns(ReciprocalPathWarning):
        result = q_exp(-20., q)
    assert result.domain_flag is DomainFlag.VIA_RECIPROCAL
    assert result.value.real == pytest.approx(np.exp(-20.), rel = 1e-3)
    with pytest.raises(PrecisionLossError) as info:
        q_exp(40.j, 1.)
    assert info.value.lost > 1e-10

@pytest.mark.parametrize('offset', [1e-6, -1e-6])
def test_q_exp_classical_limit_regression(offset):
    x = np.linspace(-5., 5., 41)
    values, _ = q_exp_values(x, 1. + offset)
    assert np.all(np.abs(values.real - np.exp(x)) <= 1e-4 * np.exp(x))
    assert np.all(values.imag == 0.)

@pytest.mark.parametrize('q', [0.5, 0.9, 1.25, 2.])
def test_q_exp_increasing_and_convex_on_real_domain(q):
    if q < 1:
        x = np.linspace(-8., 0.9 / (1. - q), 60)
    else:
        x = np.linspace(-0.9 * q / (q - 1.), 4., 60)
    values, _ = q_exp_values(x, q)
    assert np.all(values.real > 0.)
    assert np.all(np.diff(values.real) > 0.)
    assert np.all(np.diff(values.real, 2) > 0.)

def test_q_exp_values_flags():
    values, flags = q_exp_values(np.array([0.1, -3.]), 0.5)
    assert values.shape == (2,)
    assert list(flags) == ['inside', 'via_reciprocal']

@pytest.mark.parametrize('x, q', [(0., 2.), (1.5, 2.), (0.3, 0.5), (-1., 0.5),
                                  (0.9, 1.25)])
def test_q_exp_inverse_identity(x, q):
    assert q_exp_inverse_defect(x, q) <= 1e-10

@pytest.mark.parametrize('q', [0.5, 0.9, 1.25, 2.])
def test_q_exp_addition_law(q):
    for x in (-0.5, 0.25, 0.5):
        for y in (-0.5, 0.3):
            assert q_exp_addition_defect(x, y, q) <= 1e-9

def test_plane_wave():
    assert q_plane_wave(1.3, 0., 1.2, 0.5) == 0.5
    assert q_plane_wave(1., 0.7, 1. + 1e-12) == pytest.approx(np.exp(0.7j))
    for x in (0.2, 1., 3.):
        assert plane_wave_unit_modulus_defect(1., x, 1.2) <= 1e-12
