import warnings
import numpy as np
import pytest
from qdeform.errors import LatticeMismatchError, NormalizationError, QNormWarning
from qdeform.qlattice.lattice import OperatorMatrix, build_lattice
from qdeform.qhilbert.states import (QPairedState, q_conjugate,
                                     q_inner_product, q_norm_squared,
                                     q_schwarz_defect, quadrature_weights,
                                     swapped)
from qdeform.qhilbert.operators import (apply_pair, expectation_is_real,
                                        expectation_value, fluctuation,
                                        hermiticity_report, position_operator,
                                        q_adjoint_defect)
from qdeform.qschrodinger.free import domain_clipped_lattice, plane_wave_pair

def identity(lattice):
    return OperatorMatrix(np.eye(lattice.size, dtype = complex),
                          lattice.deformation, (), lattice)

@pytest.fixture
def plane_waves():
    lattice = domain_clipped_lattice(1., 0.8, 16)
    return [plane_wave_pair(k, lattice) for k in (-1., 0.5, 1.)]

def test_paired_state_needs_one_lattice():
    a, b = build_lattice(1., 0.5, 6), build_lattice(2., 0.5, 6)
    with pytest.raises(LatticeMismatchError):
        QPairedState.from_functions(a, np.sin, np.cos).combine(
            QPairedState.from_functions(b, np.sin, np.cos))

def test_q_conjugate_is_an_involution(plane_waves):
    state = plane_waves[0]
    twice = q_conjugate(q_conjugate(state))
    assert twice.deformation.q == pytest.approx(state.deformation.q)
    assert np.array_equal(twice.psi_q.samples, state.psi_q.samples)
    assert np.array_equal(twice.psi_qinv.samples, state.psi_qinv.samples)
    once = q_conjugate(state)
    assert once.deformation.q == pytest.approx(1. / state.deformation.q)
    assert np.array_equal(once.psi_q.samples, np.conj(state.psi_qinv.samples))

def test_inner_product_value():
    lattice = build_lattice(1., 0.5, 4)
    phi = QPairedState.from_functions(lattice, np.ones_like, np.ones_like)
    psi = QPairedState.from_functions(lattice, lambda x: x, lambda x: -x)
    result = q_inner_product(phi, psi)
    assert result.value == pytest.approx(0.6640625)
    assert result.quadrature_branch == 'q'
    assert 0. <= result.boundary_weight_fraction <= 1.
    # the bra uses its 1/q member
    assert q_inner_product(psi, phi).value == pytest.approx(-0.6640625)

def test_quadrature_weights_branches():
    lattice = build_lattice(1., 0.5, 4)
    assert np.allclose(quadrature_weights(lattice), lattice.weights)
    assert np.allclose(quadrature_weights(lattice, 'q_inverse'),
                       lattice.points)

def test_inner_product_conjugate_symmetry(plane_waves):
    for phi in plane_waves:
        for psi in plane_waves:
            forward = q_inner_product(phi, psi).value
            backward = q_inner_product(swapped(psi), swapped(phi)).value
            assert forward == pytest.approx(np.conj(backward), rel = 1e-12,
                                            abs = 1e-14)

def test_inner_product_linearity(plane_waves):
    phi, psi, chi = plane_waves
    combined = q_inner_product(phi, psi.combine(chi, 2. - 1j, 0.5)).value
    expected = ((2. - 1j) * q_inner_product(phi, psi).value +
                0.5 * q_inner_product(phi, chi).value)
    assert combined == pytest.approx(expected, rel = 1e-12, abs = 1e-14)

def test_plane_waves_are_q_normalized(plane_waves):
    for state in plane_waves:
        norm = q_norm_squared(state)
        assert norm.value == pytest.approx(1., rel = 1e-10)
        assert norm.positive_real

def test_norm_flag_reports_negative_norm():
    lattice = build_lattice(1., 0.5, 6)
    state = QPairedState.from_functions(lattice, np.ones_like,
                                        lambda x: -np.ones_like(x))
    with pytest.warns(QNormWarning):
        norm = q_norm_squared(state)
    assert norm.value.real < 0
    assert not norm.positive_real
    rotated = QPairedState.from_functions(lattice, np.ones_like,
                                          lambda x: 1.j * np.ones_like(x))
    with pytest.warns(QNormWarning):
        assert not q_norm_squared(rotated).positive_real

def test_schwarz_defect_for_real_pairs():
    lattice = build_lattice(2., 0.5, 20)
    f = QPairedState.from_functions(lattice, lambda x: x, lambda x: x)
    g = QPairedState.from_functions(lattice, lambda x: 1. + x ** 2,
                                    lambda x: 1. + x ** 2)
    with warnings.catch_warnings():
        warnings.simplefilter('error')
        defect = q_schwarz_defect(f, g)
    assert defect.real >= 0
    assert q_schwarz_defect(f, f) == pytest.approx(0., abs = 1e-12)

def test_position_operator_is_q_hermitian(plane_waves):
    lattice = plane_waves[0].lattice
    X = position_operator(lattice)
    report = hermiticity_report(X, X, plane_waves)
    assert report.defect <= 1e-14
    assert report.states_tested == 3
    with pytest.raises(ValueError):
        hermiticity_report(X, X, plane_waves[:1])

def test_apply_pair_checks_dimensions(plane_waves):
    other = build_lattice(1., 0.5, 5)
    with pytest.raises(LatticeMismatchError):
        apply_pair(identity(other), identity(other), plane_waves[0])

def test_adjoint_defect_of_identity_vanishes(plane_waves):
    I = identity(plane_waves[0].lattice)
    assert q_adjoint_defect(I, I, *plane_waves[:2]) == 0

def test_expectation_of_identity(plane_waves):
    I = identity(plane_waves[0].lattice)
    for state in plane_waves:
        assert expectation_value(I, state) == pytest.approx(1., rel = 1e-10)
        assert expectation_is_real(I, state)
        assert fluctuation(I, state) == pytest.approx(0., abs = 1e-10)

def test_expectation_requires_normalization(plane_waves):
    state = plane_waves[0].scaled(2.)
    with pytest.raises(NormalizationError) as info:
        expectation_value(identity(state.lattice), state)
    assert info.value.norm == pytest.approx(4., rel = 1e-10)

def test_position_expectation_lies_in_lattice_range(plane_waves):
    state = plane_waves[1]
    X = position_operator(state.lattice)
    mean = expectation_value(X, state)
    assert abs(mean.imag) <= 1e-10 * abs(mean)
    assert 0 < mean.real < np.max(state.lattice.points)
