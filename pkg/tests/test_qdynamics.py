import numpy as np
import pytest
from qdeform.errors import (LatticeMismatchError, StabilityError,
                            UnsupportedDriftError)
from qdeform.qlattice.lattice import LatticeFunction, build_lattice
from qdeform.qlattice.calculus import jackson_derivative, jackson_integral
from qdeform.qdynamics.problem import (DiffusionSpec, DriftSpec, FPProblem,
                                       brownian_problem, linear_problem)
from qdeform.qdynamics.fokker_planck import (
    density_to_wavefunction, explicit_stability_bound, fp_evolve,
    fp_lattice_stationary, fp_operator_matrix, fp_rhs, fp_stationary,
    fp_step_matrix, fp_to_schrodinger, mapped_potential, phi_potential,
    positive_extent, resolve_scheme, stationary_flux, stationary_residual,
    stochastic_quantization, wavefunction_to_density)
from qdeform.qschrodinger.problem import PotentialKind

def fp_lattice(q, alpha = 1.):
    return build_lattice(positive_extent(alpha, q), q, 12)

@pytest.mark.parametrize('q, expected', [(0.5, 2. / 3.), (2., 1. / 3.)])
def test_phi_potential_of_linear_drift(q, expected):
    assert phi_potential(DriftSpec(1.), DiffusionSpec(1.), 1., q) == (
        pytest.approx(expected, rel = 1e-12))
    values = phi_potential(DriftSpec(2.), DiffusionSpec(0.5), [0., 1.], q)
    assert np.allclose(values, [0., 4. * expected])

def test_phi_potential_needs_monomial_drift():
    with pytest.raises(UnsupportedDriftError):
        phi_potential(DriftSpec(1., 'operator_valued'), DiffusionSpec(1.), 1.,
                      0.5)

def test_problem_arguments():
    lattice = build_lattice(1., 0.5, 8)
    with pytest.raises(ValueError):
        DriftSpec(0.)
    with pytest.raises(ValueError):
        DriftSpec(1., exponent = 1.5)
    with pytest.raises(ValueError):
        DiffusionSpec(-1.)
    with pytest.raises(ValueError):
        brownian_problem(1., 0., lattice)
    with pytest.raises(LatticeMismatchError):
        FPProblem(DriftSpec(1.), DiffusionSpec(1.), lattice, deformation = 0.8)
    assert brownian_problem(2., 4., lattice).diffusion.J2 == 0.5
    assert linear_problem(1., 3., lattice).alpha == 3.

@pytest.mark.parametrize('q', [0.8, 1.25])
@pytest.mark.parametrize('alpha', [0.5, 1.])
def test_stationary_density_argument_scaling(q, alpha):
    problem = brownian_problem(1., alpha, fp_lattice(q, alpha))
    F = fp_stationary(problem)
    assert jackson_integral(F).real == pytest.approx(1., rel = 1e-12)
    assert stationary_residual(F, problem, 'argument_scaling') <= 1e-8

@pytest.mark.parametrize('q', [0.8, 1.25, 2., 5.])
def test_positive_extent_keeps_profile_positive(q):
    top = positive_extent(1., q)
    assert top <= 2.
    assert (q - 1.) ** 2 * top ** 4 < 1.
    problem = brownian_problem(1., 1., build_lattice(top, q, 12))
    assert np.all(fp_stationary(problem).samples.real > 0)
    assert positive_extent(1., 1.) == 2.
    with pytest.raises(ValueError):
        positive_extent(1., q, margin = 1.)

def test_literal_reading_is_not_stationary():
    problem = brownian_problem(1., 1., fp_lattice(2.))
    F = fp_stationary(problem)
    scaled = stationary_residual(F, problem, 'argument_scaling')
    literal = stationary_residual(F, problem, 'literal_qx')
    assert literal > 1e3 * max(scaled, 1e-12)

def test_argument_scaling_needs_a_source():
    problem = brownian_problem(1., 1., fp_lattice(0.8))
    F = fp_stationary(problem)
    bare = LatticeFunction(F.lattice, F.samples)
    with pytest.raises(ValueError):
        stationary_flux(bare, problem, 'argument_scaling')
    assert stationary_residual(bare, problem, 'literal_qx') >= 0

def test_monomial_stationary_density():
    lattice = fp_lattice(0.8)
    problem = linear_problem(1., 1., lattice)
    F = fp_stationary(problem)
    assert np.all(F.samples.real > 0)
    assert jackson_integral(F).real == pytest.approx(1., rel = 1e-12)

@pytest.mark.parametrize('q', [0.8, 1.25, 2.])
def test_rhs_matches_generator_matrix(q):
    problem = brownian_problem(1., 1., fp_lattice(q))
    F = fp_stationary(problem)
    rhs = fp_rhs(F, problem, 'literal_qx')
    flux = stationary_flux(F, problem, 'literal_qx')
    again = problem.diffusion.J2 * jackson_derivative(flux).samples
    L = fp_operator_matrix(problem, 'q')
    generator = L.apply(F).samples
    interior = problem.lattice.interior_mask(2)
    # entries grow like ((q - 1) x)^-2, so rounding scales with |L| |f|
    scale = np.max((np.abs(L.entries) @ np.abs(F.samples))[interior])
    assert np.max(np.abs(rhs.samples - again)[interior]) <= 1e-10 * scale
    assert np.max(np.abs(generator - rhs.samples)[interior]) <= 1e-10 * scale
    with pytest.raises(ValueError):
        fp_operator_matrix(problem, 'sideways')

@pytest.mark.parametrize('q', [0.8, 1.25])
def test_implicit_step_is_stable(q):
    problem = brownian_problem(1., 1., fp_lattice(q))
    for dt in (1e-3, 1e-1, 10.):
        step = fp_step_matrix(problem, dt, 'implicit')
        assert np.max(np.abs(np.linalg.eigvals(step))) <= 1. + 1e-10

@pytest.mark.parametrize('q', [0.8, 1.25])
def test_lattice_stationary_density_is_constant(q):
    problem = brownian_problem(1., 1., fp_lattice(q))
    F = fp_lattice_stationary(problem)
    assert np.all(F.samples > 0)
    trajectory = fp_evolve(F, problem, 1e-3, 100, 'implicit')
    assert trajectory.scheme == 'implicit'
    assert len(trajectory.states) == 101
    assert trajectory.times[-1] == pytest.approx(0.1)
    final = trajectory.states[-1].samples
    assert np.max(np.abs(final - F.samples)) <= 1e-9 * np.max(F.samples)

def test_evolution_conserves_mass():
    lattice = fp_lattice(0.8)
    problem = brownian_problem(1., 1., lattice)
    F0 = fp_stationary(brownian_problem(1., 2., lattice))
    trajectory = fp_evolve(F0, problem, 1e-2, 50)
    assert np.max(trajectory.mass_drift) <= 1e-9
    assert not np.allclose(trajectory.states[-1].samples, F0.samples)

def classical_flux_generator(x, gamma, J2, cell):
    """
    Undeformed d/dx [2 gamma x f + J2 df/dx] on the points x: forward
    differences for the flux, zero flux past both ends, backward differences
    over the given cell widths outside
    """
    n = len(x)
    h = np.diff(x)
    C = np.zeros((n, n))
    C[:-1, :-1] += np.diag(-J2 / h + 2. * gamma * x[:-1])
    C[:-1, 1:] += np.diag(J2 / h)
    B = np.diag(-1. / cell) + np.diag(1. / cell[1:], -1)
    return B @ C

@pytest.mark.parametrize('q', [1. - 1e-5, 1. + 1e-5])
def test_evolution_classical_limit_matches_crank_nicolson(q):
    lattice = build_lattice(1., q, 32)
    problem = brownian_problem(1., 1., lattice)
    x = lattice.points
    F0 = LatticeFunction(lattice, np.exp(-2. * x ** 2))
    dt, steps = 1e-3, 50
    trajectory = fp_evolve(F0, problem, dt, steps, 'implicit')
    L = classical_flux_generator(x, 1., 1., (1. / q - 1.) * x)
    identity = np.eye(len(x))
    f = F0.samples.real
    for _ in range(steps):
        f = np.linalg.solve(identity - 0.5 * dt * L,
                            (identity + 0.5 * dt * L) @ f)
    final = trajectory.states[-1].samples
    assert np.max(np.abs(final - f)) <= 1e-4 * np.max(np.abs(f))

def test_explicit_step_above_bound_raises():
    problem = brownian_problem(1., 1., fp_lattice(0.8))
    F0 = fp_stationary(problem)
    bound = explicit_stability_bound(problem)
    with pytest.raises(StabilityError):
        fp_evolve(F0, problem, 2. * bound, 1, 'explicit')
    trajectory = fp_evolve(F0, problem, 0.5 * bound, 3, 'explicit')
    assert trajectory.scheme == 'explicit'

def test_evolve_arguments():
    problem = brownian_problem(1., 1., fp_lattice(0.8))
    F0 = fp_stationary(problem)
    with pytest.raises(ValueError):
        fp_evolve(F0, problem, 0., 1)
    with pytest.raises(ValueError):
        fp_evolve(F0, problem, 1e-3, 2.5)
    other = fp_stationary(brownian_problem(1., 1., fp_lattice(0.5)))
    with pytest.raises(LatticeMismatchError):
        fp_evolve(other, problem, 1e-3, 1)

def test_resolve_scheme():
    small, large = build_lattice(1., 0.8, 12), build_lattice(1., 0.8, 65)
    assert resolve_scheme(None, small, 1e-6, 1e-3) == 'explicit'
    assert resolve_scheme('auto', small, 1., 1e-3) == 'implicit'
    assert resolve_scheme('auto', large) == 'implicit'
    assert resolve_scheme('explicit', large) == 'explicit'
    with pytest.raises(ValueError):
        resolve_scheme('leapfrog', small)

@pytest.mark.parametrize('q', [0.5, 2.])
def test_mapped_potential_of_linear_drift(q):
    lattice = build_lattice(1., q, 8)
    potential = mapped_potential(linear_problem(1., 1., lattice))
    x = lattice.points
    assert np.allclose(potential(x), -0.5 + x ** 2 / 4.)

def test_stochastic_quantization():
    lattice = build_lattice(1., 0.8, 8)
    fp = linear_problem(2., 1., lattice)
    problem = stochastic_quantization(fp)
    assert problem.potential.kind is PotentialKind.BROWNIAN_MAPPED
    assert problem.kinetic_scale == pytest.approx(fp.diffusion.J2)
    assert problem.deformation.q == 0.8
    assert stochastic_quantization(fp, 2., 3.).mass == 3.
    with pytest.raises(UnsupportedDriftError):
        fp_to_schrodinger(brownian_problem(1., 1., lattice))

def test_density_wavefunction_transform():
    problem = linear_problem(1., 1., fp_lattice(0.8))
    F = fp_stationary(problem)
    psi = density_to_wavefunction(F, problem)
    assert np.allclose(wavefunction_to_density(psi, problem).samples,
                       F.samples)
    assert np.all(np.abs(psi.samples) >= np.abs(F.samples))
