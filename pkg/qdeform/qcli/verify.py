from dataclasses import dataclass, field
import numpy as np
from tqdm.auto import tqdm
from .. import __version__
from ..util import max_abs, relative_defect
from ..errors import QDeformError, DegradedSpectrumError, ExpansionError
from ..qcore.deformation import as_deformation
from ..qcore.funcs import (basic_number, q_binomial, q_pascal_defect,
                           basic_binomial_power, basic_binomial_sum)
from ..qcore.exp import (convergence_radius, q_exp, q_exp_values,
                         q_exp_inverse_defect, q_exp_addition_defect)
from ..qlattice.lattice import build_lattice, sample
from ..qlattice.calculus import (jackson_derivative, cumulative_jackson_integral,
                                 jackson_integral_callable,
                                 jackson_derivative_callable)
from ..qlattice.taylor import q_taylor_coefficients, q_taylor_reconstruct
from ..qhilbert.states import (QPairedState, q_inner_product, q_norm_squared,
                               q_schwarz_defect, swapped)
from ..qhilbert.operators import (position_operator, hermiticity_report,
                                  q_adjoint_defect, expectation_value,
                                  expansion_coefficients)
from ..qdynamics.problem import brownian_problem, linear_problem
from ..qdynamics.fokker_planck import (fp_stationary, stationary_residual,
                                       fp_rhs, fp_operator_matrix,
                                       fp_lattice_stationary, fp_evolve,
                                       fp_step_matrix, stationary_flux,
                                       stochastic_quantization, positive_extent)
from ..qschrodinger.problem import SchrodingerProblem
from ..qschrodinger.hamiltonian import (assemble_hamiltonian, adjoint_partner,
                                        classical_hamiltonian)
from ..qschrodinger.spectral import solve_stationary, evolve_spectral
from ..qschrodinger.free import (domain_clipped_lattice, plane_wave_pair,
                                 free_particle_residual, conjugate_pair_defect)

# deformations every run checks besides the requested one
REFERENCE_Q = {
    'combinatorics': (0.5, 2.),
    'exponential': (0.5, 2.),
    'jackson': (0.5, 2.),
    'fokker_planck': (0.8, 1.25),
    'free_particle': (0.9, 1.1, 1.25),
}
CLASSICAL_OFFSETS = (1e-2, 1e-3, 1e-4)
CLASSICAL_RTOL = 1e-2
TREND_SLOPE_TOL = 0.2

@dataclass(frozen = True)
class SuiteResult:
    """
    Outcome of one identity check

    Parameters:
    max_defect (float): largest defect over the samples
    tolerance (float): pass threshold
    samples (int): number of checked cases
    metadata (dict): free-form details, e.g. the deformations covered
    """
    max_defect: float
    tolerance: float
    samples: int
    metadata: dict = field(default_factory = dict)

    @property
    def passed(self):
        return bool(np.isfinite(self.max_defect) and
                    self.max_defect <= self.tolerance)

    def to_dict(self):
        return {'max_defect': self.max_defect, 'tolerance': self.tolerance,
                'passed': self.passed, 'samples': self.samples,
                **self.metadata}

@dataclass
class VerificationReport:
    """
    Parameters:
    suites (dict): identity name -> SuiteResult
    observations (dict): reported numbers without a pass/fail gate
    flags (dict): ambiguity settings used by the run
    environment (dict): version, q and lattice summary
    warnings (list of str): warnings raised during the run, deduplicated
    """
    suites: dict
    observations: dict
    flags: dict
    environment: dict
    warnings: list = field(default_factory = list)

    @property
    def passed(self):
        return all(result.passed for result in self.suites.values())

    def to_dict(self):
        return {'suites': {name: result.to_dict()
                           for name, result in self.suites.items()},
                'observations': self.observations,
                'flags': self.flags,
                'environment': self.environment,
                'passed': self.passed,
                'warnings': list(self.warnings)}

def run_verification(config):
    """
    Runs every identity suite and collects the report. The requested q is
    checked together with the fixed reference deformations of each suite

    Parameters:
    config (RunConfig): run configuration; q, hbar, mass, gamma, levels and
        the lattice keys are used

    Returns:
    report (VerificationReport): suites, observations, flags and environment
    """
    suites, observations = {}, {}
    flags = {'convention': config.convention, 'quadrature_branch': 'q',
             'partner': 'adjoint', 'dropped_eigenpairs': 0,
             'via_reciprocal': 0}
    groups = [('combinatorics', _combinatorics_suites),
              ('exponential', _exponential_suites),
              ('jackson', _jackson_suites),
              ('fokker_planck', _fokker_planck_suites),
              ('free_particle', _free_particle_suites),
              ('hilbert', _hilbert_suites),
              ('spectral', _spectral_suites),
              ('classical_limit', _classical_limit_suites)]
    pbar = groups
    if config.verbose:
        pbar = tqdm(pbar, leave = False)
    for name, run in pbar:
        if config.verbose:
            pbar.set_description(f'Verifying {name}')
        qs = _deformations(config, REFERENCE_Q.get(name, ()))
        try:
            results, observed = run(qs, config, flags)
        except QDeformError as error:
            results = {name: SuiteResult(np.inf, 0., 0,
                                         {'error': str(error)})}
            observed = {}
        suites.update(results)
        observations.update(observed)
    environment = {'version': __version__, 'q': config.q,
                   'lattice': {'lambda0': config.lambda0,
                               'count': config.count,
                               'branch': config.branch}}
    return VerificationReport(suites, observations, flags, environment)

################################################################################
############################### Suites #########################################
################################################################################

def _combinatorics_suites(qs, config, flags):
    rng = np.random.default_rng(0)
    pascal, symmetry, binomial, scaling = [], [], [], []
    for q in qs:
        for n in range(1, 21):
            for r in range(n + 1):
                pascal.append(q_pascal_defect(n, r, q))
                symmetry.append(relative_defect(q_binomial(n, r, q),
                                                q_binomial(n, n - r, q)))
        for x, y in rng.uniform(-2, 2, (50, 2)):
            n = int(rng.integers(0, 11))
            scale = max(basic_binomial_power(abs(x), abs(y), n, q), 1e-300)
            binomial.append(abs(basic_binomial_power(x, y, n, q) -
                                basic_binomial_sum(x, y, n, q)) / scale)
        for n in range(1, 41):
            scaling.append(relative_defect(basic_number(n, 1. / q),
                                           q ** (1 - n) * basic_number(n, q)))
    meta = {'q': list(qs)}
    return {'q_pascal': _result(pascal, 1e-10, meta),
            'q_binomial_symmetry': _result(symmetry, 1e-10, meta),
            'basic_binomial_sum_product': _result(binomial, 1e-10, meta),
            'basic_number_inverse_scaling': _result(scaling, 1e-10, meta)}, {}

def _exponential_suites(qs, config, flags):
    inverse, derivative, integral, addition = [], [], [], []
    for q in qs:
        q = as_deformation(q)
        radius = min(convergence_radius(q), convergence_radius(q.inverse()))
        s = min(1., 0.6 * radius)
        for x in s * np.array([-1., -0.5, 0.3, 1., 1.5]):
            inverse.append(q_exp_inverse_defect(x, q))
        for a in (1., -1.):
            top = min(2., 0.6 * convergence_radius(q))
            lattice = build_lattice(top, q, _sample_count(q.q))
            F = sample(lattice, lambda x: q_exp_values(a * x, q)[0])
            D = jackson_derivative(F)
            interior = lattice.interior_mask(1)
            derivative.append(max_abs(D.samples - a * F.samples, interior) /
                              max_abs(a * F.samples, interior))
            for x in top * np.array([-0.9, -0.4, 0.5, 0.9]):
                lhs = jackson_integral_callable(
                    lambda y: q_exp_values(a * y, q)[0], x, q)
                rhs = (q_exp(a * x, q).value - 1.) / a
                integral.append(relative_defect(lhs, rhs))
        s = min(1., 0.5 * radius)
        for x in s * np.array([-1., -0.5, 0.5, 1.]):
            for y in s * np.array([-1., -0.5, 0.5, 1.]):
                addition.append(q_exp_addition_defect(x, y, q))
    meta = {'q': list(qs)}
    return {'exp_inverse': _result(inverse, 1e-10, meta),
            'exp_derivative': _result(derivative, 1e-8, meta),
            'exp_integral': _result(integral, 1e-9, meta),
            'exp_addition': _result(addition, 1e-9, meta)}, {}

def _jackson_suites(qs, config, flags):
    rng = np.random.default_rng(1)
    fundamental, leibniz, monomial, taylor = [], [], [], []
    for q in qs:
        lattice = build_lattice(2., q, _sample_count(q))
        interior = lattice.interior_mask(1)
        for _ in range(200):
            poly = np.polynomial.Polynomial(rng.uniform(-1, 1,
                                            int(rng.integers(1, 8))))
            F = sample(lattice, poly)
            recovered = jackson_derivative(cumulative_jackson_integral(F))
            fundamental.append(max_abs(recovered.samples - F.samples,
                                       interior) / max(max_abs(F.samples),
                                                       1e-300))
        x = np.array([0.3, 0.7, 1.3])
        for _ in range(20):
            f = np.polynomial.Polynomial(rng.uniform(-1, 1, 4))
            g = np.polynomial.Polynomial(rng.uniform(-1, 1, 4))
            Dfg = jackson_derivative_callable(lambda t: f(t) * g(t), x, q)
            Df = jackson_derivative_callable(f, x, q)
            Dg = jackson_derivative_callable(g, x, q)
            scale = np.abs(Df * g(x)) + np.abs(f(q * x) * Dg) + 1e-300
            leibniz.append(np.max(np.abs(Dfg - Df * g(x) - f(q * x) * Dg) /
                                  scale))
            scale = np.abs(Df * g(q * x)) + np.abs(f(x) * Dg) + 1e-300
            leibniz.append(np.max(np.abs(Dfg - Df * g(q * x) - f(x) * Dg) /
                                  scale))
        for n in range(7):
            power = lambda t, n = n: t ** n
            exact = basic_number(n, q) * x ** (n - 1.) if n else 0. * x
            monomial.append(np.max(np.abs(
                jackson_derivative_callable(power, x, q) - exact) /
                np.maximum(np.abs(exact), 1.)))
            if n:
                inverse_power = lambda t, n = n: t ** (-n)
                exact = -basic_number(n, q) / q ** n * x ** (-n - 1.)
                monomial.append(np.max(relative_defect(
                    jackson_derivative_callable(inverse_power, x, q), exact)))
        for order in range(5):
            poly = np.polynomial.Polynomial(rng.uniform(-1, 1, order + 1))
            a = 0.7
            c = q_taylor_coefficients(poly, a, order, q)
            points = np.linspace(-1., 1.5, 11)
            rebuilt = q_taylor_reconstruct(c, a, points, q)
            taylor.append(np.max(np.abs(rebuilt - poly(points))) /
                          max(np.max(np.abs(poly(points))), 1e-300))
    meta = {'q': list(qs)}
    return {'fundamental_theorem': _result(fundamental, 1e-10, meta),
            'leibniz': _result(leibniz, 1e-10, meta),
            'monomial_rules': _result(monomial, 1e-12, meta),
            'taylor_reconstruction': _result(taylor, 1e-8, meta)}, {}

def _fokker_planck_suites(qs, config, flags):
    scaled, consistency, stability, constant = [], [], [], []
    literal = {}
    for q in qs:
        for alpha in (0.5, 1.):
            lattice = build_lattice(positive_extent(alpha, q), q, 12)
            problem = brownian_problem(config.gamma, alpha, lattice)
            F = fp_stationary(problem)
            scaled.append(stationary_residual(F, problem, 'argument_scaling'))
            literal[f'q={q:g},alpha={alpha:g}'] = stationary_residual(
                F, problem, 'literal_qx')
            rhs = fp_rhs(F, problem, 'literal_qx')
            flux = stationary_flux(F, problem, 'literal_qx')
            again = problem.diffusion.J2 * jackson_derivative(flux).samples
            interior = lattice.interior_mask(2)
            generator = fp_operator_matrix(problem, 'q')
            # rounding scale of the generator stencil, |L| |f|
            magnitude = np.abs(generator.entries) @ np.abs(F.samples)
            scale = max(max_abs(magnitude, interior), 1e-300)
            consistency.append(max_abs(rhs.samples - again, interior) / scale)
            consistency.append(max_abs(generator.apply(F).samples -
                                       rhs.samples, interior) / scale)
            for dt in (1e-3, 1e-1, 10.):
                step = fp_step_matrix(problem, dt, 'implicit')
                radius = np.max(np.abs(np.linalg.eigvals(step)))
                stability.append(max(radius - 1., 0.))
            F_lat = fp_lattice_stationary(problem)
            trajectory = fp_evolve(F_lat, problem, 1e-3, 100, 'implicit')
            constant.append(max_abs(trajectory.states[-1].samples -
                                    F_lat.samples) / max_abs(F_lat.samples))
            constant.append(float(np.max(trajectory.mass_drift)))
    meta = {'q': list(qs), 'alpha': [0.5, 1.]}
    suites = {
        'fp_stationary_argument_scaling': _result(scaled, 1e-8, meta),
        'fp_rhs_consistency': _result(consistency, 1e-9, meta),
        'fp_implicit_stability': _result(stability, 1e-10, meta),
        'fp_lattice_stationary_constant': _result(constant, 1e-9, meta),
    }
    return suites, {'fp_literal_qx_residual': literal}

def _free_particle_suites(qs, config, flags):
    residuals, pair = [], []
    for q in qs:
        count = _free_count(q)
        for k in (0.5, 1., 2.):
            lattice = domain_clipped_lattice(k, q, count)
            problem = SchrodingerProblem(lattice, hbar = config.hbar,
                                         mass = config.mass)
            residuals.append(free_particle_residual(k, problem))
            pair.append(conjugate_pair_defect(k, problem))
    meta = {'q': list(qs), 'k': [0.5, 1., 2.]}
    return {'free_particle_residual': _result(residuals, 1e-8, meta),
            'conjugate_pair_defect': _result(pair, 1e-8, meta)}, {}

def _hilbert_suites(qs, config, flags):
    q = as_deformation(config.q)
    lattice = domain_clipped_lattice(1., q, _free_count(q.q))
    basis = [plane_wave_pair(k, lattice) for k in (-1., -0.5, 0.5, 1.)]
    gaussian = QPairedState.from_functions(
        lattice, lambda x: q_exp_values(-x ** 2, q)[0],
        lambda x: q_exp_values(-x ** 2, q.inverse())[0], 'gaussian')
    odd = QPairedState.from_functions(
        lattice, lambda x: x * q_exp_values(-x ** 2, q)[0],
        lambda x: x * q_exp_values(-x ** 2, q.inverse())[0], 'odd gaussian')
    states = basis + [gaussian, odd]
    symmetry, linearity = [], []
    for phi in states:
        for psi in states:
            forward = q_inner_product(phi, psi, 'q').value
            backward = q_inner_product(swapped(psi), swapped(phi), 'q').value
            symmetry.append(relative_defect(forward, np.conj(backward)))
            mixed = psi.combine(gaussian, 0.3 - 0.2j, 1.5)
            combined = q_inner_product(phi, mixed).value
            first = (0.3 - 0.2j) * q_inner_product(phi, psi).value
            second = 1.5 * q_inner_product(phi, gaussian).value
            scale = max(abs(first) + abs(second), 1e-300)
            linearity.append(abs(combined - first - second) / scale)
    X = position_operator(lattice)
    position = hermiticity_report(X, X, states)
    problem = SchrodingerProblem(lattice, hbar = config.hbar,
                                 mass = config.mass)
    H_q, H_literal = assemble_hamiltonian(problem)
    K = adjoint_partner(H_q)
    scale = _operator_scale(H_q, states)
    adjoint = [abs(q_adjoint_defect(H_q, K, phi, psi)) / scale
               for phi in states for psi in states]
    literal = hermiticity_report(H_q, H_literal, states)
    survey = []
    for state in states:
        norm = q_norm_squared(state)
        survey.append({'state': state.label, 'norm': norm.value,
                       'positive_real': norm.positive_real})
    suites = {
        'inner_product_conjugate_symmetry': _result(symmetry, 1e-12),
        'inner_product_linearity': _result(linearity, 1e-12),
        'position_adjoint': SuiteResult(
            position.defect / _operator_scale(X, states), 1e-12,
            position.states_tested),
        'hamiltonian_q_hermiticity': _result(adjoint, 1e-10,
                                             {'partner': 'adjoint'}),
    }
    observed = {
        'literal_partner_defect': {
            'defect': literal.defect / scale,
            'interior_defect': literal.interior_defect / scale},
        'q_norm_survey': survey,
        'q_schwarz_defect': q_schwarz_defect(basis[2], gaussian),
    }
    return suites, observed

def _spectral_suites(qs, config, flags):
    lattice = build_lattice(2., config.q, 12)
    fp = linear_problem(config.gamma, 1., lattice)
    problem = stochastic_quantization(fp, config.hbar)
    levels = max(config.levels, 2)
    try:
        spectral = solve_stationary(problem, levels)
    except DegradedSpectrumError as error:
        failed = SuiteResult(np.inf, 1e-8, 0, {'error': str(error)})
        return {'biorthonormality': failed}, {}
    flags['dropped_eigenpairs'] = spectral.dropped
    gram = spectral.gram_matrix()
    states = spectral.states()
    psi = states[0].combine(states[1], 0.6, 0.8j)
    coefficients = expansion_coefficients(psi, spectral)
    H_q = assemble_hamiltonian(problem)[0]
    energy = expectation_value(H_q, psi)
    spectral_energy = np.sum(np.conj(coefficients.c_qinv) * coefficients.c_q *
                             spectral.eigenvalues_q)
    times = np.linspace(0., 10., 11)
    evolved = evolve_spectral(states[0], spectral, times, config.hbar)
    norm_drift = np.abs(evolved.norm_trace - evolved.norm_trace[0])
    t, s = 1.3, 2.1
    first = evolve_spectral(psi, spectral, [t], config.hbar).states[-1]
    chained = evolve_spectral(first, spectral, [s], config.hbar).states[-1]
    direct = evolve_spectral(psi, spectral, [t + s], config.hbar).states[-1]
    semigroup = (max_abs(chained.psi_q.samples - direct.psi_q.samples) /
                 max_abs(direct.psi_q.samples))
    meta = {'levels': spectral.levels}
    suites = {
        'biorthonormality': SuiteResult(
            max_abs(gram - np.eye(spectral.levels)), 1e-8, gram.size, meta),
        'expansion_round_trip': SuiteResult(
            coefficients.reconstruction_residual, 1e-8, 1, meta),
        'parseval': SuiteResult(abs(coefficients.parseval_sum - 1.), 1e-8, 1,
                                meta),
        'spectral_expectation': SuiteResult(
            relative_defect(energy, spectral_energy), 1e-8, 1, meta),
        'eigenstate_norm_conservation': _result(norm_drift, 1e-9, meta),
        'evolution_semigroup': SuiteResult(semigroup, 1e-10, 1, meta),
    }
    observed = {
        'eigenvalue_imaginary_max': max_abs(spectral.eigenvalues_q.imag),
        'gram_condition': spectral.gram_condition,
        'dropped_eigenpairs': spectral.dropped,
        'literal_partner_levels': _literal_levels(problem),
    }
    return suites, observed

def _classical_limit_suites(qs, config, flags):
    alpha = 1.
    x = np.linspace(0.1, 2., 20)
    oracle = np.exp(-alpha * (x ** 2 - x[0] ** 2))
    profile, spectrum, position = [], [], []
    trend = []
    for offset in CLASSICAL_OFFSETS:
        for q in (1. + offset, 1. - offset):
            lattice = build_lattice(2., q, 12)
            F = fp_stationary(brownian_problem(config.gamma, alpha, lattice))
            values = np.real(F.source(x) / F.source(x[0]))
            defect = max_abs(values - oracle) / max_abs(oracle)
            trend.append((offset, defect))
            if offset != CLASSICAL_OFFSETS[-1]:
                continue
            profile.append(defect)
            fp = linear_problem(config.gamma, alpha, lattice)
            problem = stochastic_quantization(fp, config.hbar)
            spectral = solve_stationary(problem, 3)
            H = classical_hamiltonian(lattice.points, problem.hbar,
                                      problem.mass,
                                      problem.potential.evaluate(lattice))
            reference = np.linalg.eigvals(H)
            for E in spectral.eigenvalues_q:
                nearest = reference[np.argmin(np.abs(reference - E))]
                spectrum.append(relative_defect(E, nearest))
            position.append(_position_spread_defect(lattice))
    offsets, defects = np.array(trend).T
    defects = np.maximum(defects, 1e-300)
    slope = np.polyfit(np.log(offsets), np.log(defects), 1)[0]
    suites = {
        'classical_limit_fp': _result(profile, CLASSICAL_RTOL),
        'classical_limit_spectrum': _result(spectrum, CLASSICAL_RTOL),
        'classical_limit_expectation': _result(position, CLASSICAL_RTOL),
        'classical_limit_trend': SuiteResult(abs(slope - 1.), TREND_SLOPE_TOL,
                                             len(trend), {'slope': slope}),
    }
    return suites, {}

################################################################################
######################### Utility functions ####################################
################################################################################

def _result(defects, tolerance, metadata = None):
    defects = np.asarray(defects, dtype = float)
    worst = float(np.max(defects)) if defects.size else 0.
    return SuiteResult(worst, tolerance, int(defects.size),
                       dict(metadata or {}))

def _deformations(config, reference):
    return tuple(sorted(set((float(config.q),) + tuple(reference))))

def _sample_count(q):
    """
    Points per half-line so that the innermost point sits near 1/40 of the
    outermost
    """
    return int(np.clip(np.ceil(np.log(40.) / abs(np.log(q))) + 1, 8, 64))

def _free_count(q):
    """
    Points per half-line keeping the innermost point near 1/5 of the
    outermost. Closer to the origin the second Jackson derivative amplifies
    series rounding beyond 1e-8
    """
    return int(np.clip(np.ceil(np.log(5.) / abs(np.log(q))) + 1, 6, 40))

def _operator_scale(A_q, states):
    w = states[0].lattice.weights
    scale = 0.
    for state in states:
        image = A_q.apply(state.psi_q).samples
        scale = max(scale, np.sum(w * np.abs(state.psi_qinv.samples) *
                                  np.abs(image)))
    return max(scale, 1e-300)

def _position_spread_defect(lattice):
    """
    <x^2> of the deformed Gaussian pair against the undeformed Gaussian on
    the same points and weights
    """
    q = lattice.deformation
    psi = QPairedState.from_functions(
        lattice, lambda x: q_exp_values(-x ** 2 / 2., q)[0],
        lambda x: q_exp_values(-x ** 2 / 2., q.inverse())[0])
    norm = q_norm_squared(psi).value
    psi = psi.scaled(1. / np.sqrt(norm))
    X = position_operator(lattice)
    deformed = expectation_value(X @ X, psi)
    x, w = lattice.points, lattice.weights
    reference = np.sum(w * x ** 2 * np.exp(-x ** 2)) / np.sum(w * np.exp(-x ** 2))
    return relative_defect(deformed, reference)

def _literal_levels(problem):
    try:
        return solve_stationary(problem, partner = 'literal').levels
    except (DegradedSpectrumError, ExpansionError):
        return 0
