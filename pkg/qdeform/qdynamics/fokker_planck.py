from dataclasses import dataclass
import numpy as np
from scipy.linalg import lu_factor, lu_solve
from tqdm.auto import tqdm
from .problem import Convention
from ..qcore.deformation import as_deformation
from ..qcore.exp import q_exp_values
from ..qcore.funcs import basic_number
from ..qlattice.lattice import LatticeFunction, OperatorMatrix, sample
from ..qlattice.calculus import (dilate, jackson_derivative,
                                 jackson_derivative_matrix, dilatation_matrix,
                                 jackson_integral, jackson_integral_callable,
                                 jackson_derivative_callable)
from ..qschrodinger.problem import (PotentialSpec, PotentialKind,
                                    SchrodingerProblem)
from ..errors import (UnsupportedDriftError, StabilityError,
                      LatticeMismatchError)

AUTO_IMPLICIT_COUNT = 64
# below this |log q| the Jackson sum of a monomial is taken in closed form
CALLABLE_LOG_MIN = 1e-4

@dataclass(frozen = True)
class FPTrajectory:
    """
    Parameters:
    times (np.array): times of the stored states, starting at 0
    states (list of LatticeFunction): densities at each time
    mass_drift (np.array): |int f(t) d_q x - int f(0) d_q x| at each time
    scheme (str): 'explicit' or 'implicit'
    """
    times: np.ndarray
    states: list
    mass_drift: np.ndarray
    scheme: str

def phi_potential(drift, diffusion, x, q):
    """
    Generalized potential of a monomial drift

                      1     x
        Phi (x) = - ----   int  J1(y) d y
           q         J2     0          q

    evaluated as a Jackson integral

    Parameters:
    drift (DriftSpec): monomial drift
    diffusion (DiffusionSpec): diffusion coefficient
    x (float or np.array): upper limit(s)
    q (float or DeformationParameter): deformation parameter

    Returns:
    phi (float or np.array): Phi_q(x)
    """
    _require_monomial(drift, 'Phi_q')
    q = as_deformation(q)
    x = np.asarray(x, dtype = float)
    values = np.empty(x.shape)
    for index, xi in np.ndenumerate(x):
        values[index] = -_drift_integral(drift, float(xi), q) / diffusion.J2
    if values.ndim == 0:
        return float(values)
    return values

def stationary_flux(F, problem, convention = None):
    """
    Zero-flux profile of a density, divided by J2

        D f(x) - J1(x) f(x) / J2                           (monomial drift)
         q
        D f(x) + (gamma / J2) x (q f(s x) + f(x))          (operator-valued)
         q

    where s x = q x under literal_qx and sqrt(q) x under argument_scaling. The
    sqrt(q) x values come from F.source

    Parameters:
    F (LatticeFunction): density on the problem lattice
    problem (FPProblem): problem
    convention (Convention or None): defaults to problem.convention

    Returns:
    flux (LatticeFunction): zero-flux profile
    """
    lattice = _check_on_problem(F, problem)
    derivative = jackson_derivative(F)
    if problem.drift.is_monomial:
        drift_term = -problem.drift.monomial(lattice.points) * F.samples
        drift_term = drift_term / problem.diffusion.J2
        padded = derivative.padded_rows
    else:
        scaled, padded = _scaled_samples(F, problem, convention)
        rate = problem.drift.gamma / problem.diffusion.J2
        drift_term = rate * lattice.points * (problem.deformation.q * scaled +
                                              F.samples)
        padded = tuple(sorted(set(padded) | set(derivative.padded_rows)))
    return LatticeFunction(lattice, derivative.samples + drift_term,
                           padded_rows = padded)

def stationary_residual(F, problem, convention = None):
    """
    Largest interior modulus of the zero-flux profile (see stationary_flux)

    Parameters:
    F (LatticeFunction): density
    problem (FPProblem): problem
    convention (Convention or None): defaults to problem.convention

    Returns:
    residual (float): max |flux| over rows whose stencil stays on the lattice
    """
    flux = stationary_flux(F, problem, convention)
    interior = F.lattice.interior_mask(1)
    return float(np.max(np.abs(flux.samples[interior])))

def fp_rhs(F, problem, convention = None):
    """
    Right-hand side of the deformed Fokker-Planck equation

        D  [ -J1 + J2 D  ] f
         q             q

    with the outer derivative at q and the dilatation boundary policy

    Parameters:
    F (LatticeFunction): density
    problem (FPProblem): problem
    convention (Convention or None): defaults to problem.convention

    Returns:
    rhs (LatticeFunction): time derivative of the density
    """
    flux = stationary_flux(F, problem, convention)
    current = flux.with_samples(problem.diffusion.J2 * flux.samples)
    rhs = jackson_derivative(current)
    return rhs.with_samples(rhs.samples, F.lattice.boundary_rows(2))

def fp_operator_matrix(problem, outer = 'q'):
    """
    Fokker-Planck generator as a matrix, with the operator-valued drift taken
    through the on-lattice dilatation.

    outer = 'q' gives D_q [-J1 + J2 D_q], the same map as fp_rhs under
    literal_qx. outer = 'flux' replaces the outer derivative with D_(1/q) and
    sets the flux to zero where D_q is truncated, so no probability crosses
    either lattice end. That form conserves the Jackson mass and is the one
    fp_evolve steps

    Parameters:
    problem (FPProblem): problem
    outer (str): 'q' or 'flux'

    Returns:
    L (OperatorMatrix): generator
    """
    lattice = problem.lattice
    current = _current_matrix(problem)
    if outer == 'q':
        return jackson_derivative_matrix(lattice) @ current
    if outer != 'flux':
        raise ValueError(f"outer must be 'q' or 'flux', got {outer!r}")
    entries = current.entries.copy()
    entries[list(current.boundary_rows), :] = 0.
    backward = jackson_derivative_matrix(lattice.conjugate())
    rows = sorted(set(backward.boundary_rows) | set(current.boundary_rows))
    return OperatorMatrix(backward.entries @ entries, problem.deformation,
                          tuple(int(r) for r in rows), lattice)

def fp_lattice_stationary(problem):
    """
    Null state of the lattice generator: the density whose flux
    -J1 f + J2 D_q f vanishes on every row where D_q is defined, normalized to
    unit Jackson mass. Built by the two-term recursion along each half-line

    Parameters:
    problem (FPProblem): problem

    Returns:
    F (LatticeFunction): lattice stationary density
    """
    lattice = problem.lattice
    G = np.real(_current_matrix(problem).entries)
    samples = np.zeros(lattice.size)
    for start in range(0, lattice.size, lattice.count):
        rows = np.arange(start, start + lattice.count - 1)
        targets = lattice.next_index[rows]
        ahead = G[rows, targets]
        if np.any(ahead == 0):
            raise ValueError('zero-flux recursion is singular on this lattice')
        ratios = -G[rows, rows] / ahead
        samples[start:start + lattice.count] = np.concatenate(([1.],
                                                    np.cumprod(ratios)))
    mass = jackson_integral(LatticeFunction(lattice, samples)).real
    if mass == 0:
        raise ValueError('lattice stationary density has zero mass')
    return LatticeFunction(lattice, samples / mass)

def fp_stationary(problem):
    """
    Stationary density N_q E_q[-alpha x^2] for the operator-valued drift, and
    N_q E_q[-Phi_q(x)] for a monomial drift. N_q is fixed by the Jackson
    integral over the lattice. The analytic profile is kept as the source of
    the result

    Parameters:
    problem (FPProblem): problem

    Returns:
    F (LatticeFunction): normalized stationary density
    """
    q = problem.deformation
    if problem.drift.is_monomial:
        drift, diffusion = problem.drift, problem.diffusion
        exponent = lambda x: -phi_potential(drift, diffusion, x, q)
    else:
        alpha = problem.drift.gamma / problem.diffusion.J2
        exponent = lambda x: -alpha * np.asarray(x, dtype = float) ** 2
    profile = lambda x: q_exp_values(exponent(x), q)[0]
    raw = sample(problem.lattice, profile)
    mass = jackson_integral(raw).real
    if not mass > 0:
        raise ValueError(f'stationary profile has non-positive mass {mass!r}')
    norm = 1. / mass
    return LatticeFunction(problem.lattice, norm * raw.samples,
                           lambda x: norm * profile(x))

def fp_evolve(F0, problem, dt, steps, scheme = None, verbose = False):
    """
    Time-steps the deformed Fokker-Planck equation with the flux-form
    generator (see fp_operator_matrix)

    Parameters:
    F0 (LatticeFunction): initial density
    problem (FPProblem): problem
    dt (float): time step, > 0
    steps (int): number of steps
    scheme (str or None): 'explicit' (forward Euler), 'implicit'
        (Crank-Nicolson) or None/'auto': implicit when the lattice has more
        than 64 points per half-line or dt exceeds the explicit bound
    verbose (bool): if True, shows a progress bar

    Returns:
    trajectory (FPTrajectory): states, times and mass drift
    """
    _check_on_problem(F0, problem)
    if not dt > 0:
        raise ValueError(f'dt must be positive, got {dt!r}')
    if int(steps) != steps or steps < 0:
        raise ValueError('steps must be a non-negative integer')
    scheme = resolve_scheme(scheme, problem.lattice, dt,
                            explicit_stability_bound(problem))
    L = fp_operator_matrix(problem, 'flux').entries
    if scheme == 'explicit':
        bound = explicit_stability_bound(problem)
        if dt > bound:
            raise StabilityError(dt, bound)
        step = lambda f: f + dt * (L @ f)
    else:
        identity = np.eye(L.shape[0])
        factors = lu_factor(identity - 0.5 * dt * L)
        forward = identity + 0.5 * dt * L
        step = lambda f: lu_solve(factors, forward @ f)
    mass0 = jackson_integral(F0)
    states = [F0]
    drift = [0.]
    samples = F0.samples
    pbar = range(int(steps))
    if verbose:
        pbar = tqdm(pbar, leave = False)
        pbar.set_description('Stepping Fokker-Planck')
    for _ in pbar:
        samples = step(samples)
        state = LatticeFunction(F0.lattice, samples)
        states.append(state)
        drift.append(abs(jackson_integral(state) - mass0))
    times = dt * np.arange(int(steps) + 1)
    return FPTrajectory(times, states, np.array(drift), scheme)

def fp_step_matrix(problem, dt, scheme = 'implicit'):
    """
    One-step propagator of fp_evolve as a dense matrix
    """
    L = fp_operator_matrix(problem, 'flux').entries
    identity = np.eye(L.shape[0])
    if resolve_scheme(scheme, problem.lattice, dt,
                      explicit_stability_bound(problem)) == 'explicit':
        return identity + dt * L
    return np.linalg.solve(identity - 0.5 * dt * L, identity + 0.5 * dt * L)

def positive_extent(alpha, q, cap = 2., margin = 0.9):
    """
    Outermost lattice point with alpha |q - 1| x^2 <= margin^2. Inside it the
    flux-form zero-flux ratios 1 - alpha (q - 1) x^2 and the stationary
    profile E_q[-alpha x^2] stay positive for q > 1

    Parameters:
    alpha (float): Gaussian width parameter
    q (float or DeformationParameter): deformation parameter
    cap (float): largest extent returned
    margin (float): fraction of the sign-change point used, in (0, 1)

    Returns:
    lambda0 (float): outermost point
    """
    if not 0 < margin < 1:
        raise ValueError(f'margin must lie in (0, 1), got {margin!r}')
    q = as_deformation(q)
    spread = alpha * abs(q.q - 1.)
    if spread == 0:
        return float(cap)
    return float(min(cap, margin / np.sqrt(spread)))

def explicit_stability_bound(problem):
    """
    Largest explicit step: 0.5 min(w)^2 / J2 with w the Jackson weights
    """
    return 0.5 * np.min(problem.lattice.weights) ** 2 / problem.diffusion.J2

def resolve_scheme(scheme, lattice, dt = None, bound = None):
    """
    Concrete scheme for 'explicit', 'implicit' or 'auto'/None. Auto picks
    the implicit scheme on lattices of more than AUTO_IMPLICIT_COUNT points
    per half-line, or when dt exceeds the explicit bound
    """
    if scheme is None or scheme == 'auto':
        if lattice.count > AUTO_IMPLICIT_COUNT:
            return 'implicit'
        if dt is not None and bound is not None and dt > bound:
            return 'implicit'
        return 'explicit'
    if scheme not in ('explicit', 'implicit'):
        raise ValueError(f"scheme must be 'explicit', 'implicit' or 'auto', "
                         f"got {scheme!r}")
    return scheme

def mapped_potential(problem):
    """
    Vectorized V_q(x) = D_q J1(x) / 2 + J1(x)^2 / (4 J2) of a monomial drift,
    with D_q J1 taken from J1 itself rather than from lattice samples
    """
    _require_monomial(problem.drift, 'V_q')
    drift, J2, q = problem.drift, problem.diffusion.J2, problem.deformation
    def potential(x):
        x = np.asarray(x, dtype = float)
        if q.is_classical:
            slope = (drift.coefficient * drift.exponent *
                     x ** max(drift.exponent - 1, 0))
        else:
            slope = jackson_derivative_callable(drift.monomial, x, q)
        return 0.5 * slope + drift.monomial(x) ** 2 / (4. * J2)
    return potential

def fp_to_schrodinger(problem):
    """
    Potential of the Schrodinger picture reached through
    f = E_q[-Phi_q / 2] psi

                   1            J1(x)^2
        V (x)  =  --- D J1(x) + -------
         q         2   q          4 J2

    Parameters:
    problem (FPProblem): problem with a monomial drift

    Returns:
    potential (PotentialSpec): BROWNIAN_MAPPED potential
    """
    potential = mapped_potential(problem)
    return PotentialSpec(PotentialKind.BROWNIAN_MAPPED,
                         samples = np.real(potential(problem.lattice.points)),
                         func = potential, label = 'fokker-planck mapped')

def stochastic_quantization(problem, hbar = 1., mass = None):
    """
    Schrodinger problem of a Fokker-Planck problem under t -> t / (-i hbar)
    and J2 -> hbar^2 / (2 m). With mass None, m is chosen so that
    hbar^2 / (2 m) equals J2

    Parameters:
    problem (FPProblem): problem with a monomial drift
    hbar (float): reduced Planck constant
    mass (float or None): particle mass

    Returns:
    schrodinger (SchrodingerProblem): quantized problem
    """
    if mass is None:
        mass = hbar ** 2 / (2. * problem.diffusion.J2)
    return SchrodingerProblem(problem.lattice, fp_to_schrodinger(problem),
                              hbar, mass, problem.deformation)

def density_to_wavefunction(F, problem):
    """
    psi = f / E_q[-Phi_q / 2]
    """
    return F.with_samples(F.samples / _transform_factor(problem), F.padded_rows)

def wavefunction_to_density(psi, problem):
    """
    f = E_q[-Phi_q / 2] psi
    """
    return psi.with_samples(psi.samples * _transform_factor(problem),
                            psi.padded_rows)

def schrodinger_form_rhs(psi, problem):
    """
    Imaginary-time Schrodinger form of the Fokker-Planck equation,
    J2 D_q^2 psi - V_q psi, with V_q from fp_to_schrodinger
    """
    second = jackson_derivative(jackson_derivative(psi))
    V = mapped_potential(problem)(psi.lattice.points)
    rows = tuple(np.flatnonzero(~psi.lattice.interior_mask(2)).tolist())
    return psi.with_samples(problem.diffusion.J2 * second.samples -
                            V * psi.samples, rows)

################################################################################
######################### Utility functions ####################################
################################################################################

def _require_monomial(drift, what):
    if not drift.is_monomial:
        raise UnsupportedDriftError(f'{what} is defined for a monomial drift '
                                    'only; the operator-valued drift has no '
                                    'Jackson integral')

def _drift_integral(drift, x, q):
    if x == 0:
        return 0.
    if q.is_classical or abs(np.log(q.q)) < CALLABLE_LOG_MIN:
        power = drift.exponent + 1
        return drift.coefficient * x ** power / basic_number(power, q)
    return float(np.real(jackson_integral_callable(drift.monomial, x, q)))

def _check_on_problem(F, problem):
    if not F.lattice.same_points(problem.lattice):
        raise LatticeMismatchError('density and problem live on different '
                                   'lattices')
    return F.lattice

def _scaled_samples(F, problem, convention):
    convention = Convention(problem.convention if convention is None
                            else convention)
    if convention is Convention.LITERAL_QX:
        shifted = dilate(F)
        return shifted.samples, shifted.padded_rows
    if F.source is None:
        raise ValueError('argument_scaling needs F at sqrt(q) x; the lattice '
                         'function has no analytic source')
    x = np.sqrt(problem.deformation.q) * F.lattice.points
    return np.asarray(F.source(x), dtype = complex), ()

def _drift_matrix(problem):
    lattice = problem.lattice
    drift = problem.drift
    if drift.is_monomial:
        return np.diag(drift.monomial(lattice.points)).astype(complex)
    S = dilatation_matrix(lattice).entries
    return -drift.gamma * (np.diag(lattice.points) @
                           (problem.deformation.q * S + np.eye(lattice.size)))

def _current_matrix(problem):
    D = jackson_derivative_matrix(problem.lattice)
    entries = problem.diffusion.J2 * D.entries - _drift_matrix(problem)
    return OperatorMatrix(entries, problem.deformation, D.boundary_rows,
                          problem.lattice)

def _transform_factor(problem):
    phi = phi_potential(problem.drift, problem.diffusion,
                        problem.lattice.points, problem.deformation)
    factor, _ = q_exp_values(-0.5 * phi, problem.deformation)
    if np.any(factor == 0):
        raise ValueError('E_q[-Phi_q / 2] vanishes on the lattice')
    return factor
