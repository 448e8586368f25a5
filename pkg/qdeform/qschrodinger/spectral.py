import warnings
from dataclasses import dataclass
import numpy as np
from scipy.linalg import eig
from .hamiltonian import assemble_hamiltonian, adjoint_partner
from ..qlattice.lattice import LatticeFunction
from ..qhilbert.states import QPairedState, q_inner_product, quadrature_weights
from ..qhilbert.operators import expansion_coefficients
from ..errors import (DegradedSpectrumError, DroppedEigenpairWarning,
                      ExpansionError)

PAIR_RTOL = 1e-6
RESIDUAL_TOL = 1e-8
INTERIOR_MASS_MIN = 0.9
SPAN_TOL = 1e-6
OVERLAP_RTOL = 1e-10

@dataclass(frozen = True, eq = False)
class SpectralDecomposition:
    """
    Paired eigenproblem of H_q and its partner at 1/q, biorthonormalized so
    that <phi_m, phi_n>_q = delta_mn

    Parameters:
    eigenvalues_q (np.array): retained eigenvalues of H_q, by real part
    eigenvectors_q (list of LatticeFunction): matching eigenvectors of H_q
    eigenvalues_qinv (np.array): eigenvalues of the partner, pair by pair
    eigenvectors_qinv (list of LatticeFunction): eigenvectors of the partner
    pairing (np.array): (n, 2) indices of each retained pair in the raw q and
        1/q eigensolutions
    gram_condition (float): condition number of the Gram matrix before the
        final biorthonormalization
    residuals (np.array): max(|H phi - E phi|_inf / |phi|_inf) of both
        members, pair by pair
    dropped (int): eigensolutions of H_q not retained
    partner (str): 'adjoint' or 'literal'
    """
    eigenvalues_q: np.ndarray
    eigenvectors_q: list
    eigenvalues_qinv: np.ndarray
    eigenvectors_qinv: list
    pairing: np.ndarray
    gram_condition: float
    residuals: np.ndarray
    dropped: int
    partner: str

    @property
    def levels(self):
        return len(self.eigenvalues_q)

    def matrices(self):
        """
        Eigenvectors as matrix columns

        Returns:
        Phi_q (np.array): q members, one per column
        Phi_qinv (np.array): 1/q members, one per column
        """
        Phi_q = np.column_stack([F.samples for F in self.eigenvectors_q])
        Phi_qinv = np.column_stack([F.samples for F in self.eigenvectors_qinv])
        return Phi_q, Phi_qinv

    def states(self):
        """
        Retained eigenpairs as paired states
        """
        return [QPairedState(F.lattice.deformation, F, G, f'level {n}')
                for n, (F, G) in enumerate(zip(self.eigenvectors_q,
                                               self.eigenvectors_qinv))]

    def gram_matrix(self, branch = None):
        """
        Matrix of <phi_m, phi_n>_q over the retained pairs
        """
        Phi_q, Phi_qinv = self.matrices()
        lattice = self.eigenvectors_q[0].lattice
        w = quadrature_weights(lattice, 'q' if branch is None else branch)
        return np.conj(Phi_qinv).T @ (w[:, None] * Phi_q)

@dataclass(frozen = True)
class EvolvedState:
    """
    Parameters:
    times (np.array): evaluation times
    states (list of QPairedState): state at each time
    norm_trace (np.array): complex <psi(t), psi(t)>_q at each time
    """
    times: np.ndarray
    states: list
    norm_trace: np.ndarray

def solve_stationary(problem, levels = None, partner = 'adjoint',
                     pair_rtol = PAIR_RTOL, residual_tol = RESIDUAL_TOL,
                     interior_min = INTERIOR_MASS_MIN):
    """
    Solves H_q phi = E phi together with its 1/q partner. Both matrices go
    through a general eigensolve. Eigensolutions whose residual exceeds
    residual_tol, or whose Jackson mass lies mostly on truncated rows, are
    discarded. q eigenvalues E are matched to partner eigenvalues E' with
    |E - conj(E')| <= pair_rtol * spectral radius. The retained pairs are
    biorthonormalized under the q-scalar product.

    partner = 'adjoint' takes the 1/q member from the q-adjoint of H_q (see
    adjoint_partner). partner = 'literal' uses the Hamiltonian assembled at
    1/q as-is.

    Parameters:
    problem (SchrodingerProblem): problem
    levels (int or None): number of pairs to keep, lowest real energy first.
        None keeps every retained pair
    partner (str): 'adjoint' or 'literal'
    pair_rtol (float): pairing tolerance relative to the spectral radius
    residual_tol (float): eigen-residual threshold
    interior_min (float): minimum interior mass fraction

    Returns:
    spectral (SpectralDecomposition): paired, biorthonormal eigenpairs
    """
    H_q, H_literal = assemble_hamiltonian(problem)
    if partner == 'adjoint':
        H_p = adjoint_partner(H_q)
    elif partner == 'literal':
        H_p = H_literal
    else:
        raise ValueError(f"partner must be 'adjoint' or 'literal', got "
                         f"{partner!r}")
    n = H_q.dimension
    if levels is not None and (int(levels) != levels or not 1 <= levels <= n):
        raise ValueError(f'levels must be an integer in [1, {n}], got '
                         f'{levels!r}')
    E_q, V_q = eig(H_q.entries)
    E_p, V_p = eig(H_p.entries)
    keep_q, res_q = _screen(H_q, E_q, V_q, residual_tol, interior_min)
    keep_p, res_p = _screen(H_p, E_p, V_p, residual_tol, interior_min)
    radius = max(np.max(np.abs(E_q)), np.finfo(float).tiny)
    pairs = _pair(E_q, keep_q, E_p, keep_p, pair_rtol * radius)
    pairs = _overlap_screen(V_q, V_p, pairs, problem.lattice.weights)
    dropped = n - len(pairs)
    if dropped:
        warnings.warn(f'{dropped} of {n} eigenpairs dropped by residual, '
                      'interior-mass, pairing or overlap screens',
                      DroppedEigenpairWarning, stacklevel = 2)
    if levels is not None:
        if len(pairs) < levels:
            raise DegradedSpectrumError(len(pairs), int(levels), dropped)
        pairs = pairs[:int(levels)]
    elif not pairs:
        raise DegradedSpectrumError(0, 1, dropped)
    pairs = np.array(pairs, dtype = int)
    Phi_q = V_q[:, pairs[:, 0]]
    Phi_p = V_p[:, pairs[:, 1]]
    Phi_q, Phi_p, condition = _biorthonormalize(Phi_q, Phi_p,
                                                problem.lattice.weights)
    lattice = problem.lattice
    residuals = np.maximum(res_q[pairs[:, 0]], res_p[pairs[:, 1]])
    return SpectralDecomposition(
        E_q[pairs[:, 0]],
        [LatticeFunction(lattice, Phi_q[:, j]) for j in range(len(pairs))],
        E_p[pairs[:, 1]],
        [LatticeFunction(lattice, Phi_p[:, j]) for j in range(len(pairs))],
        pairs, condition, residuals, int(dropped), partner)

def time_factor(E, t, hbar = 1.):
    """
    Undeformed phase exp(-i E t / hbar)

    Parameters:
    E (complex): energy
    t (float or np.array): time(s)
    hbar (float): reduced Planck constant

    Returns:
    factor (complex or np.array): phase factor
    """
    return np.exp(-1.j * E * np.asarray(t) / hbar)

def evolve_spectral(psi0, spectral, times, hbar = 1., branch = None):
    """
    Spectral time evolution of a paired state

        psi (t) = sum_n c_n exp(-i E_n t / hbar) phi_n

    applied to the q member with the H_q eigenpairs and to the 1/q member with
    the partner eigenpairs

    Parameters:
    psi0 (QPairedState): initial state in the span of the retained pairs
    spectral (SpectralDecomposition): eigenpairs
    times (np.array): evaluation times
    hbar (float): reduced Planck constant
    branch (QuadratureBranch or None): weights of the expansion and the norm

    Returns:
    evolved (EvolvedState): states and q-norm trace
    """
    coefficients = expansion_coefficients(psi0, spectral, branch)
    if coefficients.reconstruction_residual > SPAN_TOL:
        raise ExpansionError(f'initial state is not in the span of the '
                             f'retained eigenpairs: reconstruction residual '
                             f'{coefficients.reconstruction_residual!r}',
                             spectral.gram_condition)
    Phi_q, Phi_qinv = spectral.matrices()
    lattice = psi0.lattice
    times = np.atleast_1d(np.asarray(times, dtype = float))
    states, norms = [], []
    for t in times:
        c_q = coefficients.c_q * time_factor(spectral.eigenvalues_q, t, hbar)
        c_qinv = coefficients.c_qinv * time_factor(spectral.eigenvalues_qinv,
                                                   t, hbar)
        state = QPairedState(psi0.deformation,
                             LatticeFunction(lattice, Phi_q @ c_q),
                             LatticeFunction(lattice, Phi_qinv @ c_qinv),
                             psi0.label)
        states.append(state)
        norms.append(q_inner_product(state, state, branch).value)
    return EvolvedState(times, states, np.array(norms))

def probability_density(psi):
    """
    Probability density rho_q(x) = conj(psi_(1/q)(x)) psi_q(x), complex in
    general

    Parameters:
    psi (QPairedState): state

    Returns:
    rho (LatticeFunction): density
    """
    return LatticeFunction(psi.lattice,
                           np.conj(psi.psi_qinv.samples) * psi.psi_q.samples)

################################################################################
######################### Utility functions ####################################
################################################################################

def _screen(H, E, V, residual_tol, interior_min):
    """
    Residual and interior-mass screens against the operator's own truncated
    rows

    Returns:
    keep (np.array): boolean mask of accepted eigensolutions
    residuals (np.array): relative residual per eigensolution
    """
    scale = np.max(np.abs(V), axis = 0)
    scale[scale == 0] = np.inf
    residuals = (np.max(np.abs(H.entries @ V - V * E[None, :]), axis = 0) /
                 scale)
    tolerance = residual_tol * np.maximum(1., np.abs(E))
    mass = H.lattice.weights[:, None] * np.abs(V) ** 2
    interior = np.ones(H.dimension, dtype = bool)
    interior[list(H.boundary_rows)] = False
    fraction = np.sum(mass[interior], axis = 0) / np.sum(mass, axis = 0)
    keep = (residuals <= tolerance) & (fraction >= interior_min)
    return keep, residuals

def _pair(E_q, keep_q, E_p, keep_p, tolerance):
    candidates_q = np.flatnonzero(keep_q)
    candidates_q = candidates_q[np.argsort(E_q[candidates_q].real,
                                           kind = 'stable')]
    available = set(np.flatnonzero(keep_p).tolist())
    pairs = []
    for i in candidates_q:
        if not available:
            break
        options = np.array(sorted(available))
        distance = np.abs(E_q[i] - np.conj(E_p[options]))
        best = int(np.argmin(distance))
        if distance[best] <= tolerance:
            pairs.append((int(i), int(options[best])))
            available.discard(int(options[best]))
    return pairs

def _biorthonormalize(Phi_q, Phi_p, weights):
    """
    Scales every pair to unit diagonal overlap, then removes the off-diagonal
    Gram entries with the inverse Gram matrix

    Returns:
    Phi_q (np.array): q members, biorthonormal to Phi_p
    Phi_p (np.array): partner members, unit max-norm columns
    condition (float): condition number of the scaled Gram matrix
    """
    Phi_q = Phi_q / np.max(np.abs(Phi_q), axis = 0)
    Phi_p = Phi_p / np.max(np.abs(Phi_p), axis = 0)
    overlap = np.sum(np.conj(Phi_p) * weights[:, None] * Phi_q, axis = 0)
    Phi_q = Phi_q / overlap[None, :]
    gram = np.conj(Phi_p).T @ (weights[:, None] * Phi_q)
    condition = float(np.linalg.cond(gram))
    if not np.isfinite(condition):
        raise ExpansionError('retained eigenpairs are linearly dependent',
                             condition)
    return Phi_q @ np.linalg.inv(gram), Phi_p, condition

def _overlap_screen(V_q, V_p, pairs, weights):
    """
    Drops pairs whose q-scalar overlap, relative to the weighted norms of the
    two members, is below OVERLAP_RTOL. Such a pair cannot be scaled to unit
    overlap
    """
    kept = []
    for i, j in pairs:
        overlap = abs(np.sum(np.conj(V_p[:, j]) * weights * V_q[:, i]))
        norms = np.sqrt(np.sum(weights * np.abs(V_q[:, i]) ** 2) *
                        np.sum(weights * np.abs(V_p[:, j]) ** 2))
        if overlap > OVERLAP_RTOL * norms:
            kept.append((i, j))
    return kept
