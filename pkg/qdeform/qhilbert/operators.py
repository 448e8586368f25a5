from dataclasses import dataclass
import numpy as np
from .states import (QPairedState, q_inner_product, q_norm_squared,
                     quadrature_weights)
from ..qlattice.lattice import OperatorMatrix, LatticeFunction
from ..errors import LatticeMismatchError, NormalizationError, ExpansionError

NORMALIZATION_TOL = 1e-8
MAX_GRAM_CONDITION = 1e12

@dataclass(frozen = True)
class HermiticityReport:
    """
    Parameters:
    defect (float): max |q-adjoint defect| over all ordered basis pairs,
        never below interior_defect
    interior_defect (float): the same with edge rows left out of the sums
    states_tested (int): number of basis states
    """
    defect: float
    interior_defect: float
    states_tested: int

@dataclass(frozen = True)
class ExpansionCoefficients:
    """
    Parameters:
    c_q (np.array): coefficients of psi_q in the q basis
    c_qinv (np.array): coefficients of psi_(1/q) in the 1/q basis
    reconstruction_residual (float): relative max residual of both members
    parseval_sum (complex): sum_n conj(c_qinv[n]) c_q[n]
    """
    c_q: np.ndarray
    c_qinv: np.ndarray
    reconstruction_residual: float
    parseval_sum: complex

def position_operator(lattice):
    """
    Multiplication by x as an OperatorMatrix (no truncated rows)
    """
    return OperatorMatrix(np.diag(lattice.points.astype(complex)),
                          lattice.deformation, (), lattice)

def apply_pair(A_q, A_qinv, state):
    """
    Applies A to a paired state: A_q on the q member, A_qinv on the 1/q member
    """
    _check_dimensions(A_q, A_qinv, state)
    return QPairedState(state.deformation, A_q.apply(state.psi_q),
                        A_qinv.apply(state.psi_qinv), state.label)

def q_adjoint_defect(A_q, A_qinv, phi, psi, branch = None, mask = None):
    """
    <phi, A psi>_q - <A phi, psi>_q, where A acts through A_q on the q members
    and through A_qinv on the 1/q members. Zero for a q-Hermitian operator

    Parameters:
    A_q (OperatorMatrix): operator at deformation q
    A_qinv (OperatorMatrix): the operator at deformation 1/q, same lattice
    phi (QPairedState): bra state
    psi (QPairedState): ket state
    branch (QuadratureBranch or None): weights to use
    mask (np.array or None): boolean row selection for the sums

    Returns:
    defect (complex): q-adjoint defect
    """
    left = q_inner_product(phi, apply_pair(A_q, A_qinv, psi), branch, mask)
    right = q_inner_product(apply_pair(A_q, A_qinv, phi), psi, branch, mask)
    return left.value - right.value

def hermiticity_report(A_q, A_qinv, basis, branch = None):
    """
    Largest q-adjoint defect over every ordered pair drawn from a basis, over
    the whole lattice and over interior rows only

    Parameters:
    A_q (OperatorMatrix): operator at deformation q
    A_qinv (OperatorMatrix): operator at deformation 1/q
    basis (list of QPairedState): at least two states
    branch (QuadratureBranch or None): weights to use

    Returns:
    report (HermiticityReport): defects and number of states
    """
    if len(basis) < 2:
        raise ValueError('hermiticity_report needs at least two states')
    interior = ~basis[0].lattice.edge_mask()
    full_max, interior_max = 0., 0.
    for phi in basis:
        for psi in basis:
            full = abs(q_adjoint_defect(A_q, A_qinv, phi, psi, branch))
            inner = abs(q_adjoint_defect(A_q, A_qinv, phi, psi, branch,
                                         interior))
            full_max = max(full_max, full)
            interior_max = max(interior_max, inner)
    return HermiticityReport(max(full_max, interior_max), interior_max,
                             len(basis))

def expectation_value(A_q, psi, branch = None, tol = NORMALIZATION_TOL):
    """
    Mean value <A>_q = sum_n w_n conj(psi_{1/q}) (A_q psi_q) of a q-normalized
    state

    Parameters:
    A_q (OperatorMatrix): operator at deformation q
    psi (QPairedState): state with <psi, psi>_q = 1 within tol
    branch (QuadratureBranch or None): weights to use
    tol (float): normalization tolerance

    Returns:
    value (complex): expectation value
    """
    _require_normalized(psi, branch, tol)
    return _sandwich(A_q, psi, branch)

def expectation_is_real(A_q, psi, branch = None, tol = 1e-10):
    """
    Reports whether <A>_q has a vanishing imaginary part, relative to its
    modulus
    """
    value = expectation_value(A_q, psi, branch)
    return bool(abs(value.imag) <= tol * max(abs(value), 1.))

def fluctuation(A_q, psi, branch = None, tol = NORMALIZATION_TOL):
    """
    Fluctuation (Delta A)^2_q = < (A - <A>_q)^2 >_q

    Parameters:
    A_q (OperatorMatrix): operator at deformation q
    psi (QPairedState): q-normalized state
    branch (QuadratureBranch or None): weights to use
    tol (float): normalization tolerance

    Returns:
    value (complex): fluctuation
    """
    mean = expectation_value(A_q, psi, branch, tol)
    shifted = A_q.entries - mean * np.eye(A_q.dimension)
    centred = OperatorMatrix(shifted @ shifted, A_q.deformation,
                             A_q.boundary_rows, A_q.lattice)
    return _sandwich(centred, psi, branch)

def expansion_coefficients(psi, basis, branch = None):
    """
    Expands a paired state in a biorthonormal spectral basis

        c_(q,n)   = sum_x w conj(phi_(n,1/q)) psi_q
        c_(1/q,n) = sum_x w conj(phi_(n,q))   psi_(1/q)

    so that psi_q = sum_n c_(q,n) phi_(n,q) and psi_(1/q) = sum_n
    c_(1/q,n) phi_(n,1/q) on the span, and sum_n conj(c_(1/q,n)) c_(q,n) is
    <psi, psi>_q.

    Parameters:
    psi (QPairedState): state to expand
    basis (SpectralDecomposition): biorthonormalized eigenpairs
    branch (QuadratureBranch or None): weights to use

    Returns:
    coefficients (ExpansionCoefficients): coefficients and diagnostics
    """
    if basis.gram_condition > MAX_GRAM_CONDITION or not np.isfinite(
            basis.gram_condition):
        raise ExpansionError(f'basis is defective: Gram condition '
                             f'{basis.gram_condition!r}', basis.gram_condition)
    Phi_q, Phi_qinv = basis.matrices()
    if Phi_q.shape[0] != psi.lattice.size:
        raise LatticeMismatchError('basis and state have different dimensions')
    weights = quadrature_weights(psi.lattice, 'q' if branch is None else branch)
    c_q = np.conj(Phi_qinv).T @ (weights * psi.psi_q.samples)
    c_qinv = np.conj(Phi_q).T @ (weights * psi.psi_qinv.samples)
    residual = max(_relative_residual(Phi_q @ c_q, psi.psi_q.samples),
                   _relative_residual(Phi_qinv @ c_qinv,
                                      psi.psi_qinv.samples))
    parseval = complex(np.sum(np.conj(c_qinv) * c_q))
    return ExpansionCoefficients(c_q, c_qinv, residual, parseval)

################################################################################
######################### Utility functions ####################################
################################################################################

def _sandwich(A_q, psi, branch):
    ket = LatticeFunction(psi.lattice, A_q.entries @ psi.psi_q.samples)
    image = QPairedState(psi.deformation, ket, psi.psi_qinv)
    return q_inner_product(psi, image, branch).value

def _require_normalized(psi, branch, tol):
    norm = q_norm_squared(psi, branch)
    if abs(norm.value - 1.) > tol:
        raise NormalizationError(norm.value)

def _check_dimensions(A_q, A_qinv, state):
    n = state.lattice.size
    if A_q.dimension != n or A_qinv.dimension != n:
        raise LatticeMismatchError(f'operators of dimension {A_q.dimension} and '
                                   f'{A_qinv.dimension} on a lattice of {n} '
                                   'points')

def _relative_residual(approx, exact):
    scale = max(np.max(np.abs(exact)), 1e-300)
    return float(np.max(np.abs(approx - exact)) / scale)
