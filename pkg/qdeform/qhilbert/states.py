import warnings
from dataclasses import dataclass
from enum import Enum
import numpy as np
from ..qlattice.lattice import LatticeFunction, sample, check_same_lattice
from ..errors import LatticeMismatchError, QNormWarning

POSITIVITY_TOL = 1e-10

class QuadratureBranch(str, Enum):
    Q = 'q'
    Q_INVERSE = 'q_inverse'

@dataclass(frozen = True, eq = False)
class QPairedState:
    """
    A state known at deformation q and at 1/q on the same lattice points.
    The q-conjugate psi^dagger = conj(psi_{1/q}) is computable from it.

    Parameters:
    deformation (DeformationParameter): deformation of the psi_q member
    psi_q (LatticeFunction): state at deformation q
    psi_qinv (LatticeFunction): same state at deformation 1/q
    label (str): free text
    """
    deformation: object
    psi_q: LatticeFunction
    psi_qinv: LatticeFunction
    label: str = ''

    def __post_init__(self):
        if not self.psi_q.lattice.same_points(self.psi_qinv.lattice):
            raise LatticeMismatchError('paired members must share one lattice')

    @property
    def lattice(self):
        return self.psi_q.lattice

    @classmethod
    def from_functions(cls, lattice, f_q, f_qinv, label = ''):
        """
        Samples a pair of vectorized callables on one lattice

        Parameters:
        lattice (GeometricLattice): lattice at deformation q
        f_q (callable): state at deformation q
        f_qinv (callable): state at deformation 1/q
        label (str): free text

        Returns:
        state (QPairedState): paired state
        """
        return cls(lattice.deformation, sample(lattice, f_q),
                   sample(lattice, f_qinv), label)

    @classmethod
    def from_samples(cls, lattice, samples_q, samples_qinv, label = ''):
        return cls(lattice.deformation, LatticeFunction(lattice, samples_q),
                   LatticeFunction(lattice, samples_qinv), label)

    def combine(self, other, alpha = 1., beta = 1.):
        """
        Linear combination alpha * self + beta * other, member by member
        """
        check_same_lattice(self.psi_q, other.psi_q)
        return QPairedState(self.deformation,
                            alpha * self.psi_q + beta * other.psi_q,
                            alpha * self.psi_qinv + beta * other.psi_qinv,
                            self.label)

    def scaled(self, factor):
        return QPairedState(self.deformation, factor * self.psi_q,
                            factor * self.psi_qinv, self.label)

@dataclass(frozen = True)
class InnerProductResult:
    """
    Parameters:
    value (complex): q-scalar product
    quadrature_branch (QuadratureBranch): weights used
    boundary_weight_fraction (float): share of |integrand| * weight on edge
        rows
    """
    value: complex
    quadrature_branch: QuadratureBranch
    boundary_weight_fraction: float

@dataclass(frozen = True)
class NormReport:
    value: complex
    positive_real: bool

def q_conjugate(state):
    """
    Complex q-conjugation: swaps the q and 1/q members and conjugates the
    samples. The result represents psi^dagger with deformation 1/q

    Parameters:
    state (QPairedState): state

    Returns:
    conjugate (QPairedState): conjugated pair
    """
    return QPairedState(state.deformation.inverse(), state.psi_qinv.conj(),
                        state.psi_q.conj(), state.label)

def quadrature_weights(lattice, branch = QuadratureBranch.Q):
    """
    Jackson weights of a lattice for the d_q x or d_(1/q) x quadrature on the
    same points
    """
    branch = QuadratureBranch(branch)
    if branch is QuadratureBranch.Q:
        return lattice.weights
    return abs(1. / lattice.q - 1.) * np.abs(lattice.points)

def q_inner_product(phi, psi, branch = None, mask = None):
    """
    q-scalar product

        <phi, psi>_q = sum_n  w_n  conj(phi_{1/q}(x_n))  psi_q(x_n)

    Parameters:
    phi (QPairedState): bra state
    psi (QPairedState): ket state
    branch (QuadratureBranch or None): weights to use. None uses the branch of
        psi's deformation, 'q'
    mask (np.array or None): boolean row selection; None sums every row

    Returns:
    result (InnerProductResult): value, branch and boundary weight fraction
    """
    lattice = check_same_lattice(phi.psi_q, psi.psi_q)
    branch = QuadratureBranch.Q if branch is None else QuadratureBranch(branch)
    weights = quadrature_weights(lattice, branch)
    integrand = weights * np.conj(phi.psi_qinv.samples) * psi.psi_q.samples
    mass = np.abs(integrand)
    total_mass = np.sum(mass)
    if total_mass > 0:
        fraction = float(np.sum(mass[lattice.edge_mask()]) / total_mass)
    else:
        fraction = 0.
    if mask is not None:
        integrand = integrand[mask]
    return InnerProductResult(complex(np.sum(integrand)), branch, fraction)

def q_norm_squared(psi, branch = None):
    """
    <psi, psi>_q with a flag telling whether it is real and non-negative
    within POSITIVITY_TOL. The flag is reported, never assumed; a norm that
    fails it also raises a QNormWarning

    Parameters:
    psi (QPairedState): state
    branch (QuadratureBranch or None): weights to use

    Returns:
    report (NormReport): value and positivity flag
    """
    value = q_inner_product(psi, psi, branch).value
    scale = max(abs(value), 1.)
    positive = (abs(value.imag) <= POSITIVITY_TOL * scale and
                value.real >= -POSITIVITY_TOL * scale)
    if not positive:
        warnings.warn(f'q-norm {value!r} is not real and non-negative',
                      QNormWarning, stacklevel = 2)
    return NormReport(value, bool(positive))

def swapped(state):
    """
    The pair viewed at deformation 1/q, members swapped without conjugation
    """
    return QPairedState(state.deformation.inverse(), state.psi_qinv,
                        state.psi_q, state.label)

def q_modulus_squared(phi, psi, branch = None):
    """
    |<phi, psi>|^2_q = conj(z_(1/q)) z_q, where z_q = <phi, psi>_q and z_(1/q)
    is the same product taken with both pairs viewed at 1/q
    """
    z_q = q_inner_product(phi, psi, branch).value
    z_qinv = q_inner_product(swapped(phi), swapped(psi), branch).value
    return np.conj(z_qinv) * z_q

def q_schwarz_defect(phi, psi, branch = None):
    """
    q-Schwarz defect <phi,phi>_q <psi,psi>_q - |<phi,psi>|^2_q. Complex in
    general; when both q-norms are positive reals a negative real part beyond
    rounding raises a QNormWarning

    Parameters:
    phi (QPairedState): first state
    psi (QPairedState): second state
    branch (QuadratureBranch or None): weights to use

    Returns:
    defect (complex): Schwarz defect
    """
    norm_phi = q_norm_squared(phi, branch)
    norm_psi = q_norm_squared(psi, branch)
    defect = norm_phi.value * norm_psi.value - q_modulus_squared(phi, psi,
                                                                 branch)
    if norm_phi.positive_real and norm_psi.positive_real:
        scale = max(abs(norm_phi.value * norm_psi.value), 1e-300)
        if defect.real < -POSITIVITY_TOL * scale:
            warnings.warn(f'q-Schwarz inequality violated: defect '
                          f'{defect.real!r} for positive q-norms',
                          QNormWarning, stacklevel = 2)
    return complex(defect)
