import numpy as np
from .hamiltonian import assemble_hamiltonian
from .problem import PotentialKind
from ..qcore.deformation import as_deformation
from ..qcore.exp import convergence_radius, q_plane_wave
from ..qlattice.lattice import build_lattice, sample
from ..qlattice.calculus import jackson_derivative
from ..qhilbert.states import QPairedState

def domain_clipped_lattice(k, q, count = 16, margin = 0.5,
                           branch = 'positive'):
    """
    Lattice on which E_q(i k x) and E_(1/q)(i k x) can both be summed directly:
    |k| max|x| = margin * R, with R the finite one of the two convergence
    radii

    Parameters:
    k (float): wavenumber
    q (float or DeformationParameter): deformation parameter
    count (int): points per half-line
    margin (float): fraction of the radius used, in (0, 1)
    branch (Branch or str): 'positive' or 'symmetric'

    Returns:
    lattice (GeometricLattice): the lattice
    """
    if not 0 < margin < 1:
        raise ValueError(f'margin must lie in (0, 1), got {margin!r}')
    q = as_deformation(q)
    radius = min(convergence_radius(q), convergence_radius(q.inverse()))
    if k == 0 or not np.isfinite(radius):
        top = 1.
    else:
        top = margin * radius / abs(k)
    lambda0 = top if q.q < 1 else q.q * top
    return build_lattice(lambda0, q, count, branch)

def plane_wave_pair(k, lattice, N = None):
    """
    Plane-wave pair (N E_q(i k x), N E_(1/q)(i k x)). N = None normalizes the
    pair to unit q-norm on the lattice, N = 1 / sqrt(sum of Jackson weights)

    Parameters:
    k (float): wavenumber
    lattice (GeometricLattice): lattice at deformation q
    N (float or None): amplitude

    Returns:
    state (QPairedState): paired plane wave
    """
    q = lattice.deformation
    if N is None:
        N = 1. / np.sqrt(np.sum(lattice.weights))
    return QPairedState.from_functions(
        lattice, lambda x: q_plane_wave(k, x, q, N),
        lambda x: q_plane_wave(k, x, q.inverse(), N), f'plane wave k = {k}')

def free_particle_residual(k, problem):
    """
    Relative residual of the free equation D_q^2 phi + k^2 phi = 0 for the
    sampled plane wave phi = E_q(i k x), over rows whose stencil stays on the
    lattice

    Parameters:
    k (float): wavenumber
    problem (SchrodingerProblem): free problem

    Returns:
    residual (float): max |D^2 phi + k^2 phi| / max |phi|
    """
    _require_free(problem)
    lattice = problem.lattice
    q = problem.deformation
    phi = sample(lattice, lambda x: q_plane_wave(k, x, q))
    second = jackson_derivative(jackson_derivative(phi))
    interior = lattice.interior_mask(2)
    defect = np.abs(second.samples + k ** 2 * phi.samples)[interior]
    return float(np.max(defect) / np.max(np.abs(phi.samples)))

def conjugate_pair_defect(k, problem):
    """
    Pointwise check of

        conj(phi_(1/q)) (H_q phi_q) = (H_(1/q) conj(phi_(1/q))) phi_q

    for the plane-wave pair, over rows untruncated at both q and 1/q

    Parameters:
    k (float): wavenumber
    problem (SchrodingerProblem): free problem

    Returns:
    defect (float): max interior modulus of the difference
    """
    _require_free(problem)
    H_q, H_qinv = assemble_hamiltonian(problem)
    pair = plane_wave_pair(k, problem.lattice, 1.)
    bra = pair.psi_qinv.conj()
    left = bra.samples * H_q.apply(pair.psi_q).samples
    right = H_qinv.apply(bra).samples * pair.psi_q.samples
    interior = ~problem.lattice.edge_mask(2)
    return float(np.max(np.abs(left - right)[interior]))

eq54_pointwise_defect = conjugate_pair_defect

################################################################################
######################### Utility functions ####################################
################################################################################

def _require_free(problem):
    if problem.potential.kind is not PotentialKind.FREE:
        raise ValueError('plane-wave checks need a free problem (V = 0)')
