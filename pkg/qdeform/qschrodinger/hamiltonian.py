import numpy as np
from ..qlattice.lattice import OperatorMatrix
from ..qlattice.calculus import jackson_derivative_matrix

def assemble_hamiltonian(problem):
    """
    Deformed Hamiltonian on the problem lattice and its partner at 1/q on the
    same points

                  hbar^2    2
        H  =  -  -------  D    +  diag(V)
         q         2 m     q

    H_(1/q) uses the Jackson derivative at 1/q, which moves one index the
    other way. The potential is shared by both members

    Parameters:
    problem (SchrodingerProblem): problem

    Returns:
    H_q (OperatorMatrix): Hamiltonian at q
    H_qinv (OperatorMatrix): Hamiltonian at 1/q
    """
    V = problem.potential.evaluate(problem.lattice)
    H_q = _kinetic_plus_potential(problem.lattice, problem.kinetic_scale, V)
    H_qinv = _kinetic_plus_potential(problem.lattice.conjugate(),
                                     problem.kinetic_scale, V)
    return H_q, H_qinv

def adjoint_partner(H_q):
    """
    q-adjoint of an operator at q under the d_q x quadrature,
    K = W^-1 H_q^H W with W = diag(Jackson weights). K acts on the 1/q member
    of a paired state and satisfies <phi, H psi>_q = <K phi, psi>_q exactly

    Parameters:
    H_q (OperatorMatrix): operator at deformation q

    Returns:
    K (OperatorMatrix): partner at deformation 1/q
    """
    lattice = H_q.lattice
    w = lattice.weights
    entries = (np.conj(H_q.entries).T * w[None, :]) / w[:, None]
    conjugate = lattice.conjugate()
    return OperatorMatrix(entries, H_q.deformation.inverse(),
                          conjugate.boundary_rows(2), conjugate)

def classical_hamiltonian(points, hbar = 1., mass = 1., V = None):
    """
    Undeformed Hamiltonian on the same points, with the forward difference
    (f(x_(i+1)) - f(x_i)) / (x_(i+1) - x_i) taken in array order and zero
    padding past the last point

    Parameters:
    points (np.array): grid points
    hbar (float): reduced Planck constant
    mass (float): particle mass
    V (np.array or None): potential values; None is the free particle

    Returns:
    H (np.array): Hamiltonian matrix
    """
    points = np.asarray(points, dtype = float)
    n = len(points)
    h = np.diff(points)
    if np.any(h == 0):
        raise ValueError('grid points must be distinct')
    D = np.zeros((n, n))
    rows = np.arange(n - 1)
    D[rows, rows] = -1. / h
    D[rows, rows + 1] = 1. / h
    D[n - 1, n - 1] = -1. / h[-1]
    H = -(hbar ** 2 / (2. * mass)) * (D @ D)
    if V is not None:
        H = H + np.diag(np.asarray(V))
    return H

################################################################################
######################### Utility functions ####################################
################################################################################

def _kinetic_plus_potential(lattice, kinetic_scale, V):
    D = jackson_derivative_matrix(lattice)
    kinetic = (D @ D).scaled(-kinetic_scale)
    return OperatorMatrix(kinetic.entries + np.diag(V), lattice.deformation,
                          kinetic.boundary_rows, lattice)
