import numpy as np
from .lattice import LatticeFunction
from .calculus import jackson_derivative
from ..qcore.deformation import as_deformation
from ..qcore.funcs import basic_number_table
from ..errors import InsufficientLatticeError

def q_taylor_coefficients(F, a, order, q = None, contour_radius = 0.5,
                          contour_points = 64):
    """
    Coefficients of the q-Taylor expansion

                 order   D^k f(a)       (k)
        f(x) ~   sum    ----------  (x - a)
                 k=0     [k]_q!

    where (x - a)^(k) is the basic binomial.

    For a LatticeFunction, D^k f(a) comes from repeated lattice Jackson
    derivatives, and a must be a lattice point whose stencil reaches k steps.
    For a callable and a != 0 the derivatives are taken on the local sequence
    a, q a, ..., q^order a. For a callable and a = 0 the coefficients reduce
    to the ordinary Taylor coefficients, which are read off with an FFT over a
    circle of radius contour_radius (the callable must then accept complex
    arguments).

    Parameters:
    F (LatticeFunction or callable): function to expand
    a (float): expansion point
    order (int): highest order
    q (float, DeformationParameter or None): deformation parameter, required
        for callables
    contour_radius (float): circle radius used at a = 0
    contour_points (int): number of FFT nodes used at a = 0

    Returns:
    coefficients (np.array): complex coefficients, length order + 1
    """
    order = int(order)
    if order < 0:
        raise ValueError('order must be non-negative')
    if isinstance(F, LatticeFunction):
        derivatives = _lattice_derivatives(F, a, order)
        q = F.lattice.deformation
    else:
        if q is None:
            raise ValueError('q is required when expanding a callable')
        q = as_deformation(q)
        if a == 0:
            return _contour_coefficients(F, order, contour_radius,
                                         contour_points)
        derivatives = _sequence_derivatives(F, a, order, q)
    factorials = np.cumprod(np.concatenate(([1.],
                            basic_number_table(order, q)[1:])))
    return derivatives / factorials

def q_taylor_reconstruct(coefficients, a, x, q):
    """
    Evaluates sum_k c_k (x - a)^(k) with (x - a)^(k) = prod_j (x - q^j a)

    Parameters:
    coefficients (np.array): expansion coefficients
    a (float): expansion point
    x (float or np.array): evaluation point(s)
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (complex or np.array): reconstructed values
    """
    q = as_deformation(q)
    qq = 1. if q.is_classical else q.q
    x = np.asarray(x, dtype = float)
    basis = np.ones_like(x, dtype = complex)
    total = np.zeros_like(x, dtype = complex)
    qj = 1.
    for c in coefficients:
        total = total + c * basis
        basis = basis * (x - qj * a)
        qj *= qq
    if total.ndim == 0:
        return complex(total)
    return total

################################################################################
######################### Utility functions ####################################
################################################################################

def _lattice_derivatives(F, a, order):
    lattice = F.lattice
    matches = np.flatnonzero(np.isclose(lattice.points, a, rtol = 1e-12,
                                        atol = 0.))
    if len(matches) == 0:
        raise ValueError(f'expansion point {a!r} is not a lattice point')
    index = int(matches[0])
    reach = index
    for _ in range(order):
        reach = lattice.next_index[reach]
        if reach < 0:
            raise InsufficientLatticeError(f'order {order} at x = {a!r} needs '
                                           f'{order} lattice steps beyond it')
    derivatives = np.empty(order + 1, dtype = complex)
    G = F
    derivatives[0] = G.samples[index]
    for k in range(1, order + 1):
        G = jackson_derivative(G)
        derivatives[k] = G.samples[index]
    return derivatives

def _sequence_derivatives(func, a, order, q):
    x = a * q.q ** np.arange(order + 1)
    values = np.array([complex(func(xi)) for xi in x])
    derivatives = np.empty(order + 1, dtype = complex)
    derivatives[0] = values[0]
    for k in range(1, order + 1):
        values = (values[1:] - values[:-1]) / ((q.q - 1.) * x[:len(values) - 1])
        derivatives[k] = values[0]
    return derivatives

def _contour_coefficients(func, order, radius, nodes):
    if nodes <= order:
        raise ValueError('contour_points must exceed order')
    z = radius * np.exp(2.j * np.pi * np.arange(nodes) / nodes)
    values = np.array([complex(func(zi)) for zi in z])
    c = np.fft.fft(values) / nodes
    return c[:order + 1] / radius ** np.arange(order + 1)
