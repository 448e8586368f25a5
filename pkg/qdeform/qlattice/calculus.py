import warnings
import numpy as np
from .lattice import LatticeFunction, OperatorMatrix
from ..qcore.deformation import as_deformation
from ..errors import DegenerateLatticeError, LatticeSnapWarning

SNAP_RTOL = 1e-12

def dilate(F):
    """
    Dilatation f(x) -> f(q x), an index shift on the lattice. Where q x leaves
    the lattice the sample is zero-padded and the row is recorded in
    padded_rows

    Parameters:
    F (LatticeFunction): function to dilate

    Returns:
    G (LatticeFunction): samples of f(q x)
    """
    lattice = F.lattice
    target = lattice.next_index
    valid = target >= 0
    samples = np.zeros(lattice.size, dtype = complex)
    samples[valid] = F.samples[target[valid]]
    source = None
    if F.source is not None:
        q, f = lattice.q, F.source
        source = lambda x: f(q * np.asarray(x))
    return LatticeFunction(lattice, samples, source,
                           tuple(np.flatnonzero(~valid).tolist()))

def jackson_derivative(F):
    """
    Jackson derivative

                   f(q x) - f(x)
        D  f(x) = ---------------
         q          (q - 1) x

    with the dilatation boundary policy

    Parameters:
    F (LatticeFunction): function to differentiate

    Returns:
    G (LatticeFunction): samples of D_q f
    """
    lattice = F.lattice
    shifted = dilate(F)
    samples = (shifted.samples - F.samples) / ((lattice.q - 1.) * lattice.points)
    return LatticeFunction(lattice, samples, padded_rows = shifted.padded_rows)

def dilatation_matrix(lattice):
    """
    Matrix of f(x) -> f(q x) in the lattice sample basis
    """
    n = lattice.size
    entries = np.zeros((n, n))
    rows = np.flatnonzero(lattice.next_index >= 0)
    entries[rows, lattice.next_index[rows]] = 1.
    return OperatorMatrix(entries, lattice.deformation,
                          lattice.boundary_rows(1), lattice)

def jackson_derivative_matrix(lattice):
    """
    Matrix of the Jackson derivative: -1/((q-1)x) on the diagonal and
    +1/((q-1)x) in the column of q x

    Parameters:
    lattice (GeometricLattice): lattice

    Returns:
    D (OperatorMatrix): derivative matrix, boundary rows where q x leaves the
        lattice
    """
    n = lattice.size
    scale = 1. / ((lattice.q - 1.) * lattice.points)
    entries = np.diag(-scale)
    rows = np.flatnonzero(lattice.next_index >= 0)
    entries[rows, lattice.next_index[rows]] = scale[rows]
    return OperatorMatrix(entries, lattice.deformation,
                          lattice.boundary_rows(1), lattice)

def jackson_integral(F, upper = None):
    """
    Jackson integral from 0 to upper over the lattice

        q < 1:   sum over lattice points x <= upper of  w(x) f(x)
        q > 1:   sum over lattice points x <  upper of  w(x) f(x)

    with w(x) = |q - 1| |x|. On a symmetric lattice both half-lines are
    integrated, i.e. the result is the integral over [-upper, upper]. An upper
    limit that is not a valid lattice point is snapped to the nearest one with
    a LatticeSnapWarning.

    Parameters:
    F (LatticeFunction): integrand
    upper (float or None): upper limit. None integrates over the whole lattice

    Returns:
    value (complex): integral
    """
    lattice = F.lattice
    mask = _integration_mask(lattice, upper)
    return complex(np.sum(lattice.weights[mask] * F.samples[mask]))

def cumulative_jackson_integral(F):
    """
    Jackson integral from 0 to every lattice point x_i, with the same
    inclusion rule as jackson_integral. On the negative half-line the
    integral runs from 0 down to x_i and carries the sign of x_i

    Parameters:
    F (LatticeFunction): integrand

    Returns:
    I (LatticeFunction): cumulative integral
    """
    lattice = F.lattice
    inclusive = lattice.q < 1
    terms = lattice.weights * F.samples
    result = np.zeros(lattice.size, dtype = complex)
    for start in range(0, lattice.size, lattice.count):
        half = slice(start, start + lattice.count)
        order = np.argsort(np.abs(lattice.points[half]))
        partial = np.cumsum(terms[half][order])
        if not inclusive:
            partial = partial - terms[half][order]
        values = np.empty(lattice.count, dtype = complex)
        values[order] = partial
        result[half] = np.sign(lattice.points[half]) * values
    return LatticeFunction(lattice, result)

def jackson_integral_callable(func, upper, q, rtol = np.finfo(float).eps):
    """
    Jackson integral of a function from 0 to upper on the infinite geometric
    sequence through upper, truncated once the geometric factor drops
    below rtol

        q < 1:   (1 - q) upper  sum_n  q^n  f(upper q^n)
        q > 1:   (q - 1) upper  sum_n  q^(-n-1)  f(upper q^(-n-1))

    Parameters:
    func (callable): vectorized function of x
    upper (float): upper limit, may be negative
    q (float or DeformationParameter): deformation parameter
    rtol (float): truncation threshold on the geometric factor

    Returns:
    value (float or complex): integral
    """
    q = as_deformation(q)
    if q.is_classical:
        raise DegenerateLatticeError('the Jackson integral needs q != 1')
    if upper == 0:
        return 0.
    ratio = min(q.q, 1. / q.q)
    terms = int(np.ceil(np.log(rtol) / np.log(ratio))) + 2
    n = np.arange(terms)
    if q.q < 1:
        x = upper * q.q ** n
        weights = (1. - q.q) * x
    else:
        x = upper * q.q ** (-n - 1.)
        weights = (q.q - 1.) * x
    return np.sum(weights * np.asarray(func(x)))

def jackson_derivative_callable(func, x, q):
    """
    Jackson derivative of a vectorized function at x != 0, evaluated from the
    function itself rather than from lattice samples

    Parameters:
    func (callable): vectorized function
    x (float or np.array): nonzero evaluation point(s)
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (float, complex or np.array): D_q f(x)
    """
    q = as_deformation(q)
    x = np.asarray(x, dtype = float)
    if np.any(x == 0):
        raise ValueError('the Jackson derivative is evaluated at x != 0 only')
    if q.is_classical:
        raise DegenerateLatticeError('the Jackson derivative needs q != 1')
    return (np.asarray(func(q.q * x)) - np.asarray(func(x))) / ((q.q - 1.) * x)

################################################################################
######################### Utility functions ####################################
################################################################################

def valid_upper_limits(lattice):
    """
    Upper limits a Jackson integral accepts without snapping
    """
    positive = np.sort(np.unique(np.abs(lattice.points)))
    if lattice.q > 1:
        positive = np.append(positive, lattice.cap)
    return positive

def snap_upper(lattice, upper):
    """
    Snaps an upper limit to the nearest valid lattice limit, warning when the
    value moves by more than SNAP_RTOL
    """
    valid = valid_upper_limits(lattice)
    distance = np.abs(np.log(valid) - np.log(upper))
    snapped = float(valid[np.argmin(distance)])
    if abs(snapped - upper) > SNAP_RTOL * abs(upper):
        warnings.warn(f'Jackson integral upper limit {upper!r} is not a lattice '
                      f'point; snapped to {snapped!r}', LatticeSnapWarning,
                      stacklevel = 3)
    return snapped

def _integration_mask(lattice, upper):
    if upper is None:
        return np.ones(lattice.size, dtype = bool)
    if upper < 0:
        raise ValueError('upper limit must be non-negative; symmetric lattices '
                         'integrate over [-upper, upper]')
    if upper == 0:
        return np.zeros(lattice.size, dtype = bool)
    upper = snap_upper(lattice, upper)
    magnitude = np.abs(lattice.points)
    if lattice.q < 1:
        return magnitude <= upper * (1. + SNAP_RTOL)
    return magnitude < upper * (1. - SNAP_RTOL)
