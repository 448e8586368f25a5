import warnings
from dataclasses import dataclass
from enum import Enum
import numpy as np
from numba import jit
from .deformation import as_deformation
from ..errors import (DivergentSeriesError, PrecisionLossError,
                      SeriesConvergenceError, ReciprocalPathWarning)

DEFAULT_TOL_REL = 1e-14
DEFAULT_MAX_TERMS = 100000
SMALL_TERMS_TO_STOP = 3
CANCELLATION_TOL = 1e-10

class DomainFlag(str, Enum):
    INSIDE = 'inside'
    VIA_RECIPROCAL = 'via_reciprocal'
    DIVERGENT = 'divergent'

@dataclass(frozen = True)
class SeriesEvaluation:
    """
    Result of summing the basic-exponential series

    Parameters:
    value (complex): E_q(z)
    terms_used (int): number of series terms summed, including the zeroth
    truncation_bound (float): magnitude of the first omitted term, carried
        through the reciprocal when domain_flag is VIA_RECIPROCAL
    domain_flag (DomainFlag): how the value was obtained
    """
    value: complex
    terms_used: int
    truncation_bound: float
    domain_flag: DomainFlag

    def __post_init__(self):
        if self.domain_flag is DomainFlag.DIVERGENT:
            raise ValueError('a divergent series has no value')
        if self.terms_used < 1 or self.truncation_bound < 0:
            raise ValueError('terms_used must be >= 1 and truncation_bound >= 0')

def convergence_radius(q):
    """
    Radius of convergence of the series for E_q: 1/(1 - q) for q < 1,
    infinite otherwise

    Parameters:
    q (float or DeformationParameter): deformation parameter

    Returns:
    radius (float): radius of convergence
    """
    q = as_deformation(q)
    if q.is_classical or q.q > 1:
        return np.inf
    return 1. / (1. - q.q)

def q_exp(z, q, tol_rel = DEFAULT_TOL_REL, max_terms = DEFAULT_MAX_TERMS):
    """
    Basic exponential

                   inf     k
        E (z)  =   sum   z  / [k] !
         q         k=0            q

    The series is summed until three consecutive terms fall below
    tol_rel * |partial sum|. For q < 1 it converges only for |z| < 1/(1 - q).
    Negative reals outside that disc are evaluated as 1 / E_{1/q}(-z).

    For q > 1 and real z < -1 the value is taken from the reciprocal identity:
    the positive 1/q series when -z lies inside its disc, otherwise the entire
    product form

                     inf
        E (z)  =   prod   (1 + (1 - 1/q) q^-k z)
         q          k=0

    A direct sum whose largest term exceeds |sum| by more than the precision
    allows is re-evaluated through the same identity. When no such route
    exists PrecisionLossError is raised.

    Parameters:
    z (complex): argument
    q (float or DeformationParameter): deformation parameter
    tol_rel (float): relative stopping threshold
    max_terms (int): hard cap on the number of terms

    Returns:
    result (SeriesEvaluation): value, terms used, truncation bound and domain
        flag
    """
    q = as_deformation(q)
    z = complex(z)
    if z == 0:
        return SeriesEvaluation(1. + 0.j, 1, 0., DomainFlag.INSIDE)
    negative_real = z.imag == 0 and z.real < 0
    deformed_up = not q.is_classical and q.q > 1
    if deformed_up and negative_real and z.real < -1:
        if -z.real < convergence_radius(q.inverse()):
            return _via_reciprocal(z, q, tol_rel, max_terms)
        return _via_product(z, q, tol_rel, max_terms)
    radius = convergence_radius(q)
    if abs(z) >= radius:
        if negative_real:
            return _via_reciprocal(z, q, tol_rel, max_terms)
        raise DivergentSeriesError(z, q.q, radius)
    result, lost = _direct(z, q, tol_rel, max_terms)
    if lost <= CANCELLATION_TOL:
        return result
    if deformed_up:
        return _via_product(z, q, tol_rel, max_terms)
    if negative_real:
        return _via_reciprocal(z, q, tol_rel, max_terms)
    raise PrecisionLossError(z, q.q, lost)

def q_exp_values(z, q, tol_rel = DEFAULT_TOL_REL, max_terms = DEFAULT_MAX_TERMS):
    """
    Elementwise q_exp over an array of arguments

    Parameters:
    z (np.array): arguments
    q (float or DeformationParameter): deformation parameter
    tol_rel (float): relative stopping threshold
    max_terms (int): hard cap on the number of terms

    Returns:
    values (np.array): complex values with the shape of z
    flags (np.array): DomainFlag value strings with the shape of z
    """
    q = as_deformation(q)
    z = np.asarray(z, dtype = complex)
    values = np.empty(z.shape, dtype = complex)
    flags = np.empty(z.shape, dtype = object)
    for index, zi in np.ndenumerate(z):
        result = q_exp(zi, q, tol_rel, max_terms)
        values[index] = result.value
        flags[index] = result.domain_flag.value
    return values, flags

def q_exp_inverse_defect(x, q, tol_rel = DEFAULT_TOL_REL):
    """
    Defect of the identity E_q(x) E_{1/q}(-x) = 1

    Parameters:
    x (float): argument
    q (float or DeformationParameter): deformation parameter
    tol_rel (float): relative stopping threshold

    Returns:
    defect (float): |E_q(x) E_{1/q}(-x) - 1|
    """
    q = as_deformation(q)
    product = (q_exp(x, q, tol_rel).value *
               q_exp(-x, q.inverse(), tol_rel).value)
    return abs(product - 1.)

def q_exp_addition_defect(x, y, q, tol_rel = DEFAULT_TOL_REL,
                          max_terms = 2000):
    """
    Relative defect of the addition law

         inf          (k)
         sum  (x + y)    / [k] !   =   E (x) E   (y)
         k=0                  q         q     1/q

    where (x + y)^(k) is the basic binomial

    Parameters:
    x (float): first argument
    y (float): second argument
    q (float or DeformationParameter): deformation parameter
    tol_rel (float): relative stopping threshold
    max_terms (int): hard cap on the number of terms

    Returns:
    defect (float): relative defect
    """
    q = as_deformation(q)
    qq = 1. if q.is_classical else q.q
    total = 1.
    term = 1.
    basic = 0.
    qj = 1.
    small = 0
    for k in range(1, max_terms + 1):
        basic = float(k) if q.is_classical else 1. + qq * basic
        term *= (x + qj * y) / basic
        qj *= qq
        small = small + 1 if abs(term) <= tol_rel * abs(total) else 0
        total += term
        if small == SMALL_TERMS_TO_STOP:
            break
    else:
        raise SeriesConvergenceError(complex(x + y), q.q, max_terms)
    rhs = (q_exp(x, q, tol_rel).value * q_exp(y, q.inverse(), tol_rel).value)
    return abs(total - rhs) / max(abs(rhs), 1e-300)

def q_plane_wave(k, x, q, N = 1.):
    """
    Deformed plane wave N E_q(i k x)

    Parameters:
    k (float): wavenumber
    x (float or np.array): position(s)
    q (float or DeformationParameter): deformation parameter
    N (float): amplitude

    Returns:
    phi (complex or np.array): plane wave value(s)
    """
    if np.ndim(x) == 0:
        return N * q_exp(1.j * k * x, q).value
    values, _ = q_exp_values(1.j * k * np.asarray(x, dtype = float), q)
    return N * values

def plane_wave_unit_modulus_defect(k, x, q):
    """
    Defect of E_q(i k x) conj(E_{1/q}(i k x)) = 1, the identity behind the
    constant probability density of the deformed plane wave

    Parameters:
    k (float): wavenumber
    x (float): position
    q (float or DeformationParameter): deformation parameter

    Returns:
    defect (float): |E_q(ikx) conj(E_{1/q}(ikx)) - 1|
    """
    q = as_deformation(q)
    value = q_plane_wave(k, x, q) * np.conj(q_plane_wave(k, x, q.inverse()))
    return abs(value - 1.)

################################################################################
######################### Utility functions ####################################
################################################################################

def _direct(z, q, tol_rel, max_terms):
    value, terms, bound, largest, converged = _exp_series(
        z, q.q, q.is_classical, tol_rel, max_terms)
    if not converged:
        raise SeriesConvergenceError(z, q.q, max_terms)
    lost = np.finfo(float).eps * largest / max(abs(value), 1e-300)
    result = SeriesEvaluation(complex(value), int(terms), float(bound),
                              DomainFlag.INSIDE)
    return result, lost

def _via_reciprocal(z, q, tol_rel, max_terms):
    warnings.warn(f'E_q(z) for q = {q.q!r} evaluated as 1/E_(1/q)(-z) on the '
                  'negative real axis', ReciprocalPathWarning, stacklevel = 3)
    inner, _ = _direct(-z, q.inverse(), tol_rel, max_terms)
    value = 1. / inner.value
    bound = inner.truncation_bound / abs(inner.value) ** 2
    return SeriesEvaluation(value, inner.terms_used, bound,
                            DomainFlag.VIA_RECIPROCAL)

def _via_product(z, q, tol_rel, max_terms):
    warnings.warn(f'E_q(z) for q = {q.q!r} evaluated through the product form '
                  'of 1/E_(1/q)(-z)', ReciprocalPathWarning, stacklevel = 3)
    value, factors, bound, converged = _exp_product(z, 1. / q.q, tol_rel,
                                                    max_terms)
    if not converged:
        raise SeriesConvergenceError(z, q.q, max_terms)
    return SeriesEvaluation(complex(value), int(factors), float(bound),
                            DomainFlag.VIA_RECIPROCAL)

@jit(nopython=True)
def _exp_series(z, q, classical, tol_rel, max_terms):
    """
    Sums z^k / [k]_q! with the three-small-terms stopping rule

    Returns:
    total (complex): partial sum
    terms (int): terms summed, including k = 0
    bound (float): magnitude of the first omitted term
    largest (float): largest term magnitude met in the sum
    converged (bool): whether the stopping rule was met
    """
    total = 1. + 0.j
    term = 1. + 0.j
    basic = 0.
    largest = 1.
    small = 0
    k = 0
    while k < max_terms:
        k += 1
        if classical:
            basic = float(k)
        else:
            basic = 1. + q * basic
        term = term * z / basic
        if abs(term) > largest:
            largest = abs(term)
        if abs(term) <= tol_rel * abs(total):
            small += 1
        else:
            small = 0
        total += term
        if small == 3:
            if classical:
                next_basic = float(k + 1)
            else:
                next_basic = 1. + q * basic
            return total, k + 1, abs(term * z / next_basic), largest, True
    return total, k + 1, abs(term), largest, False

@jit(nopython=True)
def _exp_product(z, p, tol_rel, max_terms):
    """
    Multiplies the factors 1 + (1 - p) p^k z, p = 1/q < 1, until the tail
    p^k |z| falls below tol_rel

    Returns:
    total (complex): partial product
    factors (int): factors multiplied
    bound (float): |total| p^k |z|, the first-order size of the omitted tail
    converged (bool): whether the tail criterion was met
    """
    total = 1. + 0.j
    scale = (1. - p) * z
    pk = 1.
    k = 0
    while k < max_terms:
        total = total * (1. + scale * pk)
        pk *= p
        k += 1
        if pk * abs(z) <= tol_rel:
            return total, k, abs(total) * pk * abs(z), True
    return total, k, abs(total) * pk * abs(z), False
