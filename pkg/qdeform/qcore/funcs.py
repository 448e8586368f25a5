import numpy as np
from numba import jit
from .deformation import as_deformation
from ..errors import QRangeError

def basic_number(n, q):
    """
    Basic number

                  n
                 q  - 1
        [n]  =  --------  =  1 + q + ... + q^(n-1)
           q     q - 1

    evaluated through the recurrence [k+1]_q = 1 + q [k]_q, which is
    continuous across q = 1. Inside the classical window |q - 1| < epsilon_one
    the limit value n is returned.

    Parameters:
    n (int): non-negative index
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (float): [n]_q
    """
    q = as_deformation(q)
    n = _check_index(n)
    if q.is_classical:
        return float(n)
    return _basic_number(n, q.q)

def basic_number_table(n_max, q):
    """
    Basic numbers [0]_q, [1]_q, ..., [n_max]_q

    Parameters:
    n_max (int): largest index
    q (float or DeformationParameter): deformation parameter

    Returns:
    table (np.array): array of length n_max + 1
    """
    q = as_deformation(q)
    n_max = _check_index(n_max)
    if q.is_classical:
        return np.arange(n_max + 1, dtype = float)
    return _basic_number_table(n_max, q.q)

def basic_factorial(n, q):
    """
    q-factorial [n]_q! = [n]_q [n-1]_q ... [1]_q, with [0]_q! = 1

    Parameters:
    n (int): non-negative index
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (float): [n]_q!
    """
    q = as_deformation(q)
    n = _check_index(n)
    table = basic_number_table(n, q)
    value = 1.
    for k in range(1, n + 1):
        value *= table[k]
        if not np.isfinite(value):
            raise QRangeError(k, q.q)
    return value

def q_binomial(n, r, q):
    """
    q-binomial coefficient

        [ n ]        [n]_q!
        [   ]   = -----------------
        [ r ]_q    [r]_q! [n - r]_q!

    for 0 <= r <= n and exactly 0 for every other integer pair. Evaluated as
    the product of [n - r + j]_q / [j]_q so that large n does not overflow
    the factorials.

    Parameters:
    n (int): upper index
    r (int): lower index
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (float): coefficient
    """
    q = as_deformation(q)
    n, r = int(n), int(r)
    if n < 0 or r < 0 or r > n:
        return 0.
    r = min(r, n - r)
    table = basic_number_table(n, q)
    value = 1.
    for j in range(1, r + 1):
        value *= table[n - r + j] / table[j]
    return value

def q_pascal_defect(n, r, q):
    """
    Relative defect of the q-Pascal recurrence
        C(n, r) = C(n-1, r-1) + q^r C(n-1, r)

    Parameters:
    n (int): upper index, >= 1
    r (int): lower index
    q (float or DeformationParameter): deformation parameter

    Returns:
    defect (float): relative defect
    """
    q = as_deformation(q)
    lhs = q_binomial(n, r, q)
    rhs = q_binomial(n - 1, r - 1, q) + q.q ** r * q_binomial(n - 1, r, q)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale

def basic_binomial_power(x, y, n, q):
    """
    Basic binomial
                  (n)
        (x + y)       = (x + y)(x + q y)(x + q^2 y) ... (x + q^(n-1) y)

    Parameters:
    x (float): first argument
    y (float): second argument
    n (int): non-negative order
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (float): the ordered product
    """
    q = as_deformation(q)
    n = _check_index(n)
    qq = 1. if q.is_classical else q.q
    value = 1.
    qj = 1.
    for j in range(n):
        value *= x + qj * y
        qj *= qq
    return value

def basic_binomial_sum(x, y, n, q):
    """
    Sum form of the basic binomial

         n   [ n ]     r(r-1)/2   n-r  r
        sum  [   ]    q          x    y
        r=0  [ r ]_q

    Parameters:
    x (float): first argument
    y (float): second argument
    n (int): non-negative order
    q (float or DeformationParameter): deformation parameter

    Returns:
    value (float): the sum
    """
    q = as_deformation(q)
    n = _check_index(n)
    qq = 1. if q.is_classical else q.q
    value = 0.
    for r in range(n + 1):
        value += (q_binomial(n, r, q) * qq ** (r * (r - 1) / 2)
                  * x ** (n - r) * y ** r)
    return value

################################################################################
######################### Utility functions ####################################
################################################################################

def _check_index(n):
    if int(n) != n or n < 0:
        raise ValueError(f'index must be a non-negative integer, got {n!r}')
    return int(n)

@jit(nopython=True)
def _basic_number(n, q):
    """
    Horner form of 1 + q + ... + q^(n-1)
    """
    value = 0.
    for _ in range(n):
        value = 1. + q * value
    return value

@jit(nopython=True)
def _basic_number_table(n_max, q):
    table = np.zeros(n_max + 1)
    for k in range(1, n_max + 1):
        table[k] = 1. + q * table[k - 1]
    return table
