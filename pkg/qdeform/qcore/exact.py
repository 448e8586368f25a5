"""
Exact rational mirrors of the q-combinatorics in funcs.py, used as oracles.
q must be a fractions.Fraction (or anything Fraction accepts exactly, such as
an int or a 'p/q' string).
"""
from fractions import Fraction
from functools import lru_cache

def exact_basic_number(n, q):
    q = Fraction(q)
    value = Fraction(0)
    for _ in range(int(n)):
        value = 1 + q * value
    return value

def exact_basic_factorial(n, q):
    q = Fraction(q)
    value = Fraction(1)
    for k in range(1, int(n) + 1):
        value *= exact_basic_number(k, q)
    return value

def exact_q_binomial(n, r, q):
    """
    q-binomial coefficient from the q-Pascal recurrence
        C(n, r) = C(n-1, r-1) + q^r C(n-1, r)
    with C(n, r) = 0 outside 0 <= r <= n

    Parameters:
    n (int): upper index
    r (int): lower index
    q (Fraction, int or str): exact deformation parameter

    Returns:
    value (Fraction): exact coefficient
    """
    return _pascal(int(n), int(r), Fraction(q))

def exact_basic_binomial_power(x, y, n, q):
    x, y, q = Fraction(x), Fraction(y), Fraction(q)
    value = Fraction(1)
    for j in range(int(n)):
        value *= x + q ** j * y
    return value

@lru_cache(maxsize = None)
def _pascal(n, r, q):
    if n < 0 or r < 0 or r > n:
        return Fraction(0)
    if r == 0 or r == n:
        return Fraction(1)
    return _pascal(n - 1, r - 1, q) + q ** r * _pascal(n - 1, r, q)
