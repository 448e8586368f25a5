class QDeformError(Exception):
    """Base class for every error raised by qdeform"""

class DivergentSeriesError(QDeformError, ArithmeticError):
    """
    Raised when the basic-exponential series is requested outside its disc of
    convergence and no reciprocal route exists

    Parameters:
    z (complex): requested argument
    q (float): deformation parameter
    radius (float): radius of convergence 1 / (1 - q)
    """
    def __init__(self, z, q, radius):
        self.z, self.q, self.radius = z, q, radius
        super().__init__(f'E_q(z) diverges for q = {q!r}, z = {z!r}: '
                         f'|z| >= {radius!r} and z is not a negative real')

class SeriesConvergenceError(QDeformError, ArithmeticError):
    def __init__(self, z, q, max_terms):
        self.z, self.q, self.max_terms = z, q, max_terms
        super().__init__(f'E_q(z) did not meet the stopping rule within '
                         f'{max_terms} terms (q = {q!r}, z = {z!r})')

class PrecisionLossError(QDeformError, ArithmeticError):
    """
    Raised when a direct sum of the basic-exponential series cancels beyond
    the working precision and no reciprocal route applies

    Parameters:
    z (complex): requested argument
    q (float): deformation parameter
    lost (float): estimated relative error, eps * max|term| / |sum|
    """
    def __init__(self, z, q, lost):
        self.z, self.q, self.lost = z, q, lost
        super().__init__(f'E_q(z) loses precision for q = {q!r}, z = {z!r}: '
                         f'estimated relative error {lost!r}')

class QRangeError(QDeformError, OverflowError):
    """
    Raised when a q-factorial leaves the floating range

    Parameters:
    k (int): first factor index at which the product overflowed
    """
    def __init__(self, k, q):
        self.k, self.q = k, q
        super().__init__(f'[n]_q! overflows at k = {k} for q = {q!r}')

class DegenerateLatticeError(QDeformError, ValueError):
    pass

class LatticeMismatchError(QDeformError, ValueError):
    pass

class InsufficientLatticeError(QDeformError, ValueError):
    pass

class UnsupportedDriftError(QDeformError, ValueError):
    pass

class StabilityError(QDeformError, ValueError):
    def __init__(self, dt, bound):
        self.dt, self.bound = dt, bound
        super().__init__(f'explicit step dt = {dt!r} exceeds the stability '
                         f'bound {bound!r}')

class NormalizationError(QDeformError, ValueError):
    def __init__(self, norm):
        self.norm = norm
        super().__init__(f'state is not q-normalized: <psi, psi>_q = {norm!r}')

class ExpansionError(QDeformError, ValueError):
    def __init__(self, message, condition = None):
        self.condition = condition
        super().__init__(message)

class DegradedSpectrumError(QDeformError, RuntimeError):
    def __init__(self, retained, levels, dropped):
        self.retained, self.levels, self.dropped = retained, levels, dropped
        super().__init__(f'only {retained} eigenpairs retained, {levels} '
                         f'requested ({dropped} dropped)')

class UsageError(QDeformError, ValueError):
    """
    Raised for command line and config file problems

    Parameters:
    message (str): description of the problem
    key (str or None): offending config key
    line (int or None): line number in the config file, if the value came from
        a file
    """
    def __init__(self, message, key = None, line = None):
        self.key, self.line = key, line
        where = ''
        if key is not None:
            where += f"key '{key}'"
        if line is not None:
            where += f' (line {line})'
        if where:
            message = f'{where}: {message}'
        super().__init__(message)

################################################################################
############################### Warnings #######################################
################################################################################

class QDeformWarning(UserWarning):
    pass

class LatticeSnapWarning(QDeformWarning):
    pass

class ReciprocalPathWarning(QDeformWarning):
    pass

class DroppedEigenpairWarning(QDeformWarning):
    pass

class QNormWarning(QDeformWarning):
    pass
