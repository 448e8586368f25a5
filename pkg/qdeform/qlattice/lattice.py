from dataclasses import dataclass, field
from enum import Enum
import numpy as np
from ..qcore.deformation import as_deformation
from ..errors import DegenerateLatticeError, LatticeMismatchError

DEFAULT_LAMBDA0 = 8.
DEFAULT_COUNT = 256

class Branch(str, Enum):
    POSITIVE = 'positive'
    SYMMETRIC = 'symmetric'

@dataclass(frozen = True, eq = False)
class GeometricLattice:
    """
    Geometric lattice on which the Jackson calculus acts exactly.

    Points are stored so that multiplying a point by the lattice deformation
    moves `shift` indices along its half-line: +1 for a lattice built by
    build_lattice, -1 for its conjugate() view. Weights are the Jackson
    quadrature weights |q - 1| |x|.

    Parameters:
    lambda0 (float): outermost point of the generating sequence
    deformation (DeformationParameter): deformation the lattice is viewed at
    count (int): points per half-line
    branch (Branch): POSITIVE or SYMMETRIC
    points (np.array): lattice points
    weights (np.array): Jackson weights
    shift (int): index step of x -> q x
    """
    lambda0: float
    deformation: object
    count: int
    branch: Branch
    points: np.ndarray
    weights: np.ndarray
    shift: int = 1
    next_index: np.ndarray = field(init = False, repr = False)

    def __post_init__(self):
        object.__setattr__(self, 'next_index', _next_index(self.count,
                                   len(self.points) // self.count, self.shift))

    @property
    def q(self):
        return self.deformation.q

    @property
    def size(self):
        return len(self.points)

    @property
    def cap(self):
        """
        Largest valid upper limit of a Jackson integral on this lattice. For
        q > 1 it is one geometric step beyond the largest stored point
        """
        top = float(np.max(np.abs(self.points)))
        if self.q > 1:
            return self.q * top
        return top

    def conjugate(self):
        """
        The same points viewed at deformation 1/q: multiplication by 1/q moves
        one index the other way, and the weights are |1/q - 1| |x|
        """
        inverse = self.deformation.inverse()
        weights = abs(inverse.q - 1.) * np.abs(self.points)
        return GeometricLattice(self.lambda0, inverse, self.count, self.branch,
                                self.points, weights, -self.shift)

    def boundary_rows(self, reach = 1):
        """
        Rows whose stencil of the given reach (number of successive
        multiplications by q) leaves the lattice

        Parameters:
        reach (int): stencil reach

        Returns:
        rows (tuple): sorted row indices
        """
        return tuple(np.flatnonzero(~self.interior_mask(reach)))

    def interior_mask(self, reach = 1):
        mask = np.ones(self.size, dtype = bool)
        current = np.arange(self.size)
        for _ in range(reach):
            valid = current >= 0
            current = np.where(valid, self.next_index[np.maximum(current, 0)],
                               -1)
            mask &= current >= 0
        return mask

    def edge_rows(self, reach = 2):
        """
        Rows truncated at either deformation, q or 1/q, for the given reach
        """
        rows = set(self.boundary_rows(reach))
        rows.update(self.conjugate().boundary_rows(reach))
        return tuple(sorted(rows))

    def edge_mask(self, reach = 2):
        mask = np.zeros(self.size, dtype = bool)
        mask[list(self.edge_rows(reach))] = True
        return mask

    def same_points(self, other):
        return (self.points is other.points or
                (self.points.shape == other.points.shape and
                 np.array_equal(self.points, other.points)))

@dataclass(frozen = True, eq = False)
class LatticeFunction:
    """
    Complex samples of a function on a GeometricLattice.

    Parameters:
    lattice (GeometricLattice): lattice the samples live on
    samples (np.array): one complex sample per point
    source (callable or None): the analytic function the samples came from,
        if known. Used where a value off the lattice is needed
    padded_rows (tuple): rows where a boundary policy supplied the value
    """
    lattice: GeometricLattice
    samples: np.ndarray
    source: object = None
    padded_rows: tuple = ()

    def __post_init__(self):
        samples = np.array(self.samples, dtype = complex)
        if samples.shape != (self.lattice.size,):
            raise LatticeMismatchError(f'expected {self.lattice.size} samples, '
                                       f'got shape {samples.shape}')
        if not np.all(np.isfinite(samples)):
            raise ValueError('lattice function samples must be finite')
        samples.setflags(write = False)
        object.__setattr__(self, 'samples', samples)

    def with_samples(self, samples, padded_rows = ()):
        return LatticeFunction(self.lattice, samples, None, padded_rows)

    def conj(self):
        return self.with_samples(np.conj(self.samples), self.padded_rows)

    def __add__(self, other):
        return self.with_samples(self.samples + _samples_of(self, other))

    def __sub__(self, other):
        return self.with_samples(self.samples - _samples_of(self, other))

    def __mul__(self, other):
        return self.with_samples(self.samples * _samples_of(self, other))

    __rmul__ = __mul__

@dataclass(frozen = True, eq = False)
class OperatorMatrix:
    """
    Linear operator in the lattice sample basis

    Parameters:
    entries (np.array): square matrix
    deformation (DeformationParameter): deformation the operator was built at
    boundary_rows (tuple): rows where the stencil was truncated
    lattice (GeometricLattice): lattice whose samples the operator acts on
    """
    entries: np.ndarray
    deformation: object
    boundary_rows: tuple
    lattice: GeometricLattice

    def __post_init__(self):
        n = self.lattice.size
        if self.entries.shape != (n, n):
            raise LatticeMismatchError(f'operator of shape {self.entries.shape}'
                                       f' does not match {n} lattice points')

    @property
    def dimension(self):
        return self.entries.shape[0]

    def apply(self, F):
        """
        Applies the operator to the samples of a LatticeFunction
        """
        if not self.lattice.same_points(F.lattice):
            raise LatticeMismatchError('operator and function live on '
                                       'different lattices')
        return LatticeFunction(F.lattice, self.entries @ F.samples,
                               padded_rows = self.boundary_rows)

    def __matmul__(self, other):
        if isinstance(other, LatticeFunction):
            return self.apply(other)
        if not self.lattice.same_points(other.lattice):
            raise LatticeMismatchError('operators live on different lattices')
        entries = self.entries @ other.entries
        rows = set(self.boundary_rows)
        if len(other.boundary_rows):
            touched = np.any(self.entries[:, list(other.boundary_rows)] != 0,
                             axis = 1)
            rows.update(np.flatnonzero(touched).tolist())
        return OperatorMatrix(entries, self.deformation,
                              tuple(sorted(int(r) for r in rows)), self.lattice)

    def __add__(self, other):
        if not self.lattice.same_points(other.lattice):
            raise LatticeMismatchError('operators live on different lattices')
        rows = tuple(sorted(set(self.boundary_rows) | set(other.boundary_rows)))
        return OperatorMatrix(self.entries + other.entries, self.deformation,
                              rows, self.lattice)

    def scaled(self, factor):
        return OperatorMatrix(factor * self.entries, self.deformation,
                              self.boundary_rows, self.lattice)

def build_lattice(lambda0 = DEFAULT_LAMBDA0, q = 0.5, count = DEFAULT_COUNT,
                  branch = Branch.POSITIVE):
    """
    Builds a geometric lattice

        q < 1:   lambda_n = lambda0 q^n,          weight lambda_n - lambda_(n+1)
        q > 1:   lambda_n = lambda0 q^(-n-1),     weight lambda_(n-1) - lambda_n

    for n = 0, ..., count - 1. Points are stored so that x -> q x is an index
    shift of +1, so the q > 1 branch comes out in ascending order. The
    symmetric branch mirrors the points onto the negative half-line.

    Parameters:
    lambda0 (float): outermost point, > 0
    q (float or DeformationParameter): deformation parameter, != 1
    count (int): points per half-line, >= 2
    branch (Branch or str): 'positive' or 'symmetric'

    Returns:
    lattice (GeometricLattice): the lattice
    """
    q = as_deformation(q)
    branch = Branch(branch)
    if not lambda0 > 0:
        raise ValueError(f'lambda0 must be positive, got {lambda0!r}')
    if int(count) != count or count < 2:
        raise ValueError(f'count must be an integer >= 2, got {count!r}')
    count = int(count)
    if q.is_classical:
        raise DegenerateLatticeError(f'q = {q.q!r} is within epsilon_one = '
                                     f'{q.epsilon_one!r} of 1; the geometric '
                                     'lattice is undefined')
    n = np.arange(count)
    if q.q < 1:
        half = lambda0 * q.q ** n
    else:
        half = lambda0 * q.q ** (n - count)
    if branch is Branch.SYMMETRIC:
        points = np.concatenate((-half, half))
    else:
        points = half
    points.setflags(write = False)
    weights = abs(q.q - 1.) * np.abs(points)
    return GeometricLattice(float(lambda0), q, count, branch, points, weights)

def sample(lattice, func, vectorized = True):
    """
    Samples a function on a lattice, keeping it as the analytic source

    Parameters:
    lattice (GeometricLattice): lattice
    func (callable): function of x
    vectorized (bool): if True, func is called once on the point array.
        Otherwise it is called point by point

    Returns:
    F (LatticeFunction): sampled function
    """
    if vectorized:
        values = np.asarray(func(lattice.points), dtype = complex)
        if values.ndim == 0:
            values = np.full(lattice.size, complex(values))
    else:
        values = np.array([func(x) for x in lattice.points], dtype = complex)
    return LatticeFunction(lattice, values, source = func)

def check_same_lattice(*functions):
    first = functions[0].lattice
    for F in functions[1:]:
        if not first.same_points(F.lattice):
            raise LatticeMismatchError('lattice functions live on different '
                                       'point sets')
    return first

################################################################################
######################### Utility functions ####################################
################################################################################

def _next_index(count, halves, shift):
    index = np.arange(count * halves)
    local = index % count + shift
    target = index + shift
    return np.where((local >= 0) & (local < count), target, -1)

def _samples_of(F, other):
    if isinstance(other, LatticeFunction):
        check_same_lattice(F, other)
        return other.samples
    return other
