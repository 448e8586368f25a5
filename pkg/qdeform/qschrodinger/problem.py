from dataclasses import dataclass
from enum import Enum
import numpy as np
from ..qcore.deformation import as_deformation
from ..errors import LatticeMismatchError

class PotentialKind(str, Enum):
    FREE = 'free'
    BROWNIAN_MAPPED = 'brownian_mapped'
    LATTICE = 'lattice'

@dataclass(frozen = True, eq = False)
class PotentialSpec:
    """
    Potential V_q of a Schrodinger problem

    Parameters:
    kind (PotentialKind): FREE, BROWNIAN_MAPPED or LATTICE
    samples (np.array or None): values on the lattice, for kind LATTICE
    func (callable or None): vectorized V(x), for kind BROWNIAN_MAPPED
    label (str): free text
    """
    kind: PotentialKind = PotentialKind.FREE
    samples: np.ndarray = None
    func: object = None
    label: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'kind', PotentialKind(self.kind))
        if self.kind is PotentialKind.LATTICE and self.samples is None:
            raise ValueError('a lattice potential needs samples')
        if self.kind is PotentialKind.BROWNIAN_MAPPED and self.func is None:
            raise ValueError('a mapped potential needs a function of x')

    def evaluate(self, lattice):
        """
        Potential values on the lattice points

        Parameters:
        lattice (GeometricLattice): lattice

        Returns:
        V (np.array): complex potential values
        """
        if self.kind is PotentialKind.FREE:
            return np.zeros(lattice.size, dtype = complex)
        if self.kind is PotentialKind.LATTICE:
            V = np.asarray(self.samples, dtype = complex)
            if V.shape != (lattice.size,):
                raise LatticeMismatchError(f'potential has {V.size} samples, '
                                           f'lattice has {lattice.size} points')
            return V
        return np.asarray(self.func(lattice.points), dtype = complex)

@dataclass(frozen = True, eq = False)
class SchrodingerProblem:
    """
    Deformed Schrodinger problem with Hamiltonian

                  hbar^2    2
        H  =  -  -------  D    +  V
         q         2 m     q       q

    Parameters:
    lattice (GeometricLattice): lattice
    potential (PotentialSpec): potential
    hbar (float): reduced Planck constant, > 0
    mass (float): particle mass, > 0
    deformation (DeformationParameter or None): defaults to the lattice's
    """
    lattice: object
    potential: PotentialSpec = PotentialSpec()
    hbar: float = 1.
    mass: float = 1.
    deformation: object = None

    def __post_init__(self):
        if not self.hbar > 0 or not self.mass > 0:
            raise ValueError('hbar and mass must be positive')
        if self.deformation is None:
            object.__setattr__(self, 'deformation', self.lattice.deformation)
        deformation = as_deformation(self.deformation)
        if deformation.q != self.lattice.q:
            raise LatticeMismatchError(f'problem deformation {deformation.q!r} '
                                       f'differs from lattice q {self.lattice.q!r}')
        object.__setattr__(self, 'deformation', deformation)

    @property
    def kinetic_scale(self):
        return self.hbar ** 2 / (2. * self.mass)

    def with_potential(self, potential):
        return SchrodingerProblem(self.lattice, potential, self.hbar, self.mass,
                                  self.deformation)
