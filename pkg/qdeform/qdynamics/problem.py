from dataclasses import dataclass
from enum import Enum
import numpy as np
from ..qcore.deformation import as_deformation
from ..errors import LatticeMismatchError

class DriftForm(str, Enum):
    MONOMIAL = 'monomial'
    OPERATOR_VALUED = 'operator_valued'

class Convention(str, Enum):
    LITERAL_QX = 'literal_qx'
    ARGUMENT_SCALING = 'argument_scaling'

@dataclass(frozen = True)
class DriftSpec:
    """
    Drift coefficient J1 of the deformed Fokker-Planck equation. A monomial
    drift is J1(x) = coefficient * x^exponent. The operator-valued drift is

        J1 = -gamma x (q S + 1)

    where S is the dilatation f(x) -> f(q x)

    Parameters:
    gamma (float): friction constant, > 0
    form (DriftForm): MONOMIAL or OPERATOR_VALUED
    coefficient (float): monomial coefficient; defaults to -gamma
    exponent (int): monomial exponent, >= 0
    """
    gamma: float
    form: DriftForm = DriftForm.MONOMIAL
    coefficient: float = None
    exponent: int = 1

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f'gamma must be positive, got {self.gamma!r}')
        object.__setattr__(self, 'form', DriftForm(self.form))
        if int(self.exponent) != self.exponent or self.exponent < 0:
            raise ValueError('monomial exponent must be a non-negative integer')
        object.__setattr__(self, 'exponent', int(self.exponent))
        if self.coefficient is None:
            object.__setattr__(self, 'coefficient', -float(self.gamma))

    @property
    def is_monomial(self):
        return self.form is DriftForm.MONOMIAL

    def monomial(self, x):
        """
        J1(x) for a monomial drift
        """
        return self.coefficient * np.asarray(x, dtype = float) ** self.exponent

@dataclass(frozen = True)
class DiffusionSpec:
    """
    Parameters:
    J2 (float): diffusion coefficient, > 0
    alpha (float or None): gamma / J2 when built from the Brownian postulate
    """
    J2: float
    alpha: float = None

    def __post_init__(self):
        if not self.J2 > 0:
            raise ValueError(f'J2 must be positive, got {self.J2!r}')

@dataclass(frozen = True, eq = False)
class FPProblem:
    """
    Deformed Fokker-Planck problem

        d f / dt = D [ -J1 + J2 D ] f
                    q           q

    Parameters:
    drift (DriftSpec): drift coefficient
    diffusion (DiffusionSpec): diffusion coefficient
    lattice (GeometricLattice): lattice the density lives on
    deformation (DeformationParameter or None): defaults to the lattice's
    convention (Convention): reading of the dilatation inside the
        operator-valued drift for off-lattice evaluations
    """
    drift: DriftSpec
    diffusion: DiffusionSpec
    lattice: object
    deformation: object = None
    convention: Convention = Convention.ARGUMENT_SCALING

    def __post_init__(self):
        if self.deformation is None:
            object.__setattr__(self, 'deformation', self.lattice.deformation)
        deformation = as_deformation(self.deformation)
        if deformation.q != self.lattice.q:
            raise LatticeMismatchError(f'problem deformation {deformation.q!r} '
                                       f'differs from lattice q {self.lattice.q!r}')
        object.__setattr__(self, 'deformation', deformation)
        object.__setattr__(self, 'convention', Convention(self.convention))

    @property
    def alpha(self):
        """
        gamma / J2, the Gaussian width parameter of the stationary density
        """
        if self.diffusion.alpha is not None:
            return self.diffusion.alpha
        return self.drift.gamma / self.diffusion.J2

def brownian_problem(gamma, alpha, lattice,
                     convention = Convention.ARGUMENT_SCALING):
    """
    Generalized Brownian motion: J1 = -gamma x (q S + 1), J2 = gamma / alpha

    Parameters:
    gamma (float): friction constant
    alpha (float): Gaussian width parameter
    lattice (GeometricLattice): lattice
    convention (Convention or str): dilatation convention

    Returns:
    problem (FPProblem): the problem
    """
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha!r}')
    return FPProblem(DriftSpec(gamma, DriftForm.OPERATOR_VALUED),
                     DiffusionSpec(gamma / alpha, alpha), lattice,
                     convention = convention)

def linear_problem(gamma, alpha, lattice):
    """
    Deformed Ornstein-Uhlenbeck problem: J1 = -gamma x, J2 = gamma / alpha
    """
    if not alpha > 0:
        raise ValueError(f'alpha must be positive, got {alpha!r}')
    return FPProblem(DriftSpec(gamma), DiffusionSpec(gamma / alpha, alpha),
                     lattice)
