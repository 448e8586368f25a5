from dataclasses import dataclass, field
import numpy as np

DEFAULT_EPSILON_ONE = 1e-8

@dataclass(frozen = True)
class DeformationParameter:
    """
    The deformation parameter q > 0 together with the tolerance below which
    |q - 1| is treated as the undeformed limit.

    The partner 1/q is computed once and linked both ways, so
    q.inverse().inverse() is q itself rather than 1 / (1 / q).

    Parameters:
    q (float): deformation parameter, strictly positive
    epsilon_one (float): classical-limit threshold on |q - 1|
    """
    q: float
    epsilon_one: float = DEFAULT_EPSILON_ONE
    _partner: object = field(default = None, init = False, repr = False,
                             compare = False, hash = False)

    def __post_init__(self):
        q = float(self.q)
        if not np.isfinite(q) or q <= 0:
            raise ValueError(f'q must be a positive finite real, got {self.q!r}')
        if self.epsilon_one < 0:
            raise ValueError('epsilon_one must be non-negative')
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'epsilon_one', float(self.epsilon_one))

    def inverse(self):
        """
        Returns the DeformationParameter with value 1/q and the same
        epsilon_one. Cached on first use
        """
        if self._partner is None:
            partner = DeformationParameter(1. / self.q, self.epsilon_one)
            object.__setattr__(partner, '_partner', self)
            object.__setattr__(self, '_partner', partner)
        return self._partner

    @property
    def is_classical(self):
        return abs(self.q - 1.) < self.epsilon_one

    def __float__(self):
        return self.q

def as_deformation(q, epsilon_one = DEFAULT_EPSILON_ONE):
    """
    Wraps a number as a DeformationParameter. DeformationParameter instances
    pass through unchanged

    Parameters:
    q (float or DeformationParameter): deformation parameter
    epsilon_one (float): classical-limit threshold used when wrapping a number

    Returns:
    deformation (DeformationParameter): wrapped parameter
    """
    if isinstance(q, DeformationParameter):
        return q
    return DeformationParameter(q, epsilon_one)
