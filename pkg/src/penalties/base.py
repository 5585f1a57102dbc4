from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Hashable, NamedTuple
import numpy as np


@dataclass(frozen=True)
class ManifoldInfo:
    """Active manifold at a point: discrete signature, tangent basis, projector.

    ``tangent_basis`` is ambient_dim x t with orthonormal columns.
    """
    signature: Hashable
    tangent_basis: np.ndarray
    project: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    @property
    def dimension(self) -> int:
        return int(self.tangent_basis.shape[1])

    @property
    def ambient_dimension(self) -> int:
        return int(self.tangent_basis.shape[0])


class ProxResult(NamedTuple):
    point: np.ndarray
    value: float
    signature: Hashable


class Penalty(ABC):
    """Non-smooth term R acting on flat vectors of length ``dimension``.

    ``prox(z, theta)`` returns a minimizer of 0.5*||x - z||^2 + theta*R(x),
    where R already includes the penalty weight.
    """
    dimension: int

    @abstractmethod
    def value(self, x: np.ndarray) -> float:
        ...

    @abstractmethod
    def prox(self, z: np.ndarray, theta: float) -> np.ndarray:
        ...

    @abstractmethod
    def manifold(self, x: np.ndarray) -> ManifoldInfo:
        ...

    def signature(self, x: np.ndarray) -> Hashable:
        return self.manifold(x).signature

    def prox_eval(self, z: np.ndarray, theta: float) -> ProxResult:
        """prox together with R and the activity signature of the output."""
        x = self.prox(z, theta)
        return ProxResult(x, self.value(x), self.signature(x))

    def riemannian_hessian_action(self, x: np.ndarray, h: np.ndarray) -> np.ndarray:
        # zero for every built-in penalty: R is locally constant along its manifold
        return np.zeros_like(np.asarray(h, dtype=np.float64))

    def describe(self) -> dict:
        return {'kind': type(self).__name__, 'dimension': self.dimension}


def check_theta(theta: float):
    from numerics.errors import InvalidParameterError
    if not theta > 0:
        raise InvalidParameterError(f'prox parameter must be positive, got {theta}')
