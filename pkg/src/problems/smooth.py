from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional
import numpy as np
from numerics.errors import CapabilityError, ShapeError
from numerics.linalg import largest_eigenvalue_sym
from penalties.base import Penalty

LIPSCHITZ_RTOL = 1e-08


class SmoothLoss(ABC):
    """Differentiable term F with L-Lipschitz gradient on flat vectors."""
    dimension: int
    lipschitz_L: float

    @abstractmethod
    def value(self, x: np.ndarray) -> float:
        ...

    @abstractmethod
    def gradient(self, x: np.ndarray) -> np.ndarray:
        ...

    def hessian_action(self, x: np.ndarray, h: np.ndarray) -> np.ndarray:
        raise CapabilityError(f'{type(self).__name__} does not provide a Hessian action')

    def closed_form_lipschitz(self) -> Optional[float]:
        return None

    def gram_action(self, v: np.ndarray) -> np.ndarray:
        """Action of the PSD operator whose top eigenvalue bounds the gradient's Lipschitz constant."""
        raise CapabilityError(f'{type(self).__name__} has no quadratic-form Hessian bound')

    gram_scale: float = 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': type(self).__name__}


def lipschitz_constant(loss: SmoothLoss, tol: float=LIPSCHITZ_RTOL) -> float:
    """Closed form when the loss knows it, else power iteration on the Gram operator."""
    closed = loss.closed_form_lipschitz()
    if closed is not None:
        return float(closed)
    return loss.gram_scale * largest_eigenvalue_sym(loss.gram_action, loss.dimension, tol=tol)


@dataclass(frozen=True)
class CompositeProblem:
    smooth: SmoothLoss
    penalty: Penalty
    dimension: int
    metadata: Dict[str, Any] = field(default_factory=dict)
    ground_truth: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.smooth.dimension != self.dimension or self.penalty.dimension != self.dimension:
            raise ShapeError(f'smooth ({self.smooth.dimension}) and penalty ({self.penalty.dimension}) must act on dimension {self.dimension}')

    @property
    def lipschitz_L(self) -> float:
        return self.smooth.lipschitz_L

    def objective(self, x: np.ndarray) -> float:
        return self.smooth.value(x) + self.penalty.value(x)

    def describe(self) -> Dict[str, Any]:
        return dict(self.metadata, dimension=self.dimension, lipschitz_L=self.lipschitz_L, penalty=self.penalty.describe())
