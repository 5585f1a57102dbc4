import numpy as np
from penalties.base import ManifoldInfo, Penalty


class ZeroPenalty(Penalty):
    """R = 0: prox is the identity and the active manifold is the whole space."""

    def __init__(self, dimension: int):
        self.dimension = int(dimension)
        self.weight = 0.0

    def value(self, x) -> float:
        return 0.0

    def prox(self, z, theta: float) -> np.ndarray:
        return np.array(z, dtype=np.float64)

    def signature(self, x):
        return ()

    def manifold(self, x) -> ManifoldInfo:
        return ManifoldInfo(signature=(), tangent_basis=np.eye(self.dimension), project=lambda v: np.array(v, dtype=np.float64))

    def describe(self) -> dict:
        return {'kind': 'zero', 'dimension': self.dimension}
