import zlib
from typing import Tuple
import numpy as np
from numerics.errors import InvalidParameterError
from penalties.base import ManifoldInfo, Penalty, ProxResult, check_theta


def prox_l0(z, theta: float) -> np.ndarray:
    """Hard thresholding at sqrt(2*theta); ties go to zero."""
    check_theta(theta)
    z = np.asarray(z, dtype=np.float64)
    return np.where(np.abs(z) > np.sqrt(2.0 * theta), z, 0.0)


def l0_value(x) -> int:
    return int(np.count_nonzero(np.asarray(x)))


def support(x) -> Tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(np.asarray(x)))


def manifold_info_l0(x) -> ManifoldInfo:
    x = np.asarray(x, dtype=np.float64).ravel()
    idx = np.flatnonzero(x)
    basis = np.zeros((x.size, idx.size))
    basis[idx, np.arange(idx.size)] = 1.0
    mask = x != 0

    def project(v):
        return np.where(mask, np.asarray(v, dtype=np.float64), 0.0)
    return ManifoldInfo(signature=tuple(int(i) for i in idx), tangent_basis=basis, project=project)


def signature_label(sig: Tuple[int, ...]) -> str:
    """Compact, stable text form of a support for CSV columns."""
    return f'{len(sig)}#{zlib.crc32(repr(tuple(sig)).encode()):08x}'


class L0Penalty(Penalty):

    def __init__(self, dimension: int, weight: float):
        if dimension < 1:
            raise InvalidParameterError(f'dimension must be positive, got {dimension}')
        if not weight > 0:
            raise InvalidParameterError(f'weight must be positive, got {weight}')
        self.dimension = int(dimension)
        self.weight = float(weight)

    def value(self, x) -> float:
        return self.weight * l0_value(x)

    def prox(self, z, theta: float) -> np.ndarray:
        return prox_l0(z, theta * self.weight)

    def prox_eval(self, z, theta: float) -> ProxResult:
        x = self.prox(z, theta)
        sig = support(x)
        return ProxResult(x, self.weight * len(sig), sig)

    def signature(self, x):
        return support(x)

    def manifold(self, x) -> ManifoldInfo:
        return manifold_info_l0(x)

    def describe(self) -> dict:
        return {'kind': 'l0', 'dimension': self.dimension, 'weight': self.weight}
