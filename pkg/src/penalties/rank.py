from dataclasses import dataclass
from typing import Tuple, Union
import numpy as np
from numerics.errors import InvalidParameterError
from numerics.linalg import svd
from penalties.base import ManifoldInfo, Penalty, ProxResult, check_theta

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class TruncatedSVD:
    """Output of singular-value hard thresholding with its exact rank."""
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.sigma.size)

    @property
    def matrix(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.V.T


def hard_threshold_singular_values(Z, theta: float) -> TruncatedSVD:
    check_theta(theta)
    U, sigma, V = svd(Z)
    keep = sigma > np.sqrt(2.0 * theta)
    return TruncatedSVD(U[:, keep], sigma[keep], V[:, keep])


def prox_rank(Z, theta: float) -> np.ndarray:
    return hard_threshold_singular_values(Z, theta).matrix


def numeric_rank(X) -> int:
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        return 0
    sigma = svd(X)[1]
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    return int(np.count_nonzero(sigma > RANK_RTOL * sigma[0]))


def rank_value(X: Union[np.ndarray, TruncatedSVD]) -> int:
    """Rank; exact for thresholding outputs, numeric (1e-10 * sigma_max) otherwise."""
    if isinstance(X, TruncatedSVD):
        return X.rank
    return numeric_rank(X)


def manifold_info_rank(X) -> ManifoldInfo:
    X = np.asarray(X, dtype=np.float64)
    n1, n2 = X.shape
    U, sigma, V = svd(X, full_matrices=True)
    r = 0 if sigma.size == 0 or sigma[0] == 0.0 else int(np.count_nonzero(sigma > RANK_RTOL * sigma[0]))
    Ur, Vr = (U[:, :r], V[:, :r])
    # u_i v_j^T with i <= r or j <= r is an orthonormal basis of the tangent space
    pairs = [(i, j) for i in range(n1) for j in range(n2) if i < r or j < r]
    if pairs:
        rows = np.array([p[0] for p in pairs])
        cols = np.array([p[1] for p in pairs])
        basis = np.einsum('at,bt->abt', U[:, rows], V[:, cols]).reshape(n1 * n2, len(pairs))
    else:
        basis = np.zeros((n1 * n2, 0))

    def project(v):
        Z = np.asarray(v, dtype=np.float64).reshape(n1, n2)
        left = Ur @ (Ur.T @ Z)
        out = left + (Z @ Vr) @ Vr.T - (left @ Vr) @ Vr.T
        return out.ravel()
    return ManifoldInfo(signature=r, tangent_basis=basis, project=project)


class RankPenalty(Penalty):
    """weight * rank(X) on row-major flattened n1 x n2 matrices."""

    def __init__(self, shape: Tuple[int, int], weight: float):
        n1, n2 = shape
        if n1 < 1 or n2 < 1:
            raise InvalidParameterError(f'matrix shape must be positive, got {shape}')
        if not weight > 0:
            raise InvalidParameterError(f'weight must be positive, got {weight}')
        self.shape = (int(n1), int(n2))
        self.dimension = self.shape[0] * self.shape[1]
        self.weight = float(weight)

    def value(self, x) -> float:
        return self.weight * numeric_rank(np.asarray(x).reshape(self.shape))

    def prox(self, z, theta: float) -> np.ndarray:
        return prox_rank(np.asarray(z).reshape(self.shape), theta * self.weight).ravel()

    def prox_eval(self, z, theta: float) -> ProxResult:
        trunc = hard_threshold_singular_values(np.asarray(z).reshape(self.shape), theta * self.weight)
        return ProxResult(trunc.matrix.ravel(), self.weight * trunc.rank, trunc.rank)

    def signature(self, x):
        return numeric_rank(np.asarray(x).reshape(self.shape))

    def manifold(self, x) -> ManifoldInfo:
        return manifold_info_rank(np.asarray(x).reshape(self.shape))

    def describe(self) -> dict:
        return {'kind': 'rank', 'shape': list(self.shape), 'weight': self.weight}
