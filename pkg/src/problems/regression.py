from typing import Optional
import numpy as np
from numerics.errors import InvalidParameterError, InvalidSparsityError, ShapeError
from numerics.rng import RngState, gaussian_matrix, gaussian_vector
from numerics.utils import logger
from penalties.l0 import L0Penalty
from problems.smooth import CompositeProblem, SmoothLoss, lipschitz_constant

DEFAULT_MU = 1.0
DEFAULT_NOISE_STD = 0.01


class LeastSquaresLoss(SmoothLoss):
    """F(x) = 0.5 * ||y - A x||^2."""

    def __init__(self, A, y):
        self.A = np.asarray(A, dtype=np.float64)
        self.y = np.asarray(y, dtype=np.float64)
        if self.A.ndim != 2 or self.y.shape != (self.A.shape[0],):
            raise ShapeError(f'incompatible design {self.A.shape} and observations {self.y.shape}')
        self.dimension = self.A.shape[1]
        self.lipschitz_L = lipschitz_constant(self)

    def value(self, x) -> float:
        r = self.A @ x - self.y
        return 0.5 * float(r @ r)

    def gradient(self, x) -> np.ndarray:
        return self.A.T @ (self.A @ x - self.y)

    def hessian_action(self, x, h) -> np.ndarray:
        return self.A.T @ (self.A @ h)

    def gram_action(self, v) -> np.ndarray:
        return self.A.T @ (self.A @ v)

    def to_dict(self):
        return {'kind': 'least_squares', 'A': self.A.tolist(), 'y': self.y.tolist()}


def sparse_amplitudes(rng: RngState, k: int) -> np.ndarray:
    # sign * (1 + |N(0,1)|) keeps nonzeros away from zero
    return rng.signs(k) * (1.0 + np.abs(gaussian_vector(rng, k))) if k > 0 else np.zeros(0)


def make_sparse_regression(seed: int=0, m: int=48, n: int=128, k: int=8, noise_std: float=DEFAULT_NOISE_STD, mu: float=DEFAULT_MU, design: Optional[np.ndarray]=None) -> CompositeProblem:
    """Sparse regression 0.5*||y - Ax||^2 + mu*||x||_0 with Gaussian A.

    ``design`` replaces the random A (then m, n follow its shape).
    """
    if design is not None:
        design = np.asarray(design, dtype=np.float64)
        m, n = design.shape
    if m < 1 or n < 1:
        raise InvalidParameterError(f'm and n must be positive, got m={m}, n={n}')
    if k > n or k < 0:
        raise InvalidSparsityError(f'sparsity k={k} must lie in [0, n={n}]')
    rng = RngState(seed)
    A = design if design is not None else gaussian_matrix(rng, m, n)
    x_ob = np.zeros(n)
    S = rng.sample_without_replacement(n, k)
    x_ob[S] = sparse_amplitudes(rng, k)
    noise = noise_std * gaussian_vector(rng, m) if noise_std > 0 else np.zeros(m)
    y = A @ x_ob + noise
    loss = LeastSquaresLoss(A, y)
    logger.info(f'Sparse regression instance: m={m}, n={n}, k={k}, seed={seed}, L={loss.lipschitz_L:.6g}')
    metadata = {'kind': 'sparse_regression', 'seed': seed, 'm': m, 'n': n, 'k': k, 'noise_std': noise_std, 'mu': mu}
    return CompositeProblem(smooth=loss, penalty=L0Penalty(n, mu), dimension=n, metadata=metadata, ground_truth={'x_ob': x_ob, 'noise': noise})
