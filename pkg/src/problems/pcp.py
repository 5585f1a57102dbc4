import numpy as np
from numerics.errors import InvalidParameterError, ShapeError
from numerics.rng import RngState, gaussian_matrix, gaussian_vector
from numerics.utils import logger
from penalties.l0 import L0Penalty
from penalties.product import ProductPenalty
from penalties.rank import RankPenalty
from problems.regression import sparse_amplitudes
from problems.smooth import CompositeProblem, SmoothLoss

DEFAULT_MU1 = 0.5
DEFAULT_MU2 = 200.0
DEFAULT_NOISE_STD = 0.01


class PCPLoss(SmoothLoss):
    """F(x_s, x_l) = 0.5 * ||y - x_s - x_l||_F^2 on the stacked vector (vec x_s, vec x_l)."""

    def __init__(self, y):
        self.y = np.asarray(y, dtype=np.float64)
        if self.y.ndim != 2:
            raise ShapeError(f'observation must be a matrix, got shape {self.y.shape}')
        self.shape = self.y.shape
        self.block = self.y.size
        self.dimension = 2 * self.block
        self.lipschitz_L = 2.0

    def split(self, x):
        x = np.asarray(x, dtype=np.float64)
        return (x[:self.block], x[self.block:])

    def residual(self, x) -> np.ndarray:
        xs, xl = self.split(x)
        return self.y.ravel() - xs - xl

    def value(self, x) -> float:
        r = self.residual(x)
        return 0.5 * float(r @ r)

    def gradient(self, x) -> np.ndarray:
        r = self.residual(x)
        return np.concatenate([-r, -r])

    def hessian_action(self, x, h) -> np.ndarray:
        hs, hl = self.split(h)
        return np.concatenate([hs + hl, hs + hl])

    def closed_form_lipschitz(self) -> float:
        # [[I, I], [I, I]] has spectrum {0, 2}
        return 2.0

    def gram_action(self, v) -> np.ndarray:
        return self.hessian_action(None, v)

    def to_dict(self):
        return {'kind': 'pcp', 'y': self.y.tolist()}


def pcp_penalty(shape, mu1: float, mu2: float) -> ProductPenalty:
    block = shape[0] * shape[1]
    return ProductPenalty([(L0Penalty(block, mu1), slice(0, block)), (RankPenalty(shape, mu2), slice(block, 2 * block))])


def make_pcp(seed: int=0, n1: int=50, n2: int=50, sparsity: int=250, rank: int=5, noise_std: float=DEFAULT_NOISE_STD, mu1: float=DEFAULT_MU1, mu2: float=DEFAULT_MU2) -> CompositeProblem:
    """Sparse plus low-rank decomposition with l0 and rank penalties."""
    if n1 < 1 or n2 < 1:
        raise InvalidParameterError(f'matrix dimensions must be positive, got {n1}x{n2}')
    if rank < 0 or rank > min(n1, n2):
        raise InvalidParameterError(f'rank={rank} must lie in [0, {min(n1, n2)}]')
    if sparsity < 0 or sparsity > n1 * n2:
        raise InvalidParameterError(f'sparsity={sparsity} must lie in [0, {n1 * n2}]')
    rng = RngState(seed)
    x_s = np.zeros(n1 * n2)
    idx = rng.sample_without_replacement(n1 * n2, sparsity)
    x_s[idx] = sparse_amplitudes(rng, sparsity)
    x_s = x_s.reshape(n1, n2)
    if rank > 0:
        P = gaussian_matrix(rng, n1, rank)
        Q = gaussian_matrix(rng, n2, rank)
        x_l = P @ Q.T
    else:
        x_l = np.zeros((n1, n2))
    noise = noise_std * gaussian_vector(rng, n1 * n2).reshape(n1, n2) if noise_std > 0 else np.zeros((n1, n2))
    y = x_s + x_l + noise
    loss = PCPLoss(y)
    logger.info(f'PCP instance: {n1}x{n2}, sparsity={sparsity}, rank={rank}, seed={seed}')
    metadata = {'kind': 'pcp', 'seed': seed, 'n1': n1, 'n2': n2, 'sparsity': sparsity, 'rank': rank, 'noise_std': noise_std, 'mu1': mu1, 'mu2': mu2}
    return CompositeProblem(smooth=loss, penalty=pcp_penalty((n1, n2), mu1, mu2), dimension=loss.dimension, metadata=metadata, ground_truth={'x_s': x_s, 'x_l': x_l, 'noise': noise})
