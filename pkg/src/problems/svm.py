import numpy as np
from scipy.special import expit
from numerics.errors import InvalidParameterError, ShapeError
from numerics.rng import RngState, gaussian_matrix, gaussian_vector
from numerics.utils import logger
from penalties.l0 import L0Penalty
from penalties.product import ProductPenalty
from problems.smooth import CompositeProblem, SmoothLoss, lipschitz_constant

LOSS_KINDS = ('squared_hinge', 'logistic')
DEFAULT_MU = 0.05
KINK_TOL = 1e-06


class SVMLoss(SmoothLoss):
    """F(b, x) = (1/m) sum_i G(<x, z_i> + b, y_i); the variable is (b, x) with b first."""

    def __init__(self, features, labels, loss_kind: str='squared_hinge'):
        if loss_kind not in LOSS_KINDS:
            raise InvalidParameterError(f'unknown loss_kind {loss_kind!r}, expected one of {LOSS_KINDS}')
        Z = np.asarray(features, dtype=np.float64)
        self.labels = np.asarray(labels, dtype=np.float64)
        if Z.ndim != 2 or self.labels.shape != (Z.shape[0],):
            raise ShapeError(f'incompatible features {Z.shape} and labels {self.labels.shape}')
        self.features = Z
        self.loss_kind = loss_kind
        self.m = Z.shape[0]
        # augmented rows (1, z_i) so that scores = Zt @ (b, x)
        self.Zt = np.hstack([np.ones((self.m, 1)), Z])
        self.dimension = Z.shape[1] + 1
        self.gram_scale = 2.0 / self.m if loss_kind == 'squared_hinge' else 0.25 / self.m
        self.lipschitz_L = lipschitz_constant(self)

    def margins(self, w) -> np.ndarray:
        return self.labels * (self.Zt @ w)

    def value(self, w) -> float:
        t = self.margins(w)
        if self.loss_kind == 'squared_hinge':
            return float(np.mean(np.maximum(0.0, 1.0 - t) ** 2))
        return float(np.mean(np.logaddexp(0.0, -t)))

    def _dloss(self, t) -> np.ndarray:
        if self.loss_kind == 'squared_hinge':
            return -2.0 * np.maximum(0.0, 1.0 - t)
        return -expit(-t)

    def gradient(self, w) -> np.ndarray:
        t = self.margins(w)
        return self.Zt.T @ (self.labels * self._dloss(t)) / self.m

    def hessian_action(self, w, h) -> np.ndarray:
        """Hessian action; for the squared hinge this is the almost-everywhere Hessian."""
        t = self.margins(w)
        if self.loss_kind == 'squared_hinge':
            curv = 2.0 * (t < 1.0)
        else:
            curv = expit(t) * expit(-t)
        return self.Zt.T @ (curv * (self.Zt @ h)) / self.m

    def gram_action(self, v) -> np.ndarray:
        return self.Zt.T @ (self.Zt @ v)

    def near_kink(self, w, tol: float=KINK_TOL) -> bool:
        """True when some margin sits within ``tol`` of the squared-hinge kink."""
        if self.loss_kind != 'squared_hinge':
            return False
        return bool(np.any(np.abs(self.margins(w) - 1.0) <= tol))

    def to_dict(self):
        return {'kind': 'svm', 'features': self.features.tolist(), 'labels': self.labels.tolist(), 'loss_kind': self.loss_kind}


def svm_penalty(n: int, mu: float) -> ProductPenalty:
    return ProductPenalty([(L0Penalty(n, mu), slice(1, n + 1))], free_slices=[slice(0, 1)])


def make_sparse_svm(seed: int=0, m: int=64, n: int=96, loss_kind: str='squared_hinge', mu: float=DEFAULT_MU) -> CompositeProblem:
    """Sparse linear classifier with unpenalized intercept b."""
    if m < 1 or n < 1:
        raise InvalidParameterError(f'm and n must be positive, got m={m}, n={n}')
    if loss_kind not in LOSS_KINDS:
        raise InvalidParameterError(f'unknown loss_kind {loss_kind!r}, expected one of {LOSS_KINDS}')
    rng = RngState(seed)
    Z = gaussian_matrix(rng, m, n)
    w_bar = gaussian_vector(rng, n)
    b_bar = float(gaussian_vector(rng, 1)[0])
    labels = np.where(Z @ w_bar + b_bar >= 0.0, 1.0, -1.0)
    loss = SVMLoss(Z, labels, loss_kind)
    logger.info(f'Sparse SVM instance: m={m}, n={n}, loss={loss_kind}, seed={seed}, L={loss.lipschitz_L:.6g}')
    metadata = {'kind': 'sparse_svm', 'seed': seed, 'm': m, 'n': n, 'loss_kind': loss_kind, 'mu': mu}
    return CompositeProblem(smooth=loss, penalty=svm_penalty(n, mu), dimension=n + 1, metadata=metadata, ground_truth={'w_bar': w_bar, 'b_bar': np.array([b_bar])})
