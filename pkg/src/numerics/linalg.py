from typing import Callable, Tuple
import numpy as np
import scipy.linalg
from numerics.errors import ConvergenceError, InvalidInputError, InvalidParameterError, ShapeError
from numerics.rng import RngState, gaussian_vector
from numerics.utils import logger


def _as_finite_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ShapeError(f'expected a 2-D array, got shape {A.shape}')
    if not np.all(np.isfinite(A)):
        raise InvalidInputError('matrix has non-finite entries')
    return A


def svd(A, full_matrices: bool=False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (U, sigma, V) with A = U diag(sigma) V^T.

    Small singular values are returned as computed; rank decisions are left to
    the caller.
    """
    A = _as_finite_matrix(A)
    U, sigma, Vh = scipy.linalg.svd(A, full_matrices=full_matrices, lapack_driver='gesdd')
    return (U, sigma, Vh.T)


def eigenvalues(M) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f'eigenvalues need a square matrix, got shape {M.shape}')
    if M.size == 0:
        return np.zeros(0, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise InvalidInputError('matrix has non-finite entries')
    return scipy.linalg.eigvals(M)


def spectral_radius(M) -> float:
    lam = eigenvalues(M)
    return float(np.max(np.abs(lam))) if lam.size else 0.0


def largest_eigenvalue_sym(apply: Callable[[np.ndarray], np.ndarray], n: int, tol: float=1e-08, max_iter: int=20000, seed: int=0) -> float:
    """Power iteration for lambda_max of a symmetric positive semi-definite operator.

    Stops once the Rayleigh quotient moves by less than ``tol / 100`` relative,
    which leaves the remaining error well inside ``tol`` unless the top two
    eigenvalues nearly coincide.
    """
    if tol <= 0:
        raise InvalidParameterError(f'tol must be positive, got {tol}')
    if n < 1:
        raise InvalidParameterError(f'operator dimension must be positive, got {n}')
    x = gaussian_vector(RngState(seed), n)
    x /= np.linalg.norm(x)
    lam = 0.0
    for it in range(max_iter):
        y = np.asarray(apply(x), dtype=np.float64)
        y_norm = float(np.linalg.norm(y))
        if y_norm == 0.0:
            return 0.0
        lam_new = float(x @ y)
        x = y / y_norm
        if abs(lam_new - lam) <= 0.01 * tol * abs(lam_new):
            logger.debug(f'power iteration converged in {it + 1} steps: {lam_new:.12g}')
            return lam_new
        lam = lam_new
    raise ConvergenceError(f'power iteration did not converge in {max_iter} steps', best_estimate=lam)


def orthonormality_defect(B: np.ndarray) -> float:
    if B.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(B.T @ B - np.eye(B.shape[1]))))
