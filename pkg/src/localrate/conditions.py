import math
from typing import Optional, Tuple
import numpy as np
from numerics.errors import DomainError, SymmetryError
from penalties.base import ManifoldInfo
from problems.smooth import CompositeProblem
from localrate.reduced import reduced_hessian

RI_TOL = 1e-10
PSD_TOL = 1e-10
SYMMETRY_TOL = 1e-08


def tau_and_RI(problem: CompositeProblem, x_star, manifold: Optional[ManifoldInfo]=None) -> Tuple[float, bool]:
    """Smallest eigenvalue of the Hessian of F restricted to the tangent space, and tau > 0."""
    x_star = np.asarray(x_star, dtype=np.float64)
    basis = (manifold or problem.penalty.manifold(x_star)).tangent_basis
    if basis.shape[1] == 0:
        return (math.inf, True)
    tau = float(np.linalg.eigvalsh(reduced_hessian(problem, x_star, basis))[0])
    return (tau, tau > RI_TOL)


def tau_from_reduced(hessian: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hessian)[0]) if hessian.size else math.inf


def optimal_rate_formulas(tau: float, gamma: float) -> Tuple[float, float]:
    """Best local rates reachable with one and two inertial steps: 1 - (1 - tau*gamma)^(1/2), 1 - (1 - tau*gamma)^(1/3)."""
    tg = tau * gamma
    if not 0 < tg < 1:
        raise DomainError(f'tau*gamma must lie in ]0, 1[, got {tg}')
    return (1.0 - math.sqrt(1.0 - tg), 1.0 - (1.0 - tg) ** (1.0 / 3.0))


def check_Q_psd(Q_red) -> bool:
    Q = np.asarray(Q_red, dtype=np.float64)
    if Q.size == 0:
        return True
    asym = float(np.max(np.abs(Q - Q.T)))
    if asym > SYMMETRY_TOL:
        raise SymmetryError(f'Q is not symmetric (max asymmetry {asym:.3e})')
    return bool(np.linalg.eigvalsh(0.5 * (Q + Q.T))[0] >= -PSD_TOL)
