import math
from typing import List, Optional, Sequence, Tuple
import numpy as np
from pydantic import BaseModel, Field
from numerics.errors import InvalidParameterError

MU_NU_FLOOR = 1e-09


class FeasibilityReport(BaseModel):
    """Constants of the global descent condition for one schedule."""
    mu: float = Field(..., gt=0)
    nu: float = Field(..., gt=0)
    beta: float = Field(..., description='lower limit of beta_k, evaluated at the largest step')
    alpha: List[float] = Field(..., description='upper limits of alpha_{k,i}, 1/gamma terms at the smallest step')
    delta: float
    feasible: bool
    geometry: str = Field(..., description="'ellipsoid' (s=1), 'ball' (a=b) or 'general'")
    gamma_max: float
    gamma_min: float
    lipschitz_L: float
    s: int


def _coeffs(v: Sequence[float], s: int, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).ravel()
    if arr.size != s:
        raise InvalidParameterError(f'{name} must have s={s} entries, got {arr.size}')
    return arr


def _geometry(a: np.ndarray, b: np.ndarray) -> str:
    if a.size == 1:
        return 'ellipsoid'
    if np.array_equal(a, b):
        return 'ball'
    return 'general'


def beta_lower(gamma_max: float, mu: float, nu: float, L: float) -> float:
    return (1.0 - gamma_max * L - mu - nu * gamma_max) / (2.0 * gamma_max)


def alpha_upper(a: np.ndarray, b: np.ndarray, gamma_min: float, mu: float, nu: float, L: float, s: int) -> np.ndarray:
    return s * a ** 2 / (2.0 * gamma_min * mu) + s * b ** 2 * L ** 2 / (2.0 * nu)


def delta(gamma_max: float, a: Sequence[float], b: Sequence[float], mu: float, nu: float, L: float, s: int, gamma_min: Optional[float]=None) -> FeasibilityReport:
    """Evaluate beta, alpha_i and delta = beta - sum(alpha_i).

    For varying steps beta uses ``gamma_max`` and the 1/gamma part of alpha
    uses ``gamma_min``; constant schedules leave ``gamma_min`` unset.
    """
    if not mu > 0 or not nu > 0:
        raise InvalidParameterError(f'mu and nu must be positive, got mu={mu}, nu={nu}')
    if not L > 0:
        raise InvalidParameterError(f'Lipschitz constant must be positive, got {L}')
    if not 0 < gamma_max < 1.0 / L:
        raise InvalidParameterError(f'step {gamma_max} must lie in ]0, 1/L[ = ]0, {1.0 / L:.6g}[')
    gamma_min = gamma_max if gamma_min is None else gamma_min
    if not 0 < gamma_min <= gamma_max:
        raise InvalidParameterError(f'step bounds must satisfy 0 < gamma_min <= gamma_max, got {gamma_min}, {gamma_max}')
    a = _coeffs(a, s, 'a')
    b = _coeffs(b, s, 'b')
    beta = beta_lower(gamma_max, mu, nu, L)
    alpha = alpha_upper(a, b, gamma_min, mu, nu, L, s)
    d = beta - float(np.sum(alpha))
    return FeasibilityReport(mu=mu, nu=nu, beta=beta, alpha=alpha.tolist(), delta=d, feasible=d > 0, geometry=_geometry(a, b), gamma_max=gamma_max, gamma_min=gamma_min, lipschitz_L=L, s=s)


def stationary_mu_nu(a: Sequence[float], b: Sequence[float], L: float, s: int) -> Tuple[float, float]:
    """(mu, nu) maximizing delta: mu = sqrt(s*sum a^2), nu = L*sqrt(s*sum b^2).

    Each constant falls back to a small floor when its coefficients vanish.
    """
    a = _coeffs(a, s, 'a')
    b = _coeffs(b, s, 'b')
    mu = math.sqrt(s * float(a @ a))
    nu = L * math.sqrt(s * float(b @ b))
    return (max(mu, MU_NU_FLOOR) if mu > 0 else MU_NU_FLOOR, max(nu, MU_NU_FLOOR) if nu > 0 else MU_NU_FLOOR)


def optimal_report(gamma_max: float, a: Sequence[float], b: Sequence[float], L: float, gamma_min: Optional[float]=None) -> FeasibilityReport:
    s = len(a)
    mu, nu = stationary_mu_nu(a, b, L, s)
    return delta(gamma_max, a, b, mu, nu, L, s, gamma_min=gamma_min)


def check_descent_condition(gamma_max: float, a: Sequence[float], b: Sequence[float], L: float, gamma_min: Optional[float]=None) -> bool:
    """True when delta > 0 for the best (mu, nu)."""
    return optimal_report(gamma_max, a, b, L, gamma_min).feasible


def ellipsoid_check(a0: float, b0: float, gamma_max: float, mu: float, nu: float, L: float, gamma_min: Optional[float]=None) -> bool:
    gamma_min = gamma_max if gamma_min is None else gamma_min
    beta = beta_lower(gamma_max, mu, nu, L)
    return a0 ** 2 / (2.0 * gamma_min * mu) + b0 ** 2 / (2.0 * nu / L ** 2) < beta


def ball_check(a: Sequence[float], gamma_max: float, mu: float, nu: float, L: float, s: int, gamma_min: Optional[float]=None) -> bool:
    """Symmetric coefficients b = a must lie in a ball around the origin."""
    a = _coeffs(a, s, 'a')
    gamma_min = gamma_max if gamma_min is None else gamma_min
    beta = beta_lower(gamma_max, mu, nu, L)
    return (s / (2.0 * gamma_min * mu) + s * L ** 2 / (2.0 * nu)) * float(a @ a) < beta


def descent_boundary(s: int, gamma: float, L: float) -> float:
    """Largest equal |a_i| (with b = a) keeping delta > 0 under the stationary (mu, nu).

    With mu = nu/L = s|a| the condition reads s|a| (1/gamma + L) < (1 - gamma L)/(2 gamma).
    """
    gl = gamma * L
    return (1.0 - gl) / (2.0 * s * (1.0 + gl))
