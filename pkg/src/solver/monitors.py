"""Runtime checks of the subgradient bound and the per-step descent inequality."""
from typing import List, Optional, Sequence
import numpy as np
from numerics.errors import InvalidParameterError, MonitorFailure
from numerics.utils import logger
from params.feasibility import delta as feasibility_delta
from params.feasibility import stationary_mu_nu
from problems.smooth import CompositeProblem

DESCENT = 'descent'
RESIDUAL = 'residual'
MONITORS = frozenset({DESCENT, RESIDUAL})
DESCENT_RTOL = 1e-10
RESIDUAL_RTOL = 1e-09
RESIDUAL_ATOL = 1e-12


def subgradient_residual(problem: CompositeProblem, gamma_k: float, y_a: np.ndarray, y_b: np.ndarray, x_next: np.ndarray, grad_y_b: Optional[np.ndarray]=None) -> np.ndarray:
    """Element of the limiting subdifferential of Phi at x_next produced by one step."""
    if grad_y_b is None:
        grad_y_b = problem.smooth.gradient(y_b)
    return (y_a - x_next) / gamma_k - grad_y_b + problem.smooth.gradient(x_next)


def residual_bound(gamma_k: float, L: float, a_k: Sequence[float], b_k: Sequence[float], delta_next: float, window: Sequence[float]) -> float:
    """(1/gamma + L) Delta_{k+1} + sum_i (|a_i|/gamma + L|b_i|) Delta_{k-i}.

    ``window[i]`` is Delta_{k-i}.
    """
    a_k = np.abs(np.asarray(a_k, dtype=np.float64))
    b_k = np.abs(np.asarray(b_k, dtype=np.float64))
    w = np.asarray(window, dtype=np.float64)
    return float((1.0 / gamma_k + L) * delta_next + np.sum((a_k / gamma_k + L * b_k) * w))


def residual_slack(resid: float, bound: float) -> float:
    """Non-positive when the bound holds up to rounding."""
    return resid - bound * (1.0 + RESIDUAL_RTOL) - RESIDUAL_ATOL


class DescentMonitor:
    """Evaluates Phi_{k+1} + beta Delta_{k+1}^2 - Phi_k - sum_i alpha_i Delta_{k-i}^2."""

    def __init__(self, schedule, L: float, mu: Optional[float]=None, nu: Optional[float]=None):
        if mu is None or nu is None:
            mu, nu = stationary_mu_nu(schedule.a, schedule.b, L, schedule.s)
        self.report = feasibility_delta(schedule.gamma, schedule.a, schedule.b, mu, nu, L, schedule.s, gamma_min=schedule.gamma_min)
        self.beta = self.report.beta
        self.alpha = np.asarray(self.report.alpha)

    def slack(self, phi_next: float, phi_k: float, delta_next: float, window: Sequence[float]) -> float:
        w = np.asarray(window, dtype=np.float64)
        return phi_next + self.beta * delta_next ** 2 - phi_k - float(np.sum(self.alpha * w ** 2))

    @staticmethod
    def tolerance(phi_k: float) -> float:
        return DESCENT_RTOL * max(1.0, abs(phi_k))


def descent_check(trace, mu: float, nu: float, schedule, raise_on_failure: bool=True) -> List[float]:
    """Signed descent slacks for every record of ``trace``.

    Raises MonitorFailure at the first slack above tolerance unless
    ``raise_on_failure`` is False.
    """
    if not mu > 0 or not nu > 0:
        raise InvalidParameterError(f'mu and nu must be positive, got mu={mu}, nu={nu}')
    monitor = DescentMonitor(schedule, trace.lipschitz_L, mu, nu)
    s = schedule.s
    deltas = {r.k: r.delta for r in trace.records}
    phis = {r.k: r.phi for r in trace.records}
    phis[0] = trace.phi0
    slacks = []
    for rec in trace.records:
        k = rec.k
        window = [deltas.get(k - 1 - i, 0.0) for i in range(s)]
        sl = monitor.slack(rec.phi, phis[k - 1], rec.delta, window)
        slacks.append(sl)
        if sl > monitor.tolerance(phis[k - 1]):
            logger.error(f'Descent inequality fails at k={k}: slack {sl:.3e}')
            if raise_on_failure:
                raise MonitorFailure(f'descent inequality violated at k={k} (slack {sl:.3e})', monitor=DESCENT, k=k, slack=sl, trace=trace)
    return slacks
