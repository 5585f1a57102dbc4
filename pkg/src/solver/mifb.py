import math
from collections import deque
from dataclasses import dataclass, field
from typing import FrozenSet, List, NamedTuple, Optional, Tuple
import numpy as np
from numerics.errors import DivergenceError, InvalidInputError, InvalidParameterError, MonitorFailure, ShapeError
from numerics.utils import log_progress, logger, timed
from problems.smooth import CompositeProblem
from solver.monitors import DESCENT, MONITORS, RESIDUAL, DescentMonitor, residual_bound, residual_slack, subgradient_residual
from solver.schedule import InertialSchedule
from solver.trace import IterationRecord, RunTrace

CONVERGED = 'converged'
MAX_ITER = 'max_iter'
STALLED = 'stalled'


@dataclass(frozen=True)
class SolveOptions:
    max_iter: int = 10000
    tol_delta: float = 1e-10
    monitors: FrozenSet[str] = frozenset()
    mu_nu: Optional[Tuple[float, float]] = None
    reference: Optional[np.ndarray] = field(default=None, repr=False)
    store_iterates: bool = False
    stall_patience: Optional[int] = None
    log_every: int = 0
    seed: Optional[int] = None
    tol_dist: Optional[float] = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise InvalidParameterError(f'max_iter must be at least 1, got {self.max_iter}')
        if not self.tol_delta > 0:
            raise InvalidParameterError(f'tol_delta must be positive, got {self.tol_delta}')
        if self.tol_dist is not None and (self.reference is None or not self.tol_dist > 0):
            raise InvalidParameterError(f'tol_dist needs a reference point and a positive value, got {self.tol_dist}')
        unknown = set(self.monitors) - MONITORS
        if unknown:
            raise InvalidParameterError(f'unknown monitors {sorted(unknown)}')
        object.__setattr__(self, 'monitors', frozenset(self.monitors))


def _check_start(problem: CompositeProblem, x0) -> np.ndarray:
    x0 = np.array(x0, dtype=np.float64).ravel()
    if x0.size != problem.dimension:
        raise ShapeError(f'x0 has {x0.size} entries, problem dimension is {problem.dimension}')
    if not np.all(np.isfinite(x0)):
        raise InvalidInputError('x0 has non-finite entries')
    return x0


def mifb_solve(problem: CompositeProblem, schedule: InertialSchedule, x0, opts: Optional[SolveOptions]=None) -> RunTrace:
    """Run the multi-step inertial forward-backward iteration.

    x_{k+1} = prox_{gamma_k R}(y_a - gamma_k grad F(y_b)) with
    y_a = x_k + sum_i a_i (x_{k-i} - x_{k-i-1}) and y_b built the same way from b.
    The history starts as s+1 copies of x0.
    """
    opts = opts or SolveOptions()
    L = problem.lipschitz_L
    schedule.validate(L)
    x = _check_start(problem, x0)
    x_start = x.copy()
    s = schedule.s
    smooth, penalty = (problem.smooth, problem.penalty)
    history = deque([x.copy() for _ in range(s + 1)], maxlen=s + 1)
    window = deque([0.0] * s, maxlen=s)
    phi = problem.objective(x)
    phi0 = phi
    descent = None
    if DESCENT in opts.monitors:
        mu, nu = opts.mu_nu if opts.mu_nu else (None, None)
        descent = DescentMonitor(schedule, L, mu, nu)
    records: List[IterationRecord] = []
    iterates: Optional[List[np.ndarray]] = [] if opts.store_iterates else None
    best_delta = math.inf
    since_best = 0
    termination = MAX_ITER

    def make_trace(reason: str, point: np.ndarray) -> RunTrace:
        return RunTrace(records=records, final_point=point.copy(), termination=reason, schedule=schedule.to_dict(), seed=opts.seed, phi0=phi0, lipschitz_L=L, x0=x_start, iterates=iterates)
    for k in range(opts.max_iter):
        gamma_k = schedule.step(k)
        a_k, b_k = schedule.coefficients(k, list(window))
        x_k = history[0]
        y_a = x_k.copy()
        y_b = x_k.copy()
        for i in range(s):
            d = history[i] - history[i + 1]
            y_a += a_k[i] * d
            y_b += b_k[i] * d
        grad_b = smooth.gradient(y_b)
        res = penalty.prox_eval(y_a - gamma_k * grad_b, gamma_k)
        x_next = res.point
        if not np.all(np.isfinite(x_next)):
            logger.error(f"Schedule '{schedule.name}' diverged at k={k + 1}")
            raise DivergenceError(f'non-finite iterate at k={k + 1}', trace=make_trace('diverged', x_k))
        delta_next = float(np.linalg.norm(x_next - x_k))
        phi_next = smooth.value(x_next) + res.value
        resid = math.nan
        slacks = {}
        if RESIDUAL in opts.monitors:
            resid = float(np.linalg.norm(subgradient_residual(problem, gamma_k, y_a, y_b, x_next, grad_b)))
            slacks[RESIDUAL] = residual_slack(resid, residual_bound(gamma_k, L, a_k, b_k, delta_next, list(window)))
        if descent is not None:
            slacks[DESCENT] = descent.slack(phi_next, phi, delta_next, list(window))
        dist = float(np.linalg.norm(x_next - opts.reference)) if opts.reference is not None else math.nan
        records.append(IterationRecord(k=k + 1, phi=phi_next, delta=delta_next, resid=resid, signature=res.signature, dist=dist, slacks=slacks))
        if iterates is not None:
            iterates.append(x_next.copy())
        if slacks.get(RESIDUAL, 0.0) > 0.0:
            raise MonitorFailure(f'subgradient bound violated at k={k + 1}', monitor=RESIDUAL, k=k + 1, slack=slacks[RESIDUAL], trace=make_trace('monitor_failure', x_next))
        if descent is not None and slacks[DESCENT] > descent.tolerance(phi):
            raise MonitorFailure(f'descent inequality violated at k={k + 1} (slack {slacks[DESCENT]:.3e})', monitor=DESCENT, k=k + 1, slack=slacks[DESCENT], trace=make_trace('monitor_failure', x_next))
        history.appendleft(x_next)
        window.appendleft(delta_next)
        phi = phi_next
        if opts.log_every and (k + 1) % opts.log_every == 0:
            log_progress(k + 1, opts.max_iter, prefix=f"{schedule.name or 'MiFB'} iterations (Phi={phi:.6e}, Delta={delta_next:.2e})")
        if delta_next <= opts.tol_delta:
            termination = CONVERGED
            break
        if opts.tol_dist is not None and dist <= opts.tol_dist:
            termination = CONVERGED
            break
        if opts.stall_patience is not None:
            if delta_next < best_delta:
                best_delta, since_best = (delta_next, 0)
            else:
                since_best += 1
                if since_best >= opts.stall_patience:
                    termination = STALLED
                    break
    logger.debug(f"Schedule '{schedule.name}' stopped after {len(records)} iterations ({termination})")
    return make_trace(termination, history[0])


class ReferenceSolution(NamedTuple):
    point: np.ndarray
    residual_norm: float
    iterations: int
    termination: str
    trace: RunTrace


@timed('reference solution')
def reference_solution(problem: CompositeProblem, schedule: InertialSchedule, x0, max_iter: int=100000, tol_delta: float=1e-14, stall_patience: int=200) -> ReferenceSolution:
    """Run to the floating-point floor and certify criticality by the final residual."""
    opts = SolveOptions(max_iter=max_iter, tol_delta=tol_delta, monitors=frozenset({RESIDUAL}), stall_patience=stall_patience, store_iterates=True)
    trace = mifb_solve(problem, schedule, x0, opts)
    resid = trace.records[-1].resid if trace.records else 0.0
    logger.info(f"Reference point from '{schedule.name}': {trace.iterations} iterations ({trace.termination}), ||g|| = {resid:.3e}")
    return ReferenceSolution(trace.final_point, resid, trace.iterations, trace.termination, trace)
