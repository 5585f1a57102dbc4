import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple
import numpy as np
from numerics.errors import DomainError, InsufficientDataError
from numerics.utils import logger, timed
from problems.smooth import CompositeProblem
from problems.svm import SVMLoss
from solver.schedule import InertialSchedule
from solver.trace import RunTrace
from localrate.conditions import check_Q_psd, optimal_rate_formulas, tau_from_reduced, RI_TOL
from localrate.fitting import fit_observed_rate
from localrate.identification import detect_identification
from localrate.reduced import ReducedSystem, build_reduced_matrices, companion_matrix, companion_spectral_radius
from localrate.tuning import DEFAULT_GRID, optimize_inertia

DENSE_LIMIT = 1200
KINK_TOL = 1e-06


@dataclass
class RateReport:
    schedule: str
    K: Optional[int]
    t: int
    rho_M: float
    tau: float
    RI_ok: bool
    Q_psd_ok: bool
    rho_star_s1: float
    rho_star_s2: float
    observed_rate: Optional[float] = None
    fit_window: Optional[Tuple[int, int]] = None
    optimized_a: Optional[List[float]] = None
    optimized_rho: Optional[float] = None
    advisory: bool = False
    notes: List[str] = field(default_factory=list)
    system: Optional[ReducedSystem] = field(default=None, repr=False)
    M_comp: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def relative_error(self) -> float:
        if self.observed_rate is None or self.rho_M == 0:
            return math.nan
        return abs(self.observed_rate - self.rho_M) / self.rho_M

    def to_dict(self) -> Dict[str, Any]:
        return {'schedule': self.schedule, 'K': self.K, 't': self.t, 'rho_M': self.rho_M, 'rho_obs': self.observed_rate, 'relative_error': self.relative_error, 'fit_window': list(self.fit_window) if self.fit_window else None, 'tau': self.tau, 'RI_ok': self.RI_ok, 'Q_psd_ok': self.Q_psd_ok, 'rho_star_s1': self.rho_star_s1, 'rho_star_s2': self.rho_star_s2, 'optimized_a': self.optimized_a, 'optimized_rho': self.optimized_rho, 'advisory': self.advisory, 'notes': '; '.join(self.notes)}


@timed('rate analysis')
def analyze_rates(problem: CompositeProblem, trace: RunTrace, x_star, schedule: InertialSchedule, grid=DEFAULT_GRID, optimize_depth: Optional[int]=None) -> RateReport:
    """Identification, reduced system, predicted and observed rates for one run.

    Raises InsufficientDataError carrying the partial report when the trace
    is too short after identification to fit a rate.
    """
    x_star = np.asarray(x_star, dtype=np.float64)
    notes = []
    sig = problem.penalty.signature(x_star)
    K = detect_identification(trace, sig)
    system = build_reduced_matrices(problem, x_star, schedule.gamma)
    a, b = (np.asarray(schedule.a), np.asarray(schedule.b))
    M = None
    if (schedule.s + 1) * system.t <= DENSE_LIMIT:
        M = companion_matrix(system, a, b)
        rho = float(np.max(np.abs(np.linalg.eigvals(M)))) if M.size else 0.0
    else:
        rho = companion_spectral_radius(system, a, b)
    tau = tau_from_reduced(system.hessian)
    try:
        r1, r2 = optimal_rate_formulas(tau, schedule.gamma)
    except DomainError:
        r1, r2 = (math.nan, math.nan)
        notes.append('tau*gamma outside ]0,1[')
    advisory = False
    if isinstance(problem.smooth, SVMLoss) and problem.smooth.near_kink(x_star, KINK_TOL):
        advisory = True
        notes.append('margins near the squared-hinge kink; prediction is advisory')
        logger.warning(f"Schedule '{schedule.name}': x* has margins within {KINK_TOL} of the kink")
    report = RateReport(schedule=schedule.name, K=K, t=system.t, rho_M=rho, tau=tau, RI_ok=tau > RI_TOL, Q_psd_ok=check_Q_psd(system.Q), rho_star_s1=r1, rho_star_s2=r2, advisory=advisory, notes=notes, system=system, M_comp=M)
    if optimize_depth:
        choice = optimize_inertia(system.hessian, optimize_depth, schedule.gamma, grid, system.Q)
        report.optimized_a = choice.a.tolist()
        report.optimized_rho = choice.rho
    if K is None:
        report.notes.append('no identification within the run')
        raise InsufficientDataError(f"Schedule '{schedule.name}' never settled on the manifold of x*", partial=report)
    try:
        fit = fit_observed_rate(trace, x_star, K)
    except InsufficientDataError as e:
        report.notes.append(str(e))
        raise InsufficientDataError(str(e), partial=report)
    report.observed_rate = fit.rate
    report.fit_window = fit.window
    logger.info(f"Schedule '{schedule.name}': K={K}, rho(M)={rho:.6f}, observed={fit.rate:.6f}")
    return report
