import os
import re
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple
import numpy as np
from tqdm import tqdm
from numerics.errors import ConfigError, InsufficientDataError, InvalidParameterError
from numerics.utils import banner, logger
from params.empirical import default_coefficients, empirical_bound
from params.feasibility import FeasibilityReport, optimal_report
from problems import make_pcp, make_sparse_regression, make_sparse_svm
from problems.smooth import CompositeProblem
from solver.mifb import SolveOptions, mifb_solve, reference_solution
from solver.schedule import InertialSchedule
from solver.trace import RunTrace
from localrate.identification import detect_identification
from localrate.report import RateReport, analyze_rates
from experiments.config import ExperimentConfig, ProblemConfig, ScheduleConfig
from experiments.outputs import write_json, write_table_csv, write_trace_csv
from experiments.viz import PlotSeries, render_plot

FACTORIES = {'sparse_regression': make_sparse_regression, 'pcp': make_pcp, 'sparse_svm': make_sparse_svm}
LIMIT_MISMATCH_TOL = 1e-06
LOG_EVERY = 1000
STALL_PATIENCE = 200
COMPARISON_COLUMNS = ['schedule', 's', 'rule', 'gamma', 'a', 'b', 'iterations', 'iters_to_tol', 'K', 'final_dist', 'same_limit', 'termination']
RATES_COLUMNS = ['schedule', 'K', 't', 'rho_M', 'rho_obs', 'relative_error', 'fit_window', 'tau', 'RI_ok', 'Q_psd_ok', 'rho_star_s1', 'rho_star_s2', 'optimized_a', 'optimized_rho', 'advisory', 'notes']


def build_problem(cfg: ProblemConfig, seed_override: Optional[int]=None) -> CompositeProblem:
    seed = cfg.seed if seed_override is None else seed_override
    try:
        return FACTORIES[cfg.kind](seed=seed, **cfg.params)
    except TypeError as e:
        raise ConfigError(f"bad parameters for problem '{cfg.kind}': {e}") from e
    except InvalidParameterError as e:
        raise ConfigError(f"invalid problem '{cfg.kind}': {e}") from e


def increasing_step(gamma_min: float, gamma_max: float) -> Callable[[int], float]:
    """gamma_k = gamma_max - (gamma_max - gamma_min)/(k + 1), rising from gamma_min towards gamma_max."""

    def step(k: int) -> float:
        return gamma_max - (gamma_max - gamma_min) / (k + 1)
    return step


def build_schedule(cfg: ScheduleConfig, L: float) -> Tuple[InertialSchedule, FeasibilityReport]:
    """Resolve fractions of 1/L, fill default coefficients and enforce the schedule's rule."""
    gamma = cfg.gamma / L
    gamma_min = cfg.gamma_min / L if cfg.gamma_min is not None else None
    try:
        a = list(cfg.a) if cfg.a is not None else default_coefficients(cfg.rule, cfg.s, gamma, L).tolist()
        b = list(cfg.b) if cfg.b is not None else list(a)
        schedule = InertialSchedule(a=tuple(a), b=tuple(b), gamma=gamma, gamma_min=gamma_min, gamma_sequence=increasing_step(gamma_min, gamma) if gamma_min is not None else None, online=(cfg.online_c, cfg.online_q) if cfg.uses_online_cap else None, name=cfg.name, rule=cfg.rule)
        report = optimal_report(gamma, a, b, L, gamma_min=gamma_min)
    except InvalidParameterError as e:
        raise ConfigError(f"schedule '{cfg.name}': {e}") from e
    if cfg.rule == 'descent' and not report.feasible:
        raise ConfigError(f"schedule '{cfg.name}' fails the descent condition: delta = {report.delta:.6e} <= 0 (beta = {report.beta:.6e}, sum alpha = {sum(report.alpha):.6e})")
    if cfg.rule == 'empirical' and any(a) and not empirical_bound(gamma, L).contains(sum(a)):
        logger.warning(f"Schedule '{cfg.name}': sum(a) = {sum(a):.4f} lies outside the empirical range {empirical_bound(gamma, L)}")
    return (schedule, report)


def _slug(name: str) -> str:
    return re.sub('[^A-Za-z0-9_.-]+', '_', name)


class ExperimentRunner:
    """Builds one problem and its schedules, then runs the run/compare/rates protocols."""

    def __init__(self, config: ExperimentConfig, output_dir: Optional[str]=None, plot: Optional[bool]=None, seed_override: Optional[int]=None, workers: int=1):
        self.config = config
        self.output_dir = output_dir or os.getenv('MIFB_OUTPUT_DIR') or config.output.directory
        self.plot = config.output.plot if plot is None else plot
        self.seed = config.problem.seed if seed_override is None else seed_override
        self.workers = max(1, int(workers))
        self.problem = build_problem(config.problem, seed_override)
        self.L = self.problem.lipschitz_L
        logger.info(f"Problem '{config.problem.kind}' (seed {self.seed}): dimension {self.problem.dimension}, L = {self.L:.6g}")
        self.schedules: List[InertialSchedule] = []
        self.reports: Dict[str, FeasibilityReport] = {}
        for sc in config.schedules:
            schedule, report = build_schedule(sc, self.L)
            self.schedules.append(schedule)
            self.reports[schedule.name] = report
            logger.info(f"Schedule '{schedule.name}': s={schedule.s}, a={[round(v, 6) for v in schedule.a]}, delta={report.delta:.4e} ({report.geometry})")
        self.x0 = np.zeros(self.problem.dimension)

    def _map(self, func: Callable[[InertialSchedule], object], desc: str) -> Dict[str, object]:
        """Apply ``func`` to every schedule, in parallel when workers > 1; results keep config order."""
        if self.workers == 1:
            results = [func(sch) for sch in tqdm(self.schedules, desc=desc, unit='schedule')]
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                futures = [pool.submit(func, sch) for sch in self.schedules]
                results = [f.result() for f in tqdm(futures, desc=desc, unit='schedule')]
        return {sch.name: res for sch, res in zip(self.schedules, results)}

    def reference_schedule(self) -> InertialSchedule:
        for sch in self.schedules:
            if sch.is_forward_backward:
                return sch
        return self.schedules[0]

    def shared_reference(self) -> np.ndarray:
        solver = self.config.solver
        ref = reference_solution(self.problem, self.reference_schedule(), self.x0, max_iter=solver.reference_max_iter, tol_delta=solver.reference_tol)
        return ref.point

    def _solve_against(self, x_star: np.ndarray, to_distance: bool=False) -> Dict[str, RunTrace]:
        """Solve every schedule with distances to ``x_star``.

        With ``to_distance`` a run stops once it is within ``distance_tol`` of
        ``x_star``; runs heading elsewhere go on to the reference tolerance.
        """
        solver = self.config.solver
        if to_distance:
            opts = SolveOptions(max_iter=solver.max_iter, tol_delta=solver.reference_tol, monitors=frozenset(solver.monitors), reference=x_star, stall_patience=STALL_PATIENCE, log_every=LOG_EVERY, seed=self.seed, tol_dist=solver.distance_tol)
        else:
            opts = SolveOptions(max_iter=solver.max_iter, tol_delta=solver.tol_delta, monitors=frozenset(solver.monitors), reference=x_star, seed=self.seed, log_every=LOG_EVERY)
        traces = self._map(lambda sch: mifb_solve(self.problem, sch, self.x0, opts), desc='Running schedules')
        for name, trace in traces.items():
            gap = float(np.linalg.norm(trace.final_point - x_star))
            if gap > LIMIT_MISMATCH_TOL:
                logger.warning(f"Schedule '{name}' ended {gap:.3e} away from the shared reference point")
        return traces

    def _write_traces(self, traces: Dict[str, RunTrace], identification: Dict[str, Optional[int]]):
        for name, trace in traces.items():
            write_trace_csv(os.path.join(self.output_dir, f'trace_{_slug(name)}.csv'), trace, self.reports[name].model_dump(), identification.get(name))
        write_json(os.path.join(self.output_dir, 'feasibility.json'), {name: rep.model_dump() for name, rep in self.reports.items()})

    def _distance_series(self, traces: Dict[str, RunTrace], identification: Dict[str, Optional[int]], rates: Optional[Dict[str, float]]=None) -> List[PlotSeries]:
        return [PlotSeries(label=name, ks=[r.k for r in trace.records], values=trace.distances, marker_k=identification.get(name), predicted_rate=(rates or {}).get(name)) for name, trace in traces.items()]

    def run(self) -> List[Dict]:
        banner(f'RUN: {self.config.name}')
        x_star = self.shared_reference()
        sig = self.problem.penalty.signature(x_star)
        traces = self._solve_against(x_star)
        identification = {name: detect_identification(trace, sig) for name, trace in traces.items()}
        self._write_traces(traces, identification)
        if self.plot:
            render_plot(self._distance_series(traces, identification), {'title': f'{self.config.name}: distance to x*'}, os.path.join(self.output_dir, 'distances.svg'))
        return [{'schedule': name, 'iterations': trace.iterations, 'K': identification[name], 'final_phi': trace.records[-1].phi if trace.records else trace.phi0, 'termination': trace.termination} for name, trace in traces.items()]

    def compare(self) -> List[Dict]:
        if len(self.schedules) < 2:
            raise ConfigError('compare needs at least two schedules')
        banner(f'COMPARE: {self.config.name}')
        x_star = self.shared_reference()
        sig = self.problem.penalty.signature(x_star)
        traces = self._solve_against(x_star, to_distance=True)
        identification = {name: detect_identification(trace, sig) for name, trace in traces.items()}
        tol = self.config.solver.distance_tol
        rows = []
        for sch, sc in zip(self.schedules, self.config.schedules):
            trace = traces[sch.name]
            reached = [r.k for r in trace.records if r.dist <= tol]
            rows.append({'schedule': sch.name, 's': sch.s, 'rule': sc.rule, 'gamma': sc.gamma, 'a': ' '.join((f'{v:.6g}' for v in sch.a)), 'b': ' '.join((f'{v:.6g}' for v in sch.b)), 'iterations': trace.iterations, 'iters_to_tol': reached[0] if reached else None, 'K': identification[sch.name], 'final_dist': trace.records[-1].dist if trace.records else None, 'same_limit': bool(trace.records) and trace.records[-1].dist <= LIMIT_MISMATCH_TOL, 'termination': trace.termination})
        self._write_traces(traces, identification)
        write_table_csv(os.path.join(self.output_dir, 'comparison.csv'), rows, COMPARISON_COLUMNS)
        if self.plot:
            render_plot(self._distance_series(traces, identification), {'title': f'{self.config.name}: comparison'}, os.path.join(self.output_dir, 'comparison.svg'))
        return rows

    def _grid(self) -> np.ndarray:
        cfg = self.config.rates
        return np.round(np.linspace(-cfg.grid_limit, cfg.grid_limit, cfg.grid_points), 10)

    def _rate_one(self, schedule: InertialSchedule) -> Tuple[RunTrace, Optional[RateReport], Optional[InsufficientDataError]]:
        solver = self.config.solver
        ref = reference_solution(self.problem, schedule, self.x0, max_iter=solver.reference_max_iter, tol_delta=solver.reference_tol)
        trace = ref.trace.with_distances(ref.point)
        depth = schedule.s if schedule.s in self.config.rates.optimize_depths else None
        try:
            return (trace, analyze_rates(self.problem, trace, ref.point, schedule, grid=self._grid(), optimize_depth=depth), None)
        except InsufficientDataError as e:
            return (trace, e.partial, e)

    def rates(self) -> List[Dict]:
        """Per-schedule rate reports against each run's own limit point.

        Writes the partial table before raising when some schedule lacks data.
        """
        banner(f'RATES: {self.config.name}')
        results = self._map(self._rate_one, desc='Analysing rates')
        rows, failures = ([], [])
        traces, identification, predicted = ({}, {}, {})
        for name, (trace, report, error) in results.items():
            traces[name] = trace
            if report is not None:
                rows.append(report.to_dict())
                identification[name] = report.K
                predicted[name] = report.rho_M
            if error is not None:
                failures.append(f'{name}: {error}')
        self._write_traces(traces, identification)
        write_table_csv(os.path.join(self.output_dir, 'rates.csv'), rows, RATES_COLUMNS)
        if self.plot:
            render_plot(self._distance_series(traces, identification, predicted), {'title': f'{self.config.name}: observed vs predicted rates'}, os.path.join(self.output_dir, 'rates.svg'))
        if failures:
            raise InsufficientDataError('; '.join(failures), partial=rows)
        return rows
