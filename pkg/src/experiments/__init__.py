from .config import ExperimentConfig, ProblemConfig, ScheduleConfig, SolverConfig, OutputConfig, RatesConfig, load_config
from .runner import ExperimentRunner, build_problem, build_schedule
from .outputs import write_trace_csv, read_trace_csv, trace_frame, activity_label, TRACE_COLUMNS
from .viz import ConvergenceVisualizer, PlotSeries, render_plot
__all__ = ['ExperimentConfig', 'ProblemConfig', 'ScheduleConfig', 'SolverConfig', 'OutputConfig', 'RatesConfig', 'load_config', 'ExperimentRunner', 'build_problem', 'build_schedule', 'write_trace_csv', 'read_trace_csv', 'trace_frame', 'activity_label', 'TRACE_COLUMNS', 'ConvergenceVisualizer', 'PlotSeries', 'render_plot']
