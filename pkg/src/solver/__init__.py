from .schedule import InertialSchedule, fb_schedule, schedule_from_rule
from .trace import IterationRecord, RunTrace
from .monitors import DESCENT, RESIDUAL, DescentMonitor, descent_check, residual_bound, subgradient_residual
from .mifb import SolveOptions, ReferenceSolution, mifb_solve, reference_solution
from .fb import forward_backward
__all__ = ['InertialSchedule', 'fb_schedule', 'schedule_from_rule', 'IterationRecord', 'RunTrace', 'DESCENT', 'RESIDUAL', 'DescentMonitor', 'descent_check', 'residual_bound', 'subgradient_residual', 'SolveOptions', 'ReferenceSolution', 'mifb_solve', 'reference_solution', 'forward_backward']
