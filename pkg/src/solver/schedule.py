from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence, Tuple
import numpy as np
from numerics.errors import InvalidParameterError
from numerics.utils import logger
from params.empirical import default_coefficients, online_cap
from params.feasibility import FeasibilityReport, optimal_report

COEFF_LOWER = -1.0
COEFF_UPPER = 2.0


@dataclass(frozen=True)
class InertialSchedule:
    """Coefficients a_i, b_i and the step size of one MiFB run.

    ``gamma`` is the step for constant schedules and the upper bound when a
    ``gamma_sequence`` supplies gamma_k; ``online`` holds (c, q) for the
    capped coefficient rule.
    """
    a: Tuple[float, ...]
    b: Tuple[float, ...]
    gamma: float
    gamma_min: Optional[float] = None
    gamma_sequence: Optional[Callable[[int], float]] = field(default=None, compare=False, repr=False)
    online: Optional[Tuple[float, float]] = None
    name: str = ''
    rule: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'a', tuple(float(v) for v in self.a))
        object.__setattr__(self, 'b', tuple(float(v) for v in self.b))
        if len(self.a) < 1:
            raise InvalidParameterError('memory depth s must be at least 1')
        if len(self.a) != len(self.b):
            raise InvalidParameterError(f'a and b need the same length, got {len(self.a)} and {len(self.b)}')
        for v in self.a + self.b:
            if not COEFF_LOWER < v <= COEFF_UPPER:
                raise InvalidParameterError(f'coefficient {v} outside ]-1, 2]')
        if any(v >= 1.0 for v in self.a + self.b):
            logger.warning(f"Schedule '{self.name}' has coefficients of 1 or more; convergence is not covered by the descent condition")
        if not self.gamma > 0:
            raise InvalidParameterError(f'step must be positive, got {self.gamma}')
        if self.gamma_min is not None and not 0 < self.gamma_min <= self.gamma:
            raise InvalidParameterError(f'gamma_min must lie in ]0, gamma], got {self.gamma_min}')
        if self.online is not None and not (self.online[0] > 0 and self.online[1] > 0):
            raise InvalidParameterError(f'online cap constants must be positive, got {self.online}')

    @property
    def s(self) -> int:
        return len(self.a)

    @property
    def lower_step(self) -> float:
        return self.gamma if self.gamma_min is None else self.gamma_min

    @property
    def is_forward_backward(self) -> bool:
        return not any(self.a) and not any(self.b)

    def validate(self, L: float):
        if not self.gamma < 1.0 / L:
            raise InvalidParameterError(f"schedule '{self.name}': step bound {self.gamma} must be below 1/L = {1.0 / L:.6g}")

    def step(self, k: int) -> float:
        if self.gamma_sequence is None:
            return self.gamma
        g = float(self.gamma_sequence(k))
        if not self.lower_step <= g <= self.gamma:
            raise InvalidParameterError(f'gamma_{k} = {g} outside declared bounds [{self.lower_step}, {self.gamma}]')
        return g

    def coefficients(self, k: int, window_deltas: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
        a = np.asarray(self.a)
        b = np.asarray(self.b)
        if self.online is None:
            return (a, b)
        c, q = self.online
        capped = online_cap(max(k, 1), window_deltas, c, q, a)
        total = float(np.sum(a))
        scale = float(np.sum(capped)) / total if total > 0 else 1.0
        return (capped, b * scale)

    def feasibility(self, L: float) -> FeasibilityReport:
        report = optimal_report(self.gamma, self.a, self.b, L, gamma_min=self.gamma_min)
        if not report.feasible and not self.is_forward_backward:
            logger.warning(f"Schedule '{self.name}' violates the descent condition (delta = {report.delta:.3e}); running anyway")
        return report

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 's': self.s, 'a': list(self.a), 'b': list(self.b), 'gamma': self.gamma, 'gamma_min': self.gamma_min, 'varying_step': self.gamma_sequence is not None, 'online': list(self.online) if self.online else None, 'rule': self.rule}


def fb_schedule(gamma: float, name: str='FB') -> InertialSchedule:
    return InertialSchedule(a=(0.0,), b=(0.0,), gamma=gamma, name=name)


def schedule_from_rule(rule: str, s: int, gamma: float, L: float, name: Optional[str]=None, online: Optional[Tuple[float, float]]=None) -> InertialSchedule:
    """Symmetric schedule with default coefficients for ``rule``."""
    coeffs = tuple(default_coefficients(rule, s, gamma, L).tolist())
    return InertialSchedule(a=coeffs, b=coeffs, gamma=gamma, online=online, name=name or f'{s}-iFB', rule=rule)
