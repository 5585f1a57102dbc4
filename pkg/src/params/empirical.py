import math
from typing import NamedTuple, Sequence
import numpy as np
from numerics.errors import InvalidParameterError

DEFAULT_C = 10.0
DEFAULT_Q = 0.1


class Interval(NamedTuple):
    """Open interval ]lower, upper[."""
    lower: float
    upper: float

    def contains(self, value: float) -> bool:
        return self.lower < value < self.upper


def empirical_bound(gamma: float, L: float) -> Interval:
    """Admissible range of sum(a_i) for symmetric constant coefficients.

    At gamma = 1/(2L) the ratio is unbounded and the cap 1 applies.
    """
    if not L > 0:
        raise InvalidParameterError(f'Lipschitz constant must be positive, got {L}')
    if not 0 < gamma < 1.0 / L:
        raise InvalidParameterError(f'step {gamma} must lie in ]0, 1/L[')
    gl = gamma * L
    denom = abs(2.0 * gl - 1.0)
    if denom == 0.0:
        return Interval(0.0, 1.0)
    return Interval(0.0, min(1.0, (1.0 - gl) / denom))


def cap_level(k: int, window_deltas: Sequence[float], c: float=DEFAULT_C, q: float=DEFAULT_Q) -> float:
    """c_k = c / (k^(1+q) * sum of the last s step lengths); infinite when they vanish."""
    if not c > 0 or not q > 0:
        raise InvalidParameterError(f'c and q must be positive, got c={c}, q={q}')
    if k < 1:
        raise InvalidParameterError(f'k must be at least 1, got {k}')
    total = float(np.sum(window_deltas))
    if total == 0.0:
        return math.inf
    return c / (k ** (1.0 + q) * total)


def online_cap(k: int, window_deltas: Sequence[float], c: float, q: float, a: Sequence[float]) -> np.ndarray:
    """Scale a proportionally so that sum(a_k) = min(sum(a), c_k)."""
    a = np.asarray(a, dtype=np.float64)
    ck = cap_level(k, window_deltas, c, q)
    total = float(np.sum(a))
    if total <= 0.0 or ck >= total:
        return a.copy()
    return a * (ck / total)


def default_coefficients(rule: str, s: int, gamma: float, L: float, margin: float=0.9) -> np.ndarray:
    """Equal coefficients a_i = b_i placed at ``margin`` of the rule's boundary."""
    from params.feasibility import descent_boundary
    if s < 1:
        raise InvalidParameterError(f'memory depth must be at least 1, got {s}')
    if rule == 'descent':
        level = descent_boundary(s, gamma, L)
    elif rule == 'empirical':
        level = empirical_bound(gamma, L).upper / s
    else:
        raise InvalidParameterError(f"unknown coefficient rule '{rule}'")
    return np.full(s, margin * level)
