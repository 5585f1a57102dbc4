import itertools
from typing import NamedTuple, Sequence
import numpy as np
from numerics.errors import InvalidParameterError
from localrate.reduced import companion_spectral_radius, system_from_hessian

DEFAULT_GRID = tuple(np.round(np.linspace(-0.95, 0.95, 39), 10))
TIE_TOL = 1e-12


class InertiaChoice(NamedTuple):
    a: np.ndarray
    rho: float


def optimize_inertia(H_red, s: int, gamma: float, grid: Sequence[float]=DEFAULT_GRID, Q_red=None) -> InertiaChoice:
    """Grid search of symmetric coefficients a = b minimizing rho(M).

    ``H_red`` is the reduced Hessian at unit step and is scaled by ``gamma``.
    Ties go to the smaller ||a||.
    """
    grid = [float(v) for v in grid]
    if not grid:
        raise InvalidParameterError('inertia grid is empty')
    if s < 1:
        raise InvalidParameterError(f'memory depth must be at least 1, got {s}')
    if any((not -1.0 < v < 1.0 for v in grid)):
        raise InvalidParameterError('grid values must lie in ]-1, 1[')
    system = system_from_hessian(H_red, gamma, Q_red)
    best = None
    for combo in itertools.product(grid, repeat=s):
        a = np.array(combo)
        rho = companion_spectral_radius(system, a, a)
        key = (rho, float(np.linalg.norm(a)))
        if best is None or rho < best[0][0] - TIE_TOL or (abs(rho - best[0][0]) <= TIE_TOL and key[1] < best[0][1]):
            best = (key, a)
    return InertiaChoice(best[1], best[0][0])
