import math
from typing import NamedTuple, Sequence, Tuple
import numpy as np
from numerics.errors import InsufficientDataError
from solver.trace import RunTrace

SKIP_AFTER_K = 5
DIST_FLOOR = 1e-12
MIN_POINTS = 10


class RateFit(NamedTuple):
    rate: float
    window: Tuple[int, int]
    points: int


def fit_rate_from_distances(ks: Sequence[int], dists: Sequence[float], K: int, skip: int=SKIP_AFTER_K, floor: float=DIST_FLOOR, min_points: int=MIN_POINTS) -> RateFit:
    """exp of the least-squares slope of log dist against k on [K + skip, last k above floor]."""
    ks = np.asarray(ks, dtype=np.float64)
    dists = np.asarray(dists, dtype=np.float64)
    above = np.flatnonzero(dists > floor)
    last = ks[above[-1]] if above.size else -math.inf
    mask = (ks >= K + skip) & (ks <= last) & (dists > floor)
    if int(mask.sum()) < min_points:
        raise InsufficientDataError(f'only {int(mask.sum())} usable points after K={K} (need {min_points})', partial={'K': K, 'points': int(mask.sum())})
    slope = np.polyfit(ks[mask], np.log(dists[mask]), 1)[0]
    return RateFit(float(math.exp(slope)), (int(ks[mask][0]), int(ks[mask][-1])), int(mask.sum()))


def fit_observed_rate(trace: RunTrace, x_star, K: int, skip: int=SKIP_AFTER_K, floor: float=DIST_FLOOR, min_points: int=MIN_POINTS) -> RateFit:
    ks = [r.k for r in trace.records]
    if trace.iterates is not None:
        dists = [float(np.linalg.norm(x - x_star)) for x in trace.iterates]
    else:
        dists = trace.distances
    return fit_rate_from_distances(ks, dists, K, skip, floor, min_points)
