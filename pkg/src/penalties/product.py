from typing import List, Sequence, Tuple
import numpy as np
from numerics.errors import PartitionError
from penalties.base import ManifoldInfo, Penalty, ProxResult


def _indices(sl: slice) -> range:
    if sl.step not in (None, 1) or sl.start is None or sl.stop is None:
        raise PartitionError(f'slices need explicit start/stop and unit step, got {sl}')
    return range(sl.start, sl.stop)


def check_partition(slices: Sequence[slice]) -> int:
    """Return the ambient dimension covered by ``slices`` or raise PartitionError."""
    covered = np.zeros(max((s.stop for s in slices), default=0), dtype=int)
    for sl in slices:
        idx = _indices(sl)
        if len(idx) == 0:
            raise PartitionError(f'empty slice {sl}')
        covered[sl] += 1
    if covered.size == 0:
        raise PartitionError('no slices given')
    if np.any(covered > 1):
        raise PartitionError(f'slices overlap at coordinates {np.flatnonzero(covered > 1)[:10].tolist()}')
    if np.any(covered == 0):
        raise PartitionError(f'coordinates {np.flatnonzero(covered == 0)[:10].tolist()} are not covered')
    return int(covered.size)


class ProductPenalty(Penalty):
    """Separable sum of penalties on disjoint slices; free slices are unpenalized."""

    def __init__(self, parts: List[Tuple[Penalty, slice]], free_slices: Sequence[slice]=()):
        self.parts = list(parts)
        self.free_slices = list(free_slices)
        for penalty, sl in self.parts:
            if len(_indices(sl)) != penalty.dimension:
                raise PartitionError(f'slice {sl} has length {len(_indices(sl))} but penalty acts on {penalty.dimension} coordinates')
        self.dimension = check_partition([sl for _, sl in self.parts] + self.free_slices)

    def value(self, x) -> float:
        x = np.asarray(x)
        return float(sum((p.value(x[sl]) for p, sl in self.parts)))

    def prox(self, z, theta: float) -> np.ndarray:
        z = np.asarray(z, dtype=np.float64)
        out = z.copy()
        for p, sl in self.parts:
            out[sl] = p.prox(z[sl], theta)
        return out

    def prox_eval(self, z, theta: float) -> ProxResult:
        z = np.asarray(z, dtype=np.float64)
        out = z.copy()
        total = 0.0
        sigs = []
        for p, sl in self.parts:
            res = p.prox_eval(z[sl], theta)
            out[sl] = res.point
            total += res.value
            sigs.append(res.signature)
        return ProxResult(out, total, tuple(sigs))

    def signature(self, x):
        x = np.asarray(x)
        return tuple((p.signature(x[sl]) for p, sl in self.parts))

    def manifold(self, x) -> ManifoldInfo:
        x = np.asarray(x, dtype=np.float64)
        infos = [(p.manifold(x[sl]), sl) for p, sl in self.parts]
        blocks = [(info.tangent_basis, sl) for info, sl in infos]
        blocks += [(np.eye(sl.stop - sl.start), sl) for sl in self.free_slices]
        total = sum((b.shape[1] for b, _ in blocks))
        basis = np.zeros((self.dimension, total))
        col = 0
        for b, sl in blocks:
            basis[sl, col:col + b.shape[1]] = b
            col += b.shape[1]

        def project(v):
            v = np.asarray(v, dtype=np.float64)
            out = v.copy()
            for info, sl in infos:
                out[sl] = info.project(v[sl])
            return out
        return ManifoldInfo(signature=tuple((info.signature for info, _ in infos)), tangent_basis=basis, project=project)

    def riemannian_hessian_action(self, x, h) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        h = np.asarray(h, dtype=np.float64)
        out = np.zeros_like(h)
        for p, sl in self.parts:
            out[sl] = p.riemannian_hessian_action(x[sl], h[sl])
        return out

    def describe(self) -> dict:
        return {'kind': 'product', 'dimension': self.dimension, 'parts': [dict(p.describe(), start=sl.start, stop=sl.stop) for p, sl in self.parts], 'free': [[sl.start, sl.stop] for sl in self.free_slices]}


def product_penalty(parts: List[Tuple[Penalty, slice]], free_slices: Sequence[slice]=()) -> ProductPenalty:
    return ProductPenalty(parts, free_slices)
