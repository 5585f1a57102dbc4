import math
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Optional
import numpy as np


@dataclass
class IterationRecord:
    """State after producing x_k; ``resid`` and ``dist`` are NaN when not tracked."""
    k: int
    phi: float
    delta: float
    resid: float
    signature: Hashable
    dist: float = math.nan
    slacks: Dict[str, float] = field(default_factory=dict)


@dataclass
class RunTrace:
    records: List[IterationRecord]
    final_point: np.ndarray
    termination: str
    schedule: Dict[str, Any]
    seed: Optional[int] = None
    phi0: float = math.nan
    lipschitz_L: float = math.nan
    x0: Optional[np.ndarray] = field(default=None, repr=False)
    iterates: Optional[List[np.ndarray]] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def iterations(self) -> int:
        return self.records[-1].k if self.records else 0

    @property
    def phis(self) -> np.ndarray:
        return np.array([r.phi for r in self.records])

    @property
    def deltas(self) -> np.ndarray:
        return np.array([r.delta for r in self.records])

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r.resid for r in self.records])

    @property
    def distances(self) -> np.ndarray:
        return np.array([r.dist for r in self.records])

    @property
    def signatures(self) -> List[Hashable]:
        return [r.signature for r in self.records]

    def iterate(self, k: int) -> np.ndarray:
        """x_k for 0 <= k <= iterations; needs ``store_iterates``."""
        if k == 0:
            return self.x0
        if self.iterates is None:
            raise ValueError('iterates were not stored for this run')
        return self.iterates[k - 1]

    def path_length(self, start: int=1) -> float:
        """Sum of Delta_k for k >= start."""
        return float(sum(r.delta for r in self.records if r.k >= start))

    def with_distances(self, x_star: np.ndarray) -> 'RunTrace':
        if self.iterates is None:
            raise ValueError('iterates were not stored for this run')
        for rec, x in zip(self.records, self.iterates):
            rec.dist = float(np.linalg.norm(x - x_star))
        return self
