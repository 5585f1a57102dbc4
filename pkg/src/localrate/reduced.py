"""Reduced tangent-space matrices and the companion matrix of the linearized error recursion."""
from dataclasses import dataclass, field
from typing import Hashable, List, Optional, Sequence
import numpy as np
from numerics.errors import RankDeficiencyError, ShapeError
from numerics.linalg import spectral_radius as dense_spectral_radius
from numerics.utils import logger
from problems.smooth import CompositeProblem

COND_LIMIT = 1000000000000.0
Q_ZERO_ATOL = 1e-12


@dataclass
class ReducedSystem:
    """Matrices on a tangent basis B at x*.

    ``hessian`` is B^T hess F(x*) B; H = gamma * hessian, G = I - H,
    Q = gamma * B^T (Riemannian Hessian of R) B and P = (I + Q)^-1.
    """
    basis: np.ndarray = field(repr=False)
    hessian: np.ndarray
    H: np.ndarray
    G: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    gamma: float
    signature: Hashable = None

    @property
    def t(self) -> int:
        return int(self.H.shape[0])

    @property
    def q_vanishes(self) -> bool:
        return not self.Q.size or float(np.max(np.abs(self.Q))) <= Q_ZERO_ATOL


def _sym(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def _project_operator(action, x_star: np.ndarray, B: np.ndarray) -> np.ndarray:
    if B.shape[1] == 0:
        return np.zeros((0, 0))
    cols = np.column_stack([action(x_star, B[:, j]) for j in range(B.shape[1])])
    return _sym(B.T @ cols)


def reduced_hessian(problem: CompositeProblem, x_star: np.ndarray, basis: Optional[np.ndarray]=None) -> np.ndarray:
    """B^T hess F(x*) B; raises CapabilityError when F has no Hessian action."""
    x_star = np.asarray(x_star, dtype=np.float64)
    if basis is None:
        basis = problem.penalty.manifold(x_star).tangent_basis
    return _project_operator(problem.smooth.hessian_action, x_star, basis)


def build_reduced_matrices(problem: CompositeProblem, x_star, gamma: float) -> ReducedSystem:
    x_star = np.asarray(x_star, dtype=np.float64)
    info = problem.penalty.manifold(x_star)
    B = info.tangent_basis
    t = B.shape[1]
    hess = reduced_hessian(problem, x_star, B)
    H = gamma * hess
    G = np.eye(t) - H
    Q = gamma * _project_operator(problem.penalty.riemannian_hessian_action, x_star, B)
    I_Q = np.eye(t) + Q
    if t:
        cond = np.linalg.cond(I_Q)
        if not cond < COND_LIMIT:
            raise RankDeficiencyError(f'I + Q is numerically singular (cond {cond:.3e})')
        P = np.linalg.inv(I_Q)
    else:
        P = np.zeros((0, 0))
    logger.debug(f'Reduced system on a tangent space of dimension {t}')
    return ReducedSystem(basis=B, hessian=hess, H=H, G=G, Q=Q, P=P, gamma=gamma, signature=info.signature)


def system_from_hessian(hessian, gamma: float, Q=None) -> ReducedSystem:
    """Reduced system for a given unit-step reduced Hessian, with no basis attached."""
    hess = np.asarray(hessian, dtype=np.float64)
    t = hess.shape[0]
    Q = np.zeros((t, t)) if Q is None else np.asarray(Q, dtype=np.float64)
    H = gamma * hess
    P = np.linalg.inv(np.eye(t) + Q) if t else np.zeros((0, 0))
    return ReducedSystem(basis=np.zeros((0, t)), hessian=hess, H=H, G=np.eye(t) - H, Q=Q, P=P, gamma=gamma)


def companion_blocks(system: ReducedSystem, a: Sequence[float], b: Sequence[float]) -> List[np.ndarray]:
    """First block row M_0, ..., M_s of the companion matrix."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size != b.size or a.size < 1:
        raise ShapeError(f'a and b need the same positive length, got {a.size} and {b.size}')
    s = a.size
    P = system.P
    PG = P @ system.G
    blocks = [(a[0] - b[0]) * P + (1.0 + b[0]) * PG]
    for i in range(1, s):
        blocks.append(-((a[i - 1] - a[i]) - (b[i - 1] - b[i])) * P - (b[i - 1] - b[i]) * PG)
    blocks.append(-(a[s - 1] - b[s - 1]) * P - b[s - 1] * PG)
    return blocks


def companion_matrix(system: ReducedSystem, a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    blocks = companion_blocks(system, a, b)
    t = system.t
    s1 = len(blocks)
    M = np.zeros((s1 * t, s1 * t))
    if t:
        M[:t, :] = np.hstack(blocks)
    for i in range(1, s1):
        M[i * t:(i + 1) * t, (i - 1) * t:i * t] = np.eye(t)
    return M


def spectral_radius(M) -> float:
    return dense_spectral_radius(M)


def scalar_companion_radius(g: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    """max |lambda| over the scalar companions obtained by replacing G with each eigenvalue g."""
    s = a.size
    m = np.empty((g.size, s + 1))
    m[:, 0] = a[0] - b[0] + (1.0 + b[0]) * g
    for i in range(1, s):
        m[:, i] = -((a[i - 1] - a[i]) - (b[i - 1] - b[i])) - (b[i - 1] - b[i]) * g
    m[:, s] = -(a[s - 1] - b[s - 1]) - b[s - 1] * g
    C = np.zeros((g.size, s + 1, s + 1))
    C[:, 0, :] = m
    idx = np.arange(s)
    C[:, idx + 1, idx] = 1.0
    return float(np.max(np.abs(np.linalg.eigvals(C)))) if g.size else 0.0


def companion_spectral_radius(system: ReducedSystem, a: Sequence[float], b: Sequence[float]) -> float:
    """rho(M) without forming M when Q = 0; falls back to the dense matrix otherwise."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not system.q_vanishes:
        return spectral_radius(companion_matrix(system, a, b))
    return scalar_companion_radius(np.linalg.eigvalsh(system.G), a, b)


def linearization_residuals(trace, system: ReducedSystem, x_star, K: int, a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    """Rows (k, ||d_{k+1} - M d_k|| / ||d_k||, ||d_k||) in tangent coordinates for k >= K + s.

    d_k stacks x_k - x*, ..., x_{k-s} - x* on the basis; needs stored iterates.
    """
    x_star = np.asarray(x_star, dtype=np.float64)
    blocks = companion_blocks(system, a, b)
    s = len(blocks) - 1
    B = system.basis
    last = trace.iterations
    coords = {k: B.T @ (trace.iterate(k) - x_star) for k in range(K, last + 1)}
    rows = []
    for k in range(K + s, last):
        stacked = [coords[k - i] for i in range(s + 1)]
        norm = float(np.linalg.norm(np.concatenate(stacked)))
        if norm == 0.0:
            continue
        pred = sum((Mi @ d for Mi, d in zip(blocks, stacked)))
        rows.append((k, float(np.linalg.norm(coords[k + 1] - pred)) / norm, norm))
    return np.array(rows).reshape(-1, 3)
