from typing import List, Tuple
import numpy as np
from numerics.errors import InvalidParameterError
from problems.smooth import CompositeProblem


def forward_backward(problem: CompositeProblem, gamma: float, x0, max_iter: int=10000, tol_delta: float=1e-10) -> Tuple[np.ndarray, List[np.ndarray]]:
    """Plain x_{k+1} = prox_{gamma R}(x_k - gamma grad F(x_k)); returns (last point, iterates x_1..x_K)."""
    if not 0 < gamma < 1.0 / problem.lipschitz_L:
        raise InvalidParameterError(f'step {gamma} must lie in ]0, 1/L[')
    x = np.array(x0, dtype=np.float64).ravel()
    iterates = []
    for _ in range(max_iter):
        x_next = problem.penalty.prox(x - gamma * problem.smooth.gradient(x), gamma)
        iterates.append(x_next)
        done = np.linalg.norm(x_next - x) <= tol_delta
        x = x_next
        if done:
            break
    return (x, iterates)
