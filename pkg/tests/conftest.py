import sys
from pathlib import Path
import numpy as np
import pytest
src_dir = str(Path(__file__).parent.parent / 'src')
if src_dir not in sys.path:
    sys.path.insert(0, src_dir)
from penalties import L0Penalty, ZeroPenalty
from problems import CompositeProblem, LeastSquaresLoss, make_pcp, make_sparse_regression, make_sparse_svm


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_regression():
    return make_sparse_regression(seed=1, m=20, n=40, k=3)


@pytest.fixture
def small_pcp():
    return make_pcp(seed=1, n1=8, n2=6, sparsity=5, rank=2, mu1=0.05, mu2=2.0)


@pytest.fixture
def small_svm():
    return make_sparse_svm(seed=1, m=24, n=15)


@pytest.fixture
def quadratic():
    """Zero-penalty least squares with a diagonal design: F(x) = 0.5*||diag(d) x - y||^2."""

    def build(diag, y=None):
        diag = np.asarray(diag, dtype=np.float64)
        y = np.ones_like(diag) if y is None else np.asarray(y, dtype=np.float64)
        loss = LeastSquaresLoss(np.diag(diag), y)
        return CompositeProblem(smooth=loss, penalty=ZeroPenalty(diag.size), dimension=diag.size)
    return build


@pytest.fixture
def scalar_l0():
    """F(x) = 0.5*(x - 2)^2 with R = 0.1*||x||_0."""
    loss = LeastSquaresLoss(np.array([[1.0]]), np.array([2.0]))
    return CompositeProblem(smooth=loss, penalty=L0Penalty(1, 0.1), dimension=1)
