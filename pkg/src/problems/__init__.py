from .smooth import CompositeProblem, SmoothLoss, lipschitz_constant
from .regression import LeastSquaresLoss, make_sparse_regression
from .pcp import PCPLoss, make_pcp
from .svm import SVMLoss, make_sparse_svm
from .io import save_problem, load_problem, problem_to_dict
__all__ = ['CompositeProblem', 'SmoothLoss', 'lipschitz_constant', 'LeastSquaresLoss', 'make_sparse_regression', 'PCPLoss', 'make_pcp', 'SVMLoss', 'make_sparse_svm', 'save_problem', 'load_problem', 'problem_to_dict']
