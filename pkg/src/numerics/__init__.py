from .rng import RngState, gaussian_vector, gaussian_matrix
from .linalg import svd, eigenvalues, spectral_radius, largest_eigenvalue_sym, orthonormality_defect
__all__ = ['RngState', 'gaussian_vector', 'gaussian_matrix', 'svd', 'eigenvalues', 'spectral_radius', 'largest_eigenvalue_sym', 'orthonormality_defect']
