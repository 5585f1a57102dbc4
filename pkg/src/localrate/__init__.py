from .identification import detect_identification
from .reduced import ReducedSystem, build_reduced_matrices, system_from_hessian, companion_blocks, companion_matrix, companion_spectral_radius, spectral_radius, linearization_residuals, reduced_hessian
from .conditions import tau_and_RI, optimal_rate_formulas, check_Q_psd
from .fitting import RateFit, fit_observed_rate, fit_rate_from_distances
from .tuning import InertiaChoice, optimize_inertia
from .report import RateReport, analyze_rates
__all__ = ['detect_identification', 'ReducedSystem', 'build_reduced_matrices', 'system_from_hessian', 'companion_blocks', 'companion_matrix', 'companion_spectral_radius', 'spectral_radius', 'linearization_residuals', 'reduced_hessian', 'tau_and_RI', 'optimal_rate_formulas', 'check_Q_psd', 'RateFit', 'fit_observed_rate', 'fit_rate_from_distances', 'InertiaChoice', 'optimize_inertia', 'RateReport', 'analyze_rates']
