from .feasibility import FeasibilityReport, delta, stationary_mu_nu, optimal_report, check_descent_condition, ellipsoid_check, ball_check, descent_boundary
from .empirical import Interval, empirical_bound, cap_level, online_cap, default_coefficients
__all__ = ['FeasibilityReport', 'delta', 'stationary_mu_nu', 'optimal_report', 'check_descent_condition', 'ellipsoid_check', 'ball_check', 'descent_boundary', 'Interval', 'empirical_bound', 'cap_level', 'online_cap', 'default_coefficients']
