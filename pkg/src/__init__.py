"""Multi-step inertial forward-backward splitting: solver, parameter rules and local rate analysis."""
__version__ = '0.1.0'
