"""Relaxed proximal point iteration for monotone inclusions and its tight linear rates."""
from .engine import RunConfig, Trace, regularity_window, run, step, tightness_report
from .operators import OperatorSpec, apply, dense, monotonicity_gap, resolvent, scalar, skew
from .rates import Regime, bound_gap, khat, rate_bundle, rho_lower, rho_opt, rho_ty, rho_upper

__version__ = "0.1.0"
