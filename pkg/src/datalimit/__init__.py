"""Upper bounds on the total data a stationary node can exchange with a
terminal receding at constant speed, plus a quadrature oracle and planner."""
from ._backend import BACKEND
from .closed_form import (
    BoundResult,
    FormulaTag,
    SeriesOptions,
    approx_error,
    d_inf_1,
    d_inf_1_lower,
    d_inf_2,
    d_inf_3,
    d_t_closed_alpha2,
    error_envelope,
    log_antiderivative,
    series_sum,
)
from .errors import ConvergenceError, DataLimitError, HypothesisError, InfeasibleError, ModelError
from .link_model import LinkBudget, MobilityProfile, distance, snr, transmit_snr
from .planner import PlanQuery, SweepSpec, finite_time_curve, solve_power, solve_speed, sweep
from .quadrature import QuadratureSpec, integrate_finite, integrate_infinite, tail_bound
from .units import InfoQuantity, Unit, convert

__all__ = [
    "BACKEND", "BoundResult", "FormulaTag", "SeriesOptions", "approx_error", "d_inf_1", "d_inf_1_lower",
    "d_inf_2", "d_inf_3", "d_t_closed_alpha2", "error_envelope", "log_antiderivative", "series_sum",
    "ConvergenceError", "DataLimitError", "HypothesisError", "InfeasibleError", "ModelError",
    "LinkBudget", "MobilityProfile", "distance", "snr", "transmit_snr",
    "PlanQuery", "SweepSpec", "finite_time_curve", "solve_power", "solve_speed", "sweep",
    "QuadratureSpec", "integrate_finite", "integrate_infinite", "tail_bound",
    "InfoQuantity", "Unit", "convert",
]
