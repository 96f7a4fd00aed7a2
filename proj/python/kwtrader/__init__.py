"""Kiefer-Wolfowitz learning of log-optimal threshold trading strategies."""

from ._core import (
    Ar1Params,
    DegenerateError,
    DgsvParams,
    MaParams,
    ParameterError,
    ReturnPath,
    StateError,
    dataset_preset,
    fit_power_law,
    learn,
    ma_coefficients,
    mc_growth_curve,
    optimal_theta_ar1,
    realized_growth,
    run_convergence,
    simulate,
    stationary_moments_ar1,
    validate_schedule,
    wealth_path,
)

__all__ = [
    "Ar1Params",
    "DegenerateError",
    "DgsvParams",
    "MaParams",
    "ParameterError",
    "ReturnPath",
    "StateError",
    "dataset_preset",
    "fit_power_law",
    "learn",
    "ma_coefficients",
    "mc_growth_curve",
    "optimal_theta_ar1",
    "realized_growth",
    "run_convergence",
    "simulate",
    "stationary_moments_ar1",
    "validate_schedule",
    "wealth_path",
]
