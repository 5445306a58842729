"""Derivative arithmetic, a finite-difference oracle and an ODE integrator."""

from .fit import loglog_slope
from .jet import (
    Jet2,
    ScalarField2,
    abs_power,
    cos,
    exp,
    fd_jet,
    jet_eval,
    lift,
    log,
    power,
    real_eval,
    sin,
    sqrt,
    value,
)
from .ode import OdeSystem, Trajectory, ode_solve

__all__ = [
    "Jet2", "ScalarField2", "OdeSystem", "Trajectory",
    "jet_eval", "fd_jet", "real_eval", "ode_solve", "loglog_slope",
    "log", "exp", "sqrt", "sin", "cos", "power", "abs_power", "lift", "value",
]
