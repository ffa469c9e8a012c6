"""Explicit ground states, shooting and solution curves for radial p-Laplacian equations."""

from .model import (
    Event,
    Exponential,
    Power,
    Profile,
    RadialProblem,
    critical_exponent_plap,
    critical_exponent_weighted,
    eval_F,
    eval_f,
    lin_ni_Q,
    phi_p,
    phi_p_inv,
)
from .closedform import ValidityViolation, make_family, residual_max
from .integrate import IntegrationError, IvpConfig, first_root, integrate_coulomb, integrate_ivp
from .curves import count_solutions_at, estimate_asymptote, trace_curve
from .pohozaev import classify_power, pohozaev_P, pohozaev_Pprime
from .transform import make_cov, solve_via_cov

__version__ = "0.1.0"
