"""Pohozaev function along radial profiles.

For ``p = 2`` and a weighted nonlinearity ``lam r**alpha f(u)`` with
``F(r, u) = lam r**alpha F(u)``:

    P(r)  = r^n [u'^2 + 2 F(r, u)] + (n - 2) r^(n-1) u' u
    P'(r) = r^(n-1) [2 n F(r, u) - (n - 2) u f(r, u) + 2 r F_r(r, u)]

For general ``p`` (autonomous ``f`` only):

    P(r)  = r^n [(p - 1) phi_p(u') u' + p lam F(u)] + (n - p) r^(n-1) phi_p(u') u
    P'(r) = r^(n-1) [n p lam F(u) - (n - p) lam u f(u)]

Both reduce to the same expression at ``p = 2, alpha = 0``.  ``P(0) = 0``, so a
constant sign of ``P'`` says a lot: for a single power ``u**q`` it is
positive below the critical exponent, zero at it and negative above.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import RadialProblem, critical_exponent_plap, critical_exponent_weighted, eval_F, eval_f, phi_p

__all__ = [
    "Criticality",
    "PohozaevSample",
    "pohozaev_P",
    "pohozaev_Pprime",
    "classify_power",
    "pohozaev_scan",
]


class Criticality(str, enum.Enum):
    Subcritical = "subcritical"
    Critical = "critical"
    Supercritical = "supercritical"


@dataclass(frozen=True)
class PohozaevSample:
    r: float
    P: float
    Pprime_formula: float
    Pprime_numeric: float

    def mismatch(self) -> float:
        """``|formula - numeric| / (1 + |formula|)``."""
        return abs(self.Pprime_formula - self.Pprime_numeric) / (1.0 + abs(self.Pprime_formula))


def _check(problem: RadialProblem):
    if problem.p != 2.0 and problem.alpha != 0.0:
        raise ValueError("the Pohozaev function for p != 2 is only available without the r**alpha weight")


def _out(x):
    return x if np.ndim(x) else float(x)


def pohozaev_P(problem: RadialProblem, r, u, uprime):
    """Pohozaev function at radius ``r`` for state ``(u, u')``."""
    _check(problem)
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    du = np.asarray(uprime, dtype=float)
    n, p = problem.n, problem.p
    with np.errstate(divide="ignore"):
        weight = problem.lam * np.where(r > 0, r, 1.0) ** problem.alpha
    F = weight * eval_F(problem, u)
    ph = phi_p(du, p)
    val = r**n * ((p - 1.0) * ph * du + p * F) + (n - p) * r ** (n - 1.0) * ph * u
    return _out(np.where(r > 0, val, 0.0))


def pohozaev_Pprime(problem: RadialProblem, r, u):
    """Closed-form derivative of :func:`pohozaev_P` along solutions."""
    _check(problem)
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    n, p, alpha = problem.n, problem.p, problem.alpha
    with np.errstate(divide="ignore"):
        weight = problem.lam * np.where(r > 0, r, 1.0) ** alpha
    F = eval_F(problem, u)
    f = eval_f(problem, u)
    # at p = 2 the 2 r F_r term is 2 alpha F(r, u); it vanishes when alpha = 0
    bracket = weight * ((n * p + 2.0 * alpha) * F - (n - p) * u * f)
    val = r ** (n - 1.0) * bracket
    return _out(np.where(r > 0, val, 0.0))


def classify_power(n: float, p: float, alpha: float, q: float) -> Criticality:
    """Compare ``q`` with the critical exponent (relative tolerance 1e-12).

    ``p = 2`` uses the weighted exponent ``(n + 2 + 2 alpha)/(n - 2)``;
    other ``p`` need ``alpha = 0`` and use ``((p-1) n + p)/(n - p)``.
    """
    if p == 2.0:
        qc = critical_exponent_weighted(n, alpha)
    else:
        if alpha != 0.0:
            raise ValueError("no critical exponent for the weighted p-Laplacian")
        qc = critical_exponent_plap(n, p)
    if math.isclose(q, qc, rel_tol=1e-12):
        return Criticality.Critical
    return Criticality.Subcritical if q < qc else Criticality.Supercritical


def _evaluator(profile):
    # closed-form families expose u / uprime, profiles are callable
    if hasattr(profile, "family_id"):
        return lambda r: (profile.u(r), profile.uprime(r))
    return profile


def pohozaev_scan(problem: RadialProblem, profile, r_grid, rel_step=1e-4) -> list[PohozaevSample]:
    """Sample ``P`` and both versions of ``P'`` along a profile.

    Parameters
    ----------
    problem : RadialProblem
        Must be the problem the profile solves (same ``lam``).
    profile : Profile or ClosedFormFamily
        Anything that gives ``(u, u')`` at a radius.
    r_grid : array_like
        Positive radii inside the profile's range.
    rel_step : float
        Central-difference step as a fraction of ``r``.
    """
    ev = _evaluator(profile)
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise ValueError("scan radii must be positive")
    h = rel_step * r
    u, du = (np.asarray(x, dtype=float) for x in ev(r))
    up, dup = ev(r + h)
    um, dum = ev(r - h)
    P = np.atleast_1d(pohozaev_P(problem, r, u, du))
    Pn = (np.atleast_1d(pohozaev_P(problem, r + h, up, dup)) - np.atleast_1d(pohozaev_P(problem, r - h, um, dum))) / (2 * h)
    Pf = np.atleast_1d(pohozaev_Pprime(problem, r, u))
    return [PohozaevSample(float(a), float(b), float(c), float(d)) for a, b, c, d in zip(np.atleast_1d(r), P, Pf, Pn)]
