"""Removing the ``r**alpha`` weight by a change of the radial variable.

With ``k = 1 + alpha/p`` and ``t = r**k / k`` the weighted problem

    (phi_p(u_r))_r + (n-1)/r phi_p(u_r) + r^alpha f(u) = 0

becomes the autonomous problem

    (phi_p(u_t))_t + m/t phi_p(u_t) + f(u) = 0,   m = (n - 1 + alpha - alpha/p) / k,

i.e. an unweighted problem in (generally non-integer) dimension ``m + 1``.
Derivatives transform as ``u_r = u_t r**(alpha/p)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import (
    CURVE_CONFIG,
    CurvePoint,
    InsufficientBranch,
    SolutionCurve,
    _find_folds,
    estimate_asymptote,
    trace_curve,
)
from .integrate import IvpConfig, RootOutcome, first_root, integrate_ivp
from .model import Event, Profile, RadialProblem

__all__ = [
    "CovMap",
    "make_cov",
    "transformed_problem",
    "pushforward",
    "pullback",
    "solve_via_cov",
    "first_root_via_cov",
    "trace_curve_via_cov",
]


@dataclass(frozen=True)
class CovMap:
    n: float
    p: float
    alpha: float
    m: float
    k: float  # t = r**k / k

    def t_of_r(self, r):
        r = np.asarray(r, dtype=float)
        out = r**self.k / self.k
        return out if out.ndim else float(out)

    def r_of_t(self, t):
        t = np.asarray(t, dtype=float)
        out = (self.k * t) ** (1.0 / self.k)
        return out if out.ndim else float(out)

    def dt_dr(self, r):
        """``r**(alpha/p)``."""
        r = np.asarray(r, dtype=float)
        out = r ** (self.alpha / self.p)
        return out if out.ndim else float(out)

    def to_dict(self):
        return {"n": self.n, "p": self.p, "alpha": self.alpha, "m": self.m, "dimension": self.m + 1.0,
                "t_exponent": self.k, "t_scale": 1.0 / self.k, "derivative_exponent": self.alpha / self.p}


def make_cov(n: float, p: float = 2.0, alpha: float = 0.0) -> CovMap:
    """Change of variables for weight ``r**alpha`` (``alpha > -1``)."""
    if not alpha > -1:
        raise ValueError(f"the change of variables needs alpha > -1 (got {alpha})")
    if not p > 1:
        raise ValueError(f"p must exceed 1 (got {p})")
    k = 1.0 + alpha / p
    m = (n - 1.0 + alpha - alpha / p) / k
    return CovMap(float(n), float(p), float(alpha), m, k)


def transformed_problem(problem: RadialProblem, cov: CovMap | None = None) -> RadialProblem:
    """Unweighted problem in dimension ``m + 1``, same ``f``, ``p`` and ``lam``."""
    cov = cov or make_cov(problem.n, problem.p, problem.alpha)
    return RadialProblem(n=cov.m + 1.0, p=problem.p, alpha=0.0, terms=problem.terms, lam=problem.lam)


def _ratio(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    return out


def _scale_slope(du_t, cov, r):
    # u_r vanishes at the origin for alpha > -1 even when r**(alpha/p) blows up
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(r > 0, np.asarray(du_t, dtype=float) * cov.dt_dr(np.where(r > 0, r, 1.0)), 0.0)
    return out if out.ndim else float(out)


def _map_events(events, fn):
    return [Event(e.kind, float(fn(e.r))) for e in events]


def pushforward(profile: Profile, cov: CovMap) -> Profile:
    """Profile in ``r`` -> profile in ``t``; values unchanged, ``u_t = u_r / r**(alpha/p)``."""
    t = cov.t_of_r(profile.r)
    du_t = _ratio(profile.uprime, cov.dt_dr(profile.r))

    def dense(tq):
        rq = cov.r_of_t(tq)
        u, du = profile(rq)
        return u, _ratio(du, cov.dt_dr(rq))

    return Profile(t, profile.u.copy(), du_t, events=_map_events(profile.events, cov.t_of_r), dense=dense)


def pullback(profile: Profile, cov: CovMap) -> Profile:
    """Profile in ``t`` -> profile in ``r``; ``u_r = u_t r**(alpha/p)``."""
    r = cov.r_of_t(profile.r)
    du_r = _scale_slope(profile.uprime, cov, r)

    def dense(rq):
        u, du = profile(cov.t_of_r(rq))
        return u, _scale_slope(du, cov, rq)

    return Profile(r, profile.u.copy(), du_r, events=_map_events(profile.events, cov.r_of_t), dense=dense)


def solve_via_cov(problem: RadialProblem, a: float, config: IvpConfig = IvpConfig(), r_end=None) -> Profile:
    """Integrate the weighted problem through its autonomous counterpart.

    The result is expressed back in ``r`` and should agree with
    :func:`integrate_ivp` on ``problem`` directly.
    """
    cov = make_cov(problem.n, problem.p, problem.alpha)
    r_end = config.r_max if r_end is None else float(r_end)
    prof_t = integrate_ivp(transformed_problem(problem, cov), a, config, r_end=cov.t_of_r(r_end))
    return pullback(prof_t, cov)


def first_root_via_cov(problem: RadialProblem, a: float, config: IvpConfig = IvpConfig(),
                       require_positive_f=True) -> RootOutcome:
    """First root in ``r``, computed in ``t`` and mapped back."""
    cov = make_cov(problem.n, problem.p, problem.alpha)
    cfg_t = config.with_rmax(cov.t_of_r(config.r_max))
    out = first_root(transformed_problem(problem, cov), a, cfg_t, require_positive_f=require_positive_f)
    rho = cov.r_of_t(out.rho) if out.has_root else out.rho
    return RootOutcome(out.status, rho, pullback(out.profile, cov), config.r_max)


def trace_curve_via_cov(problem: RadialProblem, a_grid=None, config: IvpConfig = CURVE_CONFIG, **kwargs) -> SolutionCurve:
    """Solution curve of the weighted Dirichlet problem, traced in ``t``.

    The first root ``tau`` in ``t`` maps to ``rho = r(tau)`` and the
    multiplier to ``lam = rho**(p + alpha)``.  Remaining keyword arguments go
    to :func:`trace_curve` (``strict=False`` for sign-changing ``f``).
    """
    cov = make_cov(problem.n, problem.p, problem.alpha)
    tp = transformed_problem(problem, cov)
    cfg_t = config.with_rmax(cov.t_of_r(config.r_max))
    reshoot = kwargs.pop("reshoot", True)
    curve_t = trace_curve(tp, a_grid, cfg_t, reshoot=False, **kwargs)
    pe = problem.p + problem.alpha
    points = []
    for pt in curve_t.points:
        rho = cov.r_of_t(pt.rho)
        lam = rho**pe
        res = float("nan")
        if reshoot:
            prof = integrate_ivp(problem.with_lambda(lam), pt.a, config, r_end=1.0)
            res = abs(float(prof.u[-1]))
        points.append(CurvePoint(pt.a, rho, lam, res))
    a_arr = np.array([q.a for q in points])
    lam_arr = np.array([q.lam for q in points])
    curve = SolutionCurve(points, _find_folds(a_arr, lam_arr), problem.with_lambda(1.0), config,
                          a_truncated=curve_t.a_truncated, failures=curve_t.failures, strict=curve_t.strict)
    try:
        curve.asymptote = estimate_asymptote(curve).beta
    except InsufficientBranch:
        curve.asymptote = None
    return curve
