"""Shooting from the singular point ``r = 0``.

The radial equation is integrated in the conserved form

    w = r^(n-1) phi_p(u'),   w' = -lam r^(alpha+n-1) f(u),   u' = phi_p_inv(w / r^(n-1)),

which removes the ``(n-1)/r`` term.  The first step off the origin uses the
one-term series

    u(r) ~ a - (p-1)/(p+alpha) * phi_p_inv(lam f(a) / (n+alpha)) * r^((p+alpha)/(p-1)),

after which an explicit DOP853 stepper (8th order, 7th order dense output)
takes over.  Sign changes of ``u`` are localized on the dense output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import DOP853, OdeSolution
from scipy.optimize import brentq

from .model import Event, Exponential, Power, Profile, RadialProblem, eval_f, eval_fprime, phi_p_inv

__all__ = [
    "IvpConfig",
    "IntegrationError",
    "RootOutcome",
    "integrate_ivp",
    "first_root",
    "integrate_coulomb",
    "series_start",
]


class IntegrationError(RuntimeError):
    """The stepper failed (step limit, overflow, stalled step size)."""


@dataclass(frozen=True)
class IvpConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    r_max: float = 1e3
    h0_policy: str = "series"
    max_steps: int = 200_000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if self.h0_policy not in ("series", "fixed"):
            raise ValueError("h0_policy must be 'series' or 'fixed'")

    def with_rmax(self, r_max):
        return replace(self, r_max=float(r_max))


@dataclass
class RootOutcome:
    """Result of :func:`first_root`.

    ``status`` is ``"root"`` (``rho`` finite), ``"no_root"`` (u stayed
    positive up to ``r_max``; ``rho`` is ``inf``) or ``"turned"`` (u' reached
    zero while u > 0, so no root can follow; ``rho`` is ``inf``).
    """

    status: str
    rho: float
    profile: Profile
    r_max: float

    @property
    def has_root(self) -> bool:
        return self.status == "root"


def _scalar_f(problem: RadialProblem):
    """Fast float -> float version of ``f`` used inside the stepper."""
    pw = [(t.coeff, t.exponent) for t in problem.terms if isinstance(t, Power)]
    ex = [(t.coeff, t.rate) for t in problem.terms if isinstance(t, Exponential)]

    def f(u):
        s = 0.0
        if pw and u > 0.0:
            for c, e in pw:
                s += c * u**e
        for c, k in ex:
            s += c * math.exp(k * u)
        return s

    return f


def series_start(problem: RadialProblem, a: float, config: IvpConfig = IvpConfig()):
    """Starting radius and state ``(r0, u0, w0)`` from the one-term series.

    ``r0`` is chosen so that the neglected second-order term stays below
    ``abs_tol``.
    """
    n, p, alpha, lam = problem.n, problem.p, problem.alpha, problem.lam
    fa = float(eval_f(problem, a))
    g = lam * fa / (n + alpha)
    k = (p + alpha) / (p - 1.0)
    C = (p - 1.0) / (p + alpha) * abs(g) ** (1.0 / (p - 1.0))
    if config.h0_policy == "fixed" or C == 0.0:
        r0 = 1e-8
    else:
        ratio = abs(float(eval_fprime(problem, a))) / abs(fa) if fa else 0.0
        ratio = ratio if math.isfinite(ratio) else 1e6
        delta = math.sqrt(config.abs_tol * (p - 1.0) / max(ratio, 1.0))
        delta = min(delta, 1e-4 * max(abs(a), 1.0))
        r0 = (delta / C) ** (1.0 / k)
        # natural length of the problem; large lam shrinks everything
        scale = min(1.0, abs(lam) ** (-1.0 / (p + alpha)))
        r0 = min(max(r0, 1e-12 * scale), 1e-2 * scale)
    u0 = a - math.copysign(C, g) * r0**k
    w0 = -g * r0 ** (n + alpha)
    return r0, u0, w0


def _series_dense(problem, a):
    n, p, alpha, lam = problem.n, problem.p, problem.alpha, problem.lam
    g = lam * float(eval_f(problem, a)) / (n + alpha)
    k = (p + alpha) / (p - 1.0)
    C = math.copysign((p - 1.0) / (p + alpha) * abs(g) ** (1.0 / (p - 1.0)), g)

    def dense(r):
        r = np.asarray(r, dtype=float)
        return a - C * r**k, -phi_p_inv(g, p) * r ** (k - 1.0)

    return dense


class _Trajectory:
    """Step-by-step DOP853 run with root / turn detection."""

    def __init__(self, problem: RadialProblem, a: float, config: IvpConfig):
        self.problem = problem
        self.a = float(a)
        self.config = config
        n, p, alpha, lam = problem.n, problem.p, problem.alpha, problem.lam
        f = _scalar_f(problem)
        inv = 1.0 / (p - 1.0)
        nm1 = n - 1.0
        wexp = alpha + n - 1.0

        def rhs(r, y):
            u, w = y
            z = w / r**nm1
            du = math.copysign(abs(z) ** inv, z) if p != 2.0 else z
            return np.array([du, -lam * r**wexp * f(u)])

        self.rhs = rhs
        self.uprime_of = lambda r, w: phi_p_inv(np.asarray(w) / np.asarray(r) ** nm1, p)

    def run(self, r_end, stop_at_root=False, stop_on_turn=False):
        cfg = self.config
        problem, a = self.problem, self.a
        try:
            r0, u0, w0 = series_start(problem, a, cfg)
        except OverflowError as exc:
            raise IntegrationError(f"overflow evaluating f({a})") from exc
        if r0 >= r_end:
            r0 = 0.5 * r_end
        # the series radius is a safe first step; the stepper's own guess can
        # overshoot badly when lam is large
        solver = DOP853(self.rhs, r0, np.array([u0, w0]), r_end, rtol=cfg.rel_tol, atol=cfg.abs_tol,
                        first_step=min(r0, r_end - r0))
        ts, ys, interps = [r0], [np.array([u0, w0])], []
        events = []
        rho = math.inf
        turned = False
        steps = 0
        while solver.status == "running":
            if steps >= cfg.max_steps:
                raise IntegrationError(f"step limit {cfg.max_steps} reached at r={solver.t:.6g}")
            try:
                msg = solver.step()
            except OverflowError as exc:
                raise IntegrationError(f"overflow near r={solver.t:.6g}") from exc
            steps += 1
            if solver.status == "failed":
                raise IntegrationError(f"stepper failed at r={solver.t:.6g}: {msg}")
            y = solver.y
            if not np.all(np.isfinite(y)):
                raise IntegrationError(f"overflow near r={solver.t:.6g}")
            interp = solver.dense_output()
            t_old, t_new = solver.t_old, solver.t
            if stop_at_root and y[0] <= 0.0:
                rho = brentq(lambda r: interp(r)[0], t_old, t_new, xtol=1e-14, rtol=4 * np.finfo(float).eps)
                ts.append(rho)
                ys.append(interp(rho))
                interps.append(interp)
                events.append(Event("first_root", rho))
                break
            ts.append(t_new)
            ys.append(y.copy())
            interps.append(interp)
            if y[1] >= 0.0 and y[0] > 0.0 and not turned:
                turned = True
                r_turn = brentq(lambda r: interp(r)[1], t_old, t_new) if ys[-2][1] < 0 else t_new
                events.append(Event("slope_violation", r_turn))
                if stop_on_turn:
                    break
        else:
            events.append(Event("reached_rmax", float(solver.t)))

        ts = np.array(ts)
        ys = np.array(ys)
        sol = OdeSolution(ts, interps) if interps else None
        series = _series_dense(problem, a)
        uprime_of = self.uprime_of
        r_first = float(ts[0])
        r_last = float(ts[-1])

        def dense(r):
            r = np.asarray(r, dtype=float)
            scalar = r.ndim == 0
            r = np.atleast_1d(r)
            if np.any(r > r_last * (1 + 1e-12)) or np.any(r < 0):
                raise ValueError(f"radius outside profile range [0, {r_last}]")
            u = np.empty_like(r)
            du = np.empty_like(r)
            inner = r <= r_first
            if np.any(inner):
                u[inner], du[inner] = series(r[inner])
            outer = ~inner
            if np.any(outer) and sol is not None:
                yy = sol(np.minimum(r[outer], r_last))
                u[outer] = yy[0]
                du[outer] = uprime_of(r[outer], yy[1])
            if scalar:
                return float(u[0]), float(du[0])
            return u, du

        u0_slope = float(series(np.array([0.0]))[1][0]) if problem.coulomb else 0.0
        r_s = np.concatenate([[0.0], ts])
        u_s = np.concatenate([[a], ys[:, 0]])
        du_s = np.concatenate([[u0_slope], uprime_of(ts, ys[:, 1])])
        prof = Profile(r_s, u_s, du_s, events=events, dense=dense, w=np.concatenate([[0.0], ys[:, 1]]))
        status = "root" if math.isfinite(rho) else ("turned" if turned and stop_on_turn else "no_root")
        return prof, rho, status


def _check_alpha(problem):
    if problem.coulomb:
        raise ValueError("alpha = -1 (Coulomb) problems go through integrate_coulomb")
    if not problem.alpha > -1:
        raise ValueError("alpha <= -1 has no C^1 solutions at the origin; not integrated")


def _check_height(problem, a):
    # power terms vanish for u <= 0; purely exponential f allows any real height
    if not math.isfinite(a):
        raise ValueError(f"initial height must be finite, got {a}")
    if any(isinstance(t, Power) for t in problem.terms) and not a > 0:
        raise ValueError(f"initial height must be positive, got {a}")


def integrate_ivp(problem: RadialProblem, a: float, config: IvpConfig = IvpConfig(), r_end=None) -> Profile:
    """Integrate ``u(0) = a, u'(0) = 0`` out to ``r_end`` (default ``config.r_max``).

    The trajectory is not stopped at roots of ``u``.  ``a`` must be positive
    unless ``f`` is a sum of exponentials.

    Raises
    ------
    IntegrationError
        Step limit, overflow or stepper failure.
    """
    _check_alpha(problem)
    _check_height(problem, a)
    r_end = config.r_max if r_end is None else float(r_end)
    prof, _, _ = _Trajectory(problem, a, config).run(r_end)
    return prof


def _check_positive_f(problem, a, samples=64):
    us = np.linspace(a / samples, a, samples)
    try:
        vals = eval_f(problem, us)
    except OverflowError as exc:
        raise IntegrationError(f"overflow evaluating f on (0, {a}]") from exc
    if np.any(vals <= 0):
        raise ValueError("first_root needs f(u) > 0 on (0, a]; "
                         f"f({us[np.argmax(vals <= 0)]:.6g}) <= 0")


def first_root(problem: RadialProblem, a: float, config: IvpConfig = IvpConfig(), require_positive_f=True) -> RootOutcome:
    """Shoot from ``u(0) = a`` and locate the first zero of ``u``.

    With ``require_positive_f=False`` the positivity check on ``f`` is skipped
    and the shot stops early (status ``"turned"``) as soon as ``u'`` reaches
    zero with ``u > 0``; this is the mode used for sign-changing
    nonlinearities such as cubics.
    """
    _check_alpha(problem)
    if not a > 0:
        raise ValueError(f"initial height must be positive, got {a}")
    if require_positive_f:
        _check_positive_f(problem, a)
    prof, rho, status = _Trajectory(problem, a, config).run(
        config.r_max, stop_at_root=True, stop_on_turn=not require_positive_f
    )
    return RootOutcome(status, rho, prof, config.r_max)


def integrate_coulomb(problem: RadialProblem, a: float, config: IvpConfig = IvpConfig(), r_end=None,
                      stop_at_root=False) -> Profile:
    """Coulomb case ``alpha = -1`` in two dimensions: ``u(0) = a, u'(0) = -lam f(a)``.

    Only ``f = e^u`` has a known closed form to compare with; other
    nonlinearities are accepted but that initial slope is an extrapolation.
    """
    if not problem.coulomb:
        raise ValueError("integrate_coulomb needs a problem with coulomb=True (alpha = -1)")
    if problem.n != 2 or problem.p != 2:
        raise ValueError("the Coulomb initial condition is only set up for n = 2, p = 2")
    r_end = config.r_max if r_end is None else float(r_end)
    prof, _, _ = _Trajectory(problem, a, config).run(r_end, stop_at_root=stop_at_root)
    return prof
