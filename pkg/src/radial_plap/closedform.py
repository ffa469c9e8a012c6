"""Catalog of explicit radial solutions and a residual oracle.

Ten families are available through :func:`make_family`:

====  ===========================================================================
F1    weighted critical power ``u'' + (n-1)/r u' + r^a u^((n+2+2a)/(n-2)) = 0``
F2    ``r^a (-u^q + u^(2q-1))``, both powers subcritical
F3    ``r^a (u^q + u^(2q-1))`` (Lin-Ni type), ``q > (n+a)/(n-2)``
F4    two-dimensional Bratu ``u'' + u'/r + B e^u = 0``
F5    ``(n-2) e^u + B e^(2u)``, solution ``ln(2/(r^2+B))``
F6    p-Laplacian critical power ground state
F7    p-Laplacian ``u^M + u^Q`` with ``Q = (Mp-p+1)/(p-1)``
F8    p-Laplacian Bratu with ``p = n``
F9    weighted Bratu ``u'' + u'/r + r^a e^u = 0``
F10   Coulomb Bratu ``u'' + u'/r + e^u / r = 0``, ``u'(0) = -e^(u(0))``
====  ===========================================================================

Every family carries hand-derived ``u'`` and ``u''`` so that
:func:`residual_max` never touches the integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    Exponential,
    Power,
    Profile,
    RadialProblem,
    critical_exponent_plap,
    critical_exponent_weighted,
    eval_f,
    lin_ni_Q,
    phi_p,
)

__all__ = [
    "ValidityViolation",
    "ClosedFormFamily",
    "FAMILY_IDS",
    "make_family",
    "eval_u",
    "eval_uprime",
    "residual",
    "residual_max",
    "weighted_bratu_u",
]

FAMILY_IDS = ("F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10")


class ValidityViolation(ValueError):
    """Raised when family parameters fail the family's validity predicate."""


# --- profile shapes ----------------------------------------------------------
# Two shapes cover the whole catalog:
#   rational power   u = (A / (1 + K r^g))^e
#   logarithmic      u = s - c ln(B0 + K r^g)


@dataclass(frozen=True)
class _RationalPower:
    A: float
    K: float
    g: float
    e: float

    def u(self, r):
        return (self.A / (1.0 + self.K * r**self.g)) ** self.e

    def _logderiv(self, r):
        D = 1.0 + self.K * r**self.g
        L = -self.e * self.K * self.g * r ** (self.g - 1.0) / D
        with np.errstate(divide="ignore", invalid="ignore"):
            dL = -self.e * self.K * self.g * (
                (self.g - 1.0) * r ** (self.g - 2.0) / D - self.K * self.g * r ** (2 * self.g - 2.0) / D**2
            )
        return L, dL

    def du(self, r):
        L, _ = self._logderiv(r)
        return self.u(r) * L

    def d2u(self, r):
        L, dL = self._logderiv(r)
        return self.u(r) * (L * L + dL)


@dataclass(frozen=True)
class _Logarithmic:
    s: float
    c: float
    B0: float
    K: float
    g: float

    def _D(self, r):
        return self.B0 + self.K * r**self.g

    def u(self, r):
        if self.B0 == 1.0:
            return self.s - self.c * np.log1p(self.K * r**self.g)
        D = self._D(r)
        if np.any(D <= 0):
            raise ValueError("radius outside the family's domain (B + K r^g <= 0)")
        return self.s - self.c * np.log(D)

    def du(self, r):
        return -self.c * self.K * self.g * r ** (self.g - 1.0) / self._D(r)

    def d2u(self, r):
        D = self._D(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            first = (self.g - 1.0) * r ** (self.g - 2.0) / D if self.g != 1.0 else 0.0
        return -self.c * self.K * self.g * (first - self.K * self.g * r ** (2 * self.g - 2.0) / D**2)


@dataclass(frozen=True)
class ClosedFormFamily:
    """One member of an explicit solution family.

    ``params`` holds the named parameters (including derived ones such as the
    ansatz constant ``a``), ``problem`` the equation the member solves.
    """

    family_id: str
    params: dict
    problem: RadialProblem
    shape: object = field(repr=False)
    r_min: float = 0.0

    def u(self, r):
        r = self._check(r)
        out = self.shape.u(r)
        return out if np.ndim(out) else float(out)

    def uprime(self, r):
        r = self._check(r)
        out = self.shape.du(r)
        return out if np.ndim(out) else float(out)

    def usecond(self, r):
        r = self._check(r)
        out = self.shape.d2u(r)
        return out if np.ndim(out) else float(out)

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("radius must be nonnegative")
        if self.r_min > 0 and np.any(r <= self.r_min):
            raise ValueError(f"{self.family_id} is only defined for r > {self.r_min}")
        return r

    @property
    def u0(self) -> float:
        return self.u(0.0)

    def profile(self, r_grid) -> Profile:
        """Closed-form :class:`Profile` with exact dense output."""
        r = np.asarray(r_grid, dtype=float)
        return Profile(r, self.u(r), self.uprime(r), dense=lambda x: (self.u(x), self.uprime(x)))


def _need(params, *names):
    missing = [k for k in names if k not in params]
    if missing:
        raise ValidityViolation(f"missing parameters {missing}")
    return [float(params[k]) for k in names]


def _exp_problem(n, p=2.0, alpha=0.0, lam=1.0, coulomb=False):
    return RadialProblem(n=n, p=p, alpha=alpha, terms=(Exponential(1.0, 1.0),), lam=lam, coulomb=coulomb)


def _f1(params):
    n, a = _need(params, "n", "a")
    alpha = float(params.get("alpha", 0.0))
    if not n > 2:
        raise ValidityViolation(f"F1 requires n > 2 (n={n})")
    if not alpha > -1:
        raise ValidityViolation(f"F1 requires alpha > -1 (alpha={alpha})")
    if not a > 0:
        raise ValidityViolation(f"F1 requires a > 0 (a={a})")
    q = critical_exponent_weighted(n, alpha)
    shape = _RationalPower(A=a * (n + alpha), K=(n + alpha) / (n - 2) * a * a, g=2 + alpha, e=(n - 2) / (2 + alpha))
    prob = RadialProblem(n=n, alpha=alpha, terms=(Power(1.0, q),))
    return dict(n=n, alpha=alpha, a=a, q=q), prob, shape


def _two_power(params, sign):
    n = _need(params, "n")[0]
    if "q" in params:
        q = float(params["q"])
    elif "p" in params:
        q = float(params["p"])
    else:
        raise ValidityViolation("missing parameter 'q' (the lower power)")
    alpha = float(params.get("alpha", 0.0))
    fid = "F2" if sign < 0 else "F3"
    if not n > 2:
        raise ValidityViolation(f"{fid} requires n > 2 (n={n})")
    if not q > 1:
        raise ValidityViolation(f"{fid} requires q > 1 (q={q})")
    if not alpha > -1:
        raise ValidityViolation(f"{fid} requires alpha > -1 (alpha={alpha})")
    threshold = (n + alpha) / (n - 2)
    if sign < 0:
        if not q < threshold:
            raise ValidityViolation(f"F2 requires q < (n+alpha)/(n-2) = {threshold} (q={q}); both powers must be subcritical")
        a = (q - 1) / (alpha - n * q + n + 2 * q)
        A = a * (n + alpha) + 1
    else:
        if not q > threshold:
            raise ValidityViolation(f"F3 requires q > (n+alpha)/(n-2) = {threshold} (q={q})")
        a = (q - 1) / (n * q - n - 2 * q - alpha)
        A = a * (n + alpha) - 1
    shape = _RationalPower(A=A, K=q * a * a, g=2 + alpha, e=1 / (q - 1))
    prob = RadialProblem(n=n, alpha=alpha, terms=(Power(float(sign), q), Power(1.0, 2 * q - 1)))
    return dict(n=n, q=q, alpha=alpha, a=a), prob, shape


def _f4(params):
    a, B = _need(params, "a", "B")
    if not (a > 0 and B > 0):
        raise ValidityViolation(f"F4 requires a > 0 and B > 0 (a={a}, B={B})")
    shape = _Logarithmic(s=2 * math.log(2 * math.sqrt(2) * a), c=2.0, B0=B, K=a * a, g=2.0)
    return dict(n=2.0, a=a, B=B), _exp_problem(2.0, lam=B), shape


def _f5(params):
    n, B = _need(params, "n", "B")
    terms = []
    if n - 2 != 0:
        terms.append(Exponential(n - 2, 1.0))
    if B != 0:
        terms.append(Exponential(B, 2.0))
    if not terms:
        raise ValidityViolation("F5 with n = 2 and B = 0 has an empty nonlinearity")
    prob = RadialProblem(n=n, terms=tuple(terms))
    shape = _Logarithmic(s=math.log(2.0), c=1.0, B0=B, K=1.0, g=2.0)
    # B <= 0 removes a neighbourhood of the origin (B = 0: just r = 0)
    r_min = math.sqrt(-B) if B < 0 else (0.0 if B > 0 else np.finfo(float).tiny)
    return dict(n=n, B=B), prob, shape, r_min


def _f6(params):
    n, p, a = _need(params, "n", "p", "a")
    if not (p > 1 and n > p):
        raise ValidityViolation(f"F6 requires n > p > 1 (n={n}, p={p})")
    if not a > 0:
        raise ValidityViolation(f"F6 requires a > 0 (a={a})")
    q = critical_exponent_plap(n, p)
    g = p / (p - 1)
    shape = _RationalPower(A=a * n, K=(p - 1) * a**g * n / (n - p), g=g, e=(n - p) / p)
    prob = RadialProblem(n=n, p=p, terms=(Power(1.0, q),))
    return dict(n=n, p=p, a=a, q=q, s=n * (p - 1) / (n - p)), prob, shape


def _f7(params):
    n, p, M = _need(params, "n", "p", "M")
    if not (p > 1 and n > p):
        raise ValidityViolation(f"F7 requires n > p > 1 (n={n}, p={p})")
    if not M > p - 1:
        raise ValidityViolation(f"F7 requires M > p - 1 (M={M}, p={p})")
    bound = (n * p - n) / (n - p)
    if not M > bound:
        raise ValidityViolation(f"F7 requires M > (np-n)/(n-p) = {bound} (M={M}); otherwise a*n > 1 fails")
    Q = lin_ni_Q(M, p)
    a = (M - p + 1) / (M * n - p * n + n - M * p)
    g = p / (p - 1)
    shape = _RationalPower(A=a * n - 1, K=a**g * M, g=g, e=(p - 1) / (M - p + 1))
    prob = RadialProblem(n=n, p=p, terms=(Power(1.0, M), Power(1.0, Q)))
    return dict(n=n, p=p, M=M, Q=Q, a=a), prob, shape


def _f8(params, variant="corrected"):
    n, a, B = _need(params, "n", "a", "B")
    if not n > 1:
        raise ValidityViolation(f"F8 requires n > 1 (n={n})")
    if not (a > 0 and B > 0):
        raise ValidityViolation(f"F8 requires a > 0 and B > 0 (a={a}, B={B})")
    g = n / (n - 1)
    if variant == "corrected":
        coeff = (n - 1) / n
    elif variant == "printed":
        coeff = n / (n - 1)
    else:
        raise ValueError(f"unknown F8 variant {variant!r}")
    shape = _Logarithmic(s=n * math.log(a * n), c=n, B0=B, K=coeff * a**g, g=g)
    return dict(n=n, a=a, B=B), _exp_problem(n, p=n, lam=B), shape


def weighted_bratu_u(r, a, alpha):
    """``a - 2 ln(1 + e^a r^(alpha+2) / (8 (1+alpha/2)^2))`` for any alpha > -2.

    Plain evaluation with no validity restriction beyond ``alpha > -2``; the
    strongly singular range ``alpha < -1`` is only reachable here.
    """
    if not alpha > -2:
        raise ValueError("alpha must exceed -2")
    r = np.asarray(r, dtype=float)
    return a - 2.0 * np.log1p(math.exp(a) * r ** (alpha + 2) / (8.0 * (1 + alpha / 2) ** 2))


def _f9(params):
    a, alpha = _need(params, "a", "alpha")
    if not alpha > -1:
        raise ValidityViolation(f"F9 requires alpha > -1 (alpha={alpha})")
    shape = _Logarithmic(s=a, c=2.0, B0=1.0, K=math.exp(a) / (8 * (1 + alpha / 2) ** 2), g=alpha + 2)
    return dict(n=2.0, a=a, alpha=alpha), _exp_problem(2.0, alpha=alpha), shape


def _f10(params):
    (a,) = _need(params, "a")
    shape = _Logarithmic(s=a, c=2.0, B0=1.0, K=math.exp(a) / 2, g=1.0)
    return dict(n=2.0, a=a, alpha=-1.0), _exp_problem(2.0, alpha=-1.0, coulomb=True), shape


def make_family(family_id: str, params: dict, variant: str = "corrected") -> ClosedFormFamily:
    """Build a family member, checking its validity predicate.

    Parameters
    ----------
    family_id : str
        ``"F1"`` ... ``"F10"``.
    params : dict
        F1: n, a, alpha.  F2/F3: n, q (lower power; ``p`` accepted as alias),
        alpha.  F4: a, B.  F5: n, B.  F6: n, p, a.  F7: n, p, M.  F8: n, a, B.
        F9: a, alpha.  F10: a.
    variant : str
        Only used by F8: ``"corrected"`` (default) or ``"printed"``, the
        latter being a deliberately wrong coefficient kept for negative tests.

    Raises
    ------
    ValidityViolation
    """
    fid = family_id.upper()
    r_min = 0.0
    if fid == "F1":
        info, prob, shape = _f1(params)
    elif fid == "F2":
        info, prob, shape = _two_power(params, -1)
    elif fid == "F3":
        info, prob, shape = _two_power(params, +1)
    elif fid == "F4":
        info, prob, shape = _f4(params)
    elif fid == "F5":
        info, prob, shape, r_min = _f5(params)
    elif fid == "F6":
        info, prob, shape = _f6(params)
    elif fid == "F7":
        info, prob, shape = _f7(params)
    elif fid == "F8":
        info, prob, shape = _f8(params, variant)
    elif fid == "F9":
        info, prob, shape = _f9(params)
    elif fid == "F10":
        info, prob, shape = _f10(params)
    else:
        raise ValueError(f"unknown family {family_id!r}; expected one of {FAMILY_IDS}")
    if isinstance(shape, _RationalPower) and not shape.A > 0:
        raise ValidityViolation(f"{fid}: profile would not be positive (numerator {shape.A})")
    return ClosedFormFamily(fid, info, prob, shape, r_min)


def eval_u(family: ClosedFormFamily, r):
    return family.u(r)


def eval_uprime(family: ClosedFormFamily, r):
    return family.uprime(r)


def residual(family: ClosedFormFamily, r):
    """Pointwise ``(phi_p(u'))' + (n-1)/r phi_p(u') + lam r^alpha f(u)``."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("residual grid must exclude r = 0")
    prob = family.problem
    p, n = prob.p, prob.n
    du = family.uprime(r)
    d2u = family.usecond(r)
    if p == 2.0:
        flux_prime = d2u
    else:
        flux_prime = (p - 1.0) * np.abs(du) ** (p - 2.0) * d2u
    return flux_prime + (n - 1.0) / r * phi_p(du, p) + prob.lam * r**prob.alpha * eval_f(prob, family.u(r))


def residual_max(family: ClosedFormFamily, r_grid) -> float:
    """Largest absolute residual of the family's ODE over ``r_grid``."""
    return float(np.max(np.abs(residual(family, r_grid))))
