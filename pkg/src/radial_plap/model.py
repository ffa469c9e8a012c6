"""Problem description shared by every other module.

A :class:`RadialProblem` encodes the radial equation

    (phi_p(u'))' + (n-1)/r phi_p(u') + lam * r**alpha * f(u) = 0,

with ``phi_p(z) = z|z|^(p-2)`` and ``f`` a finite sum of power and
exponential terms.  Power terms are evaluated on the positive part of ``u``,
which keeps real exponents free of branch cuts once a trajectory crosses zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence, Union

import numpy as np
from scipy.special import exprel

__all__ = [
    "Power",
    "Exponential",
    "NonlinearTerm",
    "RadialProblem",
    "phi_p",
    "phi_p_inv",
    "eval_f",
    "eval_F",
    "eval_fprime",
    "critical_exponent_weighted",
    "critical_exponent_plap",
    "lin_ni_Q",
    "Event",
    "Profile",
]


@dataclass(frozen=True)
class Power:
    """``coeff * u**exponent`` (evaluated on ``max(u, 0)``)."""

    coeff: float
    exponent: float

    def __post_init__(self):
        if not (math.isfinite(self.coeff) and self.coeff != 0.0):
            raise ValueError(f"power coefficient must be finite and nonzero, got {self.coeff}")
        if not (math.isfinite(self.exponent) and self.exponent > 0.0):
            raise ValueError(f"power exponent must be finite and positive, got {self.exponent}")

    def to_dict(self):
        return {"kind": "power", "coeff": self.coeff, "exponent": self.exponent}


@dataclass(frozen=True)
class Exponential:
    """``coeff * exp(rate * u)``."""

    coeff: float
    rate: float

    def __post_init__(self):
        if not (math.isfinite(self.coeff) and self.coeff != 0.0):
            raise ValueError(f"exponential coefficient must be finite and nonzero, got {self.coeff}")
        if not math.isfinite(self.rate):
            raise ValueError(f"exponential rate must be finite, got {self.rate}")

    def to_dict(self):
        return {"kind": "exponential", "coeff": self.coeff, "rate": self.rate}


NonlinearTerm = Union[Power, Exponential]


def _term_from_dict(d: dict) -> NonlinearTerm:
    kind = d.get("kind")
    if kind == "power":
        return Power(float(d["coeff"]), float(d["exponent"]))
    if kind in ("exponential", "exp"):
        return Exponential(float(d["coeff"]), float(d["rate"]))
    raise ValueError(f"unknown term kind {kind!r}; expected 'power' or 'exponential'")


@dataclass(frozen=True)
class RadialProblem:
    """Immutable description of a radial (p-)Laplacian problem.

    Parameters
    ----------
    n : float
        Dimension, real-valued and > 1 (non-integer values arise from the
        change of variables).
    p : float
        p-Laplacian exponent, > 1.  ``p = 2`` is the ordinary Laplacian.
    alpha : float
        Power of the ``r**alpha`` weight.  Must be > -1 unless ``coulomb`` is
        set, in which case it must equal -1.
    terms : tuple of Power / Exponential
        Nonlinearity ``f(u)`` as a sum of terms.
    lam : float
        Positive multiplier in front of the weighted nonlinearity.
    coulomb : bool
        Marks the Coulomb case ``alpha = -1``.
    """

    n: float
    p: float = 2.0
    alpha: float = 0.0
    terms: tuple = field(default_factory=tuple)
    lam: float = 1.0
    coulomb: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.n > 1:
            raise ValueError(f"dimension n must be > 1, got {self.n}")
        if not self.p > 1:
            raise ValueError(f"p must be > 1, got {self.p}")
        if self.coulomb:
            if self.alpha != -1:
                raise ValueError("coulomb mode requires alpha == -1 exactly")
        elif not self.alpha > -1:
            raise ValueError(f"alpha must be > -1 (got {self.alpha}); use coulomb=True for alpha = -1")
        if not self.terms:
            raise ValueError("nonlinearity needs at least one term")
        for t in self.terms:
            if not isinstance(t, (Power, Exponential)):
                raise TypeError(f"unsupported term {t!r}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError(f"lambda must be positive, got {self.lam}")

    # convenience constructors / modifiers

    @classmethod
    def powers(cls, n, exponents, p=2.0, alpha=0.0, lam=1.0, coeffs=None):
        """Problem with ``f(u) = sum coeffs[i] * u**exponents[i]``."""
        if coeffs is None:
            coeffs = [1.0] * len(exponents)
        terms = tuple(Power(float(c), float(e)) for c, e in zip(coeffs, exponents))
        return cls(n=n, p=p, alpha=alpha, terms=terms, lam=lam)

    def with_lambda(self, lam: float) -> "RadialProblem":
        return RadialProblem(self.n, self.p, self.alpha, self.terms, lam, self.coulomb)

    def replace(self, **changes) -> "RadialProblem":
        kw = dict(n=self.n, p=self.p, alpha=self.alpha, terms=self.terms, lam=self.lam, coulomb=self.coulomb)
        kw.update(changes)
        return RadialProblem(**kw)

    @property
    def has_exponential(self) -> bool:
        return any(isinstance(t, Exponential) for t in self.terms)

    def f(self, u):
        return eval_f(self, u)

    def F(self, u):
        return eval_F(self, u)

    # JSON round trip

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "p": self.p,
            "alpha": self.alpha,
            "lambda": self.lam,
            "terms": [t.to_dict() for t in self.terms],
        }
        if self.coulomb:
            d["coulomb"] = True
        return d

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "RadialProblem":
        if not isinstance(d, dict):
            raise ValueError("problem spec must be a JSON object")
        missing = {"n", "terms"} - set(d)
        if missing:
            raise ValueError(f"problem spec is missing keys: {sorted(missing)}")
        unknown = set(d) - {"n", "p", "alpha", "lambda", "terms", "coulomb"}
        if unknown:
            raise ValueError(f"problem spec has unknown keys: {sorted(unknown)}")
        return cls(
            n=float(d["n"]),
            p=float(d.get("p", 2.0)),
            alpha=float(d.get("alpha", 0.0)),
            terms=tuple(_term_from_dict(t) for t in d["terms"]),
            lam=float(d.get("lambda", 1.0)),
            coulomb=bool(d.get("coulomb", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "RadialProblem":
        return cls.from_dict(json.loads(text))


def phi_p(z, p):
    """``z * |z|**(p - 2)``, with ``phi_p(0) = 0``."""
    z = np.asarray(z, dtype=float)
    out = np.sign(z) * np.abs(z) ** (p - 1.0)
    return out if out.ndim else float(out)


def phi_p_inv(w, p):
    """Inverse of :func:`phi_p`: ``w * |w|**(1/(p-1) - 1)``."""
    w = np.asarray(w, dtype=float)
    out = np.sign(w) * np.abs(w) ** (1.0 / (p - 1.0))
    return out if out.ndim else float(out)


def _checked(val):
    if not np.all(np.isfinite(val)):
        raise OverflowError("nonlinearity overflowed (u out of representable range)")
    return val if np.ndim(val) else float(val)


def eval_f(problem: RadialProblem, u):
    """The term sum ``f(u)`` (without the ``lam * r**alpha`` factor)."""
    u = np.asarray(u, dtype=float)
    up = np.maximum(u, 0.0)
    total = np.zeros_like(u)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in problem.terms:
            if isinstance(t, Power):
                total = total + t.coeff * up**t.exponent
            else:
                total = total + t.coeff * np.exp(t.rate * u)
    return _checked(total)


def eval_fprime(problem: RadialProblem, u):
    """``df/du``; power terms with exponent < 1 are singular at 0."""
    u = np.asarray(u, dtype=float)
    up = np.maximum(u, 0.0)
    total = np.zeros_like(u)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for t in problem.terms:
            if isinstance(t, Power):
                total = total + t.coeff * t.exponent * up ** (t.exponent - 1.0)
            else:
                total = total + t.coeff * t.rate * np.exp(t.rate * u)
    return total if total.ndim else float(total)


def eval_F(problem: RadialProblem, u):
    """Antiderivative of :func:`eval_f` in ``u`` with ``F(0) = 0``."""
    u = np.asarray(u, dtype=float)
    up = np.maximum(u, 0.0)
    total = np.zeros_like(u)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in problem.terms:
            if isinstance(t, Power):
                total = total + t.coeff * up ** (t.exponent + 1.0) / (t.exponent + 1.0)
            else:
                # (e^{k u} - 1)/k without the division, so tiny rates are safe
                total = total + t.coeff * u * exprel(t.rate * u)
    return _checked(total)


def critical_exponent_weighted(n: float, alpha: float = 0.0) -> float:
    """Critical power ``(n + 2 + 2 alpha) / (n - 2)`` for ``r**alpha u**q``."""
    if not n > 2:
        raise ValueError(f"critical exponent needs n > 2, got {n}")
    return (n + 2.0 + 2.0 * alpha) / (n - 2.0)


def critical_exponent_plap(n: float, p: float) -> float:
    """Critical power ``((p-1) n + p) / (n - p)`` of the radial p-Laplacian."""
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    if not n > p:
        raise ValueError(f"critical exponent needs n > p, got n={n}, p={p}")
    return ((p - 1.0) * n + p) / (n - p)


def lin_ni_Q(M: float, p: float) -> float:
    """Upper power ``Q = (M p - p + 1)/(p - 1)`` paired with ``u**M``."""
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    if not M > p - 1:
        raise ValueError(f"need M > p - 1 for Q > M (M={M}, p={p})")
    return (M * p - p + 1.0) / (p - 1.0)


def problem_hash(problem: RadialProblem) -> str:
    """Stable sha256 of the canonical JSON form."""
    import hashlib

    text = json.dumps(problem.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def as_problem(obj: Any) -> RadialProblem:
    if isinstance(obj, RadialProblem):
        return obj
    if isinstance(obj, str):
        return RadialProblem.from_json(obj)
    return RadialProblem.from_dict(obj)


def terms_from_pairs(pairs: Sequence[tuple]) -> tuple:
    """``[("power", c, e), ("exp", c, k)]`` -> term tuple."""
    out = []
    for kind, c, x in pairs:
        out.append(Power(c, x) if kind == "power" else Exponential(c, x))
    return tuple(out)


@dataclass(frozen=True)
class Event:
    """Something that happened along a trajectory.

    ``kind`` is one of ``"first_root"``, ``"reached_rmax"``,
    ``"slope_violation"`` (u' turned positive while u > 0).
    """

    kind: str
    r: float


@dataclass
class Profile:
    """Sampled radial solution ``(r, u, u')`` with optional dense output.

    ``dense`` maps an array of radii to ``(u, uprime)`` anywhere inside
    ``[r[0], r[-1]]``; integrator profiles and closed-form profiles both
    provide one.
    """

    r: np.ndarray
    u: np.ndarray
    uprime: np.ndarray
    events: list = field(default_factory=list)
    dense: Any = None
    w: Any = None

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.u = np.asarray(self.u, dtype=float)
        self.uprime = np.asarray(self.uprime, dtype=float)
        if not (self.r.shape == self.u.shape == self.uprime.shape):
            raise ValueError("r, u and uprime must have equal shapes")
        if self.r.size and (self.r[0] < 0 or np.any(np.diff(self.r) <= 0)):
            raise ValueError("profile radii must be nonnegative and strictly increasing")

    def __call__(self, r):
        """``(u, uprime)`` at ``r`` from dense output (or linear interpolation)."""
        r = np.asarray(r, dtype=float)
        if self.dense is not None:
            return self.dense(r)
        return np.interp(r, self.r, self.u), np.interp(r, self.r, self.uprime)

    @property
    def r_end(self) -> float:
        return float(self.r[-1])

    def event(self, kind: str):
        for e in self.events:
            if e.kind == kind:
                return e
        return None

    def to_csv_rows(self):
        return zip(self.r, self.u, self.uprime)
