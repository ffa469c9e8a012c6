"""Dirichlet solution curves on the unit ball by shoot-and-scale.

For the ``lam = 1`` problem, shoot from ``u(0) = a`` and find the first root
``rho(a)``.  Then ``v(s) = u(rho s)`` solves the Dirichlet problem on
``[0, 1]`` with multiplier ``lam = rho**(p + alpha)``.  Sweeping ``a`` traces
the curve ``(lam, u(0))``.

Also here: exact solution counts for the Bratu problems, which follow from the
explicit solution families.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, curve_fit

from .integrate import IntegrationError, IvpConfig, first_root, integrate_ivp
from .model import Power, RadialProblem, lin_ni_Q

__all__ = [
    "CurvePoint",
    "Fold",
    "SolutionCurve",
    "InsufficientBranch",
    "AsymptoteFit",
    "lambda_from_rho",
    "default_a_grid",
    "interval_grid",
    "trace_curve",
    "count_solutions_at",
    "solutions_at",
    "estimate_asymptote",
    "bratu2d_count",
    "bratu_pn_count",
    "small_a_scaling_check",
    "CURVE_CONFIG",
]

#: Sweeps need far more room than single shots: small ``a`` has large roots,
#: and near a ground-state height the first root can sit at ``r ~ 1e25``.
#: Step counts grow only logarithmically with ``r_max``.
#: The tiny ``abs_tol`` keeps ``u`` under relative control when it is 1e-20.
CURVE_CONFIG = IvpConfig(r_max=1e30, abs_tol=1e-40)


class InsufficientBranch(ValueError):
    """The upper branch is too short to extrapolate an asymptote."""


@dataclass(frozen=True)
class CurvePoint:
    a: float
    rho: float
    lam: float
    reshoot_residual: float = math.nan


@dataclass(frozen=True)
class Fold:
    a: float
    lam: float
    index: int
    kind: str  # "min" or "max" of lam(a)


@dataclass(frozen=True)
class AsymptoteFit:
    beta: float
    c: float
    gamma: float
    rms: float
    npoints: int


@dataclass
class SolutionCurve:
    points: list
    folds: list
    problem: RadialProblem
    config: IvpConfig
    asymptote: float | None = None
    a_truncated: float | None = None
    failures: list = field(default_factory=list)
    strict: bool = True

    @property
    def a(self):
        return np.array([pt.a for pt in self.points])

    @property
    def lam(self):
        return np.array([pt.lam for pt in self.points])

    @property
    def rho(self):
        return np.array([pt.rho for pt in self.points])


def lambda_from_rho(rho, p=2.0, alpha=0.0):
    """Dirichlet multiplier ``rho**(p + alpha)`` for first root ``rho``."""
    if np.any(np.asarray(rho) <= 0):
        raise ValueError("rho must be positive")
    return np.asarray(rho, dtype=float) ** (p + alpha) if np.ndim(rho) else float(rho) ** (p + alpha)


def default_a_grid(a_min=0.05, a_max=3.0, points=60):
    """Log-spaced grid of initial heights."""
    return np.geomspace(a_min, a_max, points)


def interval_grid(lo, hi, points=80, gap=1e-4):
    """Heights in the open interval ``(lo, hi)``, clustered toward ``hi``.

    The distance to ``hi`` is log-spaced from almost ``hi - lo`` down to
    ``gap * (hi - lo)``.  Useful when ``hi`` is a zero of ``f`` and the first
    root runs off to infinity there.
    """
    if not hi > lo:
        raise ValueError("need hi > lo")
    width = hi - lo
    return np.sort(hi - width * np.geomspace(1.0 - 1e-3, gap, points))


def _shoot(args):
    problem, a, config, strict = args
    try:
        out = first_root(problem, a, config, require_positive_f=strict)
    except IntegrationError as exc:
        return "failed", math.nan, str(exc)
    return out.status, out.rho, ""


def _shoot_many(problem, a_values, config, strict, threads):
    jobs = [(problem, float(a), config, strict) for a in a_values]
    if threads and threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_shoot, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    return [_shoot(j) for j in jobs]


def _reshoot(problem, pt, config):
    prob = problem.with_lambda(pt.lam)
    try:
        prof = integrate_ivp(prob, pt.a, config, r_end=1.0)
    except IntegrationError:
        return math.nan
    return abs(float(prof.u[-1]))


def _find_folds(a, lam):
    folds = []
    if len(a) < 3:
        return folds
    d = np.sign(np.diff(lam))
    for k in range(1, len(a) - 1):
        if d[k - 1] != d[k] and d[k - 1] != 0 and d[k] != 0:
            # vertex of the parabola in log(lam) through three neighbouring points
            x, y = a[k - 1:k + 2], np.log(lam[k - 1:k + 2])
            c2, c1, c0 = np.polyfit(x, y, 2)
            if c2 != 0:
                av = -c1 / (2 * c2)
                av = min(max(av, x[0]), x[2])
                lv = math.exp(c0 + c1 * av + c2 * av * av)
            else:
                av, lv = a[k], lam[k]
            folds.append(Fold(float(av), float(lv), k, "min" if d[k - 1] < 0 else "max"))
    return folds


def _zoom_to_peak(sweep, lo, hi, levels=8, samples=9):
    """Search ``(lo, hi)`` for a height without a root, zooming in on the largest ``rho``.

    Returns ``(a, found)``: the height reached and whether it has no root.
    Between two heights with roots, a ground state shows up as an unbounded
    peak of ``rho``; an ordinary fold is a finite one and the zoom just
    settles on it.
    """
    best = 0.5 * (lo + hi)
    for _ in range(levels):
        xs = np.linspace(lo, hi, samples + 2)[1:-1]
        res = sweep(xs)
        rhos = []
        for x in xs:
            status, rho = res[float(x)]
            if status == "no_root":
                return float(x), True
            rhos.append(rho if status == "root" else -math.inf)
        j = int(np.argmax(rhos))
        best = float(xs[j])
        lo = float(xs[j - 1]) if j > 0 else lo
        hi = float(xs[j + 1]) if j < samples - 1 else hi
    return best, False


def trace_curve(problem: RadialProblem, a_grid=None, config: IvpConfig = CURVE_CONFIG, refine_rounds=2,
                refine_threshold=0.1, strict=True, threads=1, reshoot=True, edge_steps=12) -> SolutionCurve:
    """Trace ``(a, rho(a), lam(a))`` over an increasing grid of initial heights.

    Parameters
    ----------
    problem : RadialProblem
        The multiplier is reset to 1 before shooting.
    a_grid : array_like, optional
        Strictly increasing positive heights; :func:`default_a_grid` if omitted.
    refine_rounds : int
        Rounds of midpoint insertion wherever consecutive ``lam`` values differ
        by more than ``refine_threshold`` (relative).
    strict : bool
        Require ``f > 0`` on ``(0, a]``.  With ``strict=False`` heights whose
        trajectory turns back up before reaching zero are skipped, which is
        what sign-changing nonlinearities need.
    threads : int
        Worker processes for the sweep; results are merged in grid order.
    edge_steps : int
        Bisection steps toward each end of the stretch of heights with a
        root (the height that truncated the sweep, and the last height
        without a root before the first one that has one).

    Heights without a root before ``config.r_max`` are skipped until the first
    point with a root; after that the first such height ends the sweep (it is
    recorded as ``a_truncated``).  A ground state can also hide between two
    grid heights that both have roots, as a peak of ``lam`` that the grid
    cannot tell from a fold.  Each such peak is searched for a height without
    a root, and the first one found ends the sweep the same way.
    """
    problem = problem.with_lambda(1.0)
    grid = default_a_grid() if a_grid is None else np.asarray(a_grid, dtype=float)
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("a_grid must be positive and strictly increasing")
    pe = problem.p + problem.alpha
    failures = []

    def sweep(values):
        found = {}
        for a, (status, rho, msg) in zip(values, _shoot_many(problem, values, config, strict, threads)):
            if status == "failed":
                failures.append((float(a), msg))
            found[float(a)] = (status, rho)
        return found

    results = sweep(grid)
    keep, a_trunc, a_lead, started = [], None, None, False
    for a in grid:
        status, rho = results[float(a)]
        if status == "root":
            started = True
            keep.append((float(a), rho))
        elif status == "no_root" and started:
            a_trunc = float(a)
            break
        elif not started and status != "failed":
            a_lead = float(a)

    k = 1
    while k < len(keep) - 1:
        if keep[k - 1][1] < keep[k][1] > keep[k + 1][1]:
            a_peak, hidden = _zoom_to_peak(sweep, keep[k - 1][0], keep[k + 1][0])
            if hidden:
                keep = [pt for pt in keep if pt[0] < a_peak]
                a_trunc = a_peak
                break
        k += 1

    if a_lead is not None and keep and edge_steps:
        # same on the leading edge, where a branch may start from a ground state
        lo, hi = a_lead, keep[0][0]
        for _ in range(edge_steps):
            mid = 0.5 * (lo + hi)
            status, rho = sweep(np.array([mid]))[mid]
            if status == "root":
                keep.append((mid, rho))
                hi = mid
            else:
                lo = mid
        keep.sort()

    if a_trunc is not None and keep and edge_steps:
        # close in on the truncation edge so the upper branch reaches large lam
        lo, hi = keep[-1][0], a_trunc
        for _ in range(edge_steps):
            mid = 0.5 * (lo + hi)
            status, rho = sweep(np.array([mid]))[mid]
            if status == "root":
                keep.append((mid, rho))
                lo = mid
            else:
                hi = mid
        keep.sort()

    for _ in range(refine_rounds):
        mids = []
        for (a0, r0), (a1, r1) in zip(keep[:-1], keep[1:]):
            l0, l1 = r0**pe, r1**pe
            if abs(l1 - l0) / min(l0, l1) > refine_threshold:
                mids.append(0.5 * (a0 + a1))
        if not mids:
            break
        extra = sweep(np.array(mids))
        for a, (status, rho) in extra.items():
            if status == "root":
                keep.append((a, rho))
        keep.sort()

    points = [CurvePoint(a, rho, rho**pe) for a, rho in keep]
    if reshoot:
        points = [CurvePoint(pt.a, pt.rho, pt.lam, _reshoot(problem, pt, config)) for pt in points]
    a_arr = np.array([pt.a for pt in points])
    lam_arr = np.array([pt.lam for pt in points])
    curve = SolutionCurve(points, _find_folds(a_arr, lam_arr), problem, config, a_truncated=a_trunc,
                          failures=failures, strict=strict)
    try:
        curve.asymptote = estimate_asymptote(curve).beta
    except InsufficientBranch:
        curve.asymptote = None
    return curve


def _nodes(curve: SolutionCurve, lambda_query, tangency_rtol):
    """Piecewise-linear nodes (a, lam - query) with refined folds spliced in."""
    a = curve.a.tolist()
    g = (curve.lam - lambda_query).tolist()
    fold_nodes = set()
    for fold in sorted(curve.folds, key=lambda f: -f.index):
        k = fold.index
        val = fold.lam - lambda_query
        if abs(val) <= tangency_rtol * abs(fold.lam):
            val = 0.0
        a[k], g[k] = fold.a, val
        fold_nodes.add(k)
    return np.array(a), np.array(g), fold_nodes


def _crossings(curve, lambda_query, tangency_rtol):
    a, g, fold_nodes = _nodes(curve, lambda_query, tangency_rtol)
    brackets, exact = [], []
    for j in range(len(a)):
        if g[j] == 0.0:
            exact.append(a[j])
    for j in range(len(a) - 1):
        if g[j] * g[j + 1] < 0:
            brackets.append((a[j], a[j + 1]))
    return brackets, exact


def count_solutions_at(curve: SolutionCurve, lambda_query: float, tangency_rtol=1e-3) -> int:
    """Number of curve crossings of ``lam = lambda_query`` resolved by the grid.

    A query within ``tangency_rtol`` of a fold value counts that fold once.
    """
    if not curve.points:
        raise ValueError("empty curve")
    brackets, exact = _crossings(curve, lambda_query, tangency_rtol)
    return len(brackets) + len(exact)


def solutions_at(curve: SolutionCurve, lambda_query: float, tangency_rtol=1e-3, xtol=1e-8):
    """Initial heights of the solutions at ``lambda_query``, refined by shooting."""
    brackets, exact = _crossings(curve, lambda_query, tangency_rtol)
    pe = curve.problem.p + curve.problem.alpha

    def g(a):
        out = first_root(curve.problem, a, curve.config, require_positive_f=curve.strict)
        return out.rho**pe - lambda_query if out.has_root else math.inf

    roots = list(exact)
    for lo, hi in brackets:
        try:
            roots.append(brentq(g, lo, hi, xtol=xtol))
        except ValueError:
            roots.append(0.5 * (lo + hi))
    return sorted(roots)


def estimate_asymptote(curve: SolutionCurve, min_points=5, min_decades=2.0) -> AsymptoteFit:
    """Extrapolate the upper branch to ``lam -> inf`` with ``a = beta - c lam**(-gamma)``.

    The upper branch runs from the first minimum of ``lam(a)`` to the end of
    the curve, which has to be rising.  On the way up ``lam`` may oscillate
    (a fold pair per turn around a slowly decaying ground state); the fit
    averages over the oscillation and ``rms`` shows how large it is.
    """
    a, lam = curve.a, curve.lam
    if len(a) < min_points:
        raise InsufficientBranch(f"only {len(a)} curve points")
    if lam[-1] <= lam[-2]:
        raise InsufficientBranch("curve ends on a branch where lam decreases with a")
    mins = [f for f in curve.folds if f.kind == "min"]
    start = mins[0].index if mins else 0
    a_up, lam_up = a[start:], lam[start:]
    if len(a_up) < min_points:
        raise InsufficientBranch("no upper branch with enough points")
    span = math.log10(lam_up.max() / lam_up[0])
    if span < min_decades:
        raise InsufficientBranch(f"upper branch spans only {span:.2f} decades of lam")
    # fit the tail, where the asymptotic form applies
    tail = lam_up >= math.sqrt(lam_up[0] * lam_up.max())
    if tail.sum() >= min_points:
        a_up, lam_up = a_up[tail], lam_up[tail]
    x = np.log(lam_up)

    def model(x, beta, logc, gamma):
        return beta - np.exp(logc - gamma * x)

    gap = max(a_up[-1] - a_up[-2], 1e-6)
    p0 = (a_up[-1] + gap, math.log(max(a_up[-1] - a_up[0], 1e-6)) + 0.3 * x[0], 0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        popt, _ = curve_fit(model, x, a_up, p0=p0,
                            bounds=([a_up[-1], -50.0, 1e-4], [a_up[-1] + 10 * (a_up[-1] - a_up[0]) + 1, 50.0, 10.0]),
                            maxfev=20000)
    rms = float(np.sqrt(np.mean((model(x, *popt) - a_up) ** 2)))
    return AsymptoteFit(float(popt[0]), float(math.exp(popt[1])), float(popt[2]), rms, len(a_up))


@dataclass(frozen=True)
class BratuCount:
    count: int
    a_roots: tuple
    B_critical: float


def bratu2d_count(B: float) -> BratuCount:
    """Solutions of ``u'' + u'/r + B e^u = 0, u'(0) = u(1) = 0``.

    They correspond to the positive roots of ``a^2 - 2 sqrt(2) a + B = 0``.
    """
    if not B > 0:
        raise ValueError("B must be positive")
    s2 = math.sqrt(2.0)
    disc = 2.0 - B
    if abs(disc) <= 1e-14:
        return BratuCount(1, (s2,), 2.0)
    if disc < 0:
        return BratuCount(0, (), 2.0)
    d = math.sqrt(disc)
    return BratuCount(2, (s2 - d, s2 + d), 2.0)


def bratu_pn_count(n: float, B: float) -> BratuCount:
    """Solutions of the ``p = n`` Bratu problem on the unit ball.

    Roots of ``((n-1)/n) a^(n/(n-1)) + B = n a``; the left side is convex, so
    the count is 2, 1 or 0 according to ``B`` versus ``B(n) = n^(n-1)``
    (the tangency value, reached at ``a* = n^(n-1)``).
    """
    if not n > 1:
        raise ValueError("n must exceed 1")
    if not B > 0:
        raise ValueError("B must be positive")
    g_exp = n / (n - 1.0)
    a_star = n ** (n - 1.0)
    B_crit = n ** (n - 1.0)

    def g(a):
        return (n - 1.0) / n * a**g_exp + B - n * a

    if abs(B - B_crit) <= 1e-12 * B_crit:
        return BratuCount(1, (a_star,), B_crit)
    if B > B_crit:
        return BratuCount(0, (), B_crit)
    lo = brentq(g, 0.0, a_star, xtol=1e-15, rtol=1e-15)
    hi_end = 2.0 * a_star
    while g(hi_end) < 0:
        hi_end *= 2.0
    hi = brentq(g, a_star, hi_end, xtol=1e-15, rtol=1e-15)
    return BratuCount(2, (lo, hi), B_crit)


@dataclass
class ScalingReport:
    a: np.ndarray
    rho: np.ndarray
    scaled: np.ndarray
    reference: float
    limit_estimate: float
    rel_err: np.ndarray


def small_a_scaling_check(M: float, p: float, n: float, a_seq, config: IvpConfig = IvpConfig()) -> ScalingReport:
    """Compare ``rho(a) a^((M-p+1)/p)`` for ``u^M + u^Q`` with the root of ``w^M``, ``w(0) = 1``.

    Substituting ``u = a w``, ``r = a^(-(M-p+1)/p) s`` turns the two-power
    problem into ``w^M + eps w^Q`` with ``eps = a^(Q-M)``, so the scaled root
    should approach the single-power root as ``a -> 0``.
    """
    Q = lin_ni_Q(M, p)
    k = (M - p + 1.0) / p
    single = RadialProblem(n=n, p=p, terms=(Power(1.0, M),))
    ref = first_root(single, 1.0, config.with_rmax(max(config.r_max, 1e3)))
    if not ref.has_root:
        raise ValueError("single-power problem has no root; the scaling limit is undefined")
    both = RadialProblem(n=n, p=p, terms=(Power(1.0, M), Power(1.0, Q)))
    a_seq = np.asarray(a_seq, dtype=float)
    rho = np.empty_like(a_seq)
    for i, a in enumerate(a_seq):
        cfg = config.with_rmax(max(config.r_max, 100.0 * ref.rho * a ** (-k)))
        out = first_root(both, a, cfg)
        rho[i] = out.rho
    scaled = rho * a_seq**k
    eps = a_seq ** (Q - M)
    if len(a_seq) >= 2 and eps[-1] != eps[-2]:
        # linear extrapolation in eps to eps = 0
        limit = scaled[-1] - eps[-1] * (scaled[-2] - scaled[-1]) / (eps[-2] - eps[-1])
    else:
        limit = scaled[-1]
    return ScalingReport(a_seq, rho, scaled, ref.rho, float(limit), np.abs(scaled / ref.rho - 1.0))
