"""End-to-end acceptance checks.

Each test prints one ``criterion N: PASS`` or ``criterion N: FAIL (...)``
line and then asserts.  Every sub-check is evaluated before asserting, so a
failing line lists everything that went wrong.
"""

import math
import time

import numpy as np
import pytest

from conftest import FAMILIES, RESIDUAL_GRID, draw_params, two_power_problem
from radial_plap.closedform import make_family, residual_max
from radial_plap.curves import (
    bratu2d_count,
    bratu_pn_count,
    count_solutions_at,
    default_a_grid,
    estimate_asymptote,
    small_a_scaling_check,
    trace_curve,
)
from radial_plap.integrate import first_root, integrate_coulomb, integrate_ivp
from radial_plap.model import Exponential, Power, RadialProblem
from radial_plap.pohozaev import Criticality, classify_power, pohozaev_P, pohozaev_Pprime, pohozaev_scan
from radial_plap.transform import make_cov, solve_via_cov


def _report(capsys, number, checks):
    """``checks`` maps a short description to a bool."""
    failed = [name for name, ok in checks.items() if not ok]
    line = f"criterion {number}: " + ("PASS" if not failed else "FAIL (" + "; ".join(failed) + ")")
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


def test_criterion_1_closed_form_residuals(capsys):
    t0 = time.perf_counter()
    worst = {}
    rng = np.random.default_rng(2024)
    for fid in FAMILIES:
        worst[fid] = max(residual_max(make_family(fid, draw_params(fid, rng)), RESIDUAL_GRID) for _ in range(20))
    elapsed = time.perf_counter() - t0
    checks = {f"{fid} residual {w:.1e} >= 1e-8": w < 1e-8 for fid, w in worst.items()}
    checks[f"runtime {elapsed:.1f} s >= 10 s"] = elapsed < 10
    _report(capsys, 1, checks)


def test_criterion_2_aubin_talenti(capsys):
    fam = make_family("F1", {"n": 3, "a": 1, "alpha": 0})
    prob = RadialProblem.powers(3, [5])
    out = first_root(prob, math.sqrt(3))
    r = np.linspace(1e-6, 10, 2001)
    err = float(np.max(np.abs(out.profile(r)[0] - fam.u(r))))
    _report(capsys, 2, {
        f"sup error {err:.1e} >= 1e-7": err < 1e-7,
        f"status {out.status} instead of no_root up to 1e3": out.status == "no_root" and out.r_max == 1e3,
    })


def test_criterion_3_bratu_2d_counts(capsys):
    checks = {}
    bratu = RadialProblem(n=2, terms=(Exponential(1, 1),))
    curve = trace_curve(bratu, np.linspace(0.05, 6.0, 60))
    for B, expected in [(1.5, 2), (2.0, 1), (2.5, 0)]:
        res = bratu2d_count(B)
        checks[f"B={B}: count {res.count} != {expected}"] = res.count == expected
        u1 = max((abs(make_family("F4", {"a": a, "B": B}).u(1.0)) for a in res.a_roots), default=0.0)
        checks[f"B={B}: |u(1)| {u1:.1e} >= 1e-10"] = u1 < 1e-10
        shot = count_solutions_at(curve, B)
        checks[f"B={B}: shooting finds {shot} != {expected}"] = shot == expected
    _report(capsys, 3, checks)


def test_criterion_4_bratu_pn(capsys):
    checks = {}
    checks["B_critical(2) != 2"] = bratu_pn_count(2, 1.0).B_critical == 2.0
    for n in (2, 3, 4):
        bc = bratu_pn_count(n, 1.0).B_critical
        checks[f"B_critical({n}) = {bc} != {n ** (n - 1)}"] = bc == pytest.approx(n ** (n - 1), rel=1e-14)
        for B in (0.5 * n ** (n - 1), n ** (n - 1)):
            for a in bratu_pn_count(n, B).a_roots:
                fam = make_family("F8", {"n": n, "a": a, "B": B})
                u1 = abs(float(integrate_ivp(fam.problem, fam.u0, r_end=1.0).u[-1]))
                checks[f"n={n} B={B} a={a:.4g}: shot |u(1)| {u1:.1e} >= 1e-8"] = u1 < 1e-8
    printed = residual_max(make_family("F8", {"n": 3, "a": 1, "B": 1}, variant="printed"), np.geomspace(1e-3, 10, 200))
    checks[f"printed coefficient residual {printed:.2g} not of order 1"] = printed > 0.1
    _report(capsys, 4, checks)


def test_criterion_5_quartic_pair_curve(capsys):
    t0 = time.perf_counter()
    curve = trace_curve(two_power_problem(4), default_a_grid(), threads=1)
    elapsed = time.perf_counter() - t0
    checks = {f"{len(curve.folds)} folds, expected exactly one": len(curve.folds) == 1}
    lf = curve.folds[0].lam if curve.folds else math.nan
    n10 = count_solutions_at(curve, 10 * lf) if curve.folds else -1
    checks[f"{n10} solutions at 10 x lam_fold, expected 2"] = n10 == 2
    try:
        beta = estimate_asymptote(curve).beta
    except ValueError:
        beta = math.nan
    checks[f"asymptote {beta:.4f} outside 2 +- 0.02"] = abs(beta - 2.0) <= 0.02
    ratio = curve.lam[0] / lf
    checks[f"lam(a_min) / lam_fold = {ratio:.3g} <= 1e3"] = ratio > 1e3
    res = max(p.reshoot_residual for p in curve.points)
    checks[f"re-shoot residual {res:.1e} >= 1e-8"] = res < 1e-8
    checks[f"runtime {elapsed:.0f} s >= 120 s"] = elapsed < 120
    _report(capsys, 5, checks)


def test_criterion_6_cubic_pair_curve(capsys, quartic_curve, cubic_pair_curve):
    f1, f2 = quartic_curve, cubic_pair_curve
    beta1 = estimate_asymptote(f1).beta
    ratio = f1.folds[0].lam / f2.folds[0].lam
    checks = {
        f"fold ratio {ratio:.3g} < 10": ratio >= 10,
        f"max u(0) {f2.a.max():.3g} <= {beta1:.3g}": f2.a.max() > beta1,
    }
    for mult in (10, 100):
        lam = mult * f2.folds[0].lam
        count = count_solutions_at(f2, lam)
        checks[f"{count} solution(s) at lam = {lam:.4g}, expected 2"] = count == 2
    res = max(p.reshoot_residual for p in f2.points)
    checks[f"re-shoot residual {res:.1e} >= 1e-8"] = res < 1e-8
    _report(capsys, 6, checks)


def test_criterion_7_small_a_scaling(capsys):
    checks = {}
    for M, p, n in [(4, 2, 3), (9, 3, 4)]:
        rep = small_a_scaling_check(M, p, n, np.geomspace(0.1, 0.001, 5))
        err = float(rep.rel_err[-1])
        checks[f"(M={M}, p={p}, n={n}): relative error {err:.2%} >= 1%"] = err < 0.01
    _report(capsys, 7, checks)


def test_criterion_8_pohozaev(capsys):
    checks = {}
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(10):
        prob = RadialProblem(n=rng.uniform(2.5, 5), alpha=float(i % 2), lam=rng.uniform(0.5, 3),
                             terms=(Power(1, rng.uniform(1.5, 4)), Power(rng.uniform(0.1, 2), rng.uniform(4, 8))))
        out = first_root(prob, rng.uniform(0.3, 1.5))
        top = out.rho if out.has_root else 10.0
        worst = max(worst, max(s.mismatch() for s in pohozaev_scan(prob, out.profile, np.linspace(0.05, 0.95, 25) * top)))
    checks[f"P' mismatch {worst:.1e} >= 1e-4"] = worst < 1e-4
    r = np.geomspace(1e-3, 20, 300)
    for fid in ("F1", "F6"):
        for _ in range(5):
            fam = make_family(fid, draw_params(fid, rng))
            P = pohozaev_P(fam.problem, r, fam.u(r), fam.uprime(r))
            dev = float(np.max(np.abs(P) / (1 + r ** fam.problem.n)))
            checks[f"{fid} {fam.params}: |P| / (1 + r^n) {dev:.1e} >= 1e-6"] = dev < 1e-6
    expected_sign = {Criticality.Subcritical: 1, Criticality.Critical: 0, Criticality.Supercritical: -1}
    for q in (4, 5, 6):
        prob = RadialProblem.powers(3, [q])
        rr = np.linspace(0.1, 4, 60)
        u = integrate_ivp(prob, 1.0, r_end=4.0)(rr)[0]
        dP = pohozaev_Pprime(prob, rr, u)
        tol = 1e-12 * float(np.max(np.abs(rr**3 * u ** (q + 1))))
        sign = set(np.where(np.abs(dP) <= tol, 0, np.sign(dP)).astype(int))
        want = expected_sign[classify_power(3, 2, 0, q)]
        checks[f"q={q}: sign of P' {sorted(sign)} != {want}"] = sign == {want}
    _report(capsys, 8, checks)


def test_criterion_9_change_of_variables(capsys):
    checks = {}
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(20):
        n, p, alpha = rng.uniform(2, 6), rng.uniform(1.1, 4.0), rng.uniform(-0.9, 3.0)
        if make_cov(n, p, alpha).m <= 0:
            continue
        prob = RadialProblem(n=n, p=p, alpha=alpha, terms=(Power(1, 1), Power(1, 2)))
        a = rng.uniform(0.2, 1.5)
        r = np.linspace(0, 2, 41)
        worst = max(worst, float(np.max(np.abs(integrate_ivp(prob, a, r_end=2.0)(r)[0] - solve_via_cov(prob, a, r_end=2.0)(r)[0]))))
    checks[f"direct vs transformed {worst:.1e} >= 1e-6"] = worst < 1e-6
    fam = make_family("F9", {"a": 0.4, "alpha": 0.5})
    r = np.linspace(0, 5, 201)
    err = float(np.max(np.abs(solve_via_cov(fam.problem, fam.u0, r_end=5.0)(r)[0] - fam.u(r))))
    checks[f"F9(alpha=0.5) error {err:.1e} >= 1e-7"] = err < 1e-7
    coulomb = RadialProblem(n=2, alpha=-1, coulomb=True, terms=(Exponential(1, 1),))
    for a in (-1.0, 0.0, 1.5):
        fam = make_family("F10", {"a": a})
        prof = integrate_coulomb(coulomb, a, r_end=10.0)
        err = float(np.max(np.abs(prof(r * 2)[0] - fam.u(r * 2))))
        checks[f"Coulomb a={a}: error {err:.1e} >= 1e-8"] = err < 1e-8
        slope = abs(prof.uprime[0] + math.exp(a))
        checks[f"Coulomb a={a}: u'(0) off by {slope:.1e}"] = slope < 1e-10
    _report(capsys, 9, checks)


def test_criterion_10_cubic(capsys, cubic_curve):
    c = cubic_curve
    lf = c.folds[0].lam if c.folds else math.nan
    count = count_solutions_at(c, 2 * lf) if c.folds else -1
    res = max(p.reshoot_residual for p in c.points)
    _report(capsys, 10, {
        f"{len(c.folds)} folds, expected exactly one": len(c.folds) == 1,
        f"{count} solutions at 2 x lam_fold, expected 2": count == 2,
        f"re-shoot residual {res:.1e} >= 1e-8": res < 1e-8,
    })
