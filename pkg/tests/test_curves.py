import math

import numpy as np
import pytest

from radial_plap.closedform import make_family
from radial_plap.curves import (
    CURVE_CONFIG,
    InsufficientBranch,
    bratu2d_count,
    bratu_pn_count,
    count_solutions_at,
    default_a_grid,
    estimate_asymptote,
    interval_grid,
    lambda_from_rho,
    small_a_scaling_check,
    solutions_at,
    trace_curve,
)
from radial_plap.integrate import IvpConfig, first_root, integrate_ivp
from radial_plap.model import Exponential, Power, RadialProblem


def test_lambda_from_rho():
    assert lambda_from_rho(1.0, 3.3, 0.4) == 1.0
    assert lambda_from_rho(2.0) == 4.0
    np.testing.assert_allclose(lambda_from_rho(np.array([1.0, 2.0]), 3, 1), [1.0, 16.0])
    with pytest.raises(ValueError):
        lambda_from_rho(0.0)
    bratu = RadialProblem(n=2, terms=(Exponential(1, 1),))
    out = first_root(bratu, math.log(8 * (3 + 2 * math.sqrt(2))))
    assert lambda_from_rho(out.rho) == pytest.approx(1.0, abs=1e-8)


def test_grids():
    g = default_a_grid()
    assert g[0] == pytest.approx(0.05) and g[-1] == pytest.approx(3.0) and len(g) == 60
    h = interval_grid(1.0, 3.0, points=50, gap=1e-3)
    assert np.all(np.diff(h) > 0)
    assert 1.0 < h[0] and h[-1] == pytest.approx(3.0 - 2e-3)
    with pytest.raises(ValueError):
        interval_grid(2.0, 1.0)


def test_scaling_exactness():
    # shooting with lam and rescaling r -> r / rho give the same profile
    prob = RadialProblem.powers(3, [3, 7], alpha=0.5)
    out = first_root(prob, 0.8)
    lam = lambda_from_rho(out.rho, 2.0, 0.5)
    scaled = integrate_ivp(prob.with_lambda(lam), 0.8, r_end=1.0)
    s = np.linspace(0, 1, 101)
    np.testing.assert_allclose(scaled(s)[0], out.profile(s * out.rho)[0], atol=1e-9)
    assert abs(scaled.u[-1]) < 1e-8


def test_quartic_pair_shape(quartic_curve):
    c = quartic_curve
    fold = c.folds[0]
    assert fold.kind == "min"
    assert fold.lam == pytest.approx(735.19, rel=1e-4)
    assert c.lam[0] > 1000 * fold.lam
    assert max(p.reshoot_residual for p in c.points) < 1e-8
    assert np.all(np.diff(c.a) > 0)
    k = fold.index
    assert np.all(np.diff(c.lam[: k + 1]) < 0)
    # the remaining folds come in pairs as lam winds up to infinity near a = 2,
    # all of them far above the first one
    rest = c.folds[1:]
    assert rest and all(f.lam > 1e6 * fold.lam for f in rest)
    assert [f.kind for f in rest] == ["max", "min"] * (len(rest) // 2)
    assert all(1.5 < f.a < 2.0 for f in rest)
    assert np.all(np.diff(c.lam[k:rest[0].index + 1]) > 0)
    assert c.a_truncated == pytest.approx(2.0, abs=1e-4)


def test_ground_state_between_roots():
    # heights just either side of 2 both have roots; 2 itself is the ground state
    prob = RadialProblem.powers(3, [4, 7])
    for a in (1.999, 2.001):
        out = first_root(prob, a, CURVE_CONFIG)
        assert out.has_root and out.rho > 1e15
    assert first_root(prob, 2.0, CURVE_CONFIG).status == "no_root"


def test_lower_power_contrast(quartic_curve, cubic_pair_curve):
    f1, f2 = quartic_curve, cubic_pair_curve
    assert f2.folds[0].lam * 10 < f1.folds[0].lam
    assert max(f2.a) > max(f1.a)


def test_counts_around_the_fold(quartic_curve):
    c = quartic_curve
    lf = c.folds[0].lam
    assert count_solutions_at(c, 0.5 * lf) == 0
    assert count_solutions_at(c, lf) == 1
    assert count_solutions_at(c, lf * (1 + 1e-4)) == 1
    assert count_solutions_at(c, 2 * lf) == 2
    assert count_solutions_at(c, 10 * lf) == 2


def test_refined_solutions_hit_the_target(quartic_curve):
    c = quartic_curve
    target = 3 * c.folds[0].lam
    roots = solutions_at(c, target)
    assert len(roots) == 2
    for a in roots:
        rho = first_root(c.problem, a, c.config).rho
        assert rho**2 == pytest.approx(target, rel=1e-6)


def test_critical_power_has_no_curve():
    c = trace_curve(RadialProblem.powers(3, [5]), default_a_grid(0.1, 3.0, 12))
    assert c.points == []
    with pytest.raises(InsufficientBranch):
        estimate_asymptote(c)


def test_subcritical_power_has_no_asymptote():
    c = trace_curve(RadialProblem.powers(3, [4]), default_a_grid(0.1, 5.0, 20))
    assert len(c.points) >= 20
    assert c.folds == []
    assert np.all(np.diff(c.lam) < 0)
    assert c.asymptote is None
    with pytest.raises(InsufficientBranch):
        estimate_asymptote(c)


def test_supercritical_pair_has_no_curve():
    # u^5 + u^9 in three dimensions: both terms at or above the critical power
    c = trace_curve(RadialProblem.powers(3, [5, 9]), default_a_grid(0.1, 3.0, 12))
    assert c.points == []


def test_asymptote_of_first_branch(quartic_curve):
    fit = estimate_asymptote(quartic_curve)
    assert fit.beta == pytest.approx(2.0, abs=2e-3)
    assert fit.rms < 1e-2
    assert fit.npoints >= 5


def test_short_cutoff_hides_the_approach():
    # with a small r_max the shots near 2 look like ground states and the
    # curve stops early, at a fast-decay ground state below 2
    prob = RadialProblem.powers(3, [4, 7])
    c = trace_curve(prob, default_a_grid(0.5, 3.0, 30), IvpConfig(r_max=1e4))
    assert c.a_truncated < 1.7
    assert max(c.a) < 1.6


def test_sign_changing_needs_relaxed_mode():
    cubic = RadialProblem(n=3, terms=(Power(-1, 3), Power(4, 2), Power(-3, 1)))
    with pytest.raises(ValueError):
        trace_curve(cubic, np.linspace(1.5, 2.5, 5))


def test_threads_do_not_change_results():
    prob = RadialProblem.powers(3, [3, 7])
    grid = default_a_grid(0.2, 2.0, 8)
    one = trace_curve(prob, grid, refine_rounds=0, reshoot=False)
    two = trace_curve(prob, grid, refine_rounds=0, reshoot=False, threads=2)
    np.testing.assert_array_equal(one.rho, two.rho)


# exact counts for the Bratu problems


@pytest.mark.parametrize("B, count", [(1.5, 2), (2.0, 1), (2.5, 0)])
def test_bratu2d_count(B, count):
    res = bratu2d_count(B)
    assert res.count == count
    assert res.B_critical == 2.0
    for a in res.a_roots:
        fam = make_family("F4", {"a": a, "B": B})
        assert abs(fam.u(1.0)) < 1e-10


def test_bratu2d_count_at_tangency():
    assert bratu2d_count(2.0).a_roots == pytest.approx([math.sqrt(2)])
    with pytest.raises(ValueError):
        bratu2d_count(0.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bratu_pn_critical_value(n):
    res = bratu_pn_count(n, 1.0)
    assert res.B_critical == pytest.approx(n ** (n - 1), rel=1e-14)
    at = bratu_pn_count(n, n ** (n - 1))
    assert at.count == 1
    assert at.a_roots[0] == pytest.approx(n ** (n - 1), rel=1e-10)
    assert bratu_pn_count(n, 1.01 * n ** (n - 1)).count == 0


def test_bratu_pn_three_dimensions():
    res = bratu_pn_count(3, 1.0)
    assert res.count == 2
    for a in res.a_roots:
        fam = make_family("F8", {"n": 3, "a": a, "B": 1.0})
        assert abs(fam.u(1.0)) < 1e-10
        prof = integrate_ivp(fam.problem, fam.u0, r_end=1.0)
        assert abs(prof.u[-1]) < 1e-8


@pytest.mark.parametrize("B", [0.5, 1.0, 1.5, 2.0, 2.5])
def test_bratu_pn_at_n2_matches_2d(B):
    pn, two = bratu_pn_count(2, B), bratu2d_count(B)
    assert pn.count == two.count
    np.testing.assert_allclose(sorted(pn.a_roots), sorted(math.sqrt(2) * a for a in two.a_roots), rtol=1e-10)


def test_shooting_confirms_bratu_counts():
    bratu = RadialProblem(n=2, terms=(Exponential(1, 1),))
    c = trace_curve(bratu, np.linspace(0.05, 6.0, 60), refine_rounds=1)
    for B, count in [(1.5, 2), (2.5, 0)]:
        # on the unit disc the multiplier plays the role of B
        assert count_solutions_at(c, B) == count
    assert c.folds[0].lam == pytest.approx(2.0, rel=1e-3)


# small-a scaling


@pytest.mark.parametrize("M, p, n", [(4, 2, 3), (9, 3, 4)])
def test_small_a_scaling(M, p, n):
    rep = small_a_scaling_check(M, p, n, np.geomspace(0.1, 0.001, 5))
    assert rep.rel_err[-1] < 0.01
    assert abs(rep.limit_estimate / rep.reference - 1) < 0.01
    assert rep.rel_err[-1] < rep.rel_err[0]


def test_small_a_scaling_constant_sequence_reports_only():
    rep = small_a_scaling_check(4, 2, 3, [1.0, 1.0])
    assert np.isfinite(rep.scaled).all()
    assert rep.limit_estimate == rep.scaled[-1]
