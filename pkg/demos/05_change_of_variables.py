# Removing the weight r^alpha, and a sign-changing nonlinearity traced with it.
import numpy as np

from radial_plap import Power, RadialProblem, count_solutions_at, integrate_ivp, make_cov, solve_via_cov
from radial_plap.curves import interval_grid
from radial_plap.transform import trace_curve_via_cov

cov = make_cov(n=3, p=2, alpha=1)
print("n = 3, alpha = 1 becomes dimension", cov.m + 1, " with t = r^%.2f / %.2f" % (cov.k, cov.k))

prob = RadialProblem(n=3.5, p=2.5, alpha=0.8, terms=(Power(1, 1), Power(1, 2)))
r = np.linspace(0, 2, 9)
direct = integrate_ivp(prob, 0.9, r_end=2.0)(r)[0]
via = solve_via_cov(prob, 0.9, r_end=2.0)(r)[0]
print("direct vs transformed, max difference:", np.max(np.abs(direct - via)))

# f(u) = u(u - 1)(3 - u): negative below 1, positive between 1 and 3
cubic = RadialProblem(n=3, alpha=1, terms=(Power(-1, 3), Power(4, 2), Power(-3, 1)))
curve = trace_curve_via_cov(cubic, interval_grid(1.0, 3.0), strict=False)
fold = curve.folds[0]
print(f"\ncubic: {len(curve.folds)} fold at a = {fold.a:.5f}, lambda = {fold.lam:.4f}")
for mult in (0.5, 2.0):
    print(f"  solutions at {mult} x lambda_fold: {count_solutions_at(curve, mult * fold.lam)}")
print("  worst re-shoot |u(1)|:", max(p.reshoot_residual for p in curve.points))
