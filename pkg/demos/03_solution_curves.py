# The curves (lambda, u(0)) for u^4 + u^7 and u^3 + u^7 on the unit ball.
import numpy as np

from radial_plap import RadialProblem, count_solutions_at, estimate_asymptote, first_root, trace_curve
from radial_plap.curves import CURVE_CONFIG

curves = {}
for low in (4, 3):
    prob = RadialProblem.powers(3, [low, 7])
    curve = curves[low] = trace_curve(prob)
    first = curve.folds[0]
    print(f"u^{low} + u^7: {len(curve.points)} points, first fold at a = {first.a:.5f}, lambda = {first.lam:.3f}")
    for mult in (0.5, 2, 10):
        print(f"  solutions at {mult:>4} x lambda_fold: {count_solutions_at(curve, mult * first.lam)}")
    if curve.a_truncated is not None:
        print(f"  ground state near a = {curve.a_truncated:.6f}; asymptote fit {estimate_asymptote(curve).beta:.5f}")
    else:
        top = curve.folds[-1]
        print(f"  the upper turn peaks at lambda = {top.lam:.1f} (a = {top.a:.4f}), so large lambda has one solution")

# Near a = 2 the first root runs away, but not monotonically: each turn of
# the profile around r^(-2/3) adds a pair of folds
prob = RadialProblem.powers(3, [4, 7])
print("\nheight      lambda")
for a in (1.5, 1.6, 1.7, 1.8, 1.9, 1.99, 1.999):
    out = first_root(prob, a, CURVE_CONFIG)
    print(f"{a:<10}  {out.rho ** 2:.3e}")
print("fold pairs beyond the first:", (len(curves[4].folds) - 1) // 2)
