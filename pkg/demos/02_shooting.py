# Shooting from u(0) = a: ground states, Dirichlet roots, the singular start.
import math

import numpy as np

from radial_plap import Exponential, RadialProblem, first_root, integrate_coulomb, make_family

quintic = RadialProblem.powers(3, [5])
out = first_root(quintic, math.sqrt(3))
exact = make_family("F1", {"n": 3, "a": 1, "alpha": 0})
r = np.linspace(0, 10, 11)
print("u^5 from sqrt(3):", out.status, "(the explicit ground state)")
print("  sup error vs closed form:", np.max(np.abs(out.profile(r)[0] - exact.u(r))))

# Bratu in the plane: this height has its first root on the unit circle
bratu = RadialProblem(n=2, terms=(Exponential(1, 1),))
a = math.log(8 * (3 + 2 * math.sqrt(2)))
print("\nBratu from a = %.6f: first root at %.12f" % (a, first_root(bratu, a).rho))

# Two powers: small heights hit zero, large ones need a far larger r_max
fig1 = RadialProblem.powers(3, [4, 7])
for a in (0.5, 1.0, 1.5):
    out = first_root(fig1, a)
    print(f"u^4 + u^7 from a = {a}: rho = {out.rho:.6f}, lambda = {out.rho ** 2:.4f}")

# alpha = -1: the slope at the origin is -f(u(0)), not zero
coulomb = RadialProblem(n=2, alpha=-1, coulomb=True, terms=(Exponential(1, 1),))
prof = integrate_coulomb(coulomb, 1.0, r_end=5.0)
print("\nCoulomb start: u'(0) =", prof.uprime[0], " -e^a =", -math.e)
