# Explicit radial solutions and how well they solve their own equation.
import numpy as np

from radial_plap import make_family, residual_max

r = np.geomspace(1e-6, 10, 400)

# The critical ground state in three dimensions: u(0) = sqrt(3), f = u^5
fam = make_family("F1", {"n": 3, "a": 1, "alpha": 0})
print("u(0) =", fam.u0, " exponent q =", fam.params["q"])
print("max residual on (0, 10]:", residual_max(fam, r))

# A p-Laplacian example: n = 4, p = 3, so the critical power is 11
fam = make_family("F6", {"n": 4, "p": 3, "a": 0.7})
print("\np-Laplacian ground state, s =", fam.params["s"])
for x in (0.0, 0.5, 1.0, 2.0, 5.0):
    print(f"  r = {x:4.1f}   u = {fam.u(x):.6f}   u' = {fam.uprime(x):.6f}")

# The p = n Bratu family: the coefficient (n-1)/n is the one that works
good = make_family("F8", {"n": 3, "a": 1.0, "B": 1.0})
bad = make_family("F8", {"n": 3, "a": 1.0, "B": 1.0}, variant="printed")
grid = np.geomspace(1e-3, 10, 200)
print("\nBratu p = n residuals:  corrected %.2e   alternative %.2e"
      % (residual_max(good, grid), residual_max(bad, grid)))

# Every family on one random draw
rng = np.random.default_rng(0)
draws = {
    "F4": {"a": 1.2, "B": 1.5},
    "F5": {"n": 4, "B": 1.5},
    "F9": {"a": rng.uniform(-1, 1), "alpha": 0.7},
    "F10": {"a": 0.3},
}
for fid, params in draws.items():
    fam = make_family(fid, params)
    print(f"{fid}: residual {residual_max(fam, r[r > fam.r_min]):.2e}")
