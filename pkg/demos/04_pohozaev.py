# The Pohozaev function separates sub-, critical and supercritical powers.
import numpy as np

from radial_plap import RadialProblem, classify_power, integrate_ivp, make_family, pohozaev_P, pohozaev_Pprime
from radial_plap.pohozaev import pohozaev_scan

r = np.linspace(0.2, 4, 8)
for q in (4, 5, 6):
    prob = RadialProblem.powers(3, [q])
    u = integrate_ivp(prob, 1.0, r_end=4.0)(r)[0]
    dP = pohozaev_Pprime(prob, r, u)
    print(f"q = {q} ({classify_power(3, 2, 0, q).value:>13}): P' =", np.array2string(dP, precision=3))

# Along the explicit ground state P vanishes identically
fam = make_family("F1", {"n": 3, "a": 1, "alpha": 1})
rr = np.geomspace(1e-2, 20, 6)
print("\nP along the weighted critical ground state:", pohozaev_P(fam.problem, rr, fam.u(rr), fam.uprime(rr)))

# Closed-form P' against a central difference on a shot profile
prob = RadialProblem.powers(3, [3, 7], alpha=1.0)
prof = integrate_ivp(prob, 0.8, r_end=2.0)
worst = max(s.mismatch() for s in pohozaev_scan(prob, prof, np.linspace(0.1, 1.9, 30)))
print("largest relative mismatch of P':", worst)
