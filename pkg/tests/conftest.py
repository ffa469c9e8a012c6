import numpy as np
import pytest

from radial_plap.curves import interval_grid, trace_curve
from radial_plap.model import Power, RadialProblem
from radial_plap.transform import trace_curve_via_cov

FAMILIES = ["F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9", "F10"]
RESIDUAL_GRID = np.geomspace(1e-6, 10.0, 400)


def draw_params(fid, rng):
    """One random valid parameter set for a family."""
    u = rng.uniform
    if fid == "F1":
        return {"n": u(3, 5), "a": u(0.2, 1.5), "alpha": u(-0.5, 2.0)}
    if fid == "F2":
        n, alpha = u(3, 6), u(-0.5, 2.0)
        return {"n": n, "q": u(1.1, 0.8 * (n + alpha) / (n - 2)), "alpha": alpha}
    if fid == "F3":
        n, alpha = u(3, 6), u(-0.5, 2.0)
        qc = (n + alpha) / (n - 2)
        return {"n": n, "q": u(1.05 * qc, 2.5 * qc), "alpha": alpha}
    if fid == "F4":
        return {"a": u(0.1, 3.0), "B": u(0.1, 3.0)}
    if fid == "F5":
        return {"n": u(2, 6), "B": u(0.1, 3.0)}
    if fid == "F6":
        n = u(2.5, 6)
        return {"n": n, "p": u(1.2, 0.9 * n), "a": u(0.2, 1.5)}
    if fid == "F7":
        n = u(3, 6)
        p = u(1.3, min(0.8 * n, 3.0))
        lo = max(p - 1, (n * p - n) / (n - p))
        return {"n": n, "p": p, "M": u(1.05 * lo + 0.05, 1.8 * lo + 1)}
    if fid == "F8":
        return {"n": u(1.5, 4), "a": u(0.2, 1.5), "B": u(0.2, 5.0)}
    if fid == "F9":
        return {"a": u(-2, 2), "alpha": u(-0.9, 3.0)}
    if fid == "F10":
        return {"a": u(-2, 2)}
    raise KeyError(fid)


def two_power_problem(low):
    return RadialProblem.powers(3, [low, 7])


CUBIC = RadialProblem(n=3, alpha=1, terms=(Power(-1, 3), Power(4, 2), Power(-3, 1)))
CUBIC_GRID = interval_grid(1.0, 3.0, points=80, gap=1e-4)


@pytest.fixture(scope="session")
def quartic_curve():
    return trace_curve(two_power_problem(4))


@pytest.fixture(scope="session")
def cubic_pair_curve():
    return trace_curve(two_power_problem(3))


@pytest.fixture(scope="session")
def cubic_curve():
    return trace_curve_via_cov(CUBIC, CUBIC_GRID, strict=False)
