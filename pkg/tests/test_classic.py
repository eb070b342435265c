import math

import pytest
from hypothesis import given, strategies as st

from ritz import classic_problems as cp
from ritz.classic_problems import EquilibriumKind, OscillationCenter
from ritz.errors import BranchCrossing


@pytest.mark.parametrize("eps, A, centre", [
    (1, 1, OscillationCenter.RIGHT_WELL),
    (1, 2, OscillationCenter.ORIGIN),
    (1, 1.5, OscillationCenter.ORIGIN),
    (0.1, 4, OscillationCenter.RIGHT_WELL),
    (-1, 1, OscillationCenter.UNBOUNDED),
])
def test_duffing_centre(eps, A, centre):
    assert cp.duffing_classify(cp.DuffingSpec(eps, A)).oscillation_center is centre


def test_duffing_separatrix_and_equilibria():
    rep = cp.duffing_classify(cp.DuffingSpec(1.0, math.sqrt(2)))
    assert rep.separatrix and rep.energy == pytest.approx(0, abs=1e-15)
    kinds = [k for _, k in cp.duffing_classify(cp.DuffingSpec(4.0, 1.0)).points]
    assert kinds == [EquilibriumKind.MINIMUM, EquilibriumKind.MAXIMUM, EquilibriumKind.MINIMUM]
    assert cp.duffing_classify(cp.DuffingSpec(4.0, 1.0)).points[0][0] == -0.5


def test_duffing_spec_rejects_nonpositive_amplitude():
    with pytest.raises(ValueError):
        cp.DuffingSpec(1.0, 0.0)


@given(st.floats(0.2, 3.0), st.floats(0.5, 2.0), st.floats(0.3, 2.0), st.floats(-1, 1), st.floats(0, 0.9))
def test_lambert_residual_vanishes_on_branch(n, k, y0, yp0, frac):
    spec = cp.LambertSpec(n, k, y0, yp0)
    lo, hi = cp.lambert_branch_interval(spec)
    x = frac * hi
    y, yp, ypp = cp.lambert_derivatives(spec, x)
    scale = abs(ypp) + k * k / n * y + abs((1 - n) * yp * yp / y)
    assert abs(cp.lambert_residual(spec, y, yp, ypp)) <= 1e-12 * (1 + scale)


def test_lambert_branch_crossing():
    spec = cp.LambertSpec(2, 1, 1, 0)
    assert cp.lambert_branch_interval(spec) == pytest.approx((-math.pi / 2, math.pi / 2))
    with pytest.raises(BranchCrossing):
        cp.lambert_solve(spec, 3.0)


def test_lambert_n1_is_cosine():
    spec = cp.LambertSpec(1, 2, 1.5)
    assert cp.lambert_solve(spec, 0.4) == pytest.approx(1.5 * math.cos(0.8), rel=1e-15)


@pytest.mark.parametrize("c", [0.25, 1.0, 4.0, 9.0])
def test_kdv_algebraic(c):
    sol = cp.kdv_soliton_solve(c)
    assert (sol.p, sol.q) == pytest.approx((-c / 2, math.sqrt(c) / 2))
    assert cp.kdv_max_residual(sol) < 1e-12 * (1 + c * c)


def test_kdv_residual_against_finite_differences():
    sol = cp.kdv_soliton_solve(2.0)
    h = 1e-3
    for xi in (-1.3, 0.2, 2.5):
        upp = (-sol(xi + 2 * h) + 16 * sol(xi + h) - 30 * sol(xi) + 16 * sol(xi - h) - sol(xi - 2 * h)) / (12 * h * h)
        assert upp - 2.0 * sol(xi) - 3 * sol(xi) ** 2 == pytest.approx(0, abs=1e-9)


def test_kdv_positive_amplitude_is_not_a_solution():
    rep = cp.kdv_report(1.0)
    assert rep.residual_positive_p == pytest.approx(1.5, rel=1e-6)
    assert rep.variational.p == pytest.approx(-0.5, abs=1e-7)
    with pytest.raises(ValueError):
        cp.kdv_soliton_solve(0.0)
