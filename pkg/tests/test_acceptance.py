"""End-to-end acceptance criteria.

Each test records a single PASS/FAIL line (shown in the terminal summary)
before asserting.  Reference numbers are the published decimals; anything
else is computed here by an independent route (scipy root finding, direct
ODE integration, quadrature).
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from ritz import bratu, kinetics, oracle
from ritz import classic_problems as cp
from ritz.bratu import Branch, Source
from ritz.errors import NoSolution
from ritz.numerics import PowerSeries
from ritz.ritz_engine import action_value
from ritz.specfun import sinh_poisson_derivative, sinh_poisson_integral

PI = math.pi


def test_c01_exact_bratu_fold(report_line):
    c = bratu.critical_point(Source.EXACT)
    # independent: fold condition theta tanh(theta/2) = 2
    theta = brentq(lambda t: t * math.tanh(t / 2) - 2, 1, 4, xtol=1e-15)
    errs = (abs(c.param - 2.399357280), abs(c.lam - 3.513830719), abs(c.slope - 4), abs(c.param - theta))
    ok = errs[0] < 1e-8 and errs[1] < 1e-8 and errs[2] < 1e-6 and errs[3] < 1e-10
    report_line("1 exact fold theta_c, lambda_c, slope_c", ok, "errors " + ", ".join(f"{e:.1e}" for e in errs))
    assert ok


def test_c02_poly_fold(report_line):
    c = bratu.critical_point(Source.POLY)
    ea, el = abs(c.param - 4.727715383), abs(c.lam - 3.569086042)
    ok = ea < 1e-8 and el < 1e-8
    report_line("2 poly-trial A_c, lambda_c", ok, f"errors {ea:.1e}, {el:.1e}")
    assert ok


def test_c03_sine_fold(report_line):
    c = bratu.critical_point(Source.SINE)
    el, es = abs(c.lam - 3.509329130), abs(c.slope - 3.756549365)
    exact = bratu.critical_point(Source.EXACT).lam
    closer = abs(c.lam - exact) < abs(bratu.critical_point(Source.POLY).lam - exact)
    ok = el < 1e-8 and es < 1e-8 and closer
    report_line("3 sine-trial lambda_c, slope_c", ok, f"errors {el:.1e}, {es:.1e}; closer to exact than poly: {closer}")
    assert ok


SERIES_EXPECTED = {
    Source.EXACT: [1 / 2, 1 / 24, 1 / 160],
    Source.POLY: [1 / 2, 1 / 20, 43 / 5600],
    Source.SINE: [4 / PI ** 2, 4 / PI ** 4, 4 * (3 * PI ** 2 + 16) / (3 * PI ** 8), 4 * (PI ** 2 + 18) / PI ** 10],
}


def test_c04_perturbation_coefficients(report_line):
    worst = 0.0
    for src, want in SERIES_EXPECTED.items():
        got = bratu.perturbation_series(src, len(want))
        for j, w in enumerate(want, start=1):
            worst = max(worst, abs(float(got[j]) - w) / abs(w))
    exact_rational = list(bratu.perturbation_series(Source.EXACT, 3).coeffs[1:]) == [
        Fraction(1, 2), Fraction(1, 24), Fraction(1, 160)]
    ok = worst < 1e-9 and exact_rational
    report_line("4 slope series coefficients (exact, poly, sine)", ok, f"max rel error {worst:.1e}")
    assert ok


LAMBDAS = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]


def test_c05_shooting_matches_exact(report_line):
    worst = 0.0
    for lam in LAMBDAS:
        ex = bratu.branches_at(lam, Source.EXACT)
        sh = oracle.shooting_branches(lam)
        for b in (Branch.LOWER, Branch.UPPER):
            e, s = getattr(ex, b.value), getattr(sh, b.value)
            worst = max(worst, abs(e.slope - s.slope))
    lam_c = bratu.critical_point(Source.EXACT).lam
    counts = (bratu.branches_at(3.0).count, bratu.branches_at(lam_c).count)
    with pytest.raises(NoSolution):
        bratu.branches_at(3.6)
    with pytest.raises(NoSolution):
        oracle.shooting_branches(3.6)
    ok = worst < 1e-6 and counts == (2, 1)
    report_line("5 shooting vs exact slopes, branch counts 2/1/0", ok, f"max slope gap {worst:.1e}")
    assert ok


def _ode_partial_time(spec, remaining):
    # independent: integrate the rate law and stop when a - x hits remaining*a
    ev = lambda t, x: spec.a - x[0] - remaining * spec.a
    ev.terminal = True
    sol = solve_ivp(lambda t, x: [spec.k * (spec.a - x[0]) ** spec.n], (0, 1e4), [0.0],
                    events=ev, rtol=1e-12, atol=1e-14)
    return sol.t_events[0][0]


def test_c06_kinetics(report_line):
    worst_eta = 0.0
    ratios_ok = True
    for n in (1, 2, 3, 5):
        spec = kinetics.ReactionSpec(n, k=1.3, a=0.8)
        eta = kinetics.variational_eta(spec)
        target = spec.k * spec.a ** (n - 1) / math.sqrt(n)
        worst_eta = max(worst_eta, abs(eta - target), abs(kinetics.ritz_eta(spec) - target))
        ratios_ok &= kinetics.partial_time_ratio(spec, "exact") == 2 ** (n - 1) + 1
        ratios_ok &= kinetics.partial_time_ratio(spec, "variational") == 2
        ode_ratio = _ode_partial_time(spec, 0.25) / _ode_partial_time(spec, 0.5)
        ratios_ok &= abs(ode_ratio - (2 ** (n - 1) + 1)) < 1e-7
    rep = kinetics.he_erroneous_analysis(2.0, 0.5)
    errata_ok = rep.pole_time == 1.0 and rep.half_time == -1.0 and rep.unphysical and rep.oracle_bounded
    ok = worst_eta < 1e-8 and ratios_ok and errata_ok
    report_line("6 kinetics eta, t1/4:t1/2 ratios, errata", ok,
                f"eta error {worst_eta:.1e}; ratios {ratios_ok}; errata {errata_ok}")
    assert ok


def test_c07_kdv(report_line):
    worst_pq = worst_q = worst_res = 0.0
    for c in (1.0, 4.0):
        rep = cp.kdv_report(c)
        a, v = rep.algebraic, rep.variational
        worst_pq = max(worst_pq, abs(a.p - v.p), abs(a.q - v.q))
        worst_q = max(worst_q, abs(a.q - math.sqrt(c) / 2))
        worst_res = max(worst_res, rep.residual_algebraic)
        assert rep.residual_positive_p > 0.1
        assert any("-c/2" in note for note in rep.notes)
    ok = worst_pq < 1e-7 and worst_q < 1e-8 and worst_res < 1e-9
    report_line("7 KdV soliton amplitude and width", ok,
                f"alg-var {worst_pq:.1e}; q {worst_q:.1e}; residual {worst_res:.1e}")
    assert ok


def test_c08_lambert(report_line):
    worst_res = worst_ode = 0.0
    for n in (1, 2, 3):
        spec = cp.LambertSpec(n, k=1.5, y0=1.2, yp0=0.3)
        xs = oracle.lambert_positive_grid(spec)
        for x in xs:
            worst_res = max(worst_res, abs(cp.lambert_residual(spec, *cp.lambert_derivatives(spec, x))))
        worst_res = max(worst_res, oracle.lambert_fd_residual(spec))
        # independent integration of the original equation, forward branch only
        fwd = xs[xs > 0]
        sol = solve_ivp(lambda x, y: [y[1], (1 - n) * y[1] ** 2 / y[0] - spec.k ** 2 / n * y[0]],
                        (0, fwd[-1]), [spec.y0, spec.yp0], t_eval=fwd, method="DOP853", rtol=1e-12, atol=1e-12)
        worst_ode = max(worst_ode, max(abs(sol.y[0] - [cp.lambert_solve(spec, x) for x in fwd])))
    ok = worst_res < 1e-7 and worst_ode < 1e-6
    report_line("8 Lambert transform residual and ODE agreement", ok,
                f"residual {worst_res:.1e}; ode gap {worst_ode:.1e}")
    assert ok


def test_c09_duffing(report_line):
    pattern, drift = {}, 0.0
    for eps, A in ((1, 1), (1, 2), (1, 1.5)):
        spec = cp.DuffingSpec(eps, A)
        centre = cp.duffing_classify(spec).oscillation_center
        pattern[(eps, A)] = (centre, oracle.duffing_crosses_zero(spec))
        drift = max(drift, oracle.duffing_energy_drift(spec))
    consistent = all((c is cp.OscillationCenter.ORIGIN) == crosses for c, crosses in pattern.values())
    expected = [pattern[(1, 1)][0], pattern[(1, 2)][0], pattern[(1, 1.5)][0]] == [
        cp.OscillationCenter.RIGHT_WELL, cp.OscillationCenter.ORIGIN, cp.OscillationCenter.ORIGIN]
    ok = consistent and expected and drift < 1e-8
    report_line("9 Duffing boundary eps*A^2 = 2 and energy drift", ok, f"drift {drift:.1e}")
    assert ok


def test_c10_property_suites(report_line):
    # d/dA [I0 + L0] against a central difference, 30 points
    grid = np.linspace(0.1, 6.0, 30)
    h = 1e-5
    d_err = max(abs((sinh_poisson_integral(A + h) - sinh_poisson_integral(A - h)) / (2 * h)
                    - sinh_poisson_derivative(A)) for A in grid)
    # quadrature of the action against its closed form
    q_err = 0.0
    for kind in bratu.TRIAL_KINDS:
        T = bratu.trial_family(kind)
        for lam in (0.5, 2.0, 3.4):
            F = bratu.action_functional(lam)
            for A in (0.3, 1.0, 2.5, 4.0):
                q_err = max(q_err, abs(action_value(F, T, [A]) - bratu.closed_form_action(kind, A, lam)))
    # series reversion round trip in exact arithmetic
    s = PowerSeries([0, 1, Fraction(-1, 3), Fraction(5, 7), 2, Fraction(-11, 13)], 5)
    x = PowerSeries([0, 1], 5)
    round_trip = s.revert().compose(s) == x and s.compose(s.revert()) == x
    ok = d_err < 1e-6 and q_err < 1e-10 and round_trip
    report_line("10 derivative identity, action quadrature, series round trip", ok,
                f"derivative {d_err:.1e}; quadrature {q_err:.1e}; round trip {round_trip}")
    assert ok


def test_sinh_poisson_integral_matches_quadrature():
    # (1/pi) int_0^pi exp(A sin t) dt = I0(A) + L0(A)
    for A in (0.5, 2.0, 7.0):
        ref, _ = quad(lambda t: math.exp(A * math.sin(t)), 0, PI, epsabs=0, epsrel=1e-13)
        assert sinh_poisson_integral(A) == pytest.approx(ref / PI, rel=1e-12)
