import math

import pytest
from hypothesis import given, strategies as st

from ritz import kinetics
from ritz.errors import RatioOutOfRange
from ritz.kinetics import ReactionSpec, Source


@pytest.mark.parametrize("kwargs", [{"n": 0.5}, {"n": 2, "k": 0}, {"n": 2, "a": -1}])
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        ReactionSpec(**kwargs)


@pytest.mark.parametrize("n", [1, 1.5, 2, 3, 5])
def test_exact_extent_solves_rate_law(n):
    spec = ReactionSpec(n, k=0.7, a=1.4)
    h = 1e-5
    for t in (0.1, 0.8, 3.0):
        dxdt = (kinetics.exact_extent(spec, t + h) - kinetics.exact_extent(spec, t - h)) / (2 * h)
        assert dxdt == pytest.approx(spec.rate(kinetics.exact_extent(spec, t)), rel=1e-7)


def test_exact_extent_first_order_limit():
    near = ReactionSpec(1 + 1e-9, k=1, a=1)
    assert kinetics.exact_extent(near, 2.0) == pytest.approx(1 - math.exp(-2), rel=1e-7)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_partial_times_agree_with_ode(n):
    spec = ReactionSpec(n, k=1.1, a=0.9)
    for remaining in (0.5, 0.25):
        assert kinetics.ode_partial_time(spec, remaining) == pytest.approx(
            kinetics.partial_time(spec, remaining), rel=1e-9)


def test_located_time_matches_closed_form():
    spec = ReactionSpec(3, 2.0, 0.5)
    t = kinetics.locate_partial_time(lambda t: kinetics.exact_extent(spec, t), spec, 0.25)
    assert t == pytest.approx(kinetics.partial_time(spec, 0.25), rel=1e-10)


def test_variational_action_minimum_is_eta():
    spec = ReactionSpec(3, 1.2, 0.8)
    eta = kinetics.variational_eta(spec)
    h = 1e-4 * eta
    J = lambda e: kinetics.variational_action(spec, e)
    assert J(eta) < J(eta - h) and J(eta) < J(eta + h)


def test_variational_half_time_is_positive():
    spec = ReactionSpec(2)
    assert kinetics.half_time(spec, Source.VARIATIONAL) == pytest.approx(math.sqrt(2) * math.log(2))


def test_infer_order_examples():
    assert kinetics.infer_order(1, 3) == pytest.approx(2)
    assert kinetics.infer_order(1, 2) == pytest.approx(1)
    with pytest.raises(RatioOutOfRange):
        kinetics.infer_order(1, 1)


@given(st.floats(1, 6))
def test_infer_order_inverts_exact_ratio(n):
    spec = ReactionSpec(n)
    t2, t4 = kinetics.half_time(spec), kinetics.partial_time(spec, 0.25)
    assert kinetics.infer_order(t2, t4) == pytest.approx(n, rel=1e-9)


def test_erroneous_profile_only_for_second_order():
    with pytest.raises(ValueError):
        kinetics.profile(ReactionSpec(3), Source.HE_ERRONEOUS)
    wrong = kinetics.profile(ReactionSpec(2), Source.HE_ERRONEOUS)
    assert wrong(2.0) > 1.0  # past the pole the "extent" exceeds a


def test_errata_report():
    rep = kinetics.he_erroneous_analysis(1.0, 1.0)
    assert (rep.pole_time, rep.half_time) == (1.0, -1.0)
    assert rep.erroneous_variational_half_time == pytest.approx(-0.98, abs=5e-3)
    assert rep.variational_half_time > 0
    assert rep.exact_half_time == 1.0
    assert rep.oracle_bounded and rep.oracle_max_extent < 1.0
