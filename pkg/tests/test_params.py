import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lucas_uzawa import (ModelParams, NonPositiveState, OutOfRange, SigmaIsOne, inverse_transform_state,
                         load_params, to_transformed, transform_state, validate)
from lucas_uzawa.params import bgp_window
from draws import CANONICAL
from strategies import raw_params


def test_canonical_is_valid_and_inside_window():
    p = validate(ModelParams(**CANONICAL))
    assert p.bgp_window_satisfied
    lower, middle, upper = bgp_window(p)
    # hand arithmetic: 0.04*0.67, 0.05*0.77, 0.0268 + 0.05*2*0.77
    assert lower == pytest.approx(0.0268, abs=1e-15)
    assert middle == pytest.approx(0.0385, abs=1e-15)
    assert upper == pytest.approx(0.1038, abs=1e-15)


def test_sigma_one_rejected():
    with pytest.raises(SigmaIsOne) as exc:
        validate(ModelParams(**{**CANONICAL, "sigma": 1.0}))
    assert exc.value.name == "sigma"


@pytest.mark.parametrize("name,value", [
    ("beta", 1.0), ("beta", 0.0), ("sigma", -1.0), ("rho", 0.0), ("gamma", 0.0),
    ("pi", -0.01), ("delta", 0.0), ("theta", -0.1), ("rho", float("nan")),
])
def test_hard_bounds(name, value):
    with pytest.raises(OutOfRange) as exc:
        validate(ModelParams(**{**CANONICAL, name: value}))
    assert exc.value.name == name


def test_window_is_a_flag_not_an_error():
    p = validate(ModelParams(**{**CANONICAL, "delta": 0.01}))
    assert not p.bgp_window_satisfied


def test_transformed_examples():
    t = to_transformed(validate(ModelParams(**{**CANONICAL, "theta": 0.0})))
    assert t.phi == 1.0 and t.delta_star == 0.05
    t = to_transformed(validate(ModelParams(**{**CANONICAL, "beta": 0.5, "theta": 0.25})))
    assert t.phi == pytest.approx(1.5, rel=1e-15)
    t = to_transformed(validate(ModelParams(**CANONICAL)))
    # mpmath reference: phi = 0.77/0.67, delta* = 0.05 phi
    assert t.phi == pytest.approx(1.14925373134328358, rel=1e-14)
    assert t.delta_star == pytest.approx(0.0574626865671641791, rel=1e-14)


def test_transform_examples(canon):
    phi = canon.phi
    assert transform_state(1.0, 3.0, canon) == pytest.approx((1.0, 3.0 / phi), rel=1e-15)
    p0 = validate(ModelParams(**{**CANONICAL, "theta": 0.0}))
    assert transform_state(2.5, 0.7, p0) == pytest.approx((2.5, 0.7), rel=1e-15)
    assert inverse_transform_state(1.0, 2.0, canon) == pytest.approx((1.0, 2.0 * phi), rel=1e-15)


def test_inverse_hand_example():
    # beta = 0.5, theta = 0.25 gives phi = 1.5: h* = 8 -> h = 4, mu = 1.5 mu* 4^0.5 = 3 mu*
    p = validate(ModelParams(**{**CANONICAL, "beta": 0.5, "theta": 0.25}))
    h, mu = inverse_transform_state(8.0, 2.0, p)
    assert h == pytest.approx(4.0, rel=1e-14)
    assert mu == pytest.approx(6.0, rel=1e-14)


def test_nonpositive_state(canon):
    with pytest.raises(NonPositiveState):
        transform_state(0.0, 1.0, canon)
    with pytest.raises(NonPositiveState):
        inverse_transform_state(np.array([1.0, -2.0]), np.ones(2), canon)


@given(raw_params(), st.floats(1e-3, 1e3), st.floats(1e-6, 1e6))
def test_round_trip(raw, h, mu):
    p = validate(raw)
    h_star, mu_star = transform_state(h, mu, p)
    h2, mu2 = inverse_transform_state(h_star, mu_star, p)
    assert h2 == pytest.approx(h, rel=1e-12)
    assert mu2 == pytest.approx(mu, rel=1e-12)


@given(raw_params())
def test_delta_star_identity(raw):
    p = validate(raw)
    t = to_transformed(p)
    assert t.phi >= 1.0
    # phi = 1 iff theta = 0, up to rounding of 1 + theta/(1-beta)
    if p.theta == 0.0:
        assert t.phi == 1.0
    else:
        assert (t.phi == 1.0) == (p.theta / (1.0 - p.beta) < 2.3e-16)
    lhs = t.delta_star * (1.0 - p.beta)
    assert math.isclose(lhs, p.delta * (1.0 - p.beta + p.theta), rel_tol=1e-14)


@given(raw_params(), st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_theta_zero_identity(raw, h, mu):
    p = validate(ModelParams(**{**raw.as_dict(), "theta": 0.0}))
    assert p.delta_star == p.delta
    assert transform_state(h, mu, p) == pytest.approx((h, mu), rel=1e-15)


def test_load_params(tmp_path):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(CANONICAL))
    p = load_params(path)
    assert p.as_dict() == CANONICAL
    path.write_text(json.dumps({k: v for k, v in CANONICAL.items() if k != "gamma"}))
    with pytest.raises(OutOfRange) as exc:
        load_params(path)
    assert exc.value.name == "gamma"
    path.write_text(json.dumps({**CANONICAL, "beta": "0.3"}))
    with pytest.raises(OutOfRange):
        load_params(path)
