"""Hypothesis strategies for valid parameter sets."""
from hypothesis import assume
from hypothesis import strategies as st

from lucas_uzawa import ModelParams, validate


@st.composite
def raw_params(draw):
    sigma = draw(st.floats(0.3, 4.0).filter(lambda s: abs(s - 1.0) > 1e-3))
    return ModelParams(
        sigma=sigma,
        rho=draw(st.floats(0.005, 0.1)),
        beta=draw(st.floats(0.05, 0.95)),
        gamma=draw(st.floats(0.1, 5.0)),
        pi=draw(st.floats(0.0, 0.1)),
        delta=draw(st.floats(0.005, 0.3)),
        theta=draw(st.floats(0.0, 1.0)),
    )


@st.composite
def window_params(draw):
    p = validate(draw(raw_params()))
    assume(p.bgp_window_satisfied)
    return p
