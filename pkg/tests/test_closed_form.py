import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lucas_uzawa import (EvalDomain, ModelParams, NoRoot, SigmaBetaMismatch, SolutionConstants,
                         SolutionFamily, WindowViolated, bgp_summary, derive_constants,
                         derive_constants_sol1, derive_constants_sol2, derive_constants_sol3,
                         eval_general, eval_sigma_beta, evaluate, kernel_context, to_original, validate)
from lucas_uzawa.closed_form import solve_u0
from draws import CANONICAL, draw_case, draw_params, general_families, sigma_beta_families

# scipy quad + brentq on the raw integrands (canonical params, k0 = 1, h0 = 0.2)
SOL2_U0 = 0.92161891574913
SOL2_C0 = 0.224279981148258


def _sigma_beta_params():
    # sigma = beta = 0.3; u_bar = 0.5 gives delta* = rho / (1 - sigma (1 - u_bar))
    beta, rho, theta = 0.3, 0.03, 0.1
    phi = (1 - beta + theta) / (1 - beta)
    delta = rho / (1 - beta * 0.5) / phi
    return validate(ModelParams(beta, rho, beta, 1.0, 0.01, delta, theta))


def test_sol1_canonical(canon):
    c = derive_constants_sol1(canon, 1.0)
    assert c.c0 == pytest.approx(0.206004070556309362, rel=1e-13)
    assert c.u0 == pytest.approx(0.848051948051948052, rel=1e-13)
    assert c.z0 == pytest.approx(0.114964855402110290, rel=1e-13)
    assert c.h0_star == pytest.approx(0.135563458896822240, rel=1e-13)
    ds = canon.delta_star
    lhs = ((1 - canon.beta) * canon.gamma / (c.c1 * ds * c.z0**canon.beta)) ** (1 / canon.sigma)
    assert lhs == pytest.approx(c.c0, rel=1e-10)


def test_sol1_theta_zero():
    p = validate(ModelParams(**{**CANONICAL, "theta": 0.0}))
    c = derive_constants_sol1(p, 2.0)
    s, r, b, d, pi = p.sigma, p.rho, p.beta, p.delta, p.pi
    assert c.c0 / c.k0 == pytest.approx((d + pi * (1 - b)) / b - (d - r) / s, rel=1e-14)


@pytest.mark.parametrize("family", ["General2", "General3"])
def test_dynamic_canonical_constants(canon, family):
    c = derive_constants(family, canon, 1.0, 0.2)
    assert c.u0 == pytest.approx(SOL2_U0, rel=1e-11)
    assert c.c0 == pytest.approx(SOL2_C0, rel=1e-11)
    assert c.h0_star == pytest.approx(0.2**canon.phi, rel=1e-15)
    assert c.z0 == pytest.approx(c.u0 * c.h0_star / c.k0, rel=1e-15)


def test_sol2_defining_relations(canon):
    c = derive_constants_sol2(canon, 1.0, 0.2)
    s, b, g, ds = canon.sigma, canon.beta, canon.gamma, canon.delta_star
    R = canon.rho + canon.pi - canon.pi * s
    z0 = c.z0
    lhs = g * (1 - b) * (canon.rho - ds + ds * s) / ds
    rhs = c.u0 / c.k0 * (s * c.c0 * z0 ** (b - 1) - R * c.k0 * z0 ** (b - 1) + b * g * (1 - s) * c.k0)
    assert rhs == pytest.approx(lhs, rel=1e-9)
    ctx = kernel_context(canon, z0)
    assert ctx.F_inf == pytest.approx(c.k0 / (c.c0 * z0 ** ((b - s) / s)), rel=1e-9)


def test_sol3_defining_relations(canon):
    c = derive_constants_sol3(canon, 1.0, 0.2)
    ds, b = canon.delta_star, canon.beta
    ctx = kernel_context(canon, c.z0)
    ratio = ((ds + canon.pi) * (1 - b) / b + ds * c.u0) / (ds * c.u0)
    assert ctx.G_inf == pytest.approx(ratio * ctx.F_inf, rel=1e-8)
    assert ctx.F_inf == pytest.approx(c.k0 / (c.c0 * c.z0 ** ((b - canon.sigma) / canon.sigma)), rel=1e-8)


def test_sol3_degenerate_ratio(canon):
    ctx = kernel_context(canon, kernel_context(canon, 1.0).z_bar)
    u = bgp_summary(canon).u_bar
    ds, b = canon.delta_star, canon.beta
    printed = ((ds + canon.pi) * (1 - b) / b + ds * u) / (ds * u)
    assert ctx.xi_tilde / ctx.g_decay == pytest.approx(printed, rel=1e-13)


@pytest.mark.parametrize("family", ["General2", "General3"])
def test_bgp_initial_state_reproduces_sol1(canon, family):
    s1 = derive_constants_sol1(canon, 1.3)
    h0 = s1.h0_star ** (1 / canon.phi)
    c = derive_constants(family, canon, 1.3, h0)
    for key in ("c0", "u0", "z0", "h0_star", "c1"):
        assert getattr(c, key) == pytest.approx(getattr(s1, key), rel=1e-9), key


def test_no_root_reported(canon):
    with pytest.raises(NoRoot):
        derive_constants_sol2(canon, 1.0, 5.0)
    with pytest.raises(NoRoot):
        solve_u0(lambda u: 1.0)


def test_solve_u0_does_not_assume_monotonicity():
    root = solve_u0(lambda u: (u - 0.3) * (u - 0.7))
    assert root == pytest.approx(0.3, abs=1e-12)


def test_window_required():
    p = validate(ModelParams(**{**CANONICAL, "delta": 0.01}))
    for family in general_families():
        with pytest.raises(WindowViolated):
            derive_constants(family, p, 1.0, 0.2)


@pytest.mark.parametrize("family", list(SolutionFamily))
def test_t0_reproduces_constants(family):
    p = canonical_or_sb(family)
    c = derive_constants(family, p, 1.0, 0.2)
    pt = evaluate(family, c, p, 0.0)
    assert pt.c == pytest.approx(c.c0, rel=1e-12)
    assert pt.k == pytest.approx(c.k0, rel=1e-12)
    assert pt.h_star == pytest.approx(c.h0_star, rel=1e-12)
    assert pt.u == pytest.approx(c.u0, rel=1e-12)
    assert pt.z == pytest.approx(c.z0, rel=1e-12)


def canonical_or_sb(family):
    return _sigma_beta_params() if SolutionFamily(family).sigma_beta else validate(ModelParams(**CANONICAL))


def test_general1_exponential(canon):
    c = derive_constants_sol1(canon, 1.0)
    t = np.linspace(0, 100, 11)
    pt = eval_general("General1", c, canon, t)
    g = (canon.delta_star - canon.rho) / canon.sigma
    assert np.allclose(pt.c / c.c0, np.exp(g * t), rtol=1e-13)
    assert g == pytest.approx(0.00873134328358208955, rel=1e-13)
    assert np.all(pt.z == c.z0)


def test_general2_long_run(canon):
    c = derive_constants_sol2(canon, 1.0, 0.2)
    pt = eval_general("General2", c, canon, 400.0)
    b = bgp_summary(canon)
    assert abs(pt.c / pt.k - b.xi) < 1e-5
    assert abs(pt.u - b.u_bar) < 1e-5


def test_long_horizon_is_finite(canon):
    c = derive_constants_sol3(canon, 1.0, 0.2)
    pt = eval_general("General3", c, canon, np.array([0.0, 1000.0, 3000.0]))
    for name in ("c", "k", "h_star", "lam", "mu_star"):
        v = getattr(pt, name)
        assert np.all(np.isfinite(v)) and np.all(v > 0), name


def test_wrong_evaluator_rejected(canon):
    c = derive_constants_sol1(canon, 1.0)
    with pytest.raises(ValueError):
        eval_sigma_beta("General1", c, canon, 1.0)
    with pytest.raises(ValueError):
        eval_general("SigmaBeta1", c, canon, 1.0)
    with pytest.raises(ValueError):
        eval_general("General1", c, canon, -1.0)


def test_sigma_beta_gate(canon):
    with pytest.raises(SigmaBetaMismatch):
        derive_constants("SigmaBeta1", canon, 1.0)


def test_sigma_beta_window_sides():
    p = _sigma_beta_params()
    assert p.delta * (1 - p.beta + p.theta) < p.rho + p.delta * p.beta * (1 - p.beta + p.theta)
    assert p.rho * (1 - p.beta) < p.delta * (1 - p.beta + p.theta)


def test_sol2a_collapses_to_sol1a():
    p = _sigma_beta_params()
    c1 = derive_constants("SigmaBeta1", p, 1.0)
    c2 = derive_constants("SigmaBeta2", p, 1.0, c1.h0_star ** (1 / p.phi))
    t = np.linspace(0, 50, 26)
    a, b = eval_sigma_beta("SigmaBeta1", c1, p, t), eval_sigma_beta("SigmaBeta2", c2, p, t)
    for name in ("c", "k", "h", "u", "lam", "mu", "z"):
        assert np.allclose(getattr(a, name), getattr(b, name), rtol=1e-12), name


def test_sol2a_equals_sol3_at_sigma_beta():
    p = _sigma_beta_params()
    c2 = derive_constants("SigmaBeta2", p, 1.0, 0.3)
    c3 = derive_constants("General3", p, 1.0, 0.3)
    t = np.linspace(0, 50, 51)
    a, b = eval_sigma_beta("SigmaBeta2", c2, p, t), eval_general("General3", c3, p, t)
    for name in ("c", "k", "h", "u", "lam", "mu", "h_star", "mu_star", "z"):
        assert np.allclose(getattr(a, name), getattr(b, name), rtol=1e-8, atol=0), name


def test_sigma_beta_mu_rate():
    p = _sigma_beta_params()
    c = derive_constants("SigmaBeta2", p, 1.0, 0.3)
    h = 1e-4
    t = 10.0
    mu = lambda s: eval_sigma_beta("SigmaBeta2", c, p, s).mu
    fd = (math.log(mu(t + h)) - math.log(mu(t - h))) / (2 * h)
    b, r, d, th = p.beta, p.rho, p.delta, p.theta
    printed = ((r - d) * (1 - b) - d * th) * (b - th) / (b * (1 - b + th))
    assert fd == pytest.approx(printed, abs=1e-8)


def test_to_original_round_trip(canon):
    c = derive_constants_sol2(canon, 1.0, 0.2)
    pt = eval_general("General2", c, canon, 5.0)
    again = to_original(pt, canon)
    assert again.h == pytest.approx(pt.h, rel=1e-14) and again.mu == pytest.approx(pt.mu, rel=1e-14)
    assert pt.h ** canon.phi == pytest.approx(pt.h_star, rel=1e-13)
    assert to_original(to_original(pt, canon), canon).mu == pytest.approx(pt.mu, rel=1e-14)


def test_inconsistent_constants_raise_eval_domain(canon):
    c = derive_constants_sol2(canon, 1.0, 0.2)
    bad = SolutionConstants(**{**c.__dict__, "c0": c.c0 * 0.01})
    with pytest.raises(EvalDomain):
        eval_general("General2", bad, canon, 1.0)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_trajectory_invariants(seed):
    rng = np.random.default_rng(seed)
    sb = bool(rng.integers(2))
    p = draw_params(rng, sigma_beta=sb)
    families = sigma_beta_families() if sb else general_families()
    family = families[rng.integers(len(families))]
    _, _, c = draw_case(rng, p, family)
    pt = evaluate(family, c, p, np.linspace(0, 50, 51))
    assert np.all(pt.u > 0) and np.all(pt.u <= 1 + 1e-12)
    assert np.allclose(pt.z, pt.u * pt.h_star / pt.k, rtol=1e-10)
    assert np.allclose(pt.lam * pt.c**p.sigma, 1.0, rtol=1e-9)
    lhs = pt.z**p.beta
    rhs = p.gamma * (1 - p.beta) * pt.lam / (p.delta_star * pt.mu_star)
    assert np.allclose(lhs, rhs, rtol=1e-8)
