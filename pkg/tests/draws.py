"""Random parameter draws inside the growth window, shared by the test modules."""
from __future__ import annotations

import numpy as np

from lucas_uzawa import ModelParams, NoRoot, SolutionFamily, derive_constants, validate

CANONICAL = dict(sigma=2.0, rho=0.04, beta=0.33, gamma=1.0, pi=0.02, delta=0.05, theta=0.1)


def canonical():
    return validate(ModelParams(**CANONICAL))


def draw_params(rng: np.random.Generator, sigma_beta: bool = False):
    """Sample by the steady labour share u_bar in [0.3, 0.9]; delta then follows,
    with delta* capped at 0.3.

    Keeping u_bar away from 0 keeps the discounted shadow values decaying at a
    rate comparable to min(xi, rho), which the transversality checks rely on.
    """
    while True:
        beta = rng.uniform(0.2, 0.5)
        if sigma_beta:
            sigma = beta
        else:
            sigma = rng.uniform(0.5, 3.0)
            if abs(sigma - 1.0) <= 0.05:
                continue
        rho = rng.uniform(0.01, 0.06)
        theta = rng.uniform(0.0, 0.3)
        pi = rng.uniform(0.0, 0.05)
        gamma = rng.uniform(0.5, 2.0)
        u_bar = rng.uniform(0.3, 0.9)
        denom = 1.0 - sigma * (1.0 - u_bar)
        if denom <= 0 or rho / denom > 0.3:
            continue
        phi = (1.0 - beta + theta) / (1.0 - beta)
        delta = rho / denom / phi
        p = validate(ModelParams(sigma, rho, beta, gamma, pi, delta, theta))
        if p.bgp_window_satisfied:
            return p


def draw_case(rng: np.random.Generator, p, family):
    """Initial stocks and derived constants for ``family``.

    k0 is in [0.5, 2]. For the dynamic families, h0* is moved off its steady
    value by a factor of exp(+-[0.1, 0.7]). The factor is halved while the
    saddle path would need u0 > 1 (a corner the closed forms do not cover).
    Returns (k0, h0, consts).
    """
    family = SolutionFamily(family)
    k0 = float(rng.uniform(0.5, 2.0))
    if not family.needs_h0:
        return k0, None, derive_constants(family, p, k0)
    bgp = derive_constants(SolutionFamily.General1, p, k0)
    log_factor = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 0.7))
    while True:
        h0 = (bgp.h0_star * np.exp(log_factor)) ** (1.0 / p.phi)
        try:
            return k0, float(h0), derive_constants(family, p, k0, float(h0))
        except NoRoot:
            log_factor /= 2.0


def general_families():
    return [SolutionFamily.General1, SolutionFamily.General2, SolutionFamily.General3]


def sigma_beta_families():
    return [SolutionFamily.SigmaBeta1, SolutionFamily.SigmaBeta2]
