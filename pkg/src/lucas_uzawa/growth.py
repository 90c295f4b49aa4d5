"""Growth rates of every variable: closed-form expressions and a finite-difference checker."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bgp import require_window
from .closed_form import SolutionConstants, SolutionFamily, _sigma_beta_gate, closure, log_state
from .errors import NonPositiveState
from .kernel import kernel_context, z_log_derivative
from .params import ValidatedParams

RATE_NAMES = ("g_c", "g_k", "g_h", "g_u", "g_lambda", "g_mu")


@dataclass(frozen=True)
class GrowthRates:
    g_c: float
    g_k: float
    g_h: float
    g_u: float
    g_lambda: float
    g_mu: float
    family: str | None = None
    t: float | None = None

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in ("t",) + RATE_NAMES}

    def rates(self) -> np.ndarray:
        return np.array([np.asarray(getattr(self, n), dtype=float) for n in RATE_NAMES])


def growth_static(p: ValidatedParams, family: str = SolutionFamily.General1.value, t=None) -> GrowthRates:
    """Constant growth rates of the BGP family, in original variables."""
    require_window(p)
    s, r, b, d, th = p.sigma, p.rho, p.beta, p.delta, p.theta
    one_b = 1.0 - b
    num = (d - r) * one_b + d * th
    g_lam = -num / one_b
    zero = 0.0 if t is None else np.zeros_like(np.asarray(t, dtype=float))
    return GrowthRates(
        g_c=num / (s * one_b) + zero,
        g_k=num / (s * one_b) + zero,
        g_h=num / (s * (one_b + th)) + zero,
        g_u=zero,
        g_lambda=g_lam + zero,
        g_mu=g_lam * (s * (one_b + th) - th) / (s * (one_b + th)) + zero,
        family=family,
        t=t,
    )


def _h_growth_general2(p, z, c_over_k, g_c, g_z, g_k):
    s, b, g = p.sigma, p.beta, p.gamma
    R = p.rho + p.pi - p.pi * s
    zb1 = z ** (b - 1.0)
    B = b * g * (1.0 - s) - R * zb1
    den = s * zb1 * c_over_k + B
    bracket = (
        s * zb1 / (s * zb1 + B / c_over_k) * g_c
        + (s * b * zb1 * c_over_k - R * (b - 1.0) * zb1 + B) / den * g_z
        + B / den * g_k
    )
    return (1.0 - b) / (1.0 - b + p.theta) * bracket


def growth_dynamic(family, consts: SolutionConstants, p: ValidatedParams, t,
                   h_step: float = 1e-4) -> GrowthRates:
    """Time-varying growth rates of General2 / General3 at ``t`` (scalar or array).

    ``g_mu`` is returned as ``(rho - delta*) + (phi - 1) g_h``: ``mu*`` grows at
    the constant rate ``rho - delta*`` and ``mu = phi mu* h^(phi-1)``, so ``g_mu``
    only settles to its constant asymptote as ``g_h`` does.  For General3,
    ``g_h`` comes from finite differences of ``log h``.
    """
    family = SolutionFamily(family)
    if family not in (SolutionFamily.General2, SolutionFamily.General3):
        raise ValueError("growth_dynamic handles General2 and General3")
    require_window(p)
    stat = growth_static(p)
    b, s, th = p.beta, p.sigma, p.theta
    one_b = 1.0 - b
    ctx = kernel_context(p, consts.z0)
    t_arr = np.asarray(t, dtype=float)
    g_z = np.asarray(z_log_derivative(ctx, t_arr), dtype=float)
    ls = log_state(family, consts, p, t_arr)
    c_over_k = np.exp(ls.log_c - ls.log_k)
    g_c = stat.g_c - b / s * g_z
    g_k = (p.pi * one_b**2 + p.delta * (one_b + th)) / (b * one_b) - c_over_k - g_z
    if family is SolutionFamily.General2:
        g_h = _h_growth_general2(p, ls.z, c_over_k, g_c, g_z, g_k)
    else:
        d, _ = _fd_logs(closure(family, consts, p), np.atleast_1d(t_arr), h_step)
        g_h = d[2].reshape(t_arr.shape)
    phi = p.phi
    g_u = g_k - phi * g_h + g_z
    g_lam = stat.g_lambda + b * g_z
    g_mu = (p.rho - p.delta_star) + (phi - 1.0) * g_h
    out = dict(g_c=g_c, g_k=g_k, g_h=g_h, g_u=g_u, g_lambda=g_lam, g_mu=g_mu)
    if np.ndim(t) == 0:
        out = {k: float(v) for k, v in out.items()}
    return GrowthRates(**out, family=family.value, t=t)


def growth_sigma_beta(family, consts: SolutionConstants, p: ValidatedParams, t) -> GrowthRates:
    """Growth rates of SigmaBeta1 (constant) and SigmaBeta2 (shifted by z'/z)."""
    family = SolutionFamily(family)
    if not family.sigma_beta:
        raise ValueError("growth_sigma_beta handles SigmaBeta1 and SigmaBeta2")
    _sigma_beta_gate(p)
    require_window(p)
    b, r, d, th = p.beta, p.rho, p.delta, p.theta
    one_b = 1.0 - b
    num = (d - r) * one_b + d * th
    t_arr = np.asarray(t, dtype=float)
    if family is SolutionFamily.SigmaBeta2:
        g_z = np.asarray(z_log_derivative(kernel_context(p, consts.z0), t_arr), dtype=float)
    else:
        g_z = np.zeros_like(t_arr)
    out = dict(
        g_c=num / (b * one_b) - g_z,
        g_k=num / (b * one_b) - g_z,
        g_h=num / (b * (one_b + th)) + 0.0 * g_z,
        g_u=0.0 * g_z,
        g_lambda=-num / one_b + b * g_z,
        g_mu=-num * (b - th) / (b * (one_b + th)) + 0.0 * g_z,
    )
    if np.ndim(t) == 0:
        out = {k: float(v) for k, v in out.items()}
    return GrowthRates(**out, family=family.value, t=t)


def growth_rates(family, consts: SolutionConstants, p: ValidatedParams, t) -> GrowthRates:
    """Dispatch to the closed-form growth rates of ``family``."""
    family = SolutionFamily(family)
    if family is SolutionFamily.General1:
        return growth_static(p, family.value, t)
    if family.sigma_beta:
        return growth_sigma_beta(family, consts, p, t)
    return growth_dynamic(family, consts, p, t)


_CENTRAL = (np.array([-2, -1, 0, 1, 2]), np.array([1, -8, 0, 8, -1]) / 12.0)
_FORWARD = (np.array([0, 1, 2, 3, 4]), np.array([-25, 48, -36, 16, -3]) / 12.0)
_COMPONENTS = ("c", "k", "h", "u", "lam", "mu")


def _fd_logs(traj, t: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    # forward stencil only where the central one would reach below t = 0
    fwd = (t - 2 * h < 0)[:, None]
    offsets = np.where(fwd, _FORWARD[0], _CENTRAL[0])
    weights = np.where(fwd, _FORWARD[1], _CENTRAL[1])
    times = t[:, None] + offsets * h
    pt = traj(times.ravel())
    vals = np.array([np.asarray(getattr(pt, name), dtype=float) for name in _COMPONENTS])
    if np.any(~(vals > 0)):
        raise NonPositiveState("finite-difference stencil hit a non-positive component")
    logs = np.log(vals).reshape(6, *times.shape)
    # differences against the offset-0 node, so a constant path gives exactly zero
    base = np.take_along_axis(logs, np.argmin(np.abs(offsets), axis=-1)[None, :, None], axis=-1)
    return ((logs - base) * weights).sum(axis=-1) / h, vals


def growth_finite_diff(traj, t, h_step: float = 1e-4) -> GrowthRates:
    """Five-point central differences of log c, k, h, u, lambda, mu.

    When the six components span more than six orders of magnitude the
    estimate is Richardson-extrapolated from steps ``h`` and ``h/2``.
    """
    if h_step <= 0:
        raise ValueError("h_step must be positive")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 2 * h_step):
        raise ValueError("t must be at least 2 * h_step")
    d, vals = _fd_logs(traj, t_arr, h_step)
    if np.log10(vals.max() / vals.min()) > 6:
        d_half, _ = _fd_logs(traj, t_arr, h_step / 2)
        d = (16.0 * d_half - d) / 15.0
    if np.ndim(t) == 0:
        d = d[:, 0]
        return GrowthRates(*(float(v) for v in d), t=float(t))
    return GrowthRates(*d, t=t)
