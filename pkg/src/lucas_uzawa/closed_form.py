"""Integration constants and pointwise evaluation of the five closed-form families.

General1/2/3 are written in the transformed variables ``(c, k, h*, u, lambda, mu*)``
and mapped back to ``(h, mu)`` at the end.  SigmaBeta1/2 (sigma = beta) are
written directly in the original variables.

Evaluation works internally with logarithms of the stocks and prices so that
horizons of a few thousand time units neither overflow nor underflow.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .bgp import bgp_summary_transformed, require_window
from .errors import EvalDomain, NoRoot, NonPositiveState, SigmaBetaMismatch
from .kernel import kernel_context, tail_scaled, z_path_unchecked
from .params import ValidatedParams, inverse_transform_state, transform_state

log = logging.getLogger(__name__)

SIGMA_BETA_ATOL = 1e-12
U0_SCAN = np.linspace(1e-4, 1.0, 64)
U0_XTOL = 1e-12


class SolutionFamily(str, enum.Enum):
    General1 = "General1"
    General2 = "General2"
    General3 = "General3"
    SigmaBeta1 = "SigmaBeta1"
    SigmaBeta2 = "SigmaBeta2"

    @property
    def needs_h0(self) -> bool:
        return self in (SolutionFamily.General2, SolutionFamily.General3, SolutionFamily.SigmaBeta2)

    @property
    def sigma_beta(self) -> bool:
        return self in (SolutionFamily.SigmaBeta1, SolutionFamily.SigmaBeta2)


@dataclass(frozen=True)
class SolutionConstants:
    family: SolutionFamily
    c0: float
    k0: float
    h0_star: float
    u0: float
    z0: float
    c1: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["family"] = self.family.value
        return d


@dataclass(frozen=True)
class TrajectoryPoint:
    """State and costates at time ``t``; fields are floats or equal-length arrays."""

    t: float
    c: float
    k: float
    h: float
    h_star: float
    u: float
    lam: float
    mu: float
    mu_star: float
    z: float

    COLUMNS = ("t", "c", "k", "h", "u", "lambda", "mu", "h_star", "mu_star", "z")

    def column(self, name: str):
        return self.lam if name == "lambda" else getattr(self, name)

    def as_dict(self) -> dict:
        return {name: self.column(name) for name in self.COLUMNS}


def _sigma_beta_gate(p: ValidatedParams) -> None:
    if abs(p.sigma - p.beta) > SIGMA_BETA_ATOL:
        raise SigmaBetaMismatch(f"sigma={p.sigma} differs from beta={p.beta}")


def _check_positive(**values) -> None:
    for name, v in values.items():
        if not (v > 0 and math.isfinite(v)):
            raise NonPositiveState(f"{name} must be positive, got {v!r}")


def _c1_from(p: ValidatedParams, c0: float, z0: float) -> float:
    # c0 z0^(beta/sigma) = (c1 delta* / ((1-beta) gamma))^(-1/sigma)
    return (1.0 - p.beta) * p.gamma / p.delta_star * (c0 * z0 ** (p.beta / p.sigma)) ** (-p.sigma)


# --------------------------------------------------------------------------- constants

def derive_constants_sol1(p: ValidatedParams, k0: float,
                          family: SolutionFamily = SolutionFamily.General1) -> SolutionConstants:
    """Constants of the exact BGP path: only ``k0`` is free."""
    require_window(p)
    _check_positive(k0=k0)
    bgp = bgp_summary_transformed(p)
    c0 = bgp.xi * k0
    z0 = bgp.z_bar
    return SolutionConstants(
        family=family, c0=c0, k0=float(k0), h0_star=z0 * k0 / bgp.u_bar,
        u0=bgp.u_bar, z0=z0, c1=_c1_from(p, c0, z0),
    )


def _c0_from_limit(p: ValidatedParams, k0: float, z0: float) -> float:
    # lim F = k0 / (c0 z0^((beta - sigma)/sigma))
    ctx = kernel_context(p, z0)
    return k0 * z0**ctx.power / ctx.F_inf


def _sol2_relation(p: ValidatedParams, k0: float, h0_star: float):
    s, b, g = p.sigma, p.beta, p.gamma
    ds = p.delta_star
    R = p.rho + p.pi - p.pi * s
    target = g * (1.0 - b) * (p.rho - ds + ds * s) / ds

    def residual(u0: float) -> float:
        z0 = u0 * h0_star / k0
        c0 = _c0_from_limit(p, k0, z0)
        D = s * c0 * z0 ** (b - 1.0) - R * k0 * z0 ** (b - 1.0) + b * g * (1.0 - s) * k0
        return u0 / k0 * D / target - 1.0

    return residual


def _sol3_relation(p: ValidatedParams, k0: float, h0_star: float):
    ds = p.delta_star
    a = (1.0 - p.beta) * (ds + p.pi) / p.beta

    def residual(u0: float) -> float:
        ctx = kernel_context(p, u0 * h0_star / k0)
        # lim G = (a + delta* u0) / (delta* u0) * lim F
        return ds * u0 * ctx.G_inf / ((a + ds * u0) * ctx.F_inf) - 1.0

    return residual


def solve_u0(residual, scan=U0_SCAN, xtol: float = U0_XTOL) -> float:
    """First root of ``residual`` on the scan grid, refined by bracketing.

    Monotonicity is not assumed: the grid is scanned left to right and the
    first sign change (or exact zero) is refined.
    """
    values = np.array([residual(float(u)) for u in scan])
    for i, v in enumerate(values):
        if v == 0.0:
            return float(scan[i])
        if i and np.sign(values[i - 1]) * np.sign(v) < 0:
            return float(brentq(residual, scan[i - 1], scan[i], xtol=xtol, rtol=4 * np.finfo(float).eps))
    raise NoRoot(
        f"consistency relation has no sign change for u0 in [{scan[0]:g}, {scan[-1]:g}]"
    )


def _derive_dynamic(p, k0, h0, relation, family) -> SolutionConstants:
    require_window(p)
    _check_positive(k0=k0, h0=h0)
    h0_star, _ = transform_state(float(h0), 1.0, p)
    u0 = solve_u0(relation(p, k0, h0_star))
    z0 = u0 * h0_star / k0
    c0 = _c0_from_limit(p, k0, z0)
    return SolutionConstants(
        family=family, c0=c0, k0=float(k0), h0_star=h0_star, u0=u0, z0=z0,
        c1=_c1_from(p, c0, z0),
    )


def derive_constants_sol2(p: ValidatedParams, k0: float, h0: float) -> SolutionConstants:
    """Solve the u0 relation jointly with the F-limit identity for given stocks."""
    return _derive_dynamic(p, k0, h0, _sol2_relation, SolutionFamily.General2)


def derive_constants_sol3(p: ValidatedParams, k0: float, h0: float) -> SolutionConstants:
    """Solve the G-limit relation jointly with the F-limit identity for given stocks."""
    return _derive_dynamic(p, k0, h0, _sol3_relation, SolutionFamily.General3)


def derive_constants_sigma_beta(family: SolutionFamily, p: ValidatedParams, k0: float,
                                h0: float | None = None) -> SolutionConstants:
    """Constants for the sigma = beta families.

    SigmaBeta1 is the BGP path (``k0`` only).  SigmaBeta2 keeps ``u = u_bar`` and
    ``c0 / k0 = xi`` but starts from ``z0 = u_bar h0* / k0``.
    """
    family = SolutionFamily(family)
    _sigma_beta_gate(p)
    if family is SolutionFamily.SigmaBeta1:
        return derive_constants_sol1(p, k0, family=family)
    if family is not SolutionFamily.SigmaBeta2:
        raise ValueError(f"{family.value} is not a sigma = beta family")
    require_window(p)
    _check_positive(k0=k0, h0=h0)
    bgp = bgp_summary_transformed(p)
    h0_star, _ = transform_state(float(h0), 1.0, p)
    z0 = bgp.u_bar * h0_star / k0
    c0 = bgp.xi * k0
    return SolutionConstants(
        family=family, c0=c0, k0=float(k0), h0_star=h0_star, u0=bgp.u_bar, z0=z0,
        c1=_c1_from(p, c0, z0),
    )


def derive_constants(family, p: ValidatedParams, k0: float, h0: float | None = None) -> SolutionConstants:
    family = SolutionFamily(family)
    if family is SolutionFamily.General1:
        return derive_constants_sol1(p, k0)
    if family is SolutionFamily.General2:
        return derive_constants_sol2(p, k0, h0)
    if family is SolutionFamily.General3:
        return derive_constants_sol3(p, k0, h0)
    return derive_constants_sigma_beta(family, p, k0, h0)


# --------------------------------------------------------------------------- evaluation

@dataclass(frozen=True)
class LogState:
    """Logs of the positive transformed quantities plus ``u`` and ``z``."""

    t: np.ndarray
    log_c: np.ndarray
    log_k: np.ndarray
    log_h_star: np.ndarray
    u: np.ndarray
    log_lam: np.ndarray
    log_mu_star: np.ndarray
    z: np.ndarray


def _safe_log(x, what: str):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise EvalDomain(f"{what} left the positive domain; constants are inconsistent")
    return np.log(x)


def _log_state_general(family, consts, p, t) -> LogState:
    s, b, g_ = p.sigma, p.beta, p.gamma
    ds, r = p.delta_star, p.rho
    g = (ds - r) / s
    n = np.ones_like(t)
    if family is SolutionFamily.General1:
        return LogState(
            t=t,
            log_c=math.log(consts.c0) + g * t,
            log_k=math.log(consts.k0) + g * t,
            log_h_star=math.log(consts.h0_star) + g * t,
            u=consts.u0 * n,
            log_lam=-s * math.log(consts.c0) + (r - ds) * t,
            log_mu_star=math.log(consts.c1) + (r - ds) * t,
            z=consts.z0 * n,
        )

    ctx = kernel_context(p, consts.z0)
    z = _z(ctx, t)
    log_z = np.log(z)
    log_scale = math.log(consts.c0) + b / s * math.log(consts.z0)
    TF = tail_scaled(ctx, "F", t)
    log_c = log_scale + g * t - b / s * log_z
    # k = c0 z0^(b/s) (lim F - F(t)) z^-1 e^{m t}, with lim F - F(t) = e^{-xi t} TF(t)
    log_k = log_scale + _safe_log(TF, "lim F - F(t)") + g * t - log_z
    c_over_k = np.exp(log_c - log_k)
    log_lam = -s * math.log(consts.c0) - b * math.log(consts.z0) + (r - ds) * t + b * log_z
    log_mu_star = math.log(consts.c1) + (r - ds) * t

    if family is SolutionFamily.General2:
        R = r + p.pi - p.pi * s
        z0, k0, u0 = consts.z0, consts.k0, consts.u0
        D = s * consts.c0 * z0 ** (b - 1.0) - R * k0 * z0 ** (b - 1.0) + b * g_ * (1.0 - s) * k0
        bracket = s * c_over_k + b * g_ * (1.0 - s) * z ** (1.0 - b) - R
        log_bracket = _safe_log(bracket, "h* bracket")
        # h* = h0*/(z0 D) z^b [s c + (b g (1-s) z^(1-b) - R) k]
        log_h_star = math.log(consts.h0_star) - math.log(z0) - _safe_log(D, "D") + b * log_z + log_k + log_bracket
        u = u0 / k0 * D * z ** (1.0 - b) / bracket
    elif family is SolutionFamily.General3:
        a = ctx.decay_a
        u0 = consts.u0
        TG = tail_scaled(ctx, "G", t)
        # (a + ds u0) lim F - ds u0 G(t) = ds u0 (lim G - G(t)) by the G-limit identity
        w = ds * u0 * (TG - TF)
        log_w = _safe_log(w, "h* bracket")
        log_h_star = log_scale + log_w - math.log(a * u0) + g * t
        u = a * u0 * TF / w
    else:
        raise ValueError(f"{family.value} is not a general family")
    if np.any(u > 1.0):
        log.warning("%s: u(t) exceeds 1 on part of the grid (max %.6g)", family.value, float(np.max(u)))
    return LogState(t, log_c, log_k, log_h_star, u, log_lam, log_mu_star, z)


def _z(ctx, t):
    return np.asarray(z_path_unchecked(ctx, t), dtype=float) * np.ones_like(t)


def _log_state_sigma_beta(family, consts, p, t) -> LogState:
    b, r, d, th = p.beta, p.rho, p.delta, p.theta
    one_b = 1.0 - b
    phi = p.phi
    g_c = ((d - r) * one_b + d * th) / (b * one_b)
    g_h = ((d - r) * one_b + d * th) / (b * (one_b + th))
    g_lam = ((r - d) * one_b - d * th) / one_b
    g_mu = ((r - d) * one_b - d * th) * (b - th) / (b * (one_b + th))
    u_bar = (r - d * (one_b + th)) * one_b / (d * b * (one_b + th))
    h0 = consts.h0_star ** (1.0 / phi)
    log_mu0 = math.log(phi) + th / one_b * math.log(h0) + math.log(consts.c1)
    n = np.ones_like(t)
    if family is SolutionFamily.SigmaBeta1:
        log_c = math.log(consts.c0) + g_c * t
        log_k = math.log(consts.k0) + g_c * t
        log_lam = -b * math.log(consts.c0) + g_lam * t
        z = consts.z0 * n
    else:
        ctx = kernel_context(p, consts.z0)
        z = _z(ctx, t)
        log_z = np.log(z)
        lz0 = math.log(consts.z0)
        log_c = math.log(consts.c0) + lz0 + g_c * t - log_z
        log_k = math.log(consts.k0) + lz0 + g_c * t - log_z
        log_lam = -b * (math.log(consts.c0) + lz0) + g_lam * t + b * log_z
    log_h = math.log(h0) + g_h * t
    log_mu = log_mu0 + g_mu * t
    # h* = h^phi, mu* = mu h^(1-phi) / phi
    return LogState(
        t=t, log_c=log_c, log_k=log_k, log_h_star=phi * log_h, u=u_bar * n,
        log_lam=log_lam, log_mu_star=log_mu + (1.0 - phi) * log_h - math.log(phi), z=z,
    )


def log_state(family, consts: SolutionConstants, p: ValidatedParams, t) -> LogState:
    """Evaluate a family on an array of times, returning logs of positive fields."""
    family = SolutionFamily(family)
    t = np.asarray(t, dtype=float)
    if family.sigma_beta:
        _sigma_beta_gate(p)
        require_window(p)
        return _log_state_sigma_beta(family, consts, p, t)
    require_window(p)
    return _log_state_general(family, consts, p, t)


def _point_from_logs(ls: LogState, p: ValidatedParams, scalar: bool) -> TrajectoryPoint:
    c, k, h_star = np.exp(ls.log_c), np.exp(ls.log_k), np.exp(ls.log_h_star)
    lam, mu_star = np.exp(ls.log_lam), np.exp(ls.log_mu_star)
    h, mu = inverse_transform_state(h_star, mu_star, p)
    u = np.asarray(ls.u, dtype=float)
    fields = dict(t=ls.t, c=c, k=k, h=h, h_star=h_star, u=u, lam=lam, mu=mu,
                  mu_star=mu_star, z=np.asarray(ls.z, dtype=float))
    if scalar:
        fields = {key: float(np.asarray(v).reshape(-1)[0]) for key, v in fields.items()}
    return TrajectoryPoint(**fields)


def _check_t(t):
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be non-negative")


def eval_general(family, consts: SolutionConstants, p: ValidatedParams, t) -> TrajectoryPoint:
    """Evaluate General1/2/3 at ``t`` (scalar or array)."""
    family = SolutionFamily(family)
    if family.sigma_beta:
        raise ValueError("use eval_sigma_beta for sigma = beta families")
    _check_t(t)
    return _point_from_logs(log_state(family, consts, p, t), p, np.ndim(t) == 0)


def eval_sigma_beta(family, consts: SolutionConstants, p: ValidatedParams, t) -> TrajectoryPoint:
    """Evaluate SigmaBeta1/2 from their original-variable formulas."""
    family = SolutionFamily(family)
    if not family.sigma_beta:
        raise ValueError("eval_sigma_beta only handles SigmaBeta1 / SigmaBeta2")
    _sigma_beta_gate(p)
    _check_t(t)
    return _point_from_logs(log_state(family, consts, p, t), p, np.ndim(t) == 0)


def evaluate(family, consts: SolutionConstants, p: ValidatedParams, t) -> TrajectoryPoint:
    family = SolutionFamily(family)
    if family.sigma_beta:
        return eval_sigma_beta(family, consts, p, t)
    return eval_general(family, consts, p, t)


def to_original(point: TrajectoryPoint, p: ValidatedParams) -> TrajectoryPoint:
    """Recompute ``(h, mu)`` from the transformed fields."""
    h, mu = inverse_transform_state(point.h_star, point.mu_star, p)
    return replace(point, h=h, mu=mu)


def closure(family, consts: SolutionConstants, p: ValidatedParams, corrupt: dict | None = None):
    """Return ``t -> TrajectoryPoint`` for the family; ``corrupt`` scales columns (fault injection).

    ``corrupt`` maps field names (``c``, ``k``, ``h_star``, ``u``, ``lam``, ``mu_star``) to
    multiplicative factors applied to the transformed state.
    """
    family = SolutionFamily(family)

    def traj(t) -> TrajectoryPoint:
        pt = evaluate(family, consts, p, t)
        if corrupt:
            pt = to_original(replace(pt, **{k: getattr(pt, k) * v for k, v in corrupt.items()}), p)
            pt = replace(pt, z=pt.u * pt.h_star / pt.k)
        return pt

    return traj
