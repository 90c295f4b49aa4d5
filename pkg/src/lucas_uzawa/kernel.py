"""The transition variable ``z = u h* / k`` and the discounted kernels built on it.

``z`` obeys a Bernoulli equation whose solution relaxes monotonically from
``z0`` to the steady value ``z_bar`` at rate ``decay_a``.  Every dynamic
solution family is written in terms of ``z`` and two integrals of
``z(s)**((sigma - beta)/sigma)``:

    F(t) = int_0^t z(s)^p exp(-xi_tilde s) ds
    G(t) = int_0^t z(s)^p exp(-g_decay s) ds

Tails ``F(inf) - F(t)`` are needed at large ``t`` where the difference of two
nearly equal numbers would lose every digit, so they are computed directly as
``exp(-rate t) * tail_scaled(t)`` with
``tail_scaled(t) = int_0^inf z(t + s)^p exp(-rate s) ds``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from . import quadrature
from .bgp import require_window
from .errors import NonPositiveZ0
from .params import ValidatedParams
from .quadrature import QuadratureResult

# relative accuracy of the cached panel rule used for trajectory evaluation
TAIL_RTOL = 1e-14


@dataclass(frozen=True)
class KernelContext:
    params: ValidatedParams
    z0: float
    z_bar: float
    decay_a: float
    xi_tilde: float
    g_decay: float
    power: float  # (sigma - beta) / sigma

    @property
    def degenerate(self) -> bool:
        """True when the path starts on the BGP and z stays constant."""
        return abs(self.z0 / self.z_bar - 1.0) <= 4e-16

    def rate(self, which: str) -> float:
        if which == "F":
            return self.xi_tilde
        if which == "G":
            return self.g_decay
        raise ValueError(f"unknown kernel {which!r}")

    def zp_bounds(self) -> tuple[float, float]:
        """Range of z(s)**power along the path (z is monotone in s)."""
        lo, hi = sorted((self.z0**self.power, self.z_bar**self.power))
        return lo, hi

    def horizon(self, which: str, tol: float) -> float:
        """Truncation point T with analytic tail bound max(z^p) e^{-rate T}/rate < tol/2."""
        rate = self.rate(which)
        zmax = self.zp_bounds()[1]
        return max(0.0, math.log(2.0 * zmax / (rate * tol)) / rate)

    def scale(self, which: str) -> float:
        return self.zp_bounds()[1] / self.rate(which)

    @cached_property
    def _panels(self) -> dict[str, np.ndarray]:
        out = {}
        for which in ("F", "G"):
            tol = TAIL_RTOL * self.scale(which)
            S = self.horizon(which, tol)
            rate = self.rate(which)
            edges, *_ = quadrature.adaptive_panels(
                lambda s, rate=rate: self._zp(s) * np.exp(-rate * s), 0.0, S, tol / 2.0,
                initial_panels=max(4, int(math.ceil(rate * S / 2.0))),
            )
            out[which] = edges
        return out

    @cached_property
    def F_inf(self) -> float:
        return float(tail_scaled(self, "F", 0.0))

    @cached_property
    def G_inf(self) -> float:
        return float(tail_scaled(self, "G", 0.0))

    def _zp(self, t):
        return z_path_unchecked(self, t) ** self.power


@lru_cache(maxsize=256)
def kernel_context(p: ValidatedParams, z0: float) -> KernelContext:
    """Build (and memoise) the kernel for parameters ``p`` starting at ``z0``."""
    require_window(p)
    if not z0 > 0:
        raise NonPositiveZ0(f"z0 must be positive, got {z0!r}")
    b, pi, s, r = p.beta, p.pi, p.sigma, p.rho
    ds = p.delta_star
    return KernelContext(
        params=p,
        z0=float(z0),
        z_bar=(b * p.gamma / (ds + pi)) ** (1.0 / (b - 1.0)),
        decay_a=(1.0 - b) * (ds + pi) / b,
        xi_tilde=(ds + pi - pi * b) / b - (ds - r) / s,
        g_decay=(ds * s - ds + r) / s,
        power=(s - b) / s,
    )


def _check_t(t) -> None:
    if np.any(np.asarray(t) < 0):
        raise ValueError("t must be non-negative")


def z_path_unchecked(ctx: KernelContext, t):
    b = ctx.params.beta
    if ctx.degenerate:
        return np.full_like(np.asarray(t, dtype=float), ctx.z_bar)[()]
    A = ctx.z_bar ** (1.0 - b)
    B = ctx.z0 ** (1.0 - b)
    denom = (A - B) * np.exp(-ctx.decay_a * np.asarray(t, dtype=float)) + B
    return ctx.z_bar * ctx.z0 / denom ** (1.0 / (1.0 - b))


def z_path(ctx: KernelContext, t):
    """z(t) = z_bar z0 / [(z_bar^{1-b} - z0^{1-b}) e^{-a t} + z0^{1-b}]^{1/(1-b)}."""
    _check_t(t)
    return z_path_unchecked(ctx, t)


def z_log_derivative(ctx: KernelContext, t):
    """Analytic d log z / dt; sign follows z_bar - z0 and decays like e^{-a t}."""
    _check_t(t)
    t = np.asarray(t, dtype=float)
    if ctx.degenerate:
        return np.zeros_like(t)[()]
    p = ctx.params
    b = p.beta
    A = ctx.z_bar ** (1.0 - b)
    B = ctx.z0 ** (1.0 - b)
    e = (A - B) * np.exp(-ctx.decay_a * t)
    return ((p.delta_star + p.pi) / b * e / (e + B))[()]


def _integrand(ctx: KernelContext, which: str):
    rate = ctx.rate(which)
    return lambda s: ctx._zp(s) * np.exp(-rate * s)


def _kernel_integral(ctx: KernelContext, which: str, t: float, tol: float) -> QuadratureResult:
    _check_t(t)
    if tol <= 0:
        raise ValueError("tol must be positive")
    rate = ctx.rate(which)
    if t == 0:
        return QuadratureResult(0.0, 0.0, 0)
    if ctx.degenerate:
        return QuadratureResult(ctx.z_bar**ctx.power * -math.expm1(-rate * t) / rate, 0.0, 0)
    return quadrature.integrate(_integrand(ctx, which), 0.0, float(t), tol)


def F_integral(ctx: KernelContext, t: float, tol: float = 1e-12) -> QuadratureResult:
    """F(t) = int_0^t z(s)^((sigma-beta)/sigma) e^{-xi_tilde s} ds."""
    return _kernel_integral(ctx, "F", t, tol)


def G_integral(ctx: KernelContext, t: float, tol: float = 1e-12) -> QuadratureResult:
    """G(t) = int_0^t z(s)^((sigma-beta)/sigma) e^{-g_decay s} ds."""
    return _kernel_integral(ctx, "G", t, tol)


def _kernel_limit(ctx: KernelContext, which: str, tol: float) -> float:
    if ctx.degenerate:
        return ctx.z_bar**ctx.power / ctx.rate(which)
    T = ctx.horizon(which, tol)
    return _kernel_integral(ctx, which, T, tol / 2.0).value


def F_limit(ctx: KernelContext, tol: float = 1e-12) -> float:
    """lim F(t): truncated at T where the exponential tail bound is below tol/2."""
    return _kernel_limit(ctx, "F", tol)


def G_limit(ctx: KernelContext, tol: float = 1e-12) -> float:
    return _kernel_limit(ctx, "G", tol)


def tail_bound(ctx: KernelContext, which: str, T: float) -> float:
    """Upper bound on int_T^inf z^p e^{-rate s} ds."""
    rate = ctx.rate(which)
    return ctx.zp_bounds()[1] * math.exp(-rate * T) / rate


def tail_scaled(ctx: KernelContext, which: str, t):
    """e^{rate t} * (K(inf) - K(t)) for K in {F, G}, vectorised over ``t``.

    Uses a fixed composite Kronrod rule whose panels are fitted once per
    context, so the result is a smooth function of ``t`` (safe to
    finite-difference).
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    rate = ctx.rate(which)
    if ctx.degenerate:
        out = np.full_like(t_arr, ctx.z_bar**ctx.power / rate)
    else:
        x, half = quadrature.panel_nodes(ctx._panels[which])
        weight = np.exp(-rate * x)
        vals = ctx._zp(t_arr[:, None, None] + x[None, :, :]) * weight[None, :, :]
        kron, _ = quadrature.apply_rule(vals, half[None, :])
        out = kron.sum(axis=1)
    return out[0] if np.ndim(t) == 0 else out
