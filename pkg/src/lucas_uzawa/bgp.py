"""Balanced-growth-path quantities, in original and in transformed variables."""
from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import WindowViolated
from .params import ValidatedParams, bgp_window


@dataclass(frozen=True)
class BgpSummary:
    g_c: float
    g_k: float
    g_h: float
    g_hstar: float
    g_u: float
    u_bar: float
    xi: float
    z_bar: float
    k_over_hphi: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def require_window(p: ValidatedParams) -> None:
    if not p.bgp_window_satisfied:
        lower, middle, upper = bgp_window(p)
        raise WindowViolated(
            "growth window rho(1-beta) < delta(1-beta+theta) < "
            "rho(1-beta) + delta*sigma*(1-beta+theta) fails: "
            f"{lower:.6g} < {middle:.6g} < {upper:.6g}"
        )


def bgp_summary(p: ValidatedParams) -> BgpSummary:
    """BGP summary written directly in the original parameters."""
    require_window(p)
    s, r, b, g, pi, d, th = p.sigma, p.rho, p.beta, p.gamma, p.pi, p.delta, p.theta
    one_b = 1.0 - b
    num = (d - r) * one_b + d * th
    g_c = num / (s * one_b)
    g_h = num / (s * (one_b + th))
    # numerator (rho - delta + sigma delta)(1-beta) + delta theta (sigma - 1) equals
    # upper - middle of the window; taking it from there keeps u_bar > 0 whenever
    # the window flag is set, even next to its edge
    lower, middle, upper = bgp_window(p)
    u_bar = (upper - middle) / (d * s * (one_b + th))
    xi = (d * (one_b + th) + pi * one_b**2) / (b * one_b) - (d * (one_b + th) - r * one_b) / (s * one_b)
    z_bar = ((d * (one_b + th) + pi * one_b) / (b * g * one_b)) ** (1.0 / one_b)
    return BgpSummary(
        g_c=g_c,
        g_k=g_c,
        g_h=g_h,
        g_hstar=g_c,
        g_u=0.0,
        u_bar=u_bar,
        xi=xi,
        z_bar=z_bar,
        k_over_hphi=u_bar / z_bar,
    )


def bgp_summary_transformed(p: ValidatedParams) -> BgpSummary:
    """BGP summary computed in ``(k, h*, delta*)`` and mapped back through phi."""
    require_window(p)
    s, r, b, pi = p.sigma, p.rho, p.beta, p.pi
    ds, phi = p.delta_star, p.phi
    g = (ds - r) / s
    u_bar = (r + ds * (s - 1.0)) / (ds * s)
    xi = (ds + pi * (1.0 - b)) / b - g
    z_bar = (b * p.gamma / (ds + pi)) ** (1.0 / (b - 1.0))
    return BgpSummary(
        g_c=g,
        g_k=g,
        g_h=g / phi,
        g_hstar=g,
        g_u=0.0,
        u_bar=u_bar,
        xi=xi,
        z_bar=z_bar,
        k_over_hphi=u_bar / z_bar,
    )
