"""First-order-condition system in transformed variables and checks against it.

The optimality conditions for ``(c, k, h*, u, lambda, mu*)`` are

    lambda = c^-sigma
    (u h*/k)^beta = gamma (1-beta) lambda / (delta* mu*)
    k'      = gamma k^beta (u h*)^(1-beta) - pi k - c
    h*'     = delta* (1-u) h*
    lambda' = -lambda beta gamma (u h*/k)^(1-beta) + lambda (rho + pi)
    mu*'    = mu* (rho - delta*)
    c'/c    = (beta gamma / sigma) (u h*/k)^(1-beta) - (rho + pi)/sigma
    u'/u    = (delta* + pi)(1-beta)/beta - c/k + delta* u

Verification of a closed-form path is residual based: the system is saddle-path
unstable, so forward integration cannot certify a long horizon, while finite
differences of the candidate path checked against the right-hand side are
local and immune to that instability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveState, StepFailure
from .params import ValidatedParams

ODE_NAMES = ("k_dot", "h_star_dot", "c_dot_over_c", "u_dot_over_u", "lambda_dot", "mu_star_dot")
STATIC_NAMES = ("lambda_eq_c_pow", "static_u")
STATE_FIELDS = ("c", "k", "h_star", "u", "lam", "mu_star")


@dataclass(frozen=True)
class FocState:
    c: float
    k: float
    h_star: float
    u: float
    lam: float
    mu_star: float

    def to_array(self) -> np.ndarray:
        return np.array([self.c, self.k, self.h_star, self.u, self.lam, self.mu_star], dtype=float)

    @classmethod
    def from_array(cls, y) -> "FocState":
        return cls(*(float(v) for v in y))

    @classmethod
    def from_point(cls, pt) -> "FocState":
        return cls(pt.c, pt.k, pt.h_star, pt.u, pt.lam, pt.mu_star)


def rhs_array(y: np.ndarray, p: ValidatedParams) -> np.ndarray:
    """Time derivatives of ``y = (c, k, h*, u, lambda, mu*)``; broadcasts over trailing axes."""
    c, k, hs, u, lam, mus = y
    b, g, s, r, pi = p.beta, p.gamma, p.sigma, p.rho, p.pi
    ds = p.delta_star
    zp = (u * hs / k) ** (1.0 - b)
    return np.array([
        c * (b * g / s * zp - (r + pi) / s),
        g * k**b * (u * hs) ** (1.0 - b) - pi * k - c,
        ds * (1.0 - u) * hs,
        u * ((ds + pi) * (1.0 - b) / b - c / k + ds * u),
        -lam * b * g * zp + lam * (r + pi),
        mus * (r - ds),
    ])


def foc_rhs(s: FocState, p: ValidatedParams) -> FocState:
    """Derivatives of every component of ``s``, returned as a FocState of rates."""
    y = s.to_array()
    if np.any(~(y > 0)):
        raise NonPositiveState(f"FOC state must be positive: {s}")
    return FocState.from_array(rhs_array(y, p))


# --------------------------------------------------------------------------- integration

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4

MIN_STEP = 1e-12


@dataclass
class DenseTrajectory:
    """Accepted steps of an integration with cubic Hermite dense output."""

    t: np.ndarray
    y: np.ndarray  # (n, 6)
    f: np.ndarray  # (n, 6)
    success: bool = True
    message: str = ""
    rejected_steps: int = 0

    @property
    def t_reached(self) -> float:
        return float(self.t[-1])

    def __call__(self, t) -> np.ndarray:
        """State at ``t`` (scalar -> (6,), array -> (6, m))."""
        tq = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(tq < self.t[0]) or np.any(tq > self.t[-1]):
            raise ValueError(f"t outside integrated range [{self.t[0]}, {self.t[-1]}]")
        i = np.clip(np.searchsorted(self.t, tq, side="right") - 1, 0, len(self.t) - 2)
        t0, t1 = self.t[i], self.t[i + 1]
        h = t1 - t0
        x = (tq - t0) / h
        h00 = 2 * x**3 - 3 * x**2 + 1
        h10 = x**3 - 2 * x**2 + x
        h01 = -2 * x**3 + 3 * x**2
        h11 = x**3 - x**2
        y = (h00[:, None] * self.y[i] + (h10 * h)[:, None] * self.f[i]
             + h01[:, None] * self.y[i + 1] + (h11 * h)[:, None] * self.f[i + 1])
        return y[0] if np.ndim(t) == 0 else y.T

    def state(self, t: float) -> FocState:
        return FocState.from_array(self(t))


def integrate(s0: FocState, p: ValidatedParams, t_end: float, tol: float = 1e-8,
              h0: float | None = None, max_steps: int = 1_000_000,
              strict: bool = False) -> DenseTrajectory:
    """Integrate the FOC system with an adaptive Dormand-Prince 5(4) pair and PI control.

    Steps that leave the positive orthant are rejected and retried with a
    smaller step.  If the step falls below ``MIN_STEP`` the run stops and the
    trajectory up to that point is returned with ``success=False``; pass
    ``strict=True`` to raise :class:`StepFailure` instead.
    """
    if t_end <= 0:
        raise ValueError("t_end must be positive")
    y = s0.to_array()
    if np.any(~(y > 0)):
        raise NonPositiveState(f"initial FOC state must be positive: {s0}")
    rtol = atol = tol
    f = rhs_array(y, p)
    ts, ys, fs = [0.0], [y.copy()], [f.copy()]
    t = 0.0
    if h0 is None:
        scale = atol + rtol * np.abs(y)
        d0 = np.sqrt(np.mean((y / scale) ** 2))
        d1 = np.sqrt(np.mean((f / scale) ** 2))
        h0 = 0.01 * d0 / d1 if d1 > 1e-12 else 1e-3
        h0 = min(h0, t_end)
    h = h0
    err_prev = 1e-4
    rejected = 0
    k = np.empty((7, y.size))
    for _ in range(max_steps):
        if t >= t_end:
            break
        h = min(h, t_end - t)
        k[0] = f
        ok = True
        for i in range(1, 7):
            yi = y + h * np.dot(_A[i], k[:i])
            k[i] = rhs_array(yi, p)
        y_new = y + h * (_B5 @ k)
        if np.any(~(y_new > 0)) or not np.all(np.isfinite(y_new)):
            ok = False
            err = np.inf
        else:
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
            err = float(np.sqrt(np.mean((h * (_E @ k) / scale) ** 2)))
        if ok and err <= 1.0:
            t += h
            y = y_new
            f = k[6].copy()
            ts.append(t)
            ys.append(y.copy())
            fs.append(f)
            factor = 0.9 * max(err, 1e-10) ** (-0.7 / 5) * err_prev ** (0.4 / 5)
            h *= min(5.0, max(0.2, factor))
            err_prev = max(err, 1e-4)
        else:
            rejected += 1
            if not ok:
                h *= 0.25
            else:
                h *= max(0.1, 0.9 * err ** (-1 / 5))
        if h < MIN_STEP:
            msg = f"step size underflow at t={t:.6g}" + ("" if ok else " (state left positive orthant)")
            traj = DenseTrajectory(np.array(ts), np.array(ys), np.array(fs), False, msg, rejected)
            if strict:
                raise StepFailure(msg)
            return traj
    else:
        msg = f"max_steps={max_steps} exhausted at t={t:.6g}"
        if strict:
            raise StepFailure(msg)
        return DenseTrajectory(np.array(ts), np.array(ys), np.array(fs), False, msg, rejected)
    return DenseTrajectory(np.array(ts), np.array(ys), np.array(fs), True, "", rejected)


# --------------------------------------------------------------------------- residuals

@dataclass
class ResidualReport:
    ode: dict[str, float]
    static: dict[str, float]
    transversality_decay_ok: bool
    grid: list[float] = field(repr=False)

    @property
    def max_ode(self) -> float:
        return max(self.ode.values())

    @property
    def max_static(self) -> float:
        return max(self.static.values())

    @property
    def max_residual(self) -> float:
        return max(self.max_ode, self.max_static)

    def passed(self, tol: float) -> bool:
        return self.max_residual < tol and self.transversality_decay_ok

    def as_dict(self) -> dict:
        return {
            "max_rel_ode_residual": dict(self.ode),
            "max_rel_static_residual": dict(self.static),
            "max_residual": self.max_residual,
            "transversality_decay_ok": self.transversality_decay_ok,
            "grid": list(self.grid),
        }


# 5-point first-derivative stencils
_CENTRAL = (np.array([-2, -1, 0, 1, 2]), np.array([1, -8, 0, 8, -1]) / 12.0)
_FORWARD = (np.array([0, 1, 2, 3, 4]), np.array([-25, 48, -36, 16, -3]) / 12.0)


def _stack_state(pt) -> np.ndarray:
    return np.array([np.asarray(getattr(pt, name), dtype=float) for name in STATE_FIELDS])


def residual_report(traj, p: ValidatedParams, grid, fd_step: float = 1e-4) -> ResidualReport:
    """Compare 5-point finite differences of ``traj`` against the FOC right-hand side.

    ``traj`` maps an array of times to an object exposing ``c, k, h_star, u,
    lam, mu_star`` arrays (a :class:`TrajectoryPoint`).  Each ODE residual is
    ``|x'_fd - x'_rhs| / max(|x'_rhs|, rho |x|)``; the floor keeps the
    measure relative where a derivative crosses zero.  Grid points closer than
    two steps to the start of the grid use a forward stencil.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    t_min = grid[0]
    forward = grid - 2 * fd_step < t_min
    offsets = np.where(forward[:, None], _FORWARD[0][None, :], _CENTRAL[0][None, :])
    weights = np.where(forward[:, None], _FORWARD[1][None, :], _CENTRAL[1][None, :])
    times = grid[:, None] + offsets * fd_step
    values = _stack_state(traj(times.ravel())).reshape(6, *times.shape)
    deriv = (values * weights[None]).sum(axis=-1) / fd_step
    centre = _stack_state(traj(grid))
    rhs = rhs_array(centre, p)
    floor = p.rho * np.abs(centre)
    ode_res = np.abs(deriv - rhs) / np.maximum(np.abs(rhs), floor)
    # ordering of rows: c, k, h*, u, lambda, mu*
    ode = {
        "k_dot": ode_res[1], "h_star_dot": ode_res[2], "c_dot_over_c": ode_res[0],
        "u_dot_over_u": ode_res[3], "lambda_dot": ode_res[4], "mu_star_dot": ode_res[5],
    }
    c, k, hs, u, lam, mus = centre
    s_lam = np.abs(lam * c**p.sigma - 1.0)
    s_u = np.abs((u * hs / k) ** p.beta * p.delta_star * mus / (p.gamma * (1.0 - p.beta) * lam) - 1.0)
    log_tv_k = -p.rho * grid + np.log(lam) + np.log(k)
    log_tv_h = -p.rho * grid + np.log(mus) + np.log(hs)
    tail = grid[int(math.floor(0.75 * (grid.size - 1))):]
    n_tail = tail.size
    decay_ok = bool(n_tail < 2 or (np.all(np.diff(log_tv_k[-n_tail:]) < 0)
                                   and np.all(np.diff(log_tv_h[-n_tail:]) < 0)))
    return ResidualReport(
        ode={name: float(np.max(v)) for name, v in ode.items()},
        static={"lambda_eq_c_pow": float(np.max(s_lam)), "static_u": float(np.max(s_u))},
        transversality_decay_ok=decay_ok,
        grid=grid.tolist(),
    )
