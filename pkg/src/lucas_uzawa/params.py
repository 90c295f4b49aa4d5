"""Structural parameters, validation and the change of variables that maps the
externality model onto the basic Lucas-Uzawa model.

With ``phi = (1 - beta + theta) / (1 - beta)`` the substitution

    h* = h**phi,   delta* = delta * phi,   mu* = mu * h**(1 - phi) / phi

turns the model with a human-capital externality into the basic two-sector
model in the variables ``(k, h*)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from os import PathLike

from .errors import NonPositiveState, OutOfRange, SigmaIsOne

PARAM_NAMES = ("sigma", "rho", "beta", "gamma", "pi", "delta", "theta")


@dataclass(frozen=True)
class ModelParams:
    """Raw structural parameters.

    sigma : inverse intertemporal elasticity of substitution
    rho   : discount rate
    beta  : capital share in goods production
    gamma : goods-sector technology level
    pi    : depreciation rate of physical capital
    delta : education-sector technology level
    theta : human-capital externality exponent
    """

    sigma: float
    rho: float
    beta: float
    gamma: float
    pi: float
    delta: float
    theta: float

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in PARAM_NAMES}


@dataclass(frozen=True)
class ValidatedParams(ModelParams):
    """Parameters that passed every hard bound.

    ``bgp_window_satisfied`` records whether
    ``rho(1-beta) < delta(1-beta+theta) < rho(1-beta) + delta sigma (1-beta+theta)``.
    """

    bgp_window_satisfied: bool = False

    @property
    def phi(self) -> float:
        return (1.0 - self.beta + self.theta) / (1.0 - self.beta)

    @property
    def delta_star(self) -> float:
        return self.delta * self.phi


@dataclass(frozen=True)
class TransformedParams:
    phi: float
    delta_star: float


def bgp_window(p: ModelParams) -> tuple[float, float, float]:
    """Return the three sides ``(lower, middle, upper)`` of the growth window."""
    one_b = 1.0 - p.beta
    lower = p.rho * one_b
    middle = p.delta * (one_b + p.theta)
    upper = p.rho * one_b + p.delta * p.sigma * (one_b + p.theta)
    return lower, middle, upper


def validate(raw: ModelParams) -> ValidatedParams:
    """Check hard bounds and flag the growth window.

    Raises
    ------
    SigmaIsOne
        for log utility.
    OutOfRange
        naming the first parameter that breaks its bound.
    """
    values = {f.name: getattr(raw, f.name) for f in fields(ModelParams)}
    for name, value in values.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise OutOfRange(name, value, "must be a real number")
        if not math.isfinite(value):
            raise OutOfRange(name, value, "must be finite")

    checks = (
        ("sigma", raw.sigma > 0, "sigma > 0"),
        ("rho", raw.rho > 0, "rho > 0"),
        ("beta", 0 < raw.beta < 1, "0 < beta < 1"),
        ("gamma", raw.gamma > 0, "gamma > 0"),
        ("pi", raw.pi >= 0, "pi >= 0"),
        ("delta", raw.delta > 0, "delta > 0"),
        ("theta", raw.theta >= 0, "theta >= 0"),
    )
    for name, ok, constraint in checks:
        if not ok:
            raise OutOfRange(name, values[name], constraint)
    if raw.sigma == 1.0:
        raise SigmaIsOne()

    lower, middle, upper = bgp_window(raw)
    values = {k: float(v) for k, v in values.items()}
    return ValidatedParams(**values, bgp_window_satisfied=lower < middle < upper)


def to_transformed(p: ValidatedParams) -> TransformedParams:
    phi = (1.0 - p.beta + p.theta) / (1.0 - p.beta)
    return TransformedParams(phi=phi, delta_star=p.delta * phi)


def transform_state(h, mu, p: ValidatedParams):
    """Map ``(h, mu)`` to ``(h*, mu*)``. Works elementwise on arrays."""
    if _any_nonpositive(h):
        raise NonPositiveState(f"human capital must be positive, got {h!r}")
    phi = p.phi
    return h**phi, mu * h ** (1.0 - phi) / phi


def inverse_transform_state(h_star, mu_star, p: ValidatedParams):
    """Exact inverse of :func:`transform_state`.

    ``h = h*^(1/phi)`` and ``mu = phi mu* h^(phi-1) = phi mu* h*^((phi-1)/phi)``.
    """
    if _any_nonpositive(h_star):
        raise NonPositiveState(f"transformed human capital must be positive, got {h_star!r}")
    phi = p.phi
    h = h_star ** (1.0 / phi)
    return h, phi * mu_star * h ** (phi - 1.0)


def _any_nonpositive(x) -> bool:
    try:
        return bool((x <= 0).any())
    except AttributeError:
        return not x > 0


def params_from_mapping(data: dict) -> ModelParams:
    missing = [name for name in PARAM_NAMES if name not in data]
    if missing:
        raise OutOfRange(missing[0], None, "is required")
    return ModelParams(**{name: data[name] for name in PARAM_NAMES})


def load_params(path: str | PathLike) -> ValidatedParams:
    """Read a JSON parameter file and validate it."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise OutOfRange("params", data, "file must hold a JSON object")
    return validate(params_from_mapping(data))


def dump_params(p: ModelParams) -> str:
    d = asdict(p)
    d.pop("bgp_window_satisfied", None)
    return json.dumps(d, sort_keys=True)
