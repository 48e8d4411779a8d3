"""ED, GD, Xg and EXg behind one interface.

ED, GD and Xg are written out from their own closed forms rather than
delegating to the EXg code, so agreement along the nesting ladder
ED(theta) = GD(1, theta) = EXg(1, theta, 0) and Xg(theta) = EXg(1, theta, 1)
is a real cross-check.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import core
from .core import ExgParams
from .specfn import ln_gamma, reg_lower_gamma, reg_upper_gamma

__all__ = [
    "ModelKind",
    "ModelParams",
    "model_log_pdf",
    "model_pdf",
    "model_cdf",
    "model_survival",
    "model_hazard",
]


class ModelKind(enum.Enum):
    EXPONENTIAL = ("ed", ("theta",))
    GAMMA = ("gd", ("alpha", "theta"))
    XGAMMA = ("xg", ("theta",))
    EXTENDED_XGAMMA = ("exg", ("alpha", "theta", "beta"))

    def __init__(self, tag, param_names):
        self.tag = tag
        self.param_names = param_names

    @property
    def param_count(self) -> int:
        return len(self.param_names)

    @property
    def label(self) -> str:
        return {"ed": "ED", "gd": "GD", "xg": "Xg", "exg": "EXg"}[self.tag]

    @classmethod
    def from_tag(cls, tag: str) -> "ModelKind":
        for kind in cls:
            if kind.tag == tag:
                return kind
        raise ValueError(f"unknown model {tag!r}; expected one of ed, gd, xg, exg")


@dataclass(frozen=True)
class ModelParams:
    """Parameter vector in the kind's fixed order (ED/Xg: theta; GD: alpha, theta; EXg: alpha, theta, beta)."""

    kind: ModelKind
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != self.kind.param_count:
            raise ValueError(
                f"{self.kind.label} takes {self.kind.param_count} parameter(s) "
                f"{self.kind.param_names}, got {len(vals)}"
            )
        for name, v in zip(self.kind.param_names, vals):
            ok = v >= 0 if name == "beta" else v > 0
            if not (math.isfinite(v) and ok):
                bound = ">= 0" if name == "beta" else "> 0"
                raise ValueError(f"{name} must be {bound}, got {v!r}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_named(cls, kind: ModelKind, **named) -> "ModelParams":
        missing = [n for n in kind.param_names if named.get(n) is None]
        if missing:
            raise ValueError(f"{kind.label} needs parameter(s): {', '.join(missing)}")
        return cls(kind, tuple(named[n] for n in kind.param_names))

    def named(self) -> dict:
        return dict(zip(self.kind.param_names, self.values))

    def to_exg(self) -> ExgParams:
        """The same distribution as an EXg parameter triple."""
        k, v = self.kind, self.values
        if k is ModelKind.EXPONENTIAL:
            return ExgParams(1.0, v[0], 0.0)
        if k is ModelKind.GAMMA:
            return ExgParams(v[0], v[1], 0.0)
        if k is ModelKind.XGAMMA:
            return ExgParams(1.0, v[0], 1.0)
        return ExgParams(*v)


def _check_x(x, strict):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr <= 0 if strict else arr < 0):
        raise ValueError("x must be > 0" if strict else "x must be >= 0")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def model_log_pdf(m: ModelParams, x):
    xs = _check_x(x, strict=True)
    k, v = m.kind, m.values
    if k is ModelKind.EXPONENTIAL:
        (theta,) = v
        out = math.log(theta) - theta * xs
    elif k is ModelKind.GAMMA:
        alpha, theta = v
        out = alpha * math.log(theta) - ln_gamma(alpha) + (alpha - 1.0) * np.log(xs) - theta * xs
    elif k is ModelKind.XGAMMA:
        (theta,) = v
        out = 2.0 * math.log(theta) - math.log1p(theta) + np.log1p(0.5 * theta * xs * xs) - theta * xs
    else:
        return core.log_pdf(m.to_exg(), x)
    return _out(out, x)


def model_pdf(m: ModelParams, x):
    return _out(np.exp(model_log_pdf(m, np.asarray(x, dtype=float))), x)


def model_cdf(m: ModelParams, x):
    xs = _check_x(x, strict=False)
    k, v = m.kind, m.values
    if k is ModelKind.EXPONENTIAL:
        out = -np.expm1(-v[0] * xs)
    elif k is ModelKind.GAMMA:
        out = reg_lower_gamma(v[0], v[1] * xs)
    elif k is ModelKind.XGAMMA:
        out = 1.0 - _xg_survival(v[0], xs)
    else:
        return core.cdf(m.to_exg(), x)
    return _out(np.asarray(out, dtype=float), x)


def _xg_survival(theta, xs):
    tx = theta * xs
    return (1.0 + theta + tx + 0.5 * tx * tx) / (1.0 + theta) * np.exp(-tx)


def model_survival(m: ModelParams, x):
    xs = _check_x(x, strict=False)
    k, v = m.kind, m.values
    if k is ModelKind.EXPONENTIAL:
        out = np.exp(-v[0] * xs)
    elif k is ModelKind.GAMMA:
        out = reg_upper_gamma(v[0], v[1] * xs)
    elif k is ModelKind.XGAMMA:
        out = _xg_survival(v[0], xs)
    else:
        return core.survival(m.to_exg(), x)
    return _out(np.asarray(out, dtype=float), x)


def model_hazard(m: ModelParams, x):
    xs = _check_x(x, strict=True)
    s = np.asarray(model_survival(m, xs))
    if np.any(s <= 0.0):
        raise OverflowError("survival underflows to 0; hazard is not representable this deep in the tail")
    return _out(np.asarray(model_pdf(m, xs)) / s, x)
