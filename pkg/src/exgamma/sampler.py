"""Seeded random variates: uniforms, gammas and EXg draws.

The uniform stream is counter based. Draw number i (0-based) of a stream
with seed s is

    z = splitmix64_mix(s + (i + 1) * 0x9E3779B97F4A7C15  mod 2^64)
    u = ((z >> 11) + 0.5) / 2^53

which lies strictly inside (0, 1). splitmix64_mix is the SplitMix64 output
function (xor-shift 30, multiply 0xBF58476D1CE4E5B9, xor-shift 27, multiply
0x94D049BB133111EB, xor-shift 31). Because draw i depends only on (s, i),
blocks of draws can be produced with numpy and match scalar draws exactly.

Gamma variates use Marsaglia and Tsang's squeeze method; each attempt takes
three consecutive uniforms (two for a Box-Muller normal, one for the accept
test). Shapes below 1 are drawn at shape + 1 and multiplied by U^(1/shape),
with the n boost uniforms taken after the shape + 1 batch.
"""

import math

import numpy as np

from .core import ExgParams

__all__ = ["RngStream", "gamma_variate", "gamma_variates", "exg_sample", "mix64"]

_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1
_INV53 = 1.0 / (1 << 53)
DEFAULT_SEED = 20180101


def mix64(z: int) -> int:
    """SplitMix64 finaliser on a Python int."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


class RngStream:
    """Deterministic uniform(0, 1) stream; single owner, not thread safe."""

    def __init__(self, seed: int = DEFAULT_SEED):
        if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed <= _MASK:
            raise ValueError(f"seed must be an integer in [0, 2^64), got {seed!r}")
        self.seed = int(seed)
        self.counter = 0

    def spawn(self, index: int) -> "RngStream":
        """Independent child stream with seed mix64(seed ^ mix64(index + 1))."""
        return RngStream(mix64(self.seed ^ mix64(index + 1)))

    def next_uniform(self) -> float:
        self.counter += 1
        z = mix64(self.seed + self.counter * _GOLDEN_GAMMA)
        return ((z >> 11) + 0.5) * _INV53

    def uniforms(self, n: int) -> np.ndarray:
        """The next n draws, identical to n calls of ``next_uniform``."""
        idx = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.seed) + idx * np.uint64(_GOLDEN_GAMMA)
            z = _mix64_array(z)
        self.counter += n
        return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


def _marsaglia_tsang(stream, shape, n):
    # shape >= 1, unit rate
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    pending = np.arange(n)
    while pending.size:
        u = stream.uniforms(3 * pending.size).reshape(-1, 3)
        z = np.sqrt(-2.0 * np.log(u[:, 0])) * np.cos(2.0 * math.pi * u[:, 1])
        v = 1.0 + c * z
        ok = v > 0.0
        v = np.where(ok, v * v * v, 1.0)
        z2 = z * z
        accept = ok & (
            (u[:, 2] < 1.0 - 0.0331 * z2 * z2)
            | (np.log(u[:, 2]) < 0.5 * z2 + d * (1.0 - v + np.log(v)))
        )
        out[pending[accept]] = d * v[accept]
        pending = pending[~accept]
    return out


def gamma_variates(stream: RngStream, shape: float, rate: float, n: int) -> np.ndarray:
    """n draws from gamma(shape, rate) (density proportional to x^(shape-1) e^(-rate x))."""
    if not (math.isfinite(shape) and shape > 0):
        raise ValueError(f"shape must be > 0, got {shape!r}")
    if not (math.isfinite(rate) and rate > 0):
        raise ValueError(f"rate must be > 0, got {rate!r}")
    if shape >= 1.0:
        return _marsaglia_tsang(stream, shape, n) / rate
    g = _marsaglia_tsang(stream, shape + 1.0, n)
    u = stream.uniforms(n)
    return g * np.exp(np.log(u) / shape) / rate


def gamma_variate(stream: RngStream, shape: float, rate: float) -> float:
    return float(gamma_variates(stream, shape, rate, 1)[0])


def exg_sample(stream: RngStream, p: ExgParams, n: int) -> np.ndarray:
    """n EXg draws by component selection.

    U ~ uniform(0,1), V ~ gamma(alpha, theta) and W ~ gamma(alpha + 2, theta)
    are generated in that order as length-n blocks; X_i = V_i when
    U_i <= theta / (theta + beta), else W_i. The U block is consumed even when
    beta = 0 so the stream layout does not depend on the parameters.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    u = stream.uniforms(n)
    v = gamma_variates(stream, p.alpha, p.theta, n)
    w = gamma_variates(stream, p.alpha + 2.0, p.theta, n)
    return np.where(u <= p.w1, v, w)
