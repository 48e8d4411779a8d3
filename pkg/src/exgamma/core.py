"""The extended xgamma (EXg) lifetime distribution.

EXg(alpha, theta, beta) is the two-component gamma mixture

    f(x) = w1 * g(x; alpha, theta) + w2 * g(x; alpha + 2, theta),
    w1 = theta / (theta + beta),  w2 = beta / (theta + beta),

with g the gamma density of the given shape and rate. Collapsed into one
expression,

    f(x) = theta^(alpha+1) / ((theta+beta) Gamma(alpha+2))
           * (alpha^2 + alpha + theta*beta*x^2) * exp(-theta*x) * x^(alpha-1).

beta = 0 is the gamma distribution, alpha = 1 with beta = 0 the exponential
and alpha = beta = 1 the xgamma distribution. Every quantity below (CDF,
survival, moments, mean deviation) is derived from the mixture form.

Functions taking ``x`` accept a float or a numpy array.
"""

import math
from dataclasses import dataclass

import numpy as np

from .specfn import inv_reg_lower_gamma, ln_gamma, reg_lower_gamma, reg_upper_gamma

__all__ = [
    "ExgParams",
    "MomentSummary",
    "pdf",
    "log_pdf",
    "cdf",
    "survival",
    "hazard",
    "quantile",
    "raw_moment",
    "moment_summary",
    "mean_deviation",
    "mode",
    "pdf_at_zero",
]


@dataclass(frozen=True)
class ExgParams:
    alpha: float
    theta: float
    beta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "theta", "beta"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float, np.integer, np.floating)):
                raise ValueError(f"{name} must be a real number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError(f"theta must be > 0, got {self.theta!r}")
        if not (math.isfinite(self.beta) and self.beta >= 0):
            raise ValueError(f"beta must be >= 0, got {self.beta!r}")
        if not math.isfinite(self.theta + self.beta):
            raise ValueError("theta + beta overflows")

    @property
    def w1(self) -> float:
        """Probability of the gamma(alpha, theta) component."""
        return self.theta / (self.theta + self.beta)

    @property
    def w2(self) -> float:
        return self.beta / (self.theta + self.beta)


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    sd: float
    cv: float
    skewness: float
    excess_kurtosis: float
    raw_moments: tuple


def _as_x(x, strict):
    arr = np.asarray(x, dtype=float)
    bad = arr <= 0 if strict else arr < 0
    if np.any(bad) or np.any(np.isnan(arr)):
        bound = "> 0" if strict else ">= 0"
        raise ValueError(f"x must be {bound}")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def log_pdf(p: ExgParams, x):
    xs = _as_x(x, strict=True)
    a, t, b = p.alpha, p.theta, p.beta
    const = (a + 1.0) * math.log(t) - math.log(t + b) - ln_gamma(a + 2.0)
    with np.errstate(over="ignore"):
        poly = np.log(a * a + a + t * b * xs * xs)
    return _out(const + poly - t * xs + (a - 1.0) * np.log(xs), x)


def pdf(p: ExgParams, x):
    return _out(np.exp(log_pdf(p, np.asarray(x, dtype=float))), x)


def cdf(p: ExgParams, x):
    xs = _as_x(x, strict=False)
    z = p.theta * xs
    out = p.w1 * reg_lower_gamma(p.alpha, z)
    if p.beta > 0:
        out = out + p.w2 * reg_lower_gamma(p.alpha + 2.0, z)
    return _out(np.minimum(out, 1.0), x)


def survival(p: ExgParams, t0):
    """P(X > t0), summed from the upper incomplete gammas of both components."""
    xs = _as_x(t0, strict=False)
    z = p.theta * xs
    out = p.w1 * reg_upper_gamma(p.alpha, z)
    if p.beta > 0:
        out = out + p.w2 * reg_upper_gamma(p.alpha + 2.0, z)
    return _out(np.minimum(out, 1.0), t0)


def hazard(p: ExgParams, t0):
    """f(t0) / S(t0). Raises OverflowError where S underflows to zero."""
    xs = _as_x(t0, strict=True)
    s = np.asarray(survival(p, xs))
    if np.any(s <= 0.0):
        raise OverflowError("survival underflows to 0; hazard is not representable this deep in the tail")
    return _out(np.asarray(pdf(p, xs)) / s, t0)


def quantile(p: ExgParams, q: float) -> float:
    """Smallest x (to ~1e-12 relative) with cdf(x) >= q.

    Above the median the root is taken on the survival side, 1 - q = S(x),
    so upper quantiles keep full accuracy. The starting bracket's upper end
    is the gamma(alpha + 2) quantile, which lies above the mixture quantile.
    Newton steps are used while they stay inside the bracket, bisection
    otherwise.
    """
    q = float(q)
    if not 0.0 <= q < 1.0:
        raise ValueError(f"q must lie in [0, 1), got {q!r}")
    if q == 0.0:
        return 0.0
    a, t = p.alpha, p.theta
    upper = q > 0.5
    tail = 1.0 - q

    def excess(x):
        return tail - survival(p, x) if upper else cdf(p, x) - q

    hi = inv_reg_lower_gamma(a + 2.0, q) / t
    grow = 1e-9
    for _ in range(64):
        if excess(hi) >= 0.0:
            break
        hi *= 1.0 + grow
        grow *= 4.0
    else:
        raise ArithmeticError(f"could not bracket the {q} quantile")
    lo = 0.0
    x = inv_reg_lower_gamma(a, q) / t if p.beta > 0 else hi
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = excess(x)
        if fx >= 0.0:
            hi = x
        else:
            lo = x
        if hi - lo <= 1e-12 * hi or abs(fx) <= 1e-16 * (tail if upper else q):
            break
        dens = pdf(p, x) if x > 0 else 0.0
        step = x - fx / dens if dens > 0 else math.nan
        if not (math.isfinite(step) and lo < step < hi):
            step = 0.5 * (lo + hi)
        x = step
    x = hi if excess(x) < 0.0 else min(x, hi)
    # the two routes to F can disagree in the last bits; step up until cdf(x) >= q holds as computed
    for _ in range(64):
        if cdf(p, x) >= q:
            break
        x = math.nextafter(x, math.inf) if x < 1e-300 else x * (1.0 + 4e-16)
    return x


def _component_moment(shape, rate, r):
    # E[Y^r] for Y ~ gamma(shape, rate)
    return math.exp(ln_gamma(shape + r) - ln_gamma(shape) - r * math.log(rate))


def raw_moment(p: ExgParams, r: int) -> float:
    """E[X^r] = Gamma(a+r) [theta a (a+1) + beta (a+r)(a+r+1)] / (theta^r (theta+beta) Gamma(a+2))."""
    if isinstance(r, bool) or int(r) != r or r < 1:
        raise ValueError(f"moment order must be a positive integer, got {r!r}")
    r = int(r)
    a, t, b = p.alpha, p.theta, p.beta
    scale = math.exp(ln_gamma(a + r) - ln_gamma(a + 2.0) - r * math.log(t))
    return scale * (t * a * (a + 1.0) + b * (a + r) * (a + r + 1.0)) / (t + b)


def moment_summary(p: ExgParams) -> MomentSummary:
    m1, m2, m3, m4 = (raw_moment(p, r) for r in (1, 2, 3, 4))
    var = max(m2 - m1 * m1, 0.0)
    mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1**3
    mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1**4
    sd = math.sqrt(var)
    return MomentSummary(
        mean=m1,
        variance=var,
        sd=sd,
        cv=sd / m1,
        skewness=mu3 / var**1.5,
        excess_kurtosis=mu4 / (var * var) - 3.0,
        raw_moments=(m1, m2, m3, m4),
    )


def mean_deviation(p: ExgParams) -> float:
    """E|X - mu| = 2 mu F(mu) - 2 m(mu), m(mu) being the partial expectation up to mu."""
    a, t = p.alpha, p.theta
    mu = raw_moment(p, 1)
    z = t * mu
    partial = p.w1 * (a / t) * reg_lower_gamma(a + 1.0, z)
    if p.beta > 0:
        partial += p.w2 * ((a + 2.0) / t) * reg_lower_gamma(a + 3.0, z)
    return 2.0 * mu * cdf(p, mu) - 2.0 * partial


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def mode(p: ExgParams, grid_points: int = 1024) -> float:
    """Location of the density maximum.

    The density is unbounded at 0 when alpha < 1, so the mode is 0 there and
    for the exponential/gamma boundary case alpha <= 1, beta = 0. Otherwise
    a grid scan over [0, quantile(1 - 1e-9)] is refined by golden-section
    search; ties go to the smaller x.
    """
    a = p.alpha
    if a < 1.0 or (a <= 1.0 and p.beta == 0.0):
        return 0.0
    top = quantile(p, 1.0 - 1e-9)
    xs = np.linspace(0.0, top, grid_points)
    dens = np.empty_like(xs)
    dens[1:] = pdf(p, xs[1:])
    # limit at 0: w1 * theta when alpha == 1, else 0
    dens[0] = p.w1 * p.theta if a == 1.0 else 0.0
    i = int(np.argmax(dens))
    if i == 0 and dens[1] < dens[0]:
        return 0.0
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid_points - 1)]

    def f(x):
        return pdf(p, x) if x > 0 else dens[0]

    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > 1e-12 * max(1.0, hi):
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return 0.0 if dens[0] >= f(x) else x


def pdf_at_zero(p: ExgParams) -> float:
    """Right limit of the density at 0: 0 for alpha > 1, w1 * theta for alpha = 1, inf for alpha < 1."""
    if p.alpha > 1.0:
        return 0.0
    if p.alpha == 1.0:
        return p.w1 * p.theta
    return math.inf
