"""Special functions on IEEE doubles.

Log-gamma, digamma, the regularized incomplete gamma pair P(a, x), Q(a, x)
and the inverse of P in its second argument. Everything here is a pure
function; ``reg_lower_gamma``/``reg_upper_gamma`` also accept numpy arrays
for ``x`` (with scalar ``a``) so distribution code can evaluate whole samples
at once.
"""

import math

import numpy as np

__all__ = [
    "ConvergenceError",
    "ln_gamma",
    "digamma",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "inv_reg_lower_gamma",
]

MAX_ITER = 300
EPS = 1e-15
_TINY = 1e-300
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER = 0.57721566490153286061

# Godfrey's Lanczos approximation, g = 607/128, 15 terms.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)

# (-1)^k zeta(k) / k for k = 2..31: Taylor coefficients of ln Gamma(1 + z) + gamma*z.
_LG1P = (
    0.8224670334241132,
    -0.40068563438653143,
    0.27058080842778454,
    -0.20738555102867398,
    0.1695571769974082,
    -0.1440498967688461,
    0.12550966952474304,
    -0.11133426586956469,
    0.1000994575127818,
    -0.09095401714582904,
    0.083353840546109,
    -0.0769325164113522,
    0.07143294629536133,
    -0.06666870588242046,
    0.06250095514121304,
    -0.058823978658684585,
    0.055555767627403614,
    -0.05263167937961666,
    0.05000004769810169,
    -0.047619070330142226,
    0.04545455629320467,
    -0.04347826605304026,
    0.04166666915034121,
    -0.04000000119214014,
    0.03846153903467518,
    -0.037037037312989324,
    0.035714285847333355,
    -0.034482758684919304,
    0.03333333336437758,
    -0.03225806453115042,
)
_ROOT_WINDOW = 0.3


class ConvergenceError(ArithmeticError):
    """An iterative evaluation hit its iteration cap before converging."""


def _check_positive(a, name="a"):
    if not (isinstance(a, (int, float, np.floating, np.integer)) and math.isfinite(a) and a > 0):
        raise ValueError(f"{name} must be a finite positive real, got {a!r}")


def _lgamma_1p_small(z):
    # ln Gamma(1 + z) for |z| <= _ROOT_WINDOW, accurate relative to the result near z = 0
    acc = 0.0
    for c in reversed(_LG1P):
        acc = acc * z + c
    return z * (-_EULER + z * acc)


def _lanczos_ln_gamma(a):
    x = a - 1.0
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(s)


def ln_gamma(a):
    """log Gamma(a) for a > 0.

    Lanczos approximation away from the zeros at a = 1 and a = 2, where a
    Taylor series in (a - 1) keeps the relative error small.
    """
    _check_positive(a)
    a = float(a)
    if abs(a - 1.0) <= _ROOT_WINDOW:
        return _lgamma_1p_small(a - 1.0)
    if abs(a - 2.0) <= _ROOT_WINDOW:
        z = a - 2.0
        return _lgamma_1p_small(z) + math.log1p(z)
    if a < 0.5:
        return ln_gamma(a + 1.0) - math.log(a)
    return _lanczos_ln_gamma(a)


# B_2k / (2k) for the asymptotic digamma series
_DIGAMMA_ASYMP = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(a):
    """psi(a) = d/da log Gamma(a) for a > 0."""
    _check_positive(a)
    x = float(a)
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    for c in reversed(_DIGAMMA_ASYMP):
        tail = tail * inv2 + c
    return shift + math.log(x) - 0.5 / x - inv2 * tail


def _log_prefactor(a, x):
    # log of x^a e^-x / Gamma(a)
    return a * math.log(x) - x - ln_gamma(a)


def _series_p(a, x):
    ap = a
    term = 1.0 / a
    total = term
    for _ in range(MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * EPS:
            return total * math.exp(_log_prefactor(a, x))
    raise ConvergenceError(f"incomplete gamma series did not converge for a={a}, x={x}")


def _contfrac_q(a, x):
    # modified Lentz evaluation of the Legendre continued fraction
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h * math.exp(_log_prefactor(a, x))
    raise ConvergenceError(f"incomplete gamma continued fraction did not converge for a={a}, x={x}")


def _pq_scalar(a, x):
    if x == 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    if x < a + 1.0:
        p = _series_p(a, x)
        return p, 1.0 - p
    q = _contfrac_q(a, x)
    return 1.0 - q, q


def _pq_array(a, x):
    p = np.zeros_like(x)
    q = np.ones_like(x)
    lga = ln_gamma(a)

    big = np.isinf(x)
    p[big] = 1.0
    q[big] = 0.0

    ser = (x > 0) & (x < a + 1.0)
    if ser.any():
        xs = x[ser]
        term = np.full_like(xs, 1.0 / a)
        total = term.copy()
        ap = a
        done = np.zeros(xs.shape, dtype=bool)
        for _ in range(MAX_ITER):
            ap += 1.0
            term = np.where(done, 0.0, term * xs / ap)
            total += term
            done |= np.abs(term) < np.abs(total) * EPS
            if done.all():
                break
        else:
            raise ConvergenceError(f"incomplete gamma series did not converge for a={a}")
        ps = total * np.exp(a * np.log(xs) - xs - lga)
        p[ser] = ps
        q[ser] = 1.0 - ps

    cf = (x >= a + 1.0) & ~big
    if cf.any():
        xs = x[cf]
        b = xs + 1.0 - a
        c = np.full_like(xs, 1.0 / _TINY)
        d = 1.0 / b
        h = d.copy()
        done = np.zeros(xs.shape, dtype=bool)
        for i in range(1, MAX_ITER + 1):
            an = -i * (i - a)
            b = b + 2.0
            d = an * d + b
            d = np.where(np.abs(d) < _TINY, _TINY, d)
            c = b + an / c
            c = np.where(np.abs(c) < _TINY, _TINY, c)
            d = 1.0 / d
            delta = np.where(done, 1.0, d * c)
            h *= delta
            done |= np.abs(delta - 1.0) < EPS
            if done.all():
                break
        else:
            raise ConvergenceError(f"incomplete gamma continued fraction did not converge for a={a}")
        qs = h * np.exp(a * np.log(xs) - xs - lga)
        q[cf] = qs
        p[cf] = 1.0 - qs
    return p, q


def _pq(a, x):
    _check_positive(a)
    if np.ndim(x) == 0:
        x = float(x)
        if not x >= 0.0:
            raise ValueError(f"x must be nonnegative, got {x!r}")
        return _pq_scalar(float(a), x)
    x = np.asarray(x, dtype=float)
    if not np.all(x >= 0.0):
        raise ValueError("x must be nonnegative")
    return _pq_array(float(a), x)


def reg_lower_gamma(a, x):
    """Regularized lower incomplete gamma P(a, x) = gamma_l(a, x) / Gamma(a)."""
    return _pq(a, x)[0]


def reg_upper_gamma(a, x):
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).

    In the continued-fraction regime (x >= a + 1) Q is computed directly, so
    small upper tails keep their relative accuracy.
    """
    return _pq(a, x)[1]


def _gamma_density(a, x, lga):
    return math.exp((a - 1.0) * math.log(x) - x - lga)


def inv_reg_lower_gamma(a, p):
    """Solve P(a, x) = p for x >= 0.

    Newton iteration started from a Wilson-Hilferty guess, guarded by a
    bracket: any step that is non-finite or leaves the bracket is replaced by
    bisection.
    """
    _check_positive(a)
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise ValueError(f"p must lie in [0, 1), got {p!r}")
    if p == 0.0:
        return 0.0
    lga = ln_gamma(a)

    lo, hi = 0.0, max(1.0, a)
    while reg_lower_gamma(a, hi) < p:
        lo = hi
        hi *= 2.0
        if math.isinf(hi):
            raise ConvergenceError(f"could not bracket the P({a}, x) = {p} root")

    # Wilson-Hilferty seed, or the small-x power law when p is tiny
    z = _normal_quantile(p)
    wh = a * (1.0 - 1.0 / (9.0 * a) + z / (3.0 * math.sqrt(a))) ** 3
    small = math.exp((math.log(p) + ln_gamma(a + 1.0)) / a)
    x = wh if wh > 0.0 and p > 0.05 else small
    if not lo < x < hi:
        x = 0.5 * (lo + hi)

    for _ in range(MAX_ITER):
        fx = reg_lower_gamma(a, x) - p
        if abs(fx) <= 1e-14 * max(p, 1e-300) or fx == 0.0:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        dens = _gamma_density(a, x, lga) if x > 0.0 else 0.0
        step = x - fx / dens if dens > 0.0 else math.nan
        if not (math.isfinite(step) and lo < step < hi):
            step = 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * hi:
            return hi
        x = step
    if abs(reg_lower_gamma(a, x) - p) <= 1e-10:
        return x
    raise ConvergenceError(f"inverse incomplete gamma did not converge for a={a}, p={p}")


def _normal_quantile(p):
    # Abramowitz & Stegun 26.2.23, |error| < 4.5e-4; only a starting guess
    if p <= 0.0 or p >= 1.0:
        return math.copysign(8.0, p - 0.5)
    q = min(p, 1.0 - p)
    t = math.sqrt(-2.0 * math.log(q))
    num = 2.515517 + t * (0.802853 + t * 0.010328)
    den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308))
    z = t - num / den
    return z if p > 0.5 else -z
