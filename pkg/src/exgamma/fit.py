"""Maximum-likelihood fitting for the ED, GD, Xg and EXg models.

Parameters are optimised on the log scale, which keeps them positive without
constraints. For EXg, log(beta) is floored at -30 (beta ~ 1e-13, numerically
the gamma limit) so a fit that wants beta -> 0 settles on that floor.
"""

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .dataio import DataError, Sample, summary
from .models import ModelKind, ModelParams, model_log_pdf
from .specfn import ln_gamma

__all__ = [
    "FitResult",
    "SimplexResult",
    "log_likelihood",
    "score_numeric",
    "nelder_mead",
    "fit_model",
]

LOG_BETA_FLOOR = -30.0
NM_TOL = 1e-10
NM_MAX_ITER = 5000
GRAD_TOL = 1e-4
_LOG_LIMIT = 700.0


@dataclass(frozen=True)
class FitResult:
    params: ModelParams
    neg2_loglik: float
    converged: bool
    iterations: int
    grad_inf_norm: float
    start_points_tried: int

    @property
    def kind(self) -> ModelKind:
        return self.params.kind


class SimplexResult(NamedTuple):
    x: np.ndarray
    fun: float
    converged: bool
    iterations: int


class _Terms:
    """Sufficient pieces of a sample reused across likelihood evaluations."""

    def __init__(self, data: Sample):
        self.x = data.as_array()
        self.n = data.n
        self.sum_x = math.fsum(data.values)
        self.sum_log_x = math.fsum(np.log(self.x))


def _loglik_values(kind: ModelKind, v: Sequence[float], t: _Terms) -> float:
    n = t.n
    if kind is ModelKind.EXPONENTIAL:
        (theta,) = v
        return n * math.log(theta) - theta * t.sum_x
    if kind is ModelKind.GAMMA:
        alpha, theta = v
        return (
            n * alpha * math.log(theta)
            - n * ln_gamma(alpha)
            + (alpha - 1.0) * t.sum_log_x
            - theta * t.sum_x
        )
    if kind is ModelKind.XGAMMA:
        (theta,) = v
        return (
            n * (2.0 * math.log(theta) - math.log1p(theta))
            + math.fsum(np.log1p(0.5 * theta * t.x * t.x))
            - theta * t.sum_x
        )
    alpha, theta, beta = v
    return (
        n * (alpha + 1.0) * math.log(theta)
        - n * math.log(theta + beta)
        - n * ln_gamma(alpha + 2.0)
        + math.fsum(np.log(alpha * alpha + alpha + theta * beta * t.x * t.x))
        + (alpha - 1.0) * t.sum_log_x
        - theta * t.sum_x
    )


def log_likelihood(m: ModelParams, data: Sample) -> float:
    """Closed-form log-likelihood of the whole sample.

    For EXg: n(a+1) log t - n log(t+b) - n log Gamma(a+2)
    + sum log(a^2 + a + t b x_i^2) + (a-1) sum log x_i - t sum x_i.
    """
    return _loglik_values(m.kind, m.values, _Terms(data))


def pointwise_log_likelihood(m: ModelParams, data: Sample) -> float:
    """Sum of model_log_pdf over the sample; second route to ``log_likelihood``."""
    return math.fsum(np.atleast_1d(model_log_pdf(m, data.as_array())))


def _from_log(kind: ModelKind, v) -> tuple:
    vals = [math.exp(min(c, _LOG_LIMIT)) for c in v]
    if kind is ModelKind.EXTENDED_XGAMMA:
        vals[2] = math.exp(max(v[2], LOG_BETA_FLOOR))
    return tuple(vals)


def _objective(kind: ModelKind, t: _Terms) -> Callable[[np.ndarray], float]:
    def neg_loglik(v):
        if any(abs(c) > _LOG_LIMIT for c in v):
            return math.inf
        try:
            val = -_loglik_values(kind, _from_log(kind, v), t)
        except (ValueError, OverflowError):
            return math.inf
        return val if math.isfinite(val) else math.inf

    return neg_loglik


def score_numeric(m: ModelParams, data: Sample) -> np.ndarray:
    """Gradient of the log-likelihood with respect to the log parameters.

    Central differences with step 1e-6 * max(1, |v|) per log coordinate v.
    """
    if any(c <= 0.0 for c in m.values):
        raise ValueError("score_numeric needs strictly positive parameters (beta > 0 for EXg)")
    t = _Terms(data)
    v = np.log(np.array(m.values))
    grad = np.empty_like(v)
    for i in range(v.size):
        h = 1e-6 * max(1.0, abs(v[i]))
        up, dn = v.copy(), v.copy()
        up[i] += h
        dn[i] -= h
        f_up = _loglik_values(m.kind, np.exp(up), t)
        f_dn = _loglik_values(m.kind, np.exp(dn), t)
        if not (math.isfinite(f_up) and math.isfinite(f_dn)):
            raise ValueError("log-likelihood is not finite at a perturbed point")
        grad[i] = (f_up - f_dn) / (2.0 * h)
    return grad


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    start,
    tol: float = NM_TOL,
    max_iter: int = NM_MAX_ITER,
    step=None,
) -> SimplexResult:
    """Downhill simplex minimisation.

    Standard coefficients (reflection 1, expansion 2, contraction 1/2,
    shrink 1/2). Stops when max - min of the vertex values falls below
    ``tol`` and the centroid is no better than the best vertex;
    ``converged`` is False if ``max_iter`` is hit first.
    """
    x0 = np.atleast_1d(np.asarray(start, dtype=float))
    f0 = objective(x0)
    if not math.isfinite(f0):
        raise ValueError("objective is not finite at the starting point")
    dim = x0.size
    if step is None:
        step = 0.1 * np.maximum(1.0, np.abs(x0))
    step = np.broadcast_to(np.asarray(step, dtype=float), (dim,))

    simplex = [x0]
    values = [f0]
    for i in range(dim):
        x = x0.copy()
        x[i] += step[i]
        simplex.append(x)
        values.append(objective(x))
    simplex = np.array(simplex)
    values = np.array(values)

    for it in range(1, max_iter + 1):
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        if values[-1] - values[0] < tol:
            # equal values can straddle a minimum; probe the centroid before stopping
            xm = simplex.mean(axis=0)
            fm = objective(xm)
            if not fm < values[0] - tol:
                return SimplexResult(simplex[0].copy(), float(values[0]), True, it - 1)
            simplex[-1], values[-1] = xm, fm
            continue

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + (centroid - worst)
        fr = objective(xr)
        if fr < values[0]:
            xe = centroid + 2.0 * (centroid - worst)
            fe = objective(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
            continue
        if fr < values[-1]:
            xc = centroid + 0.5 * (xr - centroid)
            fc = objective(xc)
            if fc <= fr:
                simplex[-1], values[-1] = xc, fc
                continue
        else:
            xc = centroid + 0.5 * (worst - centroid)
            fc = objective(xc)
            if fc < values[-1]:
                simplex[-1], values[-1] = xc, fc
                continue
        best = simplex[0]
        for j in range(1, dim + 1):
            simplex[j] = best + 0.5 * (simplex[j] - best)
            values[j] = objective(simplex[j])

    order = np.argsort(values, kind="stable")
    return SimplexResult(simplex[order[0]].copy(), float(values[order[0]]), False, max_iter)


def _newton_polish(objective, x, free, max_iter=25):
    """Damped Newton steps on the free coordinates; only improving steps are kept."""
    x = x.copy()
    fx = objective(x)
    idx = np.flatnonzero(free)
    if idx.size == 0:
        return x, fx, 0
    k = idx.size
    iters = 0
    for iters in range(1, max_iter + 1):
        h = 1e-4 * np.maximum(1.0, np.abs(x[idx]))
        g = np.empty(k)
        H = np.empty((k, k))
        for a in range(k):
            ea = np.zeros_like(x)
            ea[idx[a]] = h[a]
            fp, fm = objective(x + ea), objective(x - ea)
            g[a] = (fp - fm) / (2 * h[a])
            H[a, a] = (fp - 2 * fx + fm) / h[a] ** 2
            for b in range(a):
                eb = np.zeros_like(x)
                eb[idx[b]] = h[b]
                H[a, b] = H[b, a] = (
                    objective(x + ea + eb) - objective(x + ea - eb)
                    - objective(x - ea + eb) + objective(x - ea - eb)
                ) / (4 * h[a] * h[b])
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(H))):
            break
        if np.max(np.abs(g)) < 1e-9:
            break
        lam = 0.0
        improved = False
        for _ in range(30):
            try:
                delta = np.linalg.solve(H + lam * np.eye(k), -g)
            except np.linalg.LinAlgError:
                delta = None
            if delta is not None and np.all(np.isfinite(delta)):
                trial = x.copy()
                trial[idx] += delta
                ft = objective(trial)
                if ft <= fx:
                    improved = ft < fx
                    x, fx = trial, ft
                    break
            lam = max(2.0 * lam, 1e-6 * (1.0 + np.max(np.abs(np.diag(H)))))
        if not improved:
            break
    return x, fx, iters


def _optimise(kind, t, start):
    objective = _objective(kind, t)
    first = nelder_mead(objective, start)
    second = nelder_mead(objective, first.x)
    x, fx = (second.x, second.fun) if second.fun <= first.fun else (first.x, first.fun)
    free = np.ones(x.size, dtype=bool)
    if kind is ModelKind.EXTENDED_XGAMMA and x[2] <= LOG_BETA_FLOOR + 1.0:
        free[2] = False
        x = x.copy()
        x[2] = LOG_BETA_FLOOR
        fx = objective(x)
    px, pf, pit = _newton_polish(objective, x, free)
    if pf <= fx:
        x, fx = px, pf
    iterations = first.iterations + second.iterations + pit
    return x, fx, first.converged and second.converged, iterations


def _result(kind, t, data, x, fx, nm_converged, iterations, starts):
    params = ModelParams(kind, _from_log(kind, x))
    grad = score_numeric(params, data)
    gnorm = float(np.max(np.abs(grad)))
    return FitResult(
        params=params,
        neg2_loglik=2.0 * fx,
        converged=bool(nm_converged and gnorm <= GRAD_TOL),
        iterations=iterations,
        grad_inf_norm=gnorm,
        start_points_tried=starts,
    )


def _moment_start(data: Sample):
    s = summary(data)
    if s.sd == 0.0:
        raise DataError("all observations are equal; the sample variance is 0 so no gamma-type start exists")
    var = s.sd * s.sd
    return s.mean * s.mean / var, s.mean / var


def fit_model(kind: ModelKind, data: Sample) -> FitResult:
    """Maximum-likelihood fit of one model to a sample.

    ED uses the closed form theta = n / sum(x). GD starts from the moment
    match alpha = mean^2 / var, theta = mean / var; Xg from theta = 1 / mean.
    EXg is started, in order, from the GD fit with beta = 1e-6, the Xg fit
    as (1, theta, 1), the GD moment match with beta = theta, and
    (1, 1/mean, 1/mean); the best optimum is returned. The first two starts
    make the EXg likelihood at least as large as the GD and Xg ones.
    """
    if data.n < kind.param_count + 1:
        raise DataError(f"{kind.label} needs at least {kind.param_count + 1} observations, got {data.n}")
    t = _Terms(data)
    mean = t.sum_x / t.n

    if kind is ModelKind.EXPONENTIAL:
        theta = t.n / t.sum_x
        fx = -_loglik_values(kind, (theta,), t)
        return _result(kind, t, data, np.log([theta]), fx, True, 0, 0)

    if kind is ModelKind.XGAMMA:
        x, fx, ok, its = _optimise(kind, t, np.log([1.0 / mean]))
        return _result(kind, t, data, x, fx, ok, its, 1)

    alpha0, theta0 = _moment_start(data)
    if kind is ModelKind.GAMMA:
        x, fx, ok, its = _optimise(kind, t, np.log([alpha0, theta0]))
        return _result(kind, t, data, x, fx, ok, its, 1)

    gd = fit_model(ModelKind.GAMMA, data)
    xg = fit_model(ModelKind.XGAMMA, data)
    starts = [
        (gd.params.values[0], gd.params.values[1], 1e-6),
        (1.0, xg.params.values[0], 1.0),
        (alpha0, theta0, theta0),
        (1.0, 1.0 / mean, 1.0 / mean),
    ]
    best = None
    total_its = gd.iterations + xg.iterations
    for s in starts:
        x, fx, ok, its = _optimise(kind, t, np.log(s))
        total_its += its
        if best is None or fx < best[1]:
            best = (x, fx, ok)
    x, fx, ok = best
    return _result(kind, t, data, x, fx, ok, total_its, len(starts))
