"""Kolmogorov-Smirnov statistics, information criteria and model comparison."""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .dataio import Sample
from .fit import FitResult, fit_model
from .models import ModelKind, ModelParams, model_cdf

__all__ = [
    "GofReport",
    "ks_statistic",
    "ks_pvalue",
    "gof_report",
    "compare_models",
    "best_model",
    "DEFAULT_MODELS",
]

DEFAULT_MODELS = (
    ModelKind.EXPONENTIAL,
    ModelKind.GAMMA,
    ModelKind.XGAMMA,
    ModelKind.EXTENDED_XGAMMA,
)


@dataclass(frozen=True)
class GofReport:
    model: ModelKind
    params: Optional[ModelParams]
    neg2_loglik: float
    ks_stat: float
    ks_pvalue: float
    aic: float
    bic: float
    fit: Optional[FitResult] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_dict(self) -> dict:
        if self.failed:
            return {"model": self.model.tag, "error": self.error}
        return {
            "model": self.model.tag,
            "params": self.params.named(),
            "neg2_loglik": self.neg2_loglik,
            "ks_stat": self.ks_stat,
            "ks_pvalue": self.ks_pvalue,
            "aic": self.aic,
            "bic": self.bic,
        }


def ks_statistic(data, cdf: Callable) -> float:
    """One-sample D_n = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n) over the sorted sample.

    ``data`` is a Sample or a sequence of floats; ``cdf`` must accept a numpy array.
    """
    values = data.as_array() if isinstance(data, Sample) else np.asarray(data, dtype=float)
    x = np.sort(values)
    n = x.size
    if n == 0:
        raise ValueError("K-S statistic needs at least one observation")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(min(1.0, max(d_plus, d_minus, 0.0)))


def ks_pvalue(d: float, n: int) -> float:
    """Asymptotic Kolmogorov p-value P(K > sqrt(n) d).

    Uses 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lam^2) for lam = sqrt(n) d >= 1;
    below that the alternating series converges slowly (and is 0 at lam = 0
    after any even number of terms), so the Jacobi-transformed form
    1 - sqrt(2 pi)/lam sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 lam^2)) is used.
    Terms stop once below 1e-12 or after 100.
    """
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"d must lie in [0, 1], got {d!r}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    lam = math.sqrt(n) * d
    if lam == 0.0:
        return 1.0
    total = 0.0
    if lam >= 1.0:
        for k in range(1, 101):
            term = math.exp(-2.0 * k * k * lam * lam)
            total += term if k % 2 else -term
            if term < 1e-12:
                break
        p = 2.0 * total
    else:
        for k in range(1, 101):
            term = math.exp(-((2 * k - 1) ** 2) * math.pi**2 / (8.0 * lam * lam))
            total += term
            if term < 1e-12:
                break
        p = 1.0 - math.sqrt(2.0 * math.pi) / lam * total
    return min(1.0, max(0.0, p))


def gof_report(fit: FitResult, data: Sample) -> GofReport:
    # K-S with estimated parameters, no Lilliefors correction
    k = fit.kind.param_count
    d = ks_statistic(data, lambda x: model_cdf(fit.params, x))
    return GofReport(
        model=fit.kind,
        params=fit.params,
        neg2_loglik=fit.neg2_loglik,
        ks_stat=d,
        ks_pvalue=ks_pvalue(d, data.n),
        aic=fit.neg2_loglik + 2.0 * k,
        bic=fit.neg2_loglik + k * math.log(data.n),
        fit=fit,
    )


def compare_models(data: Sample, kinds: Sequence[ModelKind] = DEFAULT_MODELS) -> list:
    """Fit every model and return GofReports sorted by -2 log L (failures last)."""
    if not kinds:
        raise ValueError("no models to compare")
    reports = []
    for kind in kinds:
        try:
            reports.append(gof_report(fit_model(kind, data), data))
        except (ValueError, ArithmeticError) as exc:
            nan = math.nan
            reports.append(GofReport(kind, None, nan, nan, nan, nan, nan, error=str(exc)))
    reports.sort(key=lambda r: (r.failed, r.neg2_loglik if not r.failed else 0.0))
    return reports


def best_model(reports, criterion: str = "neg2_loglik") -> Optional[GofReport]:
    """Best successful report: smallest -2 log L (or ks_stat/aic/bic), or largest ks_pvalue."""
    ok = [r for r in reports if not r.failed]
    if not ok:
        return None
    if criterion == "ks_pvalue":
        return max(ok, key=lambda r: r.ks_pvalue)
    return min(ok, key=lambda r: getattr(r, criterion))
