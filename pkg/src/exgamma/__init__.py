"""Extended xgamma (EXg) lifetime distribution: density, moments, sampling,
maximum-likelihood fitting and model comparison against ED, GD and Xg."""

from .core import (
    ExgParams,
    MomentSummary,
    cdf,
    hazard,
    log_pdf,
    mean_deviation,
    mode,
    moment_summary,
    pdf,
    quantile,
    raw_moment,
    survival,
)
from .dataio import DataError, Sample, glassfiber, load_dataset, parse_dataset, summary
from .fit import FitResult, fit_model, log_likelihood, nelder_mead, score_numeric
from .gof import GofReport, compare_models, ks_pvalue, ks_statistic
from .models import ModelKind, ModelParams
from .sampler import RngStream, exg_sample, gamma_variate

__version__ = "0.1.0"
