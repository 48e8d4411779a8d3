import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from exgamma import core
from exgamma.core import ExgParams
from exgamma.models import (
    ModelKind,
    ModelParams,
    model_cdf,
    model_hazard,
    model_log_pdf,
    model_pdf,
    model_survival,
)
from oracles import mixture_pdf, quad

ED, GD, XG, EXG = ModelKind.EXPONENTIAL, ModelKind.GAMMA, ModelKind.XGAMMA, ModelKind.EXTENDED_XGAMMA


def test_kinds():
    assert [k.tag for k in ModelKind] == ["ed", "gd", "xg", "exg"]
    assert [k.param_count for k in ModelKind] == [1, 2, 1, 3]
    assert ModelKind.from_tag("exg") is EXG
    with pytest.raises(ValueError):
        ModelKind.from_tag("EXG")


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(GD, (1.0,))
    with pytest.raises(ValueError):
        ModelParams(ED, (0.0,))
    with pytest.raises(ValueError):
        ModelParams(EXG, (1.0, 1.0, -1.0))
    assert ModelParams(EXG, (1.0, 1.0, 0.0)).named() == {"alpha": 1.0, "theta": 1.0, "beta": 0.0}
    with pytest.raises(ValueError, match="alpha"):
        ModelParams.from_named(GD, theta=1.0)


def test_log_pdf_examples():
    assert model_log_pdf(ModelParams(ED, (1.0,)), 1.0) == -1.0
    th = 1.3376
    expected = math.log(th**2 / (1 + th) * (1 + th / 2) * math.exp(-th))
    assert model_log_pdf(ModelParams(XG, (th,)), 1.0) == pytest.approx(expected, rel=1e-12)
    assert expected == pytest.approx(-1.0928660300533268, rel=1e-13)
    gd = ModelParams(GD, (17.4355, 11.5711))
    assert model_log_pdf(gd, 1.5) == pytest.approx(core.log_pdf(ExgParams(17.4355, 11.5711, 0), 1.5), rel=1e-12)


def test_log_pdf_domain():
    with pytest.raises(ValueError):
        model_log_pdf(ModelParams(ED, (1.0,)), 0.0)
    with pytest.raises(ValueError):
        model_cdf(ModelParams(GD, (2.0, 1.0)), -1.0)


def test_cdf_examples():
    th = 0.6636
    assert model_cdf(ModelParams(ED, (th,)), 1 / th) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert model_cdf(ModelParams(GD, (3.0, 2.0)), 0.0) == 0.0
    assert model_cdf(ModelParams(XG, (1.0,)), math.log(2)) == pytest.approx(
        quad(lambda x: mixture_pdf(x, 1, 1, 1), 0, math.log(2)), abs=1e-12
    )


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.05, max_value=20), st.floats(min_value=1e-3, max_value=30))
def test_nesting_ladder(theta, x):
    ed = model_log_pdf(ModelParams(ED, (theta,)), x)
    assert ed == pytest.approx(model_log_pdf(ModelParams(GD, (1.0, theta)), x), rel=1e-12, abs=1e-12)
    assert ed == pytest.approx(core.log_pdf(ExgParams(1.0, theta, 0.0), x), rel=1e-12, abs=1e-12)
    xg = model_log_pdf(ModelParams(XG, (theta,)), x)
    assert xg == pytest.approx(core.log_pdf(ExgParams(1.0, theta, 1.0), x), rel=1e-12, abs=1e-12)
    assert model_cdf(ModelParams(XG, (theta,)), x) == pytest.approx(core.cdf(ExgParams(1, theta, 1), x), abs=1e-12)
    assert model_cdf(ModelParams(ED, (theta,)), x) == pytest.approx(core.cdf(ExgParams(1, theta, 0), x), abs=1e-12)


models = st.one_of(
    st.builds(lambda t: ModelParams(ED, (t,)), st.floats(0.05, 20)),
    st.builds(lambda a, t: ModelParams(GD, (a, t)), st.floats(0.2, 30), st.floats(0.05, 20)),
    st.builds(lambda t: ModelParams(XG, (t,)), st.floats(0.05, 20)),
    st.builds(lambda a, t, b: ModelParams(EXG, (a, t, b)), st.floats(0.2, 30), st.floats(0.05, 20), st.floats(0, 20)),
)


@settings(max_examples=100, deadline=None)
@given(models)
def test_cdf_is_a_distribution_function(m):
    e = m.to_exg()
    xs = np.linspace(0, core.quantile(e, 1 - 1e-13), 300)
    f = model_cdf(m, xs)
    assert np.all((f >= 0) & (f <= 1))
    assert np.all(np.diff(f) >= -1e-15)
    assert f[-1] == pytest.approx(1.0, abs=1e-12)
    mid = float(xs[150])
    assert model_cdf(m, mid) == pytest.approx(quad(lambda x: model_pdf(m, x), 0, mid), abs=1e-9)
    assert model_survival(m, mid) == pytest.approx(1 - model_cdf(m, mid), abs=1e-12)
    assert model_hazard(m, mid) == pytest.approx(model_pdf(m, mid) / model_survival(m, mid), rel=1e-12)
