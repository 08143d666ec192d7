import numpy as np
import pytest

from delayed_means.periodic import AnalyticPeriodicFunction, Grid2D


@pytest.fixture
def grid32():
    return Grid2D.square(32)


def analytic(fn, label="f"):
    return AnalyticPeriodicFunction(fn, label)


@pytest.fixture
def cos_cos():
    return analytic(lambda x, y: np.cos(x) * np.cos(y), "cos x cos y")
