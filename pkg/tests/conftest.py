"""Pytest configuration and fixtures."""

import math
import typing

import numpy as np
import numpy.typing as npt
import pytest

import posteriorlip.abc.objects
import posteriorlip.features.exponential
import posteriorlip.features.mixin_base
import posteriorlip.features.pareto
import posteriorlip.features.priors
import posteriorlip.measures
import posteriorlip.models

FloatArray = npt.NDArray[np.float64]


class FlatLikelihood(posteriorlip.features.mixin_base.StatModel):
    """Likelihood that ignores θ, so every posterior equals the prior."""

    name = "flat"

    def __init__(self) -> None:
        self.param_space = posteriorlip.abc.objects.Interval(-math.inf, math.inf)
        self.data_space = posteriorlip.abc.objects.Interval(-math.inf, math.inf)
        self.data_box = [(-1.0, 1.0)]

    @typing.override
    def log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        return np.full(np.shape(theta), -0.5 * float(x[0]) ** 2 - 0.5 * math.log(2.0 * math.pi))

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        return rng.normal(0.0, 1.0, size=(n, 1))


@pytest.fixture
def gaussian_kernel() -> posteriorlip.models.PosteriorKernel:
    """Gaussian location model under a standard normal prior."""
    return posteriorlip.models.PosteriorKernel(
        posteriorlip.features.exponential.GaussianLocation(),
        posteriorlip.features.priors.gaussian(),
    )


@pytest.fixture
def pareto_kernel() -> posteriorlip.models.PosteriorKernel:
    """One-dimensional Pareto model under the uniform prior on (1, 2)."""
    return posteriorlip.models.PosteriorKernel(
        posteriorlip.features.pareto.Pareto1D(),
        posteriorlip.features.priors.uniform(1.0, 2.0),
    )


@pytest.fixture
def flat_kernel() -> posteriorlip.models.PosteriorKernel:
    """Kernel whose posterior never moves."""
    return posteriorlip.models.PosteriorKernel(FlatLikelihood(), posteriorlip.features.priors.gaussian())


@pytest.fixture
def standard_normal() -> posteriorlip.measures.Distribution1D:
    """N(0, 1)."""
    return posteriorlip.measures.normal(0.0, 1.0)
