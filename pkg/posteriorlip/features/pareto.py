"""
✂️ Pareto Models.
====================

Truncated models whose posterior support (1, h(x)) moves with the data.

📦 Classes
--------------
- `Pareto1D`: f(x|θ) = θ/x²·1{θ < x} on x > 1.
- `ParetoMSample`: f(x|θ) = θ/x̄^{m+1}·1{θ < x̄}, x̄ = x₁ + ... + x_m.
- `ParetoHFunction`: f(x|θ) = a(θ)b(x)·1{θ < h(x)} with h(x) = (x + 1)/2,
  b(x) = x⁻² and a(θ) = 2θ - 1.
- `Pareto2Param`: f(x|θ, ε) = εθ^ε/x^{1+ε}·1{θ < x} on (θ, ε) ∈ (1, 2)².
"""

import math
import typing

import numpy as np
import numpy.typing as npt

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.features.mixin_base

FloatArray = npt.NDArray[np.float64]
Interval = posteriorlip.abc.objects.Interval


class Pareto1D(posteriorlip.features.mixin_base.TruncatedModelMixin):
    """One-dimensional Pareto model with scale θ > 1."""

    name = "pareto_1d"
    truncation_lipschitz = 1.0

    def __init__(self, box: tuple[float, float] = (1.05, 3.0)) -> None:
        self.param_space = Interval(1.0, math.inf)
        self.data_space = Interval(1.0, math.inf)
        self.data_box = [box]

    @typing.override
    def theta_factor(self, theta: FloatArray) -> FloatArray:
        return theta

    @typing.override
    def truncation(self, x: FloatArray) -> float:
        return float(x[0])

    @typing.override
    def log_b(self, x: FloatArray) -> float:
        return -2.0 * math.log(x[0]) if x[0] > 0 else -math.inf

    @typing.override
    def log_b_grad(self, x: FloatArray) -> FloatArray:
        return np.array([-2.0 / x[0]])

    @typing.override
    def breakpoints(self, theta: float) -> list[float]:
        return [theta]

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        return (theta / (1.0 - rng.random(n)))[:, None]


class ParetoMSample(posteriorlip.features.mixin_base.TruncatedModelMixin):
    """
    Pareto model for m observations that sees them through their sum x̄.

    The density θ/x̄^{m+1} carries the simplex volume x̄^{m-1}/(m-1)! in the
    law of x̄, so the sampler draws x̄ from the one-dimensional Pareto law and
    splits it uniformly over the simplex.
    """

    name = "pareto_msample"

    def __init__(self, m: int = 2, box: tuple[float, float] | None = None) -> None:
        if m < 1:
            raise posteriorlip.errors.InvalidInput(f"sample size m must be positive, got {m}")
        self.m = m
        self.data_dim = m
        self.truncation_lipschitz = math.sqrt(m)
        self.param_space = Interval(1.0, math.inf)
        self.data_space = Interval(0.0, math.inf)
        self.data_box = [box if box is not None else (1.05 / m, 3.0 / m)] * m

    @typing.override
    def theta_factor(self, theta: FloatArray) -> FloatArray:
        return theta

    @typing.override
    def truncation(self, x: FloatArray) -> float:
        return math.fsum(x)

    @typing.override
    def log_b(self, x: FloatArray) -> float:
        if np.any(x <= 0):
            return -math.inf
        return -(self.m + 1) * math.log(math.fsum(x))

    @typing.override
    def log_b_grad(self, x: FloatArray) -> FloatArray:
        return np.full(self.m, -(self.m + 1) / math.fsum(x))

    @typing.override
    def breakpoints(self, theta: float) -> list[float]:
        return [theta]

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        totals = theta / (1.0 - rng.random(n))
        return totals[:, None] * rng.dirichlet(np.ones(self.m), size=n)


class ParetoHFunction(posteriorlip.features.mixin_base.TruncatedModelMixin):
    """Truncated model with h(x) = (x + 1)/2, b(x) = x⁻² and a(θ) = 2θ - 1."""

    name = "pareto_hfunction"
    truncation_lipschitz = 0.5

    def __init__(self, box: tuple[float, float] = (1.1, 4.0)) -> None:
        self.param_space = Interval(1.0, math.inf)
        self.data_space = Interval(1.0, math.inf)
        self.data_box = [box]

    @typing.override
    def theta_factor(self, theta: FloatArray) -> FloatArray:
        return 2.0 * theta - 1.0

    @typing.override
    def truncation(self, x: FloatArray) -> float:
        return 0.5 * (float(x[0]) + 1.0)

    @typing.override
    def log_b(self, x: FloatArray) -> float:
        return -2.0 * math.log(x[0]) if x[0] > 0 else -math.inf

    @typing.override
    def log_b_grad(self, x: FloatArray) -> FloatArray:
        return np.array([-2.0 / x[0]])

    @typing.override
    def breakpoints(self, theta: float) -> list[float]:
        return [2.0 * theta - 1.0]

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        return ((2.0 * theta - 1.0) / (1.0 - rng.random(n)))[:, None]


class Pareto2Param(posteriorlip.features.mixin_base.StatModel):
    """
    Two-parameter Pareto model on (θ, ε) ∈ (1, 2)².

    Parameters are passed as points of shape (k, 2).
    """

    name = "pareto_2param"
    param_dim = 2
    moving_support = True

    def __init__(self, box: tuple[float, float] = (1.1, 2.0)) -> None:
        self.param_space = Interval(1.0, 2.0)
        self.param_box: list[tuple[float, float]] = [(1.0, 2.0), (1.0, 2.0)]
        self.data_space = Interval(1.0, math.inf)
        self.data_box = [box]

    @typing.override
    def log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        points = np.atleast_2d(np.asarray(theta, dtype=np.float64))
        value = float(posteriorlip.features.mixin_base.as_data(x)[0])
        scale, shape = points[:, 0], points[:, 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            logs = np.log(shape) + shape * np.log(scale) - (1.0 + shape) * math.log(value)
        return np.where((scale > 1.0) & (scale < value), logs, -np.inf)

    @typing.override
    def score_x(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        points = np.atleast_2d(np.asarray(theta, dtype=np.float64))
        value = float(posteriorlip.features.mixin_base.as_data(x)[0])
        return (-(1.0 + points[:, 1]) / value)[None, :]

    @typing.override
    def positivity(self, x: FloatArray) -> Interval:
        upper = min(float(posteriorlip.features.mixin_base.as_data(x)[0]), self.param_space.hi)
        if not upper > self.param_space.lo:
            raise posteriorlip.errors.ZeroEvidence(f"empty positivity set at x={x}")
        return Interval(self.param_space.lo, upper)

    @typing.override
    def breakpoints(self, theta: float) -> list[float]:
        return [theta]

    @typing.override
    def sample(self, theta: npt.ArrayLike, n: int, rng: np.random.Generator) -> FloatArray:
        scale, shape = np.asarray(theta, dtype=np.float64).ravel()[:2]
        return (scale * (1.0 - rng.random(n)) ** (-1.0 / shape))[:, None]
