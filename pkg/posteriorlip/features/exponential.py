"""
📈 Exponential-Family Models.
================================

Models f(x|θ) = h(x)·exp(T(x)·θ - M(θ)) with a scalar natural parameter.

✨ Features
--------------
- 🧮 Closed forms: the x-score is T'(x)·θ + (log h)'(x).
- 📉 Curvature: `curvature_bounds` returns inf and sup of M'' on an interval,
  used for α in the Bakry-Émery routes and ℓ in the MLE-metric bound.
- 🔁 Sufficiency: n observations enter only through the mean of T(x_i).
- 📏 Divergence: `kl` is the Bregman divergence of M.

📦 Classes
--------------
- `ExpFamilyModel`: Abstract base.
- `GaussianLocation`: N(θ, 1).
- `ExponentialRate`: f(x|θ) = θe^{-θx} on x > 0.
- `CustomExpFamily`: Assembled from user callables.

📦 Functions
--------------
- `linear_gaussian_family`: T(x) = c·x with M(θ) = aθ²/2.
"""

import abc
import collections.abc
import math
import typing

import numpy as np
import numpy.typing as npt

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.features.mixin_base
import posteriorlip.numerics

FloatArray = npt.NDArray[np.float64]
Interval = posteriorlip.abc.objects.Interval
ScalarMap = collections.abc.Callable[[FloatArray], FloatArray]

CURVATURE_GRID = 2049
HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


class ExpFamilyModel(posteriorlip.features.mixin_base.StatModel, abc.ABC):
    """
    Exponential family with Φ(x, θ) = T(x)·θ - M(θ).

    Attributes
    ----------
    lip_T : float
        Lipschitz constant of T on the data space.
    """

    lip_T: float = 1.0

    @abc.abstractmethod
    def statistic(self, x: FloatArray) -> float:
        """Sufficient statistic T(x) of one observation."""
        ...

    @abc.abstractmethod
    def statistic_grad(self, x: FloatArray) -> FloatArray:
        """Gradient of T at x, shape (m,)."""
        ...

    @abc.abstractmethod
    def log_h(self, x: FloatArray) -> float:
        """Log base measure log h(x)."""
        ...

    @abc.abstractmethod
    def log_partition(self, theta: FloatArray) -> FloatArray:
        """M(θ)."""
        ...

    @abc.abstractmethod
    def log_partition_grad(self, theta: FloatArray) -> FloatArray:
        """M'(θ), the mean of T under f(·|θ)."""
        ...

    @abc.abstractmethod
    def log_partition_hess(self, theta: FloatArray) -> FloatArray:
        """M''(θ), the variance of T under f(·|θ)."""
        ...

    def log_h_grad(self, x: FloatArray) -> FloatArray:
        """Gradient of log h at x."""
        return posteriorlip.numerics.gradient_fd(lambda z: self.log_h(z), x)

    @typing.override
    def log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        grid = np.asarray(theta, dtype=np.float64)
        data = posteriorlip.features.mixin_base.as_data(x)
        return self.statistic(data) * grid - self.log_partition(grid) + self.log_h(data)

    def log_likelihood_stat(self, t: float, n: int, theta: FloatArray) -> FloatArray:
        """θ-dependent part of the n-fold log likelihood given the mean statistic t."""
        grid = np.asarray(theta, dtype=np.float64)
        return n * (t * grid - self.log_partition(grid))

    @typing.override
    def score_x(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        grid = np.asarray(theta, dtype=np.float64)
        data = posteriorlip.features.mixin_base.as_data(x)
        slope = self.statistic_grad(data).reshape((-1,) + (1,) * grid.ndim)
        offset = np.asarray(self.log_h_grad(data), dtype=np.float64).reshape(slope.shape)
        return slope * grid + offset

    def curvature_bounds(self, domain: Interval) -> tuple[float, float]:
        """
        inf and sup of M'' over ``domain`` ∩ `param_space`, on a scan grid.

        Raises
        ------
        posteriorlip.errors.InvalidInput
            If the domain misses the parameter space.
        """
        overlap = domain.intersect(self.param_space)
        if overlap is None:
            raise posteriorlip.errors.InvalidInput(f"{domain} misses the parameter space")
        values = self.log_partition_hess(posteriorlip.numerics.scan_grid(overlap, CURVATURE_GRID))
        return float(np.min(values)), float(np.max(values))

    def kl(self, theta: FloatArray, theta0: float) -> FloatArray:
        """KL(f(·|θ₀) ‖ f(·|θ)) = M(θ) - M(θ₀) - M'(θ₀)(θ - θ₀)."""
        grid = np.asarray(theta, dtype=np.float64)
        anchor = np.array(theta0, dtype=np.float64)
        return (
            self.log_partition(grid)
            - self.log_partition(anchor)
            - self.log_partition_grad(anchor) * (grid - anchor)
        )


class GaussianLocation(ExpFamilyModel):
    """Gaussian location model f(x|θ) = N(x; θ, 1)."""

    name = "gaussian_location"
    lip_T = 1.0

    def __init__(self, box: tuple[float, float] = (-3.0, 3.0)) -> None:
        self.param_space = Interval(-math.inf, math.inf)
        self.data_space = Interval(-math.inf, math.inf)
        self.data_box = [box]

    @typing.override
    def statistic(self, x: FloatArray) -> float:
        return float(x[0])

    @typing.override
    def statistic_grad(self, x: FloatArray) -> FloatArray:
        return np.ones(1)

    @typing.override
    def log_h(self, x: FloatArray) -> float:
        return -0.5 * float(x[0]) ** 2 - HALF_LOG_TWO_PI

    @typing.override
    def log_h_grad(self, x: FloatArray) -> FloatArray:
        return np.array([-float(x[0])])

    @typing.override
    def log_partition(self, theta: FloatArray) -> FloatArray:
        return 0.5 * theta**2

    @typing.override
    def log_partition_grad(self, theta: FloatArray) -> FloatArray:
        return theta

    @typing.override
    def log_partition_hess(self, theta: FloatArray) -> FloatArray:
        return np.ones_like(theta, dtype=np.float64)

    @typing.override
    def curvature_bounds(self, domain: Interval) -> tuple[float, float]:
        return 1.0, 1.0

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        return rng.normal(theta, 1.0, size=(n, 1))


class ExponentialRate(ExpFamilyModel):
    """
    Exponential model f(x|θ) = θe^{-θx} on x > 0.

    In natural form T(x) = -x and M(θ) = -log θ, so M'' = 1/θ² only has a
    positive infimum on bounded parameter ranges.
    """

    name = "exponential_rate"
    lip_T = 1.0

    def __init__(self, box: tuple[float, float] = (0.2, 5.0)) -> None:
        self.param_space = Interval(0.0, math.inf)
        self.data_space = Interval(0.0, math.inf)
        self.data_box = [box]

    @typing.override
    def statistic(self, x: FloatArray) -> float:
        return -float(x[0])

    @typing.override
    def statistic_grad(self, x: FloatArray) -> FloatArray:
        return -np.ones(1)

    @typing.override
    def log_h(self, x: FloatArray) -> float:
        return 0.0 if x[0] > 0 else -math.inf

    @typing.override
    def log_h_grad(self, x: FloatArray) -> FloatArray:
        return np.zeros(1)

    @typing.override
    def log_partition(self, theta: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return -np.log(theta)

    @typing.override
    def log_partition_grad(self, theta: FloatArray) -> FloatArray:
        return -1.0 / theta

    @typing.override
    def log_partition_hess(self, theta: FloatArray) -> FloatArray:
        return 1.0 / theta**2

    @typing.override
    def curvature_bounds(self, domain: Interval) -> tuple[float, float]:
        overlap = domain.intersect(self.param_space)
        if overlap is None:
            raise posteriorlip.errors.InvalidInput(f"{domain} misses the parameter space")
        lowest = 1.0 / overlap.hi**2 if math.isfinite(overlap.hi) else 0.0
        highest = 1.0 / overlap.lo**2 if overlap.lo > 0 else math.inf
        return lowest, highest

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        return rng.exponential(1.0 / theta, size=(n, 1))


class CustomExpFamily(ExpFamilyModel):
    """
    Exponential family assembled from callables.

    Parameters
    ----------
    statistic, statistic_grad, log_h : Callable
        T, T' and log h on data points of shape (m,).
    log_partition, log_partition_grad, log_partition_hess : Callable
        M, M' and M'' on parameter arrays.
    lip_T : float
        Lipschitz constant of T.
    param_space, data_space : Interval
        Parameter and data ranges.
    box : tuple[float, float]
        Default data box.
    sampler : Callable[[float, int, Generator], FloatArray] | None
        Draws from f(·|θ); `sample` raises without it.
    """

    name = "expfam_custom"

    def __init__(
        self,
        *,
        statistic: collections.abc.Callable[[FloatArray], float],
        statistic_grad: collections.abc.Callable[[FloatArray], FloatArray],
        log_h: collections.abc.Callable[[FloatArray], float],
        log_partition: ScalarMap,
        log_partition_grad: ScalarMap,
        log_partition_hess: ScalarMap,
        lip_T: float,
        param_space: Interval,
        data_space: Interval,
        box: tuple[float, float],
        sampler: collections.abc.Callable[[float, int, np.random.Generator], FloatArray] | None = None,
    ) -> None:
        self._statistic = statistic
        self._statistic_grad = statistic_grad
        self._log_h = log_h
        self._log_partition = log_partition
        self._log_partition_grad = log_partition_grad
        self._log_partition_hess = log_partition_hess
        self._sampler = sampler
        self.lip_T = lip_T
        self.param_space = param_space
        self.data_space = data_space
        self.data_box = [box]

    @typing.override
    def statistic(self, x: FloatArray) -> float:
        return float(self._statistic(x))

    @typing.override
    def statistic_grad(self, x: FloatArray) -> FloatArray:
        return np.atleast_1d(np.asarray(self._statistic_grad(x), dtype=np.float64))

    @typing.override
    def log_h(self, x: FloatArray) -> float:
        return float(self._log_h(x))

    @typing.override
    def log_partition(self, theta: FloatArray) -> FloatArray:
        return np.asarray(self._log_partition(theta), dtype=np.float64)

    @typing.override
    def log_partition_grad(self, theta: FloatArray) -> FloatArray:
        return np.asarray(self._log_partition_grad(theta), dtype=np.float64)

    @typing.override
    def log_partition_hess(self, theta: FloatArray) -> FloatArray:
        return np.broadcast_to(
            np.asarray(self._log_partition_hess(theta), dtype=np.float64), np.shape(theta)
        )

    @typing.override
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        if self._sampler is None:
            raise posteriorlip.errors.MissingParam("sampler", "custom model has no sampler")
        return np.asarray(self._sampler(theta, n, rng), dtype=np.float64).reshape(n, -1)


def linear_gaussian_family(
    scale: float = 1.0, curvature: float = 1.0, box: tuple[float, float] = (-3.0, 3.0)
) -> CustomExpFamily:
    """
    Exponential family with T(x) = scale·x and M(θ) = curvature·θ²/2.

    The matching base measure is N(0, curvature/scale²), so that under
    f(·|θ) the datum is N(curvature·θ/scale, curvature/scale²).
    """
    if scale == 0 or not curvature > 0:
        raise posteriorlip.errors.InvalidInput("need scale ≠ 0 and curvature > 0")
    spread = curvature / scale**2
    log_norm = 0.5 * math.log(2.0 * math.pi * spread)

    return CustomExpFamily(
        statistic=lambda x: scale * float(x[0]),
        statistic_grad=lambda x: np.array([scale]),
        log_h=lambda x: -0.5 * float(x[0]) ** 2 / spread - log_norm,
        log_partition=lambda t: 0.5 * curvature * t**2,
        log_partition_grad=lambda t: curvature * t,
        log_partition_hess=lambda t: np.full_like(t, curvature, dtype=np.float64),
        lip_T=abs(scale),
        param_space=Interval(-math.inf, math.inf),
        data_space=Interval(-math.inf, math.inf),
        box=box,
        sampler=lambda theta, n, rng: rng.normal(
            curvature * theta / scale, math.sqrt(spread), size=(n, 1)
        ),
    )
