"""
🏗️ Statistical Model Bases.
===============================

Abstract bases every statistical model derives from.

✨🧩 Mixin Architecture.
-------------------
- 🏗️ StatModel: Likelihood f(x|θ), data box, parameter space and sampler.
- ✂️ TruncatedModelMixin: Models whose positivity set in θ depends on x.
- 🔌 Abstract Methods: `log_likelihood` and `sample`.
"""

import abc
import collections.abc
import math
import typing

import numpy as np
import numpy.typing as npt

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.numerics

FloatArray = npt.NDArray[np.float64]
DataPoint = float | collections.abc.Sequence[float] | FloatArray


def as_data(x: DataPoint) -> FloatArray:
    """Coerce a data point to a float array of shape (m,)."""
    return np.atleast_1d(np.asarray(x, dtype=np.float64)).ravel()


class StatModel(abc.ABC):
    """
    Statistical model f(x|θ) with x in a box of ℝᵐ.

    Attributes
    ----------
    name : str
        Registry name.
    data_dim : int
        Dimension m of one data point.
    param_dim : int
        Dimension of θ (1 or 2).
    param_space : Interval
        Parameter interval for one-dimensional θ.
    data_space : Interval
        Range of each data coordinate, used for normalisation checks.
    data_box : list[tuple[float, float]]
        Compact box over which suprema in x are taken by default.
    moving_support : bool
        Whether the θ-support of f(x|·) depends on x.
    """

    name: str = "model"
    data_dim: int = 1
    param_dim: int = 1
    moving_support: bool = False

    if typing.TYPE_CHECKING:
        param_space: posteriorlip.abc.objects.Interval
        data_space: posteriorlip.abc.objects.Interval
        data_box: list[tuple[float, float]]

    @abc.abstractmethod
    def log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        """Log f(x|θ) for one data point and an array of parameters."""
        ...

    @abc.abstractmethod
    def sample(self, theta: float, n: int, rng: np.random.Generator) -> FloatArray:
        """Draw ``n`` data points of shape (n, m) from f(·|θ)."""
        ...

    def score_x(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        """
        Gradient in x of log f(x|θ), shape ``(m,) + theta.shape``.

        Falls back to central differences when a model has no closed form.
        """
        grid = np.asarray(theta, dtype=np.float64)
        return posteriorlip.numerics.gradient_fd(lambda z: self.log_likelihood(z, grid), as_data(x))

    def positivity(self, x: FloatArray) -> posteriorlip.abc.objects.Interval:
        """θ-interval on which f(x|θ) > 0."""
        return self.param_space

    def normalization_error(self, thetas: collections.abc.Iterable[float]) -> float:
        """
        Largest |∫ f(x|θ) dx - 1| over ``thetas`` (scalar data only).

        Raises
        ------
        posteriorlip.errors.InvalidInput
            If the model has vector-valued data.
        """
        if self.data_dim != 1:
            raise posteriorlip.errors.InvalidInput("normalisation checks need scalar data")
        worst = 0.0
        for theta in thetas:
            point = np.array([theta])

            def density(x: float, point: FloatArray = point) -> float:
                return math.exp(float(self.log_likelihood(np.array([x]), point)[0]))

            breaks = [b for b in self.breakpoints(theta) if self.data_space.contains(b)]
            total = posteriorlip.numerics.integrate(
                density, self.data_space, points=breaks or None
            ).value
            worst = max(worst, abs(total - 1.0))
        return worst

    def breakpoints(self, theta: float) -> list[float]:
        """Data values where f(·|θ) is not smooth."""
        return []

    def extended_log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        """Log likelihood extended smoothly past the positivity set in θ."""
        return self.log_likelihood(x, theta)

    @typing.override
    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class TruncatedModelMixin(StatModel, abc.ABC):
    """
    Base for models f(x|θ) = a(θ)b(x)·1{θ < h(x)} with a moving θ-support.

    Attributes
    ----------
    truncation_lipschitz : float
        sup over the data space of |∇h|.
    """

    moving_support: bool = True
    truncation_lipschitz: float = 1.0

    @abc.abstractmethod
    def theta_factor(self, theta: FloatArray) -> FloatArray:
        """The factor a(θ) of the likelihood."""
        ...

    @abc.abstractmethod
    def truncation(self, x: FloatArray) -> float:
        """Upper end h(x) of the θ-support at x."""
        ...

    @typing.override
    def positivity(self, x: FloatArray) -> posteriorlip.abc.objects.Interval:
        upper = min(self.truncation(as_data(x)), self.param_space.hi)
        if not upper > self.param_space.lo:
            raise posteriorlip.errors.ZeroEvidence(f"empty positivity set at x={as_data(x)}")
        return posteriorlip.abc.objects.Interval(self.param_space.lo, upper)

    @abc.abstractmethod
    def log_b(self, x: FloatArray) -> float:
        """Log of the data factor b(x)."""
        ...

    @abc.abstractmethod
    def log_b_grad(self, x: FloatArray) -> FloatArray:
        """Gradient of log b at x, shape (m,)."""
        ...

    @typing.override
    def log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        grid = np.asarray(theta, dtype=np.float64)
        data = as_data(x)
        inside = (grid > self.param_space.lo) & (grid < self.truncation(data))
        with np.errstate(divide="ignore", invalid="ignore"):
            values = np.log(self.theta_factor(grid)) + self.log_b(data)
        return np.where(inside, values, -np.inf)

    @typing.override
    def score_x(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        grid = np.asarray(theta, dtype=np.float64)
        slope = self.log_b_grad(as_data(x)).reshape((-1,) + (1,) * grid.ndim)
        return np.broadcast_to(slope, slope.shape[:1] + grid.shape).copy()

    @typing.override
    def extended_log_likelihood(self, x: FloatArray, theta: FloatArray) -> FloatArray:
        grid = np.asarray(theta, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(self.theta_factor(grid)) + self.log_b(as_data(x))
