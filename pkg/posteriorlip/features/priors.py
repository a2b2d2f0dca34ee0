"""
🎯 Prior Laws.
=================

Priors π(dθ) ∝ e^{-W(θ)} dθ on an interval, together with what the
certificates need to know about W.

✨ Features
--------------
- 📐 Potentials: `log_density = -W` and its derivative in vectorised form.
- 📉 Curvature: `lambda_min` is the least value of W'' on the support, or
  ``None`` when it is not known in closed form.
- 🧮 Normalisation: the `distribution` view is built once and cached.

📦 Classes
--------------
- `Prior`: One-dimensional prior.
- `Prior2D`: Prior with a density on a box in ℝ².

📦 Functions
--------------
- `gaussian`, `uniform`, `truncated_exponential`, `power`,
  `power_exponential`, `uniform_2d` and the name-keyed `build_prior`.
"""

import collections.abc
import math
import typing

import numpy as np
import numpy.typing as npt

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.measures

FloatArray = npt.NDArray[np.float64]
VectorFunction = collections.abc.Callable[[FloatArray], FloatArray]
Interval = posteriorlip.abc.objects.Interval


class Prior:
    """
    Prior law on an interval with density ∝ e^{-W}.

    Parameters
    ----------
    name : str
        Catalogue name.
    support : Interval
        Support of the prior.
    log_density : Callable[[FloatArray], FloatArray]
        Vectorised -W, up to an additive constant.
    dlog_density : Callable[[FloatArray], FloatArray] | None, optional
        Vectorised -W'; central differences are used when omitted.
    lambda_min : float | None, optional
        inf W'' on the support.
    is_flat : bool, optional
        Whether the density is constant on the support.
    params : dict[str, float] | None, optional
        Catalogue parameters, kept for reports.
    """

    __slots__: tuple[str, ...] = (
        "_distribution",
        "_dlog_density",
        "is_flat",
        "lambda_min",
        "log_density",
        "name",
        "params",
        "support",
    )

    def __init__(
        self,
        name: str,
        support: Interval,
        log_density: VectorFunction,
        *,
        dlog_density: VectorFunction | None = None,
        lambda_min: float | None = None,
        is_flat: bool = False,
        params: dict[str, float] | None = None,
    ) -> None:
        self.name: str = name
        self.support: Interval = support
        self.log_density: VectorFunction = log_density
        self._dlog_density: VectorFunction | None = dlog_density
        self.lambda_min: float | None = lambda_min
        self.is_flat: bool = is_flat
        self.params: dict[str, float] = dict(params or {})
        self._distribution: posteriorlip.measures.Distribution1D | None = None

    @property
    def distribution(self) -> posteriorlip.measures.Distribution1D:
        """The prior as a normalised `Distribution1D`."""
        if self._distribution is None:
            self._distribution = posteriorlip.measures.Distribution1D(
                self.support, log_density=self.log_density
            )
        return self._distribution

    @property
    def log_normalizer(self) -> float:
        """Log of ∫ e^{log_density}."""
        return self.distribution.log_normalizer

    def log_pdf(self, theta: npt.ArrayLike) -> FloatArray:
        """Normalised log density, -inf off the support."""
        return self.distribution.logpdf(theta)

    def dlog_density(self, theta: npt.ArrayLike) -> FloatArray:
        """Derivative of the log density, -W'(θ)."""
        points = np.asarray(theta, dtype=np.float64)
        if self._dlog_density is not None:
            return np.broadcast_to(self._dlog_density(points), points.shape).astype(np.float64)
        step = 1e-5 * np.maximum(1.0, np.abs(points))
        upper = np.asarray(self.log_density(points + step), dtype=np.float64)
        lower = np.asarray(self.log_density(points - step), dtype=np.float64)
        return (upper - lower) / (2.0 * step)

    def potential(self, theta: npt.ArrayLike) -> FloatArray:
        """W(θ) up to the same constant as `log_density`."""
        return -np.asarray(self.log_density(np.asarray(theta, dtype=np.float64)), dtype=np.float64)

    @typing.override
    def __repr__(self) -> str:
        return f"Prior(name={self.name!r}, support=({self.support.lo}, {self.support.hi}))"


class Prior2D:
    """
    Prior with a density q on a box (lo₁, hi₁) × (lo₂, hi₂).

    Attributes
    ----------
    name : str
        Catalogue name.
    box : list[tuple[float, float]]
        Support box.
    log_density : Callable[[FloatArray], FloatArray]
        Log q at points of shape (k, 2).
    """

    __slots__: tuple[str, ...] = ("box", "log_density", "name")

    def __init__(
        self, name: str, box: list[tuple[float, float]], log_density: VectorFunction
    ) -> None:
        for lo, hi in box:
            Interval(lo, hi)
        self.name: str = name
        self.box: list[tuple[float, float]] = box
        self.log_density: VectorFunction = log_density

    @typing.override
    def __repr__(self) -> str:
        return f"Prior2D(name={self.name!r}, box={self.box})"


def gaussian(mean: float = 0.0, sd: float = 1.0) -> Prior:
    """N(mean, sd²); W'' = 1/sd²."""
    if not sd > 0:
        raise posteriorlip.errors.InvalidInput(f"sd must be positive, got {sd}")
    precision = 1.0 / (sd * sd)
    return Prior(
        "gaussian",
        posteriorlip.measures.REAL_LINE,
        lambda t: -0.5 * precision * (t - mean) ** 2,
        dlog_density=lambda t: -precision * (t - mean),
        lambda_min=precision,
        params={"mean": mean, "sd": sd},
    )


def uniform(lo: float = 1.0, hi: float = 2.0) -> Prior:
    """Uniform law on (lo, hi)."""
    support = Interval(lo, hi)
    if not support.bounded:
        raise posteriorlip.errors.InvalidInput("uniform prior needs a bounded interval")
    return Prior(
        "uniform",
        support,
        lambda t: np.zeros_like(t, dtype=np.float64),
        dlog_density=lambda t: np.zeros_like(t, dtype=np.float64),
        lambda_min=0.0,
        is_flat=True,
        params={"lo": lo, "hi": hi},
    )


def truncated_exponential(rate: float = 1.0, lo: float = 0.0, hi: float = math.inf) -> Prior:
    """Density ∝ e^{-rate·θ} on (lo, hi)."""
    if not rate > 0:
        raise posteriorlip.errors.InvalidInput(f"rate must be positive, got {rate}")
    return Prior(
        "truncated_exponential",
        Interval(lo, hi),
        lambda t: -rate * t,
        dlog_density=lambda t: np.full_like(t, -rate, dtype=np.float64),
        lambda_min=0.0,
        params={"rate": rate, "lo": lo, "hi": hi},
    )


def _power_curvature(power: float, lo: float, hi: float) -> float | None:
    """inf over (lo, hi) of W'' = power/θ² for W = -power·log θ."""
    if power >= 0:
        return power / (hi * hi) if math.isfinite(hi) else 0.0
    return power / (lo * lo) if lo > 0 else None


def power(exponent: float = 1.0, lo: float = 1.0, hi: float = 2.0) -> Prior:
    """Density ∝ θ^exponent on (lo, hi) ⊂ (0, ∞)."""
    if lo < 0:
        raise posteriorlip.errors.InvalidInput("power prior needs lo ≥ 0")
    return Prior(
        "power",
        Interval(lo, hi),
        lambda t: exponent * np.log(t),
        dlog_density=lambda t: exponent / t,
        lambda_min=_power_curvature(exponent, lo, hi),
        params={"exponent": exponent, "lo": lo, "hi": hi},
    )


def power_exponential(alpha: float = 1.0, beta: float = 1.0, b: float = math.inf) -> Prior:
    """
    Density ∝ θ^α e^{-βθ} on (0, b).

    For this weight D⁺ and D⁻ of the Muckenhoupt bound have explicit
    majorants independent of b.
    """
    if alpha <= -1 or beta < 0:
        raise posteriorlip.errors.InvalidInput("power_exponential needs alpha > -1 and beta ≥ 0")
    return Prior(
        "power_exponential",
        Interval(0.0, b),
        lambda t: alpha * np.log(t) - beta * t,
        dlog_density=lambda t: alpha / t - beta,
        lambda_min=_power_curvature(alpha, 0.0, b),
        params={"alpha": alpha, "beta": beta, "b": b},
    )


def uniform_2d(
    lo1: float = 1.0, hi1: float = 2.0, lo2: float = 1.0, hi2: float = 2.0
) -> Prior2D:
    """Uniform density on (lo1, hi1) × (lo2, hi2)."""
    return Prior2D(
        "uniform_2d",
        [(lo1, hi1), (lo2, hi2)],
        lambda points: np.zeros(np.asarray(points).shape[0]),
    )


PRIORS: dict[str, collections.abc.Callable[..., Prior | Prior2D]] = {
    "gaussian": gaussian,
    "uniform": uniform,
    "truncated_exponential": truncated_exponential,
    "power": power,
    "power_exponential": power_exponential,
    "uniform_2d": uniform_2d,
}


def build_prior(name: str, params: dict[str, float] | None = None) -> Prior | Prior2D:
    """
    Instantiate a catalogue prior by name.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If the name is unknown or the parameters do not fit the factory.
    """
    factory = PRIORS.get(name)
    if factory is None:
        raise posteriorlip.errors.InvalidInput(f"unknown prior {name!r}")
    try:
        return factory(**(params or {}))
    except TypeError as exc:
        raise posteriorlip.errors.InvalidInput(f"bad parameters for prior {name!r}: {exc}") from exc
