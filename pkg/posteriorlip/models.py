"""
🧬 Posterior Kernels.
========================

The Bayes formula π(dθ|x) = f(x|θ)π(dθ)/ρ(x) turned into kernels x ↦ π(·|x).

✨ Features
--------------
- 🪵 Log domain: numerators are evaluated as log f + log π and normalised by
  `Distribution1D` after subtracting their maximum.
- 🕳️ Zero evidence: ρ(x) ≤ 1e-300, or an empty positivity set, raises
  `ZeroEvidence`.
- ✂️ Moving supports: the posterior support is the prior support intersected
  with the positivity set of f(x|·).
- 🗂️ Registry: kernels are built by model and prior name.

📦 Classes
--------------
- `PosteriorKernel`: One-dimensional posterior kernel of a model and prior.
- `ExchangeableKernel`: n-observation exponential-family posterior indexed by
  the mean sufficient statistic.
- `WienerKernel`: Finite-dimensional Gaussian kernels x ↦ N(u_j(x), Σ_j).
- `GridPosteriorKernel`: Two-parameter posteriors on tensor grids.
"""

import collections.abc
import logging
import math
import typing

import numpy as np
import numpy.typing as npt
import scipy.special

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.features.exponential
import posteriorlip.features.mixin_base
import posteriorlip.features.pareto
import posteriorlip.features.priors
import posteriorlip.measures
import posteriorlip.numerics

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
Interval = posteriorlip.abc.objects.Interval
DataPoint = posteriorlip.features.mixin_base.DataPoint
StatModel = posteriorlip.features.mixin_base.StatModel
Prior = posteriorlip.features.priors.Prior
Prior2D = posteriorlip.features.priors.Prior2D

TOL_EVIDENCE = 1e-300
LOG_TOL_EVIDENCE = math.log(TOL_EVIDENCE)
WIENER_MAX_J = 128
GRID_MIN_RESOLUTION = 32
NORMALIZATION_TOL = 1e-6

as_data = posteriorlip.features.mixin_base.as_data


class PosteriorKernel:
    """
    Posterior kernel x ↦ π(·|x) of a one-parameter model.

    Parameters
    ----------
    model : StatModel
        Likelihood f(x|θ).
    prior : Prior
        Prior on the parameter.
    """

    __slots__: tuple[str, ...] = ("model", "prior")

    def __init__(self, model: StatModel, prior: Prior) -> None:
        if model.param_dim != 1:
            raise posteriorlip.errors.InvalidInput(f"{model.name} needs a grid kernel")
        self.model: StatModel = model
        self.prior: Prior = prior

    @property
    def data_box(self) -> list[tuple[float, float]]:
        """Default box of data points."""
        return self.model.data_box

    @property
    def data_dim(self) -> int:
        """Dimension of one data point."""
        return self.model.data_dim

    @property
    def moving_support(self) -> bool:
        """Whether the posterior support depends on x."""
        return self.model.moving_support

    def support_at(self, x: DataPoint) -> Interval:
        """Posterior support: prior support ∩ positivity set of f(x|·)."""
        support = self.prior.support.intersect(self.model.positivity(as_data(x)))
        if support is None:
            raise posteriorlip.errors.ZeroEvidence(f"prior support misses the positivity set at x={x}")
        return support

    def log_numerator(self, x: DataPoint) -> collections.abc.Callable[[FloatArray], FloatArray]:
        """θ ↦ log f(x|θ) + log π(θ), unnormalised."""
        data = as_data(x)

        def log_density(theta: FloatArray) -> FloatArray:
            return self.model.log_likelihood(data, theta) + self.prior.log_density(theta)

        return log_density

    def evaluate(self, x: DataPoint) -> posteriorlip.measures.Distribution1D:
        """
        Posterior π(·|x) as a `Distribution1D`.

        Raises
        ------
        posteriorlip.errors.ZeroEvidence
            If ρ(x) ≤ 1e-300 or the support is empty.
        """
        support = self.support_at(x)
        try:
            law = posteriorlip.measures.Distribution1D(support, log_density=self.log_numerator(x))
        except posteriorlip.errors.Degenerate as exc:
            raise posteriorlip.errors.ZeroEvidence(f"posterior numerator vanishes at x={x}") from exc
        log_evidence = law.log_normalizer - self.prior.log_normalizer
        if not log_evidence > LOG_TOL_EVIDENCE:
            raise posteriorlip.errors.ZeroEvidence(f"evidence underflows at x={x}", log_evidence)
        return law

    __call__ = evaluate

    def log_evidence(self, x: DataPoint) -> float:
        """log ρ(x) = log ∫ f(x|θ) π(dθ)."""
        return self.evaluate(x).log_normalizer - self.prior.log_normalizer

    def score_x(self, x: DataPoint, theta: npt.ArrayLike) -> FloatArray:
        """∇_x log f(x|θ), shape ``(m,) + theta.shape``."""
        return self.model.score_x(as_data(x), np.asarray(theta, dtype=np.float64))

    def log_evidence_grad(
        self, x: DataPoint, law: posteriorlip.measures.Distribution1D | None = None
    ) -> FloatArray:
        """
        ∇_x log ρ(x).

        For a fixed support this is the posterior mean of the score; when the
        support moves it is taken by central differences of `log_evidence`.
        """
        data = as_data(x)
        if self.moving_support:
            return posteriorlip.numerics.gradient_fd(lambda z: self.log_evidence(z), data)
        posterior = law if law is not None else self.evaluate(data)
        nodes, weights = posterior.nodes, posterior.node_weights
        return np.asarray(self.score_x(data, nodes) @ weights, dtype=np.float64)

    def psi(
        self,
        x: DataPoint,
        theta: npt.ArrayLike,
        law: posteriorlip.measures.Distribution1D | None = None,
    ) -> FloatArray:
        """
        ∇_x log g̃(x, θ) = ∇_x log f(x|θ) - ∇_x log ρ(x).

        On fixed supports this is the centred score Ψ, which has posterior
        mean zero.
        """
        points = np.asarray(theta, dtype=np.float64)
        centre = self.log_evidence_grad(x, law).reshape((-1,) + (1,) * points.ndim)
        return self.score_x(x, points) - centre

    def theta_score(self, x: DataPoint, theta: npt.ArrayLike) -> FloatArray:
        """∂_θ of log f̃(x|θ) + log π(θ), with f̃ the likelihood extended past its support."""
        points = np.asarray(theta, dtype=np.float64)
        data = as_data(x)
        step = 1e-6 * np.maximum(1.0, np.abs(points))
        upper = self.model.extended_log_likelihood(data, points + step)
        lower = self.model.extended_log_likelihood(data, points - step)
        return (upper - lower) / (2.0 * step) + self.prior.dlog_density(points)

    def g(self, x: DataPoint, theta: npt.ArrayLike) -> FloatArray:
        """Density of π(·|x) relative to the normalised prior, f(x|θ)/ρ(x)."""
        points = np.asarray(theta, dtype=np.float64)
        law = self.evaluate(x)
        return np.exp(law.logpdf(points) - self.prior.log_pdf(points))

    @typing.override
    def __repr__(self) -> str:
        return f"{type(self).__name__}(model={self.model.name!r}, prior={self.prior.name!r})"


class ExchangeableKernel(PosteriorKernel):
    """
    Posterior after n exchangeable observations, indexed by 𝔱ₙ = (1/n)ΣT(x_i).

    Parameters
    ----------
    model : ExpFamilyModel
        Exponential-family likelihood.
    prior : Prior
        Prior on the natural parameter.
    n : int
        Number of observations.
    """

    __slots__: tuple[str, ...] = ("n",)

    def __init__(
        self, model: posteriorlip.features.exponential.ExpFamilyModel, prior: Prior, n: int
    ) -> None:
        if n < 1:
            raise posteriorlip.errors.InvalidInput(f"n must be positive, got {n}")
        super().__init__(model, prior)
        self.n: int = n

    @property
    def family(self) -> posteriorlip.features.exponential.ExpFamilyModel:
        """The model as an exponential family."""
        return typing.cast("posteriorlip.features.exponential.ExpFamilyModel", self.model)

    @property
    @typing.override
    def data_box(self) -> list[tuple[float, float]]:
        lo, hi = self.model.data_box[0]
        ends = sorted((self.family.statistic(np.array([lo])), self.family.statistic(np.array([hi]))))
        return [(ends[0], ends[1])]

    @property
    @typing.override
    def data_dim(self) -> int:
        return 1

    @typing.override
    def support_at(self, x: DataPoint) -> Interval:
        support = self.prior.support.intersect(self.model.param_space)
        if support is None:
            raise posteriorlip.errors.ZeroEvidence("prior support misses the parameter space")
        return support

    @typing.override
    def log_numerator(self, x: DataPoint) -> collections.abc.Callable[[FloatArray], FloatArray]:
        statistic = float(as_data(x)[0])

        def log_density(theta: FloatArray) -> FloatArray:
            return self.family.log_likelihood_stat(statistic, self.n, theta) + self.prior.log_density(
                theta
            )

        return log_density

    @typing.override
    def score_x(self, x: DataPoint, theta: npt.ArrayLike) -> FloatArray:
        points = np.asarray(theta, dtype=np.float64)
        return (self.n * points)[None, ...]

    @typing.override
    def theta_score(self, x: DataPoint, theta: npt.ArrayLike) -> FloatArray:
        points = np.asarray(theta, dtype=np.float64)
        statistic = float(as_data(x)[0])
        return self.n * (statistic - self.family.log_partition_grad(points)) + self.prior.dlog_density(
            points
        )

    @typing.override
    def __repr__(self) -> str:
        return f"ExchangeableKernel(model={self.model.name!r}, prior={self.prior.name!r}, n={self.n})"


def posterior(model: StatModel, prior: Prior, x: DataPoint) -> posteriorlip.measures.Distribution1D:
    """
    Bayes formula for one data point.

    Examples
    --------
    >>> import posteriorlip.features.exponential
    >>> import posteriorlip.features.priors
    >>> law = posterior(
    ...     posteriorlip.features.exponential.GaussianLocation(),
    ...     posteriorlip.features.priors.gaussian(),
    ...     0.0,
    ... )
    >>> round(law.variance_vec()[0], 6)
    0.5
    """
    return PosteriorKernel(model, prior).evaluate(x)


def sufficient_statistic(
    model: posteriorlip.features.exponential.ExpFamilyModel, xs: npt.ArrayLike
) -> float:
    """𝔱ₙ = (1/n)ΣT(x_i), summed exactly so that the order of ``xs`` is irrelevant."""
    rows = np.asarray(xs, dtype=np.float64).reshape(-1, model.data_dim)
    return math.fsum(model.statistic(row) for row in rows) / rows.shape[0]


def posterior_n(
    model: StatModel,
    prior: Prior,
    xs: npt.ArrayLike,
    method: typing.Literal["auto", "product", "sufficient"] = "auto",
) -> posteriorlip.measures.Distribution1D:
    """
    Posterior after observations ``xs`` under the product likelihood.

    Parameters
    ----------
    model : StatModel
        Likelihood of one observation.
    prior : Prior
        Prior on θ.
    xs : ArrayLike
        Observations, shape (n,) or (n, m).
    method : {"auto", "product", "sufficient"}, optional
        ``"sufficient"`` uses the mean statistic of an exponential family,
        ``"product"`` sums log likelihoods, ``"auto"`` prefers the former.

    Returns
    -------
    Distribution1D
        π_n(·|x₁, ..., xₙ).

    Raises
    ------
    posteriorlip.errors.ZeroEvidence
        If the evidence underflows.
    """
    rows = np.asarray(xs, dtype=np.float64).reshape(-1, model.data_dim)
    is_family = isinstance(model, posteriorlip.features.exponential.ExpFamilyModel)
    if method == "sufficient" and not is_family:
        raise posteriorlip.errors.InvalidInput(f"{model.name} has no sufficient statistic")
    if is_family and method != "product":
        family = typing.cast("posteriorlip.features.exponential.ExpFamilyModel", model)
        return ExchangeableKernel(family, prior, rows.shape[0]).evaluate(
            sufficient_statistic(family, rows)
        )

    ordered = rows[np.lexsort(rows.T[::-1])]
    support: Interval | None = prior.support
    for row in ordered:
        support = None if support is None else support.intersect(model.positivity(row))
    if support is None:
        raise posteriorlip.errors.ZeroEvidence("observations leave no common support")

    def log_density(theta: FloatArray) -> FloatArray:
        total = prior.log_density(theta) + np.zeros_like(theta)
        for row in ordered:
            total = total + model.log_likelihood(row, theta)
        return total

    try:
        law = posteriorlip.measures.Distribution1D(support, log_density=log_density)
    except posteriorlip.errors.Degenerate as exc:
        raise posteriorlip.errors.ZeroEvidence("product likelihood vanishes") from exc
    if not law.log_normalizer - prior.log_normalizer > LOG_TOL_EVIDENCE:
        raise posteriorlip.errors.ZeroEvidence("evidence underflows", law.log_normalizer)
    return law


def wiener_stencil(j: int, x: float) -> FloatArray:
    """
    Interpolation weights v_j(x) on the 0-based skeleton positions.

    With s = min(jx, j - 1) and k = min(⌊s⌋, j - 2), v_j(x) carries
    (k + 1 - s)/√j at k and (s - k)/√j at k + 1. Weights are nonnegative and
    x = k/j gives the single entry 1/√j at k. The last cell [(j - 1)/j, 1]
    has no right-hand node, so v_j is constant there.
    """
    if not 2 <= j <= WIENER_MAX_J:
        raise posteriorlip.errors.InvalidInput(f"j must lie in [2, {WIENER_MAX_J}], got {j}")
    if not 0.0 <= x <= 1.0:
        raise posteriorlip.errors.InvalidInput(f"x must lie in [0, 1], got {x}")
    scaled = min(j * x, j - 1.0)
    k = min(math.floor(scaled), j - 2)
    root = math.sqrt(j)
    v = np.zeros(j)
    v[k] = (k + 1 - scaled) / root
    v[k + 1] = (scaled - k) / root
    return v


def wiener_family(j: int, x: float) -> posteriorlip.measures.GaussianVec:
    """
    Conditional law N(u_j(x), Σ_j) of the j-point Brownian skeleton.

    Σ_j[r, s] = (min(r, s) + 1)/j on 0-based positions and u_j(x) = Σ_j v_j(x)
    with v_j from `wiener_stencil`.

    Parameters
    ----------
    j : int
        Number of skeleton points, 2 ≤ j ≤ 128.
    x : float
        Observation in [0, 1].

    Returns
    -------
    GaussianVec
        Mean u_j(x) and covariance Σ_j.
    """
    v = wiener_stencil(j, x)
    index = np.arange(1, j + 1)
    covariance = np.minimum.outer(index, index) / j
    return posteriorlip.measures.GaussianVec(covariance @ v, covariance)


class WienerKernel:
    """Kernel x ↦ N(u_j(x), Σ_j) on [0, 1]."""

    __slots__: tuple[str, ...] = ("j",)

    data_dim: int = 1
    moving_support: bool = False

    def __init__(self, j: int) -> None:
        if not 2 <= j <= WIENER_MAX_J:
            raise posteriorlip.errors.InvalidInput(f"j must lie in [2, {WIENER_MAX_J}], got {j}")
        self.j: int = j

    @property
    def data_box(self) -> list[tuple[float, float]]:
        """The observation interval [0, 1]."""
        return [(0.0, 1.0)]

    def evaluate(self, x: DataPoint) -> posteriorlip.measures.GaussianVec:
        """π'_j(·|x)."""
        return wiener_family(self.j, float(as_data(x)[0]))

    __call__ = evaluate

    @typing.override
    def __repr__(self) -> str:
        return f"WienerKernel(j={self.j})"


def posterior_2d_grid(
    model: StatModel,
    prior: Prior2D,
    x: DataPoint,
    grid: posteriorlip.measures.TensorGrid | None = None,
    resolution: int = 64,
) -> posteriorlip.measures.GridMeasure:
    """
    Two-parameter posterior as normalised weights on a tensor grid.

    Without ``grid`` the first parameter axis is pulled back onto the
    positivity range (lo, min(x, hi)) with midpoint nodes
    lo + (i + ½)/n·(min(x, hi) - lo), so every node carries mass. With an
    explicit grid the weights vanish on nodes with θ ≥ x.

    Parameters
    ----------
    model : StatModel
        Model with ``param_dim == 2``.
    prior : Prior2D
        Prior density on the parameter box.
    x : DataPoint
        Observation.
    grid : TensorGrid | None, optional
        Fixed grid over the prior box.
    resolution : int, optional
        Nodes per axis of the pulled-back grid (at least 32).

    Returns
    -------
    GridMeasure
        Posterior weights summing to one.

    Raises
    ------
    posteriorlip.errors.ZeroEvidence
        If no grid node carries mass or the evidence underflows.
    """
    if model.param_dim != 2:
        raise posteriorlip.errors.InvalidInput(f"{model.name} is not a two-parameter model")
    data = as_data(x)
    if grid is None:
        if resolution < GRID_MIN_RESOLUTION:
            raise posteriorlip.errors.InvalidInput(
                f"grid resolution must be at least {GRID_MIN_RESOLUTION}, got {resolution}"
            )
        upper = model.positivity(data).hi
        (lo, _), second = prior.box
        grid = posteriorlip.measures.TensorGrid.midpoint(resolution, [(lo, upper), second])
    elif min(grid.shape) < GRID_MIN_RESOLUTION:
        raise posteriorlip.errors.InvalidInput("grid resolution must be at least 32 per axis")
    points = grid.points()
    with np.errstate(divide="ignore"):
        log_weights = (
            model.log_likelihood(data, points)
            + prior.log_density(points)
            + np.log(grid.cell_weights())
        )
    if not np.any(np.isfinite(log_weights)):
        raise posteriorlip.errors.ZeroEvidence(f"no grid node carries mass at x={x}")
    total = float(scipy.special.logsumexp(log_weights))
    prior_mass = math.prod(hi - lo for lo, hi in prior.box)
    if not total - math.log(prior_mass) > LOG_TOL_EVIDENCE:
        raise posteriorlip.errors.ZeroEvidence(f"evidence underflows at x={x}", total)
    weights = np.exp(log_weights - total)
    return posteriorlip.measures.GridMeasure(points, weights / weights.sum(), shape=grid.shape)


class GridPosteriorKernel:
    """Kernel x ↦ posterior weights on a pulled-back tensor grid."""

    __slots__: tuple[str, ...] = ("model", "prior", "resolution")

    data_dim: int = 1
    moving_support: bool = True

    def __init__(self, model: StatModel, prior: Prior2D, resolution: int = 64) -> None:
        self.model: StatModel = model
        self.prior: Prior2D = prior
        self.resolution: int = resolution

    @property
    def data_box(self) -> list[tuple[float, float]]:
        """Default box of data points."""
        return self.model.data_box

    def evaluate(self, x: DataPoint) -> posteriorlip.measures.GridMeasure:
        """π(·|x) on the grid."""
        return posterior_2d_grid(self.model, self.prior, x, resolution=self.resolution)

    __call__ = evaluate

    @typing.override
    def __repr__(self) -> str:
        return f"GridPosteriorKernel(model={self.model.name!r}, resolution={self.resolution})"


Kernel = PosteriorKernel | WienerKernel | GridPosteriorKernel

MODELS: dict[str, collections.abc.Callable[..., StatModel]] = {
    "gaussian_location": posteriorlip.features.exponential.GaussianLocation,
    "exponential_rate": posteriorlip.features.exponential.ExponentialRate,
    "expfam_custom": posteriorlip.features.exponential.linear_gaussian_family,
    "pareto_1d": posteriorlip.features.pareto.Pareto1D,
    "pareto_msample": posteriorlip.features.pareto.ParetoMSample,
    "pareto_hfunction": posteriorlip.features.pareto.ParetoHFunction,
    "pareto_2param": posteriorlip.features.pareto.Pareto2Param,
}
KERNEL_NAMES: frozenset[str] = frozenset({*MODELS, "wiener_j"})


def _theta_grid(space: Interval) -> list[float]:
    """Three parameter values inside ``space`` for registration checks."""
    lo, hi = space.lo, space.hi
    if math.isfinite(lo) and math.isfinite(hi):
        return [lo + (hi - lo) * q for q in (0.25, 0.5, 0.75)]
    if math.isfinite(lo):
        return [lo + step for step in (0.5, 1.0, 2.0)]
    if math.isfinite(hi):
        return [hi - step for step in (0.5, 1.0, 2.0)]
    return [-1.0, 0.0, 1.0]


def build_model(name: str, params: dict[str, typing.Any] | None = None) -> StatModel:
    """
    Instantiate a registered model.

    Scalar-data, scalar-parameter models are checked for ∫ f(x|θ) dx = 1 on a
    small θ grid inside the parameter space.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If the name is unknown, the parameters do not fit or the likelihood
        is not normalised.
    """
    factory = MODELS.get(name)
    if factory is None:
        raise posteriorlip.errors.InvalidInput(f"unknown model {name!r}")
    arguments = dict(params or {})
    if "box" in arguments:
        arguments["box"] = tuple(arguments["box"])
    try:
        model = factory(**arguments)
    except TypeError as exc:
        raise posteriorlip.errors.InvalidInput(f"bad parameters for model {name!r}: {exc}") from exc
    if model.data_dim == 1 and model.param_dim == 1:
        error = model.normalization_error(_theta_grid(model.param_space))
        if error > NORMALIZATION_TOL:
            raise posteriorlip.errors.InvalidInput(
                f"model {name!r} is not normalised: |∫ f(x|θ) dx - 1| = {error:.3g}"
            )
    logger.debug("Built model %s", model)
    return model


def build_kernel(
    name: str,
    params: dict[str, typing.Any] | None = None,
    prior: Prior | Prior2D | None = None,
) -> Kernel:
    """
    Build the kernel registered under ``name``.

    ``wiener_j`` takes ``j`` and no prior; ``pareto_2param`` takes a `Prior2D`
    and an optional ``resolution``; every other model needs a `Prior`.
    """
    arguments = dict(params or {})
    if name == "wiener_j":
        return WienerKernel(int(arguments.get("j", 8)))
    resolution = int(arguments.pop("resolution", 64))
    model = build_model(name, arguments)
    if model.param_dim == 2:
        if not isinstance(prior, Prior2D):
            raise posteriorlip.errors.InvalidInput(f"{name} needs a two-dimensional prior")
        return GridPosteriorKernel(model, prior, resolution)
    if not isinstance(prior, Prior):
        raise posteriorlip.errors.InvalidInput(f"{name} needs a one-dimensional prior")
    logger.debug("built kernel for %s with prior %s", name, prior.name)
    return PosteriorKernel(model, prior)
