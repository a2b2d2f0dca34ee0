"""
📐 Lipschitz Certificates.
=============================

Constants L such that x ↦ π(·|x) is L-Lipschitz into total variation, W1 or
W2, each returned as a `LipschitzCertificate` that records its route, the
x-box it was maximised over and the intermediate quantities.

✨ Features
--------------
- 🧲 Fisher functionals: 𝒥_π from the centred score, 𝒥₁ and 𝒥₂ for kernels
  whose support moves with x.
- 🔲 Grid suprema: esssup over x becomes a maximum over a compact box
  (256 points per axis by default) refined at the argmax.
- 🧮 Closed forms: exponential families, n exchangeable observations and the
  Pareto family need no grid over the posterior.
- 🌊 Moving domains: the one-dimensional Neumann problem is solved by flux
  integration.

📦 Functions
--------------
- `fisher_j`, `fisher_values`: Fisher functionals at one data point.
- `lipschitz_tv`, `lipschitz_w1`, `lipschitz_w2`, `lipschitz_w2_sobolev`:
  The four generic routes.
- `lipschitz_expfam`, `lipschitz_exch_n`: Exponential families.
- `neumann_solve_1d`, `pareto_neumann`, `pareto_cq`, `lipschitz_pareto`:
  Truncated models.
- `lipschitz_maintrace_1d`: Moving-domain route with a velocity field.
- `certify`: Dispatch by route tag.
"""

import collections.abc
import logging
import math
import typing

import numpy as np
import numpy.typing as npt

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.features.exponential
import posteriorlip.features.mixin_base
import posteriorlip.features.priors
import posteriorlip.measures
import posteriorlip.models
import posteriorlip.numerics
import posteriorlip.poincare

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
Interval = posteriorlip.abc.objects.Interval
LipschitzCertificate = posteriorlip.abc.objects.LipschitzCertificate
PoincareBound = posteriorlip.abc.objects.PoincareBound
SupDomain = posteriorlip.abc.objects.SupDomain
PosteriorKernel = posteriorlip.models.PosteriorKernel
Distribution1D = posteriorlip.measures.Distribution1D
ExpFamilyModel = posteriorlip.features.exponential.ExpFamilyModel
TruncatedModelMixin = posteriorlip.features.mixin_base.TruncatedModelMixin
Prior = posteriorlip.features.priors.Prior
DataPoint = posteriorlip.features.mixin_base.DataPoint
Box = collections.abc.Sequence[tuple[float, float]]

DEFAULT_GRID = 256
MAINTRACE_GRID = 64
ORACLE_GRID = 2000
BOBKOV_SQUARED = posteriorlip.poincare.BOBKOV_CONSTANT**2
POSTERIOR_CRITERIA: frozenset[str] = frozenset(
    {"bakry_emery", "oracle", "muckenhoupt_1d", "bobkov", "log_concave_diam"}
)
PARETO_ROUTES: dict[str, str] = {
    "pareto_1d": "pareto_cq",
    "pareto_msample": "pareto_msample",
    "pareto_hfunction": "pareto_hfunction",
}

as_data = posteriorlip.features.mixin_base.as_data


# grid suprema -------------------------------------------------------------


def _esssup(
    evaluate: collections.abc.Callable[[FloatArray], dict[str, float]],
    box: Box,
    grid: int,
    refine: bool = True,
) -> tuple[dict[str, float], SupDomain]:
    """Maximise the ``"K"`` entry of ``evaluate`` over ``box``, keeping its other entries."""
    seen: dict[tuple[float, ...], dict[str, float]] = {}

    def objective(point: FloatArray) -> float:
        key = tuple(float(v) for v in point)
        if key not in seen:
            pieces = evaluate(point)
            if not math.isfinite(pieces["K"]):
                raise posteriorlip.errors.NonConvergent(f"K is not finite at x={list(key)}")
            seen[key] = pieces
        return seen[key]["K"]

    found = posteriorlip.numerics.maximize_on_box(objective, box, grid, refine)
    key = tuple(float(v) for v in found.argmax)
    pieces = dict(seen[key]) if key in seen else evaluate(found.argmax)
    pieces["K"] = found.value
    logger.debug("esssup %.8g at %s (refined=%s)", found.value, list(key), found.refined)
    domain = SupDomain(
        box=[(float(lo), float(hi)) for lo, hi in box],
        grid=grid,
        argmax=list(key),
        refined=found.refined,
    )
    return pieces, domain


def _fixed_support(kernel: PosteriorKernel, route: str) -> None:
    if kernel.moving_support:
        raise posteriorlip.errors.ZeroDensity(
            f"g vanishes on a moving set for {kernel.model.name}; use maintrace_1d or the "
            f"Pareto routes instead of {route}"
        )


def _psi_norms(kernel: PosteriorKernel, x: FloatArray, law: Distribution1D) -> FloatArray:
    """Euclidean norm of Ψ(x, θ) at the quadrature nodes of ``law``."""
    psi = kernel.psi(x, law.nodes, law)
    return np.sqrt(np.sum(psi * psi, axis=0))


# Fisher functionals -------------------------------------------------------


def fisher_j(
    kernel: PosteriorKernel,
    x: DataPoint,
    method: typing.Literal["closed", "fd"] = "closed",
) -> float:
    """
    Fisher functional 𝒥_π[g(x, ·)] = (∫ |∇_x g|²/g dπ)^{1/2}.

    Parameters
    ----------
    kernel : PosteriorKernel
        Kernel with a fixed support.
    x : DataPoint
        Data point.
    method : {"closed", "fd"}, optional
        ``"closed"`` integrates |Ψ|² against the posterior, ``"fd"`` takes
        central differences of g itself.

    Returns
    -------
    float
        The functional, nonnegative.

    Raises
    ------
    posteriorlip.errors.ZeroDensity
        If the support moves with x.
    posteriorlip.errors.NonConvergent
        If the integral is not finite.

    Examples
    --------
    >>> import posteriorlip.features.exponential
    >>> import posteriorlip.features.priors
    >>> kernel = posteriorlip.models.PosteriorKernel(
    ...     posteriorlip.features.exponential.GaussianLocation(),
    ...     posteriorlip.features.priors.gaussian(),
    ... )
    >>> round(fisher_j(kernel, 1.0) ** 2, 6)
    0.5
    """
    _fixed_support(kernel, "fisher_j")
    data = as_data(x)
    law = kernel.evaluate(data)
    if method == "closed":
        squared = law.expect(lambda _: _psi_norms(kernel, data, law) ** 2)
    else:
        nodes = law.nodes
        gradient = posteriorlip.numerics.gradient_fd(lambda z: kernel.g(z, nodes), data)
        density = np.exp(law.logpdf(nodes) - kernel.prior.log_pdf(nodes))
        squared = law.expect(lambda _: np.sum(gradient * gradient, axis=0) / density**2)
    if not (math.isfinite(squared) and squared >= 0):
        raise posteriorlip.errors.NonConvergent(f"Fisher integral is {squared} at x={data}")
    return math.sqrt(squared)


def fisher_values(kernel: PosteriorKernel, x: DataPoint) -> posteriorlip.abc.objects.FisherValues:
    """
    The functionals 𝒥_π, 𝒥₁ and 𝒥₂ at ``x``.

    𝒥₁ and 𝒥₂ are Lebesgue integrals of |∇_x g̃|²/g̃ and |∇_θ g̃|²/g̃ for the
    smooth extension g̃ of the posterior density past its support; 𝒥_π is
    only defined, and reported, when the support does not move.
    """
    data = as_data(x)
    law = kernel.evaluate(data)
    j1 = math.sqrt(law.expect(lambda _: _psi_norms(kernel, data, law) ** 2))
    j2 = math.sqrt(law.expect(lambda nodes: kernel.theta_score(data, nodes) ** 2))
    j_pi = None if kernel.moving_support else j1
    return posteriorlip.abc.objects.FisherValues(j_pi=j_pi, j1=j1, j2=j2)


# posterior Poincaré constants ---------------------------------------------


def posterior_curvature(kernel: PosteriorKernel, x: FloatArray, law: Distribution1D) -> float:
    """
    Lower bound on -∂²_θ log π(θ|x) over the posterior support.

    Exponential families with a known prior curvature use inf M'' + λ_*(W);
    other models fall back to second differences at the quadrature nodes.
    """
    lam = kernel.prior.lambda_min
    if isinstance(kernel.model, ExpFamilyModel) and lam is not None:
        n = kernel.n if isinstance(kernel, posteriorlip.models.ExchangeableKernel) else 1
        low, _ = kernel.model.curvature_bounds(law.support)
        return n * low + lam
    log_density = kernel.log_numerator(x)
    nodes = law.nodes
    step = 1e-4 * np.maximum(1.0, np.abs(nodes))
    inside = (nodes - step > law.support.lo) & (nodes + step < law.support.hi)
    nodes, step = nodes[inside], step[inside]
    with np.errstate(invalid="ignore"):
        second = (
            log_density(nodes + step) - 2.0 * log_density(nodes) + log_density(nodes - step)
        ) / step**2
    finite = second[np.isfinite(second)]
    if finite.size == 0:
        raise posteriorlip.errors.NonFinite(f"no finite curvature sample at x={x}")
    return float(np.min(-finite))


def posterior_poincare(
    kernel: PosteriorKernel,
    x: FloatArray,
    law: Distribution1D,
    criterion: str,
) -> PoincareBound:
    """
    Poincaré bound for π(·|x) by the named criterion.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        For unknown criteria or an unbounded support under ``log_concave_diam``.
    posteriorlip.errors.InvalidCurvature
        If the Bakry-Émery curvature is not positive.
    """
    match criterion:
        case "bakry_emery":
            return posteriorlip.poincare.bound_bakry_emery(posterior_curvature(kernel, x, law))
        case "oracle":
            return posteriorlip.poincare.bound_oracle(law, ORACLE_GRID)
        case "muckenhoupt_1d":
            return posteriorlip.poincare.bound_muckenhoupt_1d(law)
        case "bobkov":
            return posteriorlip.poincare.bound_bobkov(law.variance_vec()[0])
        case "log_concave_diam":
            return posteriorlip.poincare.bound_log_concave_diam(law.support.width)
        case _:
            raise posteriorlip.errors.InvalidInput(
                f"unknown posterior criterion {criterion!r}; expected one of "
                f"{sorted(POSTERIOR_CRITERIA)}"
            )


def prior_poincare(prior: Prior) -> PoincareBound:
    """
    A Poincaré bound for the prior.

    Bakry-Émery when W is uniformly convex, the log-concave diameter bound on
    bounded convex priors, the spectral oracle otherwise.
    """
    lam = prior.lambda_min
    if lam is not None and lam > 0:
        return posteriorlip.poincare.bound_bakry_emery(lam)
    if lam is not None and prior.support.bounded:
        return posteriorlip.poincare.bound_log_concave_diam(prior.support.width)
    return posteriorlip.poincare.bound_oracle(prior.distribution, ORACLE_GRID)


# generic routes -----------------------------------------------------------


def lipschitz_tv(
    kernel: PosteriorKernel, box: Box | None = None, grid: int = DEFAULT_GRID
) -> LipschitzCertificate:
    """
    Total-variation certificate L = K/2 with K = esssup_x ∫|∇_x g| dπ.

    Since ∇_x g = gΨ, the integral is the posterior mean of |Ψ|.
    """
    _fixed_support(kernel, "thm21_i")

    def evaluate(x: FloatArray) -> dict[str, float]:
        law = kernel.evaluate(x)
        return {"K": law.expect(lambda _: _psi_norms(kernel, x, law))}

    pieces, domain = _esssup(evaluate, box or kernel.data_box, grid)
    return LipschitzCertificate(
        lipschitz=0.5 * pieces["K"],
        metric="tv",
        route="thm21_i",
        sup_domain=domain,
        components=pieces,
    )


def lipschitz_w1(
    kernel: PosteriorKernel,
    prior_bound: PoincareBound | None = None,
    p: float = 2.0,
    box: Box | None = None,
    grid: int = DEFAULT_GRID,
) -> LipschitzCertificate:
    """
    W1 certificate K = π(Θ)^{1/q}·𝒞_q[π]·esssup_x ‖∇_x g‖_{L^p_π}.

    Parameters
    ----------
    kernel : PosteriorKernel
        Kernel with a fixed support.
    prior_bound : PoincareBound | None, optional
        Poincaré bound of order q = p/(p - 1) for the prior; `prior_poincare`
        supplies one for p = 2.
    p : float, optional
        Integrability exponent, p > 1.
    box, grid : optional
        x-box and grid points per axis.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If ``p`` ≤ 1 or the bound has the wrong order.
    posteriorlip.errors.MissingParam
        If no bound is given for p ≠ 2.
    """
    _fixed_support(kernel, "thm21_ii")
    if not p > 1:
        raise posteriorlip.errors.InvalidInput(f"p must exceed 1, got {p}")
    order = p / (p - 1.0)
    if prior_bound is None:
        if not math.isclose(p, 2.0):
            raise posteriorlip.errors.MissingParam("prior_bound", f"order {order:.6g} bound needed")
        prior_bound = prior_poincare(kernel.prior)
    if not math.isclose(prior_bound.order_q, order, rel_tol=1e-9):
        raise posteriorlip.errors.InvalidInput(
            f"prior bound has order {prior_bound.order_q}, need {order:.6g}"
        )
    prior = kernel.prior

    def evaluate(x: FloatArray) -> dict[str, float]:
        law = kernel.evaluate(x)
        density = np.exp(law.logpdf(law.nodes) - prior.log_pdf(law.nodes))
        moment = law.expect(lambda _: density ** (p - 1.0) * _psi_norms(kernel, x, law) ** p)
        return {"K": prior_bound.value * moment ** (1.0 / p), "grad_norm": moment ** (1.0 / p)}

    pieces, domain = _esssup(evaluate, box or kernel.data_box, grid)
    pieces.update({"C_prior": prior_bound.value, "prior_mass": 1.0, "p": p, "q": order})
    return LipschitzCertificate(
        lipschitz=pieces["K"],
        metric="w1",
        route="thm21_ii",
        sup_domain=domain,
        components=pieces,
        notes={"prior_criterion": prior_bound.criterion},
    )


def lipschitz_w2(
    kernel: PosteriorKernel,
    criterion: str = "bakry_emery",
    variant: typing.Literal["thm21_iii", "cor31"] = "thm21_iii",
    box: Box | None = None,
    grid: int = DEFAULT_GRID,
) -> LipschitzCertificate:
    """
    W2 certificate from a posterior Poincaré bound.

    ``thm21_iii`` gives K = esssup 𝒞[π(·|x)]·𝒥_π[g(x, ·)]; ``cor31`` gives
    K = esssup 𝒞²·(∫|∇_θΨ|² dπ(·|x))^{1/2}, which is 𝒞²|∇T(x)| for an
    exponential family.

    Raises
    ------
    posteriorlip.errors.ZeroDensity
        If the support moves with x.
    """
    _fixed_support(kernel, variant)

    def evaluate(x: FloatArray) -> dict[str, float]:
        law = kernel.evaluate(x)
        constant = posterior_poincare(kernel, x, law, criterion).value
        if variant == "thm21_iii":
            energy = math.sqrt(law.expect(lambda _: _psi_norms(kernel, x, law) ** 2))
            return {"K": constant * energy, "C": constant, "J": energy}
        nodes = law.nodes
        step = 1e-5 * np.maximum(1.0, np.abs(nodes))
        slope = (kernel.score_x(x, nodes + step) - kernel.score_x(x, nodes - step)) / (2.0 * step)
        energy = math.sqrt(law.expect(lambda _: np.sum(slope * slope, axis=0)))
        return {"K": constant**2 * energy, "C": constant, "grad_theta_psi": energy}

    pieces, domain = _esssup(evaluate, box or kernel.data_box, grid)
    return LipschitzCertificate(
        lipschitz=pieces["K"],
        metric="w2",
        route=variant,
        sup_domain=domain,
        components=pieces,
        notes={"criterion": criterion},
    )


def sobolev_exponent(p: float, dim: int = 1) -> float:
    """
    Exponent r/(r - 1) with r = p* the Sobolev conjugate of p in dimension ``dim``.

    p* = dp/(d - p) when p < d and ∞ otherwise, where the exponent is 1.
    """
    if p >= dim:
        return 1.0
    conjugate = dim * p / (dim - p)
    return conjugate / (conjugate - 1.0)


def inverse_density_factor(law: Distribution1D, p: float) -> float:
    """
    ‖1/g‖^{1/2} in L^{p/(2-p)} for the Lebesgue density g of ``law``.

    Raises
    ------
    posteriorlip.errors.NonConvergent
        If ∫ g^{-p/(2-p)} diverges.
    """
    power = p / (2.0 - p)
    total = posteriorlip.numerics.integrate(
        lambda t: math.exp(-power * float(law.logpdf(t))), law.support
    ).value
    return total ** (1.0 / (2.0 * power))


def lipschitz_w2_sobolev(
    kernel: PosteriorKernel,
    s_p: float = 1.0,
    p: float = 1.0,
    box: Box | None = None,
    grid: int = DEFAULT_GRID,
) -> LipschitzCertificate:
    """
    W2 certificate K = 𝒮_p(Θ)·esssup ‖1/g‖^{1/2}_{L^{p/(2-p)}}·‖∇_x g‖_{L^{r/(r-1)}}.

    Densities are taken against Lebesgue measure on Θ, so the prior must be
    flat on a bounded interval, where 𝒮₁ = 1. The exponent uses r = p*.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If the prior is not flat and bounded, or p ∉ [1, 2).
    """
    _fixed_support(kernel, "thm21_iv")
    prior = kernel.prior
    if not (prior.is_flat and prior.support.bounded):
        raise posteriorlip.errors.InvalidInput("the Sobolev route needs a flat prior on a bounded interval")
    if not 1.0 <= p < 2.0:
        raise posteriorlip.errors.InvalidInput(f"p must lie in [1, 2), got {p}")
    if not s_p > 0:
        raise posteriorlip.errors.InvalidInput(f"S_p must be positive, got {s_p}")
    exponent = sobolev_exponent(p)

    def evaluate(x: FloatArray) -> dict[str, float]:
        law = kernel.evaluate(x)
        inverse = inverse_density_factor(law, p)
        density = law.pdf(law.nodes)
        moment = law.expect(
            lambda _: density ** (exponent - 1.0) * _psi_norms(kernel, x, law) ** exponent
        )
        gradient = moment ** (1.0 / exponent)
        return {"K": s_p * inverse * gradient, "inverse_factor": inverse, "grad_norm": gradient}

    pieces, domain = _esssup(evaluate, box or kernel.data_box, grid)
    pieces.update({"S_p": s_p, "p": p, "exponent": exponent})
    return LipschitzCertificate(
        lipschitz=pieces["K"],
        metric="w2",
        route="thm21_iv",
        sup_domain=domain,
        components=pieces,
        notes={"r": "Sobolev conjugate p*"},
    )


# exponential families -----------------------------------------------------


def _curvature_inputs(model: ExpFamilyModel, prior: Prior) -> tuple[float, float, float]:
    """inf M'', sup M'' on the prior support and λ_*(W)."""
    if prior.lambda_min is None:
        raise posteriorlip.errors.MissingParam("lambda_min", f"prior {prior.name!r} has no known curvature")
    low, high = model.curvature_bounds(prior.support)
    return low, high, prior.lambda_min


def lipschitz_expfam(
    model: ExpFamilyModel,
    prior: Prior,
    fallback: bool = False,
    box: Box | None = None,
    grid: int = 64,
) -> LipschitzCertificate:
    """
    Closed-form W2 certificate L = Lip(T)/α with α = inf M'' + λ_*(W).

    When α ≤ 0 and ``fallback`` is set, Bobkov's bound for the log-concave
    posteriors gives L = (12√3)²·Lip(T)·sup_x Var π(·|x) over ``box``.

    Raises
    ------
    posteriorlip.errors.CurvatureNonPositive
        If α ≤ 0 and no fallback is requested.
    posteriorlip.errors.MissingParam
        If the prior curvature is unknown.

    Examples
    --------
    >>> import posteriorlip.features.exponential
    >>> import posteriorlip.features.priors
    >>> lipschitz_expfam(
    ...     posteriorlip.features.exponential.GaussianLocation(),
    ...     posteriorlip.features.priors.gaussian(),
    ... ).lipschitz
    0.5
    """
    low, _, lam = _curvature_inputs(model, prior)
    alpha = low + lam
    components = {"alpha": alpha, "hess_m_min": low, "lambda_min": lam, "lip_T": model.lip_T}
    if alpha > 0:
        components["K"] = model.lip_T / alpha
        return LipschitzCertificate(
            lipschitz=model.lip_T / alpha,
            metric="w2",
            route="prop32_expfam",
            components=components,
            notes={"criterion": "bakry_emery"},
        )
    if not fallback:
        raise posteriorlip.errors.CurvatureNonPositive(alpha)
    kernel = PosteriorKernel(model, prior)

    def evaluate(x: FloatArray) -> dict[str, float]:
        variance = kernel.evaluate(x).variance_vec()[0]
        return {"K": BOBKOV_SQUARED * model.lip_T * variance, "variance": variance}

    pieces, domain = _esssup(evaluate, box or model.data_box, grid)
    components.update(pieces)
    logger.info("curvature %.3g is not positive; using the Bobkov fallback", alpha)
    return LipschitzCertificate(
        lipschitz=pieces["K"],
        metric="w2",
        route="prop32_expfam",
        sup_domain=domain,
        components=components,
        notes={"criterion": "bobkov"},
    )


def lipschitz_exch_n(
    model: ExpFamilyModel,
    prior: Prior,
    n: int,
    form: typing.Literal["sufficient", "mle"] = "sufficient",
) -> LipschitzCertificate:
    """
    Certificate for n exchangeable observations, L = n/(nα + λ_*(W)).

    The constant is with respect to the mean sufficient statistic 𝔱ₙ. With
    ``form="mle"`` it is multiplied by ℓ = sup M'' for the metric of the
    maximum-likelihood estimator.

    Raises
    ------
    posteriorlip.errors.ThresholdViolation
        If n < max(1, -λ_*(W)/α).
    posteriorlip.errors.CurvatureNonPositive
        If inf M'' ≤ 0.
    """
    low, high, lam = _curvature_inputs(model, prior)
    if not low > 0:
        raise posteriorlip.errors.CurvatureNonPositive(low)
    threshold = max(1.0, -lam / low)
    denominator = n * low + lam
    if n < threshold or not denominator > 0:
        raise posteriorlip.errors.ThresholdViolation(n, threshold)
    value = n / denominator
    components = {"n": float(n), "alpha": low, "lambda_min": lam, "threshold": threshold}
    if form == "mle":
        if not math.isfinite(high):
            raise posteriorlip.errors.InvalidInput("the MLE form needs M'' bounded on the prior support")
        components["ell"] = high
        value *= high
    components["K"] = value
    return LipschitzCertificate(
        lipschitz=value,
        metric="w2",
        route="exch_n",
        components=components,
        notes={"domain_metric": "mle" if form == "mle" else "sufficient statistic"},
    )


# truncated models ---------------------------------------------------------


class NeumannSolution:
    """
    Derivative u′ of the solution of the one-dimensional Neumann problem.

    g·u′(θ) = -∫_lo^θ ∂_x g̃ with zero flux at the lower end; the velocity at
    the upper end is the one the problem was posed with.
    """

    __slots__: tuple[str, ...] = ("_flux", "_law", "boundary_velocity", "compatibility_residual")

    def __init__(
        self,
        law: Distribution1D,
        flux: collections.abc.Callable[[npt.ArrayLike], FloatArray],
        boundary_velocity: float,
    ) -> None:
        self._law: Distribution1D = law
        self._flux = flux
        self.boundary_velocity: float = boundary_velocity
        edge = np.nextafter(law.support.hi, -math.inf)
        self.compatibility_residual: float = abs(float(self.derivative(edge)) - boundary_velocity)

    def derivative(self, theta: npt.ArrayLike) -> FloatArray:
        """u′ at ``theta`` inside the support."""
        points = np.asarray(theta, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            return -self._flux(points) / self._law.pdf(points)

    def weighted_norm(self) -> float:
        """(∫ |u′|² g dθ)^{1/2}."""
        return math.sqrt(self._law.expect(lambda t: self.derivative(t) ** 2))


def neumann_solve_1d(
    law: Distribution1D,
    source: collections.abc.Callable[[FloatArray], npt.ArrayLike],
    boundary_velocity: float,
) -> NeumannSolution:
    """
    Solve -(g u′)′ = ∂_x g̃ on the support of ``law`` by flux integration.

    Parameters
    ----------
    law : Distribution1D
        The posterior at x, density g on Θ_x.
    source : Callable[[FloatArray], ArrayLike]
        Vectorised ∂_x g̃ on Θ_x.
    boundary_velocity : float
        Normal velocity of the moving end of Θ_x.

    Returns
    -------
    NeumannSolution
        u′ and its weighted norm.

    Raises
    ------
    posteriorlip.errors.NonIntegrable
        If u′ is not finite at the quadrature nodes.
    """
    flux = law.antiderivative(source, law.window.lo)
    solution = NeumannSolution(law, flux, boundary_velocity)
    if not np.all(np.isfinite(solution.derivative(law.nodes))):
        raise posteriorlip.errors.NonIntegrable(f"u′ is not finite on {law.support}")
    logger.debug("Neumann residual at the moving end: %.3g", solution.compatibility_residual)
    return solution


def _truncated(source: PosteriorKernel | posteriorlip.models.StatModel) -> TruncatedModelMixin:
    model = source.model if isinstance(source, PosteriorKernel) else source
    if not isinstance(model, TruncatedModelMixin):
        raise posteriorlip.errors.InvalidInput(f"{model.name} is not a truncated one-parameter model")
    return model


def _moving_velocity(model: TruncatedModelMixin, prior: Prior, x: FloatArray) -> float:
    """|∇h(x)| while h(x) is below the prior's upper end, 0 afterwards."""
    return model.truncation_lipschitz if model.truncation(x) < prior.support.hi else 0.0


def pareto_neumann(kernel: PosteriorKernel, x: DataPoint) -> NeumannSolution:
    """
    Neumann solution for a truncated kernel, with ∂_x g̃ = -g̃(θ)·g̃(u)·|∇h|.

    Here u = min(h(x), θ₀) is the moving end of the support, and the solution
    is u′(θ) = |∇h|·Q(u)∫_lo^θ Q / (Q(θ)∫_lo^u Q) with Q = a·q.
    """
    model = _truncated(kernel)
    data = as_data(x)
    law = kernel.evaluate(data)
    velocity = _moving_velocity(model, kernel.prior, data)
    edge = float(law.pdf(np.nextafter(law.support.hi, -math.inf)))

    def source(theta: FloatArray) -> FloatArray:
        return -law.pdf(theta) * edge * velocity

    return neumann_solve_1d(law, source, velocity)


def _factor_law(model: TruncatedModelMixin, prior: Prior, upper: float) -> Distribution1D:
    """The law with density ∝ Q = a·q on (lo, upper)."""
    lo = max(prior.support.lo, model.param_space.lo)

    def log_q(theta: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(model.theta_factor(theta)) + prior.log_density(theta)

    try:
        return Distribution1D(Interval(lo, upper), log_density=log_q)
    except posteriorlip.errors.Degenerate as exc:
        raise posteriorlip.errors.ZeroEvidence(f"Q vanishes on ({lo}, {upper})") from exc


def _edge_density(law: Distribution1D) -> float:
    return float(law.pdf(np.nextafter(law.support.hi, -math.inf)))


def pareto_cq(model: TruncatedModelMixin, prior: Prior, upper: float) -> float:
    """
    C_Q(u) = Q(u)(∫_lo^u Q)^{-1/2}(∫_lo^u 1/Q)^{1/2} with Q = a·q.

    Raises
    ------
    posteriorlip.errors.NonIntegrable
        If 1/Q is not integrable on (lo, u).

    Examples
    --------
    >>> import posteriorlip.features.pareto
    >>> import posteriorlip.features.priors
    >>> value = pareto_cq(
    ...     posteriorlip.features.pareto.Pareto1D(), posteriorlip.features.priors.uniform(1, 2), 2.0
    ... )
    >>> round(value, 4)
    1.3596
    """
    law = _factor_law(model, prior, upper)
    try:
        inverse = posteriorlip.numerics.integrate(lambda t: 1.0 / float(law.pdf(t)), law.support).value
    except (posteriorlip.errors.NonConvergent, posteriorlip.errors.NonFinite) as exc:
        raise posteriorlip.errors.NonIntegrable(f"1/Q is not integrable on {law.support}") from exc
    return _edge_density(law) * math.sqrt(inverse)


def pareto_sharp_norm(model: TruncatedModelMixin, prior: Prior, upper: float) -> float:
    """
    Q(u)(∫_lo^u Q)^{-3/2}(∫_lo^u (∫_lo^θ Q)²/Q dθ)^{1/2}, never above C_Q(u).
    """
    law = _factor_law(model, prior, upper)
    moment = law.expect(lambda t: (law.cdf(t) / law.pdf(t)) ** 2)
    return _edge_density(law) * math.sqrt(moment)


def lipschitz_pareto(
    model: TruncatedModelMixin,
    prior: Prior,
    box: Box | None = None,
    grid: int = DEFAULT_GRID,
    sharp: bool = False,
) -> LipschitzCertificate:
    """
    W2 certificate L = |∇h|·sup_x C_Q(min(h(x), θ₀)) for a truncated model.

    θ₀ is the upper end of the prior support. Since C_Q depends on x only
    through u = h(x), the supremum is taken over the range of h on the box.

    Parameters
    ----------
    model : TruncatedModelMixin
        Pareto-type model; its name selects the route tag.
    prior : Prior
        Prior density q.
    box : Box | None, optional
        x-box, the model's default box when omitted.
    grid : int, optional
        Points over the range of h.
    sharp : bool, optional
        Use the exact weighted norm of the Neumann solution instead of C_Q.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If the model is not truncated or h does not exceed the lower end.
    posteriorlip.errors.NonIntegrable
        If 1/Q is not integrable.
    """
    model = _truncated(model)
    route = PARETO_ROUTES.get(model.name, "pareto_hfunction")
    x_box = [(float(lo), float(hi)) for lo, hi in (box or model.data_box)]
    lo = max(prior.support.lo, model.param_space.lo)
    theta0 = prior.support.hi
    u_lo = min(model.truncation(np.array([b[0] for b in x_box])), theta0)
    u_hi = min(model.truncation(np.array([b[1] for b in x_box])), theta0)
    if not u_lo > lo:
        raise posteriorlip.errors.InvalidInput(f"h must exceed {lo} on the box, got {u_lo}")
    constant = pareto_sharp_norm if sharp else pareto_cq

    def evaluate(u: FloatArray) -> dict[str, float]:
        value = constant(model, prior, float(u[0]))
        return {"K": model.truncation_lipschitz * value, "C_Q": value}

    if u_hi > u_lo:
        pieces, found = _esssup(evaluate, [(u_lo, u_hi)], grid)
        argmax, refined = found.argmax, found.refined
    else:
        pieces, argmax, refined = evaluate(np.array([u_lo])), [u_lo], False
    pieces.update({"M": model.truncation_lipschitz, "theta0": theta0})
    return LipschitzCertificate(
        lipschitz=pieces["K"],
        metric="w2",
        route=route,
        sup_domain=SupDomain(box=x_box, grid=grid, argmax=argmax, refined=refined),
        components=pieces,
        notes={"argmax": "h(x)", "norm": "sharp" if sharp else "C_Q"},
    )


def lipschitz_maintrace_1d(
    kernel: PosteriorKernel,
    criterion: str = "oracle",
    box: Box | None = None,
    grid: int = MAINTRACE_GRID,
) -> LipschitzCertificate:
    """
    Moving-domain W2 certificate K = esssup ‖V‖(1 + 𝒞(1 + 𝒥₂)) + 𝒞𝒥₁.

    The support (lo, u(x)) with u = min(h(x), θ₀) is pulled back from a fixed
    interval by θ ↦ lo + (θ - lo)(u(x) - lo), whose velocity field has
    W^{1,∞} norm |∇h|(1 + 1/(u - lo)); the norm vanishes once h(x) ≥ θ₀.
    Operator norms are used throughout.
    """
    model = _truncated(kernel)

    def evaluate(x: FloatArray) -> dict[str, float]:
        law = kernel.evaluate(x)
        constant = posterior_poincare(kernel, x, law, criterion).value
        values = fisher_values(kernel, x)
        support = law.support
        velocity = _moving_velocity(model, kernel.prior, x)
        norm = velocity * (1.0 + 1.0 / (support.hi - support.lo)) if velocity else 0.0
        value = norm * (1.0 + constant * (1.0 + values.j2)) + constant * values.j1
        return {"K": value, "C": constant, "J1": values.j1, "J2": values.j2, "V_norm": norm}

    pieces, domain = _esssup(evaluate, box or kernel.data_box, grid)
    return LipschitzCertificate(
        lipschitz=pieces["K"],
        metric="w2",
        route="maintrace_1d",
        sup_domain=domain,
        components=pieces,
        notes={"criterion": criterion, "velocity_norm": "operator"},
    )


# dispatch -----------------------------------------------------------------


def certify(
    kernel: PosteriorKernel,
    route: str,
    *,
    box: Box | None = None,
    grid: int | None = None,
    criterion: str | None = None,
    p: float | None = None,
    s_p: float = 1.0,
    n: int = 1,
    form: typing.Literal["sufficient", "mle"] = "sufficient",
    sharp: bool = False,
    fallback: bool = False,
    prior_bound: PoincareBound | None = None,
) -> LipschitzCertificate:
    """
    Compute the certificate of ``route`` for ``kernel``.

    Options that do not apply to the route are ignored; ``grid`` defaults to
    the route's own default.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        For unknown routes, or closed-form routes on models without an
        exponential-family structure.
    """
    if route not in posteriorlip.abc.objects.ROUTE_METRICS:
        raise posteriorlip.errors.InvalidInput(f"unknown route {route!r}")
    points = grid or DEFAULT_GRID
    logger.info("certifying %r by route %s", kernel, route)
    match route:
        case "thm21_i":
            return lipschitz_tv(kernel, box, points)
        case "thm21_ii":
            return lipschitz_w1(kernel, prior_bound, p or 2.0, box, points)
        case "thm21_iii" | "cor31":
            return lipschitz_w2(kernel, criterion or "bakry_emery", route, box, points)
        case "thm21_iv":
            return lipschitz_w2_sobolev(kernel, s_p, p or 1.0, box, points)
        case "prop32_expfam":
            return lipschitz_expfam(_family(kernel), kernel.prior, fallback, box, grid or 64)
        case "exch_n":
            count = kernel.n if isinstance(kernel, posteriorlip.models.ExchangeableKernel) else n
            return lipschitz_exch_n(_family(kernel), kernel.prior, count, form)
        case "pareto_cq" | "pareto_msample" | "pareto_hfunction":
            return lipschitz_pareto(_truncated(kernel), kernel.prior, box, points, sharp)
        case _:
            return lipschitz_maintrace_1d(kernel, criterion or "oracle", box, grid or MAINTRACE_GRID)


def _family(kernel: PosteriorKernel) -> ExpFamilyModel:
    if not isinstance(kernel.model, ExpFamilyModel):
        raise posteriorlip.errors.InvalidInput(f"{kernel.model.name} is not an exponential family")
    return kernel.model
