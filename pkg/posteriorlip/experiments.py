"""
🔬 Verification Experiments.
===============================

Seeded harnesses that test certificates and their consequences numerically.

✨ Features
--------------
- 🎲 Reproducible streams: every pair, replication and probe draws from its
  own generator seeded by (master seed, item index), so results do not depend
  on evaluation order.
- 📏 Ratio sweeps: empirical Lipschitz ratios against a certificate, with the
  worst pair kept when the check fails.
- 🧊 Cell averages: approximation of π(·|x) by its average over partition
  cells.
- 📉 Contraction: Monte Carlo rates of posterior concentration with a
  log-log fit.

📦 Functions
--------------
- `sample_pairs`, `ratio_sweep`: Lipschitz ratios.
- `wiener_uniformity`: Per-j constants of the Brownian skeleton kernels.
- `cell_average_posterior`, `renyi_approx`, `renyi_sweep`: Cell averages.
- `mixture_posterior`: Posterior under a mixture prior.
- `contraction_experiment`, `kl_contraction_term`, `poincare_scaling`:
  Contraction rates.
- `bole_condition_check`: The Glivenko-Cantelli speed integral.
- `poincare_catalogue`, `poincare_soundness`: Bounds against the oracle.
"""

import collections.abc
import logging
import math
import statistics

import numpy as np
import numpy.typing as npt
import scipy.special
import scipy.stats

import posteriorlip.abc.objects
import posteriorlip.abc.protocols
import posteriorlip.abc.reports
import posteriorlip.errors
import posteriorlip.features.exponential
import posteriorlip.features.mixin_base
import posteriorlip.features.priors
import posteriorlip.measures
import posteriorlip.models
import posteriorlip.numerics
import posteriorlip.poincare
import posteriorlip.transport

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
Box = collections.abc.Sequence[tuple[float, float]]
Distribution1D = posteriorlip.measures.Distribution1D
LipschitzCertificate = posteriorlip.abc.objects.LipschitzCertificate
PoincareBound = posteriorlip.abc.objects.PoincareBound
Prior = posteriorlip.features.priors.Prior
StatModel = posteriorlip.features.mixin_base.StatModel

PAIR_FLOOR = 1e-3
RATIO_TOLERANCE = 1e-2
CELL_NODES = 32
DIVERGENT_TAIL = -1.25
POINCARE_TOLERANCE = 1e-3


def item_rng(seed: int, *index: int) -> np.random.Generator:
    """Generator of the work item ``index`` under the master ``seed``."""
    if seed < 0:
        raise posteriorlip.errors.InvalidInput(f"seed must be nonnegative, got {seed}")
    return np.random.default_rng(np.random.SeedSequence([seed, *index]))


def sample_pairs(box: Box, n_pairs: int, seed: int) -> list[tuple[FloatArray, FloatArray]]:
    """
    Uniform pairs in ``box`` at least 1e-3 of the narrowest side apart.

    Examples
    --------
    >>> pairs = sample_pairs([(0.0, 1.0)], 3, seed=7)
    >>> len(pairs), all(abs(a[0] - b[0]) >= 1e-3 for a, b in pairs)
    (3, True)
    """
    lows = np.array([lo for lo, _ in box], dtype=np.float64)
    highs = np.array([hi for _, hi in box], dtype=np.float64)
    floor = PAIR_FLOOR * float(np.min(highs - lows))
    pairs: list[tuple[FloatArray, FloatArray]] = []
    for index in range(n_pairs):
        rng = item_rng(seed, index)
        while True:
            first = rng.uniform(lows, highs)
            second = rng.uniform(lows, highs)
            if float(np.linalg.norm(first - second)) >= floor:
                break
        pairs.append((first, second))
    return pairs


def ratio_sweep(
    kernel: posteriorlip.abc.protocols.KernelProtocol,
    certificate: LipschitzCertificate | None = None,
    n_pairs: int = 100,
    seed: int = 0,
    metric: str | None = None,
    box: Box | None = None,
    tolerance: float = RATIO_TOLERANCE,
) -> posteriorlip.abc.reports.RatioSweepReport:
    """
    Empirical ratios d(π(·|x₁), π(·|x₂))/|x₁ - x₂| over seeded pairs.

    Parameters
    ----------
    kernel : KernelProtocol
        Any kernel of `posteriorlip.models`.
    certificate : LipschitzCertificate | None, optional
        Certificate to check; its metric and box are the defaults.
    n_pairs : int, optional
        Number of pairs.
    seed : int, optional
        Master seed.
    metric : str | None, optional
        ``"tv"``, ``"w1"`` or ``"w2"``; the certificate's metric, else W2.
    box : Box | None, optional
        Sampling box; the certificate's box, else the kernel's.
    tolerance : float, optional
        Relative slack τ in ``max_ratio ≤ L(1 + τ)``.

    Returns
    -------
    RatioSweepReport
        All pairs, their summary and the pass flag.
    """
    chosen = metric or (certificate.metric if certificate is not None else "w2")
    region = box or (certificate.box if certificate is not None else None) or kernel.data_box
    pairs: list[posteriorlip.abc.reports.RatioPair] = []
    for first, second in sample_pairs(region, n_pairs, seed):
        gap = float(np.linalg.norm(first - second))
        value = posteriorlip.transport.distance(
            kernel.evaluate(first), kernel.evaluate(second), chosen
        )
        pairs.append(
            posteriorlip.abc.reports.RatioPair(
                x1=first.tolist(),
                x2=second.tolist(),
                distance=value,
                input_distance=gap,
                ratio=value / gap,
            )
        )
    ratios = [pair.ratio for pair in pairs]
    worst = max(pairs, key=lambda pair: pair.ratio)
    passed: bool | None = None
    offending = None
    if certificate is not None:
        passed = worst.ratio <= certificate.lipschitz * (1.0 + tolerance)
        if not passed:
            offending = worst
            logger.warning(
                "ratio %.6g at x1=%s, x2=%s exceeds L=%.6g",
                worst.ratio,
                worst.x1,
                worst.x2,
                certificate.lipschitz,
            )
    logger.info("ratio sweep: %d pairs, max %.6g", len(pairs), worst.ratio)
    return posteriorlip.abc.reports.RatioSweepReport(
        pairs=pairs,
        max_ratio=worst.ratio,
        median_ratio=statistics.median(ratios),
        metric=chosen,
        certificate=certificate,
        passed=passed,
        offending=offending,
        tolerance=tolerance,
        seed=seed,
    )


def wiener_uniformity(
    j_values: collections.abc.Sequence[int],
    n_pairs: int = 50,
    seed: int = 0,
    x_pairs: collections.abc.Sequence[tuple[float, float]] | None = None,
    tolerance: float = 0.2,
) -> posteriorlip.abc.reports.WienerReport:
    """
    Lipschitz constants of x ↦ N(u_j(x), Σ_j) for several j.

    For each j the coordinate constant is the largest W2 ratio over the
    pairs; the path constant divides it by √j, the Lipschitz constant of the
    map from skeleton coordinates to paths. Without explicit pairs, seeded
    uniform pairs in [0, 1] are used together with (0, 0.01), which probes
    the left end where the skeleton mean is most sensitive.

    Returns
    -------
    WienerReport
        Constants per j and the relative spread of the coordinate constants.
    """
    if x_pairs is None:
        pairs = [(0.0, 0.01)] + [
            (float(a[0]), float(b[0])) for a, b in sample_pairs([(0.0, 1.0)], n_pairs, seed)
        ]
    else:
        pairs = [(float(a), float(b)) for a, b in x_pairs]
    coordinate: list[float] = []
    path: list[float] = []
    for j in j_values:
        kernel = posteriorlip.models.WienerKernel(j)
        best = 0.0
        for first, second in pairs:
            gap = abs(first - second)
            if gap == 0:
                continue
            value = posteriorlip.transport.gaussian_w2(kernel.evaluate(first), kernel.evaluate(second))
            best = max(best, value / gap)
        coordinate.append(best)
        path.append(best / math.sqrt(j))
    positive = [c for c in coordinate if c > 0]
    spread = (max(positive) - min(positive)) / min(positive) if positive else 0.0
    logger.info("Wiener constants %s, spread %.3g", coordinate, spread)
    return posteriorlip.abc.reports.WienerReport(
        j_values=list(j_values),
        coordinate_constants=coordinate,
        path_constants=path,
        spread=spread,
        passed=spread <= tolerance,
        seed=seed,
    )


# cell averages ------------------------------------------------------------


def cell_average_posterior(
    kernel: posteriorlip.models.PosteriorKernel,
    cell: tuple[float, float],
    nodes: int = CELL_NODES,
    chi: collections.abc.Callable[[FloatArray], FloatArray] | None = None,
) -> Distribution1D:
    """
    π_ε(·|A) = ∫_A π(·|y) χ(dy)/χ(A) by Gauss-Legendre quadrature in y.

    ``chi`` is the density of the data marginal, uniform when omitted.
    """
    lo, hi = cell
    base, weights = posteriorlip.numerics.gauss_legendre(nodes)
    points = 0.5 * (lo + hi) + 0.5 * (hi - lo) * base
    mass = np.array(weights, dtype=np.float64)
    if chi is not None:
        mass = mass * np.asarray(chi(points), dtype=np.float64)
    if not np.sum(mass) > 0:
        raise posteriorlip.errors.ZeroDensity(f"χ gives no mass to the cell {cell}")
    laws = [kernel.evaluate(point) for point in points]
    return Distribution1D.mixture(laws, mass / np.sum(mass))


def _cell_probes(lo: float, hi: float, count: int, last: bool) -> FloatArray:
    probes = np.linspace(lo, hi, count + 1)
    return probes if last else probes[:-1]


def renyi_approx(
    kernel: posteriorlip.models.PosteriorKernel,
    box: tuple[float, float],
    k_cells: int,
    probes_per_cell: int = 8,
    certificate: LipschitzCertificate | None = None,
    cell_nodes: int = CELL_NODES,
    chi: collections.abc.Callable[[FloatArray], FloatArray] | None = None,
) -> posteriorlip.abc.reports.RenyiReport:
    """
    Worst W1 error of the cell-average approximation on k equal cells.

    Probes are equally spaced in each cell, starting at its left edge; the
    right end of the box belongs to the last cell. With a certificate the
    report carries the bound L·ε, ε being the cell width.
    """
    if k_cells < 1:
        raise posteriorlip.errors.InvalidInput(f"k_cells must be positive, got {k_cells}")
    lo, hi = box
    width = (hi - lo) / k_cells
    worst = 0.0
    for index in range(k_cells):
        cell = (lo + index * width, lo + (index + 1) * width)
        approx = cell_average_posterior(kernel, cell, cell_nodes, chi)
        for x in _cell_probes(*cell, probes_per_cell, index == k_cells - 1):
            error = posteriorlip.transport.wasserstein_1d(kernel.evaluate(x), approx, p=1.0)
            worst = max(worst, error)
    bound = certificate.lipschitz * width if certificate is not None else None
    logger.debug("k=%d: max W1 error %.6g (bound %s)", k_cells, worst, bound)
    return posteriorlip.abc.reports.RenyiReport(
        epsilon=width,
        k_cells=k_cells,
        max_error=worst,
        bound=bound,
        passed=None if bound is None else worst <= bound,
    )


def renyi_sweep(
    kernel: posteriorlip.models.PosteriorKernel,
    box: tuple[float, float],
    k_values: collections.abc.Sequence[int],
    certificate: LipschitzCertificate | None = None,
    probes_per_cell: int = 8,
    cell_nodes: int = CELL_NODES,
) -> posteriorlip.abc.reports.RenyiSweepReport:
    """Run `renyi_approx` for every k and compare errors of k and 2k."""
    reports = [
        renyi_approx(kernel, box, k, probes_per_cell, certificate, cell_nodes) for k in k_values
    ]
    by_k = {report.k_cells: report.max_error for report in reports}
    halving = [by_k[k] / by_k[2 * k] for k in k_values if 2 * k in by_k and by_k[2 * k] > 0]
    flags = [report.passed for report in reports if report.passed is not None]
    return posteriorlip.abc.reports.RenyiSweepReport(
        reports=reports,
        halving_ratios=halving,
        certificate=certificate,
        passed=all(flags) if flags else None,
    )


def mixture_posterior(
    components: collections.abc.Sequence[tuple[float, Prior]],
    model: StatModel,
    x: posteriorlip.features.mixin_base.DataPoint,
) -> tuple[Distribution1D, FloatArray]:
    """
    Posterior under the mixture prior Σ_j λ_j π_j.

    It equals Σ_j λ_j(x) π_j(·|x) with
    λ_j(x) = λ_j ρ_j(x) / Σ_i λ_i ρ_i(x), ρ_j the evidence under π_j.

    Returns
    -------
    tuple[Distribution1D, FloatArray]
        The posterior and the weights λ_j(x).

    Raises
    ------
    posteriorlip.errors.ZeroEvidence
        If every component evidence vanishes.
    """
    prior_weights = np.array([weight for weight, _ in components], dtype=np.float64)
    if np.any(prior_weights < 0) or abs(float(prior_weights.sum()) - 1.0) > 1e-9:
        raise posteriorlip.errors.InvalidInput("mixture weights must be nonnegative and sum to one")
    laws: list[Distribution1D | None] = []
    log_mass = np.full(len(components), -np.inf)
    for index, (weight, prior) in enumerate(components):
        if weight == 0:
            laws.append(None)
            continue
        kernel = posteriorlip.models.PosteriorKernel(model, prior)
        try:
            law = kernel.evaluate(x)
        except posteriorlip.errors.ZeroEvidence:
            logger.debug("component %d has no evidence at x=%s", index, x)
            laws.append(None)
            continue
        laws.append(law)
        log_mass[index] = math.log(weight) + law.log_normalizer - prior.log_normalizer
    if not np.any(np.isfinite(log_mass)):
        raise posteriorlip.errors.ZeroEvidence(f"no mixture component has evidence at x={x}")
    weights = np.exp(log_mass - scipy.special.logsumexp(log_mass))
    weights /= weights.sum()
    kept = [(w, law) for w, law in zip(weights, laws, strict=True) if law is not None and w > 0]
    if len(kept) == 1:
        return kept[0][1], weights
    mixed = Distribution1D.mixture([law for _, law in kept], np.array([w for w, _ in kept]))
    return mixed, weights


# contraction --------------------------------------------------------------


def kl_contraction_term(
    model: posteriorlip.features.exponential.ExpFamilyModel,
    prior: Prior,
    theta0: float,
    n: int,
) -> float:
    """
    ∫|θ - θ₀| e^{-nK(θ|θ₀)} π(dθ) / ∫ e^{-nK(θ|θ₀)} π(dθ), K the KL divergence.
    """
    support = prior.support.intersect(model.param_space)
    if support is None:
        raise posteriorlip.errors.ZeroEvidence("prior support misses the parameter space")

    def log_density(theta: FloatArray) -> FloatArray:
        return -n * model.kl(theta, theta0) + prior.log_density(theta)

    law = Distribution1D(support, log_density=log_density)
    return law.expect(lambda theta: np.abs(theta - theta0))


def poincare_scaling(
    model: StatModel,
    prior: Prior,
    theta0: float,
    n_values: collections.abc.Sequence[int],
    seed: int,
    grid: int = 2000,
) -> list[float]:
    """
    n·𝒞²[π_n(·|ξ)] per n for one seeded sample ξ ~ f(·|θ₀)^{⊗n}.

    The values are reported for boundedness only.
    """
    values: list[float] = []
    for index, n in enumerate(n_values):
        sample = model.sample(theta0, n, item_rng(seed, index, 0))
        law = posteriorlip.models.posterior_n(model, prior, sample)
        constant = posteriorlip.poincare.bound_oracle(law, grid).value
        values.append(n * constant * constant)
    return values


def contraction_experiment(
    model: StatModel,
    prior: Prior,
    theta0: float,
    n_values: collections.abc.Sequence[int],
    replications: int = 50,
    seed: int = 0,
    scaling: bool = False,
) -> posteriorlip.abc.reports.ContractionReport:
    """
    Monte Carlo contraction rates ε̂_n of E W1(π_n(·|ξ), δ_θ₀).

    W1 to a point mass is ∫|θ - θ₀| dπ_n. Replications with vanishing
    evidence are discarded and logged. The slope and intercept come from an
    ordinary least-squares fit of log ε̂_n on log n.

    Parameters
    ----------
    model : StatModel
        Samplable likelihood.
    prior : Prior
        Prior whose support contains θ₀.
    theta0 : float
        True parameter.
    n_values : Sequence[int]
        At least two sample sizes.
    replications : int, optional
        Replications per sample size.
    seed : int, optional
        Master seed; replication r of the i-th size uses stream (seed, i, r).
    scaling : bool, optional
        Also report n·𝒞²[π_n] from `poincare_scaling`.

    Returns
    -------
    ContractionReport
        Estimates, fit and auxiliary terms.
    """
    if len(n_values) < 2:
        raise posteriorlip.errors.InvalidInput("the rate fit needs at least two sample sizes")
    if replications < 1:
        raise posteriorlip.errors.InvalidInput(f"replications must be positive, got {replications}")
    if not prior.support.contains(theta0):
        raise posteriorlip.errors.InvalidInput(f"θ₀={theta0} lies outside the prior support")
    eps_hat: list[float] = []
    samples: list[list[float]] = []
    discarded = 0
    for index, n in enumerate(n_values):
        kept: list[float] = []
        for replication in range(replications):
            data = model.sample(theta0, n, item_rng(seed, index, replication))
            try:
                law = posteriorlip.models.posterior_n(model, prior, data)
            except posteriorlip.errors.ZeroEvidence as exc:
                discarded += 1
                logger.warning("replication %d at n=%d discarded: %s", replication, n, exc)
                continue
            kept.append(law.expect(lambda theta: np.abs(theta - theta0)))
        if not kept:
            raise posteriorlip.errors.ZeroEvidence(f"every replication at n={n} lost its evidence")
        samples.append(kept)
        eps_hat.append(math.fsum(kept) / len(kept))
    fit = scipy.stats.linregress(np.log(np.asarray(n_values, dtype=np.float64)), np.log(eps_hat))
    eps_star: list[float] = []
    if isinstance(model, posteriorlip.features.exponential.ExpFamilyModel):
        eps_star = [kl_contraction_term(model, prior, theta0, n) for n in n_values]
    c_tilde = poincare_scaling(model, prior, theta0, n_values, seed) if scaling else []
    logger.info("contraction slope %.4f over n=%s", fit.slope, list(n_values))
    return posteriorlip.abc.reports.ContractionReport(
        n_values=list(n_values),
        eps_hat=eps_hat,
        samples=samples,
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        replications=replications,
        discarded=discarded,
        eps_star=eps_star,
        c_tilde=c_tilde,
        theta0=theta0,
        seed=seed,
    )


# Poincaré checks ----------------------------------------------------------


def _tail_exponent(d: Distribution1D, side: float) -> float:
    """Log-log slope of F(1-F)/f between half and 95% of the way to the window edge."""
    median = d.median()
    edge = d.window.hi if side > 0 else d.window.lo
    near, far = median + 0.5 * (edge - median), median + 0.95 * (edge - median)
    points = np.array([near, far])
    values = d.cdf(points) * d.sf(points) / d.pdf(points)
    return math.log(values[1] / values[0]) / math.log(abs(far - median) / abs(near - median))


def bole_condition_check(d: Distribution1D) -> posteriorlip.abc.objects.BoLeCheck:
    """
    The integral ∫ F(1 - F)/f over the support, or a divergence flag.

    On an unbounded end the integrand's decay exponent is estimated inside
    the integration window; a decay slower than |θ|^{-1.25} is reported as
    divergent. Bounded supports are integrated in full.

    Examples
    --------
    >>> check = bole_condition_check(posteriorlip.measures.uniform(0.0, 1.0))
    >>> round(check.value, 8), check.divergent
    (0.16666667, False)
    """
    exponents = [
        _tail_exponent(d, side)
        for side, end in ((-1.0, d.support.lo), (1.0, d.support.hi))
        if not math.isfinite(end)
    ]
    tail = max(exponents) if exponents else None
    if tail is not None and tail > DIVERGENT_TAIL:
        return posteriorlip.abc.objects.BoLeCheck(value=None, divergent=True, tail_exponent=tail)
    full = d
    if d.support.bounded and d.window != d.support:
        full = Distribution1D(d.support, log_density=d.logpdf, window=d.support)
    domain = full.support if full.support.bounded else full.window

    def integrand(t: float) -> float:
        point = np.array([t])
        with np.errstate(divide="ignore", invalid="ignore"):
            value = float(full.cdf(point)[0] * full.sf(point)[0] / full.pdf(point)[0])
        return value if math.isfinite(value) else 0.0

    try:
        value = posteriorlip.numerics.integrate(integrand, domain).value
    except posteriorlip.errors.NonConvergent:
        return posteriorlip.abc.objects.BoLeCheck(value=None, divergent=True, tail_exponent=tail)
    return posteriorlip.abc.objects.BoLeCheck(value=value, divergent=False, tail_exponent=tail)


def _gaussian_posterior_bounds(x: float) -> tuple[Distribution1D, list[PoincareBound]]:
    law = posteriorlip.models.posterior(
        posteriorlip.features.exponential.GaussianLocation(),
        posteriorlip.features.priors.gaussian(),
        x,
    )
    return law, [
        posteriorlip.poincare.bound_bakry_emery(2.0),
        posteriorlip.poincare.bound_bobkov(law.variance_vec()[0]),
        posteriorlip.poincare.bound_muckenhoupt_1d(law),
        posteriorlip.poincare.bound_holley_stroock(posteriorlip.poincare.bound_bakry_emery(2.0), 0.0),
        posteriorlip.poincare.bound_francesi(1, 1, posteriorlip.abc.objects.FrancesiParams(alpha=1.0, h=1.0)),
    ]


def poincare_catalogue(name: str) -> tuple[Distribution1D, list[PoincareBound]]:
    """
    A named test measure with every bound that applies to it.

    Names: ``standard_normal``, ``uniform_01``, ``truncated_exponential``
    (Exp(1) on (0, 5)) and ``gaussian_posterior_<x>`` (the Gaussian-location
    posterior under a standard normal prior at x).

    Raises
    ------
    posteriorlip.errors.InvalidInput
        For unknown names.
    """
    match name:
        case "standard_normal":
            law = posteriorlip.measures.normal(0.0, 1.0)
            return law, [
                posteriorlip.poincare.bound_bakry_emery(1.0),
                posteriorlip.poincare.bound_bobkov(1.0),
                posteriorlip.poincare.bound_muckenhoupt_1d(law),
                posteriorlip.poincare.bound_holley_stroock(
                    posteriorlip.poincare.bound_bakry_emery(1.0), 0.0
                ),
                posteriorlip.poincare.bound_francesi(
                    1, 1, posteriorlip.abc.objects.FrancesiParams(alpha=1.0)
                ),
            ]
        case "uniform_01":
            law = posteriorlip.measures.uniform(0.0, 1.0)
            return law, [
                posteriorlip.poincare.bound_payne_weinberger(1.0),
                posteriorlip.poincare.bound_log_concave_diam(1.0),
                posteriorlip.poincare.bound_bobkov(1.0 / 12.0),
                posteriorlip.poincare.bound_muckenhoupt_1d(law),
            ]
        case "truncated_exponential":
            law = posteriorlip.measures.exponential(1.0, 0.0, 5.0)
            return law, [
                posteriorlip.poincare.bound_log_concave_diam(5.0),
                posteriorlip.poincare.bound_bobkov(law.variance_vec()[0]),
                posteriorlip.poincare.bound_muckenhoupt_1d(law),
                posteriorlip.poincare.bound_holley_stroock(
                    posteriorlip.poincare.bound_payne_weinberger(5.0), 5.0
                ),
            ]
        case _ if name.startswith("gaussian_posterior_"):
            try:
                x = float(name.removeprefix("gaussian_posterior_"))
            except ValueError as exc:
                raise posteriorlip.errors.InvalidInput(f"bad data point in {name!r}") from exc
            return _gaussian_posterior_bounds(x)
        case _:
            raise posteriorlip.errors.InvalidInput(f"unknown catalogue measure {name!r}")


def poincare_soundness(
    measure: Distribution1D,
    bounds: collections.abc.Sequence[PoincareBound],
    name: str = "measure",
    grid: int = 2000,
    tolerance: float = POINCARE_TOLERANCE,
) -> posteriorlip.abc.reports.PoincareReport:
    """Compare ``bounds`` with the spectral oracle of ``measure``."""
    oracle = posteriorlip.poincare.bound_oracle(measure, grid).value
    low = [bound.criterion for bound in bounds if bound.value < oracle - tolerance]
    if low:
        logger.warning("%s: bounds %s fall below the oracle %.6g", name, low, oracle)
    return posteriorlip.abc.reports.PoincareReport(
        measure=name,
        oracle=oracle,
        bounds=list(bounds),
        passed=not low,
        bole=bole_condition_check(measure),
    )
