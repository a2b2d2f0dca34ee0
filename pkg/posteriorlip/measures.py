"""
📐 Probability Measures.
===========================

One-dimensional measures with density, CDF, quantile and sampler access,
empirical measures, Gaussian vectors and weighted grids.

✨ Features
--------------
- 🧱 Adaptive panels: a `Distribution1D` locates the bulk of its density,
  splits it into Gauss-Legendre panels until the 8- and 16-point rules agree,
  and caches cumulative panel masses for the CDF and its complement.
- 🔁 Inverse CDF: vectorised safeguarded Newton on the cached panels.
- 🎲 Sampling: inverse-CDF transform of `numpy.random.default_rng` draws.
- 🧮 Unnormalised input: Bayes numerators are normalised at construction, in
  log space.

📦 Classes
--------------
- `Distribution1D`: Absolutely continuous law on an interval.
- `EmpiricalMeasure`: Finitely many weighted atoms on the line.
- `GaussianVec`: Gaussian law on ℝᵈ given by mean and covariance.
- `TensorGrid`: Product quadrature grid on a box.
- `GridMeasure`: Weighted point cloud in ℝᵈ.
"""

import collections.abc
import logging
import math
import typing

import numpy as np
import numpy.typing as npt
import scipy.optimize
import scipy.special

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.numerics

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
LogDensity = collections.abc.Callable[[FloatArray], npt.ArrayLike]
SeedLike = int | collections.abc.Sequence[int] | np.random.Generator | None

PANEL_ORDER = 16
CHECK_ORDER = 8
INITIAL_PANELS = 64
MAX_ROUNDS = 48
MAX_PANELS = 1 << 15
PANEL_TOLERANCE = 1e-13
SCAN_POINTS = 4097
LOG_DROP = 40.0
QUANTILE_NODES = 4096
QUANTILE_CLIP = 1e-9
NEWTON_ITERATIONS = 60

Interval = posteriorlip.abc.objects.Interval
REAL_LINE = Interval(-math.inf, math.inf)


def make_rng(seed: SeedLike) -> np.random.Generator:
    """Return a generator for ``seed`` (ints, int sequences or a generator)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _log_of(density: LogDensity) -> LogDensity:
    def log_density(theta: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(density(theta), dtype=np.float64))

    return log_density


def _gl_panels(
    lo: FloatArray, hi: FloatArray, order: int
) -> tuple[FloatArray, FloatArray]:
    """Nodes (P, order) and weights (P, order) of Gauss-Legendre on each panel."""
    nodes, weights = posteriorlip.numerics.gauss_legendre(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return mid[:, None] + half[:, None] * nodes[None, :], half[:, None] * weights[None, :]


class Distribution1D:
    """
    Absolutely continuous probability law on an interval.

    The law does not change after construction. Quantiles at the transport
    levels are computed on first use of `gl_quantiles` and cached read-only.

    Parameters
    ----------
    support : Interval
        Interval outside of which the density is zero.
    log_density : Callable[[FloatArray], ArrayLike] | None, optional
        Vectorised log of an unnormalised density (preferred).
    density : Callable[[FloatArray], ArrayLike] | None, optional
        Vectorised unnormalised density, used when no log form is given.
    window : Interval | None, optional
        Sub-interval carrying all but a negligible part of the mass. Located
        automatically from the mode when omitted; pass it for multimodal laws.

    Attributes
    ----------
    support : Interval
        Support of the law.
    window : Interval
        Interval covered by the integration panels.
    log_normalizer : float
        Log of the total mass of the unnormalised density.

    Raises
    ------
    posteriorlip.errors.Degenerate
        If the density vanishes on the whole support.
    posteriorlip.errors.NonConvergent
        If panel refinement does not settle.
    """

    __slots__: tuple[str, ...] = (
        "_cum",
        "_edges",
        "_gl_quantiles",
        "_log_density",
        "_mass",
        "_node_weights",
        "_nodes",
        "_suffix",
        "log_normalizer",
        "support",
        "window",
    )

    def __init__(
        self,
        support: Interval = REAL_LINE,
        *,
        log_density: LogDensity | None = None,
        density: LogDensity | None = None,
        window: Interval | None = None,
    ) -> None:
        if log_density is None:
            if density is None:
                raise posteriorlip.errors.MissingParam("density", "give log_density or density")
            log_density = _log_of(density)

        self._log_density: LogDensity = log_density
        self.support: Interval = support
        self._gl_quantiles: FloatArray | None = None
        located = window if window is not None else self._locate_window()
        clipped = located.intersect(support)
        if clipped is None:
            raise posteriorlip.errors.Degenerate(f"window {located} misses support {support}")
        if not clipped.bounded:
            raise posteriorlip.errors.InvalidInput(f"integration window must be bounded, got {clipped}")
        self.window: Interval = clipped
        self._build_panels()

    # construction ---------------------------------------------------------

    def _raw_log(self, theta: FloatArray) -> FloatArray:
        """Unnormalised log density, -inf off the support and for NaN."""
        theta = np.asarray(theta, dtype=np.float64)
        with np.errstate(all="ignore"):
            values = np.asarray(self._log_density(theta), dtype=np.float64)
        values = np.broadcast_to(values, theta.shape).copy()
        outside = (theta <= self.support.lo) | (theta >= self.support.hi)
        values[outside | np.isnan(values)] = -np.inf
        return values

    def _locate_window(self) -> Interval:
        theta = posteriorlip.numerics.scan_grid(self.support, SCAN_POINTS)
        logs = self._raw_log(theta)
        if not np.any(np.isfinite(logs)):
            raise posteriorlip.errors.Degenerate(
                f"density vanishes on the scan grid of {self.support}"
            )
        peak = int(np.argmax(logs))
        left = theta[peak - 1] if peak > 0 else max(self.support.lo, theta[0] - abs(theta[0]) - 1.0)
        right = (
            theta[peak + 1]
            if peak < theta.size - 1
            else min(self.support.hi, theta[-1] + abs(theta[-1]) + 1.0)
        )
        found = scipy.optimize.minimize_scalar(
            lambda t: -float(self._raw_log(np.array([t]))[0]),
            bounds=(left, right),
            method="bounded",
            options={"xatol": 1e-13 * max(1.0, abs(float(theta[peak])))},
        )
        mode = float(found.x)
        top = float(self._raw_log(np.array([mode]))[0])
        if not top >= logs[peak]:
            mode, top = float(theta[peak]), float(logs[peak])

        bracket = 0.5 * (right - left)
        probe = bracket / 8.0
        around = self._raw_log(np.array([mode - probe, mode, mode + probe]))
        curvature = -(around[0] - 2.0 * around[1] + around[2]) / (probe * probe)
        start = 1.0 / math.sqrt(curvature) if math.isfinite(curvature) and curvature > 0 else bracket
        threshold = top - LOG_DROP
        lo = self._edge(mode, -1.0, start, threshold)
        hi = self._edge(mode, 1.0, start, threshold)
        logger.debug("window (%.6g, %.6g) around mode %.6g", lo, hi, mode)
        return Interval(lo, hi)

    def _edge(self, mode: float, direction: float, start: float, threshold: float) -> float:
        """Walk from the mode by doubling steps until the log density drops."""
        boundary = self.support.lo if direction < 0 else self.support.hi
        inside, step = mode, start
        for _ in range(400):
            candidate = mode + direction * step
            if (candidate - boundary) * direction >= 0:
                if math.isfinite(boundary):
                    return boundary
                raise posteriorlip.errors.NonConvergent("window search ran off to infinity")
            if self._raw_log(np.array([candidate]))[0] < threshold:
                break
            inside, step = candidate, 2.0 * step
        else:
            raise posteriorlip.errors.NonConvergent("window search did not find the tail", 400)
        outside = candidate
        for _ in range(12):
            middle = 0.5 * (inside + outside)
            if self._raw_log(np.array([middle]))[0] < threshold:
                outside = middle
            else:
                inside = middle
        return outside

    def _build_panels(self) -> None:
        lo, hi = self.window.lo, self.window.hi
        probe = np.linspace(lo, hi, 2049)
        shift = float(np.max(self._raw_log(probe)))
        if not math.isfinite(shift):
            shift = float(np.max(self._raw_log(posteriorlip.numerics.scan_grid(self.window, SCAN_POINTS))))
        if not math.isfinite(shift):
            raise posteriorlip.errors.Degenerate(f"density vanishes on the window {self.window}")

        def shifted(theta: FloatArray) -> FloatArray:
            return np.exp(self._raw_log(theta) - shift)

        pending = np.linspace(lo, hi, INITIAL_PANELS + 1)
        pending_lo, pending_hi = pending[:-1], pending[1:]
        done_lo: list[FloatArray] = []
        done_hi: list[FloatArray] = []
        done_mass: list[FloatArray] = []
        estimate = 0.0
        for round_index in range(MAX_ROUNDS):
            nodes, weights = _gl_panels(pending_lo, pending_hi, PANEL_ORDER)
            fine = np.sum(weights * shifted(nodes), axis=1)
            nodes, weights = _gl_panels(pending_lo, pending_hi, CHECK_ORDER)
            coarse = np.sum(weights * shifted(nodes), axis=1)
            estimate = max(estimate, float(np.sum(fine)) + sum(float(np.sum(m)) for m in done_mass))
            bad = np.abs(fine - coarse) > PANEL_TOLERANCE * max(estimate, 1e-300)
            done_lo.append(pending_lo[~bad])
            done_hi.append(pending_hi[~bad])
            done_mass.append(fine[~bad])
            if not np.any(bad):
                break
            split_lo, split_hi = pending_lo[bad], pending_hi[bad]
            middle = 0.5 * (split_lo + split_hi)
            pending_lo = np.concatenate([split_lo, middle])
            pending_hi = np.concatenate([middle, split_hi])
            if sum(a.size for a in done_lo) + pending_lo.size > MAX_PANELS:
                raise posteriorlip.errors.NonConvergent(
                    f"panel refinement exceeded {MAX_PANELS} panels", round_index + 1
                )
        else:
            raise posteriorlip.errors.NonConvergent("panel refinement did not settle", MAX_ROUNDS)

        order = np.argsort(np.concatenate(done_lo))
        starts = np.concatenate(done_lo)[order]
        ends = np.concatenate(done_hi)[order]
        mass = np.concatenate(done_mass)[order]
        total = float(np.sum(mass))
        if not (math.isfinite(total) and total > 0):
            raise posteriorlip.errors.Degenerate(f"density integrates to {total} on {self.window}")
        self._edges: FloatArray = np.append(starts, ends[-1])
        self._mass: FloatArray = mass / total
        self._cum: FloatArray = np.concatenate([[0.0], np.cumsum(self._mass)])
        self._suffix: FloatArray = np.concatenate([np.cumsum(self._mass[::-1])[::-1], [0.0]])
        self.log_normalizer: float = math.log(total) + shift
        nodes, weights = _gl_panels(starts, ends, PANEL_ORDER)
        self._nodes: FloatArray = nodes.ravel()
        self._node_weights: FloatArray = (weights * shifted(nodes)).ravel() / total
        logger.debug(
            "normalised on %d panels, log normalizer %.10g", self._mass.size, self.log_normalizer
        )

    # density access -------------------------------------------------------

    @property
    def normalizer(self) -> float:
        """Total mass of the unnormalised density (may overflow to inf)."""
        return math.exp(self.log_normalizer) if self.log_normalizer < 709.0 else math.inf

    @property
    def edges(self) -> FloatArray:
        """Panel boundaries over the window."""
        return self._edges

    @property
    def nodes(self) -> FloatArray:
        """Quadrature nodes over the window."""
        return self._nodes

    @property
    def node_weights(self) -> FloatArray:
        """Probability weights at `nodes` (they sum to one)."""
        return self._node_weights

    def logpdf(self, theta: npt.ArrayLike) -> FloatArray:
        """Normalised log density."""
        return self._raw_log(np.asarray(theta, dtype=np.float64)) - self.log_normalizer

    def pdf(self, theta: npt.ArrayLike) -> FloatArray:
        """Normalised density."""
        return np.exp(self.logpdf(theta))

    def _partial(self, lo: FloatArray, hi: FloatArray) -> FloatArray:
        nodes, weights = _gl_panels(lo, hi, PANEL_ORDER)
        return np.sum(weights * self.pdf(nodes), axis=1)

    def _panel_of(self, theta: FloatArray) -> npt.NDArray[np.intp]:
        last = self._mass.size - 1
        return np.clip(np.searchsorted(self._edges, theta, side="right") - 1, 0, last)

    def cdf(self, theta: npt.ArrayLike) -> FloatArray:
        """
        Cumulative distribution function.

        Parameters
        ----------
        theta : ArrayLike
            Evaluation points.

        Returns
        -------
        FloatArray
            F(θ) in [0, 1], with the shape of ``theta``.
        """
        points = np.asarray(theta, dtype=np.float64)
        flat = np.atleast_1d(points).ravel()
        index = self._panel_of(flat)
        inner = np.clip(flat, self._edges[0], self._edges[-1])
        values = self._cum[index] + self._partial(self._edges[index], inner)
        values[flat <= self._edges[0]] = 0.0
        values[flat >= self._edges[-1]] = 1.0
        return np.clip(values, 0.0, 1.0).reshape(points.shape)

    def sf(self, theta: npt.ArrayLike) -> FloatArray:
        """Survival function 1 - F, accumulated from the right end."""
        points = np.asarray(theta, dtype=np.float64)
        flat = np.atleast_1d(points).ravel()
        index = self._panel_of(flat)
        inner = np.clip(flat, self._edges[0], self._edges[-1])
        values = self._suffix[index + 1] + self._partial(inner, self._edges[index + 1])
        values[flat <= self._edges[0]] = 1.0
        values[flat >= self._edges[-1]] = 0.0
        return np.clip(values, 0.0, 1.0).reshape(points.shape)

    def quantile(self, u: npt.ArrayLike) -> FloatArray:
        """
        Generalised inverse of the CDF.

        Parameters
        ----------
        u : ArrayLike
            Levels in (0, 1).

        Returns
        -------
        FloatArray
            inf{θ : F(θ) ≥ u}, with the shape of ``u``.
        """
        levels = np.asarray(u, dtype=np.float64)
        flat = np.clip(np.atleast_1d(levels).ravel(), 0.0, 1.0)
        last = self._mass.size - 1
        index = np.clip(np.searchsorted(self._cum, flat, side="right") - 1, 0, last)
        base = self._edges[index]
        lo, hi = base.copy(), self._edges[index + 1].copy()
        share = (flat - self._cum[index]) / np.maximum(self._mass[index], 1e-300)
        theta = lo + np.clip(share, 0.0, 1.0) * (hi - lo)
        offset = flat - self._cum[index]
        for _ in range(NEWTON_ITERATIONS):
            residual = self._partial(base, theta) - offset
            lo = np.where(residual < 0, theta, lo)
            hi = np.where(residual > 0, theta, hi)
            density = self.pdf(theta)
            with np.errstate(divide="ignore", invalid="ignore"):
                newton = theta - residual / density
            accept = np.isfinite(newton) & (newton > lo) & (newton < hi)
            updated = np.where(accept, newton, 0.5 * (lo + hi))
            settled = (np.abs(residual) <= 1e-14) | (hi - lo <= 1e-14 * np.maximum(1.0, np.abs(theta)))
            theta = np.where(residual == 0, theta, updated)
            if np.all(settled):
                break
        else:
            logger.debug("quantile iteration stopped after %d steps", NEWTON_ITERATIONS)
        theta[flat <= 0.0] = self._edges[0]
        theta[flat >= 1.0] = self._edges[-1]
        return theta.reshape(levels.shape)

    def gl_quantiles(self) -> tuple[FloatArray, FloatArray, FloatArray]:
        """
        Quantiles at the fixed Gauss-Legendre levels used by transport.

        Returns
        -------
        tuple[FloatArray, FloatArray, FloatArray]
            Levels u in (1e-9, 1 - 1e-9), their weights and F⁻¹(u). The
            quantiles are computed once and returned as a read-only array.
        """
        levels, weights = quantile_rule()
        if self._gl_quantiles is None:
            quantiles = self.quantile(levels)
            quantiles.flags.writeable = False
            self._gl_quantiles = quantiles
        return levels, weights, self._gl_quantiles

    def sample(self, n: int, seed: SeedLike = None) -> FloatArray:
        """
        Draw ``n`` values by the inverse-CDF transform.

        Parameters
        ----------
        n : int
            Number of draws (at least one).
        seed : SeedLike, optional
            Seed or generator; equal seeds give bit-identical draws.

        Returns
        -------
        FloatArray
            Samples of shape ``(n,)``.
        """
        if n < 1:
            raise posteriorlip.errors.InvalidInput(f"sample size must be positive, got {n}")
        rng = make_rng(seed)
        draws = rng.random(n)
        return self.quantile(np.clip(draws, 1e-16, 1.0 - 1e-16))

    def median(self) -> float:
        """Quantile at one half."""
        return float(self.quantile(0.5))

    def expect(self, fn: collections.abc.Callable[[FloatArray], npt.ArrayLike]) -> float:
        """
        Expectation of a vectorised function.

        Raises
        ------
        posteriorlip.errors.NonConvergent
            If the panel sum is not finite.
        """
        values = np.asarray(fn(self._nodes), dtype=np.float64)
        result = float(np.sum(self._node_weights * values))
        if not math.isfinite(result):
            raise posteriorlip.errors.NonConvergent("expectation is not finite")
        return result

    def mean(self) -> float:
        """First moment."""
        return self.expect(lambda theta: theta)

    def variance_vec(self) -> tuple[float, float]:
        """
        Variance and mean.

        Returns
        -------
        tuple[float, float]
            ``(variance, mean)``.
        """
        centre = self.mean()
        return self.expect(lambda theta: (theta - centre) ** 2), centre

    def antiderivative(
        self,
        fn: collections.abc.Callable[[FloatArray], npt.ArrayLike],
        anchor: float,
    ) -> collections.abc.Callable[[npt.ArrayLike], FloatArray]:
        """
        Signed primitive θ ↦ ∫_anchor^θ fn over the panel structure.

        Points left of the anchor are accumulated from the right, points right
        of it from the left, so no large partial sums cancel.

        Parameters
        ----------
        fn : Callable[[FloatArray], ArrayLike]
            Vectorised integrand, smooth inside panels.
        anchor : float
            Base point inside the window.

        Returns
        -------
        Callable[[ArrayLike], FloatArray]
            The primitive, vectorised.
        """
        edges = np.unique(np.append(self._edges, anchor))
        nodes, weights = _gl_panels(edges[:-1], edges[1:], PANEL_ORDER)
        pieces = np.sum(weights * np.asarray(fn(nodes), dtype=np.float64), axis=1)
        pivot = int(np.searchsorted(edges, anchor))
        running = np.zeros(edges.size)
        running[pivot + 1 :] = np.cumsum(pieces[pivot:])
        if pivot > 0:
            running[:pivot] = -np.cumsum(pieces[:pivot][::-1])[::-1]

        def primitive(theta: npt.ArrayLike) -> FloatArray:
            points = np.asarray(theta, dtype=np.float64)
            flat = np.clip(np.atleast_1d(points).ravel(), edges[0], edges[-1])
            index = np.clip(np.searchsorted(edges, flat, side="right") - 1, 0, edges.size - 2)
            right_side = flat >= anchor
            out = np.empty_like(flat)
            if np.any(right_side):
                k = index[right_side]
                n_, w_ = _gl_panels(edges[k], flat[right_side], PANEL_ORDER)
                out[right_side] = running[k] + np.sum(w_ * np.asarray(fn(n_), dtype=np.float64), axis=1)
            if np.any(~right_side):
                k = index[~right_side]
                n_, w_ = _gl_panels(flat[~right_side], edges[k + 1], PANEL_ORDER)
                out[~right_side] = running[k + 1] - np.sum(
                    w_ * np.asarray(fn(n_), dtype=np.float64), axis=1
                )
            return out.reshape(points.shape)

        return primitive

    # derived laws ---------------------------------------------------------

    @classmethod
    def mixture(
        cls,
        components: collections.abc.Sequence["Distribution1D"],
        weights: npt.ArrayLike,
    ) -> "Distribution1D":
        """
        Convex combination Σ w_j μ_j.

        Parameters
        ----------
        components : Sequence[Distribution1D]
            Mixture components.
        weights : ArrayLike
            Nonnegative weights summing to one.

        Returns
        -------
        Distribution1D
            The mixture, integrated over the hull of the component windows.
        """
        mix = np.asarray(weights, dtype=np.float64)
        if mix.size != len(components) or np.any(mix < 0) or abs(float(mix.sum()) - 1.0) > 1e-12:
            raise posteriorlip.errors.InvalidInput("mixture weights must be nonnegative and sum to one")
        kept = [(float(w), c) for w, c in zip(mix, components, strict=True) if w > 0]
        log_weights = np.log([w for w, _ in kept])

        def log_density(theta: FloatArray) -> FloatArray:
            stacked = np.stack([lw + c.logpdf(theta) for lw, (_, c) in zip(log_weights, kept, strict=True)])
            with np.errstate(all="ignore"):
                return scipy.special.logsumexp(stacked, axis=0)

        support = Interval(
            min(c.support.lo for _, c in kept), max(c.support.hi for _, c in kept)
        )
        window = Interval(min(c.window.lo for _, c in kept), max(c.window.hi for _, c in kept))
        return cls(support, log_density=log_density, window=window)

    def scaled(self, factor: float) -> "Distribution1D":
        """Push-forward under θ ↦ factor·θ."""
        if factor == 0:
            raise posteriorlip.errors.InvalidInput("dilation factor must be nonzero")
        log_jacobian = math.log(abs(factor))

        def log_density(theta: FloatArray) -> FloatArray:
            return self.logpdf(theta / factor) - log_jacobian

        ends = sorted((self.support.lo * factor, self.support.hi * factor))
        window = sorted((self.window.lo * factor, self.window.hi * factor))
        return Distribution1D(
            Interval(ends[0], ends[1]), log_density=log_density, window=Interval(window[0], window[1])
        )

    @typing.override
    def __repr__(self) -> str:
        return f"Distribution1D(support={self.support}, window={self.window}, panels={self._mass.size})"


def quantile_rule() -> tuple[FloatArray, FloatArray]:
    """Gauss-Legendre levels on (1e-9, 1 - 1e-9) and weights, 4096 nodes."""
    nodes, weights = posteriorlip.numerics.gauss_legendre(QUANTILE_NODES)
    half = 0.5 - QUANTILE_CLIP
    return 0.5 + half * nodes, half * weights


def normal(mean: float, var: float, support: Interval = REAL_LINE) -> Distribution1D:
    """Gaussian law N(mean, var), optionally truncated to ``support``."""
    if not var > 0:
        raise posteriorlip.errors.InvalidInput(f"variance must be positive, got {var}")
    return Distribution1D(support, log_density=lambda t: -0.5 * (t - mean) ** 2 / var)


def uniform(lo: float, hi: float) -> Distribution1D:
    """Uniform law on (lo, hi)."""
    return Distribution1D(Interval(lo, hi), log_density=lambda t: np.zeros_like(t))


def exponential(rate: float, lo: float = 0.0, hi: float = math.inf) -> Distribution1D:
    """Exponential law with ``rate``, truncated to (lo, hi)."""
    if not rate > 0:
        raise posteriorlip.errors.InvalidInput(f"rate must be positive, got {rate}")
    return Distribution1D(Interval(lo, hi), log_density=lambda t: -rate * t)


class EmpiricalMeasure:
    """
    Finitely many weighted atoms on the real line.

    Parameters
    ----------
    locations : ArrayLike
        Atom positions (sorted on construction).
    weights : ArrayLike | None, optional
        Positive weights summing to one; uniform when omitted.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If weights are not positive or do not sum to one within 1e-12.
    """

    __slots__: tuple[str, ...] = ("locations", "weights")

    def __init__(self, locations: npt.ArrayLike, weights: npt.ArrayLike | None = None) -> None:
        points = np.atleast_1d(np.asarray(locations, dtype=np.float64)).ravel()
        if points.size == 0:
            raise posteriorlip.errors.InvalidInput("an empirical measure needs at least one atom")
        mass = (
            np.full(points.size, 1.0 / points.size)
            if weights is None
            else np.atleast_1d(np.asarray(weights, dtype=np.float64)).ravel()
        )
        if mass.shape != points.shape or np.any(mass <= 0):
            raise posteriorlip.errors.InvalidInput("weights must be positive, one per atom")
        if abs(float(mass.sum()) - 1.0) > 1e-12:
            raise posteriorlip.errors.InvalidInput(f"weights sum to {mass.sum()!r}, not 1")
        order = np.argsort(points, kind="stable")
        self.locations: FloatArray = points[order]
        self.weights: FloatArray = mass[order]

    @classmethod
    def from_samples(cls, values: npt.ArrayLike) -> "EmpiricalMeasure":
        """Uniformly weighted atoms at ``values``."""
        return cls(values)

    def quantile(self, u: npt.ArrayLike) -> FloatArray:
        """Left-continuous step quantile inf{y : F(y) ≥ u}."""
        levels = np.asarray(u, dtype=np.float64)
        cumulative = np.cumsum(self.weights)
        index = np.clip(np.searchsorted(cumulative, levels, side="left"), 0, self.locations.size - 1)
        return self.locations[index]

    def cdf(self, theta: npt.ArrayLike) -> FloatArray:
        """Right-continuous step CDF."""
        cumulative = np.concatenate([[0.0], np.cumsum(self.weights)])
        index = np.searchsorted(self.locations, np.asarray(theta, dtype=np.float64), side="right")
        return np.minimum(cumulative[index], 1.0)

    def mean(self) -> float:
        """First moment."""
        return float(np.dot(self.weights, self.locations))

    @typing.override
    def __repr__(self) -> str:
        return f"EmpiricalMeasure(atoms={self.locations.size})"


class GaussianVec:
    """
    Gaussian law N(mean, covariance) on ℝᵈ.

    Raises
    ------
    posteriorlip.errors.InvalidInput
        If the covariance is not symmetric within 1e-12 or has an eigenvalue
        below -1e-12.
    """

    __slots__: tuple[str, ...] = ("covariance", "mean")

    def __init__(self, mean: npt.ArrayLike, covariance: npt.ArrayLike) -> None:
        centre = np.atleast_1d(np.asarray(mean, dtype=np.float64)).ravel()
        spread = np.atleast_2d(np.asarray(covariance, dtype=np.float64))
        if spread.shape != (centre.size, centre.size):
            raise posteriorlip.errors.InvalidInput(
                f"covariance shape {spread.shape} does not match mean of size {centre.size}"
            )
        if np.max(np.abs(spread - spread.T)) > 1e-12:
            raise posteriorlip.errors.InvalidInput("covariance is not symmetric")
        if float(np.min(np.linalg.eigvalsh(spread))) < -1e-12:
            raise posteriorlip.errors.InvalidInput("covariance is not positive semidefinite")
        self.mean: FloatArray = centre
        self.covariance: FloatArray = spread

    @property
    def dim(self) -> int:
        """Dimension d."""
        return int(self.mean.size)

    @typing.override
    def __repr__(self) -> str:
        return f"GaussianVec(dim={self.dim})"


class TensorGrid:
    """
    Product quadrature grid on a box.

    Attributes
    ----------
    axes : list[FloatArray]
        Node coordinates per axis.
    weights : list[FloatArray]
        Quadrature weights per axis.
    rule : str
        ``"midpoint"`` or ``"trapezoid"``.
    """

    __slots__: tuple[str, ...] = ("axes", "rule", "weights")

    def __init__(self, axes: list[FloatArray], weights: list[FloatArray], rule: str) -> None:
        self.axes: list[FloatArray] = axes
        self.weights: list[FloatArray] = weights
        self.rule: str = rule

    @classmethod
    def midpoint(cls, resolution: int, box: collections.abc.Sequence[tuple[float, float]]) -> "TensorGrid":
        """Cell-centred nodes with equal weights."""
        axes: list[FloatArray] = []
        weights: list[FloatArray] = []
        for lo, hi in box:
            step = (hi - lo) / resolution
            axes.append(lo + (np.arange(resolution) + 0.5) * step)
            weights.append(np.full(resolution, step))
        return cls(axes, weights, "midpoint")

    @classmethod
    def trapezoid(cls, resolution: int, box: collections.abc.Sequence[tuple[float, float]]) -> "TensorGrid":
        """Endpoint-inclusive nodes with trapezoid weights."""
        axes: list[FloatArray] = []
        weights: list[FloatArray] = []
        for lo, hi in box:
            nodes = np.linspace(lo, hi, resolution)
            step = (hi - lo) / (resolution - 1)
            rule = np.full(resolution, step)
            rule[[0, -1]] *= 0.5
            axes.append(nodes)
            weights.append(rule)
        return cls(axes, weights, "trapezoid")

    @property
    def shape(self) -> tuple[int, ...]:
        """Number of nodes per axis."""
        return tuple(a.size for a in self.axes)

    def points(self) -> FloatArray:
        """All nodes, shape (prod(shape), d), first axis slowest."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def cell_weights(self) -> FloatArray:
        """Product weights matching `points`."""
        mesh = np.meshgrid(*self.weights, indexing="ij")
        product = np.ones_like(mesh[0])
        for m in mesh:
            product = product * m
        return product.ravel()


class GridMeasure:
    """
    Weighted point cloud in ℝᵈ.

    Weights are stored as given; transport routines check that they carry unit
    mass.

    Attributes
    ----------
    points : FloatArray
        Atom coordinates, shape (k, d).
    weights : FloatArray
        Nonnegative masses, shape (k,).
    shape : tuple[int, ...] | None
        Tensor shape the atoms came from, if any.
    """

    __slots__: tuple[str, ...] = ("points", "shape", "weights")

    def __init__(
        self,
        points: npt.ArrayLike,
        weights: npt.ArrayLike,
        shape: tuple[int, ...] | None = None,
    ) -> None:
        coords = np.asarray(points, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        mass = np.asarray(weights, dtype=np.float64).ravel()
        if coords.shape[0] != mass.size or np.any(mass < 0):
            raise posteriorlip.errors.InvalidInput("grid weights must be nonnegative, one per point")
        self.points: FloatArray = coords
        self.weights: FloatArray = mass
        self.shape: tuple[int, ...] | None = shape

    @property
    def dim(self) -> int:
        """Dimension d of the ambient space."""
        return int(self.points.shape[1])

    def support_only(self) -> "GridMeasure":
        """Copy without zero-mass atoms."""
        keep = self.weights > 0
        return GridMeasure(self.points[keep], self.weights[keep])

    def marginal_mean(self) -> FloatArray:
        """Mean vector."""
        return self.weights @ self.points / float(self.weights.sum())

    @typing.override
    def __repr__(self) -> str:
        return f"GridMeasure(atoms={self.weights.size}, dim={self.dim})"
