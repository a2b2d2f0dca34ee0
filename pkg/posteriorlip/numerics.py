"""
🧮 Numerical Kernels.
========================

Quadrature, finite differences, box maximisation and the spectral oracle for
one-dimensional Poincaré constants. Every other module builds on these.

✨ Features
--------------
- ∫ Adaptive Gauss-Kronrod (QUADPACK via `scipy.integrate.quad`) on any
  interval; unbounded ends are compactified before integration.
- ∂ Central finite differences for scalar or array-valued maps.
- 📈 Grid-then-refine maximisation over compact boxes (esssup surrogate).
- 🎵 Weighted Neumann spectral gap on a finite-volume grid.

📦 Functions
--------------
- `integrate`: Adaptive quadrature with error control.
- `gradient_fd`: Central-difference gradient.
- `maximize_on_box`: Grid maximum plus local refinement.
- `poincare_constant_1d_numeric`: Oracle C = λ₁^{-1/2}.
- `gauss_legendre`: Cached Gauss-Legendre rule on [-1, 1].
- `scan_grid`: Interior points spread over a (possibly unbounded) interval.
"""

import collections.abc
import functools
import logging
import math
import typing

import numpy as np
import numpy.typing as npt
import scipy.integrate
import scipy.linalg
import scipy.optimize
import scipy.special

import posteriorlip.abc.objects
import posteriorlip.errors

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
ScalarFunction = collections.abc.Callable[[float], float]

DEFAULT_QUADRATURE = posteriorlip.abc.objects.QuadratureSpec()
ORACLE_TRUNCATION = 1e-14
ORACLE_SCAN_POINTS = 8193


class BoxMaximum(typing.NamedTuple):
    """Maximum of a function over a box and where it was found."""

    value: float
    argmax: FloatArray
    refined: bool


@functools.cache
def gauss_legendre(order: int) -> tuple[FloatArray, FloatArray]:
    """
    Gauss-Legendre nodes and weights on [-1, 1].

    Parameters
    ----------
    order : int
        Number of nodes.

    Returns
    -------
    tuple[FloatArray, FloatArray]
        Read-only node and weight arrays.
    """
    nodes, weights = scipy.special.roots_legendre(order)
    nodes = np.asarray(nodes, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _compactify(
    domain: posteriorlip.abc.objects.Interval,
) -> tuple[
    float,
    float,
    collections.abc.Callable[[float], tuple[float, float]],
    collections.abc.Callable[[float], float],
]:
    """Map an interval to a bounded t-range; returns (a, b, t ↦ (θ, J), θ ↦ t)."""
    lo, hi = domain.lo, domain.hi
    if math.isfinite(lo) and math.isfinite(hi):
        return lo, hi, lambda t: (t, 1.0), lambda theta: theta
    if not math.isfinite(lo) and not math.isfinite(hi):

        def forward(t: float) -> tuple[float, float]:
            denom = 1.0 - t * t
            return t / denom, (1.0 + t * t) / (denom * denom)

        def backward(theta: float) -> float:
            if theta == 0.0:
                return 0.0
            return (-1.0 + math.sqrt(1.0 + 4.0 * theta * theta)) / (2.0 * theta)

        return -1.0, 1.0, forward, backward
    if math.isfinite(lo):

        def forward(t: float) -> tuple[float, float]:
            denom = 1.0 - t
            return lo + t / denom, 1.0 / (denom * denom)

        def backward(theta: float) -> float:
            s = theta - lo
            return s / (1.0 + s)

        return 0.0, 1.0, forward, backward

    def forward(t: float) -> tuple[float, float]:
        denom = 1.0 - t
        return hi - t / denom, 1.0 / (denom * denom)

    def backward(theta: float) -> float:
        s = hi - theta
        return s / (1.0 + s)

    return 0.0, 1.0, forward, backward


def integrate(
    f: ScalarFunction,
    domain: posteriorlip.abc.objects.Interval,
    spec: posteriorlip.abc.objects.QuadratureSpec = DEFAULT_QUADRATURE,
    points: collections.abc.Sequence[float] | None = None,
) -> posteriorlip.abc.objects.QuadratureResult:
    """
    Integrate ``f`` over ``domain`` with adaptive Gauss-Kronrod subdivision.

    Unbounded domains are compactified first: θ = t/(1-t²) on (-1, 1) for the
    real line, θ = lo + t/(1-t) on (0, 1) for a right half-line, and the mirror
    image for a left half-line.

    Parameters
    ----------
    f : Callable[[float], float]
        Integrand, finite on the interior of ``domain``.
    domain : Interval
        Integration range.
    spec : QuadratureSpec, optional
        Tolerances and subdivision budget.
    points : Sequence[float] | None, optional
        Interior breakpoints (kinks, discontinuities) in θ coordinates.

    Returns
    -------
    QuadratureResult
        Value, error estimate and number of subintervals used.

    Raises
    ------
    posteriorlip.errors.NonFinite
        If ``f`` returns NaN or an infinity at a quadrature node.
    posteriorlip.errors.NonConvergent
        If the subdivision budget is exhausted or the integral looks divergent.
    """
    a, b, forward, backward = _compactify(domain)

    def integrand(t: float) -> float:
        theta, jacobian = forward(t)
        value = float(f(theta))
        if not math.isfinite(value):
            raise posteriorlip.errors.NonFinite(
                f"integrand evaluated to {value} at θ={theta:.6g}", at=theta
            )
        return value * jacobian

    mapped_points: list[float] | None = None
    if points:
        mapped_points = sorted(
            t for t in (backward(p) for p in points if domain.contains(p)) if a < t < b
        )
        mapped_points = mapped_points or None

    result = scipy.integrate.quad(
        integrand,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        points=mapped_points,
        full_output=1,
    )
    value = float(result[0])
    error = float(result[1])
    info = typing.cast("dict[str, typing.Any]", result[2])
    subdivisions = int(info.get("last", 0))
    if not math.isfinite(value):
        raise posteriorlip.errors.NonFinite(f"integral over {domain} is {value}")
    if len(result) > 3:
        message = str(result[3])
        target = max(spec.abs_tol, spec.rel_tol * abs(value))
        if subdivisions >= spec.max_subdivisions or "divergent" in message:
            raise posteriorlip.errors.NonConvergent(
                f"quadrature over ({domain.lo}, {domain.hi}) failed: {message.strip()}",
                iterations=subdivisions,
            )
        if error > 1e3 * target:
            raise posteriorlip.errors.NonConvergent(
                f"quadrature error {error:.3g} far above target {target:.3g}",
                iterations=subdivisions,
            )
        logger.warning("quadrature flagged but within tolerance: %s", message.strip())
    return posteriorlip.abc.objects.QuadratureResult(
        value=value, error=error, subdivisions=subdivisions
    )


def gradient_fd(
    f: collections.abc.Callable[[FloatArray], typing.Any],
    x: npt.ArrayLike,
    step: float | npt.ArrayLike | None = None,
) -> FloatArray:
    """
    Central-difference gradient of ``f`` at ``x``.

    Parameters
    ----------
    f : Callable[[FloatArray], Any]
        Function of a point of shape ``(n,)``; may return a scalar or an array.
    x : ArrayLike
        Evaluation point (scalars are treated as ``n = 1``).
    step : float | ArrayLike | None, optional
        Step per coordinate; defaults to ``1e-5 * max(1, |x_i|)``.

    Returns
    -------
    FloatArray
        Array of shape ``(n,) + shape(f(x))``.

    Raises
    ------
    posteriorlip.errors.NonFinite
        If any difference quotient is NaN or infinite.
    """
    point = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if step is None:
        steps = 1e-5 * np.maximum(1.0, np.abs(point))
    else:
        steps = np.broadcast_to(np.asarray(step, dtype=np.float64), point.shape)
    rows: list[FloatArray] = []
    for index in range(point.size):
        shift = np.zeros_like(point)
        shift[index] = steps[index]
        upper = np.asarray(f(point + shift), dtype=np.float64)
        lower = np.asarray(f(point - shift), dtype=np.float64)
        rows.append((upper - lower) / (2.0 * steps[index]))
    gradient = np.stack(rows)
    if not np.all(np.isfinite(gradient)):
        raise posteriorlip.errors.NonFinite(f"finite-difference gradient at {point} is not finite")
    return gradient


def maximize_on_box(
    fn: collections.abc.Callable[[FloatArray], float],
    box: collections.abc.Sequence[tuple[float, float]],
    grid: int = 256,
    refine: bool = True,
) -> BoxMaximum:
    """
    Maximise ``fn`` over a compact box: tensor grid, then local refinement.

    Parameters
    ----------
    fn : Callable[[FloatArray], float]
        Objective taking a point of shape ``(len(box),)``.
    box : Sequence[tuple[float, float]]
        Closed (lo, hi) range per coordinate.
    grid : int, optional
        Points per axis.
    refine : bool, optional
        Whether to polish the grid argmax (bounded Brent in 1D, bounded
        Nelder-Mead otherwise).

    Returns
    -------
    BoxMaximum
        Best value, its location and whether refinement improved it.
    """
    axes = [np.linspace(lo, hi, grid) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    candidates = np.stack([m.ravel() for m in mesh], axis=1)
    values = np.array([fn(point) for point in candidates], dtype=np.float64)
    best = int(np.argmax(values))
    best_value = float(values[best])
    best_point = candidates[best].copy()
    logger.debug("grid max %.6g at %s over %d points", best_value, best_point, len(values))
    if not refine or grid < 3:
        return BoxMaximum(best_value, best_point, False)

    spacing = [(hi - lo) / (grid - 1) for lo, hi in box]
    local = [
        (max(lo, c - s), min(hi, c + s))
        for (lo, hi), c, s in zip(box, best_point, spacing, strict=True)
    ]
    if len(box) == 1:
        lo, hi = local[0]
        found = scipy.optimize.minimize_scalar(
            lambda t: -fn(np.array([t])),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-10 * max(1.0, abs(hi - lo))},
        )
        candidate_point = np.array([float(found.x)])
        candidate_value = -float(found.fun)
    else:
        found = scipy.optimize.minimize(
            lambda p: -fn(np.asarray(p, dtype=np.float64)),
            best_point,
            method="Nelder-Mead",
            bounds=local,
            options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 400},
        )
        candidate_point = np.asarray(found.x, dtype=np.float64)
        candidate_value = -float(found.fun)
    if math.isfinite(candidate_value) and candidate_value > best_value:
        return BoxMaximum(candidate_value, candidate_point, True)
    return BoxMaximum(best_value, best_point, False)


def scan_grid(domain: posteriorlip.abc.objects.Interval, size: int) -> FloatArray:
    """
    Interior points covering ``domain``, spread by the compactifying maps.

    Parameters
    ----------
    domain : Interval
        Possibly unbounded interval.
    size : int
        Number of points.

    Returns
    -------
    FloatArray
        Increasing interior points.
    """
    lo, hi = domain.lo, domain.hi
    if domain.bounded:
        return np.linspace(lo, hi, size + 2)[1:-1]
    if not math.isfinite(lo) and not math.isfinite(hi):
        t = np.linspace(-1.0, 1.0, size + 2)[1:-1]
        return t / (1.0 - t * t)
    t = np.linspace(0.0, 1.0, size + 2)[1:-1]
    s = t / (1.0 - t)
    if math.isfinite(lo):
        return lo + s
    return (hi - s)[::-1]


def _oracle_window(
    density: collections.abc.Callable[[FloatArray], FloatArray],
    domain: posteriorlip.abc.objects.Interval,
) -> tuple[float, float]:
    """Truncate an unbounded domain where the weight drops below its max·1e-14."""
    if domain.bounded:
        return domain.lo, domain.hi
    theta = scan_grid(domain, ORACLE_SCAN_POINTS)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        weight = np.nan_to_num(np.asarray(density(theta), dtype=np.float64), nan=0.0)
    peak = float(np.max(weight))
    if not peak > 0:
        raise posteriorlip.errors.Degenerate("density vanishes on the whole scan grid")
    kept = np.flatnonzero(weight >= ORACLE_TRUNCATION * peak)
    first, last = int(kept[0]), int(kept[-1])
    lo = domain.lo if first == 0 and math.isfinite(domain.lo) else theta[max(first - 1, 0)]
    hi = (
        domain.hi
        if last == theta.size - 1 and math.isfinite(domain.hi)
        else theta[min(last + 1, theta.size - 1)]
    )
    return float(lo), float(hi)


def poincare_constant_1d_numeric(
    density: collections.abc.Callable[[FloatArray], FloatArray],
    domain: posteriorlip.abc.objects.Interval,
    grid_size: int = 2000,
) -> float:
    """
    Numerical Poincaré constant of the weight ``density`` on ``domain``.

    Discretises -(w u')' = λ w u with Neumann conditions by cell-centred finite
    volumes and returns C = λ₁^{-1/2}, λ₁ being the first nonzero eigenvalue.
    Unbounded domains are truncated where the weight falls below 1e-14 of its
    maximum.

    Parameters
    ----------
    density : Callable[[FloatArray], FloatArray]
        Vectorised weight, positive on the interior of ``domain``.
    domain : Interval
        Support of the weight.
    grid_size : int, optional
        Number of finite-volume cells (at least 16).

    Returns
    -------
    float
        The oracle constant C.

    Raises
    ------
    posteriorlip.errors.Degenerate
        If the weight underflows on more than half of the cells.
    posteriorlip.errors.NumericalFailure
        If the tridiagonal eigen-solver fails or returns a non-positive gap.
    """
    if grid_size < 16:
        raise posteriorlip.errors.InvalidInput("grid_size must be at least 16")
    lo, hi = _oracle_window(density, domain)
    h = (hi - lo) / grid_size
    centres = lo + (np.arange(grid_size) + 0.5) * h
    faces = lo + np.arange(1, grid_size) * h
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        w_centres = np.nan_to_num(np.asarray(density(centres), dtype=np.float64), nan=0.0)
        w_faces = np.nan_to_num(np.asarray(density(faces), dtype=np.float64), nan=0.0)
    positive = w_centres > 0
    if np.count_nonzero(positive) * 2 < grid_size:
        raise posteriorlip.errors.Degenerate(
            f"density underflows on {grid_size - np.count_nonzero(positive)} of {grid_size} nodes"
        )
    # Largest run of positive cells; faces inside it must be positive too.
    linked = positive[1:] & positive[:-1] & (w_faces > 0)
    runs = np.split(np.arange(grid_size), np.flatnonzero(~linked) + 1)
    block = max((run for run in runs if positive[run[0]]), key=len)
    start, stop = int(block[0]), int(block[-1]) + 1
    if stop - start < 3:
        raise posteriorlip.errors.Degenerate("no connected block of positive cells")
    scale = float(np.max(w_centres[start:stop]))
    w = w_centres[start:stop] / scale
    flux = w_faces[start : stop - 1] / scale

    diagonal = np.zeros_like(w)
    diagonal[:-1] += flux
    diagonal[1:] += flux
    diagonal /= h * h * w
    off = -flux / (h * h * np.sqrt(w[:-1] * w[1:]))
    try:
        eigenvalues = scipy.linalg.eigh_tridiagonal(
            diagonal, off, eigvals_only=True, select="i", select_range=(0, 1)
        )
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise posteriorlip.errors.NumericalFailure(f"tridiagonal eigen-solve failed: {exc}") from exc
    gap = float(eigenvalues[1])
    if not (math.isfinite(gap) and gap > 0):
        raise posteriorlip.errors.NumericalFailure(f"non-positive spectral gap {gap}")
    logger.debug("oracle on (%.6g, %.6g) with %d cells: λ₁=%.10g", lo, hi, stop - start, gap)
    return 1.0 / math.sqrt(gap)
