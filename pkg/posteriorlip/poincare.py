"""
🎵 Poincaré Constant Bounds.
===============================

A catalogue of upper bounds on the Poincaré constant C_q[μ], each returned as
a tagged `PoincareBound` that can be compared with the spectral oracle of
`posteriorlip.numerics`.

📦 Functions
--------------
- `bound_payne_weinberger`: Lebesgue measure on a convex domain, diam/π.
- `bound_log_concave_diam`: Log-concave measure on a convex domain, diam/π.
- `bound_bakry_emery`: Hess V ≥ α gives 1/√α.
- `bound_bobkov`: Log-concave measures, 12√3 times the standard deviation.
- `bound_holley_stroock`: Bounded perturbations, factor exp(osc/2).
- `bound_muckenhoupt_1d`: One-dimensional weights through D⁺ and D⁻.
- `bound_francesi`: Bounds for e^{-nV-U} that decay like n^{-1/2}.
- `bound_oracle`: The numerical constant itself, tagged as such.
- `ball_sups`: Grid estimates of the suprema the scaling bounds need.
"""

import collections.abc
import logging
import math

import numpy as np
import numpy.typing as npt
import scipy.optimize

import posteriorlip.abc.objects
import posteriorlip.errors
import posteriorlip.measures
import posteriorlip.numerics

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
Potential = collections.abc.Callable[[FloatArray], FloatArray]
PoincareBound = posteriorlip.abc.objects.PoincareBound

BOBKOV_CONSTANT = 12.0 * math.sqrt(3.0)
MUCKENHOUPT_GRID = 512


def _diameter_bound(diam: float, criterion: str) -> PoincareBound:
    if not (math.isfinite(diam) and diam > 0):
        raise posteriorlip.errors.InvalidInput(f"diameter must be finite and positive, got {diam}")
    return PoincareBound(value=diam / math.pi, criterion=criterion, inputs_digest=f"diam={diam:.12g}")


def bound_payne_weinberger(diam: float) -> PoincareBound:
    """
    Payne-Weinberger bound diam/π for Lebesgue measure on a convex domain.

    Examples
    --------
    >>> bound_payne_weinberger(math.pi).value
    1.0
    """
    return _diameter_bound(diam, "payne_weinberger")


def bound_log_concave_diam(diam: float) -> PoincareBound:
    """Bound diam/π for a log-concave measure on a bounded convex domain."""
    return _diameter_bound(diam, "log_concave_diam")


def bound_bakry_emery(alpha: float) -> PoincareBound:
    """
    Bakry-Émery bound 1/√α for μ = e^{-V} with Hess V ≥ α.

    Raises
    ------
    posteriorlip.errors.InvalidCurvature
        If ``alpha`` is not positive.
    """
    if not alpha > 0:
        raise posteriorlip.errors.InvalidCurvature(alpha)
    return PoincareBound(
        value=1.0 / math.sqrt(alpha),
        criterion="bakry_emery",
        inputs_digest=f"alpha={alpha:.12g}",
        components={"alpha": alpha},
    )


def bound_bobkov(variance: float, dim: int = 1) -> PoincareBound:
    """
    Bobkov bound 12√3·σ for a log-concave measure with variance σ².

    The caller vouches for log-concavity.

    Parameters
    ----------
    variance : float
        Total variance ∫|θ - mean|² dμ, positive.
    dim : int, optional
        Dimension, recorded with the bound.
    """
    if not (math.isfinite(variance) and variance > 0):
        raise posteriorlip.errors.InvalidInput(f"variance must be positive, got {variance}")
    return PoincareBound(
        value=BOBKOV_CONSTANT * math.sqrt(variance),
        criterion="bobkov",
        inputs_digest=f"variance={variance:.12g},d={dim}",
        components={"variance": variance},
    )


def bound_holley_stroock(base: PoincareBound, osc: float) -> PoincareBound:
    """
    Holley-Stroock perturbation: C ≤ exp(osc/2)·C_base.

    Parameters
    ----------
    base : PoincareBound
        Bound for the unperturbed measure.
    osc : float
        sup V - inf V of the log-perturbation, nonnegative.
    """
    if not (math.isfinite(osc) and osc >= 0):
        raise posteriorlip.errors.InvalidInput(f"oscillation must be finite and nonnegative, got {osc}")
    if osc == 0:
        return base
    return PoincareBound(
        value=base.value * math.exp(0.5 * osc),
        criterion="holley_stroock",
        inputs_digest=f"base={base.criterion}:{base.value:.12g},osc={osc:.12g}",
        order_q=base.order_q,
        components={"base": base.value, "osc": osc},
    )


def _sup_on_side(
    objective: collections.abc.Callable[[FloatArray], FloatArray], lo: float, hi: float
) -> float:
    """Grid maximum of a vectorised objective on (lo, hi), polished by golden section."""
    grid = np.linspace(lo, hi, MUCKENHOUPT_GRID + 2)[1:-1]
    values = objective(grid)
    if not np.all(np.isfinite(values)):
        raise posteriorlip.errors.NonConvergent("Muckenhoupt functional is not finite on the grid")
    best = int(np.argmax(values))
    value = float(values[best])
    if 0 < best < grid.size - 1:
        try:
            found = scipy.optimize.minimize_scalar(
                lambda t: -float(objective(np.array([t]))[0]),
                bracket=(grid[best - 1], grid[best], grid[best + 1]),
                method="golden",
            )
        except ValueError:
            return value
        if lo < float(found.x) < hi and math.isfinite(float(found.fun)):
            value = max(value, -float(found.fun))
    return value


def bound_muckenhoupt_1d(d: posteriorlip.measures.Distribution1D) -> PoincareBound:
    """
    One-dimensional Muckenhoupt bound C ≤ 2·max(√D⁺, √D⁻).

    With m the median and q the density,
    D⁻ = sup_{x<m} F(x)∫_x^m 1/q and D⁺ = sup_{x>m} (1-F(x))∫_m^x 1/q.

    Parameters
    ----------
    d : Distribution1D
        Law with a density positive on its support.

    Returns
    -------
    PoincareBound
        The bound, with ``d_minus``, ``d_plus`` and ``median`` in its
        components.

    Raises
    ------
    posteriorlip.errors.NonConvergent
        If 1/q is not integrable near the median.
    """
    median = d.median()

    def reciprocal(theta: FloatArray) -> FloatArray:
        with np.errstate(divide="ignore", over="ignore"):
            return 1.0 / d.pdf(theta)

    primitive = d.antiderivative(reciprocal, median)
    lo, hi = d.window.lo, d.window.hi

    def left(x: FloatArray) -> FloatArray:
        return d.cdf(x) * -primitive(x)

    def right(x: FloatArray) -> FloatArray:
        return d.sf(x) * primitive(x)

    d_minus = _sup_on_side(left, lo, median)
    d_plus = _sup_on_side(right, median, hi)
    value = 2.0 * max(math.sqrt(max(d_plus, 0.0)), math.sqrt(max(d_minus, 0.0)))
    logger.debug("Muckenhoupt: median %.6g, D- %.6g, D+ %.6g", median, d_minus, d_plus)
    return PoincareBound(
        value=value,
        criterion="muckenhoupt_1d",
        inputs_digest=f"window=({lo:.6g},{hi:.6g}),grid={MUCKENHOUPT_GRID}",
        components={"d_minus": d_minus, "d_plus": d_plus, "median": median},
    )


def bound_oracle(
    d: posteriorlip.measures.Distribution1D, grid_size: int = 2000
) -> PoincareBound:
    """Spectral oracle value of a `Distribution1D`, tagged ``oracle``."""
    value = posteriorlip.numerics.poincare_constant_1d_numeric(d.pdf, d.support, grid_size)
    return PoincareBound(
        value=value,
        criterion="oracle",
        inputs_digest=f"support=({d.support.lo:.6g},{d.support.hi:.6g}),grid={grid_size}",
    )


def _ball_grid(radius: float, dim: int) -> FloatArray:
    if dim == 1:
        return np.linspace(-radius, radius, 1024)[:, None]
    if dim == 2:
        axis = np.linspace(-radius, radius, 64)
        mesh = np.stack([m.ravel() for m in np.meshgrid(axis, axis, indexing="ij")], axis=1)
        return mesh[np.sum(mesh**2, axis=1) <= radius * radius]
    raise posteriorlip.errors.MissingParam("sups", f"grid estimates cover d ≤ 2, got d={dim}")


def _derivatives(potential: Potential, points: FloatArray, step: float) -> tuple[FloatArray, FloatArray]:
    """Finite-difference gradients (k, d) and Laplacians (k,) of a vectorised potential."""
    centre = potential(points)
    gradient = np.empty_like(points)
    laplacian = np.zeros(points.shape[0])
    for axis in range(points.shape[1]):
        shift = np.zeros(points.shape[1])
        shift[axis] = step
        upper = potential(points + shift)
        lower = potential(points - shift)
        gradient[:, axis] = (upper - lower) / (2.0 * step)
        laplacian += (upper - 2.0 * centre + lower) / (step * step)
    return gradient, laplacian


def ball_sups(
    potential_v: Potential,
    potential_u: Potential | None,
    radius: float,
    dim: int = 1,
) -> dict[str, float]:
    """
    Grid estimates of V_R, U_R, V_R*, W_R and ω_R on the ball B_R.

    Parameters
    ----------
    potential_v, potential_u : Callable[[FloatArray], FloatArray]
        Potentials taking points of shape (k, d); ``potential_u`` may be
        ``None`` for U = 0.
    radius : float
        Ball radius R.
    dim : int, optional
        Dimension (1024 points in 1D, a 64² disk in 2D).

    Returns
    -------
    dict[str, float]
        Keys ``v_r``, ``u_r``, ``v_r_star``, ``w_r`` and ``omega_r``; the
        infimum of V over ℝᵈ is taken on a ball of radius max(4R, 10).
    """
    points = _ball_grid(radius, dim)
    step = 1e-4 * max(1.0, radius)
    grad_v, lap_v = _derivatives(potential_v, points, step)
    norm_v = np.linalg.norm(grad_v, axis=1)
    if potential_u is None:
        norm_u = np.zeros_like(norm_v)
    else:
        grad_u, _ = _derivatives(potential_u, points, step)
        norm_u = np.linalg.norm(grad_u, axis=1)
    wide = _ball_grid(max(4.0 * radius, 10.0), dim)
    floor = min(float(np.min(potential_v(wide))), float(np.min(potential_v(points))))
    return {
        "v_r": float(np.max(norm_v)),
        "u_r": float(np.max(norm_u)),
        "v_r_star": float(np.max(np.abs(lap_v))),
        "w_r": float(np.max(norm_u * norm_v)),
        "omega_r": float(np.max(potential_v(points))) - floor,
    }


def _require(value: float | None, name: str) -> float:
    if value is None:
        raise posteriorlip.errors.MissingParam(name)
    return value


def bound_francesi(
    variant: int,
    n: int,
    params: posteriorlip.abc.objects.FrancesiParams,
    potential_v: Potential | None = None,
    potential_u: Potential | None = None,
) -> PoincareBound:
    """
    Poincaré bounds for μ_n = e^{-nV-U}dθ whose square decays like 1/n.

    Parameters
    ----------
    variant : int
        1 (global convexity), 2 (convex on B_R, linear growth outside) or
        3 (convex on B_R, gradient domination outside).
    n : int
        Sample size.
    params : FrancesiParams
        Curvatures, growth constants and optional precomputed sups.
    potential_v, potential_u : Callable[[FloatArray], FloatArray] | None
        Potentials used to fill sups missing from ``params`` by grid
        maximisation over B_R.

    Returns
    -------
    PoincareBound
        ``value`` is the square root of the bound on C².

    Raises
    ------
    posteriorlip.errors.ThresholdViolation
        If ``n`` does not exceed the variant's threshold.
    posteriorlip.errors.MissingParam
        If a required constant is neither given nor computable.
    """
    alpha, h = params.alpha, params.h
    if not alpha > 0:
        raise posteriorlip.errors.InvalidCurvature(alpha)
    base = alpha * n + h
    components: dict[str, float] = {"alpha": alpha, "h": h, "n": float(n)}

    sups: dict[str, float] = {}
    if variant in (2, 3) and potential_v is not None:
        sups = ball_sups(potential_v, potential_u, _require(params.radius, "radius"), params.dim)

    def pick(name: str) -> float:
        given = getattr(params, name)
        if given is not None:
            return float(given)
        if name in sups:
            return sups[name]
        raise posteriorlip.errors.MissingParam(name, "supply it or pass the potentials")

    if variant == 1:
        threshold = -h / alpha
        if not n > threshold:
            raise posteriorlip.errors.ThresholdViolation(n, threshold)
        squared = 1.0 / base
    elif variant == 2:
        c = _require(params.c, "c")
        ell = _require(params.ell, "ell")
        radius = _require(params.radius, "radius")
        c_r = _require(params.c_r, "c_r")
        d_r = (params.dim - 1) / radius
        threshold = max(-h / alpha, (d_r + 1.0 - ell) / c)
        if not n > threshold:
            raise posteriorlip.errors.ThresholdViolation(n, threshold)
        v_r, u_r = pick("v_r"), pick("u_r")
        squared = (base + (c * n + ell - d_r + n * v_r + u_r) * c_r) / (
            base * (c * n + ell - 1.0 - d_r)
        )
        components |= {"c": c, "ell": ell, "radius": radius, "c_r": c_r, "v_r": v_r, "u_r": u_r}
    elif variant == 3:
        c1 = _require(params.c1, "c1")
        c2 = _require(params.c2, "c2")
        _require(params.radius, "radius")
        threshold = max(1.0 + 1.0 / c2, -h / alpha)
        if not n > threshold:
            raise posteriorlip.errors.ThresholdViolation(n, threshold)
        v_star, w_r, omega = pick("v_r_star"), pick("w_r"), pick("omega_r")
        squared = (base + math.exp(omega) * (c1 * n + v_star + w_r)) / (base * c1 * n)
        components |= {"c1": c1, "c2": c2, "v_r_star": v_star, "w_r": w_r, "omega_r": omega}
    else:
        raise posteriorlip.errors.InvalidInput(f"unknown variant {variant}")

    components |= {"threshold": threshold, "c_squared": squared}
    return PoincareBound(
        value=math.sqrt(squared),
        criterion=f"francesi_{variant}",
        inputs_digest=f"variant={variant},n={n},alpha={alpha:.6g},h={h:.6g}",
        components=components,
    )
