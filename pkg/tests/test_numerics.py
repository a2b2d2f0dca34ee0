"""Tests for quadrature, differentiation, box maximisation and the spectral oracle."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from posteriorlip import errors
from posteriorlip import numerics
from posteriorlip.abc.objects import Interval
from posteriorlip.abc.objects import QuadratureSpec

REAL_LINE = Interval(-math.inf, math.inf)


class TestGaussLegendre:
    def test_weights_sum_to_two(self):
        """Verify the rule integrates constants on [-1, 1]."""
        nodes, weights = numerics.gauss_legendre(16)
        assert nodes.shape == (16,)
        assert weights.sum() == pytest.approx(2.0, abs=1e-14)

    def test_exact_for_polynomials(self):
        """Verify an n-point rule integrates degree 2n-1 exactly."""
        nodes, weights = numerics.gauss_legendre(4)
        assert float(np.sum(weights * nodes**6)) == pytest.approx(2.0 / 7.0, abs=1e-14)

    def test_read_only(self):
        """Verify cached rules cannot be mutated."""
        nodes, _ = numerics.gauss_legendre(8)
        with pytest.raises(ValueError):
            nodes[0] = 0.0


class TestIntegrate:
    def test_gaussian_on_real_line(self):
        """Verify the compactified real-line integral of e^{-θ²/2}."""
        result = numerics.integrate(lambda t: math.exp(-0.5 * t * t), REAL_LINE)
        assert result.value == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-9)

    def test_half_line(self):
        """Verify the right half-line map."""
        result = numerics.integrate(lambda t: math.exp(-t), Interval(0.0, math.inf))
        assert result.value == pytest.approx(1.0, rel=1e-9)

    def test_left_half_line(self):
        """Verify the mirrored half-line map."""
        result = numerics.integrate(lambda t: math.exp(t), Interval(-math.inf, 0.0))
        assert result.value == pytest.approx(1.0, rel=1e-9)

    def test_breakpoints(self):
        """Verify a kink passed as a breakpoint is integrated accurately."""
        result = numerics.integrate(lambda t: abs(t - 0.3), Interval(0.0, 1.0), points=[0.3])
        assert result.value == pytest.approx(0.5 * (0.09 + 0.49), abs=1e-12)

    def test_non_finite(self):
        """Verify NaN integrands raise NonFinite or NonConvergent."""
        with pytest.raises((errors.NonFinite, errors.NonConvergent)):
            numerics.integrate(lambda t: math.nan, Interval(0.0, 1.0))

    def test_invalid_spec(self):
        """Verify non-positive tolerances are rejected."""
        with pytest.raises(errors.InvalidInput):
            QuadratureSpec(abs_tol=0.0)


class TestGradientFd:
    def test_quadratic(self):
        """Verify the gradient of a quadratic form."""
        gradient = numerics.gradient_fd(lambda p: float(p[0] ** 2 + 3.0 * p[1]), [2.0, -1.0])
        assert gradient == pytest.approx([4.0, 3.0], abs=1e-7)

    def test_vector_output_shape(self):
        """Verify the output shape is (n,) + shape(f(x))."""
        gradient = numerics.gradient_fd(lambda p: np.array([p[0], 2.0 * p[0], 0.0]), 1.0)
        assert gradient.shape == (1, 3)
        assert gradient[0] == pytest.approx([1.0, 2.0, 0.0], abs=1e-9)

    def test_non_finite(self):
        """Verify infinite difference quotients raise."""
        with pytest.raises(errors.NonFinite):
            numerics.gradient_fd(lambda p: math.inf if p[0] > 0 else 0.0, 0.0)


class TestMaximizeOnBox:
    def test_refines_interior_maximum(self):
        """Verify refinement recovers an off-grid maximum."""
        found = numerics.maximize_on_box(lambda p: -((p[0] - 0.123456) ** 2), [(0.0, 1.0)], grid=11)
        assert found.argmax[0] == pytest.approx(0.123456, abs=1e-6)
        assert found.value == pytest.approx(0.0, abs=1e-10)

    def test_boundary_maximum(self):
        """Verify a maximum on the box edge is found on the grid."""
        found = numerics.maximize_on_box(lambda p: float(p[0]), [(-2.0, 3.0)], grid=5, refine=False)
        assert found.value == 3.0
        assert not found.refined

    def test_two_dimensional(self):
        """Verify the tensor grid and Nelder-Mead in 2D."""
        found = numerics.maximize_on_box(
            lambda p: -float((p[0] - 0.25) ** 2 + (p[1] + 0.5) ** 2), [(0.0, 1.0), (-1.0, 0.0)], grid=9
        )
        assert found.argmax == pytest.approx([0.25, -0.5], abs=1e-3)


class TestScanGrid:
    @given(st.sampled_from([Interval(0.0, 1.0), REAL_LINE, Interval(1.0, math.inf), Interval(-math.inf, 2.0)]))
    @settings(max_examples=10, deadline=None)
    def test_interior_and_increasing(self, domain):
        """Verify scan points are strictly inside and increasing."""
        points = numerics.scan_grid(domain, 101)
        assert points.size == 101
        assert np.all(np.diff(points) > 0)
        assert np.all((points > domain.lo) & (points < domain.hi))


class TestPoincareOracle:
    def test_uniform(self):
        """Verify C = 1/π on the unit interval."""
        value = numerics.poincare_constant_1d_numeric(lambda t: np.ones_like(t), Interval(0.0, 1.0))
        assert value == pytest.approx(1.0 / math.pi, rel=1e-5)

    def test_standard_normal(self):
        """Verify C = 1 for the standard Gaussian."""
        value = numerics.poincare_constant_1d_numeric(lambda t: np.exp(-0.5 * t * t), REAL_LINE)
        assert value == pytest.approx(1.0, abs=1e-3)

    def test_scaling(self):
        """Verify C scales linearly under dilation."""
        base = numerics.poincare_constant_1d_numeric(lambda t: np.exp(-0.5 * t * t), REAL_LINE)
        wide = numerics.poincare_constant_1d_numeric(lambda t: np.exp(-0.125 * t * t), REAL_LINE)
        assert wide == pytest.approx(2.0 * base, rel=1e-3)

    def test_small_grid(self):
        """Verify tiny grids are rejected."""
        with pytest.raises(errors.InvalidInput):
            numerics.poincare_constant_1d_numeric(lambda t: np.ones_like(t), Interval(0.0, 1.0), 8)

    def test_vanishing_density(self):
        """Verify a zero weight is degenerate."""
        with pytest.raises(errors.Degenerate):
            numerics.poincare_constant_1d_numeric(lambda t: np.zeros_like(t), REAL_LINE)
