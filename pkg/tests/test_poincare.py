"""Tests for the closed-form Poincaré criteria and their scaling in n."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from posteriorlip import errors
from posteriorlip import measures
from posteriorlip import poincare
from posteriorlip.abc.objects import FrancesiParams


def quadratic(points: np.ndarray) -> np.ndarray:
    return 0.5 * np.sum(points**2, axis=1)


class TestClosedForms:
    def test_payne_weinberger(self):
        """Verify diam/π and the recorded criterion."""
        bound = poincare.bound_payne_weinberger(2.0)
        assert bound.value == pytest.approx(2.0 / math.pi)
        assert bound.criterion == "payne_weinberger"

    def test_unbounded_diameter(self):
        """Verify an infinite diameter is rejected."""
        with pytest.raises(errors.InvalidInput):
            poincare.bound_log_concave_diam(math.inf)

    def test_bakry_emery(self):
        """Verify 1/√α."""
        assert poincare.bound_bakry_emery(4.0).value == pytest.approx(0.5)

    def test_bakry_emery_needs_curvature(self):
        """Verify non-positive curvature is rejected."""
        with pytest.raises(errors.InvalidCurvature):
            poincare.bound_bakry_emery(0.0)

    def test_bobkov(self):
        """Verify 12√3·σ."""
        assert poincare.bound_bobkov(4.0).value == pytest.approx(24.0 * math.sqrt(3.0))

    def test_holley_stroock(self):
        """Verify the exp(osc/2) factor and the zero-oscillation shortcut."""
        base = poincare.bound_bakry_emery(1.0)
        assert poincare.bound_holley_stroock(base, 0.0) is base
        perturbed = poincare.bound_holley_stroock(base, 2.0)
        assert perturbed.value == pytest.approx(math.e)
        assert perturbed.components["base"] == 1.0


class TestMuckenhoupt:
    def test_uniform(self):
        """Verify 2·√(1/16) on the unit interval."""
        bound = poincare.bound_muckenhoupt_1d(measures.uniform(0.0, 1.0))
        assert bound.value == pytest.approx(0.5, rel=1e-6)
        assert bound.components["median"] == pytest.approx(0.5)

    def test_gaussian_brackets_constant(self, standard_normal):
        """Verify C ≤ bound ≤ 2C for the standard Gaussian."""
        bound = poincare.bound_muckenhoupt_1d(standard_normal)
        assert 1.0 - 1e-3 <= bound.value <= 2.0 + 1e-6


class TestOracle:
    def test_interval(self):
        """Verify 2/π for the uniform law on (0, 2)."""
        bound = poincare.bound_oracle(measures.uniform(0.0, 2.0))
        assert bound.criterion == "oracle"
        assert bound.value == pytest.approx(2.0 / math.pi, rel=1e-4)


class TestBallSups:
    def test_quadratic_potential(self):
        """Verify the sups of V = θ²/2 on the unit ball."""
        sups = poincare.ball_sups(quadratic, None, 1.0)
        assert sups["v_r"] == pytest.approx(1.0, abs=1e-6)
        assert sups["v_r_star"] == pytest.approx(1.0, abs=1e-4)
        assert sups["omega_r"] == pytest.approx(0.5, abs=1e-3)
        assert sups["u_r"] == 0.0

    def test_high_dimension(self):
        """Verify grid sups are limited to d ≤ 2."""
        with pytest.raises(errors.MissingParam):
            poincare.ball_sups(quadratic, None, 1.0, dim=3)


class TestScalingBounds:
    def test_global_convexity(self):
        """Verify C² = 1/(αn + h)."""
        bound = poincare.bound_francesi(1, 10, FrancesiParams(alpha=1.0, h=0.0))
        assert bound.value == pytest.approx(math.sqrt(0.1))
        assert bound.criterion == "francesi_1"

    @given(st.integers(min_value=10, max_value=10_000))
    @settings(max_examples=30, deadline=None)
    def test_one_over_n(self, n):
        """Verify C² decreases in n and C²·n ≤ 1/α + |h|/α²."""
        params = FrancesiParams(alpha=2.0, h=-3.0)
        now = poincare.bound_francesi(1, n, params).value
        later = poincare.bound_francesi(1, n + 1, params).value
        assert later < now
        assert now**2 * n <= 1.0 / 2.0 + 3.0 / 4.0 + 1e-12

    def test_threshold(self):
        """Verify n below -h/α is refused."""
        with pytest.raises(errors.ThresholdViolation):
            poincare.bound_francesi(1, 3, FrancesiParams(alpha=1.0, h=-5.0))

    def test_local_convexity_needs_constants(self):
        """Verify the second bound asks for its growth constants."""
        with pytest.raises(errors.MissingParam):
            poincare.bound_francesi(2, 10, FrancesiParams(alpha=1.0, radius=1.0))

    def test_gradient_domination_from_potentials(self):
        """Verify missing sups are filled from the potentials."""
        params = FrancesiParams(alpha=1.0, c1=0.25, c2=1.0, radius=1.0)
        bound = poincare.bound_francesi(3, 50, params, potential_v=quadratic)
        assert bound.criterion == "francesi_3"
        assert bound.components["v_r_star"] == pytest.approx(1.0, abs=1e-4)
        assert math.isfinite(bound.value) and bound.value > 0

    def test_unknown_variant(self):
        """Verify variants other than 1, 2 and 3 are rejected."""
        with pytest.raises(errors.InvalidInput):
            poincare.bound_francesi(4, 10, FrancesiParams(alpha=1.0))
