"""Tests for Fisher functionals, Poincaré inputs and Lipschitz certificates."""

import math

import numpy as np
import pytest

from posteriorlip import bounds
from posteriorlip import errors
from posteriorlip import models
from posteriorlip import poincare
from posteriorlip.abc.objects import Interval
from posteriorlip.features import exponential
from posteriorlip.features import pareto
from posteriorlip.features import priors

SMALL_GRID = 16


def shifted_curvature_prior(lambda_min: float) -> priors.Prior:
    """Gaussian-shaped prior advertising a chosen curvature bound."""
    return priors.Prior("custom", Interval(-math.inf, math.inf), lambda t: -0.5 * t**2, lambda_min=lambda_min)


class TestFisher:
    def test_gaussian(self, gaussian_kernel):
        """Verify 𝒥² = 1/2 for the Gaussian location posterior."""
        assert bounds.fisher_j(gaussian_kernel, 2.0) ** 2 == pytest.approx(0.5, abs=1e-9)

    def test_finite_differences_agree(self, gaussian_kernel):
        """Verify the difference quotient of g reproduces the closed form."""
        closed = bounds.fisher_j(gaussian_kernel, 0.5)
        assert bounds.fisher_j(gaussian_kernel, 0.5, method="fd") == pytest.approx(closed, rel=1e-4)

    def test_values(self, gaussian_kernel):
        """Verify 𝒥_π = 𝒥₁ on fixed supports."""
        values = bounds.fisher_values(gaussian_kernel, 1.0)
        assert values.j_pi == values.j1
        assert values.j1 == pytest.approx(math.sqrt(0.5), abs=1e-9)

    def test_moving_support(self, pareto_kernel):
        """Verify 𝒥_π is refused when the support moves."""
        with pytest.raises(errors.ZeroDensity):
            bounds.fisher_j(pareto_kernel, 1.5)
        assert bounds.fisher_values(pareto_kernel, 1.5).j_pi is None


class TestPoincareInputs:
    def test_posterior_curvature(self, gaussian_kernel):
        """Verify inf M'' + λ_* for a conjugate posterior."""
        law = gaussian_kernel.evaluate(0.0)
        assert bounds.posterior_curvature(gaussian_kernel, np.array([0.0]), law) == 2.0

    def test_unknown_criterion(self, gaussian_kernel):
        """Verify unknown posterior criteria are rejected."""
        law = gaussian_kernel.evaluate(0.0)
        with pytest.raises(errors.InvalidInput):
            bounds.posterior_poincare(gaussian_kernel, np.array([0.0]), law, "lichnerowicz")

    def test_prior_choices(self):
        """Verify the prior bound picks Bakry-Émery, then the diameter, then the oracle."""
        assert bounds.prior_poincare(priors.gaussian()).criterion == "bakry_emery"
        assert bounds.prior_poincare(priors.uniform(1.0, 2.0)).value == pytest.approx(1.0 / math.pi)
        oracle = bounds.prior_poincare(priors.truncated_exponential())
        assert oracle.criterion == "oracle"
        assert oracle.value == pytest.approx(2.0, rel=5e-2)

    def test_sobolev_exponent(self):
        """Verify r/(r - 1) with r the Sobolev conjugate."""
        assert bounds.sobolev_exponent(1.0) == 1.0
        assert bounds.sobolev_exponent(1.0, dim=2) == pytest.approx(2.0)


class TestGenericRoutes:
    def test_w2_posterior_poincare(self, gaussian_kernel):
        """Verify K = 𝒞·𝒥 = (1/√2)(1/√2)."""
        certificate = bounds.certify(gaussian_kernel, "thm21_iii", grid=SMALL_GRID)
        assert certificate.lipschitz == pytest.approx(0.5, abs=1e-8)
        assert certificate.metric == "w2"
        assert certificate.notes["criterion"] == "bakry_emery"

    def test_w2_squared_constant(self, gaussian_kernel):
        """Verify K = 𝒞²·|∇T| for an exponential family."""
        certificate = bounds.certify(gaussian_kernel, "cor31", grid=SMALL_GRID)
        assert certificate.lipschitz == pytest.approx(0.5, abs=1e-6)

    def test_total_variation(self, gaussian_kernel):
        """Verify L = E|Ψ|/2 = 1/(2√π)."""
        certificate = bounds.certify(gaussian_kernel, "thm21_i", grid=SMALL_GRID)
        assert certificate.metric == "tv"
        assert certificate.lipschitz == pytest.approx(0.5 / math.sqrt(math.pi), abs=1e-5)

    def test_w1(self, gaussian_kernel):
        """Verify K factors into the prior constant and the gradient norm."""
        certificate = bounds.certify(gaussian_kernel, "thm21_ii", grid=SMALL_GRID, box=[(-1.0, 1.0)])
        components = certificate.components
        assert certificate.metric == "w1"
        assert components["C_prior"] == 1.0
        assert certificate.lipschitz == pytest.approx(components["C_prior"] * components["grad_norm"])

    def test_w1_needs_bound_for_other_orders(self, gaussian_kernel):
        """Verify p ≠ 2 asks for a prior bound of the matching order."""
        with pytest.raises(errors.MissingParam):
            bounds.lipschitz_w1(gaussian_kernel, p=3.0, grid=SMALL_GRID)
        with pytest.raises(errors.InvalidInput):
            bounds.lipschitz_w1(gaussian_kernel, poincare.bound_bakry_emery(1.0), p=3.0, grid=SMALL_GRID)

    def test_sobolev_needs_flat_prior(self, gaussian_kernel):
        """Verify the Sobolev route refuses non-flat priors."""
        with pytest.raises(errors.InvalidInput):
            bounds.certify(gaussian_kernel, "thm21_iv", grid=SMALL_GRID)

    def test_sobolev_on_flat_prior(self):
        """Verify the Sobolev route on a flat bounded prior."""
        kernel = models.PosteriorKernel(exponential.GaussianLocation((-1.0, 1.0)), priors.uniform(-1.0, 1.0))
        certificate = bounds.certify(kernel, "thm21_iv", grid=8)
        assert certificate.route == "thm21_iv"
        assert certificate.components["exponent"] == 1.0
        assert math.isfinite(certificate.lipschitz) and certificate.lipschitz > 0

    def test_moving_support_refused(self, pareto_kernel):
        """Verify fixed-support routes refuse truncated models."""
        with pytest.raises(errors.ZeroDensity):
            bounds.certify(pareto_kernel, "thm21_iii", grid=SMALL_GRID)


class TestExponentialFamilies:
    def test_closed_form(self):
        """Verify L = Lip(T)/(inf M'' + λ_*)."""
        certificate = bounds.lipschitz_expfam(exponential.GaussianLocation(), priors.gaussian())
        assert certificate.lipschitz == 0.5
        assert certificate.route == "prop32_expfam"
        assert certificate.sup_domain is None

    def test_flat_curvature(self):
        """Verify α ≤ 0 without a fallback is an error."""
        with pytest.raises(errors.CurvatureNonPositive):
            bounds.lipschitz_expfam(exponential.GaussianLocation(), shifted_curvature_prior(-1.0))

    def test_bobkov_fallback(self):
        """Verify the fallback scales the largest posterior variance."""
        tilted = priors.Prior("tilted", Interval(-2.0, 2.0), lambda t: 0.5 * t**2, lambda_min=-1.0)
        certificate = bounds.lipschitz_expfam(exponential.GaussianLocation(), tilted, fallback=True, grid=8)
        assert certificate.notes["criterion"] == "bobkov"
        assert certificate.lipschitz == pytest.approx(432.0 * certificate.components["variance"])

    def test_missing_prior_curvature(self):
        """Verify priors without curvature information are refused."""
        prior = priors.Prior("custom", Interval(-math.inf, math.inf), lambda t: -0.5 * t**2)
        with pytest.raises(errors.MissingParam):
            bounds.lipschitz_expfam(exponential.GaussianLocation(), prior)

    def test_exchangeable(self):
        """Verify n/(nα + λ_*) for four observations."""
        certificate = bounds.lipschitz_exch_n(exponential.GaussianLocation(), priors.gaussian(), 4)
        assert certificate.lipschitz == pytest.approx(0.8)
        mle = bounds.lipschitz_exch_n(exponential.GaussianLocation(), priors.gaussian(), 4, form="mle")
        assert mle.lipschitz == pytest.approx(0.8)
        assert mle.notes["domain_metric"] == "mle"

    def test_exchangeable_threshold(self):
        """Verify n must exceed -λ_*/α."""
        model, prior = exponential.GaussianLocation(), shifted_curvature_prior(-3.0)
        with pytest.raises(errors.ThresholdViolation):
            bounds.lipschitz_exch_n(model, prior, 2)
        assert bounds.lipschitz_exch_n(model, prior, 4).lipschitz == pytest.approx(4.0)

    def test_certify_uses_kernel_size(self):
        """Verify exch_n reads n from an exchangeable kernel."""
        kernel = models.ExchangeableKernel(exponential.GaussianLocation(), priors.gaussian(), 9)
        assert bounds.certify(kernel, "exch_n").lipschitz == pytest.approx(0.9)

    def test_non_family(self, pareto_kernel):
        """Verify closed-form routes need an exponential family."""
        with pytest.raises(errors.InvalidInput):
            bounds.certify(pareto_kernel, "prop32_expfam")


class TestTruncatedModels:
    def test_pareto_constant(self):
        """Verify C_Q(2) = (4/3)·√(1.5 ln 2)."""
        value = bounds.pareto_cq(pareto.Pareto1D(), priors.uniform(1.0, 2.0), 2.0)
        assert value == pytest.approx((4.0 / 3.0) * math.sqrt(1.5 * math.log(2.0)), rel=1e-8)

    def test_pareto_certificate(self, pareto_kernel):
        """Verify the supremum sits where h(x) reaches θ₀."""
        certificate = bounds.certify(pareto_kernel, "pareto_cq", grid=SMALL_GRID)
        assert certificate.route == "pareto_cq"
        assert certificate.lipschitz == pytest.approx(1.3596, abs=1e-3)
        assert certificate.sup_domain.argmax[0] == pytest.approx(2.0, abs=1e-3)

    def test_sharp_norm_below_constant(self):
        """Verify the exact Neumann norm never exceeds C_Q."""
        model, prior = pareto.Pareto1D(), priors.uniform(1.0, 2.0)
        for upper in (1.2, 1.6, 2.0):
            assert bounds.pareto_sharp_norm(model, prior, upper) <= bounds.pareto_cq(model, prior, upper) + 1e-12

    def test_neumann_solution(self, pareto_kernel):
        """Verify the boundary velocity and the weighted norm of u′."""
        solution = bounds.pareto_neumann(pareto_kernel, 1.5)
        assert solution.boundary_velocity == 1.0
        assert solution.compatibility_residual < 1e-8
        expected = bounds.pareto_sharp_norm(pareto.Pareto1D(), priors.uniform(1.0, 2.0), 1.5)
        assert solution.weighted_norm() == pytest.approx(expected, rel=1e-6)

    def test_h_function_route(self):
        """Verify the route tag and the 1/2 Lipschitz factor of h."""
        kernel = models.PosteriorKernel(pareto.ParetoHFunction(), priors.uniform(1.0, 2.0))
        certificate = bounds.certify(kernel, "pareto_hfunction", grid=SMALL_GRID)
        assert certificate.route == "pareto_hfunction"
        assert certificate.components["M"] == 0.5

    def test_not_truncated(self, gaussian_kernel):
        """Verify Pareto routes need a truncated model."""
        with pytest.raises(errors.InvalidInput):
            bounds.certify(gaussian_kernel, "pareto_cq")

    def test_moving_domain(self, pareto_kernel):
        """Verify the moving-domain route gives a finite constant."""
        certificate = bounds.certify(pareto_kernel, "maintrace_1d", criterion="log_concave_diam", grid=6)
        assert certificate.route == "maintrace_1d"
        assert math.isfinite(certificate.lipschitz) and certificate.lipschitz > 0


class TestCertify:
    def test_unknown_route(self, gaussian_kernel):
        """Verify unknown routes are rejected."""
        with pytest.raises(errors.InvalidInput):
            bounds.certify(gaussian_kernel, "thm99")

    def test_sup_domain_recorded(self, gaussian_kernel):
        """Verify certificates record the box and grid of the supremum."""
        certificate = bounds.certify(gaussian_kernel, "thm21_iii", grid=SMALL_GRID, box=[(-1.0, 2.0)])
        assert certificate.box == [(-1.0, 2.0)]
        assert certificate.sup_domain.grid == SMALL_GRID
