"""Tests for the verification harnesses."""

import math

import msgspec
import numpy as np
import pytest

from posteriorlip import bounds
from posteriorlip import errors
from posteriorlip import experiments
from posteriorlip import measures
from posteriorlip import models
from posteriorlip.features import exponential
from posteriorlip.features import pareto
from posteriorlip.features import priors


@pytest.fixture
def expfam_certificate():
    return bounds.lipschitz_expfam(exponential.GaussianLocation(), priors.gaussian())


class TestSeeding:
    def test_negative_seed(self):
        """Verify negative master seeds are refused."""
        with pytest.raises(errors.InvalidInput):
            experiments.item_rng(-1, 0)

    def test_pairs_are_reproducible(self):
        """Verify each pair depends only on the seed and its index."""
        short = experiments.sample_pairs([(0.0, 1.0)], 3, seed=11)
        long = experiments.sample_pairs([(0.0, 1.0)], 5, seed=11)
        for (a, b), (c, d) in zip(short, long[:3], strict=True):
            assert np.array_equal(a, c) and np.array_equal(b, d)

    def test_pairs_are_separated(self):
        """Verify pairs keep the minimum separation."""
        for first, second in experiments.sample_pairs([(0.0, 2.0), (0.0, 1.0)], 20, seed=3):
            assert np.linalg.norm(first - second) >= 1e-3


class TestRatioSweep:
    def test_gaussian_ratios(self, gaussian_kernel, expfam_certificate):
        """Verify every W2 ratio sits at L = 1/2."""
        report = experiments.ratio_sweep(gaussian_kernel, expfam_certificate, n_pairs=25, seed=0)
        assert report.metric == "w2"
        assert report.passed
        assert report.offending is None
        assert 0.5 - 1e-4 <= report.max_ratio <= 0.5 + 1e-3
        assert all(0.5 - 1e-4 <= pair.ratio <= 0.5 + 1e-3 for pair in report.pairs)

    def test_violation_is_reported(self, gaussian_kernel, expfam_certificate):
        """Verify a too small constant fails with the worst pair."""
        tight = msgspec.structs.replace(expfam_certificate, lipschitz=0.1)
        report = experiments.ratio_sweep(gaussian_kernel, tight, n_pairs=5, seed=1)
        assert report.passed is False
        assert report.offending is not None
        assert report.offending.ratio == report.max_ratio

    def test_no_certificate(self, flat_kernel):
        """Verify a sweep without a certificate has no verdict."""
        report = experiments.ratio_sweep(flat_kernel, n_pairs=4, seed=2, metric="tv")
        assert report.passed is None
        assert report.max_ratio == pytest.approx(0.0, abs=1e-12)

    def test_pareto(self, pareto_kernel):
        """Verify the truncated-model certificate bounds the observed ratios."""
        certificate = bounds.certify(pareto_kernel, "pareto_cq", grid=16)
        report = experiments.ratio_sweep(pareto_kernel, certificate, n_pairs=20, seed=0)
        assert report.max_ratio <= certificate.lipschitz * 1.01
        assert report.passed

    @pytest.mark.slow
    def test_two_parameter_pareto(self):
        """Verify the 64×64 grid posterior has a bounded W2 ratio spread over 30 pairs."""
        kernel = models.build_kernel("pareto_2param", {"resolution": 64}, priors.uniform_2d())
        report = experiments.ratio_sweep(kernel, n_pairs=30, seed=0, metric="w2")
        assert len(report.pairs) == 30
        assert report.passed is None
        assert 0.0 < report.max_ratio <= 5.0 * report.median_ratio

    def test_deterministic(self, gaussian_kernel, expfam_certificate):
        """Verify equal seeds give identical reports."""
        first = experiments.ratio_sweep(gaussian_kernel, expfam_certificate, n_pairs=3, seed=5)
        second = experiments.ratio_sweep(gaussian_kernel, expfam_certificate, n_pairs=3, seed=5)
        assert msgspec.json.encode(first) == msgspec.json.encode(second)


class TestWiener:
    def test_left_end_constants(self):
        """Verify the ratio √((j - 1)/j) at the pair (0, 0.01)."""
        report = experiments.wiener_uniformity([4, 8], x_pairs=[(0.0, 0.01)])
        assert report.coordinate_constants == pytest.approx([math.sqrt(0.75), math.sqrt(0.875)], rel=1e-6)
        assert report.path_constants[1] == pytest.approx(math.sqrt(0.875) / math.sqrt(8.0), rel=1e-6)

    def test_uniform_in_j(self):
        """Verify constants for j from 4 to 32 stay within 20% of each other."""
        report = experiments.wiener_uniformity([4, 8, 16, 32], n_pairs=20, seed=0)
        assert report.passed
        assert report.spread <= 0.2

    def test_equal_points_skipped(self):
        """Verify pairs with a zero gap are ignored."""
        report = experiments.wiener_uniformity([4], x_pairs=[(0.3, 0.3)])
        assert report.coordinate_constants == [0.0]
        assert report.spread == 0.0


class TestRenyi:
    def test_cell_average_is_a_mixture(self, gaussian_kernel):
        """Verify the mean of the cell average is the average posterior mean."""
        law = experiments.cell_average_posterior(gaussian_kernel, (0.0, 1.0), nodes=8)
        assert law.mean() == pytest.approx(0.25, abs=1e-7)

    def test_cell_without_mass(self, gaussian_kernel):
        """Verify a data density vanishing on the cell is refused."""
        with pytest.raises(errors.ZeroDensity):
            experiments.cell_average_posterior(gaussian_kernel, (0.0, 1.0), chi=np.zeros_like)

    def test_error_within_bound(self, gaussian_kernel, expfam_certificate):
        """Verify the W1 error stays below L·ε and halves with ε."""
        sweep = experiments.renyi_sweep(
            gaussian_kernel, (-1.0, 1.0), [2, 4], expfam_certificate, probes_per_cell=4, cell_nodes=8
        )
        assert sweep.passed
        for report in sweep.reports:
            assert report.max_error <= report.bound
        assert sweep.halving_ratios == [pytest.approx(2.0, rel=0.2)]

    @pytest.mark.slow
    def test_error_within_bound_on_wide_box(self, gaussian_kernel, expfam_certificate):
        """Verify the bound and the halving on [-2, 2] with 4, 8 and 16 cells."""
        sweep = experiments.renyi_sweep(
            gaussian_kernel, (-2.0, 2.0), [4, 8, 16], expfam_certificate, probes_per_cell=4, cell_nodes=8
        )
        assert sweep.passed
        assert [report.k_cells for report in sweep.reports] == [4, 8, 16]
        for report in sweep.reports:
            assert report.max_error <= report.bound
        assert sweep.halving_ratios == [pytest.approx(2.0, rel=0.25)] * 2

    def test_cell_count(self, gaussian_kernel):
        """Verify k ≥ 1."""
        with pytest.raises(errors.InvalidInput):
            experiments.renyi_approx(gaussian_kernel, (0.0, 1.0), 0)


class TestMixturePosterior:
    def test_symmetric_components(self):
        """Verify equal evidences keep equal weights."""
        components = [(0.5, priors.gaussian(-1.0)), (0.5, priors.gaussian(1.0))]
        law, weights = experiments.mixture_posterior(components, exponential.GaussianLocation(), 0.0)
        assert weights == pytest.approx([0.5, 0.5])
        assert law.mean() == pytest.approx(0.0, abs=1e-7)

    def test_evidence_reweights(self):
        """Verify the component closer to the data gains weight."""
        components = [(0.5, priors.gaussian(-1.0)), (0.5, priors.gaussian(1.0))]
        _, weights = experiments.mixture_posterior(components, exponential.GaussianLocation(), 2.0)
        assert weights[1] > weights[0]

    def test_single_component(self, gaussian_kernel):
        """Verify a lone component is its own posterior."""
        components = [(1.0, priors.gaussian()), (0.0, priors.gaussian(3.0))]
        law, weights = experiments.mixture_posterior(components, exponential.GaussianLocation(), 1.0)
        assert weights.tolist() == [1.0, 0.0]
        assert law.mean() == pytest.approx(gaussian_kernel.evaluate(1.0).mean())

    def test_weights_checked(self):
        """Verify prior weights must sum to one."""
        with pytest.raises(errors.InvalidInput):
            experiments.mixture_posterior([(0.7, priors.gaussian())], exponential.GaussianLocation(), 0.0)

    def test_no_evidence(self):
        """Verify data outside every component support are refused."""
        components = [(0.5, priors.uniform(1.0, 2.0)), (0.5, priors.uniform(1.5, 2.0))]
        with pytest.raises(errors.ZeroEvidence):
            experiments.mixture_posterior(components, pareto.Pareto1D(), 0.9)


class TestContraction:
    def test_rate(self):
        """Verify E W1(π_n, δ_θ₀) decays like n^{-1/2}."""
        report = experiments.contraction_experiment(
            exponential.GaussianLocation(), priors.gaussian(), 0.5, [10, 40, 160], replications=20, seed=0
        )
        assert -0.65 <= report.slope <= -0.35
        assert report.discarded == 0
        assert len(report.samples[0]) == 20
        assert report.eps_star[0] > report.eps_star[-1]

    def test_deterministic(self):
        """Verify equal seeds reproduce every estimate."""
        arguments = (exponential.GaussianLocation(), priors.gaussian(), 0.0, [5, 10])
        first = experiments.contraction_experiment(*arguments, replications=3, seed=9)
        second = experiments.contraction_experiment(*arguments, replications=3, seed=9)
        assert first.eps_hat == second.eps_hat

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(5))
    def test_rate_at_the_origin(self, seed):
        """Verify the n^{-1/2} slope at θ₀ = 0 for n from 10 to 1000 under every master seed."""
        report = experiments.contraction_experiment(
            exponential.GaussianLocation(),
            priors.gaussian(),
            0.0,
            [10, 30, 100, 300, 1000],
            replications=50,
            seed=seed,
        )
        assert -0.65 <= report.slope <= -0.35
        assert report.discarded == 0

    def test_kl_term_decreases(self):
        """Verify the KL localisation term shrinks with n."""
        model, prior = exponential.GaussianLocation(), priors.gaussian()
        terms = [experiments.kl_contraction_term(model, prior, 0.5, n) for n in (4, 16, 64)]
        assert terms[0] > terms[1] > terms[2] > 0

    def test_validation(self):
        """Verify the sizes, replications and θ₀ are checked."""
        model = exponential.GaussianLocation()
        with pytest.raises(errors.InvalidInput):
            experiments.contraction_experiment(model, priors.gaussian(), 0.0, [10])
        with pytest.raises(errors.InvalidInput):
            experiments.contraction_experiment(model, priors.gaussian(), 0.0, [10, 20], replications=0)
        with pytest.raises(errors.InvalidInput):
            experiments.contraction_experiment(pareto.Pareto1D(), priors.uniform(1.0, 2.0), 3.0, [10, 20])


class TestBoLe:
    def test_uniform(self):
        """Verify ∫ F(1 - F)/f = 1/6 on the unit interval."""
        check = experiments.bole_condition_check(measures.uniform(0.0, 1.0))
        assert not check.divergent
        assert check.value == pytest.approx(1.0 / 6.0, rel=1e-6)

    @pytest.mark.parametrize(
        "law",
        [measures.normal(0.0, 1.0), measures.exponential(1.0)],
    )
    def test_unbounded_tails_diverge(self, law):
        """Verify light tails make the integrand non-integrable."""
        assert experiments.bole_condition_check(law).divergent

    def test_truncation_restores_finiteness(self):
        """Verify a truncated Gaussian has a finite value."""
        check = experiments.bole_condition_check(measures.normal(0.0, 1.0, measures.Interval(-8.0, 8.0)))
        assert not check.divergent
        assert check.value is not None and check.value > 0


class TestPoincareSoundness:
    @pytest.mark.parametrize(
        "name", ["standard_normal", "uniform_01", "truncated_exponential", "gaussian_posterior_-2", "gaussian_posterior_2"]
    )
    def test_bounds_dominate_oracle(self, name):
        """Verify every catalogue bound is at least the oracle."""
        law, catalogue = experiments.poincare_catalogue(name)
        report = experiments.poincare_soundness(law, catalogue, name)
        assert report.passed
        assert all(bound.value >= report.oracle - 1e-3 for bound in report.bounds)

    def test_bakry_emery_is_tight(self):
        """Verify 1/√α matches the oracle for the standard Gaussian."""
        law, catalogue = experiments.poincare_catalogue("standard_normal")
        report = experiments.poincare_soundness(law, catalogue[:1], "standard_normal")
        assert report.bounds[0].value == pytest.approx(report.oracle, abs=1e-3)

    def test_low_bound_fails(self, standard_normal):
        """Verify a bound under the oracle fails the check."""
        report = experiments.poincare_soundness(standard_normal, [experiments.poincare_catalogue("uniform_01")[1][0]])
        assert not report.passed

    @pytest.mark.parametrize("name", ["cauchy", "gaussian_posterior_abc"])
    def test_unknown_names(self, name):
        """Verify unknown catalogue names are rejected."""
        with pytest.raises(errors.InvalidInput):
            experiments.poincare_catalogue(name)
