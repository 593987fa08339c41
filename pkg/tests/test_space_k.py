"""
Tests for the seminorm, norms and embedding inequalities of the fractional
Musielak space on the model setting p = 2, ψ(t) = t, α = 0.9, β = 1.
"""

import numpy as np
import pytest
from scipy.special import gamma

from src.application.space_k import (
    embedding_constants,
    has_zero_trace,
    hilfer_derivative,
    integral_bound_check,
    k_modular,
    k_norm,
    norm_equivalence_probe,
    poincare_check,
    psi_condition_check,
    psi_condition_pairs,
    seminorm,
    seminorm_modular_sandwich_check,
    sup_bound_check,
)
from src.application.musielak_core import luxemburg_norm
from src.core.entities.fractional import PsiWeight
from src.core.entities.musielak import GridFunction
from src.core.exceptions import DomainError, PreconditionError
from src.infrastructure.lib.quadrature import fourier_sine_samples
from tests.factories import (
    model_context,
    parabola,
    parabola_derivative,
    parabola_derivative_square_integral,
    sine,
)


class TestEmbeddingConstants:
    """Constants of the integral, Poincaré-type and sup-norm bounds."""

    def test_model_constants(self, ctx):
        """Test c∓ and r_sup for p = 2, α = 0.9 and a unit weight span."""
        constants = embedding_constants(ctx)
        base = 1.0 / gamma(1.9)
        assert constants.c_minus == pytest.approx(base**0.5)
        assert constants.c_plus == pytest.approx(base**0.5)
        assert constants.r_sup == pytest.approx(2.0 * np.sqrt(0.5) / gamma(1.9))
        assert constants.r_sup == pytest.approx(1.47, abs=5e-3)


class TestNorms:
    """Seminorm, K-norm and modulars."""

    def setup_method(self):
        """Set up test fixtures."""
        self.ctx = model_context()
        self.u = sine(self.ctx.grid_size)

    def test_zero_function(self):
        """Test that the zero function has zero seminorm, norm and modulars."""
        zero = GridFunction.zeros(1.0, self.ctx.grid_size)
        assert seminorm(self.ctx, zero) == 0.0
        assert k_norm(self.ctx, zero) == 0.0
        assert k_modular(self.ctx, zero) == (0.0, 0.0)

    def test_k_norm_is_sum(self):
        """Test ‖u‖_K = ‖u‖_Φ + [u]."""
        assert k_norm(self.ctx, self.u) == pytest.approx(
            luxemburg_norm(self.ctx.mf, self.u) + seminorm(self.ctx, self.u)
        )

    def test_seminorm_squared_is_modular_for_p_two(self):
        """Test [u]² = ⁰ρ(u) when Φ(t) = t²/2."""
        full, zero_trace = k_modular(self.ctx, self.u)
        assert seminorm(self.ctx, self.u) ** 2 == pytest.approx(zero_trace, rel=1e-8)
        assert full > zero_trace

    def test_seminorm_is_homogeneous(self):
        """Test [s u] = |s| [u]."""
        assert seminorm(self.ctx, self.u * -3.0) == pytest.approx(3.0 * seminorm(self.ctx, self.u), rel=1e-8)

    def test_grid_mismatch(self):
        """Test that u must live on the context grid."""
        with pytest.raises(DomainError):
            seminorm(self.ctx, sine(65))

    def test_zero_trace_detection(self):
        """Test the boundary test used by the zero-trace checks."""
        assert has_zero_trace(self.u)
        assert not has_zero_trace(GridFunction.from_callable(np.cos, 1.0, 33))


class TestParabolaRegression:
    """u(t) = t(1 − t) with p = 2, ψ(t) = t, α = 0.9, β = 1 against closed forms."""

    def setup_method(self):
        """Set up test fixtures."""
        self.ctx = model_context(1025)
        self.u = parabola(1025)
        self.square_integral = parabola_derivative_square_integral(0.9)

    def test_derivative_is_exact_at_the_nodes(self):
        """Test ᴴD u = t^0.1/Γ(1.1) − 2 t^1.1/Γ(2.1) at every node."""
        derivative = hilfer_derivative(self.ctx, self.u)
        np.testing.assert_allclose(derivative.samples, parabola_derivative(self.ctx.nodes), rtol=0.0, atol=1e-10)

    def test_seminorm(self):
        """Test [u] = (∫ (Du)² / 2)^(1/2), positive and reproducible to 1e-6."""
        value = seminorm(self.ctx, self.u)
        assert value > 0.0
        assert value == pytest.approx(np.sqrt(0.5 * self.square_integral), rel=1e-3)
        assert seminorm(model_context(1025), parabola(1025)) == pytest.approx(value, abs=1e-6)

    def test_k_norm_and_modular(self):
        """Test ‖u‖_K as the sum of ‖u‖_Φ = 60^(−1/2) and [u], and ⁰ρ(u) = ∫ (Du)² / 2."""
        norm = luxemburg_norm(self.ctx.mf, self.u)
        assert norm == pytest.approx(1.0 / np.sqrt(60.0), rel=1e-5)
        assert k_norm(self.ctx, self.u) == pytest.approx(norm + seminorm(self.ctx, self.u), abs=1e-6)
        assert k_norm(self.ctx, self.u) == pytest.approx(
            1.0 / np.sqrt(60.0) + np.sqrt(0.5 * self.square_integral), rel=1e-3
        )
        full, zero_trace = k_modular(self.ctx, self.u)
        assert zero_trace == pytest.approx(0.5 * self.square_integral, rel=2e-3)
        assert full == pytest.approx(zero_trace + 1.0 / 60.0, rel=1e-8)


class TestEmbeddingInequalities:
    """Sampled instances of the embedding inequalities."""

    def setup_method(self):
        """Set up test fixtures."""
        self.ctx = model_context()
        rng = np.random.default_rng(11)
        self.samples = [
            self.ctx.grid(row) for row in fourier_sine_samples(rng, self.ctx.nodes, self.ctx.T, 12)
        ]

    def test_seminorm_modular_sandwich(self):
        """Test the seminorm/modular chain on both sides of [u] = 1 and the skip at zero."""
        for amplitude in (0.05, 20.0):
            report = seminorm_modular_sandwich_check(self.ctx, sine(self.ctx.grid_size, amplitude=amplitude))
            assert report.passed, report.note
        assert seminorm_modular_sandwich_check(self.ctx, GridFunction.zeros(1.0, self.ctx.grid_size)).skipped

    def test_integral_bound(self):
        """Test ‖I^α v‖ against c∓ ‖v‖^(φ±/φ∓) for large, small and zero v."""
        n = self.ctx.grid_size
        for value in (5.0, 0.01):
            report = integral_bound_check(self.ctx, GridFunction(np.full(n, value)))
            assert report.passed and not report.skipped, report.note
        zero = integral_bound_check(self.ctx, GridFunction.zeros(1.0, n))
        assert zero.passed and zero.lhs == 0.0

    def test_poincare(self):
        """Test ‖u‖ ≤ c∓ [u]^(φ±/φ∓) on random zero-trace samples."""
        for u in self.samples:
            report = poincare_check(self.ctx, u)
            assert not report.failed, report.note
            if not report.skipped:
                assert report.details["reconstructed_norm"] == pytest.approx(report.lhs, rel=5e-2)

    def test_poincare_needs_zero_trace(self):
        """Test that nonzero boundary values are refused."""
        with pytest.raises(PreconditionError):
            poincare_check(self.ctx, GridFunction(np.ones(self.ctx.grid_size)))

    def test_sup_bound(self):
        """Test max |u| ≤ r_sup [u] and the skip on nonzero boundary values."""
        for u in self.samples:
            assert sup_bound_check(self.ctx, u).passed
        assert sup_bound_check(self.ctx, GridFunction(np.ones(self.ctx.grid_size))).skipped

    def test_norm_equivalence(self):
        """Test that ‖u‖_K / [u] stays within the equivalence bounds."""
        report = norm_equivalence_probe(self.ctx, self.samples)
        assert report.passed
        assert report.details["min_ratio"] >= 1.0
        assert norm_equivalence_probe(self.ctx, []).skipped


class TestPsiCondition:
    """ψ′(t)(ψ(s) − ψ(t))^(α−1) < 1 on node pairs."""

    def test_pairs_include_neighbours(self):
        """Test that every pair at least one step apart is formed, neighbours included."""
        t, s, values = psi_condition_pairs(PsiWeight.linear(), 0.5, np.linspace(0.0, 1.0, 5))
        assert t.size == 10
        assert np.min(s - t) == pytest.approx(0.25)
        assert np.all(s > t)
        np.testing.assert_allclose(values, (s - t) ** -0.5)

    def test_unit_interval_violates_condition(self):
        """Test that ψ(t) = t on [0, 1] violates the condition but only informs."""
        report = psi_condition_check(PsiWeight.linear(), 0.9, np.linspace(0.0, 1.0, 33))
        assert report.informational
        assert not report.passed and not report.failed
        assert report.details["violations"] == report.details["pairs"]

    def test_long_interval_satisfies_condition_far_apart(self):
        """Test that pairs further apart than 1 satisfy the condition for ψ(t) = t."""
        nodes = np.linspace(0.0, 4.0, 17)
        report = psi_condition_check(PsiWeight.linear(T=4.0), 0.5, nodes)
        assert 0 < report.details["violations"] < report.details["pairs"]
        assert report.details["max_violation_separation"] <= 1.0

    def test_alpha_range(self):
        """Test that α must lie in (0, 1)."""
        with pytest.raises(DomainError):
            psi_condition_pairs(PsiWeight.linear(), 1.0, np.linspace(0.0, 1.0, 5))
