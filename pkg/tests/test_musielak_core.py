"""
Tests for Musielak functions: closed forms, quadrature fallbacks, modulars,
Luxemburg norms and the sampled structural inequalities.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.application.musielak_core import (
    conjugate_function,
    conjugate_value,
    convexity_check,
    delta2_constant,
    density_value,
    enforce_convexity,
    exponents,
    holder_check,
    inverse_density,
    luxemburg_norm,
    modular,
    modular_convergence_check,
    modular_norm_relations_check,
    norm_power_chain,
    phi_value,
    sandwich_check,
    structure_check,
    young_type_check,
)
from src.core.entities.musielak import GridFunction, MusielakFunction
from src.core.enums.families import ConvexityPolicy, MusielakFamily
from src.core.exceptions import DomainError, InvariantViolationError
from tests.factories import sine

SMALL_T = np.logspace(-2, 2, 9)


def cubic_custom(phi_lower: float = 3.0, phi_upper: float = 3.0) -> MusielakFunction:
    """Φ(t) = |t|³/3 without a closed form, so every evaluation goes through quadrature."""
    return MusielakFunction.custom(
        kernel_a=lambda x, t: np.asarray(t, dtype=float) + 0.0 * np.asarray(x, dtype=float),
        phi_lower=phi_lower,
        phi_upper=phi_upper,
        label="cubic",
    )


class TestMusielakFunction:
    """Construction and closed-form evaluation."""

    def test_declared_exponents_are_validated(self):
        """Test that φ⁻ ≤ 1 or φ⁺ < φ⁻ is rejected at construction."""
        with pytest.raises(InvariantViolationError):
            MusielakFunction.constant_power(1.0)
        with pytest.raises(InvariantViolationError):
            cubic_custom(phi_lower=3.0, phi_upper=2.5)

    def test_constant_power_closed_forms(self):
        """Test φ, Φ, φ⁻¹ and Φ̄ of the constant-power family."""
        mf = MusielakFunction.constant_power(3.0)
        assert phi_value(mf, 0.3, 2.0) == pytest.approx(8.0 / 3.0)
        assert phi_value(mf, 0.3, -2.0) == pytest.approx(8.0 / 3.0)
        assert density_value(mf, 0.3, -2.0) == pytest.approx(-4.0)
        assert inverse_density(mf, 0.3, 4.0) == pytest.approx(2.0)
        assert conjugate_value(mf, 0.3, 4.0) == pytest.approx(4.0**1.5 / 1.5)

    def test_affine_power_depends_on_position(self):
        """Test that the affine family evaluates |t|^p(x)/p(x) with p(x) = p0 + p1 x / T."""
        mf = MusielakFunction.affine_power(2.0, 1.0, T=2.0)
        assert phi_value(mf, 0.0, 2.0) == pytest.approx(2.0)
        assert phi_value(mf, 2.0, 2.0) == pytest.approx(8.0 / 3.0)
        assert mf.phi_lower == 2.0 and mf.phi_upper == 3.0

    def test_quadrature_matches_closed_form(self):
        """Test the quadrature and bisection fallbacks of a custom kernel against |t|³/3."""
        mf = cubic_custom()
        assert phi_value(mf, 0.5, 2.0) == pytest.approx(8.0 / 3.0, rel=1e-9)
        assert inverse_density(mf, 0.5, 4.0) == pytest.approx(2.0, rel=1e-10)
        assert conjugate_value(mf, 0.5, 4.0) == pytest.approx(16.0 / 3.0, rel=1e-8)

    def test_negative_arguments_rejected(self):
        """Test that φ⁻¹ and Φ̄ refuse negative arguments and non-finite input is rejected."""
        mf = MusielakFunction.constant_power(2.0)
        with pytest.raises(DomainError):
            inverse_density(mf, 0.0, -1.0)
        with pytest.raises(DomainError):
            conjugate_value(mf, 0.0, -1.0)
        with pytest.raises(DomainError):
            phi_value(mf, 0.0, np.nan)

    def test_conjugate_function_of_power_family(self):
        """Test that the conjugate of |t|^p/p is |t|^q/q with 1/p + 1/q = 1."""
        conjugate = conjugate_function(MusielakFunction.constant_power(3.0))
        assert conjugate.family_tag == MusielakFamily.CONSTANT_POWER
        assert conjugate.phi_lower == pytest.approx(1.5)
        assert phi_value(conjugate, 0.0, 4.0) == pytest.approx(8.0 / 1.5)

    def test_conjugate_function_of_affine_family(self):
        """Test that the conjugate of the affine family swaps and dualizes the exponent bounds."""
        conjugate = conjugate_function(MusielakFunction.affine_power(2.0, 1.0))
        assert conjugate.phi_lower == pytest.approx(1.5)
        assert conjugate.phi_upper == pytest.approx(2.0)
        assert phi_value(conjugate, 1.0, 2.0) == pytest.approx(2.0**1.5 / 1.5)


class TestExponentsAndDelta2:
    """Sampled growth exponents and the Δ₂ constant."""

    def test_power_family_exponents(self):
        """Test that the sampled exponents of the affine family are min and max of p(x)."""
        lower, upper = exponents(MusielakFunction.affine_power(2.0, 1.5))
        assert lower == pytest.approx(2.0)
        assert upper == pytest.approx(3.5)

    def test_custom_exponents_by_quadrature(self):
        """Test that t φ(t) / Φ(t) ≡ 3 is recovered from quadrature."""
        lower, upper = exponents(cubic_custom(), np.array([0.0, 0.5]), SMALL_T)
        assert lower == pytest.approx(3.0, rel=1e-6)
        assert upper == pytest.approx(3.0, rel=1e-6)

    def test_contradicting_declaration_raises(self):
        """Test that declared bounds excluding the measured exponent are reported."""
        with pytest.raises(InvariantViolationError):
            exponents(cubic_custom(3.5, 4.0), np.array([0.5]), SMALL_T)

    def test_exponents_need_positive_t(self):
        """Test that t = 0 is refused as an exponent sample."""
        with pytest.raises(DomainError):
            exponents(MusielakFunction.constant_power(2.0), None, np.array([0.0, 1.0]))

    def test_delta2_constant(self):
        """Test K = 2^max p for power families and the sampled ratio for custom kernels."""
        assert delta2_constant(MusielakFunction.constant_power(3.0)) == pytest.approx(8.0)
        assert delta2_constant(MusielakFunction.affine_power(2.0, 1.0)) == pytest.approx(8.0)
        assert delta2_constant(cubic_custom(), SMALL_T, np.array([0.5])) == pytest.approx(8.0, rel=1e-8)


class TestModularAndNorm:
    """Trapezoid modular and Luxemburg norm."""

    def setup_method(self):
        """Set up test fixtures."""
        self.mf = MusielakFunction.constant_power(2.0)

    def test_modular_of_constant(self):
        """Test ρ(c) = c²/2 on [0, 1] for p = 2."""
        assert modular(self.mf, GridFunction(np.full(33, 3.0))) == pytest.approx(4.5)

    def test_luxemburg_norm_of_constant(self):
        """Test ‖c‖ = c/√2 for p = 2, solving ρ(c/λ) = 1."""
        assert luxemburg_norm(self.mf, GridFunction(np.full(33, 3.0))) == pytest.approx(
            3.0 / np.sqrt(2.0), rel=1e-8
        )

    def test_luxemburg_norm_of_zero(self):
        """Test that the zero function has norm 0."""
        assert luxemburg_norm(self.mf, GridFunction.zeros(1.0, 17)) == 0.0

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=-1e3, max_value=1e3).filter(lambda s: abs(s) > 1e-3))
    def test_luxemburg_norm_is_homogeneous(self, scale):
        """Test ‖s u‖ = |s| ‖u‖ for the variable-exponent family."""
        mf = MusielakFunction.affine_power(2.0, 1.0)
        u = sine(65)
        assert luxemburg_norm(mf, u * scale) == pytest.approx(abs(scale) * luxemburg_norm(mf, u), rel=1e-7)

    @settings(max_examples=25, deadline=None)
    @given(
        st.floats(min_value=-50.0, max_value=50.0),
        st.floats(min_value=-50.0, max_value=50.0),
        st.integers(min_value=1, max_value=5),
    )
    def test_luxemburg_norm_triangle_inequality(self, a, b, mode):
        """Test ‖u + v‖ ≤ ‖u‖ + ‖v‖ for a sine and a shifted higher mode."""
        mf = MusielakFunction.affine_power(2.0, 1.0)
        nodes = np.linspace(0.0, 1.0, 65)
        u = GridFunction(a * np.sin(np.pi * nodes))
        v = GridFunction(b * np.cos(mode * np.pi * nodes) + 0.5)
        total = luxemburg_norm(mf, u + v)
        assert total <= luxemburg_norm(mf, u) + luxemburg_norm(mf, v) + 1e-9 * max(1.0, total)

    @settings(max_examples=25, deadline=None)
    @given(st.floats(min_value=1.2, max_value=6.0), st.floats(min_value=1e-2, max_value=1e2))
    def test_holder_for_constant_power(self, p, scale):
        """Test the Hölder-type bound for every exponent and amplitude."""
        mf = MusielakFunction.constant_power(p)
        nodes = np.linspace(0.0, 1.0, 65)
        u = GridFunction(scale * np.sin(np.pi * nodes))
        v = GridFunction(np.exp(nodes) / scale)
        assert holder_check(mf, u, v).passed

    def test_norm_power_chain(self):
        """Test the ordering of the norm powers around the unit norm."""
        assert norm_power_chain(2.0, 2.0, 3.0) == (4.0, 8.0)
        assert norm_power_chain(0.5, 2.0, 3.0) == (0.125, 0.25)


class TestSampledInequalities:
    """Reports of the sampled inequalities between modulars and norms."""

    def setup_method(self):
        """Set up test fixtures."""
        self.mf = MusielakFunction.affine_power(2.0, 1.0)
        self.rng = np.random.default_rng(7)

    def test_holder_passes_on_random_pairs(self):
        """Test |∫ u v| ≤ 2 ‖u‖_Φ ‖v‖_Φ̄ on random samples."""
        nodes = np.linspace(0.0, 1.0, 65)
        for _ in range(5):
            u = GridFunction(self.rng.standard_normal(65) * 10.0 ** self.rng.uniform(-1, 1))
            v = GridFunction(np.cos(3.0 * nodes) + self.rng.standard_normal(65))
            report = holder_check(self.mf, u, v)
            assert report.passed, report.note

    def test_holder_fails_with_too_small_factor(self):
        """Test that the pairing constant matters: u = v = sin with p = 2 is tight at M = 2."""
        mf = MusielakFunction.constant_power(2.0)
        u = sine(65)
        assert holder_check(mf, u, u, holder_factor=2.0).passed
        assert holder_check(mf, u, u, holder_factor=0.5).failed

    def test_holder_rejects_grid_mismatch(self):
        """Test that u and v must share a grid."""
        with pytest.raises(DomainError):
            holder_check(self.mf, sine(33), sine(65))

    def test_young_and_sandwich(self):
        """Test Φ̄(φ(t)) ≤ φ⁺ Φ(t) and Φ(s) ≤ s φ(s) ≤ Φ(2s) for power families."""
        for mf in (self.mf, MusielakFunction.constant_power(1.5), MusielakFunction.constant_power(4.0)):
            assert young_type_check(mf).passed
            assert sandwich_check(mf).passed

    def test_modular_norm_relations(self):
        """Test both sides of the unit norm and the skips at zero and at norm one."""
        mf = MusielakFunction.constant_power(2.0)
        above = modular_norm_relations_check(self.mf, GridFunction(np.full(33, 3.0)))
        below = modular_norm_relations_check(self.mf, GridFunction(np.full(33, 0.1)))
        assert above.passed and above.note == "norm > 1"
        assert below.passed and below.note == "norm < 1"
        assert modular_norm_relations_check(mf, GridFunction.zeros(1.0, 33)).skipped
        assert modular_norm_relations_check(mf, GridFunction(np.full(33, np.sqrt(2.0)))).skipped

    def test_modular_convergence(self):
        """Test that modular and norm vanish together along a shrinking perturbation."""
        assert modular_convergence_check(self.mf, sine(65, amplitude=50.0)).passed
        assert modular_convergence_check(self.mf, GridFunction.zeros(1.0, 65)).skipped

    def test_structure_conditions(self):
        """Test that power families satisfy the structure conditions and a decreasing φ does not."""
        assert structure_check(self.mf).passed
        decreasing = MusielakFunction.custom(
            kernel_a=lambda x, t: 1.0 / np.asarray(t, dtype=float) ** 2,
            phi_lower=2.0,
            phi_upper=2.0,
            primitive=lambda x, t: np.log1p(t),
        )
        report = structure_check(decreasing)
        assert report.failed
        assert "phi strictly increasing" in report.note

    def test_convexity_policy(self):
        """Test that Φ(√t) is convex for p ≥ 2 and that p < 2 warns or fails by policy."""
        assert convexity_check(MusielakFunction.constant_power(3.0)).passed
        soft = MusielakFunction.constant_power(1.5)
        assert convexity_check(soft).failed
        warned = enforce_convexity(soft, ConvexityPolicy.WARN)
        assert warned.informational and not warned.failed
        with pytest.raises(InvariantViolationError):
            enforce_convexity(soft, ConvexityPolicy.FAIL)


FAMILIES = [
    pytest.param(MusielakFunction.constant_power(2.0), id="p=2"),
    pytest.param(MusielakFunction.constant_power(3.0), id="p=3"),
    pytest.param(MusielakFunction.affine_power(2.0, 1.0), id="p(x)=2+x"),
]


class TestRandomSamples:
    """The pointwise and integral inequalities on 1000 random samples per family."""

    def setup_method(self):
        """Set up test fixtures."""
        self.rng = np.random.default_rng(20240601)

    @pytest.mark.parametrize("mf", FAMILIES)
    def test_young_and_sandwich_on_random_points(self, mf):
        """Test both pointwise inequalities on 1000 random (x, t) with t spread over six decades."""
        x = self.rng.uniform(0.0, 1.0, 1000)
        t = 10.0 ** self.rng.uniform(-3.0, 3.0, 1000)
        young = young_type_check(mf, x, t)
        sandwich = sandwich_check(mf, t, x)
        assert young.passed, young.note
        assert sandwich.passed, sandwich.note
        assert young.details["samples"] == sandwich.details["samples"] == 1000

    @pytest.mark.parametrize("mf", FAMILIES)
    def test_unit_modular_at_unit_norm(self, mf):
        """Test ρ(u / ‖u‖_Φ) = 1 for random nonzero u."""
        for _ in range(10):
            u = GridFunction(self.rng.standard_normal(65) * 10.0 ** self.rng.uniform(-2.0, 2.0))
            assert modular(mf, u * (1.0 / luxemburg_norm(mf, u))) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.slow
    @pytest.mark.parametrize("mf", FAMILIES)
    def test_holder_on_random_pairs(self, mf):
        """Test the Hölder-type bound on 1000 random pairs."""
        for _ in range(1000):
            u = GridFunction(self.rng.standard_normal(65) * 10.0 ** self.rng.uniform(-2.0, 2.0))
            v = GridFunction(self.rng.standard_normal(65) * 10.0 ** self.rng.uniform(-2.0, 2.0))
            report = holder_check(mf, u, v)
            assert report.passed, report.note
