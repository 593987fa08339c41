"""
Tests for the energy functional, the mountain-pass solver and the
Ambrosetti–Rabinowitz diagnostics on the model problem
−ᴴD_right(ᴴD u) = |u|⁴ u, u(0) = u(1) = 0.
"""

import numpy as np
import pytest

from src.application.bvp_solver import (
    ar_condition_check,
    build_problem,
    classical_limit_oracle,
    energy,
    geometry_check,
    lemma_growth_checks,
    mountain_pass_solve,
    pairing,
    ps_diagnostic,
    residual,
    residual_norm,
)
from src.application.space_k import has_zero_trace, k_modular, k_norm
from src.core.entities.musielak import GridFunction
from src.core.entities.problem import Geometry, Nonlinearity, SolverParams
from src.core.exceptions import DomainError, PreconditionError
from src.infrastructure.lib.quadrature import fourier_sine_samples
from tests.factories import (
    model_context,
    model_problem,
    parabola,
    parabola_derivative_square_integral,
    sine,
)


class TestProblemSetup:
    """Problem construction and nonlinearity families."""

    def test_model_problem_constants(self, small_problem):
        """Test k = 2² for p = 2 and ℓ = inf H(t, ±1) = 1/6."""
        assert small_problem.k_delta2 == pytest.approx(4.0)
        assert small_problem.ell == pytest.approx(1.0 / 6.0)
        assert small_problem.mu == 6.0

    def test_mu_must_exceed_delta2_constant(self):
        """Test that μ ≤ k is refused."""
        with pytest.raises(PreconditionError):
            build_problem(model_context(65), Nonlinearity.power(3.0))

    def test_zero_nonlinearity_needs_explicit_mu(self):
        """Test that a nonlinearity without exponent needs μ from the caller."""
        with pytest.raises(PreconditionError):
            build_problem(model_context(65), Nonlinearity.zero())
        assert build_problem(model_context(65), Nonlinearity.zero(), mu=6.0).ell == 0.0

    def test_power_nonlinearity(self):
        """Test h, H and ∂h/∂u of the power family."""
        nl = Nonlinearity.power(4.0)
        u = np.array([-2.0, 0.0, 1.5])
        np.testing.assert_allclose(nl.h(0.0, u), [-8.0, 0.0, 1.5**3])
        np.testing.assert_allclose(nl.primitive(0.0, u), [4.0, 0.0, 1.5**4 / 4.0])
        np.testing.assert_allclose(nl.slope(0.0, u), [12.0, 0.0, 3.0 * 1.5**2])


class TestEnergy:
    """Energy, residual and pairing."""

    def setup_method(self):
        """Set up test fixtures."""
        self.prob = model_problem(129)
        self.n = self.prob.ctx.grid_size

    def test_energy_at_zero(self):
        """Test J(0) = 0 with vanishing residual."""
        zero = GridFunction.zeros(1.0, self.n)
        assert energy(self.prob, zero) == 0.0
        assert residual_norm(self.prob, zero) == 0.0
        assert residual(self.prob, zero).is_zero

    def test_energy_sign(self):
        """Test J > 0 near 0 and J < 0 far out along the bump."""
        assert energy(self.prob, parabola(self.n, 0.5)) > 0.0
        assert energy(self.prob, parabola(self.n, 20.0)) < 0.0

    def test_residual_is_energy_derivative(self):
        """Test that ⟨residual(u), φ⟩ is the directional derivative of J along φ."""
        u = sine(self.n, amplitude=1.5)
        direction = parabola(self.n)
        eps = 1e-5
        difference = (
            energy(self.prob, u + direction * eps) - energy(self.prob, u - direction * eps)
        ) / (2.0 * eps)
        derivative = pairing(self.prob, residual(self.prob, u), direction)
        assert derivative == pytest.approx(difference, rel=1e-6)

    def test_residual_has_zero_trace(self):
        """Test that the residual representative vanishes on the boundary."""
        assert has_zero_trace(residual(self.prob, sine(self.n)))

    def test_state_must_have_zero_trace(self):
        """Test that energy and residual refuse nonzero boundary values and foreign grids."""
        with pytest.raises(PreconditionError):
            energy(self.prob, GridFunction(np.ones(self.n)))
        with pytest.raises(DomainError):
            residual(self.prob, sine(65))

    def test_random_directional_derivatives(self):
        """Test the residual against central differences of J on 20 random (u, φ) pairs."""
        rng = np.random.default_rng(17)
        nodes = self.prob.ctx.nodes
        states = fourier_sine_samples(rng, nodes, 1.0, 20, log_amplitude=(-0.5, 0.0))
        directions = fourier_sine_samples(rng, nodes, 1.0, 20, log_amplitude=(0.0, 0.0))
        eps = 1e-4
        for state, direction in zip(states, directions):
            u, phi = GridFunction(state), GridFunction(direction)
            difference = (energy(self.prob, u + phi * eps) - energy(self.prob, u - phi * eps)) / (2.0 * eps)
            derivative = pairing(self.prob, residual(self.prob, u), phi)
            assert abs(derivative - difference) <= 1e-5 * max(abs(difference), 1.0)

    def test_residual_tends_to_second_difference(self):
        """Test that at α close to 1 the residual is −u″ − u⁵ with the three-point second difference."""
        prob = model_problem(65, alpha=0.9999)
        u = sine(65)
        samples, h = u.samples, u.step
        expected = -(samples[2:] - 2.0 * samples[1:-1] + samples[:-2]) / h**2 - samples[1:-1] ** 5
        computed = residual(prob, u).samples[1:-1]
        np.testing.assert_allclose(
            computed[:-1], expected[:-1], rtol=0.0, atol=1e-2 * np.max(np.abs(expected))
        )


class TestClosedFormEnergy:
    """Energy of u(t) = t(1 − t) with p = 2, ψ(t) = t, α = 0.9, β = 1."""

    def setup_method(self):
        """Set up test fixtures."""
        self.ctx = model_context(1025)
        self.u = parabola(1025)

    def test_energy_without_nonlinearity(self):
        """Test J(u) = ½ ∫ (Du)² = ⁰ρ(u) when h ≡ 0."""
        prob = build_problem(self.ctx, Nonlinearity.zero(), mu=6.0)
        value = energy(prob, self.u)
        assert value > 0.0
        assert value == pytest.approx(0.5 * parabola_derivative_square_integral(0.9), rel=5e-3)
        assert value == pytest.approx(k_modular(self.ctx, self.u)[1], rel=5e-3)

    def test_scaled_parabola_has_negative_energy(self):
        """Test J(10u) ≈ 11.8 − 13.9 < 0 for h(u) = |u|⁴u."""
        prob = model_problem(1025)
        assert energy(prob, parabola(1025, 10.0)) < 0.0


class TestDiagnostics:
    """Ambrosetti–Rabinowitz and growth diagnostics."""

    def test_ar_condition(self, small_problem):
        """Test 0 < μH ≤ h u for the power nonlinearity."""
        report = ar_condition_check(small_problem)
        assert report.passed, report.note

    def test_ar_condition_fails_for_zero(self):
        """Test that h ≡ 0 violates the strict positivity of μH."""
        prob = build_problem(model_context(65), Nonlinearity.zero(), mu=6.0)
        report = ar_condition_check(prob)
        assert report.failed
        assert "worst violator" in report.note

    def test_ar_condition_with_weaker_exponent(self):
        """Test that μ above the nonlinearity's own exponent breaks μH ≤ h u."""
        prob = build_problem(model_context(65), Nonlinearity.power(5.0), mu=6.0)
        assert ar_condition_check(prob).failed

    def test_ar_condition_reports_worst_violator(self):
        """Test that h(u) = u with μ = 6 fails at the largest |u|, where 6H = 3u² exceeds h u = u²."""
        prob = build_problem(model_context(65), Nonlinearity.power(2.0), mu=6.0)
        report = ar_condition_check(prob)
        assert report.failed
        assert report.details["worst_t"] == 0.0
        assert report.details["worst_u"] == pytest.approx(-1000.0)
        assert report.lhs == pytest.approx(3e6)
        assert report.rhs == pytest.approx(1e6)
        assert report.margin < 0.0

    def test_primitive_growth(self, small_problem):
        """Test the pointwise and integrated growth bounds of H."""
        report = lemma_growth_checks(small_problem)
        assert report.passed, report.note
        assert report.details["pairs"] == 20

    def test_ps_diagnostic_needs_history(self, small_problem):
        """Test that an empty iterate history is refused."""
        with pytest.raises(PreconditionError):
            ps_diagnostic(small_problem, [])


class TestMountainPass:
    """Geometry and mountain-pass iteration on the model problem."""

    def setup_method(self):
        """Set up test fixtures."""
        self.prob = model_problem(129)
        self.params = SolverParams()

    def test_geometry_of_model_problem(self):
        """Test L ≈ 0.612 and θ ≈ 0.286, and the far endpoint beyond the rim with J(e) < 0."""
        geometry = geometry_check(self.prob, self.params)
        assert geometry.L == pytest.approx(0.612, abs=5e-3)
        assert geometry.theta == pytest.approx(0.286, abs=5e-3)
        assert geometry.phi_exponent == 2.0
        assert energy(self.prob, geometry.e) < 0.0

    def test_solve_finds_nontrivial_critical_point(self):
        """Test convergence to a critical point above the rim level with PS bound along the iterates."""
        result = mountain_pass_solve(self.prob, self.params)
        assert result.converged, result.note
        assert result.residual_norm <= self.params.tolerance
        assert result.energy >= result.theta
        assert has_zero_trace(result.u_star)
        assert result.history and result.history[-1].residual_norm == pytest.approx(result.residual_norm)
        assert ps_diagnostic(self.prob, result.history).passed

    def test_solve_is_reproducible(self):
        """Test that the same seed gives the same critical point."""
        first = mountain_pass_solve(self.prob, self.params)
        second = mountain_pass_solve(self.prob, self.params)
        np.testing.assert_array_equal(first.u_star.samples, second.u_star.samples)
        assert first.iterations == second.iterations

    def test_tiny_budget_does_not_converge(self):
        """Test that exhausting the budget is reported, not raised."""
        result = mountain_pass_solve(self.prob, SolverParams(budget=1))
        assert not result.converged
        assert "budget" in result.note

    def test_critical_value_between_rim_and_path_maximum(self):
        """Test θ ≤ J(u*) ≤ max J on the final path and ‖u*‖_K ≥ L/2."""
        result = mountain_pass_solve(self.prob, self.params)
        assert result.converged, result.note
        assert result.theta <= result.energy <= result.path_max_energy
        assert k_norm(self.prob.ctx, result.u_star) >= 0.5 * result.L

    def test_trivial_critical_point_is_not_converged(self):
        """Test that without nonlinearity the path collapses to 0 and the solve reports it."""
        prob = build_problem(model_context(65), Nonlinearity.zero(), mu=6.0)
        geometry = Geometry(L=0.5, theta=0.05, e=sine(65, amplitude=4.0), phi_exponent=2.0)
        result = mountain_pass_solve(prob, SolverParams(), geometry)
        assert not result.converged
        assert "trivial" in result.note
        assert result.u_star.max_abs <= 1e-8


class TestClassicalLimit:
    """Shooting oracle for −u″ = u⁵ and the α → 1 limit of the solver."""

    def test_oracle_solves_classical_problem(self):
        """Test the boundary values, positivity and the ODE residual of the shooting solution."""
        u = classical_limit_oracle(n=513)
        assert u.samples[0] == 0.0 and u.samples[-1] == 0.0
        assert np.all(u.samples[1:-1] > 0.0)
        second = np.diff(u.samples, 2) / u.step**2
        np.testing.assert_allclose(-second, u.samples[1:-1] ** 5, rtol=1e-3, atol=1e-3)

    def test_oracle_domain(self):
        """Test that μ ≤ 2 is refused."""
        with pytest.raises(DomainError):
            classical_limit_oracle(mu=2.0)

    @pytest.mark.slow
    def test_solver_approaches_classical_solution(self):
        """Test that α close to 1 reproduces the classical positive solution."""
        prob = model_problem(257, alpha=0.999)
        result = mountain_pass_solve(prob)
        assert result.converged, result.note
        oracle = classical_limit_oracle(n=257)
        u_star = result.u_star.samples * np.sign(result.u_star.samples.sum())
        assert np.max(np.abs(u_star - oracle.samples)) <= 5e-2 * oracle.max_abs

    @pytest.mark.slow
    def test_distance_to_classical_solution_shrinks(self):
        """Test that the distance to the classical solution decreases from α = 0.95 to α = 0.99."""
        oracle = classical_limit_oracle(n=257)
        distances = []
        for alpha in (0.95, 0.99):
            result = mountain_pass_solve(model_problem(257, alpha=alpha))
            assert result.converged, result.note
            u_star = result.u_star.samples * np.sign(result.u_star.samples.sum())
            distances.append(np.max(np.abs(u_star - oracle.samples)) / oracle.max_abs)
        assert distances[1] < distances[0]
        assert distances[1] <= 0.15
