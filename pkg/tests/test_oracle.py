import numpy as np
import pytest

from fracback import (
    ManufacturedCase,
    gronwall_floor,
    mode_equation_residual,
    mode_functionals,
    reconstruct_u0_spectral,
    sine_coefficients,
    solve_mode,
)

MU = lambda t: 1.0 + t


class TestSineCoefficients:
    def test_pure_mode_orthogonality(self):
        coeffs = sine_coefficients(lambda x: np.sin(np.pi * x), 1.0, 6)
        assert coeffs[0] == pytest.approx(1.0, abs=1e-8)
        assert np.abs(coeffs[1:]).max() < 1e-8

    def test_zero_function(self):
        coeffs = sine_coefficients(lambda x: np.zeros_like(x), 1.0, 4)
        np.testing.assert_array_equal(coeffs, 0.0)

    def test_parabola_closed_form(self):
        # x(l-x) has coefficients 8/(k*pi)^3 for odd k, 0 for even k
        coeffs = sine_coefficients(lambda x: x * (1.0 - x), 1.0, 7)
        for k in range(1, 8):
            expected = 8.0 / (k * np.pi) ** 3 if k % 2 == 1 else 0.0
            assert coeffs[k - 1] == pytest.approx(expected, abs=1e-10)

    def test_sample_array_input(self):
        x = np.linspace(0.0, 1.0, 1025)
        coeffs = sine_coefficients(np.sin(2 * np.pi * x), 1.0, 3)
        assert coeffs[1] == pytest.approx(1.0, abs=1e-8)

    def test_batched_samples(self):
        x = np.linspace(0.0, 1.0, 513)
        stack = np.vstack([np.sin(np.pi * x), np.sin(3 * np.pi * x)])
        coeffs = sine_coefficients(stack, 1.0, 3)
        assert coeffs.shape == (2, 3)
        assert coeffs[0, 0] == pytest.approx(1.0, abs=1e-8)
        assert coeffs[1, 2] == pytest.approx(1.0, abs=1e-8)


class TestSolveMode:
    def test_zero_data_zero_mode(self):
        sol = solve_mode(2, 1.0, 0.5, MU, 1.0, u0_k=0.0, fine_M=200)
        np.testing.assert_array_equal(sol.values, 0.0)

    def test_unit_response_nonincreasing(self):
        sol = solve_mode(3, 1.0, 0.5, MU, 1.0, u0_k=1.0, fine_M=2000)
        assert np.all(np.diff(sol.values) <= 1e-14)
        assert sol.values[0] == 1.0

    def test_unit_response_respects_gronwall_floor(self):
        floor = gronwall_floor(MU, 1.0)
        assert floor == pytest.approx(0.5, abs=1e-12)
        for k in (1, 4, 9):
            sol = solve_mode(k, 1.0, 0.5, MU, 1.0, u0_k=1.0, fine_M=2000)
            assert sol.terminal >= floor - 1e-3

    def test_rejects_nonpositive_mu(self):
        with pytest.raises(ValueError):
            solve_mode(1, 1.0, 0.5, lambda t: 1.0 - 2.0 * t, 1.0, u0_k=1.0, fine_M=100)

    def test_amplification_bounded(self):
        # 1/unit_response <= exp(T/mu_0) uniformly in the mode index
        fns = mode_functionals(range(1, 21), 1.0, 0.5, MU, 1.0, 2000)
        bound = np.exp(1.0 / 1.0)
        for fn in fns:
            assert 1.0 / fn.unit_response <= bound

    def test_residual_shrinks_with_refinement(self):
        residuals = []
        for fine_M in (250, 500, 1000):
            sol = solve_mode(2, 1.0, 0.5, MU, 1.0, u0_k=1.0, fine_M=fine_M)
            residuals.append(mode_equation_residual(sol, 0.5, MU))
        assert residuals[1] < residuals[0]
        assert residuals[2] < residuals[1]

    def test_positivity_across_alphas(self):
        for alpha in (0.1, 0.3, 0.5, 0.7, 0.9):
            fns = mode_functionals(range(1, 21), 1.0, alpha, MU, 1.0, 2000)
            units = np.array([fn.unit_response for fn in fns])
            assert np.all(units > 0.0)
            assert np.all(units <= 1.0)


class TestSpectralReconstruction:
    def test_manufactured_single_mode_recovery(self):
        case = ManufacturedCase(alpha=0.5)
        x = np.linspace(0.0, 1.0, 201)[1:-1]
        u0 = reconstruct_u0_spectral(
            case.terminal, case.source, 1.0, 0.5, case.mu, 1.0,
            K=8, fine_M=10_000, x_eval=x,
        )
        assert np.abs(u0 - case.initial(x)).max() < 1e-3

    def test_homogeneous_scaling_linearity(self):
        psi = lambda x: 1.5 * np.sin(np.pi * x)
        psi2 = lambda x: 3.0 * np.sin(np.pi * x)
        x = np.linspace(0.0, 1.0, 65)[1:-1]
        one = reconstruct_u0_spectral(psi, None, 1.0, 0.5, MU, 1.0, 4, 500, x)
        two = reconstruct_u0_spectral(psi2, None, 1.0, 0.5, MU, 1.0, 4, 500, x)
        np.testing.assert_allclose(two, 2.0 * one, rtol=1e-12)

    def test_data_shift_with_fixed_forcing(self):
        # u0(2*psi, f) - u0(psi, f) = u0(psi, 0): the forced part cancels
        case = ManufacturedCase(alpha=0.5)
        x = np.linspace(0.0, 1.0, 65)[1:-1]
        kwargs = dict(l=1.0, alpha=0.5, mu=case.mu, T=1.0, K=4, fine_M=500, x_eval=x)
        base = reconstruct_u0_spectral(case.terminal, case.source, **kwargs)
        scaled = reconstruct_u0_spectral(
            lambda xx: 2.0 * case.terminal(xx), case.source, **kwargs
        )
        hom = reconstruct_u0_spectral(case.terminal, None, **kwargs)
        np.testing.assert_allclose(scaled - base, hom, rtol=1e-10, atol=1e-12)
