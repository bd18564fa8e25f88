import numpy as np
import pytest

from fracback import (
    ManufacturedCase,
    ProblemConfig,
    assemble_step_matrix,
    build_graded_time_mesh,
    build_space_grid,
    discrete_norms,
    gamma_function,
    l1_coefficients,
    solve_forward,
    stability_energy_ratio,
    step,
    terminal_state,
)


def homogeneous_config(alpha=0.5, N=16, M=8, r=1.0, mu=lambda t: 1.0 + t):
    return ProblemConfig(
        alpha=alpha,
        grid=build_space_grid(1.0, N),
        mesh=build_graded_time_mesh(1.0, M, r),
        mu=mu,
        source=None,
    )


class TestConfig:
    def test_rejects_alpha_outside_open_interval(self):
        for alpha in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                homogeneous_config(alpha=alpha)

    def test_rejects_negative_mu(self):
        with pytest.raises(ValueError):
            homogeneous_config(mu=lambda t: 0.5 - t)

    def test_mu_zero_allowed(self):
        config = homogeneous_config(mu=lambda t: 0.0)
        assert np.all(config.mu_values == 0.0)

    def test_fingerprint_distinguishes_configs(self):
        base = homogeneous_config()
        assert base.fingerprint() == homogeneous_config().fingerprint()
        assert base.fingerprint() != homogeneous_config(alpha=0.6).fingerprint()
        assert base.fingerprint() != homogeneous_config(N=18).fingerprint()
        assert base.fingerprint() != homogeneous_config(mu=lambda t: 2.0 + t).fingerprint()


class TestStepMatrix:
    def test_direct_evaluation(self):
        # uniform mesh with T=1, M=4 puts t_1=0.25, so mu(t_1)=1.25 and
        # d_{1,1} = tau**-alpha = 2; diagonal 2/Gamma(1.5) + 6*32, off -6*16
        config = homogeneous_config(alpha=0.5, N=4, M=4, r=1.0)
        weights = l1_coefficients(config.mesh, 0.5, 1)
        matrix = assemble_step_matrix(config, 1, weights)
        expected_diag = 2.0 / gamma_function(1.5) + 6.0 * 32.0
        np.testing.assert_allclose(matrix.diag, expected_diag, rtol=1e-13)
        np.testing.assert_allclose(matrix.upper, -96.0, rtol=1e-13)
        np.testing.assert_allclose(matrix.lower, matrix.upper, rtol=0)

    def test_mu_zero_reduces_to_identity_plus_laplacian(self):
        config = homogeneous_config(alpha=0.5, N=8, M=4, mu=lambda t: 0.0)
        weights = l1_coefficients(config.mesh, 0.5, 2)
        matrix = assemble_step_matrix(config, 2, weights)
        h2 = config.grid.h ** 2
        np.testing.assert_allclose(
            matrix.diag, weights.d[-1] / weights.gamma_2ma + 2.0 / h2, rtol=1e-13
        )
        np.testing.assert_allclose(matrix.upper, -1.0 / h2, rtol=1e-13)

    def test_spd_for_random_parameters(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            config = homogeneous_config(
                alpha=float(rng.uniform(0.05, 0.95)),
                N=int(rng.integers(3, 21)),
                M=int(rng.integers(1, 10)),
                r=float(rng.uniform(1.0, 3.0)),
            )
            k = int(rng.integers(1, config.mesh.M + 1))
            weights = l1_coefficients(config.mesh, config.alpha, k)
            dense = assemble_step_matrix(config, k, weights).to_dense()
            assert np.linalg.eigvalsh(dense).min() > 0.0


class TestStep:
    def test_zero_fixed_point(self):
        config = homogeneous_config()
        traj = solve_forward(config, np.zeros(config.n_interior))
        np.testing.assert_array_equal(traj.states, 0.0)

    def test_step_linearity(self):
        config = homogeneous_config(N=12, M=6)
        weights = l1_coefficients(config.mesh, config.alpha, 3)
        rng = np.random.default_rng(37)
        u, v = rng.normal(size=(2, config.n_interior))
        hist_u, hist_v = rng.normal(size=(2, config.n_interior))
        a, b = 1.7, -0.4
        combined = step(config, 3, weights, a * hist_u + b * hist_v, a * u + b * v)
        separate = a * step(config, 3, weights, hist_u, u) + b * step(config, 3, weights, hist_v, v)
        np.testing.assert_allclose(combined, separate, rtol=1e-12, atol=1e-14)

    def test_single_step_truncation_shrinks_with_tau(self):
        # with M=1 the scheme is one implicit step; halving T (= tau) should
        # roughly halve the terminal error, h fixed and small
        case = ManufacturedCase(alpha=0.5)
        errors = []
        for T in (0.02, 0.01, 0.005):
            case_t = ManufacturedCase(alpha=0.5, T=T)
            config = case_t.config(400, 1, r=1.0)
            interior = config.grid.interior
            terminal = terminal_state(config, case_t.initial(interior))
            errors.append(np.abs(terminal - case_t.terminal(interior)).max())
        ratios = np.array(errors[:-1]) / np.array(errors[1:])
        assert np.all(ratios > 1.5)


class TestSolveForward:
    def test_superposition(self):
        case = ManufacturedCase(alpha=0.4)
        config = case.config(20, 10, r=1.0)
        hom = ProblemConfig(
            alpha=config.alpha, grid=config.grid, mesh=config.mesh, mu=case.mu, source=None
        )
        rng = np.random.default_rng(41)
        phi1, phi2 = rng.normal(size=(2, config.n_interior))
        a = 2.3
        lhs = terminal_state(config, a * phi1 + phi2)
        rhs = a * terminal_state(hom, phi1) + terminal_state(config, phi2)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-13)

    def test_manufactured_coarse_accuracy(self):
        case = ManufacturedCase(alpha=0.5)
        config = case.config(100, 100)
        interior = config.grid.interior
        traj = solve_forward(config, case.initial(interior))
        worst = max(
            np.abs(traj.states[k] - case.exact(interior, config.mesh.t[k])).max()
            for k in range(config.mesh.M + 1)
        )
        assert worst < 1e-1

    def test_manufactured_convergence_order_graded(self):
        # terminal accuracy is first order in time overall (the backward
        # difference on the mixed term dominates); observed order in [0.8, 1.3]
        for alpha in (0.3, 0.7):
            case = ManufacturedCase(alpha=alpha)
            errors = []
            for N in (25, 50, 100):
                config = case.config(N, N)
                interior = config.grid.interior
                traj = solve_forward(config, case.initial(interior))
                h = config.grid.h
                worst = max(
                    discrete_norms(traj.states[k] - case.exact(interior, tk), h).l2h_norm
                    for k, tk in enumerate(config.mesh.t)
                )
                errors.append(worst)
            orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
            assert np.all((orders >= 0.8) & (orders <= 1.3)), orders

    def test_trajectory_shape_and_initial_state(self):
        case = ManufacturedCase(alpha=0.6)
        config = case.config(10, 7)
        u0 = case.initial(config.grid.interior)
        traj = solve_forward(config, u0)
        assert traj.states.shape == (8, 9)
        np.testing.assert_array_equal(traj.states[0], u0)

    def test_rejects_wrong_length(self):
        config = homogeneous_config(N=10)
        with pytest.raises(ValueError):
            solve_forward(config, np.zeros(10))


class TestEnergyRatio:
    def test_band_under_refinement(self):
        case = ManufacturedCase(alpha=0.5)
        ratios = []
        for N in (25, 50, 100):
            config = case.config(N, N, r=1.0)
            traj = solve_forward(config, case.initial(config.grid.interior))
            ratios.append(stability_energy_ratio(traj))
        ratios = np.array(ratios)
        assert ratios.max() / ratios.min() < 2.0

    def test_zero_data_rejected(self):
        config = homogeneous_config()
        traj = solve_forward(config, np.zeros(config.n_interior))
        with pytest.raises(ValueError):
            stability_energy_ratio(traj)
