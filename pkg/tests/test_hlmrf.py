"""Energy evaluation, gradients, and MAP inference against independent oracles."""

import numpy as np
import pytest

from deeppsl.errors import NumericError
from deeppsl.hlmrf import (HlmrfInstance, LinearPotential, SolverConfig,
                           brute_force_map, energy, grad_x, grad_y,
                           map_infer, soft_energy)

from _util import central_diff, make_random_instance


def pair_rule_instance(theta):
    """The two-template translation of one attribute/class pair: energy is
    exactly theta * (x - y)^2."""
    return HlmrfInstance([
        LinearPotential(y_coeffs=[(0, -1.0)], x_coeffs=[(0, 1.0)],
                        offset=0.0, weight=theta),
        LinearPotential(y_coeffs=[(0, 1.0)], x_coeffs=[(0, -1.0)],
                        offset=0.0, weight=theta),
    ], n_free=1, n_obs=1)


def single_hinge(offset=0.8, y_coef=-1.0, weight=1.0, exponent=2):
    return HlmrfInstance([LinearPotential(
        y_coeffs=[(0, y_coef)], x_coeffs=[], offset=offset,
        weight=weight, exponent=exponent)], n_free=1, n_obs=0)


class TestEnergy:
    def test_single_squared_potential(self):
        inst = single_hinge()      # l = 0.8 - y
        assert energy(inst, np.zeros(0), np.array([0.3])) == pytest.approx(0.25, abs=1e-15)

    def test_pair_rule_identity(self):
        inst = pair_rule_instance(2.0)
        assert energy(inst, np.array([0.7]), np.array([0.2])) == pytest.approx(0.5, abs=1e-15)

    def test_empty_potentials(self):
        inst = HlmrfInstance([], n_free=2, n_obs=0)
        assert energy(inst, np.zeros(0), np.array([0.4, 0.9])) == 0.0

    def test_nonnegative_everywhere(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            inst = make_random_instance(rng, 3, 2, 6,
                                        exponent=int(rng.integers(1, 3)))
            for _ in range(50):
                x = rng.uniform(0, 1, 2)
                y = rng.uniform(0, 1, 3)
                assert energy(inst, x, y) >= 0.0

    def test_dimension_mismatch(self):
        inst = single_hinge()
        with pytest.raises(ValueError):
            energy(inst, np.zeros(1), np.array([0.3]))
        with pytest.raises(ValueError):
            energy(inst, np.zeros(0), np.array([0.3, 0.4]))

    def test_instance_validates_indices(self):
        with pytest.raises(ValueError):
            HlmrfInstance([LinearPotential(y_coeffs=[(3, 1.0)], x_coeffs=[],
                                           offset=0.0, weight=1.0)],
                          n_free=2, n_obs=0)
        with pytest.raises(ValueError):
            HlmrfInstance([], n_free=0, n_obs=0)


class TestSoftEnergy:
    def test_equals_energy_inside_box(self):
        rng = np.random.default_rng(11)
        cfg = SolverConfig()
        for _ in range(10):
            inst = make_random_instance(rng, 3, 2, 5)
            x = rng.uniform(0, 1, 2)
            y = rng.uniform(0, 1, 3)
            assert soft_energy(inst, x, y, cfg) == pytest.approx(
                energy(inst, x, y), abs=1e-12)

    def test_upper_box_penalty(self):
        inst = HlmrfInstance([], n_free=1, n_obs=0)
        cfg = SolverConfig(gamma_lower=10.0, gamma_upper=10.0)
        got = soft_energy(inst, np.zeros(0), np.array([1.2]), cfg)
        assert got == pytest.approx(10.0 * 0.04, abs=1e-12)

    def test_proximal_zero_at_anchor(self):
        inst = single_hinge()
        y = np.array([0.3])
        base = soft_energy(inst, np.zeros(0), y, SolverConfig())
        cfg = SolverConfig(proximal_nu=1.0, anchor=y)
        assert soft_energy(inst, np.zeros(0), y, cfg) == pytest.approx(base, abs=1e-15)


class TestGradients:
    def test_zero_when_inactive(self):
        # hinge inactive and y inside the box: every term vanishes
        inst = single_hinge(offset=-0.5)       # l = -0.5 - y < 0 on [0,1]
        cfg = SolverConfig()
        g = grad_y(inst, np.zeros(0), np.array([0.4]), cfg)
        np.testing.assert_array_equal(g, np.zeros(1))

    def test_single_squared_chain_rule(self):
        inst = single_hinge()                  # l = 0.8 - y
        g = grad_y(inst, np.zeros(0), np.array([0.3]), SolverConfig())
        assert g[0] == pytest.approx(-1.0, abs=1e-12)

    def test_grad_x_single(self):
        inst = HlmrfInstance([LinearPotential(
            y_coeffs=[(0, -1.0)], x_coeffs=[(0, 1.0)], offset=0.0,
            weight=1.0)], n_free=1, n_obs=1)   # l = x - y
        g = grad_x(inst, np.array([0.8]), np.array([0.3]))
        assert g[0] == pytest.approx(1.0, abs=1e-12)

    def test_matches_finite_differences(self):
        """Analytic gradients vs central differences of the energy value."""
        rng = np.random.default_rng(7)
        cfg = SolverConfig(proximal_nu=0.3, anchor=np.full(4, 0.4))
        h = 1e-6
        for _ in range(15):
            inst = make_random_instance(rng, 4, 3, 8)
            x = rng.uniform(0, 1, 3)
            y = rng.uniform(-0.1, 1.1, 4)
            gy = grad_y(inst, x, y, cfg)
            gx = grad_x(inst, x, y)
            for i in range(4):
                fd = central_diff(lambda v: soft_energy(inst, x, v, cfg), y, i, h)
                assert gy[i] == pytest.approx(fd, rel=1e-6, abs=1e-9)
            for j in range(3):
                fd = central_diff(lambda v: soft_energy(inst, v, y, cfg), x, j, h)
                assert gx[j] == pytest.approx(fd, rel=1e-6, abs=1e-9)

    def test_exponent_one_subgradient_at_kink(self):
        inst = single_hinge(offset=0.5, exponent=1)    # l = 0.5 - y, kink at 0.5
        g = grad_y(inst, np.zeros(0), np.array([0.5]), SolverConfig())
        assert g[0] == 0.0


class TestMapInference:
    def test_pair_rule_minimizer(self):
        inst = pair_rule_instance(1.0)
        cfg = SolverConfig(loss_change_threshold=1e-10)
        res = map_infer(inst, np.array([0.7]), cfg)
        assert res.y[0] == pytest.approx(0.7, abs=1e-3)
        assert res.converged

    def test_no_potentials_stays_at_init(self):
        inst = HlmrfInstance([], n_free=3, n_obs=0)
        res = map_infer(inst, np.zeros(0), SolverConfig(init_value=0.5))
        np.testing.assert_allclose(res.y, 0.5)
        assert res.iterations <= 1

    def test_matches_grid_oracle(self):
        rng = np.random.default_rng(13)
        cfg = SolverConfig(loss_change_threshold=1e-10, max_iterations=20000)
        for _ in range(20):
            n = int(rng.integers(1, 4))
            inst = make_random_instance(rng, n, 2, int(rng.integers(2, 7)))
            x = rng.uniform(0, 1, 2)
            res = map_infer(inst, x, cfg)
            ref = brute_force_map(inst, x, 0.01, cfg)
            assert soft_energy(inst, x, res.y_raw, cfg) <= \
                soft_energy(inst, x, ref, cfg) + 1e-3

    def test_clamped_vs_raw(self):
        # strong pull above 1: raw exceeds 1 slightly, report clamps
        inst = HlmrfInstance([LinearPotential(
            y_coeffs=[(0, -1.0)], x_coeffs=[], offset=2.0, weight=50.0)],
            n_free=1, n_obs=0)
        res = map_infer(inst, np.zeros(0),
                        SolverConfig(loss_change_threshold=1e-12,
                                     max_iterations=20000))
        assert res.y_raw[0] > 1.0
        assert res.y[0] == 1.0

    @pytest.mark.filterwarnings("ignore:overflow:RuntimeWarning")
    def test_divergence_raises(self):
        # overflow to inf is the detection mechanism being exercised
        inst = pair_rule_instance(100.0)
        with pytest.raises(NumericError):
            map_infer(inst, np.array([1.0]),
                      SolverConfig(step_size=1e6, max_iterations=200))

    def test_proximal_uniqueness(self):
        """With nu > 0 and a fixed anchor the argmin is unique: runs from
        different initializations agree per coordinate."""
        rng = np.random.default_rng(23)
        anchor = np.full(3, 0.5)
        for _ in range(5):
            inst = make_random_instance(rng, 3, 2, 5)
            x = rng.uniform(0, 1, 2)
            cfg = dict(proximal_nu=0.05, anchor=anchor,
                       loss_change_threshold=1e-12, max_iterations=50000)
            a = map_infer(inst, x, SolverConfig(init_value=0.0, **cfg))
            b = map_infer(inst, x, SolverConfig(init_value=1.0, **cfg))
            np.testing.assert_allclose(a.y_raw, b.y_raw, atol=1e-3)


class TestBruteForce:
    def test_single_variable_pair(self):
        inst = pair_rule_instance(1.0)
        y = brute_force_map(inst, np.array([0.7]), 0.01)
        assert y[0] == pytest.approx(0.70, abs=1e-12)

    def test_conflicting_rules_split(self):
        # one rule pulls y up (l = 1 - y), the other down (l = y)
        inst = HlmrfInstance([
            LinearPotential(y_coeffs=[(0, -1.0)], x_coeffs=[], offset=1.0, weight=1.0),
            LinearPotential(y_coeffs=[(0, 1.0)], x_coeffs=[], offset=0.0, weight=1.0),
        ], n_free=1, n_obs=0)
        y = brute_force_map(inst, np.zeros(0), 0.01)
        assert y[0] == pytest.approx(0.5, abs=1e-12)

    def test_beats_random_sampling(self):
        rng = np.random.default_rng(3)
        inst = make_random_instance(rng, 3, 2, 6)
        x = rng.uniform(0, 1, 2)
        best = brute_force_map(inst, x, 0.05)
        best_e = soft_energy(inst, x, best)
        for _ in range(100):
            e = soft_energy(inst, x, rng.uniform(0, 1, 3))
            assert best_e <= e + 1e-9

    def test_dimension_guard(self):
        inst = HlmrfInstance([], n_free=5, n_obs=0)
        with pytest.raises(ValueError):
            brute_force_map(inst, np.zeros(0), 0.5)

    def test_grid_step_must_divide(self):
        inst = HlmrfInstance([], n_free=1, n_obs=0)
        with pytest.raises(ValueError):
            brute_force_map(inst, np.zeros(0), 0.3)


class TestConvexity:
    def test_midpoint_convexity(self):
        rng = np.random.default_rng(31)
        cfg = SolverConfig(proximal_nu=0.1, anchor=np.full(4, 0.5))
        for _ in range(5):
            inst = make_random_instance(rng, 4, 3, 8,
                                        exponent=int(rng.integers(1, 3)))
            x = rng.uniform(0, 1, 3)
            for _ in range(200):
                y1 = rng.uniform(-0.5, 1.5, 4)
                y2 = rng.uniform(-0.5, 1.5, 4)
                mid = soft_energy(inst, x, (y1 + y2) / 2, cfg)
                bound = (soft_energy(inst, x, y1, cfg) +
                         soft_energy(inst, x, y2, cfg)) / 2
                assert mid <= bound + 1e-12


class TestSolverConfigValidation:
    def test_bad_values(self):
        with pytest.raises(ValueError):
            SolverConfig(gamma_lower=0.0)
        with pytest.raises(ValueError):
            SolverConfig(proximal_nu=-1.0)
        with pytest.raises(ValueError):
            SolverConfig(step_size=0.0)
        with pytest.raises(ValueError):
            SolverConfig(init_value=1.5)
