import math

import numpy as np
import pytest

from mprk22 import (
    IntegrationError,
    Linear2x2PDS,
    MprkError,
    NonPositiveInput,
    SchemeParams,
    StageVariant,
    exact_solution,
    integrate,
    integrate_linear_2x2,
    mprk22_step,
    mprk22_step_linear,
    total_mass,
)

from conftest import random_linear_pds, rel_err

CS = StageVariant.CONSERVATIVE
NCS = StageVariant.NON_CONSERVATIVE


def linear_step_fn(A):
    return lambda y, dt, params: mprk22_step_linear(A, y, dt, params)


class TestSchemeParams:
    def test_alpha_below_half_rejected(self):
        with pytest.raises(ValueError):
            SchemeParams(0.49)

    def test_variant_strings(self):
        assert SchemeParams(1.0, "cs").variant is CS
        assert SchemeParams(1.0, "ncs").variant is NCS

    def test_gamma_values(self):
        assert SchemeParams(1.0, CS).gamma == 1.0
        assert SchemeParams(1.0, NCS).gamma == 0.0


class TestStepExamples:
    def test_steady_state_is_fixed_point(self):
        system = Linear2x2PDS(1.0, 1.0).production_system()
        res = mprk22_step(system, (1.0, 1.0), 1.0, SchemeParams(1.0, CS))
        assert rel_err(res.next, (1.0, 1.0)) < 1e-14

    def test_exact_rational_case(self):
        # a = b = 1, alpha = 1, conservative stages, dt = 1 from (1.5, 0.5):
        # the two linear substeps solved over the rationals give
        # stage (7/6, 5/6) and next (1.5 - 46/103, 0.5 + 46/103)
        system = Linear2x2PDS(1.0, 1.0).production_system()
        res = mprk22_step(system, (1.5, 0.5), 1.0, SchemeParams(1.0, CS))
        assert rel_err(res.stage, (7.0 / 6.0, 5.0 / 6.0)) < 1e-14
        assert rel_err(res.next, (1.5 - 46.0 / 103.0, 0.5 + 46.0 / 103.0)) < 1e-14
        assert total_mass(res.next) == pytest.approx(2.0, rel=1e-13)

    @pytest.mark.parametrize("variant", [CS, NCS])
    def test_single_rate_system_closed_form(self, variant):
        # y1' = -y1, y2' = y1 with dt = 1, alpha = 1: amplification 0.4
        A = np.array([[-1.0, 0.0], [1.0, 0.0]])
        res = mprk22_step_linear(A, (1.0, 1.0), 1.0, SchemeParams(1.0, variant))
        assert rel_err(res.next, (0.4, 1.6)) < 1e-13

    def test_nonpositive_input_rejected(self):
        system = Linear2x2PDS(1.0, 1.0).production_system()
        with pytest.raises(NonPositiveInput):
            mprk22_step(system, (1.0, 0.0), 1.0, SchemeParams(1.0, CS))
        with pytest.raises(NonPositiveInput):
            mprk22_step_linear(np.array([[-1.0, 1.0], [1.0, -1.0]]), (-1.0, 1.0), 1.0, SchemeParams(1.0, CS))


class TestLinearStep:
    def test_matches_generic_on_reference_problem(self):
        A = np.array([[-25.0, 25.0], [25.0, -25.0]])
        system = Linear2x2PDS(25.0, 25.0).production_system()
        params = SchemeParams(1.0, CS)
        res_lin = mprk22_step_linear(A, (0.998, 0.002), 4.0, params)
        res_gen = mprk22_step(system, (0.998, 0.002), 4.0, params)
        assert rel_err(res_lin.next, res_gen.next) < 1e-12
        assert rel_err(res_lin.stage, res_gen.stage) < 1e-12

    def test_steady_state_fixed_point_2x2(self, rng):
        for _ in range(20):
            a, b = rng.uniform(0.1, 25.0, 2)
            r = rng.uniform(1e-2, 1e2)
            dt = rng.uniform(0.01, 50.0)
            alpha = rng.uniform(0.5, 3.0)
            variant = CS if rng.integers(2) else NCS
            y_star = r * np.array([b, a])
            res = mprk22_step_linear([[-a, b], [a, -b]], y_star, dt, SchemeParams(alpha, variant))
            assert rel_err(res.next, y_star) < 1e-13
            assert rel_err(res.stage, y_star) < 1e-13

    def test_steady_state_fixed_point_3x3(self, rng):
        # build A with a prescribed positive steady state from symmetric flows
        for _ in range(10):
            y_star = rng.uniform(0.5, 5.0, 3)
            G = rng.uniform(0.0, 2.0, (3, 3))
            G = G + G.T
            np.fill_diagonal(G, 0.0)
            A = G / y_star[None, :]
            np.fill_diagonal(A, 0.0)
            A[np.diag_indices(3)] = -A.sum(axis=0)
            res = mprk22_step_linear(A, y_star, 0.7, SchemeParams(0.8, NCS))
            assert rel_err(res.next, y_star) < 1e-12

    def test_three_by_three_positive_and_conservative(self):
        A = np.array([[-2.0, 1.0, 0.0], [2.0, -1.0, 1.0], [0.0, 0.0, -1.0]])
        params = SchemeParams(0.5, NCS)
        res = mprk22_step_linear(A, (1.0, 1.0, 1.0), 0.1, params)
        assert np.all(res.next > 0.0) and np.all(res.stage > 0.0)
        assert total_mass(res.next) == pytest.approx(3.0, rel=1e-12)
        system_res = mprk22_step(
            __import__("mprk22").ProductionSystem.from_linear(A), (1.0, 1.0, 1.0), 0.1, params
        )
        assert rel_err(res.next, system_res.next) < 1e-12


class TestPositivityAndConservation:
    def test_randomized_positivity(self, rng):
        # rates and steps well beyond any stability restriction
        for k in range(1000):
            a, b = rng.uniform(1e-3, 100.0, 2)
            dt = rng.uniform(1e-3, 100.0)
            alpha = rng.uniform(0.5, 3.0)
            variant = CS if k % 2 else NCS
            y0 = rng.uniform(1e-3, 10.0, 2)
            params = SchemeParams(alpha, variant)
            if k % 4 < 2:
                res = mprk22_step_linear([[-a, b], [a, -b]], y0, dt, params)
            else:
                res = mprk22_step(Linear2x2PDS(a, b).production_system(), y0, dt, params)
            assert np.all(res.stage > 0.0)
            assert np.all(res.next > 0.0)

    def test_per_step_conservation(self, rng):
        # dense-solve routes conserve mass up to solver rounding, which stays
        # below 1e-12 relative for moderate dt * rate products
        for k in range(1000):
            a, b = rng.uniform(1e-3, 25.0, 2)
            dt = rng.uniform(1e-3, 2.0)
            alpha = rng.uniform(0.5, 3.0)
            variant = CS if k % 2 else NCS
            y0 = rng.uniform(0.1, 10.0, 2)
            params = SchemeParams(alpha, variant)
            if k % 4 < 2:
                res = mprk22_step_linear([[-a, b], [a, -b]], y0, dt, params)
            else:
                res = mprk22_step(Linear2x2PDS(a, b).production_system(), y0, dt, params)
            assert total_mass(res.next) == pytest.approx(total_mass(y0), rel=1e-12)

    def test_mass_drift_over_long_run(self):
        params = SchemeParams(0.5, NCS)
        traj = integrate_linear_2x2(25.0, 25.0, (0.998, 0.002), 0.05, 1000, params)
        masses = traj.states.sum(axis=1)
        assert np.max(np.abs(masses - 1.0)) < 1e-10
        assert np.all(traj.states > 0.0)

    def test_fixed_point_family_under_scaling(self, rng):
        a, b = 3.0, 7.0
        system = Linear2x2PDS(a, b).production_system()
        for r in (1e-3, 1.0, 1e3):
            y_star = r * np.array([b, a])
            for variant in (CS, NCS):
                res = mprk22_step(system, y_star, 2.5, SchemeParams(0.75, variant))
                assert rel_err(res.next, y_star) < 1e-13

    def test_stage_conservativity_only_for_conservative_variant(self, rng):
        deviations = []
        for _ in range(50):
            a, b = rng.uniform(0.1, 50.0, 2)
            dt = rng.uniform(0.1, 10.0)
            y0 = rng.uniform(0.1, 5.0, 2)
            alpha = rng.uniform(0.5, 3.0)
            cs_res = mprk22_step_linear([[-a, b], [a, -b]], y0, dt, SchemeParams(alpha, CS))
            assert total_mass(cs_res.stage) == pytest.approx(total_mass(y0), rel=1e-12)
            ncs_res = mprk22_step_linear([[-a, b], [a, -b]], y0, dt, SchemeParams(alpha, NCS))
            deviations.append(abs(total_mass(ncs_res.stage) - total_mass(y0)))
        # the non-conservative stage must actually fail conservation somewhere
        assert max(deviations) > 1e-8


class TestSecondOrder:
    @pytest.mark.parametrize("alpha", [0.5, 1.0])
    @pytest.mark.parametrize("variant", [CS, NCS])
    def test_observed_order_near_two(self, alpha, variant):
        problem = Linear2x2PDS(25.0, 25.0)
        params = SchemeParams(alpha, variant)
        errors = []
        for k in range(6, 10):
            dt = 0.1 / 2**k
            traj = integrate_linear_2x2(25.0, 25.0, (0.998, 0.002), dt, 2**k, params)
            ref = exact_solution(problem, (0.998, 0.002), 0.1)
            errors.append(np.max(np.abs(traj.states[-1] - ref)))
        orders = [math.log2(errors[i - 1] / errors[i]) for i in range(1, len(errors))]
        assert 1.8 <= orders[-1] <= 2.2
        assert 1.8 <= np.mean(orders) <= 2.2


class TestIntegrate:
    def test_zero_steps(self):
        traj = integrate(linear_step_fn(np.array([[-1.0, 1.0], [1.0, -1.0]])), (2.0, 1.0), 0.5, 0, SchemeParams(1.0))
        assert len(traj) == 1
        assert np.array_equal(traj.states[0], [2.0, 1.0])
        assert traj.times[0] == 0.0

    def test_convergence_to_steady_state(self):
        A = np.array([[-25.0, 25.0], [25.0, -25.0]])
        traj = integrate(linear_step_fn(A), (0.998, 0.002), 4.0, 50, SchemeParams(1.0, CS))
        assert abs(traj.states[-1, 0] - 0.5) < 1e-6

    def test_divergence_beyond_critical_step(self):
        A = np.array([[-25.0, 25.0], [25.0, -25.0]])
        traj = integrate(linear_step_fn(A), (0.501, 0.499), 0.2425, 200, SchemeParams(0.5, NCS))
        assert np.max(np.abs(traj.states[:, 0] - 0.5)) > 10 * 1e-3
        assert np.all(traj.states > 0.0)

    def test_times_equispaced(self):
        traj = integrate(linear_step_fn(np.array([[-1.0, 1.0], [1.0, -1.0]])), (1.0, 1.0), 0.25, 8, SchemeParams(1.0))
        assert np.array_equal(traj.times, 0.25 * np.arange(9))

    def test_step_error_carries_index_and_partial(self):
        calls = {"n": 0}

        def failing_step(y, dt, params):
            calls["n"] += 1
            if calls["n"] == 3:
                raise NonPositiveInput("synthetic failure")
            return mprk22_step_linear(np.array([[-1.0, 1.0], [1.0, -1.0]]), y, dt, params)

        with pytest.raises(IntegrationError) as excinfo:
            integrate(failing_step, (1.5, 0.5), 0.5, 10, SchemeParams(1.0))
        err = excinfo.value
        assert err.step_index == 3
        assert len(err.partial) == 3  # y0 plus the two good steps
        assert isinstance(err.__cause__, MprkError)

    def test_kernel_trajectory_matches_step_by_step_path(self):
        A = np.array([[-25.0, 25.0], [25.0, -25.0]])
        params = SchemeParams(0.8, NCS)
        ref = integrate(linear_step_fn(A), (0.998, 0.002), 0.2, 40, params)
        fast = integrate_linear_2x2(25.0, 25.0, (0.998, 0.002), 0.2, 40, params)
        assert np.max(np.abs(ref.states - fast.states)) < 1e-12

    def test_local_convergence_on_conservation_line(self):
        # alpha >= 1: both variants contract small conservative perturbations
        y_star = np.array([0.5, 0.5])
        for alpha in (1.0, 2.0):
            for variant in (CS, NCS):
                for s in (1e-3, -1e-3):
                    y0 = y_star + s * np.array([1.0, -1.0])
                    traj = integrate_linear_2x2(25.0, 25.0, y0, 4.0, 2000, SchemeParams(alpha, variant))
                    assert np.max(np.abs(traj.states[-1] - y_star)) < 1e-10
