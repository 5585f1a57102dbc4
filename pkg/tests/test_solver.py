import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from numerics.errors import DivergenceError, InvalidParameterError, MonitorFailure, ShapeError
from params import stationary_mu_nu
from solver import InertialSchedule, IterationRecord, RunTrace, SolveOptions, descent_check, fb_schedule, forward_backward, mifb_solve, reference_solution, schedule_from_rule, subgradient_residual
from solver.mifb import CONVERGED

ALL_MONITORS = frozenset({'descent', 'residual'})


class TestSchedule:

    def test_coefficient_box(self):
        with pytest.raises(InvalidParameterError):
            InertialSchedule(a=(2.5,), b=(0.0,), gamma=0.1)
        with pytest.raises(InvalidParameterError):
            InertialSchedule(a=(-1.0,), b=(0.0,), gamma=0.1)
        InertialSchedule(a=(2.0,), b=(-0.99,), gamma=0.1)

    def test_lengths_must_match(self):
        with pytest.raises(InvalidParameterError):
            InertialSchedule(a=(0.1, 0.1), b=(0.1,), gamma=0.1)

    def test_step_below_inverse_lipschitz(self):
        with pytest.raises(InvalidParameterError):
            fb_schedule(1.0).validate(1.0)

    def test_varying_step_bounds(self):
        sch = InertialSchedule(a=(0.1,), b=(0.1,), gamma=0.4, gamma_min=0.2, gamma_sequence=lambda k: 0.1)
        with pytest.raises(InvalidParameterError):
            sch.step(0)

    def test_online_cap_scales_both(self):
        sch = InertialSchedule(a=(0.2, 0.4), b=(0.2, 0.4), gamma=0.1, online=(0.3, 0.1))
        a, b = sch.coefficients(1, [1.0])
        assert_allclose(a, [0.1, 0.2], rtol=1e-12)
        assert_allclose(b, [0.1, 0.2], rtol=1e-12)

    def test_rule_defaults(self):
        sch = schedule_from_rule('descent', 2, 0.3, 1.0)
        assert sch.s == 2 and sch.a == sch.b
        assert sch.feasibility(1.0).feasible


class TestIteration:

    def test_halving_recursion(self, quadratic):
        problem = quadratic([1.0], [0.0])
        trace = mifb_solve(problem, fb_schedule(0.5), [1.0], SolveOptions(max_iter=10, store_iterates=True))
        assert [float(x[0]) for x in trace.iterates] == [0.5 ** k for k in range(1, 11)]
        assert_array_equal(trace.deltas, [0.5 ** k for k in range(1, 11)])

    def test_history_unrolled_by_hand(self, quadratic):
        """Two-step memory against the recursion written out on a scalar quadratic."""
        problem = quadratic([1.0], [0.0])
        a, b, gamma = ((0.3, 0.1), (0.2, 0.05), 0.5)
        trace = mifb_solve(problem, InertialSchedule(a=a, b=b, gamma=gamma), [1.0], SolveOptions(max_iter=3, store_iterates=True))
        xs = [1.0, 1.0, 1.0]
        for _ in range(3):
            x, x1, x2 = (xs[-1], xs[-2], xs[-3])
            ya = x + a[0] * (x - x1) + a[1] * (x1 - x2)
            yb = x + b[0] * (x - x1) + b[1] * (x1 - x2)
            xs.append(ya - gamma * yb)
        assert_allclose([float(v[0]) for v in trace.iterates], xs[3:], rtol=1e-14)

    def test_scalar_l0_fixed_point(self, scalar_l0):
        trace = mifb_solve(scalar_l0, fb_schedule(0.5), [2.0])
        assert trace.termination == CONVERGED
        assert trace.final_point[0] == 2.0

    def test_start_shape(self, small_regression):
        with pytest.raises(ShapeError):
            mifb_solve(small_regression, fb_schedule(0.1 / small_regression.lipschitz_L), np.zeros(3))

    def test_options_validated(self):
        with pytest.raises(InvalidParameterError):
            SolveOptions(max_iter=0)
        with pytest.raises(InvalidParameterError):
            SolveOptions(monitors=frozenset({'energy'}))

    def test_divergence_keeps_finite_trace(self, quadratic):
        problem = quadratic([1.0], [0.0])
        sch = InertialSchedule(a=(2.0,), b=(-0.9,), gamma=0.9)
        with np.errstate(over='ignore', invalid='ignore'):
            with pytest.raises(DivergenceError) as info:
                mifb_solve(problem, sch, [1.0], SolveOptions(max_iter=5000))
        trace = info.value.trace
        assert len(trace) > 0
        assert np.all(np.isfinite(trace.final_point))

    def test_path_length_tail_shrinks(self, small_regression):
        L = small_regression.lipschitz_L
        trace = mifb_solve(small_regression, schedule_from_rule('descent', 1, 0.3 / L, L), np.zeros(40))
        assert np.isfinite(trace.path_length())
        assert trace.path_length(trace.iterations - 10) < 1e-06 * max(1.0, trace.path_length())


class TestForwardBackwardReduction:

    @pytest.mark.parametrize('name', ['small_regression', 'small_pcp', 'small_svm'])
    def test_zero_inertia_is_plain_forward_backward(self, name, request):
        problem = request.getfixturevalue(name)
        gamma = 0.3 / problem.lipschitz_L
        x0 = np.zeros(problem.dimension)
        trace = mifb_solve(problem, fb_schedule(gamma), x0, SolveOptions(max_iter=500, tol_delta=1e-300, store_iterates=True))
        _, iterates = forward_backward(problem, gamma, x0, max_iter=500, tol_delta=1e-300)
        assert len(trace.iterates) == len(iterates)
        for mine, plain in zip(trace.iterates, iterates):
            assert_array_equal(mine, plain)


class TestMonitors:

    @pytest.mark.parametrize('name', ['small_regression', 'small_pcp', 'small_svm'])
    @pytest.mark.parametrize('s', [1, 2, 3])
    def test_feasible_schedules_pass_both_monitors(self, name, s, request):
        problem = request.getfixturevalue(name)
        L = problem.lipschitz_L
        sch = schedule_from_rule('descent', s, 0.3 / L, L)
        trace = mifb_solve(problem, sch, np.zeros(problem.dimension), SolveOptions(max_iter=3000, monitors=ALL_MONITORS))
        assert all((r.slacks['residual'] <= 0.0 for r in trace.records))
        mu, nu = stationary_mu_nu(sch.a, sch.b, L, s)
        slacks = descent_check(trace, mu, nu, sch)
        assert max(slacks) <= 1e-10 * max(1.0, abs(trace.phi0))

    @pytest.mark.parametrize('seed', range(5))
    def test_monitors_across_seeds(self, seed):
        from problems import make_sparse_regression
        problem = make_sparse_regression(seed=seed, m=20, n=40, k=3)
        L = problem.lipschitz_L
        for sch in (fb_schedule(0.3 / L), schedule_from_rule('descent', 2, 0.3 / L, L)):
            mifb_solve(problem, sch, np.zeros(40), SolveOptions(max_iter=3000, monitors=ALL_MONITORS))

    def test_forward_backward_sufficient_decrease(self, small_regression):
        L = small_regression.lipschitz_L
        sch = fb_schedule(0.3 / L)
        trace = mifb_solve(small_regression, sch, np.zeros(40), SolveOptions(max_iter=2000))
        assert max(descent_check(trace, 1e-06, 1e-06, sch)) <= 1e-10 * max(1.0, abs(trace.phi0))

    def test_stationary_sequence_has_zero_slack(self, scalar_l0):
        sch = fb_schedule(0.5)
        trace = mifb_solve(scalar_l0, sch, [2.0])
        assert descent_check(trace, 0.1, 0.1, sch) == [0.0]

    def test_violation_is_reported(self):
        sch = fb_schedule(0.5)
        records = [IterationRecord(k=1, phi=1.0, delta=0.1, resid=float('nan'), signature=()), IterationRecord(k=2, phi=2.0, delta=0.1, resid=float('nan'), signature=())]
        trace = RunTrace(records=records, final_point=np.zeros(1), termination='max_iter', schedule=sch.to_dict(), phi0=1.5, lipschitz_L=1.0)
        with pytest.raises(MonitorFailure) as info:
            descent_check(trace, 0.1, 0.1, sch)
        assert info.value.k == 2
        assert info.value.monitor == 'descent'

    def test_residual_vanishes_at_fixed_point(self, scalar_l0):
        x = np.array([2.0])
        assert_array_equal(subgradient_residual(scalar_l0, 0.5, x, x, x), [0.0])

    def test_forward_backward_residual_bound(self, small_regression):
        gamma = 0.3 / small_regression.lipschitz_L
        x = np.random.default_rng(0).standard_normal(40)
        x_next = small_regression.penalty.prox(x - gamma * small_regression.smooth.gradient(x), gamma)
        g = subgradient_residual(small_regression, gamma, x, x, x_next)
        assert np.linalg.norm(g) <= (1 / gamma + small_regression.lipschitz_L) * np.linalg.norm(x_next - x) * (1 + 1e-09)


class TestReferenceSolution:

    def test_scalar_l0(self, scalar_l0):
        ref = reference_solution(scalar_l0, fb_schedule(0.5), [2.0])
        assert ref.point[0] == 2.0
        assert ref.residual_norm == 0.0

    def test_zero_penalty_minimizer(self, quadratic):
        problem = quadratic([1.0, 2.0, 3.0])
        ref = reference_solution(problem, fb_schedule(0.3 / problem.lipschitz_L), np.zeros(3))
        assert_allclose(ref.point, [1.0, 0.5, 1.0 / 3.0], atol=1e-12)
        assert ref.termination in ('converged', 'stalled')

    def test_stall_stops_at_floor(self, quadratic):
        problem = quadratic([1.0, 2.0, 3.0])
        ref = reference_solution(problem, fb_schedule(0.3 / problem.lipschitz_L), np.zeros(3), tol_delta=1e-300, stall_patience=20)
        assert ref.iterations < 100000

    def test_schedules_share_unique_minimizer(self, quadratic):
        problem = quadratic([1.0, 0.5, 0.25])
        L = problem.lipschitz_L
        fb = reference_solution(problem, fb_schedule(0.3 / L), np.zeros(3))
        inertial = reference_solution(problem, schedule_from_rule('descent', 2, 0.3 / L, L), np.zeros(3))
        assert np.linalg.norm(fb.point - inertial.point) <= 1e-08
        assert_allclose(fb.point, [1.0, 2.0, 4.0], atol=1e-08)


class TestDistanceStop:

    def test_needs_reference(self):
        with pytest.raises(InvalidParameterError):
            SolveOptions(tol_dist=1e-09)
        with pytest.raises(InvalidParameterError):
            SolveOptions(tol_dist=0.0, reference=np.zeros(2))

    def test_stops_within_distance(self, quadratic):
        problem = quadratic([1.0, 0.25])
        x_star = np.array([1.0, 4.0])
        opts = SolveOptions(tol_delta=1e-15, reference=x_star, tol_dist=1e-09)
        trace = mifb_solve(problem, fb_schedule(0.3 / problem.lipschitz_L), np.zeros(2), opts)
        assert trace.termination == CONVERGED
        assert trace.records[-1].dist <= 1e-09
        assert all((r.dist > 1e-09 for r in trace.records[:-1]))


FULL_INSTANCES = {'sparse_regression': dict(noise_std=0.01, mu=1.0), 'pcp': dict(noise_std=0.01, mu1=0.5, mu2=200.0), 'sparse_svm': dict(mu=0.05)}


@pytest.mark.slow
class TestMonitorsOnFullInstances:

    @pytest.mark.parametrize('kind', sorted(FULL_INSTANCES))
    @pytest.mark.parametrize('seed', range(10))
    def test_no_violations(self, kind, seed):
        from problems import make_pcp, make_sparse_regression, make_sparse_svm
        factory = {'sparse_regression': make_sparse_regression, 'pcp': make_pcp, 'sparse_svm': make_sparse_svm}[kind]
        problem = factory(seed=seed, **FULL_INSTANCES[kind])
        L = problem.lipschitz_L
        for s in (1, 2):
            sch = schedule_from_rule('descent', s, 0.3 / L, L)
            trace = mifb_solve(problem, sch, np.zeros(problem.dimension), SolveOptions(max_iter=2000, monitors=ALL_MONITORS))
            assert max((r.slacks['residual'] for r in trace.records)) <= 0.0
            phis = [trace.phi0] + trace.phis[:-1].tolist()
            assert all((r.slacks['descent'] <= 1e-10 * max(1.0, abs(phi)) for r, phi in zip(trace.records, phis)))
