import json
import logging
import sys
from pathlib import Path
import numpy as np
import pandas as pd
import pytest
from numerics.errors import ConfigError, PlotError
from experiments import ExperimentRunner, load_config
from experiments.config import ExperimentConfig, ScheduleConfig
from experiments.outputs import TRACE_COLUMNS, read_trace_csv
from experiments.runner import build_schedule
from experiments.viz import PlotSeries, render_plot
from solver import SolveOptions, mifb_solve
import main as cli

SMALL_CONFIG = {
    'name': 'small',
    'problem': {'kind': 'sparse_regression', 'seed': 1, 'params': {'m': 20, 'n': 40, 'k': 3}},
    'schedules': [
        {'name': 'FB', 's': 1, 'a': [0.0], 'b': [0.0], 'gamma': 0.3},
        {'name': '1-iFB', 's': 1, 'gamma': 0.3, 'rule': 'descent'},
    ],
    'solver': {'tol_delta': 1e-10, 'max_iter': 5000, 'monitors': ['descent', 'residual']},
    'output': {'directory': 'unused', 'plot': False},
}


def write_config(tmp_path, data, name='config.json'):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


def small_runner(tmp_path, data=None, subdir='out'):
    config = ExperimentConfig.model_validate(data or SMALL_CONFIG)
    return ExperimentRunner(config, output_dir=str(tmp_path / subdir), plot=False)


class TestConfig:

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / 'absent.json'))

    def test_malformed_json(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"name": ', encoding='utf-8')
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_duplicate_schedule_names(self, tmp_path):
        data = dict(SMALL_CONFIG, schedules=[SMALL_CONFIG['schedules'][0]] * 2)
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, data))

    def test_coefficient_length_mismatch(self, tmp_path):
        data = dict(SMALL_CONFIG, schedules=[{'name': 'x', 's': 2, 'a': [0.1]}])
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, data))

    def test_legacy_rule_names(self, tmp_path):
        data = dict(SMALL_CONFIG, schedules=[{'name': 'd', 'rule': 'theorem22'}, {'name': 'e', 'rule': 'bound24'}])
        config = load_config(write_config(tmp_path, data))
        assert [sc.rule for sc in config.schedules] == ['descent', 'empirical']
        assert config.schedules[1].uses_online_cap

    def test_unknown_rule(self, tmp_path):
        data = dict(SMALL_CONFIG, schedules=[{'name': 'x', 'rule': 'fastest'}])
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path, data))

    def test_online_cap_defaults_follow_rule(self):
        assert ScheduleConfig(name='e', rule='empirical').uses_online_cap
        assert not ScheduleConfig(name='d', rule='descent').uses_online_cap
        assert not ScheduleConfig(name='e', rule='empirical', online=False).uses_online_cap


class TestBuildSchedule:

    def test_descent_rule_rejects_infeasible_coefficients(self):
        cfg = ScheduleConfig(name='big', s=1, a=[0.9], gamma=0.9, rule='descent')
        with pytest.raises(ConfigError):
            build_schedule(cfg, 1.0)

    def test_default_coefficients_are_feasible(self):
        schedule, report = build_schedule(ScheduleConfig(name='d', s=2, gamma=0.5), 2.0)
        assert report.feasible
        assert schedule.gamma == pytest.approx(0.25)
        assert schedule.a == schedule.b

    def test_empirical_rule_accepts_large_coefficients(self):
        schedule, report = build_schedule(ScheduleConfig(name='e', s=1, a=[0.9], gamma=0.9, rule='empirical'), 1.0)
        assert not report.feasible
        assert schedule.online is not None


class TestLargeStepRules:

    def iterations_to_tolerance(self, problem, cfg, x_star):
        schedule, _ = build_schedule(cfg, problem.lipschitz_L)
        opts = SolveOptions(max_iter=5000, tol_delta=1e-15, reference=x_star, tol_dist=1e-09)
        trace = mifb_solve(problem, schedule, np.zeros(problem.dimension), opts)
        assert trace.records[-1].dist <= 1e-09
        return trace.iterations

    def test_empirical_rule_is_faster_at_a_common_minimizer(self, quadratic):
        problem = quadratic([1.0, 0.25])
        x_star = np.array([1.0, 4.0])
        fb = self.iterations_to_tolerance(problem, ScheduleConfig(name='FB', a=[0.0], b=[0.0], gamma=0.8), x_star)
        counts = {}
        for s in (1, 2, 3):
            for rule in ('descent', 'empirical'):
                counts[rule, s] = self.iterations_to_tolerance(problem, ScheduleConfig(name=f'{s}-{rule}', s=s, gamma=0.8, rule=rule), x_star)
        for s in (1, 2, 3):
            assert counts['empirical', s] <= counts['descent', s] <= fb
        empirical = [counts['empirical', s] for s in (1, 2, 3)]
        assert max(empirical) <= 1.25 * min(empirical)


class TestRunner:

    def test_run_writes_trace_files(self, tmp_path):
        runner = small_runner(tmp_path)
        rows = runner.run()
        assert [r['schedule'] for r in rows] == ['FB', '1-iFB']
        path = tmp_path / 'out' / 'trace_1-iFB.csv'
        lines = path.read_text(encoding='utf-8').splitlines()
        assert lines[0] == '# seed=1'
        assert lines[1].startswith('# schedule=')
        assert lines[2].startswith('# feasibility=')
        assert lines[3].startswith('# termination=')
        assert lines[4] == ','.join(TRACE_COLUMNS)
        df = read_trace_csv(str(path))
        assert list(df.columns) == TRACE_COLUMNS
        assert df['k'].tolist() == list(range(1, len(df) + 1))
        assert set(df['identified'].unique()) <= {0, 1}
        assert (tmp_path / 'out' / 'feasibility.json').exists()

    def test_runs_are_reproducible(self, tmp_path):
        small_runner(tmp_path, subdir='a').run()
        small_runner(tmp_path, subdir='b').run()
        for name in ('trace_FB.csv', 'trace_1-iFB.csv', 'feasibility.json'):
            assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()

    def test_compare_table(self, tmp_path):
        rows = small_runner(tmp_path).compare()
        table = pd.read_csv(tmp_path / 'out' / 'comparison.csv')
        assert table['schedule'].tolist() == ['FB', '1-iFB']
        assert len(rows) == 2
        fb = rows[0]
        assert fb['termination'] == 'converged'
        assert fb['same_limit']
        assert fb['iters_to_tol'] is not None and fb['final_dist'] <= 1e-09
        for row in rows:
            assert (row['iters_to_tol'] is not None) == (row['final_dist'] <= 1e-09)
        assert table['iters_to_tol'].notna().iloc[0]

    def test_compare_is_reproducible(self, tmp_path):
        small_runner(tmp_path, subdir='a').compare()
        small_runner(tmp_path, subdir='b').compare()
        for name in ('comparison.csv', 'trace_FB.csv', 'trace_1-iFB.csv'):
            assert (tmp_path / 'a' / name).read_bytes() == (tmp_path / 'b' / name).read_bytes()

    def test_compare_needs_two_schedules(self, tmp_path):
        data = dict(SMALL_CONFIG, schedules=SMALL_CONFIG['schedules'][:1])
        with pytest.raises(ConfigError):
            small_runner(tmp_path, data).compare()

    def test_rates_table(self, tmp_path):
        rows = small_runner(tmp_path).rates()
        table = pd.read_csv(tmp_path / 'out' / 'rates.csv')
        assert table['schedule'].tolist() == ['FB', '1-iFB']
        for row in rows:
            assert 0 <= row['rho_M'] < 1
            assert row['K'] is not None


class TestPlots:

    def test_empty_series(self, tmp_path):
        with pytest.raises(PlotError):
            render_plot([], None, str(tmp_path / 'empty.svg'))

    def test_non_positive_values_are_dropped(self, tmp_path, caplog):
        series = PlotSeries(label='run', ks=[1, 2, 3], values=[0.1, 0.0, 0.001], marker_k=1, predicted_rate=0.1)
        with caplog.at_level(logging.WARNING):
            path = render_plot([series], {'title': 'test'}, str(tmp_path / 'plot.svg'))
        assert 'Dropped 1 non-positive' in caplog.text
        assert open(path, encoding='utf-8').read().lstrip().startswith('<?xml')


class TestCommandLine:

    def run_cli(self, monkeypatch, *argv):
        monkeypatch.setattr(sys, 'argv', ['main.py', *argv])
        with pytest.raises(SystemExit) as info:
            cli.main()
        return info.value.code

    def test_missing_config_exit_code(self, monkeypatch, tmp_path):
        assert self.run_cli(monkeypatch, 'run', str(tmp_path / 'absent.json')) == 2

    def test_infeasible_schedule_exit_code(self, monkeypatch, tmp_path):
        data = dict(SMALL_CONFIG, schedules=[{'name': 'big', 's': 1, 'a': [0.9], 'gamma': 0.9, 'rule': 'descent'}])
        assert self.run_cli(monkeypatch, 'run', write_config(tmp_path, data)) == 2

    def test_run_succeeds(self, monkeypatch, tmp_path):
        out = tmp_path / 'cli'
        code = self.run_cli(monkeypatch, 'run', write_config(tmp_path, SMALL_CONFIG), '--out', str(out), '--no-plot')
        assert code == 0
        assert (out / 'metadata.json').exists()
        assert (out / 'trace_FB.csv').exists()

    def test_no_command(self, monkeypatch):
        assert self.run_cli(monkeypatch) == 1


CONFIG_DIR = Path(__file__).parent.parent / 'config'


@pytest.mark.slow
class TestFullInstanceComparison:

    @pytest.mark.parametrize('config_name', ['regression.json', 'svm.json'])
    def test_inertia_ordering(self, tmp_path, config_name):
        config = load_config(str(CONFIG_DIR / config_name))
        rows = {r['schedule']: r for r in ExperimentRunner(config, output_dir=str(tmp_path), plot=False).compare()}
        assert all((r['same_limit'] for r in rows.values()))
        assert rows['2-iFB']['iters_to_tol'] <= rows['1-iFB']['iters_to_tol'] <= rows['FB']['iters_to_tol']

    def test_inertial_identification_is_not_later(self, tmp_path):
        config = load_config(str(CONFIG_DIR / 'regression.json'))
        rows = {r['schedule']: r for r in ExperimentRunner(config, output_dir=str(tmp_path), plot=False).compare()}
        K_fb = rows['FB']['K']
        assert K_fb is not None and K_fb < 5000
        for name in ('1-iFB', '2-iFB'):
            assert rows[name]['K'] is not None
            assert rows[name]['K'] <= 1.2 * K_fb
