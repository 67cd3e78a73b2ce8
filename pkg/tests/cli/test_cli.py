import pytest

from zenochain import __version__
from zenochain.cli import main
from zenochain.output import read_table


def test_version(runner):
    result = runner.invoke(main, ['--version'])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_evolve(runner, tmp_path):
    path = tmp_path / 'evolve.csv'
    args = ['--command', 'evolve', '--sites', '3', '--g', '50', '--t_f', '0.2', '--total_time', '1', '--output', path]
    result = runner.invoke(main, [str(a) for a in args])
    assert result.exit_code == 0
    table = read_table(path)
    assert table['value'][0] == 1
    assert set(table['segment']) == {'M', 'F'}


def test_rerun_from_output_header_is_identical(runner, tmp_path):
    first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
    args = ['--command', 'evolve', '--sites', '4', '--t_m', '0.1', '--t_d', '0.35', '--total_time', '1']
    assert runner.invoke(main, args + ['--output', str(first)]).exit_code == 0
    assert runner.invoke(main, ['--config', str(first), '--output', str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()


def test_config_file(runner, tmp_path, config_file):
    path = tmp_path / 't1.csv'
    config = config_file(f'command=t1-curve\ndelta_min=-1\ndelta_max=1\npoints=5\noutput={path}\n')
    result = runner.invoke(main, ['--config', str(config)])
    assert result.exit_code == 0
    assert len(read_table(path)) == 5


@pytest.mark.parametrize('threads', ['2', '8'])
def test_heatmap_output_independent_of_threads(runner, tmp_path, threads):
    serial, parallel = tmp_path / 'serial.csv', tmp_path / 'parallel.csv'
    args = ['--command', 'map-tm-td', '--sites', '4', '--delta', '1.5', '--eval_t', '2', '--points', '3']
    args += ['--tm_min', '0.5', '--tm_max', '1', '--td_min', '0.5', '--td_max', '1.5']
    assert runner.invoke(main, args + ['--threads', '1', '--output', str(serial)]).exit_code == 0
    assert runner.invoke(main, args + ['--threads', threads, '--output', str(parallel)]).exit_code == 0
    assert serial.read_bytes() == parallel.read_bytes()
    assert 1 in read_table(serial)['masked'].tolist()


def test_config_error_exit_code(runner):
    result = runner.invoke(main, ['--t_m', '2', '--t_d', '1'])
    assert result.exit_code == 1


def test_output_error_exit_code(runner, tmp_path):
    path = tmp_path / 'missing' / 'out.csv'
    result = runner.invoke(main, ['--command', 't1-curve', '--points', '3', '--output', str(path)])
    assert result.exit_code == 2


def test_analytic_check(runner):
    result = runner.invoke(main, ['--command', 'analytic-check'])
    assert result.exit_code == 0
    assert 'g=4, delta=1/2' in result.output
    assert 'FAIL' not in result.output


def test_analytic_check_detects_fault(runner):
    result = runner.invoke(main, ['--command', 'analytic-check', '--inject-fault', '0.001'])
    assert result.exit_code == 3
    assert 'FAIL two-site survival' in result.output


@pytest.mark.parametrize('eval_t', ['0', '-1'])
def test_evaluation_time_exit_code(runner, eval_t):
    result = runner.invoke(main, ['--preset', 'fig7', '--points', '3', '--eval_t', eval_t])
    assert result.exit_code == 1
    assert not isinstance(result.exception, KeyError)
