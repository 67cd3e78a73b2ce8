import logging
from collections.abc import Callable

import click
import numpy as np

from zenochain import __version__
from zenochain.config import Command, RunConfig, KEYS, INT_KEYS, STR_KEYS, parse_config, read_config_file
from zenochain.dynamics import run_schedule, initial_state
from zenochain.errors import ZenoError, OracleFailure
from zenochain.experiments import (
    curve_trace_distance,
    curve_t1_vs_delta,
    curve_survival_during_measurement,
    curve_repfintime,
    map_t_tf,
    map_tm_tf,
    map_tm_td,
)
from zenochain.model import CompositeModel
from zenochain.oracle import run_checks
from zenochain.output import OutputHeader, emit_curve, emit_series, emit_family, emit_heatmap

logger = logging.getLogger(__name__)

OPTION_HELP = {
    'command': 'What to compute.',
    'sites': 'Number of chain sites L.',
    'epsilon': 'On-site energy of site 0.',
    'gamma': 'Hopping energy.',
    'g': 'Coupling energy during a measurement. Implies t_m = 2π/(gN).',
    'delta': 'Shift of the apparatus spectrum.',
    't_m': 'Duration of a measurement. Implies g = 2π/(t_m·N).',
    't_f': 'Free evolution time between measurements.',
    't_d': 'Time between the starts of two measurements. Implies t_f = t_d - t_m.',
    'total_time': 'Length of a simulated time series.',
    'sample_dt': 'Sampling interval of a time series.',
    'eval_t': 'Time at which heatmap cells are evaluated.',
    't_offset': 'Free evolution time before the first measurement.',
    'points': 'Number of points along each sweep axis.',
    'apparatus_dim': 'Dimension N of the apparatus.',
    'output': 'Output file. Default is standard output.',
    'threads': 'Number of worker threads for heatmaps.',
    'preset': 'Named parameter set, e.g. "fig7".',
}


def config_options(func: Callable) -> Callable:
    """Add one option per config key."""
    for key in reversed(KEYS):
        if key == 'command':
            option_type = click.Choice([c.value for c in Command])
        elif key in INT_KEYS:
            option_type = int
        elif key in STR_KEYS:
            option_type = str
        else:
            option_type = float
        func = click.option(f'--{key}', key, type=option_type, default=None, help=OPTION_HELP.get(key))(func)
    return func


def run(config: RunConfig, fault: float = 0.0):
    header = OutputHeader.for_config(config)
    match config.command:
        case Command.TRACE_DISTANCE:
            curve = curve_trace_distance(config.delta, config.qubit, config.tm_axis, config.gamma)
            emit_curve(curve, header, config.output)
        case Command.T1_CURVE:
            emit_curve(curve_t1_vs_delta(config.qubit, config.delta_axis), header, config.output)
        case Command.SURVIVAL:
            family = curve_survival_during_measurement(
                config.g,
                epsilon=config.epsilon,
                t_max=config.total_time,
                sample_dt=config.sample_dt,
                gamma=config.gamma,
            )
            emit_family(family, header, config.output)
        case Command.EVOLVE:
            model = CompositeModel(config.chain, config.apparatus)
            series = run_schedule(initial_state(config.sites), config.schedule, model)
            emit_series(series, header, config.output)
        case Command.MAP_T_TF:
            heatmap = map_t_tf(config.chain, config.g, config.delta, config.t_axis, config.tf_axis, config.threads)
            emit_heatmap(heatmap, header, config.output)
        case Command.MAP_TM_TF:
            heatmap = map_tm_tf(
                config.chain, config.delta, config.tm_axis, config.tf_axis, config.eval_t, config.threads
            )
            emit_heatmap(heatmap, header, config.output)
        case Command.MAP_TM_TD:
            heatmap = map_tm_td(
                config.chain, config.delta, config.tm_axis, config.td_axis, config.eval_t, config.threads
            )
            emit_heatmap(heatmap, header, config.output)
        case Command.REPFINTIME:
            family = curve_repfintime(
                config.chain, config.delta, config.t_d, config.tm_list, config.total_time, config.sample_dt
            )
            emit_family(family, header, config.output)
        case Command.ANALYTIC_CHECK:
            results = run_checks(fault)
            for result in results:
                click.echo(str(result))
            failed = sum(not result.passed for result in results)
            if failed:
                raise OracleFailure(failed=failed, total=len(results))


@click.command()
@click.option(
    '--config',
    'config_file',
    type=click.Path(dir_okay=False),
    help='Config file of key=value lines, or a file written by a previous run.',
)
@config_options
@click.option('--debug', is_flag=True, help='Log debugging information.')
@click.option(
    '--inject-fault',
    type=float,
    default=0.0,
    help='Perturb one propagator entry in analytic-check by this amount.',
    metavar='AMOUNT',
)
@click.version_option(__version__, '--version', '-V')
@click.help_option('--help', '-h')
def main(config_file, debug, inject_fault, **flags):
    """Simulate a tight-binding chain whose first site is repeatedly measured
    by a finite-time measurement apparatus."""
    logging.basicConfig(
        level='DEBUG' if debug else 'INFO',
        format='%(levelname)s:%(threadName)s:%(name)s:%(message)s',
    )
    logger.info(f'Starting zenochain/{__version__}')
    try:
        file_values = read_config_file(config_file) if config_file else {}
        config = parse_config(file_values, flags)
        run(config, inject_fault)
    except ZenoError as e:
        logger.error(f'{e.name}: {e.details}')
        raise SystemExit(e.exit_code) from e
    except np.linalg.LinAlgError as e:
        logger.error(f'Numerical error: {e}')
        raise SystemExit(2) from e
