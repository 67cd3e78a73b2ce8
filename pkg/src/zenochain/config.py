"""
Run configuration.

A run is described by a flat set of `key=value` pairs. Values are
resolved from, in increasing order of precedence:

1. the built-in defaults of `RunConfig`
2. a named preset from `presets.yml`
3. a config file
4. command line flags

Config files use the `.env` syntax understood by `python-dotenv`. The
header of any file written by `zenochain` contains the fully resolved
configuration between `CONFIG_BEGIN` and `CONFIG_END`, so an output file
can be passed back as a config file to repeat the run.
"""

import io
import logging
import math
from collections.abc import Mapping, Iterator
from dataclasses import dataclass, fields, replace
from enum import StrEnum
from importlib.resources import files
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from dotenv import dotenv_values

from zenochain.dynamics import MeasurementSchedule
from zenochain.errors import ConfigError, InvalidParams
from zenochain.experiments import Axis
from zenochain.model import ChainParams, ApparatusParams, measurement_time, coupling_for
from zenochain.twosite import InitialQubit

logger = logging.getLogger(__name__)

CONFIG_BEGIN = '# --- config ---'
CONFIG_END = '# --- end config ---'

CONSISTENCY_TOLERANCE = 1e-12
"""Relative tolerance when both members of a derived pair are given."""


class Command(StrEnum):
    TRACE_DISTANCE = 'trace-distance'
    T1_CURVE = 't1-curve'
    SURVIVAL = 'survival'
    EVOLVE = 'evolve'
    MAP_T_TF = 'map-t-tf'
    MAP_TM_TF = 'map-tm-tf'
    MAP_TM_TD = 'map-tm-td'
    REPFINTIME = 'repfintime'
    ANALYTIC_CHECK = 'analytic-check'


COUPLED_COMMANDS = frozenset({Command.SURVIVAL, Command.EVOLVE, Command.MAP_T_TF})
"""Commands that run with a single fixed coupling energy `g`."""

NOT_ECHOED = frozenset({'output', 'threads', 'preset'})
"""Keys that do not affect the content of the output."""


@dataclass(frozen=True)
class RunConfig:
    command: Command | None = None
    sites: int = 2
    epsilon: float = 0.0
    gamma: float = 1.0
    g: float | None = None
    delta: float = 0.0
    t_m: float | None = None
    t_f: float = 0.0
    t_d: float | None = None
    total_time: float = 5.0
    sample_dt: float = 0.01
    eval_t: float = 5.0
    t_offset: float = 0.0
    c0_re: float = 1.0
    c0_im: float = 0.0
    c1_re: float = 0.0
    c1_im: float = 0.0
    tm_min: float = 0.005
    tm_max: float = 1.0
    tf_min: float = 0.0
    tf_max: float = 5.0
    td_min: float = 0.0
    td_max: float = 5.0
    t_min: float = 0.0
    t_max: float = 5.0
    delta_min: float = -3.0
    delta_max: float = 3.0
    points: int = 100
    apparatus_dim: int = 2
    output: str | None = None
    threads: int = 1
    preset: str | None = None

    @property
    def chain(self) -> ChainParams:
        return ChainParams(sites=self.sites, epsilon=self.epsilon, gamma=self.gamma)

    @property
    def apparatus(self) -> ApparatusParams:
        return ApparatusParams(g=self.g or 0.0, delta=self.delta, dim=self.apparatus_dim)

    @property
    def schedule(self) -> MeasurementSchedule:
        return MeasurementSchedule(
            t_m=self.t_m or 0.0,
            t_f=self.t_f,
            total_time=self.total_time,
            sample_dt=self.sample_dt,
            t_offset=self.t_offset,
        )

    @property
    def qubit(self) -> InitialQubit:
        """Initial two-site state, normalized."""
        c0, c1 = complex(self.c0_re, self.c0_im), complex(self.c1_re, self.c1_im)
        norm = math.sqrt(abs(c0) ** 2 + abs(c1) ** 2)
        if norm == 0:
            raise ConfigError('c0 and c1 must not both be zero')
        return InitialQubit(c0 / norm, c1 / norm)

    @property
    def tm_axis(self) -> Axis:
        return Axis('t_m', self.tm_min, self.tm_max, self.points)

    @property
    def tf_axis(self) -> Axis:
        return Axis('t_f', self.tf_min, self.tf_max, self.points)

    @property
    def td_axis(self) -> Axis:
        return Axis('t_d', self.td_min, self.td_max, self.points)

    @property
    def t_axis(self) -> Axis:
        return Axis('t', self.t_min, self.t_max, self.points)

    @property
    def delta_axis(self) -> Axis:
        return Axis('delta', self.delta_min, self.delta_max, self.points)

    @property
    def tm_list(self) -> list[float]:
        """Measurement durations compared by `repfintime`."""
        return np.linspace(self.tm_min, self.tm_max, self.points).tolist()

    def echo(self) -> Iterator[str]:
        """`key=value` lines of every key that affects the output.

        ```pycon
        >>> list(RunConfig(command=Command.EVOLVE, g=100.0).echo())[:3]
        ['command=evolve', 'sites=2', 'epsilon=0.0']

        ```
        """
        for field in fields(self):
            value = getattr(self, field.name)
            if field.name in NOT_ECHOED or value is None:
                continue
            yield f'{field.name}={format_value(value)}'


KEYS = {field.name: field for field in fields(RunConfig)}
INT_KEYS = frozenset({'sites', 'points', 'threads', 'apparatus_dim'})
STR_KEYS = frozenset({'output', 'preset'})


def format_value(value: Any) -> str:
    """Text form of a config value that converts back to the same value.

    ```pycon
    >>> format_value(0.1)
    '0.1'
    >>> format_value(Command.MAP_TM_TD)
    'map-tm-td'

    ```
    """
    if isinstance(value, float):
        return repr(value)
    return str(value)


def convert(key: str, value: Any) -> Any:
    """Convert a raw value for `key` to the type of the corresponding field."""
    if key not in KEYS:
        raise ConfigError('Unknown config key "{key}"', key=key)
    if value is None or value == '':
        raise ConfigError('Config key "{key}" has no value', key=key)
    try:
        if key == 'command':
            return Command(str(value))
        if key in STR_KEYS:
            return str(value)
        if key in INT_KEYS:
            number = float(value)
            if not number.is_integer():
                raise ValueError(value)
            return int(number)
        return float(value)
    except ValueError as e:
        raise ConfigError('Invalid value for "{key}": {value}', key=key, value=value) from e


def convert_all(values: Mapping[str, Any]) -> dict[str, Any]:
    return {key: convert(key, value) for key, value in values.items()}


def load_presets() -> dict[str, dict[str, Any]]:
    return yaml.safe_load(files('zenochain').joinpath('presets.yml').read_text(encoding='utf-8'))


def load_header_config(path: str | Path) -> dict[str, str]:
    """Extract the config echo from the header of a file written by
    `zenochain`."""
    lines = []
    inside = False
    with Path(path).open(encoding='utf-8') as fh:
        for line in fh:
            line = line.rstrip('\n')
            if not line.startswith('#'):
                break
            if line == CONFIG_BEGIN:
                inside = True
            elif line == CONFIG_END:
                inside = False
            elif inside:
                lines.append(line.removeprefix('#').strip())
    if not lines:
        raise ConfigError('No config found in the header of {path}', path=path)
    return dotenv_values(stream=io.StringIO('\n'.join(lines) + '\n'))


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read a config file, or the config echoed in the header of an output
    file."""
    path = Path(path)
    try:
        with path.open(encoding='utf-8') as fh:
            first = fh.readline()
    except OSError as e:
        raise ConfigError('Unable to read config file {path}: {reason}', path=path, reason=e.strerror) from e
    if first.rstrip('\n') == CONFIG_BEGIN or first.startswith('# zenochain'):
        return load_header_config(path)
    return dotenv_values(path)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=CONSISTENCY_TOLERANCE, abs_tol=CONSISTENCY_TOLERANCE)


def resolve_timing(config: RunConfig, given: set[str]) -> RunConfig:
    """Derive `t_m` from `g` (or vice versa) and `t_f` from `t_d`."""
    g, t_m, t_f = config.g, config.t_m, config.t_f
    try:
        if g is not None and t_m is not None:
            if not _close(measurement_time(g, config.apparatus_dim), t_m):
                raise ConfigError('g={g} and t_m={t_m} are inconsistent; t_m must be 2π/(g·N)', g=g, t_m=t_m)
        elif g is not None:
            t_m = measurement_time(g, config.apparatus_dim)
        elif t_m is not None:
            g = coupling_for(t_m, config.apparatus_dim)
    except InvalidParams as e:
        raise ConfigError(e.details) from e

    if config.t_d is not None and t_m is not None:
        if config.t_d < t_m:
            raise ConfigError('t_d must be ≥ t_m, got t_d={t_d} and t_m={t_m}', t_d=config.t_d, t_m=t_m)
        if 't_f' in given and not _close(config.t_d - t_m, t_f):
            raise ConfigError('t_f must equal t_d - t_m, got t_f={t_f}', t_f=t_f)
        t_f = config.t_d - t_m
    return replace(config, g=g, t_m=t_m, t_f=t_f)


def validate(config: RunConfig):
    """Raise `ConfigError` if the parameters needed by `config.command` are
    missing or violate the preconditions of the modules that use them."""
    if config.command is None:
        raise ConfigError('Missing required config key "command"')
    if config.threads < 1:
        raise ConfigError('threads must be at least 1, got {threads}', threads=config.threads)
    if config.command == Command.ANALYTIC_CHECK:
        return
    if config.command in COUPLED_COMMANDS and config.g is None:
        raise ConfigError('Command {command} needs "g" or "t_m"', command=config.command)
    if config.command == Command.SURVIVAL:
        fixed = {'sites': 2, 'delta': 0.0, 'apparatus_dim': 2}
        for key, value in fixed.items():
            if getattr(config, key) != value:
                raise ConfigError(
                    'Command {command} uses {key}={value}, got {given}',
                    command=config.command,
                    key=key,
                    value=value,
                    given=getattr(config, key),
                )
    if config.command in {Command.EVOLVE, Command.SURVIVAL, Command.REPFINTIME} and not config.total_time > 0:
        raise ConfigError('total_time must be positive, got {total_time}', total_time=config.total_time)
    if config.command in {Command.MAP_TM_TF, Command.MAP_TM_TD} and not config.eval_t > 0:
        raise ConfigError('eval_t must be positive, got {eval_t}', eval_t=config.eval_t)
    if config.command == Command.REPFINTIME:
        if config.t_d is None:
            raise ConfigError('Command {command} needs "t_d"', command=config.command)
        if config.tm_max > config.t_d:
            raise ConfigError(
                't_d must be ≥ t_m, got t_d={t_d} and tm_max={tm_max}', t_d=config.t_d, tm_max=config.tm_max
            )
        if not config.tm_min > 0:
            raise ConfigError('tm_min must be positive, got {tm_min}', tm_min=config.tm_min)
    try:
        _ = config.chain, config.apparatus, config.qubit
        if config.command in {Command.EVOLVE, Command.SURVIVAL, Command.REPFINTIME}:
            _ = config.schedule
        axes = {
            Command.TRACE_DISTANCE: [config.tm_axis],
            Command.T1_CURVE: [config.delta_axis],
            Command.MAP_T_TF: [config.t_axis, config.tf_axis],
            Command.MAP_TM_TF: [config.tm_axis, config.tf_axis],
            Command.MAP_TM_TD: [config.tm_axis, config.td_axis],
        }
        for axis in axes.get(config.command, []):
            axis.check()
    except InvalidParams as e:
        raise ConfigError(e.details) from e
    if config.command == Command.TRACE_DISTANCE and config.tm_min < 0:
        raise ConfigError('tm_min must not be negative, got {tm_min}', tm_min=config.tm_min)
    if config.command == Command.MAP_T_TF and config.t_min < 0:
        raise ConfigError('t_min must not be negative, got {t_min}', t_min=config.t_min)


def parse_config(file_values: Mapping[str, Any] = None, flags: Mapping[str, Any] = None) -> RunConfig:
    """Resolve and validate a run configuration from config file values and
    command line flags. Flags override file values, and either may be
    empty.

    ```pycon
    >>> config = parse_config(flags={'command': 'survival', 'g': '3.141592653589793', 'sites': '2'})
    >>> config.t_m
    1.0

    ```
    """
    file_values = convert_all(file_values or {})
    flags = convert_all({k: v for k, v in (flags or {}).items() if v is not None})
    preset_name = flags.get('preset', file_values.get('preset'))
    values = {}
    if preset_name is not None:
        presets = load_presets()
        if preset_name not in presets:
            raise ConfigError(
                'Unknown preset "{preset}"; choose from {names}', preset=preset_name, names=sorted(presets)
            )
        values.update(convert_all(presets[preset_name]))
    values.update(file_values)
    values.update(flags)
    config = resolve_timing(RunConfig(**values), set(values))
    validate(config)
    logger.debug(f'Resolved config: {config}')
    return config
