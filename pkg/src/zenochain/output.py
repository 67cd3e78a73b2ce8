"""
CSV output with a commented header.

Every file starts with a block of `#` lines holding the tool version, a
units note, the resolved run configuration and a description of the
columns, followed by a CSV table with LF line endings. Floating point
values are written with 17 significant digits, so reading a file back
recovers every value exactly.
"""

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import NamedTuple

import click
import numpy as np
import pandas as pd

from zenochain import __version__
from zenochain.config import CONFIG_BEGIN, CONFIG_END, RunConfig
from zenochain.dynamics import TimeSeries
from zenochain.errors import OutputError
from zenochain.experiments import Curve, HeatmapResult

logger = logging.getLogger(__name__)

UNITS_NOTE = 'ħ=1, energies in units of γ, times in units of ħ/γ'
FLOAT_FORMAT = '%.17g'


class OutputHeader(NamedTuple):
    version: str
    config: tuple[str, ...]
    """`key=value` lines of the resolved configuration."""
    columns: tuple[str, ...] = ()
    """Description of each column."""

    @classmethod
    def for_config(cls, config: RunConfig) -> 'OutputHeader':
        return cls(version=__version__, config=tuple(config.echo()))

    def with_columns(self, *columns: str) -> 'OutputHeader':
        return self._replace(columns=columns)

    def render(self) -> str:
        """
        ```pycon
        >>> print(OutputHeader('1.0.0', ('command=evolve',), ('t: time',)).render(), end='')
        # zenochain 1.0.0
        # units: ħ=1, energies in units of γ, times in units of ħ/γ
        # --- config ---
        # command=evolve
        # --- end config ---
        # column t: time

        ```
        """
        lines = [f'# zenochain {self.version}', f'# units: {UNITS_NOTE}', CONFIG_BEGIN]
        lines.extend(f'# {line}' for line in self.config)
        lines.append(CONFIG_END)
        lines.extend(f'# column {column}' for column in self.columns)
        return ''.join(line + '\n' for line in lines)


def write_table(table: pd.DataFrame, header: OutputHeader, path: str | Path | None = None):
    """Write `header` and `table` to `path`, or to standard output if `path`
    is `None`."""
    text = header.render() + table.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n', na_rep='')
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        with Path(path).open('w', encoding='utf-8', newline='') as fh:
            fh.write(text)
    except OSError as e:
        raise OutputError(path=path, reason=e.strerror) from e
    logger.info(f'Wrote {len(table)} rows to {path}')


def emit_curve(curve: Curve, header: OutputHeader, path: str | Path | None = None):
    """Write a curve as `x,value[,linear_approx]`."""
    names = ['x', 'value', *curve.columns[2:]]
    rows = np.asarray(curve.rows, dtype=float).reshape(-1, len(curve.columns))
    table = pd.DataFrame(rows, columns=names)
    described = header.with_columns(*(f'{name}: {column}' for name, column in zip(names, curve.columns)))
    write_table(table, described, path)


def _series_frame(series: TimeSeries) -> pd.DataFrame:
    return pd.DataFrame(
        {
            't': pd.Series(series.times, dtype=float),
            'value': pd.Series(series.values, dtype=float),
            'segment': pd.Series([str(s) for s in series.segments], dtype=object),
        }
    )


def emit_series(series: TimeSeries, header: OutputHeader, path: str | Path | None = None):
    """Write a time series as `t,value,segment`, with segment `M` during a
    measurement and `F` during free evolution."""
    described = header.with_columns('t: time', 'value: occupation of site 0', 'segment: M or F')
    write_table(_series_frame(series), described, path)


def emit_family(family: Mapping[str, TimeSeries], header: OutputHeader, path: str | Path | None = None):
    """Write several labelled time series as `curve,t,value,segment`."""
    frames = [_series_frame(series).assign(curve=label) for label, series in family.items()]
    columns = ['curve', 't', 'value', 'segment']
    table = pd.concat(frames, ignore_index=True)[columns] if frames else pd.DataFrame(columns=columns)
    described = header.with_columns('curve: label', 't: time', 'value: occupation of site 0', 'segment: M or F')
    write_table(table, described, path)


def emit_heatmap(heatmap: HeatmapResult, header: OutputHeader, path: str | Path | None = None):
    """Write a heatmap in long form as `axis1,axis2,value,masked`, with the
    outer axis varying slowest. Masked cells have an empty value."""
    outer = heatmap.grid.axis1.values
    inner = heatmap.grid.axis2.values
    table = pd.DataFrame(
        {
            'axis1': np.repeat(outer, len(inner)),
            'axis2': np.tile(inner, len(outer)),
            'value': np.where(heatmap.mask, np.nan, heatmap.values).ravel(),
            'masked': heatmap.mask.ravel().astype(int),
        }
    )
    described = header.with_columns(
        f'axis1: {heatmap.grid.axis1.name}',
        f'axis2: {heatmap.grid.axis2.name}',
        'value: occupation of site 0',
        'masked: 1 where the parameters are not physical',
    )
    write_table(table, described, path)


def read_table(path: str | Path, columns: Sequence[str] = None) -> pd.DataFrame:
    """Read the table of a file written by one of the `emit_*` functions."""
    table = pd.read_csv(path, comment='#', float_precision='round_trip')
    return table if columns is None else table[list(columns)]
