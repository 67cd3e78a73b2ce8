"""
Parameter sweeps producing the curves and heatmaps of the measured-chain
study.

Heatmaps are evaluated row by row; rows are independent and may run on
a thread pool, while results are always assembled in row-major order so
the output does not depend on the number of workers.
"""

import logging
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from types import MappingProxyType
from typing import NamedTuple, Any

import numpy as np

from zenochain.dynamics import (
    MeasurementSchedule,
    TimeSeries,
    premeasurement_channel,
    premeasure_composite,
    run_schedule,
    survival_at,
    initial_state,
)
from zenochain.errors import InvalidParams
from zenochain.linalg import trace_distance, pure_state, projector, kron
from zenochain.model import ChainParams, ApparatusParams, CompositeModel, coupling_for, measurement_time
from zenochain.twosite import InitialQubit, t1_coefficient

logger = logging.getLogger(__name__)

AXIS_NAMES = frozenset({'t', 't_m', 't_f', 't_d', 'delta', 'epsilon', 'g'})


class Axis(NamedTuple):
    """Evenly spaced sweep axis including both end points."""

    name: str
    min: float
    max: float
    points: int

    def check(self) -> 'Axis':
        if self.name not in AXIS_NAMES:
            raise InvalidParams('unknown axis {name}', name=self.name)
        if self.points < 2:
            raise InvalidParams('axis {name} needs at least 2 points, got {points}', name=self.name, points=self.points)
        if not self.min < self.max:
            raise InvalidParams(
                'axis {name} needs min < max, got {min} and {max}', name=self.name, min=self.min, max=self.max
            )
        return self

    @property
    def values(self) -> np.ndarray:
        """
        ```pycon
        >>> Axis('t', 0, 1, 5).values.tolist()
        [0.0, 0.25, 0.5, 0.75, 1.0]

        ```
        """
        return np.linspace(self.min, self.max, self.points)


class SweepGrid(NamedTuple):
    axis1: Axis
    """Outer (row) axis."""
    axis2: Axis | None = None
    """Inner (column) axis."""
    fixed: Mapping[str, Any] = MappingProxyType({})
    """Parameters that are held constant over the sweep."""


class HeatmapResult(NamedTuple):
    grid: SweepGrid
    values: np.ndarray
    """Occupation of site 0 per cell, indexed `[axis1, axis2]`; `nan` where masked."""
    mask: np.ndarray
    """`True` where the cell parameters are not physical."""


class Curve(NamedTuple):
    columns: tuple[str, ...]
    rows: np.ndarray
    """One row per sample, one column per entry of `columns`."""


def two_site_model(g: float, delta: float, epsilon: float = 0.0, gamma: float = 1.0) -> CompositeModel:
    return CompositeModel(ChainParams(sites=2, epsilon=epsilon, gamma=gamma), ApparatusParams(g=g, delta=delta))


def sweep(grid: SweepGrid, row: Callable[[float], Sequence[float | None]], threads: int = 1) -> HeatmapResult:
    """Evaluate `row` for each value of `grid.axis1`. `row` returns one value
    per point of `grid.axis2`, with `None` for masked cells."""
    if threads < 1:
        raise InvalidParams('threads must be at least 1, got {threads}', threads=threads)
    outer = grid.axis1.values
    rows = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for i, values in enumerate(pool.map(row, outer), 1):
            rows.append(values)
            logger.info(f'{grid.axis1.name} row {i}/{len(outer)}')
    mask = np.array([[v is None for v in r] for r in rows], dtype=bool)
    values = np.array([[math.nan if v is None else v for v in r] for r in rows], dtype=float)
    return HeatmapResult(grid=grid, values=values, mask=mask)


def projective_result(q: InitialQubit) -> np.ndarray:
    """Chain state after an ideal projective measurement of site 0."""
    return np.diag([abs(q.c0) ** 2, abs(q.c1) ** 2]).astype(np.complex128)


def trace_distance_after_measurement(q: InitialQubit, g: float, delta: float, gamma: float = 1.0) -> float:
    """Trace distance between the two-site chain state after one
    premeasurement with coupling `g` and the projective result."""
    q.check()
    model = two_site_model(g, delta, gamma=gamma)
    rhoS = premeasurement_channel(pure_state(q.amplitudes), model)
    return trace_distance(rhoS, projective_result(q))


def composite_trace_distance(g: float, delta: float, gamma: float = 1.0) -> float:
    """Trace distance between the chain-apparatus state after one measurement
    from `|0⟩|A₀⟩` and the ideal outcome `|0⟩|A₁⟩`."""
    model = two_site_model(g, delta, gamma=gamma)
    rho = premeasure_composite(projector(2, 0), model)
    return trace_distance(rho, kron(projector(2, 0), projector(2, 1)))


def curve_trace_distance(delta: float, q: InitialQubit, tm_axis: Axis, gamma: float = 1.0) -> Curve:
    """Trace distance to the projective result as a function of the
    measurement duration `t_m = π/g`, with its linear approximation
    `(2γ/g)·T₁`."""
    q.check()
    t1 = t1_coefficient(q, delta)
    rows = []
    for t_m in tm_axis.values:
        if t_m <= 0:
            rows.append((t_m, 0.0, 0.0))
            continue
        g = coupling_for(t_m)
        rows.append((t_m, trace_distance_after_measurement(q, g, delta, gamma), 2 * gamma / g * t1))
    return Curve(columns=('t_m', 'trace_distance', 'linear_approx'), rows=np.array(rows))


def curve_t1_vs_delta(q: InitialQubit, delta_axis: Axis) -> Curve:
    q.check()
    rows = [(delta, t1_coefficient(q, delta)) for delta in delta_axis.values]
    return Curve(columns=('delta', 't1'), rows=np.array(rows))


def curve_survival_during_measurement(
    g: float,
    combos: Iterable[float] = (0, 1, 2),
    epsilon: float = 0.0,
    t_max: float = None,
    sample_dt: float = 0.01,
    gamma: float = 1.0,
) -> dict[str, TimeSeries]:
    """Occupation of site 0 of a two-site chain during a single measurement,
    for each value of `δ + ε/g` in `combos`, together with the free evolution
    for degenerate sites and for site 0 lowered by `g`."""
    t_max = measurement_time(g) if t_max is None else t_max
    rho0 = initial_state(2)
    family = {}
    for combo in combos:
        model = two_site_model(g, combo - epsilon / g, epsilon, gamma)
        schedule = MeasurementSchedule(t_m=t_max, t_f=0, total_time=t_max, sample_dt=sample_dt)
        family[f'delta+epsilon/g={combo:g}'] = run_schedule(rho0, schedule, model)
    free = MeasurementSchedule(t_m=0, t_f=0, total_time=t_max, sample_dt=sample_dt)
    family['free epsilon=0'] = run_schedule(rho0, free, two_site_model(0, 0, 0, gamma))
    family[f'free epsilon={-g:g}'] = run_schedule(rho0, free, two_site_model(0, 0, -g, gamma))
    return family


def _check_eval_time(eval_t: float):
    if not eval_t > 0:
        raise InvalidParams('eval_t must be positive, got {eval_t}', eval_t=eval_t)


def zeno_value(
    chain: ChainParams,
    delta: float,
    t_m: float,
    t_f: float,
    eval_t: float,
    t_offset: float = 0.0,
) -> float | None:
    """Occupation of site 0 at `eval_t` under repeated measurements of
    duration `t_m` with coupling `g = π/t_m`, separated by `t_f`. Returns
    `None` for parameters without a physical schedule."""
    if t_m <= 0 or t_f < 0:
        return None
    model = CompositeModel(chain, ApparatusParams(g=coupling_for(t_m), delta=delta))
    schedule = MeasurementSchedule(t_m=t_m, t_f=t_f, total_time=eval_t, sample_dt=None, t_offset=t_offset)
    return survival_at(initial_state(chain.sites), schedule, model, eval_t)


def map_t_tf(
    chain: ChainParams,
    g: float,
    delta: float,
    t_axis: Axis,
    tf_axis: Axis,
    threads: int = 1,
) -> HeatmapResult:
    """Occupation of site 0 as a function of the free period `t_f` (rows) and
    time `t` (columns) for a fixed coupling `g`."""
    model = CompositeModel(chain, ApparatusParams(g=g, delta=delta)).warm()
    rho0 = initial_state(chain.sites)
    times = t_axis.check().values

    def row(t_f):
        schedule = MeasurementSchedule(t_m=model.measurement_time, t_f=t_f, total_time=t_axis.max, sample_dt=None)
        series = run_schedule(rho0, schedule, model, extra_times=times)
        return [series.value_at(t) for t in times]

    grid = SweepGrid(tf_axis.check(), t_axis, {'sites': chain.sites, 'epsilon': chain.epsilon, 'g': g, 'delta': delta})
    return sweep(grid, row, threads)


def map_tm_tf(
    chain: ChainParams,
    delta: float,
    tm_axis: Axis,
    tf_axis: Axis,
    eval_t: float = 5.0,
    threads: int = 1,
) -> HeatmapResult:
    """Occupation of site 0 at `eval_t` as a function of the measurement
    duration `t_m` (rows) and the free period `t_f` (columns)."""
    _check_eval_time(eval_t)
    free_periods = tf_axis.check().values

    def row(t_m):
        return [zeno_value(chain, delta, t_m, t_f, eval_t) for t_f in free_periods]

    grid = SweepGrid(tm_axis.check(), tf_axis, {'sites': chain.sites, 'epsilon': chain.epsilon, 'delta': delta})
    return sweep(grid, row, threads)


def map_tm_td(
    chain: ChainParams,
    delta: float,
    tm_axis: Axis,
    td_axis: Axis,
    eval_t: float = 5.0,
    threads: int = 1,
) -> HeatmapResult:
    """Occupation of site 0 at `eval_t` as a function of the measurement
    duration `t_m` (rows) and the period `t_d = t_m + t_f` (columns). Cells
    with `t_d < t_m` are masked."""
    _check_eval_time(eval_t)
    periods = td_axis.check().values

    def row(t_m):
        return [None if t_d < t_m else zeno_value(chain, delta, t_m, t_d - t_m, eval_t) for t_d in periods]

    grid = SweepGrid(tm_axis.check(), td_axis, {'sites': chain.sites, 'epsilon': chain.epsilon, 'delta': delta})
    return sweep(grid, row, threads)


def curve_repfintime(
    chain: ChainParams,
    delta: float,
    td: float,
    tm_list: Iterable[float],
    total_time: float = 5.0,
    sample_dt: float = 0.01,
) -> dict[str, TimeSeries]:
    """Occupation of site 0 over time for a fixed period `t_d` and several
    measurement durations, with segment labels for each sample."""
    rho0 = initial_state(chain.sites)
    family = {}
    for t_m in tm_list:
        if not 0 < t_m <= td:
            raise InvalidParams('t_m must be in (0, t_d], got t_m={t_m}, t_d={t_d}', t_m=t_m, t_d=td)
        model = CompositeModel(chain, ApparatusParams(g=coupling_for(t_m), delta=delta))
        schedule = MeasurementSchedule(t_m=t_m, t_f=td - t_m, total_time=total_time, sample_dt=sample_dt)
        family[f't_m={t_m:g}'] = run_schedule(rho0, schedule, model)
    return family
