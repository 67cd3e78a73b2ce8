"""
Premeasurement and free-evolution channels, and the scheduler for
repeated measurements.

One cycle of the repeated measurement maps the chain state `ρₙˢ` to

    ρₙˢ ⊗ |A₀⟩⟨A₀|  →  U(t_m) (…) U(t_m)†  →  Tr_A  →  free evolution for t_f

The apparatus is reset to `|A₀⟩` before every measurement and its
outcome is never read (non-selective measurement). All propagators are
spectrally exact, so samples can be taken at arbitrary times inside a
segment without step-size error.
"""

from collections.abc import Iterator, Iterable
from dataclasses import dataclass
from enum import StrEnum
from typing import NamedTuple

import numpy as np

from zenochain.errors import InvalidParams, DimensionError
from zenochain.linalg import (
    DensityMatrix,
    ComplexMatrix,
    kron,
    partial_trace_apparatus,
    projector,
    check_density_matrix,
    unitary_from_hamiltonian,
)
from zenochain.model import CompositeModel, ChainParams, build_chain_hamiltonian, pointer_state

TIME_RESOLUTION = 1e-12
"""Sample times closer than this are treated as the same instant."""


class Segment(StrEnum):
    MEASUREMENT = 'M'
    FREE = 'F'


@dataclass(frozen=True)
class MeasurementSchedule:
    """Plan of alternating measurement and free segments.

    Measurements of duration `t_m` start at `t_offset`, `t_offset + t_d`,
    `t_offset + 2 t_d`, … with `t_d = t_m + t_f`. With `t_m = 0` the
    schedule is pure free evolution."""

    t_m: float
    """Duration of a measurement."""
    t_f: float
    """Duration of the free evolution between two measurements."""
    total_time: float
    """End of the schedule."""
    sample_dt: float | None = 0.01
    """Spacing of regular samples. With `None`, samples are only taken at
    segment boundaries and at explicitly requested times."""
    t_offset: float = 0.0
    """Length of an initial free stretch before the first measurement."""

    def __post_init__(self):
        if not self.total_time >= 0:
            raise InvalidParams('total_time must not be negative, got {total_time}', total_time=self.total_time)
        if self.t_m < 0 or self.t_f < 0 or self.t_offset < 0:
            raise InvalidParams(
                't_m, t_f and t_offset must not be negative, got {t_m}, {t_f}, {t_offset}',
                t_m=self.t_m,
                t_f=self.t_f,
                t_offset=self.t_offset,
            )
        if self.sample_dt is not None and not self.sample_dt > 0:
            raise InvalidParams('sample_dt must be positive, got {sample_dt}', sample_dt=self.sample_dt)

    @property
    def t_d(self) -> float:
        return self.t_m + self.t_f

    def segments(self) -> Iterator[tuple[Segment, float, float, float]]:
        """Yield `(kind, start, end, duration)` for each segment up to
        `total_time`. The duration is the nominal `t_m`, `t_f` or
        `t_offset` unless the segment is cut short by `total_time`."""

        def clipped(kind, start, nominal):
            end = start + nominal
            if end >= self.total_time - TIME_RESOLUTION:
                return kind, start, self.total_time, self.total_time - start
            return kind, start, end, nominal

        if self.t_m == 0:
            yield Segment.FREE, 0.0, self.total_time, self.total_time
            return
        start = 0.0
        if self.t_offset > 0:
            segment = clipped(Segment.FREE, start, self.t_offset)
            yield segment
            start = segment[2]
        while start < self.total_time - TIME_RESOLUTION:
            segment = clipped(Segment.MEASUREMENT, start, self.t_m)
            yield segment
            start = segment[2]
            if self.t_f > 0 and start < self.total_time - TIME_RESOLUTION:
                segment = clipped(Segment.FREE, start, self.t_f)
                yield segment
                start = segment[2]

    def sample_times(self, extra: Iterable[float] = ()) -> list[float]:
        """Regular samples, segment boundaries and `extra` times within
        `[0, total_time]`, ascending and without duplicates."""
        times = [0.0, self.total_time]
        if self.sample_dt is not None:
            count = int(np.floor(self.total_time / self.sample_dt + TIME_RESOLUTION))
            times.extend(k * self.sample_dt for k in range(count + 1))
        for _, start, end, _ in self.segments():
            times.extend((start, end))
        times.extend(t for t in extra if 0 <= t <= self.total_time)
        merged = []
        for t in sorted(times):
            if not merged or t - merged[-1] > TIME_RESOLUTION:
                merged.append(t)
        return merged


class Sample(NamedTuple):
    t: float
    rho00: float
    segment: Segment


class TimeSeries(NamedTuple):
    """Sampled occupation of site 0."""

    samples: list[Sample]

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s.rho00 for s in self.samples])

    @property
    def segments(self) -> list[Segment]:
        return [s.segment for s in self.samples]

    def value_at(self, t: float) -> float:
        """Value of the sample taken at time `t`."""
        for sample in self.samples:
            if abs(sample.t - t) <= TIME_RESOLUTION:
                return sample.rho00
        raise KeyError(t)


class ChannelState(NamedTuple):
    """Chain state at the end of a segment."""

    rhoS: DensityMatrix
    t_now: float
    cycle_index: int
    """Number of measurements completed so far."""


def reset_apparatus(rhoS: DensityMatrix, apparatus_dim: int) -> DensityMatrix:
    """`ρˢ ⊗ |A₀⟩⟨A₀|`"""
    a0 = pointer_state(apparatus_dim)
    return kron(rhoS, np.outer(a0, a0.conj()))


def _check_chain_state(rhoS: DensityMatrix, sites: int):
    if rhoS.shape != (sites, sites):
        raise DimensionError(expected=(sites, sites), actual=rhoS.shape)


def _evolve(rho: DensityMatrix, propagator: ComplexMatrix) -> DensityMatrix:
    return propagator @ rho @ propagator.conj().T


def premeasure_composite(rhoS: DensityMatrix, model: CompositeModel, t: float = None) -> DensityMatrix:
    """Composite state `U(t)(ρˢ ⊗ |A₀⟩⟨A₀|)U(t)†` after coupling the freshly
    reset apparatus for a time `t` (default: the model's measurement time)."""
    _check_chain_state(rhoS, model.sites)
    if not model.apparatus.g > 0:
        raise InvalidParams('coupling must be positive, got g={g}', g=model.apparatus.g)
    t = model.measurement_time if t is None else t
    return _evolve(reset_apparatus(rhoS, model.apparatus_dim), model.segment_propagator(Segment.MEASUREMENT, t))


def premeasurement_channel(rhoS: DensityMatrix, model: CompositeModel, t: float = None) -> DensityMatrix:
    """Non-selective finite-time measurement of site 0:
    `Tr_A[U(t_m)(ρˢ ⊗ |A₀⟩⟨A₀|)U(t_m)†]`."""
    return partial_trace_apparatus(premeasure_composite(rhoS, model, t), model.sites, model.apparatus_dim)


def free_channel(rhoS: DensityMatrix, t: float, chain: ChainParams) -> DensityMatrix:
    """Free evolution `U(t)ρˢU(t)†` of the chain with `U = exp(-i H_c t)`."""
    if t < 0:
        raise InvalidParams('free evolution time must not be negative, got t={t}', t=t)
    _check_chain_state(rhoS, chain.sites)
    return _evolve(rhoS, unitary_from_hamiltonian(build_chain_hamiltonian(chain), t))


def projective_channel(rhoS: DensityMatrix) -> DensityMatrix:
    """Ideal non-selective projective measurement of the occupation of site 0:
    `PρP + QρQ` with `P = |0⟩⟨0|`, `Q = 𝟙 - P`."""
    p = projector(rhoS.shape[0], 0)
    q = np.eye(rhoS.shape[0]) - p
    return p @ rhoS @ p + q @ rhoS @ q


def occupation(rhoS: DensityMatrix, site: int = 0) -> float:
    """Population `⟨site|ρˢ|site⟩` of a chain site.

    ```pycon
    >>> occupation(np.eye(4) / 4, 2)
    0.25

    ```
    """
    if not 0 <= site < rhoS.shape[0]:
        raise IndexError(f'site {site} out of range for a chain of {rhoS.shape[0]} sites')
    return float(rhoS[site, site].real)


def initial_state(sites: int) -> DensityMatrix:
    """Particle localized on site 0."""
    return projector(sites, 0)


def _segment_states(
    rho0: DensityMatrix,
    schedule: MeasurementSchedule,
    model: CompositeModel,
    sample_times: list[float] = None,
) -> Iterator[tuple[ChannelState, list[Sample]]]:
    """Thread the chain state through the schedule, yielding the state at the
    end of each segment together with the samples taken inside it."""
    sample_times = sample_times or []
    rhoS = rho0
    cycle = 0
    first = True
    index = 0
    for kind, start, end, duration in schedule.segments():
        samples = []
        if kind is Segment.MEASUREMENT:
            state = reset_apparatus(rhoS, model.apparatus_dim)

            def reduced_at(tau, state=state):
                evolved = _evolve(state, model.measurement_propagator(tau))
                return partial_trace_apparatus(evolved, model.sites, model.apparatus_dim)

            full = model.segment_propagator(kind, duration)
            end_state = partial_trace_apparatus(_evolve(state, full), model.sites, model.apparatus_dim)
        else:

            def reduced_at(tau, state=rhoS):
                return _evolve(state, model.free_propagator(tau))

            end_state = _evolve(rhoS, model.segment_propagator(kind, duration))

        if first:
            samples.append(Sample(0.0, occupation(rhoS), kind))
            while index < len(sample_times) and sample_times[index] <= TIME_RESOLUTION:
                index += 1
            first = False
        while index < len(sample_times) and sample_times[index] <= end + TIME_RESOLUTION:
            t = sample_times[index]
            if abs(t - end) <= TIME_RESOLUTION:
                value = occupation(end_state)
            else:
                value = occupation(reduced_at(t - start))
            samples.append(Sample(t, value, kind))
            index += 1

        rhoS = end_state
        if kind is Segment.MEASUREMENT and duration == schedule.t_m:
            cycle += 1
        yield ChannelState(rhoS, end, cycle), samples


def iter_segments(rho0: DensityMatrix, schedule: MeasurementSchedule, model: CompositeModel) -> Iterator[ChannelState]:
    """Chain states at the end of every segment of the schedule."""
    for state, _ in _segment_states(check_density_matrix(rho0), schedule, model):
        yield state


def run_schedule(
    rho0: DensityMatrix,
    schedule: MeasurementSchedule,
    model: CompositeModel,
    extra_times: Iterable[float] = (),
) -> TimeSeries:
    """Run the repeated-measurement schedule from `rho0` and sample the
    occupation of site 0 at multiples of `sample_dt`, at every segment
    boundary, and at each of `extra_times`. Each sample is labelled with
    the kind of segment it lies in; a sample on a boundary belongs to the
    segment that ends there."""
    rho0 = check_density_matrix(rho0)
    _check_chain_state(rho0, model.sites)
    if schedule.t_m > 0 and not model.apparatus.g > 0:
        raise InvalidParams('coupling must be positive, got g={g}', g=model.apparatus.g)
    sample_times = schedule.sample_times(extra_times)
    samples = []
    for _, segment_samples in _segment_states(rho0, schedule, model, sample_times):
        samples.extend(segment_samples)
    if not samples:
        # empty schedule
        first = Segment.MEASUREMENT if schedule.t_m > 0 and schedule.t_offset == 0 else Segment.FREE
        samples.append(Sample(0.0, occupation(rho0), first))
    return TimeSeries(samples)


def survival_at(rho0: DensityMatrix, schedule: MeasurementSchedule, model: CompositeModel, t: float) -> float:
    """Occupation of site 0 at time `t`, sampling only segment boundaries on the way."""
    sparse = MeasurementSchedule(
        t_m=schedule.t_m,
        t_f=schedule.t_f,
        total_time=t,
        sample_dt=None,
        t_offset=schedule.t_offset,
    )
    return run_schedule(rho0, sparse, model).value_at(t)
