import math

import numpy as np
import pytest
from scipy.linalg import expm

from zenochain.dynamics import Segment
from zenochain.errors import InvalidParams
from zenochain.experiments import (
    Axis,
    SweepGrid,
    composite_trace_distance,
    curve_repfintime,
    curve_survival_during_measurement,
    curve_t1_vs_delta,
    curve_trace_distance,
    map_t_tf,
    map_tm_td,
    map_tm_tf,
    zeno_value,
)
from zenochain.model import ChainParams
from zenochain.twosite import InitialQubit, t1_prime


@pytest.mark.parametrize(
    'axis',
    [
        Axis('t', 0, 1, 1),
        Axis('t', 1, 1, 5),
        Axis('t', 2, 1, 5),
        Axis('time', 0, 1, 5),
    ],
)
def test_invalid_axis(axis):
    with pytest.raises(InvalidParams):
        axis.check()


def test_trace_distance_curve():
    curve = curve_trace_distance(0, InitialQubit(1, 0), Axis('t_m', 0.005, 0.05, 5))
    assert curve.columns == ('t_m', 'trace_distance', 'linear_approx')
    assert curve.rows.shape == (5, 3)
    t_m, distance, linear = curve.rows[0]
    assert linear == pytest.approx(2 * t_m / math.pi)
    assert distance == pytest.approx(linear, rel=0.02)
    assert np.all(np.diff(curve.rows[:, 1]) > 0)


def test_trace_distance_vanishes_without_measurement_time():
    curve = curve_trace_distance(0, InitialQubit(1, 0), Axis('t_m', 0, 1, 3))
    assert curve.rows[0].tolist() == [0.0, 0.0, 0.0]


def test_t1_curve():
    curve = curve_t1_vs_delta(InitialQubit(1, 0), Axis('delta', -1, 1, 5))
    assert curve.columns == ('delta', 't1')
    assert curve.rows[2, 1] == pytest.approx(1, abs=1e-12)
    assert curve.rows[0, 1] == pytest.approx(curve.rows[4, 1], abs=1e-12)


@pytest.mark.parametrize('delta', [0, 0.5, 1.5])
def test_composite_trace_distance(delta):
    g = 1e3
    assert composite_trace_distance(g, delta) == pytest.approx(2**1.5 / g * t1_prime(delta), rel=0.02)


def test_survival_during_measurement_ordering():
    family = curve_survival_during_measurement(math.pi)
    assert list(family) == [
        'delta+epsilon/g=0',
        'delta+epsilon/g=1',
        'delta+epsilon/g=2',
        'free epsilon=0',
        'free epsilon=-3.14159',
    ]
    at_end = [family[f'delta+epsilon/g={combo}'].value_at(1.0) for combo in (0, 1, 2)]
    assert at_end[0] < at_end[1] < at_end[2]
    free = family['free epsilon=0']
    for label in ('delta+epsilon/g=0', 'delta+epsilon/g=1', 'delta+epsilon/g=2'):
        series = family[label]
        later = series.times > 0.2
        assert np.all(series.values[later] > free.values[later])


def test_survival_during_measurement_depends_on_combination_only():
    detuned = curve_survival_during_measurement(math.pi, combos=(1,), epsilon=math.pi)
    tuned = curve_survival_during_measurement(math.pi, combos=(1,), epsilon=0)
    assert np.allclose(detuned['delta+epsilon/g=1'].values, tuned['delta+epsilon/g=1'].values, atol=1e-12)


def test_map_t_tf(chain15):
    heatmap = map_t_tf(chain15, 100, 0, Axis('t', 0, 5, 3), Axis('t_f', 0, 1, 2))
    assert heatmap.values.shape == (2, 3)
    assert not heatmap.mask.any()
    assert heatmap.values[:, 0] == pytest.approx([1, 1])
    assert heatmap.values[0, 1] == pytest.approx(0.885, abs=0.005)
    assert heatmap.values[0, 2] == pytest.approx(0.7831218881755, abs=1e-9)
    assert heatmap.values[1, 2] < 0.1


def test_map_tm_tf_masks_zero_measurement_time(short_chain):
    heatmap = map_tm_tf(short_chain, 1.5, Axis('t_m', 0, 1, 3), Axis('t_f', 0, 1, 3), eval_t=2)
    assert heatmap.mask[0].all()
    assert not heatmap.mask[1:].any()
    assert np.isnan(heatmap.values[0]).all()


def test_map_tm_td_is_reparametrized_map_tm_tf(short_chain):
    tm_axis, td_axis = Axis('t_m', 0.5, 1, 3), Axis('t_d', 0.5, 1.5, 3)
    heatmap = map_tm_td(short_chain, 1.5, tm_axis, td_axis, eval_t=2)
    for i, t_m in enumerate(tm_axis.values):
        for j, t_d in enumerate(td_axis.values):
            assert heatmap.mask[i, j] == (t_d < t_m)
            if not heatmap.mask[i, j]:
                assert heatmap.values[i, j] == zeno_value(short_chain, 1.5, t_m, t_d - t_m, 2)


@pytest.mark.parametrize('threads', [2, 4])
def test_heatmap_independent_of_threads(short_chain, threads):
    axes = Axis('t_m', 0.2, 1, 4), Axis('t_f', 0, 1, 3)
    serial = map_tm_tf(short_chain, 1.5, *axes, eval_t=2, threads=1)
    parallel = map_tm_tf(short_chain, 1.5, *axes, eval_t=2, threads=threads)
    assert np.array_equal(serial.values, parallel.values, equal_nan=True)
    assert np.array_equal(serial.mask, parallel.mask)


def test_threads_must_be_positive(short_chain):
    with pytest.raises(InvalidParams):
        map_tm_tf(short_chain, 1.5, Axis('t_m', 0.2, 1, 2), Axis('t_f', 0, 1, 2), threads=0)


def test_repfintime_longer_measurements_slow_the_decay(chain15):
    family = curve_repfintime(chain15, 1.5, 1.5, [0.5, 0.75, 1.0])
    assert list(family) == ['t_m=0.5', 't_m=0.75', 't_m=1']
    final = [series.value_at(5) for series in family.values()]
    assert final[0] < final[1] < final[2]
    assert set(family['t_m=0.5'].segments) == {Segment.MEASUREMENT, Segment.FREE}


def test_repfintime_rejects_measurement_longer_than_period(chain15):
    with pytest.raises(InvalidParams):
        curve_repfintime(chain15, 1.5, 1.0, [0.5, 1.5])


def test_equal_superposition_approaches_projective_result_faster():
    tm_axis = Axis('t_m', 0.05, 1, 20)
    site0 = curve_trace_distance(0, InitialQubit(1, 0), tm_axis).rows[:, 1]
    half = curve_trace_distance(0, InitialQubit(1 / math.sqrt(2), 1 / math.sqrt(2)), tm_axis).rows[:, 1]
    assert np.all(half < site0)


def test_t1_maximum_at_zero_shift():
    curve = curve_t1_vs_delta(InitialQubit(1, 0), Axis('delta', -3, 3, 201))
    assert curve.rows[np.argmax(curve.rows[:, 1]), 0] == pytest.approx(0, abs=0.03)
    assert np.allclose(curve.rows[:, 1], curve.rows[::-1, 1], atol=1e-12)


def test_repfintime_starts_on_site_zero(chain15):
    family = curve_repfintime(chain15, 1.5, 1.5, [0.5, 1.0], total_time=2)
    for series in family.values():
        assert series.samples[0].rho00 == 1
        assert series.samples[0].segment is Segment.MEASUREMENT


def reference_survival(sites, delta, t_m, t_f, eval_t):
    """Repeated measurements propagated with dense matrix exponentials."""
    chain = -(np.eye(sites, k=1) + np.eye(sites, k=-1))
    site_zero = np.zeros((sites, sites))
    site_zero[0, 0] = 1
    g = math.pi / t_m
    total = np.kron(chain, np.eye(2)) + g * np.kron(site_zero, np.array([[delta, -0.5], [-0.5, delta]]))
    ready = np.diag([1.0, 0.0])
    rho = site_zero.astype(complex)
    t = 0.0
    while t < eval_t - 1e-12:
        step = min(t_m, eval_t - t)
        u = expm(-1j * total * step)
        composite = u @ np.kron(rho, ready) @ u.conj().T
        rho = composite.reshape(sites, 2, sites, 2).trace(axis1=1, axis2=3)
        t += step
        if t < eval_t - 1e-12 and t_f > 0:
            step = min(t_f, eval_t - t)
            u = expm(-1j * chain * step)
            rho = u @ rho @ u.conj().T
            t += step
    return rho[0, 0].real


def test_repfintime_matches_dense_propagation(chain15):
    family = curve_repfintime(chain15, 1.5, 1.5, [0.5, 0.75, 1.0])
    for t_m in (0.5, 0.75, 1.0):
        expected = reference_survival(15, 1.5, t_m, 1.5 - t_m, 5)
        assert family[f't_m={t_m:g}'].value_at(5) == pytest.approx(expected, abs=1e-10)


def test_map_tm_tf_inhibits_decay_for_short_measurements(chain15):
    heatmap = map_tm_tf(chain15, 1.5, Axis('t_m', 0.05, 0.1, 2), Axis('t_f', 0, 0.02, 2), eval_t=5)
    assert np.all(heatmap.values > 0.8)


def test_map_tm_tf_weak_coupling_loses_inhibition(chain15):
    strong = map_tm_tf(chain15, 1.5, Axis('t_m', 0.05, 0.1, 2), Axis('t_f', 0, 0.02, 2), eval_t=5)
    weak = map_tm_tf(chain15, 1.5, Axis('t_m', 4, 5, 2), Axis('t_f', 0, 0.02, 2), eval_t=5)
    assert np.all(weak.values < 0.5)
    assert weak.values.max() < strong.values.min()


def test_map_t_tf_detuning_irrelevant_for_short_free_periods(chain15):
    axes = Axis('t', 0, 5, 5), Axis('t_f', 0, 0.1, 3)
    plain = map_t_tf(chain15, 100, 0, *axes)
    detuned = map_t_tf(ChainParams(sites=15, epsilon=math.pi), 100, 0, *axes)
    assert np.max(np.abs(plain.values - detuned.values)) <= 0.05


def test_sweep_grid_default_parameters_are_not_shared():
    first, second = SweepGrid(Axis('t', 0, 1, 2)), SweepGrid(Axis('t_f', 0, 1, 2))
    assert first.fixed == {}
    with pytest.raises(TypeError):
        first.fixed['g'] = 1
    assert second.fixed == {}
