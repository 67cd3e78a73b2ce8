import numpy as np
import pytest

from zenochain.dynamics import Sample, Segment, TimeSeries
from zenochain.errors import OutputError
from zenochain.experiments import Axis, Curve, HeatmapResult, SweepGrid
from zenochain.output import OutputHeader, emit_curve, emit_family, emit_heatmap, emit_series, read_table


@pytest.fixture
def header():
    return OutputHeader(version='1.0.0', config=('command=evolve', 'g=100.0'))


@pytest.fixture
def heatmap():
    grid = SweepGrid(Axis('t_m', 0.5, 1.0, 2), Axis('t_d', 0.5, 1.0, 2))
    values = np.array([[0.1, 1 / 3], [np.nan, 2 / 3]])
    mask = np.array([[False, False], [True, False]])
    return HeatmapResult(grid=grid, values=values, mask=mask)


@pytest.fixture
def series():
    return TimeSeries(
        [
            Sample(0.0, 1.0, Segment.MEASUREMENT),
            Sample(0.5, 0.9, Segment.MEASUREMENT),
            Sample(1.0, 0.7, Segment.FREE),
        ]
    )


def test_heatmap_rows(tmp_path, header, heatmap):
    path = tmp_path / 'map.csv'
    emit_heatmap(heatmap, header, path)
    table = read_table(path)
    assert list(table.columns) == ['axis1', 'axis2', 'value', 'masked']
    assert len(table) == 4
    assert table['masked'].tolist() == [0, 0, 1, 0]
    assert table['axis1'].tolist() == [0.5, 0.5, 1.0, 1.0]
    assert table['axis2'].tolist() == [0.5, 1.0, 0.5, 1.0]


def test_masked_cells_have_empty_values(tmp_path, header, heatmap):
    path = tmp_path / 'map.csv'
    emit_heatmap(heatmap, header, path)
    data = [line for line in path.read_text(encoding='utf-8').splitlines() if not line.startswith('#')]
    assert data[3] == '1,0.5,,1'


def test_heatmap_values_are_exact(tmp_path, header, heatmap):
    path = tmp_path / 'map.csv'
    emit_heatmap(heatmap, header, path)
    table = read_table(path)
    assert table['value'][1] == 1 / 3
    assert table['value'][3] == 2 / 3


def test_header_precedes_table(tmp_path, header, series):
    path = tmp_path / 'series.csv'
    emit_series(series, header, path)
    lines = path.read_bytes().split(b'\n')
    assert lines[0] == b'# zenochain 1.0.0'
    assert b'# command=evolve' in lines
    assert b'\r' not in path.read_bytes()


def test_series_segments(tmp_path, header, series):
    path = tmp_path / 'series.csv'
    emit_series(series, header, path)
    table = read_table(path)
    assert list(table.columns) == ['t', 'value', 'segment']
    assert table['segment'].tolist() == ['M', 'M', 'F']


def test_empty_series(tmp_path, header):
    path = tmp_path / 'empty.csv'
    emit_series(TimeSeries([]), header, path)
    data = [line for line in path.read_text(encoding='utf-8').splitlines() if not line.startswith('#')]
    assert data == ['t,value,segment']


def test_family(tmp_path, header, series):
    path = tmp_path / 'family.csv'
    emit_family({'t_m=0.5': series, 't_m=1': series}, header, path)
    table = read_table(path)
    assert list(table.columns) == ['curve', 't', 'value', 'segment']
    assert table['curve'].tolist() == ['t_m=0.5'] * 3 + ['t_m=1'] * 3


def test_curve_columns(tmp_path, header):
    path = tmp_path / 'curve.csv'
    curve = Curve(columns=('t_m', 'trace_distance', 'linear_approx'), rows=np.array([[0.1, 0.2, 0.25]]))
    emit_curve(curve, header, path)
    text = path.read_text(encoding='utf-8')
    assert '# column x: t_m' in text
    assert read_table(path).columns.tolist() == ['x', 'value', 'linear_approx']


def test_seventeen_significant_digits(tmp_path, header):
    path = tmp_path / 'curve.csv'
    emit_curve(Curve(columns=('delta', 't1'), rows=np.array([[0.1, 1 / 3]])), header, path)
    assert path.read_text(encoding='utf-8').endswith('0.10000000000000001,0.33333333333333331\n')


def test_unwritable_path(tmp_path, header, series):
    with pytest.raises(OutputError):
        emit_series(series, header, tmp_path / 'missing' / 'series.csv')
