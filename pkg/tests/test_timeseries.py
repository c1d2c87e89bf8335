import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twincast.errors import OrderingError, ParseError, SchemaError, SizeError
from twincast.timeseries import (
    FEATURES,
    FeatureScaler,
    KpiSeries,
    SplitSpec,
    chrono_split,
    fit_scaler,
    load_csv,
    make_windows,
    write_csv,
)


def series_from_matrix(values, interval=300):
    values = np.asarray(values, dtype=np.float64)
    ts = np.arange(len(values), dtype=np.int64) * interval
    return KpiSeries(ts, values, interval)


def ramp_series(n, interval=300):
    # feature k at step i = i + k/10, all columns distinct
    base = np.arange(n, dtype=np.float64)[:, None]
    offsets = np.arange(4, dtype=np.float64)[None, :] / 10.0
    return series_from_matrix(base + offsets, interval)


class TestLoadCsv:
    def test_well_formed_three_rows(self, tmp_path):
        p = tmp_path / "ok.csv"
        p.write_text(
            "timestamp,internet,downstream,sessions,vpn\n"
            "0,10.5,7.0,100,1.5\n"
            "300,11.0,7.7,101,1.6\n"
            "600,9.25,6.4,99,1.4\n"
        )
        series = load_csv(p)
        assert len(series) == 3
        assert series.interval_s == 300
        assert series.values[2, 0] == 9.25
        assert series.record(1).sessions == 101.0

    def test_missing_column_names_it(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("timestamp,downstream,sessions,vpn\n0,1,2,3\n")
        with pytest.raises(SchemaError, match="internet"):
            load_csv(p)

    def test_extra_column_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("timestamp,internet,downstream,sessions,vpn,extra\n0,1,2,3,4,5\n")
        with pytest.raises(SchemaError, match="extra"):
            load_csv(p)

    def test_decreasing_timestamp_cites_row(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(
            "timestamp,internet,downstream,sessions,vpn\n"
            "0,1,1,1,1\n300,1,1,1,1\n200,1,1,1,1\n"
        )
        with pytest.raises(OrderingError, match="row 3"):
            load_csv(p)

    def test_gap_is_hard_error(self, tmp_path):
        p = tmp_path / "gap.csv"
        p.write_text(
            "timestamp,internet,downstream,sessions,vpn\n"
            "0,1,1,1,1\n300,1,1,1,1\n900,1,1,1,1\n"
        )
        with pytest.raises(OrderingError, match="interval"):
            load_csv(p)

    def test_non_numeric_cell_cites_row(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text(
            "timestamp,internet,downstream,sessions,vpn\n"
            "0,1,1,1,1\n300,oops,1,1,1\n"
        )
        with pytest.raises(ParseError, match="row 2"):
            load_csv(p)

    def test_negative_value_rejected(self, tmp_path):
        p = tmp_path / "neg.csv"
        p.write_text("timestamp,internet,downstream,sessions,vpn\n0,-1,1,1,1\n")
        with pytest.raises(ParseError, match="non-negative"):
            load_csv(p)

    def test_timestamps_normalized_to_zero(self, tmp_path):
        p = tmp_path / "offset.csv"
        p.write_text(
            "timestamp,internet,downstream,sessions,vpn\n"
            "1000,1,1,1,1\n1300,2,2,2,2\n"
        )
        series = load_csv(p)
        assert series.timestamps[0] == 0
        assert series.timestamps[1] == 300

    def test_csv_round_trip_exact(self, tmp_path):
        original = ramp_series(20)
        p = tmp_path / "rt.csv"
        write_csv(original, p)
        again = load_csv(p)
        np.testing.assert_array_equal(again.values, original.values)
        np.testing.assert_array_equal(again.timestamps, original.timestamps)


class TestChronoSplit:
    def test_defaults_on_100_rows(self):
        train, val, test = chrono_split(ramp_series(100), SplitSpec())
        assert (len(train), len(val), len(test)) == (64, 16, 20)

    def test_identity_split(self):
        train, val, test = chrono_split(ramp_series(10), SplitSpec(1.0, 0.0))
        assert (len(train), len(val), len(test)) == (10, 0, 0)

    def test_too_short_for_window(self):
        with pytest.raises(SizeError, match="11"):
            chrono_split(ramp_series(5), SplitSpec(), min_split_length=11)

    def test_split_is_a_partition(self):
        series = ramp_series(101)
        train, val, test = chrono_split(series, SplitSpec())
        rebuilt = np.concatenate([train.values, val.values, test.values])
        np.testing.assert_array_equal(rebuilt, series.values)

    def test_ordering_preserved_and_chronological(self):
        series = ramp_series(50)
        train, val, test = chrono_split(series, SplitSpec())
        assert train.timestamps[-1] < val.timestamps[0] < test.timestamps[0]


class TestFeatureScaler:
    def test_fit_min_max(self):
        series = series_from_matrix([[0, 5, 1, 2], [10, 5, 3, 0]])
        scaler = fit_scaler(series)
        np.testing.assert_array_equal(scaler.feature_min, [0, 5, 1, 0])
        np.testing.assert_array_equal(scaler.feature_max, [10, 5, 3, 2])

    def test_constant_feature_maps_to_zero(self):
        series = series_from_matrix([[5, 1, 1, 1], [5, 2, 2, 2], [5, 3, 3, 3]])
        scaler = fit_scaler(series)
        scaled = scaler.transform(series.values)
        assert np.all(scaled[:, 0] == 0.0)
        # and inverse recovers the constant
        np.testing.assert_array_equal(scaler.inverse_transform(scaled)[:, 0], [5, 5, 5])

    def test_columns_scaled_independently(self):
        series = series_from_matrix([[0, 100, 0, 0], [1, 200, 0, 0]])
        scaler = fit_scaler(series)
        scaled = scaler.transform(np.array([[0.5, 150.0, 0.0, 0.0]]))
        np.testing.assert_allclose(scaled[0, :2], [0.5, 0.5])

    def test_empty_series_fit_error(self):
        empty = series_from_matrix(np.empty((0, 4)))
        with pytest.raises(SizeError, match="empty"):
            fit_scaler(empty)

    @settings(max_examples=100, deadline=None)
    @given(
        lo=st.lists(st.floats(-1e9, 1e9), min_size=4, max_size=4),
        width=st.lists(st.floats(1e-6, 1e9), min_size=4, max_size=4),
        frac=st.lists(st.floats(0, 1), min_size=4, max_size=4),
    )
    def test_round_trip_identity(self, lo, width, frac):
        mins = np.array(lo)
        maxs = mins + np.array(width)
        scaler = FeatureScaler(mins, maxs)
        x = (mins + np.array(frac) * np.array(width)).reshape(1, 4)
        back = scaler.inverse_transform(scaler.transform(x))
        np.testing.assert_allclose(back, x, rtol=1e-12, atol=1e-12 * np.abs(x).max())


class TestMakeWindows:
    def test_window_count(self):
        ds = make_windows(ramp_series(12), FeatureScaler.identity(), 10, 0)
        assert len(ds) == 2

    def test_targets_follow_each_window(self):
        series = ramp_series(13)
        ds = make_windows(series, FeatureScaler.identity(), 10, 0)
        np.testing.assert_array_equal(ds.targets, [10.0, 11.0, 12.0])

    def test_window_layout_hand_enumerated(self):
        # ramp 0..12, identity scaler: inputs[i, j, k] = (i + j) + k/10
        ds = make_windows(ramp_series(13), FeatureScaler.identity(), 10, 0)
        assert ds.inputs[1, 0, 0] == 1.0
        assert ds.inputs[0, 9, 0] == 9.0
        assert ds.inputs[2, 3, 2] == 5.2

    def test_too_short_raises(self):
        with pytest.raises(SizeError, match="11"):
            make_windows(ramp_series(10), FeatureScaler.identity(), 10, 0)

    def test_unscaling_recovers_series(self):
        series = ramp_series(40)
        scaler = fit_scaler(series)
        ds = make_windows(series, scaler, 7, 1)
        recovered = scaler.inverse_transform(ds.inputs.reshape(-1, 4))
        expected = np.concatenate(
            [series.values[i : i + 7] for i in range(len(series) - 7)]
        )
        np.testing.assert_allclose(recovered, expected, rtol=1e-12, atol=1e-9)

    def test_windows_do_not_cross_split_boundaries(self):
        series = ramp_series(60)
        train, val, test = chrono_split(series, SplitSpec())
        scaler = fit_scaler(train)
        for split in (train, val, test):
            if len(split) < 6:
                continue
            ds = make_windows(split, scaler, 5, 0)
            raw = scaler.inverse_transform(ds.inputs.reshape(-1, 4))
            assert raw[:, 0].min() >= split.values[:, 0].min() - 1e-9
            assert raw[:, 0].max() <= split.values[:, 0].max() + 1e-9


class TestKpiSeriesInvariants:
    def test_arrays_read_only(self):
        series = ramp_series(5)
        with pytest.raises(ValueError):
            series.values[0, 0] = 99.0

    def test_feature_lookup(self):
        series = ramp_series(5)
        np.testing.assert_array_equal(series.feature("downstream"), series.values[:, 1])
        assert FEATURES.index("internet") == 0
