import json

import numpy as np
import pytest

from arxgen.errors import (
    IrregularSampling,
    MalformedRow,
    MissingColumn,
    NoEventFound,
    NonMonotoneTime,
    NonPositiveParameter,
    TooFewSamples,
    WindowTooShort,
)
from arxgen.pmu_io import (
    PmuMeta,
    PmuRecording,
    detrend,
    infer_sampling,
    prepare_dataset,
    read_meta_sidecar,
    read_pmu_csv,
    select_event_window,
    synthetic_recording,
    to_per_unit,
    write_meta_sidecar,
    write_pmu_csv,
)
from arxgen.recover import estimate_parameters
from arxgen.simulate import TimeSeries


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_csv_roundtrip_is_lossless(tmp_path, bench):
    rec = synthetic_recording(bench, duration=5.0, seed=3)
    write_pmu_csv(rec, tmp_path / "r.csv")
    back = read_pmu_csv(tmp_path / "r.csv", meta=rec.meta)
    for name in ("timestamps", "freq", "power"):
        np.testing.assert_array_equal(getattr(back, name), getattr(rec, name))


def test_comments_and_schema_mapping(tmp_path):
    p = write(tmp_path / "a.csv", "# exported by some device\ntime,f,P\n0,60,1\n0.1,60,1\n0.2,60.01,2\n")
    rec = read_pmu_csv(p, {"t": "time", "freq": "f", "power": "P"})
    np.testing.assert_array_equal(rec.power, [1, 1, 2])


def test_missing_column(tmp_path):
    p = write(tmp_path / "a.csv", "t,freq_hz\n0,60\n")
    with pytest.raises(MissingColumn, match="p_mw"):
        read_pmu_csv(p)


def test_all_malformed_rows_reported(tmp_path):
    p = write(tmp_path / "a.csv", "t,freq_hz,p_mw\n0,60,1\n0.1,x,1\n0.2,60,nan\n0.3,60,1\n")
    with pytest.raises(MalformedRow, match=r"\[3, 4\]"):
        read_pmu_csv(p)


def test_non_monotone_time():
    with pytest.raises(NonMonotoneTime):
        PmuRecording([0.0, 0.1, 0.1], [60] * 3, [1] * 3)
    with pytest.raises(ValueError):
        PmuRecording([0.0, 0.1], [60] * 3, [1] * 3)


def test_infer_sampling():
    assert infer_sampling(np.arange(10) / 30.0) == pytest.approx(1 / 30, rel=1e-12)
    t = np.arange(10) * 0.1
    t[5:] += 0.0005  # 0.5 % jitter, tolerated
    assert infer_sampling(t) == pytest.approx(0.1)
    t[7:] += 0.01
    with pytest.raises(IrregularSampling):
        infer_sampling(t)
    with pytest.raises(TooFewSamples):
        infer_sampling([0.0, 1.0])


def test_per_unit_scaling():
    rec = PmuRecording([0, 1, 2], [60.0, 60.06, 59.94], [250.0, 200.0, 150.0],
                       PmuMeta(f_nom=60.0, s_base=100.0))
    f, p = to_per_unit(rec)
    np.testing.assert_allclose(f, [1.0, 1.001, 0.999], rtol=1e-15)
    np.testing.assert_allclose(p, [2.5, 2.0, 1.5], rtol=1e-15)
    pre = PmuRecording([0, 1, 2], [60] * 3, [0.3] * 3, PmuMeta(prescaled=True))
    np.testing.assert_array_equal(to_per_unit(pre)[1], [0.3] * 3)
    with pytest.raises(NonPositiveParameter):
        to_per_unit(PmuRecording([0, 1, 2], [60] * 3, [1] * 3, PmuMeta(s_base=0.0)))


def test_detrend_uses_pre_event_mean():
    s = TimeSeries(h=0.1, values=np.r_[np.full(20, 3.0), np.full(10, 5.0)])
    d = detrend(s, 20)
    np.testing.assert_array_equal(d.values[:20], 0.0)
    np.testing.assert_array_equal(d.values[20:], 2.0)
    with pytest.raises(WindowTooShort):
        detrend(s, 9)
    with pytest.raises(WindowTooShort):
        detrend(s, 31)


def test_event_window_anchors_on_first_event():
    v = np.zeros(100)
    v[40:] = -0.1
    v[70:] = 0.3     # second disturbance is ignored
    w = select_event_window(TimeSeries(h=0.1, values=v), 0.02, pre=1.0, post=2.0)
    assert (w.anchor, w.start, w.stop) == (40, 30, 61)
    w = select_event_window(TimeSeries(h=0.1, values=v), 0.02, pre=10.0, post=100.0)
    assert (w.start, w.stop) == (0, 100)
    with pytest.raises(NoEventFound):
        select_event_window(TimeSeries(h=0.1, values=np.zeros(10)), 0.02)


def test_prepare_dataset_signals(bench):
    rec = synthetic_recording(bench, seed=1)
    ds = prepare_dataset(rec, pre=1.0, post=30.0)
    assert ds.h == pytest.approx(1 / 30)
    assert ds.window.anchor == 150
    assert len(ds.u) == 30 + 900 + 1
    # step is -0.2 p.u.; post-event power deviation sits there
    assert np.mean(ds.u.values[-100:]) == pytest.approx(-0.2, abs=2e-3)
    # steady speed deviation is R * dP
    assert np.mean(ds.y.values[-100:]) == pytest.approx(-0.2 * bench.R, rel=0.02)
    assert "f_nom" in ds.metadata["normalization"]


def test_synthetic_recording_recovers(bench):
    ds = prepare_dataset(synthetic_recording(bench, seed=2))
    res = estimate_parameters(ds.u, ds.y, "zoh", "omega")
    assert res.params.T == pytest.approx(bench.T, rel=0.05)
    assert res.params.R == pytest.approx(bench.R, rel=0.05)
    assert res.params.H == pytest.approx(bench.H, rel=0.05)


def test_sidecar_roundtrip(tmp_path):
    m = PmuMeta(f_nom=50.0, s_base=600.0, prescaled=True, source="x")
    write_meta_sidecar(m, tmp_path / "m.json")
    assert read_meta_sidecar(tmp_path / "m.json") == m
    (tmp_path / "n.json").write_text(json.dumps({"f_nom": 50, "extra": 1}))
    assert read_meta_sidecar(tmp_path / "n.json") == PmuMeta(f_nom=50)
