import numpy as np
import pytest

from arxgen.datafiles import read_dataset_csv, read_metadata, write_dataset_csv
from arxgen.discretize import discretize
from arxgen.errors import DataError, LengthMismatch, MalformedRow, MissingColumn
from arxgen.model import GeneratorParams
from arxgen.simulate import ScenarioConfig, TimeSeries, generate_dataset, simulate_arx
from arxgen.validate import fit_metrics, playback, write_overlay_csv


def test_fit_metrics_by_hand():
    y = TimeSeries(h=1.0, values=[1.0, 2.0, 3.0, 4.0])
    yhat = TimeSeries(h=1.0, values=[1.0, 2.0, 3.0, 5.0])
    r = fit_metrics(y, yhat)
    # |err| = 1, |y - mean| = sqrt(5)
    assert r.nrmse_fit == pytest.approx(100 * (1 - 1 / np.sqrt(5)), rel=1e-14)
    assert r.rmse == pytest.approx(0.5)
    assert r.max_abs_err == 1.0


def test_perfect_and_constant_fits():
    y = TimeSeries(h=1.0, values=[1.0, 2.0])
    assert fit_metrics(y, y).nrmse_fit == 100.0
    c = TimeSeries(h=1.0, values=[2.0, 2.0])
    assert fit_metrics(c, c).nrmse_fit == 100.0
    assert fit_metrics(c, y).nrmse_fit == -np.inf


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        fit_metrics(TimeSeries(h=1.0, values=[1.0, 2.0]), TimeSeries(h=1.0, values=[1.0]))
    with pytest.raises(LengthMismatch):
        fit_metrics(TimeSeries(h=1.0, values=[1.0]), TimeSeries(h=0.5, values=[1.0]))


def test_playback_reproduces_clean_data(bench):
    ds = generate_dataset(bench, 0.05, ScenarioConfig(rng_seed=9), "tustin")
    r = fit_metrics(ds.y, playback(bench, "tustin", ds.u))
    assert r.max_abs_err == 0.0


def test_playback_with_wrong_parameters_fits_worse(bench):
    ds = generate_dataset(bench, 0.1, ScenarioConfig(rng_seed=9))
    good = fit_metrics(ds.y, playback(bench, "zoh", ds.u)).nrmse_fit
    bad = fit_metrics(ds.y, playback(GeneratorParams(5.0, 0.05, 0.5), "zoh", ds.u)).nrmse_fit
    assert good == 100.0 and bad < 90.0


def test_overlay_csv(tmp_path, bench):
    y = TimeSeries(h=0.1, values=[0.0, 1.0, 2.0])
    write_overlay_csv(tmp_path / "o.csv", y, y.with_values([0.0, 1.5, 2.0]), {"k": 1})
    lines = (tmp_path / "o.csv").read_text().splitlines()
    assert lines[0].startswith("# arxgen-metadata: ")
    assert lines[1] == "t,measured,predicted"
    assert lines[3] == "0.1,1.0,1.5"


def test_dataset_csv_roundtrip_is_bit_exact(tmp_path, bench):
    ds = generate_dataset(bench, 0.001, ScenarioConfig(rng_seed=5, duration=2.0), "zoh", "delta")
    write_dataset_csv(tmp_path / "d.csv", ds.u, ds.y, {"output": "delta"})
    u, y, meta = read_dataset_csv(tmp_path / "d.csv")
    np.testing.assert_array_equal(u.values, ds.u.values)
    np.testing.assert_array_equal(y.values, ds.y.values)
    assert u.h == 0.001 and meta["output"] == "delta"
    assert read_metadata(tmp_path / "d.csv")["h"] == 0.001


def test_dataset_csv_errors(tmp_path):
    (tmp_path / "a.csv").write_text("t,u\n0,1\n")
    with pytest.raises(MissingColumn):
        read_dataset_csv(tmp_path / "a.csv")
    (tmp_path / "b.csv").write_text("t,u,y\n0,1,2\n1,x,2\n2,1,2\n")
    with pytest.raises(MalformedRow):
        read_dataset_csv(tmp_path / "b.csv")
    with pytest.raises(DataError):
        write_dataset_csv(tmp_path / "c.csv", TimeSeries(h=1.0, values=[1.0]),
                          TimeSeries(h=1.0, values=[1.0, 2.0]))


def test_simulated_and_played_back_delta_models_agree(bench):
    u = TimeSeries(h=0.1, values=np.ones(50))
    a = simulate_arx(discretize(bench, 0.1, "zoh", "delta"), u).values
    w = simulate_arx(discretize(bench, 0.1, "zoh", "omega"), u).values
    # angle is the running integral of speed; under ZOH this matches the
    # trapezoid rule only approximately, so check the increments loosely
    np.testing.assert_allclose(np.diff(a)[10:] / 0.1, w[10:-1], rtol=0.2)
