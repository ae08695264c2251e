import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.signal import cont2discrete

from arxgen.discretize import (
    ArxModel,
    Method,
    Output,
    discretize,
    tustin_delta,
    tustin_omega,
    zoh_delta,
    zoh_omega,
)
from arxgen.errors import DampingNotSupported, FoldedSampling
from arxgen.model import GeneratorParams, continuous_poles, transfer_function

from .strategies import generator_params, sampling_intervals

# Frozen from scipy.signal.cont2discrete on the continuous transfer functions
ZOH_OMEGA_BENCH = [-1.7467048310562474, 0.8187307530779818,
                   0.019747147236104726, -0.016145851135018003]
ZOH_DELTA_BENCH = [-2.746704831056247, 2.5654355841342293, -0.8187307530779818,
                   0.0009936081340189077, 0.00017958360195262786, -0.000813062125862863]


def scipy_model(p, h, method, output):
    num, den = transfer_function(p, output)
    dnum, dden, _ = cont2discrete((num, den), h, "zoh" if method == "zoh" else "bilinear")
    dnum = np.trim_zeros(np.ravel(dnum), "f")
    return np.concatenate((dden[1:], dnum))


def test_zoh_omega_benchmark(bench):
    m = zoh_omega(bench, 0.1)
    assert (m.n, m.m) == (2, 1)
    np.testing.assert_allclose(m.vector, ZOH_OMEGA_BENCH, rtol=1e-12)


def test_zoh_omega_near_rounded_reference(bench):
    # rounded reference values: a1, a0, b1, b0
    ref = [-1.7467, 0.8185742, 0.0197333, -0.0161380]
    np.testing.assert_allclose(zoh_omega(bench, 0.1).vector, ref, atol=2e-3)


def test_zoh_omega_a0_is_exponential(bench):
    assert zoh_omega(bench, 0.1).den[1] == pytest.approx(math.exp(-0.2), rel=1e-15)


def test_zoh_small_h_limit(bench):
    m = zoh_omega(bench, 1e-9)
    assert m.den == pytest.approx((-2.0, 1.0), abs=1e-8)


def test_tustin_omega_table_one(bench):
    m = tustin_omega(bench, 0.1)
    assert (m.n, m.m) == (2, 2)
    # alpha = 56 exactly
    expected = [-98 / 56, 46 / 56, 0.05 * 11 / 56, 0.1 / 56, -0.05 * 9 / 56]
    np.testing.assert_allclose(m.vector, expected, rtol=1e-14)
    rounded = [-1.7500, 0.8214286, 9.8214e-3, 1.7857e-3, -8.0357e-3]
    np.testing.assert_allclose(m.vector, rounded, atol=5e-7)


@given(generator_params(), sampling_intervals)
def test_tustin_omega_b_identities(p, h):
    a1, a0, b2, b1, b0 = tustin_omega(p, h).vector
    k = 2.0 / h
    alpha = 2 * p.H * p.R * p.T * k * k + 2 * p.H * p.R * k + 1
    assert b1 == pytest.approx(2 * p.R / alpha, rel=1e-14)
    assert b2 + b0 == pytest.approx(b1, rel=1e-9, abs=1e-15)


def test_zoh_delta_benchmark(bench):
    m = zoh_delta(bench, 0.1)
    assert (m.n, m.m) == (3, 2)
    np.testing.assert_allclose(m.vector, ZOH_DELTA_BENCH, rtol=1e-11)
    assert m.den[2] == pytest.approx(-0.818731, abs=5e-7)


def test_zoh_delta_small_h_limit(bench):
    m = zoh_delta(bench, 1e-9)
    assert m.den == pytest.approx((-3.0, 3.0, -1.0), abs=1e-8)


def test_tustin_delta_benchmark(bench):
    m = tustin_delta(bench, 0.1)
    assert (len(m.num), len(m.den)) == (4, 3)
    # k = 20, alpha = 1000 + 100 + 20
    assert m.den[0] == pytest.approx((-3000 - 100 + 20) / 1120, rel=1e-15)
    assert m.den[0] == pytest.approx(-2.75, rel=1e-15)
    assert sum(m.num) == pytest.approx(8 * 0.05 / 1120, rel=1e-13)


@pytest.mark.parametrize("method", ["zoh", "tustin"])
@pytest.mark.parametrize("output", ["omega", "delta"])
@pytest.mark.parametrize("h", [0.1, 0.01, 0.001])
def test_matches_scipy_oracle(bench, method, output, h):
    ours = discretize(bench, h, method, output).vector
    np.testing.assert_allclose(ours, scipy_model(bench, h, method, output),
                               rtol=1e-7, atol=1e-12 * np.max(np.abs(ours)))


@given(generator_params(), st.sampled_from([0.1, 0.05, 0.01]),
       st.sampled_from(["zoh", "tustin"]), st.sampled_from(["omega", "delta"]))
def test_matches_scipy_oracle_random(p, h, method, output):
    ours = discretize(p, h, method, output).vector
    ref = scipy_model(p, h, method, output)
    np.testing.assert_allclose(ours, ref, rtol=1e-6, atol=1e-10 * np.max(np.abs(ref)))


@given(generator_params(), st.floats(1e-3, 0.5))
def test_tustin_poles_inside_unit_circle(p, h):
    for output in ("omega", "delta"):
        poles = tustin_omega(p, h).poles() if output == "omega" else tustin_delta(p, h).poles()
        if output == "delta":
            # the integrator maps to z = 1 exactly; the rest lie strictly inside
            poles = poles[np.argsort(np.abs(poles - 1.0))][1:]
        assert np.all(np.abs(poles) < 1.0)


@given(generator_params(), sampling_intervals)
def test_zoh_pole_images(p, h):
    s = continuous_poles(p).as_complex()
    expected = np.sort_complex(np.exp(np.array([s, s.conjugate()]) * h))
    got = np.sort_complex(zoh_omega(p, h).poles())
    np.testing.assert_allclose(got, expected, rtol=1e-10)


@given(generator_params(), sampling_intervals)
def test_dc_gain_preserved(p, h):
    assert zoh_omega(p, h).dc_gain() == pytest.approx(p.R, rel=1e-10)
    assert tustin_omega(p, h).dc_gain() == pytest.approx(p.R, rel=1e-10)


@given(generator_params(), sampling_intervals, st.sampled_from(["zoh", "tustin"]))
def test_delta_has_integrator(p, h, method):
    m = discretize(p, h, method, "delta")
    assert 1.0 + sum(m.den) == pytest.approx(0.0, abs=1e-10)
    assert np.min(np.abs(m.poles() - 1.0)) < 1e-5


def test_folded_sampling_guard(bench):
    w = math.sqrt(7.0)
    with pytest.raises(FoldedSampling):
        zoh_omega(bench, math.pi / w)
    with pytest.raises(FoldedSampling):
        zoh_delta(bench, 2.0)
    zoh_omega(bench, 0.99 * math.pi / w)
    tustin_omega(bench, 2.0)


def test_damped_params_refused():
    p = GeneratorParams(2.5, 0.05, 0.5, D=0.8)
    with pytest.raises(DampingNotSupported):
        tustin_omega(p, 0.1)


def test_orders_and_labels(bench):
    m = tustin_delta(bench, 0.1)
    assert m.labels == ["a2", "a1", "a0", "b3", "b2", "b1", "b0"]
    assert list(m.coefficients()) == m.labels
    assert zoh_omega(bench, 0.1).labels == ["a1", "a0", "b1", "b0"]


def test_json_roundtrip(bench):
    m = zoh_delta(bench, 0.01)
    d = json.loads(json.dumps(m.to_dict()))
    assert d["method"] == "zoh" and d["output"] == "delta"
    assert set(d) == {"h", "method", "output", "den", "num"}
    assert ArxModel.from_dict(d) == m


def test_enum_parsing():
    assert Method.parse("ZOH") is Method.ZOH
    assert Output.parse(" delta ") is Output.DELTA
    with pytest.raises(ValueError):
        Method.parse("euler")


def test_lfilter_coefficients_pad_delay(bench):
    b, a = zoh_omega(bench, 0.1).lfilter_coefficients()
    assert b[0] == 0.0 and len(b) == len(a) == 3
