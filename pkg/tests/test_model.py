import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import trapezoid

from weakdelay import (
    MeasurementConfig,
    TimeGrid,
    Trace,
    default_grid,
    initial_pointer,
    measurement_signal,
    pointer_shift,
    reference_signal,
    weak_value,
)


def test_default_grid_shape():
    g = default_grid()
    assert g.dt == 1.0e-8
    assert g.n == 300001
    assert g.origin == 0.0
    assert g.duration == pytest.approx(3.0e-3)
    t = g.times()
    assert t[0] == 0.0
    assert t[-1] == pytest.approx(3.0e-3)
    assert len(t) == g.n


def test_grid_index_of_nearest():
    g = default_grid()
    assert g.index_of(0.0) == 0
    assert g.index_of(1.5e-3) == 150000
    # halfway rounds to nearest sample
    assert g.index_of(1.5e-3 + 0.4e-8) == 150000
    assert g.index_of(1.5e-3 + 0.6e-8) == 150001
    with pytest.raises(ValueError):
        g.index_of(-1e-6)
    with pytest.raises(ValueError):
        g.index_of(3.1e-3)


def test_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(dt=0.0, n=10, origin=0.0)
    with pytest.raises(ValueError):
        TimeGrid(dt=1e-8, n=1, origin=0.0)


def test_config_defaults():
    c = MeasurementConfig()
    assert c.i0 == 1.0
    assert c.zeta == 2.0e-4
    assert c.t0 == 1.5e-3
    assert c.alpha == 0.01
    assert c.tau == 3.0e-9
    assert c.shift_override is None


def test_weak_value_is_minus_cot_alpha():
    assert weak_value(0.01) == pytest.approx(-1.0 / math.tan(0.01), rel=1e-15)
    assert weak_value(math.pi / 4) == pytest.approx(-1.0)
    with pytest.raises(ValueError):
        weak_value(0.0)


def test_pointer_shift_literal_and_override():
    c = MeasurementConfig()
    # delta_t = -tau * A_w = tau * cot(alpha)
    assert pointer_shift(c) == pytest.approx(3.0e-9 / math.tan(0.01), rel=1e-12)
    c2 = MeasurementConfig(shift_override=2.5e-5)
    assert pointer_shift(c2) == 2.5e-5


def test_weak_guard():
    with pytest.raises(ValueError):
        MeasurementConfig(tau=2.1e-5)  # zeta/10 = 2e-5
    # shift_override is not limited by the coupling guard
    MeasurementConfig(shift_override=3.0e-5)


def test_initial_pointer_peak():
    g = default_grid()
    c = MeasurementConfig()
    p = initial_pointer(g, c)
    k = int(np.argmax(p.samples))
    assert g.times()[k] == pytest.approx(1.5e-3)
    # (2*pi*zeta^2)^(-1/4) at i0=1
    assert p.samples[k] == pytest.approx(44.6617, rel=1e-4)


def test_measurement_signal_peak_and_shift():
    g = default_grid()
    c = MeasurementConfig()
    m = measurement_signal(g, c)
    r = reference_signal(g, c)
    km, kr = int(np.argmax(m.samples)), int(np.argmax(r.samples))
    assert m.samples[km] == pytest.approx(2.23301e-3, rel=1e-4)
    assert r.samples[kr] == pytest.approx(2.23301e-3, rel=1e-4)
    # peak sits delta_t later on the measurement channel
    shift = (km - kr) * g.dt
    assert shift == pytest.approx(pointer_shift(c), abs=g.dt)


def test_reference_is_zero_shift_measurement():
    g = default_grid()
    c = MeasurementConfig()
    r = reference_signal(g, c)
    m0 = measurement_signal(g, MeasurementConfig(shift_override=0.0))
    np.testing.assert_allclose(r.samples, m0.samples, rtol=0, atol=0)


def test_pointer_area_is_i0():
    # |f_i|^2 integrates to i0
    g = default_grid()
    for i0 in (1.0, 2.5):
        p = initial_pointer(g, MeasurementConfig(i0=i0))
        area = trapezoid(p.samples ** 2, dx=g.dt)
        assert area == pytest.approx(i0, rel=1e-6)


@given(
    i0=st.floats(0.1, 10.0),
    alpha=st.floats(0.005, 0.5),
    shift=st.floats(0.0, 5.0e-5),
)
@settings(max_examples=20, deadline=None)
def test_signal_scaling_property(i0, alpha, shift):
    g = TimeGrid(dt=1e-7, n=30001, origin=0.0)
    base = MeasurementConfig(i0=1.0, alpha=alpha, shift_override=shift)
    scaled = MeasurementConfig(i0=i0, alpha=alpha, shift_override=shift)
    a = measurement_signal(g, base).samples
    b = measurement_signal(g, scaled).samples
    np.testing.assert_allclose(b, i0 * a, rtol=1e-12, atol=1e-300)


def test_trace_is_read_only():
    g = default_grid()
    p = initial_pointer(g, MeasurementConfig())
    with pytest.raises(ValueError):
        p.samples[0] = 1.0


def test_trace_rejects_nan():
    g = TimeGrid(dt=1e-8, n=4, origin=0.0)
    with pytest.raises(ValueError):
        Trace(g, np.array([0.0, np.nan, 0.0, 0.0]))
    with pytest.raises(ValueError):
        Trace(g, np.zeros(5))
