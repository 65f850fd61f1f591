import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from weakdelay import (
    CLAMP_RATIO,
    ClampSpec,
    MeasurementConfig,
    TimeGrid,
    Trace,
    clamp,
    clamp_for_signal,
    default_grid,
    measurement_signal,
    reference_signal,
    theta,
    theta_at,
    theta_closed_form,
    theta_decomposition,
)

GRID = default_grid()
CFG = MeasurementConfig()


def test_theta_matches_closed_form_default():
    ch1 = measurement_signal(GRID, CFG)
    ch2 = reference_signal(GRID, CFG)
    curve = theta(ch1, ch2)
    for t_ms in (0.5, 1.0, 1.5, 2.0, 3.0):
        t = t_ms * 1e-3
        assert curve.at(t) == pytest.approx(theta_closed_form(CFG, t), rel=1e-6)


def test_theta_closed_form_against_quadrature():
    # independent oracle: adaptive quadrature of the product integrand
    cfg = MeasurementConfig(shift_override=2.0e-5)
    amp = cfg.i0 / 2.0 * np.sin(cfg.alpha) ** 2 * (2 * np.pi * cfg.zeta**2) ** -0.25

    def integrand(u):
        a = amp * np.exp(-((u - cfg.t0 - 2.0e-5) ** 2) / (4 * cfg.zeta**2))
        b = amp * np.exp(-((u - cfg.t0) ** 2) / (4 * cfg.zeta**2))
        return a * b

    for t in (1.0e-3, 1.5e-3, 2.2e-3):
        want, err = quad(
            integrand, 0.0, t, limit=300, epsabs=1e-20, epsrel=1e-12,
            points=[cfg.t0, cfg.t0 + 2.0e-5],
        )
        assert theta_closed_form(cfg, t) == pytest.approx(want, rel=1e-9)


def test_theta_zero_shift_value():
    # sin(0.01)^4/4 * zeta*sqrt(2pi) * Phi(0)-Phi(-7.5) contribution at t0
    val = theta_at(reference_signal(GRID, CFG), reference_signal(GRID, CFG), 1.5e-3)
    assert val == pytest.approx(1.249917e-9, rel=1e-6)
    full = theta_at(reference_signal(GRID, CFG), reference_signal(GRID, CFG), 3.0e-3)
    assert full == pytest.approx(2.499833e-9, rel=1e-6)


def test_theta_is_cumulative_and_monotone_for_positive_product():
    ch = reference_signal(GRID, CFG)
    curve = theta(ch, ch)
    assert curve.values[0] == 0.0
    assert np.all(np.diff(curve.values) >= 0.0)


def test_theta_grid_mismatch_rejected():
    g2 = TimeGrid(dt=1e-8, n=1000, origin=0.0)
    with pytest.raises(ValueError):
        theta(reference_signal(GRID, CFG), Trace(g2, np.zeros(1000)))


def test_clamp_disabled_is_identity():
    tr = reference_signal(GRID, CFG)
    out = clamp(tr, ClampSpec())
    np.testing.assert_array_equal(out.samples, tr.samples)


def test_clamp_one_sided_upper():
    g = TimeGrid(dt=1e-8, n=5, origin=0.0)
    tr = Trace(g, np.array([-3.0, -0.5, 0.2, 0.9, 4.0]))
    out = clamp(tr, ClampSpec(threshold=0.5, enabled=True))
    np.testing.assert_allclose(out.samples, [-3.0, -0.5, 0.2, 0.5, 0.5])


def test_clamp_for_signal_ratio():
    tr = reference_signal(GRID, CFG)
    spec = clamp_for_signal(tr)
    assert spec.enabled
    want = 10 ** (9.1 / 20.0) * float(np.max(np.abs(tr.samples)))
    assert spec.threshold == pytest.approx(want, rel=1e-12)
    assert CLAMP_RATIO == pytest.approx(10 ** (9.1 / 20.0), rel=1e-15)


def test_clamp_idempotent():
    g = TimeGrid(dt=1e-8, n=64, origin=0.0)
    rng = np.random.default_rng(0)
    tr = Trace(g, rng.normal(size=64))
    spec = ClampSpec(threshold=0.7, enabled=True)
    once = clamp(tr, spec)
    twice = clamp(once, spec)
    np.testing.assert_array_equal(once.samples, twice.samples)


def test_decomposition_sums_to_total():
    from weakdelay import NoiseSpec, synthesize

    sig1 = measurement_signal(GRID, CFG)
    sig2 = reference_signal(GRID, CFG)
    n1 = synthesize(GRID, NoiseSpec(kind="White", seed=21, snr_target_db=-5.1), reference=sig2)
    n2 = synthesize(GRID, NoiseSpec(kind="White", seed=22, snr_target_db=-5.1), reference=sig2)
    dec = theta_decomposition(sig1, sig2, n1, n2)
    total = theta(Trace(GRID, sig1.samples + n1.samples), Trace(GRID, sig2.samples + n2.samples))
    parts = dec.ii.values + dec.in_.values + dec.ni.values + dec.nn.values
    np.testing.assert_allclose(parts, total.values, rtol=1e-9, atol=1e-18)


def test_noise_noise_term_small_for_white():
    from weakdelay import NoiseSpec, synthesize

    sig2 = reference_signal(GRID, CFG)
    vals = []
    for s in range(1, 21):
        n1 = synthesize(GRID, NoiseSpec(kind="White", seed=500 + s, snr_target_db=-5.1), reference=sig2)
        n2 = synthesize(GRID, NoiseSpec(kind="White", seed=700 + s, snr_target_db=-5.1), reference=sig2)
        dec = theta_decomposition(measurement_signal(GRID, CFG), sig2, n1, n2)
        vals.append(abs(dec.nn.at(1.5e-3)) / dec.ii.at(1.5e-3))
    assert float(np.mean(vals)) < 0.05


@given(
    a=st.floats(-2.0, 2.0),
    b=st.floats(-2.0, 2.0),
)
@settings(max_examples=25, deadline=None)
def test_theta_bilinear_property(a, b):
    g = TimeGrid(dt=1e-7, n=2001, origin=0.0)
    rng = np.random.default_rng(5)
    x = Trace(g, rng.normal(size=g.n))
    y = Trace(g, rng.normal(size=g.n))
    z = Trace(g, rng.normal(size=g.n))
    lhs = theta(Trace(g, a * x.samples + b * y.samples), z).values
    rhs = a * theta(x, z).values + b * theta(y, z).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


@given(shift=st.floats(0.0, 4.0e-5))
@settings(max_examples=20, deadline=None)
def test_closed_form_overlap_attenuation(shift):
    cfg = MeasurementConfig(shift_override=shift)
    full = theta_closed_form(cfg, 3.0e-3)
    attenuated = np.exp(-(shift**2) / (8 * cfg.zeta**2))
    base = theta_closed_form(MeasurementConfig(shift_override=0.0), 3.0e-3)
    assert full == pytest.approx(base * attenuated, rel=1e-6)
