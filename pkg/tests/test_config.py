import pytest

from weakdelay import ConfigError, format_config, parse_config

GOOD = """
# campaign
noise = N1+2N0
snr_db = -5.1
seeds = 004:097, 012:233
samples = 300001
dt = 1e-8
clamp = true
clamp_mode = ratio
readout_time = 1.5e-3
gate_min = 1.0e-9
gate_max = 1.6e-9
json_out = out/batch.json
"""


def test_parse_good_config():
    cfg = parse_config(GOOD)
    assert cfg.noise == "N1+2N0"
    assert cfg.snr_db == -5.1
    assert cfg.seeds == ((4, 97), (12, 233))
    assert cfg.grid.n == 300001
    assert cfg.grid.dt == 1e-8
    assert cfg.clamp_enabled is True
    assert cfg.gate is not None
    assert cfg.gate.theta_min == 1.0e-9
    assert cfg.output("json_out") == "out/batch.json"
    assert cfg.output("trace_out") == "trace.csv"


def test_defaults():
    cfg = parse_config("")
    assert cfg.noise == "none"
    assert cfg.seeds == ()
    assert cfg.readout_time == 1.5e-3
    assert cfg.snr_db == -5.1
    assert cfg.n4_snr_db == -23.5
    assert cfg.clamp_enabled is False
    assert cfg.gate is None
    assert cfg.threads is None
    assert cfg.measurement.alpha == 0.01


def test_comments_and_blank_lines():
    cfg = parse_config("# only a comment\n\n   \nnoise = N0\n")
    assert cfg.noise == "N0"


def test_unknown_key_rejected_with_line():
    with pytest.raises(ConfigError) as e:
        parse_config("noise = N0\nbogus = 1\n")
    assert e.value.line == 2
    assert "bogus" in str(e.value)


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError):
        parse_config("noise = N0\nnoise = N1\n")


def test_malformed_line_rejected():
    with pytest.raises(ConfigError) as e:
        parse_config("noise N0\n")
    assert e.value.line == 1


def test_bad_float_rejected():
    with pytest.raises(ConfigError):
        parse_config("snr_db = loud\n")


def test_bad_seed_format_rejected():
    for text in ("seeds = 4\n", "seeds = 4:5:6\n", "seeds = a:b\n"):
        with pytest.raises(ConfigError):
            parse_config(text)


def test_unknown_noise_rejected():
    with pytest.raises(ConfigError):
        parse_config("noise = N7\n")


def test_gate_needs_both_bounds():
    with pytest.raises(ConfigError):
        parse_config("gate_min = 1.0e-9\n")
    with pytest.raises(ConfigError):
        parse_config("gate_min = 2.0e-9\ngate_max = 1.0e-9\n")


def test_calibrate_needs_both_targets():
    with pytest.raises(ConfigError):
        parse_config("calibrate_theta0 = 1.2e-9\n")
    cfg = parse_config("calibrate_theta0 = 1.2442e-9\ncalibrate_theta_tau = 1.1666e-9\n")
    assert cfg.calibrate == (1.2442e-9, 1.1666e-9)
    eff = cfg.effective_measurement()
    assert eff.shift_override is not None
    assert 2.9e-5 < eff.shift_override < 3.3e-5


def test_absolute_clamp_needs_value():
    with pytest.raises(ConfigError):
        parse_config("clamp = true\nclamp_mode = absolute\n")
    cfg = parse_config("clamp = true\nclamp_mode = absolute\nclamp_value = 2.0e-4\n")
    assert cfg.clamp_ratio_or_value() == 2.0e-4


def test_measurement_validation_points_at_offending_line():
    with pytest.raises(ConfigError) as e:
        parse_config("noise = N0\ntau = 5.0e-5\n")
    assert e.value.line == 2


def test_readout_must_lie_on_grid():
    with pytest.raises(ConfigError):
        parse_config("readout_time = 1.50000049e-3\n")
    parse_config("readout_time = 1.5e-3\n")


def test_threads_validation():
    with pytest.raises(ConfigError):
        parse_config("threads = 0\n")
    assert parse_config("threads = 3\n").threads == 3


def test_bool_strictness():
    with pytest.raises(ConfigError):
        parse_config("clamp = yes\n")
    assert parse_config("clamp = false\n").clamp_enabled is False


def test_format_round_trip():
    cfg = parse_config(GOOD)
    text = format_config(cfg)
    again = parse_config(text)
    assert again == cfg
    # canonical emission is stable
    assert format_config(again) == text


def test_format_round_trip_defaults():
    cfg = parse_config("")
    assert parse_config(format_config(cfg)) == cfg
