"""Job-configuration loading tests."""

import json

import pytest

from qcdesign.config import default_config, load_config
from qcdesign.errors import ConfigError


def _write(tmp_path, payload):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(payload))
    return str(path)


def test_defaults_are_the_sodium_application():
    cfg = default_config()
    assert (cfg.assay.sd, cfg.assay.bias, cfg.assay.tea, cfg.assay.alpha) == (
        0.67,
        0.1,
        4.0,
        0.01,
    )
    assert cfg.ga.seed == 12345
    assert cfg.plan.levels == 2
    assert cfg.layout.q == 3
    assert cfg.layout.optimize_levels
    assert cfg.replicates == 21
    assert cfg.threads == 1


def test_none_path_loads_defaults():
    assert load_config(None).ga.seed == default_config().ga.seed


def test_partial_override(tmp_path):
    path = _write(
        tmp_path,
        {
            "assay": {"sd": 1.0},
            "ga": {"population": 50, "seed": 7},
            "plan": {"measurements_per_level": 200},
            "replicates": 5,
        },
    )
    cfg = load_config(path)
    assert cfg.assay.sd == 1.0
    assert cfg.assay.tea == 4.0  # untouched default
    assert cfg.ga.population == 50
    assert cfg.ga.seed == 7
    assert cfg.plan.measurements_per_level == 200
    assert cfg.replicates == 5


def test_unknown_keys_rejected(tmp_path):
    with pytest.raises(ConfigError, match="unknown config key"):
        load_config(_write(tmp_path, {"assai": {}}))
    with pytest.raises(ConfigError, match="unknown key"):
        load_config(_write(tmp_path, {"ga": {"popsize": 10}}))


def test_malformed_files(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(str(path))
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(str(tmp_path / "missing.json"))
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="root must be"):
        load_config(str(path))


def test_invalid_values_surface_as_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, {"assay": {"sd": -1.0}}))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, {"ga": {"population": 7}}))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, {"replicates": 1}))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, {"threads": 0}))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, {"output_format": "xml"}))
    with pytest.raises(ConfigError):
        load_config(_write(tmp_path, {"library_files": "not-a-list"}))


def test_mutation_schedule_roundtrip(tmp_path):
    path = _write(tmp_path, {"ga": {"mutation_schedule": [[0, 0.0], [10, 0.001]]}})
    assert load_config(path).ga.mutation_schedule == ((0, 0.0), (10, 0.001))
