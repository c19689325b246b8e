import json
from fractions import Fraction

import pytest

from dla.config_manager import CONFIG_ENV, DEFAULTS, ConfigManager, get_config_path
from dla.errors import ParseError


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"precision": "2^-20", "depth": 6, "log_level": "info"}),
                    encoding="utf-8")
    return path


def test_defaults_without_a_file(tmp_path):
    config = ConfigManager(str(tmp_path / "missing.json"))
    assert config.config == DEFAULTS
    assert config.precision == Fraction(1, 2 ** 40)
    assert config.depth == 4
    assert config.witness_depth == 4
    assert config.oracle_max_rank == 6
    assert config.log_dir is None


def test_file_values_override_defaults(config_file):
    config = ConfigManager(str(config_file))
    assert config.precision == Fraction(1, 2 ** 20)
    assert config.depth == 6
    assert config.log_level == "INFO"
    assert config.refinement_rounds == DEFAULTS["refinement_rounds"]


def test_environment_variable_names_the_file(config_file, monkeypatch):
    monkeypatch.setenv(CONFIG_ENV, str(config_file))
    assert get_config_path() == str(config_file)
    assert ConfigManager().depth == 6
    assert get_config_path("explicit.json") == "explicit.json"


def test_unreadable_or_foreign_files_fall_back(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert ConfigManager(str(broken)).config == DEFAULTS

    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    assert ConfigManager(str(listing)).config == DEFAULTS

    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"depth": 2, "colour": "blue"}), encoding="utf-8")
    config = ConfigManager(str(extra))
    assert config.depth == 2
    assert "colour" not in config.config


def test_update_settings_skips_none(config_file):
    config = ConfigManager(str(config_file))
    config.update_settings(depth=None, witness_depth=7, unknown=1)
    assert config.depth == 6
    assert config.witness_depth == 7
    assert "unknown" not in config.config


def test_save_and_reload(tmp_path):
    path = tmp_path / "saved.json"
    config = ConfigManager(str(path))
    config.update_settings(precision="1/1024", oracle_max_dim=200)
    config.save_config()
    reloaded = ConfigManager(str(path))
    assert reloaded.precision == Fraction(1, 1024)
    assert reloaded.oracle_max_dim == 200


@pytest.mark.parametrize("value", ["0", "-1/2", "tiny"])
def test_bad_precision_is_rejected(tmp_path, value):
    config = ConfigManager(str(tmp_path / "missing.json"))
    config.update_settings(precision=value)
    with pytest.raises(ParseError):
        config.precision
