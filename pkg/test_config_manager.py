"""
설정 관리 테스트
"""
import json

import pytest

from config_manager import ConfigManager


@pytest.fixture
def manager(tmp_path):
    return ConfigManager(str(tmp_path / "eisenstein_config.json"))


def test_defaults_without_file(manager, tmp_path):
    assert manager.get('precision') == 30
    assert manager.get('truncation') == 64
    assert manager.get('output_format') == 'json'
    assert not (tmp_path / "eisenstein_config.json").exists()


def test_file_values_override_defaults(tmp_path):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"precision": 50}), encoding='utf-8')
    manager = ConfigManager(str(path))
    assert manager.get('precision') == 50
    assert manager.get('max_group_order') == 2000


def test_env_selects_config_file(tmp_path, monkeypatch):
    path = tmp_path / "env.json"
    path.write_text(json.dumps({"workers": 3}), encoding='utf-8')
    monkeypatch.setenv('EISENSTEIN_CONFIG', str(path))
    assert ConfigManager().get('workers') == 3


def test_set_persists(manager):
    assert manager.set('precision', 40)
    reloaded = ConfigManager(manager.config_file)
    assert reloaded.get('precision') == 40


def test_update_multiple(manager):
    assert manager.update_multiple({'precision': 45, 'truncation': 128})
    assert manager.get_precision_settings()['truncation'] == 128


def test_reset_to_default(manager):
    manager.set('precision', 99)
    assert manager.reset_to_default()
    assert ConfigManager(manager.config_file).get('precision') == 30


def test_broken_file_falls_back_to_defaults(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding='utf-8')
    assert ConfigManager(str(path)).get('precision') == 30


@pytest.mark.parametrize("key, value", [
    ('precision', 3),
    ('truncation', 1),
    ('archimedean_cutoff', 5),
    ('max_group_order', 0),
    ('workers', 0),
    ('output_format', 'xml'),
])
def test_validation_rejects(manager, key, value):
    manager.config[key] = value
    ok, errors = manager.validate_config()
    assert not ok
    assert len(errors) == 1


def test_default_config_is_valid(manager):
    assert manager.validate_config() == (True, [])
