# tests/test_config.py

import pytest

from besovlab import config
from besovlab.errors import ConfigError


def test_threads_override_wins_over_environment(monkeypatch):
    monkeypatch.setenv(config.THREADS_ENV, '3')
    config.set_threads(None)
    assert config.get_threads() == 3
    config.set_threads(2)
    assert config.get_threads() == 2


@pytest.mark.parametrize('raw', ['x', '0', '-2'])
def test_bad_thread_environment(monkeypatch, raw):
    monkeypatch.setenv(config.THREADS_ENV, raw)
    config.set_threads(None)
    with pytest.raises(ConfigError):
        config.get_threads()


def test_set_threads_rejects_zero():
    with pytest.raises(ConfigError):
        config.set_threads(0)


def test_c_star_lookup():
    assert config.c_star('choice2', 'pow(0.5)') == 0.2
    assert config.c_star('powertail', 'id') == 0.0
