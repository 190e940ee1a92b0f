import pytest

from matchstack.config.setting import get_settings
from matchstack.services.triangulation.service import from_history, new_root_triangle

@pytest.fixture(autouse=True)
def settings_env(monkeypatch):
    """Single-process sweeps and small random samples for every test."""
    monkeypatch.setenv("MATCHSTACK_THREADS", "1")
    monkeypatch.setenv("MATCHSTACK_RANDOM_COUNT", "20")
    monkeypatch.setenv("MATCHSTACK_RANDOM_MAX_N", "20")
    monkeypatch.setenv("MATCHSTACK_MATCHING_RANDOM_COUNT", "5")
    monkeypatch.setenv("MATCHSTACK_MATCHING_RANDOM_N", "6")
    monkeypatch.setenv("MATCHSTACK_TRANSFER_RANDOM_N", "7")
    get_settings.cache_clear()
    yield get_settings()
    get_settings.cache_clear()

@pytest.fixture
def bare_triangle():
    return new_root_triangle()

@pytest.fixture
def k4():
    return from_history([0])

@pytest.fixture
def prism():
    """[0, 0]: its dual is the triangular prism."""
    return from_history([0, 0])
