from __future__ import annotations

import pytest


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    """Every test session gets its own block cache directory."""
    cache = tmp_path_factory.getbasetemp() / "block-cache"
    monkeypatch.setenv("CYCLEFRAME_CACHE", str(cache))
