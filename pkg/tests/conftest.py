"""Shared fixtures: small towers reused across test modules."""

import pytest

from goppa_bounds.core.config import Settings
from goppa_bounds.services.fields import Backend, TowerParams, build_tower


@pytest.fixture(scope="session")
def settings() -> Settings:
    """Settings independent of the developer's environment and .env file."""
    return Settings(_env_file=None, cache_dir=None, workers=2, oracle_budget_bits=20)


@pytest.fixture(scope="session")
def tower_233(settings):
    """F_{2^9} with n = r = 3."""
    return build_tower(TowerParams(p=2, t=1, n=3, r=3), Backend.LOG_TABLES, settings=settings)


@pytest.fixture(scope="session")
def tower_235(settings):
    """F_{2^15} with n = 3, r = 5."""
    return build_tower(TowerParams(p=2, t=1, n=3, r=5), Backend.LOG_TABLES, settings=settings)


@pytest.fixture(scope="session")
def tower_333(settings):
    """F_{3^9} with n = r = 3."""
    return build_tower(TowerParams(p=3, t=1, n=3, r=3), Backend.LOG_TABLES, settings=settings)
