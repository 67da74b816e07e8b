from pathlib import Path

import pytest

from _tables import get_table

REPO_ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture(scope="session")
def cl100k():
    return get_table("cl100k_base")


@pytest.fixture(scope="session")
def o200k():
    return get_table("o200k_base")


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return REPO_ROOT / "data" / "corpus" / "flores200p-desk"


@pytest.fixture(scope="session")
def demographics_dir() -> Path:
    return REPO_ROOT / "data" / "demographics"


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return REPO_ROOT / "data" / "golden"
