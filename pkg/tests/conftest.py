import pytest
from pathlib import Path


@pytest.fixture
def problems_dir() -> Path:
    return Path(__file__).resolve().parent.parent / "problems"
