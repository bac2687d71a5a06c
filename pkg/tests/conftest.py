from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

PROBLEMS = Path(__file__).resolve().parent.parent / "demos" / "problems"


@pytest.fixture
def problem_path():
    return lambda name: str(PROBLEMS / f"{name}.txt")
