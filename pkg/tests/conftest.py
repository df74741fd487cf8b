import pathlib

import pytest

from fuzzdss import builtin_student_model

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def model():
    return builtin_student_model()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
