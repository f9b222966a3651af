import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from revprime.digits import Base
from revprime.verify import default_fixtures_path, load_fixtures


@pytest.fixture(scope="session")
def b10():
    return Base(10)


@pytest.fixture(scope="session")
def small_bases():
    return tuple(Base(b) for b in (2, 3, 6, 10))


@pytest.fixture(scope="session")
def fixtures():
    return load_fixtures(default_fixtures_path())
