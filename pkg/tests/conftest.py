import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from frobcat import catalog  # noqa: E402


@pytest.fixture(scope="session")
def cats():
    return {k: catalog.load_builtin(k) for k in catalog.builtin_keys()}


@pytest.fixture(scope="session")
def toric():
    return catalog.load_builtin("toric_code")


@pytest.fixture(scope="session")
def ising():
    return catalog.load_builtin("ising")


@pytest.fixture(scope="session")
def fib():
    return catalog.load_builtin("fibonacci")
