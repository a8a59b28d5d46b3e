"""Shared fixtures: every shipped example, parsed once per session."""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.dsl import load_builtin


@pytest.fixture(scope="session")
def exe1():
    return load_builtin("exe1")


@pytest.fixture(scope="session")
def exe1_q():
    return load_builtin("exe1-q")


@pytest.fixture(scope="session")
def exe2():
    return load_builtin("exe2-global")


@pytest.fixture(scope="session")
def ex_invariant():
    return load_builtin("ex-invariant")


@pytest.fixture(scope="session")
def groupoid12():
    return load_builtin("groupoid-12")


@pytest.fixture(scope="session")
def inv_semigroup():
    return load_builtin("inv-semigroup")


@pytest.fixture(scope="session")
def disjoint():
    return load_builtin("exe1-groupoid-12")
