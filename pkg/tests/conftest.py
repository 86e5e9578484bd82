import json
from pathlib import Path

import pytest

from vassrank.vass import Vass

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load(name: str) -> Vass:
    return Vass.load(FIXTURES / f"{name}.json")


@pytest.fixture
def vprog():
    return load("vprog")


@pytest.fixture
def vcsys():
    return load("vcsys")


@pytest.fixture
def vexp():
    return load("vexp")


@pytest.fixture
def swap():
    return load("swap")


@pytest.fixture
def regression():
    return json.loads((FIXTURES / "comp_regression.json").read_text())


def self_loop(update, loc="q"):
    return Vass.build(len(update), [loc], [(loc, loc, list(update))])
