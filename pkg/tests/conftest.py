import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from domrecon import build_torus, cycle_graph, path_graph


@pytest.fixture(scope="session")
def torus4():
    return build_torus(4)


@pytest.fixture(scope="session")
def torus8():
    return build_torus(8)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def p9():
    return path_graph(9)
