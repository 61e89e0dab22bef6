import pytest

from chromasum.core.generate import complete, cycle, path, petersen, star
from chromasum.core.graph import Graph
from chromasum.core.params import ScaleProfile


@pytest.fixture
def p3() -> Graph:
    return path(3)


@pytest.fixture
def p4() -> Graph:
    return path(4)


@pytest.fixture
def c4() -> Graph:
    return cycle(4)


@pytest.fixture
def c5() -> Graph:
    return cycle(5)


@pytest.fixture
def c6() -> Graph:
    return cycle(6)


@pytest.fixture
def k3() -> Graph:
    return complete(3)


@pytest.fixture
def k4() -> Graph:
    return complete(4)


@pytest.fixture
def k6() -> Graph:
    return complete(6)


@pytest.fixture
def star4() -> Graph:
    """K_{1,4} centred at 0."""
    return star(4)


@pytest.fixture
def petersen_graph() -> Graph:
    return petersen()


@pytest.fixture
def desk() -> ScaleProfile:
    return ScaleProfile.desk()


@pytest.fixture
def write_graph(tmp_path):
    """Write an edge list file and return its path."""

    def _write(g: Graph, name: str = "graph.txt"):
        from chromasum.core.io import serialize_graph

        target = tmp_path / name
        target.write_text(serialize_graph(g, "edgelist"))
        return target

    return _write
