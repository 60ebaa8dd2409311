"""Shared fixtures: tiny closed-form networks and the 30-node file fixture."""

from pathlib import Path

import pytest

from penprof.network import SignalingNetwork, load_annotations, load_network

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def make_net(triples, extra=()):
    return SignalingNetwork.from_edges(triples, extra_symbols=extra)


@pytest.fixture
def chain3():
    """s -> a -> t, the worked closed-form example used throughout."""
    return make_net([("s", "a", 1), ("a", "t", 1)])


@pytest.fixture
def two_node():
    return make_net([("s", "t", 1)])


@pytest.fixture
def two_cycle():
    return make_net([("s", "t", 1), ("t", "s", 1)])


@pytest.fixture
def star4():
    """u -> a, u -> b, a -> w. b has no route onward to w."""
    return make_net([("u", "a", 1), ("u", "b", 1), ("a", "w", -1)])


@pytest.fixture
def isolated_plus_pair():
    """One isolated node u next to a connected pair a -> b."""
    return make_net([("a", "b", 1)], extra=("u",))


@pytest.fixture(scope="session")
def net30():
    return load_network(DATA / "net30.tsv")


@pytest.fixture(scope="session")
def net30_annotations(net30):
    ann, unresolved = load_annotations(
        net30, DATA / "oncogenes30.txt", DATA / "drugs30.tsv"
    )
    return ann, unresolved
