from fractions import Fraction as F
from pathlib import Path

import pytest

from kronsplit.matkernel import Arith, read_matrix
from kronsplit.network import Network, read_network

DATA = Path(__file__).parent / "data"

# float mode used for the rounded ten-terminal fixtures
BIG_ARITH = Arith(False, 1e-5)


def data_path(name):
    return DATA / name


def load(name, exact=True):
    return read_matrix(DATA / name, exact=exact)


@pytest.fixture(scope="session")
def mats_net():
    return read_network(DATA / "mats.net")


@pytest.fixture(scope="session")
def mats_m():
    return load("mats_m.txt")


@pytest.fixture(scope="session")
def mats_w():
    return load("mats_w.txt")


@pytest.fixture(scope="session")
def counter_m():
    return load("counter_m.txt")


@pytest.fixture(scope="session")
def counter_w():
    return load("counter_w.txt")


@pytest.fixture(scope="session")
def big_m():
    return load("big_m.txt")


@pytest.fixture(scope="session")
def big_w():
    return load("big_w.txt")


def single_edge(c=1):
    return Network((1, 2), (), [(1, 2, F(c))], {1: (2,), 2: (1,)})


def cut_vertex_net():
    """Interior v on 1,2,3,6 and interior u on 3,4,5,6: v is a cut vertex for {1,2}."""
    edges = [(1, 7, 1), (2, 7, 1), (3, 7, 1), (6, 7, 1), (3, 8, 1), (4, 8, 1), (5, 8, 1), (6, 8, 1)]
    return Network(range(1, 7), (7, 8), edges)


def planted_obstruction(seed):
    """Circular system with the equal-weight crossing/flanking pattern and a != b.

    Returns ``(system, blocks, a, b)``; blocks A, B, C, D are consecutive arcs
    of the counting order, B and D with at least two labels each.
    """
    import random

    from kronsplit.kalmanson import WeightedSplit, WeightedSplitSystem

    rng = random.Random(seed)
    sizes = [rng.randint(1, 2), rng.randint(2, 3), rng.randint(1, 2), rng.randint(2, 3)]
    n = sum(sizes)
    taxa = range(1, n + 1)
    blocks, at = [], 1
    for k in sizes:
        blocks.append(frozenset(range(at, at + k)))
        at += k
    A, B, C, D = blocks
    a = F(rng.randint(1, 9), rng.randint(1, 9))
    b = a
    while b == a:
        b = F(rng.randint(1, 9), rng.randint(1, 9))
    splits = [
        WeightedSplit.of(A | B, taxa, a),
        WeightedSplit.of(A | D, taxa, a),
        WeightedSplit.of(D, taxa, b),
        WeightedSplit.of(B, taxa, b),
    ]
    splits += [WeightedSplit.of({t}, taxa, F(rng.randint(1, 9), rng.randint(1, 9))) for t in taxa]
    return WeightedSplitSystem(splits, list(taxa)), blocks, a, b


def witness_ok(system, wit):
    """The witness really shows the pattern inside ``system``."""
    A, B, C, D = wit.blocks
    if any(not x for x in wit.blocks) or len(A | B | C | D) != len(system.taxa):
        return False
    w = system.weight
    return (
        w(A | B) == w(A | D) == wit.a
        and w(D) == w(B) == wit.b
        and wit.a != wit.b
        and len(B) > 1 and len(D) > 1
    )
