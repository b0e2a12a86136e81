import itertools

import pytest

from refinemon import core
from refinemon.oracles import FiniteMonoid, SemilatticeMonoid
from refinemon.specfile import FIXTURES, load_fixture


@pytest.fixture(params=FIXTURES)
def any_oracle(request):
    return load_fixture(request.param)


@pytest.fixture
def nat():
    return load_fixture("naturals")


@pytest.fixture
def semi():
    return load_fixture("semilattice2")


def z2_table():
    return FiniteMonoid([[0, 1], [1, 0]], ["0", "a"])


def brute_propto(oracle, a, b, limit=60):
    """Least n <= limit with a <= n*b, searching differences directly."""
    for n in range(limit + 1):
        nb = oracle.mul(n, b)
        if any(oracle.add(a, c) == nb for c in oracle.below(nb)):
            return n
    return None


def brute_tower_problems(oracle, doc):
    """Independent validity check of a serialized tower: commutativity per
    basis element and propagation over all subset pairs, using only
    core.propto on the simplicial side."""
    stages = doc["stages"]
    alphas = [[oracle.decode(a) for a in st["alpha"]] for st in stages]
    out = []
    for j in range(len(stages) - 1):
        cols = stages[j]["beta"]["columns"]
        nxt = alphas[j + 1]
        for i, col in enumerate(cols):
            img = oracle.total(oracle.mul(c, a) for c, a in zip(col, nxt))
            if img != alphas[j][i]:
                out.append((j, i))
        r = len(cols)
        beta = core.Morphism(r, len(nxt), cols)
        for I in itertools.product((0, 1), repeat=r):
            for J in itertools.product((0, 1), repeat=r):
                aJ = oracle.total(a for a, c in zip(alphas[j], J) if c)
                aI = oracle.total(a for a, c in zip(alphas[j], I) if c)
                if oracle.propto(aJ, aI) and core.propto(beta(J), beta(I)) is None:
                    out.append((j, None))
    return out


def semilattice_from_poset_joins(n):
    """Free join-semilattice with zero on n atoms: subsets under union."""
    size = 1 << n
    return SemilatticeMonoid([[a | b for b in range(size)] for a in range(size)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
