import pytest
from hypothesis import given, strategies as st

from refinemon import core
from refinemon.core import Morphism, SimplicialMonoid
from refinemon.errors import DomainError


def vec(r, hi=6):
    return st.lists(st.integers(0, hi), min_size=r, max_size=r).map(tuple)


def morphisms(src, dst, hi=3):
    return st.lists(vec(dst, hi), min_size=src, max_size=src).map(
        lambda cols: Morphism(src, dst, cols))


def test_basis_sums():
    assert core.basis_sum(SimplicialMonoid(3), [0, 2]) == (1, 0, 1)
    assert core.basis_sum(SimplicialMonoid(3), []) == (0, 0, 0)
    assert SimplicialMonoid(2).top == (1, 1)


def test_support():
    assert core.support((2, 0, 3)) == {0, 2}
    assert core.support((0, 0)) == frozenset()
    assert core.support((1, 1, 1)) == {0, 1, 2}
    assert core.support_mask((2, 0, 3)) == 0b101


def test_propto_examples():
    assert core.propto((1, 0, 2), (2, 0, 1)) == 2
    assert core.propto((0, 0), (5, 7)) == 0
    assert core.propto((1, 0), (0, 1)) is None


def test_rank_mismatch():
    with pytest.raises(DomainError):
        core.add((1,), (1, 2))
    with pytest.raises(DomainError):
        Morphism(1, 2, [(1,)])
    with pytest.raises(DomainError):
        Morphism(1, 1, [(-1,)])


def test_compose_examples():
    f = Morphism(1, 2, [(1, 1)])
    g = Morphism(2, 2, [(2, 0), (0, 1)])
    assert core.compose(g, f).columns == ((2, 1),)
    h = Morphism(2, 3, [(1, 0, 2), (0, 3, 0)])
    assert core.compose(Morphism.identity(3), h) == h
    z = Morphism.zero_map(3, 4)
    assert core.compose(z, h) == Morphism.zero_map(2, 4)


def test_direct_sum():
    m, i1, i2 = core.direct_sum(SimplicialMonoid(2), SimplicialMonoid(3))
    assert m.rank == 5
    assert i1(core.unit(2, 1)) == core.unit(5, 1)
    assert i2(core.unit(3, 0)) == core.unit(5, 2)
    assert all(not (core.support(a) & core.support(b))
               for a in i1.columns for b in i2.columns)
    m, _, i2 = core.direct_sum(SimplicialMonoid(0), SimplicialMonoid(2))
    assert m.rank == 2 and i2 == Morphism.identity(2)


def test_subsets_order():
    got = list(core.subsets(3))
    assert got[0] == frozenset() and got[-1] == {0, 1, 2}
    assert [len(s) for s in got] == sorted(len(s) for s in got)
    assert len(got) == 8


def brute(x, y):
    for n in range(sum(x) + 1):
        if core.leq(x, core.scale(n, y)):
            return n
    return None


@given(st.integers(1, 4).flatmap(lambda r: st.tuples(vec(r), vec(r))))
def test_propto_matches_brute_force(xy):
    x, y = xy
    assert core.propto(x, y) == brute(x, y)


@given(st.integers(1, 4).flatmap(lambda r: st.tuples(vec(r), vec(r), vec(r))))
def test_propto_is_support_containment(xyz):
    x, y, z = xyz
    assert (core.propto(x, y) is not None) == (core.support(x) <= core.support(y))
    # proportionality is transitive and additive in the first argument
    if core.propto(x, y) is not None and core.propto(y, z) is not None:
        assert core.propto(x, z) is not None
    if core.propto(x, z) is not None and core.propto(y, z) is not None:
        assert core.propto(core.add(x, y), z) is not None


@given(st.integers(1, 3).flatmap(
    lambda r: st.tuples(morphisms(r, 2), morphisms(2, 3), vec(r), vec(r))))
def test_morphisms_additive_and_functorial(data):
    f, g, x, y = data
    assert f(core.add(x, y)) == core.add(f(x), f(y))
    assert f(core.zero(f.source_rank)) == core.zero(2)
    assert core.compose(g, f)(x) == g(f(x))
    assert f.then(g) == core.compose(g, f)


@given(st.integers(1, 3).flatmap(lambda r: st.tuples(morphisms(r, 3), vec(r), vec(r))))
def test_morphisms_preserve_proportionality(data):
    f, x, y = data
    if core.propto(x, y) is not None:
        assert core.propto(f(x), f(y)) is not None
