import pytest

from refinemon import lattice
from refinemon.core import Morphism, SimplicialMonoid
from refinemon.oracles import FreeOracle
from refinemon.resolution import build_tower
from refinemon.specfile import FINITE_FIXTURES, SEMILATTICE_FIXTURES, load_fixture

from conftest import semilattice_from_poset_joins


def test_ideal_generated():
    assert lattice.ideal_generated(SimplicialMonoid(2), [(1, 0)]).members == {0}
    assert lattice.ideal_generated(SimplicialMonoid(3), [(1, 0, 1)]).members == {0, 2}
    semi = load_fixture("semilattice2")
    assert lattice.ideal_generated(semi, [1]).members == {0, 1}
    assert lattice.ideal_generated(semi, []).members == {0}


def test_enumerate_ideals_counts():
    assert len(lattice.enumerate_ideals(SimplicialMonoid(2))) == 4
    assert len(lattice.enumerate_ideals(load_fixture("naturals"))) == 2
    assert len(lattice.enumerate_ideals(FreeOracle(3))) == 8


def brute_ideals(m):
    out = set()
    for mask in range(1 << m.size):
        S = {x for x in range(m.size) if mask >> x & 1}
        if m.zero not in S:
            continue
        down = all(c in S for x in S for c in range(m.size) if m.leq(c, x))
        closed = all(m.add(a, b) in S for a in S for b in S)
        if down and closed:
            out.add(frozenset(S))
    return out


@pytest.mark.parametrize("name", FINITE_FIXTURES)
def test_enumerate_ideals_matches_brute_force(name):
    m = load_fixture(name)
    got = {I.members for I in lattice.enumerate_ideals(m).ideals}
    assert got == brute_ideals(m)


def test_diamond_lattice_shape():
    lat = lattice.enumerate_ideals(load_fixture("diamond"))
    sets = [I.members for I in lat.ideals]
    assert frozenset({0}) in sets and frozenset({0, 1, 2, 3}) in sets
    # ideals of a finite semilattice are principal, so the lattice mirrors it
    assert len(lat) == 4
    assert len(lat.hasse_edges()) == 4


def test_hasse_edges_boolean():
    lat = lattice.enumerate_ideals(SimplicialMonoid(3))
    assert len(lat.hasse_edges()) == 12


def test_criterion_identity_and_negative():
    nat = load_fixture("naturals")
    neg = lattice.check_lattice_iso_criterion(nat, alpha=(1, 1))
    assert not neg.holds and neg.surjective and neg.violations
    assert len(lattice.enumerate_ideals(SimplicialMonoid(2))) == 4
    assert len(lattice.enumerate_ideals(nat)) == 2
    free = FreeOracle(2)
    ident = lattice.check_lattice_iso_criterion(free, alpha=((1, 0), (0, 1)))
    assert ident.holds and ident.bijection.ok
    assert lattice.check_lattice_iso_criterion(nat, alpha=(1,)).holds


def test_criterion_not_surjective():
    nat = load_fixture("naturals")
    cert = lattice.check_lattice_iso_criterion(nat, alpha=(2,))
    assert not cert.surjective and not cert.holds


@pytest.mark.parametrize("name", FINITE_FIXTURES)
def test_criterion_on_towers(name):
    m = load_fixture(name)
    t = build_tower(m, m.size + 1)
    cert = lattice.check_lattice_iso_criterion(m, tower=t)
    assert cert.holds, cert.violations
    assert cert.bijection is not None and cert.bijection.ok


def test_saturated_masks():
    assert len(lattice.saturated_masks(Morphism.identity(3))) == 8
    # e_0 maps into the support of e_1: anything containing 1 must contain 0
    beta = Morphism(2, 2, [(1, 0), (1, 1)])
    assert sorted(lattice.saturated_masks(beta)) == [0b00, 0b01, 0b11]


def test_nabla_examples():
    q = lattice.nabla(load_fixture("naturals"))
    assert q.size == 2
    assert q.classify(0) == 0 and q.classify(7) == 1
    q = lattice.nabla(FreeOracle(2))
    assert q.size == 4
    assert q.classify((3, 0)) == q.classify((1, 0)) != q.classify((1, 1))


@pytest.mark.parametrize("name", SEMILATTICE_FIXTURES)
def test_nabla_of_semilattice_is_itself(name):
    m = load_fixture(name)
    q = lattice.nabla(m)
    assert lattice.find_isomorphism(q.semilattice, m) is not None


def test_nabla_quotient_map_is_universal_on_groups_with_zero():
    m = load_fixture("z3_with_zero")
    q = lattice.nabla(m)
    assert q.size == 2
    assert all(q.classify(x) == 1 for x in (1, 2, 3))


def test_nabla_larger_semilattice():
    m = semilattice_from_poset_joins(3)
    q = lattice.nabla(m)
    assert q.size == 8
    assert lattice.find_isomorphism(q.semilattice, m) is not None


@pytest.mark.parametrize("name", FINITE_FIXTURES + ("naturals",))
def test_tower_nabla_transfer(name):
    m = load_fixture(name)
    depth = m.size + 1 if m.size else 4
    t = build_tower(m, depth)
    tr = lattice.tower_nabla_transfer(t)
    assert tr.ok, tr.problems
    assert tr.size == lattice.nabla(m).size


def test_is_isomorphism_rejects():
    a = load_fixture("chain3")
    assert lattice.is_isomorphism(a, a, (0, 1, 2))
    assert not lattice.is_isomorphism(a, a, (0, 2, 1))
    assert lattice.find_isomorphism(a, load_fixture("semilattice2")) is None
