import itertools

import pytest

from refinemon import core
from refinemon.errors import DomainError, PreconditionError, RankBudgetExceeded
from refinemon.resolution import (ColimitElement, PairStats, build_tower, colimit_alpha,
                                  colimit_propto, extend_tower, image, inductive_step,
                                  push, resolve_all_pairs, resolve_basis_split,
                                  resolve_element_pair, resolve_index_pair, start_tower)
from refinemon.specfile import FIXTURES, load_fixture


def commutes(oracle, alpha, res):
    return all(image(oracle, res.alpha, col) == alpha[i]
               for i, col in enumerate(res.beta.columns))


def all_pairs_resolved(oracle, alpha, res):
    r = len(alpha)
    for I in itertools.product((0, 1), repeat=r):
        for J in itertools.product((0, 1), repeat=r):
            if oracle.propto(image(oracle, alpha, J), image(oracle, alpha, I)):
                if core.propto(res.beta(J), res.beta(I)) is None:
                    return False
    return True


def test_basis_split_naturals(nat):
    res = resolve_basis_split(nat, (2, 1), 0, [1])
    assert res.multiple == 2 and res.rank == 3
    assert res.alpha == (0, 0, 1)
    assert res.beta.columns == ((0, 1, 2), (1, 1, 1))
    assert image(nat, res.alpha, res.beta.columns[0]) == 2
    assert core.leq(res.beta.columns[0], core.scale(2, res.beta.columns[1]))


def test_basis_split_zero_images(nat):
    res = resolve_basis_split(nat, (0, 0), 0, [1])
    assert res.multiple == 1 and res.alpha == (0, 0)
    assert res.beta.columns == ((0, 1), (1, 1))


def test_basis_split_semilattice(semi):
    res = resolve_basis_split(semi, (1, 1), 0, [1])
    assert res.multiple == 1 and res.alpha == (0, 1)
    assert res.beta.columns == ((0, 1), (1, 1))


def test_basis_split_precondition(nat):
    with pytest.raises(PreconditionError):
        resolve_basis_split(nat, (1, 0), 0, [1])
    with pytest.raises(DomainError):
        resolve_basis_split(nat, (1, 1), 0, [0])


def test_inductive_step_naturals(nat):
    res, K, moved = inductive_step(nat, (1, 1, 2), {2}, {0, 1}, 0)
    assert res.rank == 3
    assert K == {1, 2}
    assert res.beta.columns[1] == core.unit(3, moved[1])
    assert commutes(nat, (1, 1, 2), res)


def test_inductive_step_semilattice(semi):
    res, K, moved = inductive_step(semi, (1, 1, 1), {2}, {0, 1}, 0)
    assert res.rank == 3
    assert [res.alpha[k] for k in sorted(K)] == [0, 1]


def test_inductive_step_zero_block(nat):
    res, K, _ = inductive_step(nat, (0, 0, 3), {1}, {0}, 0)
    assert all(res.alpha[k] == 0 for k in K)


def test_index_pair_single_matches_split(nat):
    alpha = (2, 1)
    a = resolve_index_pair(nat, alpha, {1}, {0})
    b = resolve_basis_split(nat, alpha, 0, [1])
    assert a.alpha == b.alpha and a.beta == b.beta


@pytest.mark.parametrize("name,alpha", [("naturals", (1, 1, 2)), ("semilattice2", (1, 1, 1))])
def test_index_pair_recursion(name, alpha):
    m = load_fixture(name)
    res = resolve_index_pair(m, alpha, {2}, {0, 1})
    full = core.SimplicialMonoid(3)
    assert core.propto(res.beta(full.basis_sum([0, 1])), res.beta(full.basis_sum([2]))) is not None
    assert commutes(m, alpha, res)


def test_element_pair_cases(nat):
    same = resolve_element_pair(nat, (1, 2), (0, 0), (1, 0))
    assert same.beta == core.Morphism.identity(2)
    kill = resolve_element_pair(nat, (0, 1), (2, 0), (0, 0))
    assert kill.beta.columns == ((0, 0), (0, 1))
    res = resolve_element_pair(nat, (1, 2), (3, 1), (0, 1))
    assert core.propto(res.beta((3, 1)), res.beta((0, 1))) is not None
    assert commutes(nat, (1, 2), res)
    with pytest.raises(PreconditionError):
        resolve_element_pair(nat, (1, 0), (1, 0), (0, 1))


@pytest.mark.parametrize("name,alpha", [("naturals", (2, 1)), ("semilattice2", (1, 1)),
                                         ("naturals", (3,)), ("diamond", (1, 2, 3)),
                                         ("z3_with_zero", (2, 3))])
def test_all_pairs(name, alpha):
    m = load_fixture(name)
    stats = PairStats()
    res = resolve_all_pairs(m, alpha, stats=stats)
    assert commutes(m, alpha, res)
    assert all_pairs_resolved(m, alpha, res)


def test_all_pairs_budget(nat):
    with pytest.raises(RankBudgetExceeded):
        resolve_all_pairs(nat, (1, 2, 3), rank_budget=24)
    assert resolve_all_pairs(nat, (2, 1), rank_budget=2).rank == 2


def test_all_pairs_exhaustive_small_naturals(nat):
    done = 0
    for r in (1, 2, 3):
        for alpha in itertools.product(range(5), repeat=r):
            try:
                res = resolve_all_pairs(nat, alpha, rank_budget=64)
            except RankBudgetExceeded:
                continue
            done += 1
            assert commutes(nat, alpha, res)
            assert all_pairs_resolved(nat, alpha, res)
    assert done > 100


def test_tower_semilattice(semi):
    t = build_tower(semi, 1)
    assert t.stages[0].rank == 1 and t.stages[0].alpha == (semi.element(0),)
    assert semi.generates(t.stages[1].alpha)
    assert image(semi, t.stages[1].alpha, t.stages[0].beta((1,))) == t.stages[0].alpha[0]


def test_tower_naturals(nat):
    t = start_tower(nat)
    assert t.stages[0].alpha == (0,)
    t = extend_tower(t)
    assert t.stages[1].adjoined and 1 in t.stages[1].alpha
    assert t.image_contains(1, 0) and t.image_contains(1, 1)


def test_tower_no_adjoin_when_covered(nat):
    t = build_tower(nat, 3)
    assert not t.stages[2].adjoined and not t.stages[3].adjoined


@pytest.mark.parametrize("name", FIXTURES)
def test_tower_surjectivity_prefix(name):
    m = load_fixture(name)
    t = build_tower(m, 4)
    for j in range(5):
        for x in m.enumerate(j + 1):
            assert t.image_contains(j, x)


def test_colimit_basics(semi, nat):
    t = build_tower(semi, 2)
    c = ColimitElement(0, (1,))
    assert colimit_alpha(t, c) == t.stages[0].alpha[0]
    assert colimit_alpha(t, ColimitElement(1, (0,) * t.stages[1].rank)) == semi.zero
    assert colimit_alpha(t, push(t, c, 2)) == colimit_alpha(t, c)
    assert colimit_propto(t, c, c).holds

    t = build_tower(nat, 3)
    r = t.stages[1].rank
    one = t.stages[1].alpha.index(1)
    five = ColimitElement(1, tuple(5 if k == one else 0 for k in range(r)))
    two = ColimitElement(1, tuple(2 if k == one else 0 for k in range(r)))
    got = colimit_propto(t, five, two)
    assert got.holds and got.stage <= 3 and got.multiple == 3
    assert not colimit_propto(t, five, ColimitElement(1, (0,) * r)).holds


def test_colimit_false_in_semilattice(semi):
    t = build_tower(semi, 2)
    r = t.stages[1].rank
    u = t.stages[1].alpha.index(1)
    a = ColimitElement(1, tuple(1 if k == u else 0 for k in range(r)))
    assert not colimit_propto(t, a, ColimitElement(1, (0,) * r))
