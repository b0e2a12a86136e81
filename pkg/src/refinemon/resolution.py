"""Resolving a refinement monoid by a tower of simplicial monoids.

A map alpha from a simplicial monoid of rank r into the oracle M is given by
the tuple of basis images ``(alpha(e_0), ..., alpha(e_{r-1}))``.  Every
resolution step produces a :class:`Resolution`: a morphism beta into a new
simplicial monoid together with the new basis images alpha', such that
alpha' o beta = alpha.  Each step re-verifies its postconditions exactly and
raises :class:`InvariantError` if any fails.
"""

from dataclasses import dataclass, field, replace

from . import core
from .core import Morphism
from .errors import (DomainError, InsufficientDepth, InvariantError,
                     PreconditionError, RankBudgetExceeded)

DEFAULT_RANK_BUDGET = 24


@dataclass(frozen=True)
class Resolution:
    beta: Morphism
    alpha: tuple
    multiple: int = None  # the n used by a basis split

    @property
    def rank(self):
        return len(self.alpha)


def image(oracle, alpha, x):
    """alpha(x) for an element x of the simplicial source."""
    if len(x) != len(alpha):
        raise DomainError(f"element of rank {len(x)} for a map of rank {len(alpha)}")
    s = oracle.zero
    for c, a in zip(x, alpha):
        if c:
            s = oracle.add(s, oracle.mul(c, a))
    return s


def _subset_image(oracle, alpha, indices):
    return oracle.total(alpha[i] for i in sorted(indices))


def _check_indices(r, *sets):
    for s in sets:
        for i in s:
            if not 0 <= i < r:
                raise DomainError(f"index {i} out of range for rank {r}")


def _check_commutes(oracle, alpha, res):
    if res.beta.source_rank != len(alpha) or res.beta.target_rank != len(res.alpha):
        raise InvariantError("resolution has mismatched ranks")
    for i, col in enumerate(res.beta.columns):
        if image(oracle, res.alpha, col) != alpha[i]:
            raise InvariantError(f"alpha' o beta differs from alpha at basis element {i}")


def resolve_basis_split(oracle, alpha, pivot, rest):
    """Split e_pivot against e_rest when alpha(e_pivot) is proportional to alpha(e_rest).

    The new monoid has basis e_{ij} (i in rest, 0 <= j <= n), laid out
    row-major in sorted order of i, and rank (n+1)*|rest|.
    """
    alpha = tuple(alpha)
    r = len(alpha)
    rest = sorted(frozenset(rest))
    _check_indices(r, rest, [pivot])
    if pivot in rest or len(rest) + 1 != r:
        raise DomainError("pivot and rest must partition the basis")
    if not rest:
        raise DomainError("rest must be nonempty")
    a_pivot = alpha[pivot]
    a_rest = _subset_image(oracle, alpha, rest)
    n = oracle.decide_propto(a_pivot, a_rest)
    if n is None:
        raise PreconditionError(
            f"alpha(e_{pivot}) = {oracle.label(a_pivot)} is not proportional to "
            f"alpha(e_rest) = {oracle.label(a_rest)}")
    n = max(n, 1)
    ys = oracle.riesz_decompose(a_pivot, a_rest, n)
    x = oracle.refine_matrix([alpha[i] for i in rest], ys)

    width = n + 1
    s = width * len(rest)
    new_alpha = tuple(x[p][j] for p in range(len(rest)) for j in range(width))
    columns = [None] * r
    pivot_col = [0] * s
    for p, i in enumerate(rest):
        col = [0] * s
        for j in range(width):
            col[p * width + j] = 1
            pivot_col[p * width + j] = j
        columns[i] = tuple(col)
    columns[pivot] = tuple(pivot_col)
    res = Resolution(Morphism(r, s, tuple(columns)), new_alpha, n)

    _check_commutes(oracle, alpha, res)
    b_pivot = res.beta(core.unit(r, pivot))
    b_rest = res.beta(core.basis_sum(core.SimplicialMonoid(r), rest))
    if b_rest != (1,) * s or not core.leq(b_pivot, core.scale(n, b_rest)):
        raise InvariantError("basis split postconditions failed")
    return res


def inductive_step(oracle, alpha, I, J, j):
    """One step towards e_J proportional to e_I: split e_j against e_I inside
    the block spanned by I and j, leaving every other basis element alone.

    Returns ``(resolution, K, moved)`` where K is the index set of the new
    block and ``moved`` maps each untouched old index to its new index.
    """
    alpha = tuple(alpha)
    r = len(alpha)
    I, J = frozenset(I), frozenset(J)
    _check_indices(r, I, J, [j])
    if not I or not J or I & J or j not in J:
        raise DomainError("need nonempty disjoint I, J with j in J")
    a_J, a_I = _subset_image(oracle, alpha, J), _subset_image(oracle, alpha, I)
    if not oracle.propto(a_J, a_I):
        raise PreconditionError("alpha(e_J) is not proportional to alpha(e_I)")

    block = sorted(I | {j})
    outside = [i for i in range(r) if i not in I and i != j]
    split = resolve_basis_split(oracle, [alpha[i] for i in block], block.index(j),
                                [p for p, i in enumerate(block) if i != j])
    offset = len(outside)
    s = offset + split.rank
    columns = [None] * r
    for pos, i in enumerate(outside):
        columns[i] = core.unit(s, pos)
    for q, i in enumerate(block):
        columns[i] = (0,) * offset + split.beta.columns[q]
    res = Resolution(Morphism(r, s, tuple(columns)),
                     tuple(alpha[i] for i in outside) + split.alpha, split.multiple)
    K = frozenset(range(offset, s))
    moved = {i: pos for pos, i in enumerate(outside)}

    # conditions (i)-(iv)
    _check_commutes(oracle, alpha, res)
    others = J - {j}
    for k in others:
        if res.beta.columns[k] != core.unit(s, moved[k]):
            raise InvariantError(f"basis element {k} was not carried to a basis element")
    if K & {moved[k] for k in others}:
        raise InvariantError("new block meets J \\ {j}")
    e_I = res.beta(core.basis_sum(core.SimplicialMonoid(r), I))
    if e_I != core.basis_sum(core.SimplicialMonoid(s), K):
        raise InvariantError("beta(e_I) is not f_K")
    if core.propto(res.beta.columns[j], e_I) is None:
        raise InvariantError("beta(e_j) is not proportional to beta(e_I)")
    if others and not oracle.propto(_subset_image(oracle, res.alpha, [moved[k] for k in others]),
                                    _subset_image(oracle, res.alpha, K)):
        raise InvariantError("alpha'(f_{J\\{j}}) is not proportional to alpha'(f_K)")
    return res, K, moved


def _within_budget(res, rank_budget):
    if rank_budget is not None and res.rank > rank_budget:
        raise RankBudgetExceeded(res.rank, rank_budget)
    return res


def resolve_index_pair(oracle, alpha, I, J, rank_budget=None):
    """Make e_J proportional to e_I, by induction on |J|."""
    alpha = tuple(alpha)
    r = len(alpha)
    I, J = frozenset(I), frozenset(J)
    _check_indices(r, I, J)
    if not I or not J or I & J:
        raise DomainError("need nonempty disjoint I, J")
    if not oracle.propto(_subset_image(oracle, alpha, J), _subset_image(oracle, alpha, I)):
        raise PreconditionError("alpha(e_J) is not proportional to alpha(e_I)")

    j = min(J)
    first, K, moved = inductive_step(oracle, alpha, I, J, j)
    _within_budget(first, rank_budget)
    if len(J) == 1:
        res = first
    else:
        second = resolve_index_pair(oracle, first.alpha, K, {moved[k] for k in J - {j}},
                                    rank_budget)
        res = Resolution(core.compose(second.beta, first.beta), second.alpha)

    full = core.SimplicialMonoid(r)
    if core.propto(res.beta(full.basis_sum(J)), res.beta(full.basis_sum(I))) is None:
        raise InvariantError("beta(e_J) is not proportional to beta(e_I)")
    _check_commutes(oracle, alpha, res)
    return res


def resolve_element_pair(oracle, alpha, x, y, rank_budget=None):
    """Make beta(x) proportional to beta(y), given alpha(x) proportional to alpha(y)."""
    alpha = tuple(alpha)
    r = len(alpha)
    if len(x) != r or len(y) != r:
        raise DomainError("elements must live in the source monoid")
    if not oracle.propto(image(oracle, alpha, x), image(oracle, alpha, y)):
        raise PreconditionError("alpha(x) is not proportional to alpha(y)")
    if core.propto(x, y) is not None:
        return Resolution(Morphism.identity(r), alpha)

    J, I = core.support(x), core.support(y)
    if not I:
        # alpha(x) <= 0 forces alpha(e_j) = 0 on supp(x): kill those directions
        if any(alpha[j] != oracle.zero for j in J):
            raise InvariantError("conicality failed: alpha(x) <= 0 but alpha(e_j) != 0")
        cols = tuple(core.zero(r) if i in J else core.unit(r, i) for i in range(r))
        res = Resolution(Morphism(r, r, cols), alpha)
    else:
        res = resolve_index_pair(oracle, alpha, I, J - I, rank_budget)

    if core.propto(res.beta(x), res.beta(y)) is None:
        raise InvariantError("beta(x) is not proportional to beta(y)")
    _check_commutes(oracle, alpha, res)
    return res


def _subset_masks(r):
    for S in core.subsets(r):
        yield core.mask_of(S)


def _subset_images(oracle, alpha):
    r = len(alpha)
    vals = {0: oracle.zero}
    for mask in range(1, 1 << r):
        low = mask & -mask
        vals[mask] = oracle.add(vals[mask ^ low], alpha[low.bit_length() - 1])
    return vals


def _dominated(oracle, alpha, value, cache):
    # mask of basis directions j with alpha(e_j) proportional to `value`
    if value not in cache:
        mask = 0
        for j, a in enumerate(alpha):
            if oracle.propto(a, value):
                mask |= 1 << j
        cache[value] = mask
    return cache[value]


def _or_masks(colmasks, mask):
    out = 0
    while mask:
        low = mask & -mask
        out |= colmasks[low.bit_length() - 1]
        mask ^= low
    return out


def _vector(beta, mask):
    out = [0] * beta.target_rank
    for i in core.indices_of(mask):
        for k, c in enumerate(beta.columns[i]):
            out[k] += c
    return tuple(out)


@dataclass
class PairStats:
    considered: int = 0
    resolved: int = 0
    skipped: int = 0


def resolve_all_pairs(oracle, alpha, rank_budget=None, stats=None):
    """Make beta(x) proportional to beta(y) whenever alpha(x) is proportional to alpha(y).

    By the support reduction and the fact that proportionality of e_J to a
    fixed target holds iff it holds for every e_j, j in J, it is enough to
    treat, for each index set I, the largest J with alpha(e_J) proportional
    to alpha(e_I).  Index sets I are visited by size and then
    lexicographically; pairs already satisfied by the morphism built so far
    are skipped.
    """
    alpha = tuple(alpha)
    r = len(alpha)
    stats = stats if stats is not None else PairStats()
    vals = _subset_images(oracle, alpha)
    dom_cache = {}
    beta = Morphism.identity(r)
    cur_alpha = alpha
    colmasks = beta.support_masks()

    for I in _subset_masks(r):
        J = _dominated(oracle, alpha, vals[I], dom_cache) & ~I
        if not J:
            continue
        stats.considered += 1
        if _or_masks(colmasks, J) & ~_or_masks(colmasks, I) == 0:
            stats.skipped += 1
            continue
        res = _within_budget(resolve_element_pair(
            oracle, cur_alpha, _vector(beta, J), _vector(beta, I), rank_budget), rank_budget)
        beta = core.compose(res.beta, beta)
        cur_alpha = res.alpha
        colmasks = beta.support_masks()
        stats.resolved += 1

    out = Resolution(beta, cur_alpha)
    _check_commutes(oracle, alpha, out)
    for I in range(1 << r):
        J = _dominated(oracle, alpha, vals[I], dom_cache)
        if _or_masks(colmasks, J) & ~_or_masks(colmasks, I):
            raise InvariantError(f"pair for index set {core.indices_of(I)} left unresolved")
    return out


@dataclass(frozen=True)
class Stage:
    """One level Delta_j of a tower; ``beta`` is absent at the newest stage."""

    alpha: tuple
    beta: Morphism = None
    adjoined: bool = False

    @property
    def rank(self):
        return len(self.alpha)


@dataclass(frozen=True)
class Tower:
    oracle: object
    stages: tuple
    rank_budget: int = DEFAULT_RANK_BUDGET
    stats: tuple = field(default=(), compare=False)

    @property
    def depth(self):
        """Number of extensions applied after stage 0."""
        return len(self.stages) - 1

    @property
    def enumeration_depth(self):
        # {x_0, ..., x_j} lies in the image of stage j
        return len(self.stages) - 1

    def stage(self, j):
        if not 0 <= j < len(self.stages):
            raise DomainError(f"stage {j} not built (tower has {len(self.stages)})")
        return self.stages[j]

    def image_contains(self, j, x):
        return self.oracle.in_span(x, self.stage(j).alpha)


def start_tower(oracle, rank_budget=DEFAULT_RANK_BUDGET):
    x0 = oracle.element(0)
    stage = Stage((x0,), adjoined=True)
    if rank_budget < 1:
        raise DomainError("rank budget must be at least 1")
    return Tower(oracle, (stage,), rank_budget)


def extend_tower(t):
    """Append stage j+1: resolve every visible pair of stage j, then adjoin
    x_{j+1} if it is not already in the image."""
    j = len(t.stages) - 1
    oracle = t.oracle
    last = t.stages[-1]
    stats = PairStats()
    try:
        res = resolve_all_pairs(oracle, last.alpha, t.rank_budget, stats)
    except RankBudgetExceeded as exc:
        raise exc.at_stage(j + 1) from None
    beta, alpha = res.beta, res.alpha
    nxt = oracle.element(j + 1)
    adjoined = nxt is not None and not oracle.in_span(nxt, alpha)
    if adjoined:
        beta = Morphism(beta.source_rank, beta.target_rank + 1,
                        tuple(c + (0,) for c in beta.columns))
        alpha = alpha + (nxt,)
    if len(alpha) > t.rank_budget:
        raise RankBudgetExceeded(len(alpha), t.rank_budget, j + 1)
    stages = t.stages[:-1] + (replace(last, beta=beta), Stage(alpha, adjoined=adjoined))
    return Tower(oracle, stages, t.rank_budget, t.stats + (stats,))


def build_tower(oracle, depth, rank_budget=DEFAULT_RANK_BUDGET):
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    t = start_tower(oracle, rank_budget)
    for _ in range(depth):
        t = extend_tower(t)
    return t


@dataclass(frozen=True)
class ColimitElement:
    stage: int
    rep: tuple


@dataclass(frozen=True)
class ColimitComparison:
    holds: bool
    stage: int = None
    multiple: int = None

    def __bool__(self):
        return self.holds


def push(t, c, stage):
    """The representative of ``c`` at a later stage."""
    if not 0 <= c.stage < len(t.stages) or not c.stage <= stage < len(t.stages):
        raise DomainError(f"cannot push stage {c.stage} to stage {stage}")
    if len(c.rep) != t.stages[c.stage].rank:
        raise DomainError("representative has the wrong rank for its stage")
    x = c.rep
    for k in range(c.stage, stage):
        x = t.stages[k].beta(x)
    return ColimitElement(stage, x)


def colimit_alpha(t, c):
    t.stage(c.stage)
    return image(t.oracle, t.stages[c.stage].alpha, c.rep)


def colimit_propto(t, a, b):
    """Decide a proportional-to b in the colimit.

    The answer is the oracle's answer on alpha(a), alpha(b); when positive the
    first stage exhibiting ``rep_a <= n * rep_b`` is located and returned.
    """
    s = max(a.stage, b.stage)
    a, b = push(t, a, s), push(t, b, s)
    if not t.oracle.propto(colimit_alpha(t, a), colimit_alpha(t, b)):
        return ColimitComparison(False)
    x, y = a.rep, b.rep
    last = len(t.stages) - 1
    for k in range(s, last + 1):
        n = core.propto(x, y)
        if n is not None:
            return ColimitComparison(True, k, n)
        if k < last:
            beta = t.stages[k].beta
            x, y = beta(x), beta(y)
    if last > s:
        raise InvariantError(f"propagation failed between stages {s} and {s + 1}")
    raise InsufficientDepth(f"need stage {s + 1} to exhibit the witness; tower ends at {last}")
