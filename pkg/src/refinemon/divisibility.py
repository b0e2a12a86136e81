"""Weak divisibility in refinement monoids and numerical-semigroup helpers.

M is weakly divisible of degree n at x when x = n_1 x_1 + ... + n_r x_r with
every n_j >= n.  A :class:`DivisibilityCertificate` records such a
decomposition and can be re-checked exactly against the oracle.
"""

from dataclasses import dataclass
from functools import reduce
from math import gcd

from .errors import (BudgetError, DomainError, InvariantError,
                     NotWeaklyDivisible, PreconditionError)

DEFAULT_SEARCH_BUDGET = 100_000


@dataclass(frozen=True)
class DivisibilityCertificate:
    x: object
    targets: tuple
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "parts", tuple(self.parts))
        if len(self.targets) != len(self.parts):
            raise DomainError("one part per target is required")
        if any(n < 1 for n in self.targets):
            raise DomainError("targets must be positive")

    @property
    def degree(self):
        return min(self.targets, default=0)

    def holds(self, oracle):
        total = oracle.total(oracle.mul(n, p) for n, p in zip(self.targets, self.parts))
        return total == self.x

    def verify(self, oracle):
        if not self.holds(oracle):
            raise InvariantError(f"certificate does not add up to {oracle.label(self.x)}")
        return self

    def to_json(self, oracle):
        return {
            "x": oracle.encode(self.x),
            "targets": list(self.targets),
            "parts": [oracle.encode(p) for p in self.parts],
            "verified": self.holds(oracle),
        }


def degree2_witness(oracle, x):
    """First (y, z) in enumeration order with x = 2y + 3z, or None."""
    candidates = list(oracle.below(x))
    doubles = [(y, oracle.mul(2, y)) for y in candidates]
    triples = [(z, oracle.mul(3, z)) for z in candidates]
    for y, y2 in doubles:
        for z, z3 in triples:
            if oracle.add(y2, z3) == x:
                return y, z
    return None


def _check_gens(gens):
    gens = tuple(gens)
    if not gens or any(isinstance(g, bool) or not isinstance(g, int) or g < 1 for g in gens):
        raise DomainError("generators must be positive integers")
    return gens


def frobenius_bound(gens):
    """Least m0 such that every integer m >= m0 lies in the semigroup of gens."""
    gens = _check_gens(gens)
    if reduce(gcd, gens) != 1:
        raise DomainError(f"gcd of {gens} is not 1")
    smallest = min(gens)
    reach = [True]
    run = 1 if smallest == 1 else 0
    m0 = 0
    m = 0
    # `smallest` consecutive representables means everything after is too
    while run < smallest:
        m += 1
        ok = any(g <= m and reach[m - g] for g in gens)
        reach.append(ok)
        if ok:
            run += 1
        else:
            run = 0
            m0 = m + 1
    return m0


def represent(gens, m):
    """Lexicographically least (d_1, ..., d_r) >= 0 with sum d_j g_j = m."""
    gens = _check_gens(gens)
    if m < 0:
        raise DomainError("cannot represent a negative number")
    # suffix[k][v]: v is representable by gens[k:]
    suffix = [None] * (len(gens) + 1)
    suffix[len(gens)] = [v == 0 for v in range(m + 1)]
    for k in range(len(gens) - 1, -1, -1):
        g, nxt = gens[k], suffix[k + 1]
        cur = list(nxt)
        for v in range(g, m + 1):
            cur[v] = cur[v] or cur[v - g]
        suffix[k] = cur
    if not suffix[0][m]:
        raise DomainError(f"{m} is not representable by {gens}")
    coeffs, rest = [], m
    for k, g in enumerate(gens):
        d = 0
        while not suffix[k + 1][rest - d * g]:
            d += 1
        coeffs.append(d)
        rest -= d * g
    return tuple(coeffs)


def _divide_by(oracle, x, d, budget):
    if d == 1:
        return x
    seen = 0
    for y in oracle.below(x):
        seen += 1
        if seen > budget:
            raise PreconditionError(
                f"no y with {d}*y = {oracle.label(x)} found within {budget} candidates",
                proven=False)
        if oracle.mul(d, y) == x:
            return y
    raise PreconditionError(f"{d} does not divide {oracle.label(x)}")


def _witnesses(oracle, x):
    candidates = list(oracle.below(x))
    doubles = [(y, oracle.mul(2, y)) for y in candidates]
    triples = [(z, oracle.mul(3, z)) for z in candidates]
    for y, y2 in doubles:
        for z, z3 in triples:
            if oracle.add(y2, z3) == x:
                yield y, z


def _expandable(oracle, e, rounds, memo):
    """First witness (y, z) of e whose halves survive ``rounds - 1`` more rounds."""
    key = (e, rounds)
    if key not in memo:
        memo[key] = None
        if rounds == 0:
            memo[key] = ()
        else:
            for y, z in _witnesses(oracle, e):
                if (_expandable(oracle, y, rounds - 1, memo) is not None
                        and _expandable(oracle, z, rounds - 1, memo) is not None):
                    memo[key] = (y, z)
                    break
    return memo[key]


def expand_degree2(oracle, x, rounds):
    """Expand x by ``rounds`` layers of x = 2y + 3z.

    Returns (y_0, ..., y_rounds) with x = sum_l 2^(rounds-l) 3^l y_l.  Each
    round splits every current leaf left to right, using the first witness
    that can itself be expanded as far as still needed; the leaves carrying
    the same coefficient are then summed.
    """
    memo = {}
    if _expandable(oracle, x, rounds, memo) is None:
        raise NotWeaklyDivisible(oracle.label(x))
    leaves = [(0, x)]  # (number of factors 3 so far, element)
    for left in range(rounds, 0, -1):
        nxt = []
        for threes, e in leaves:
            y, z = _expandable(oracle, e, left, memo)
            nxt.append((threes, y))
            nxt.append((threes + 1, z))
        leaves = nxt
    ys = [oracle.zero] * (rounds + 1)
    for threes, e in leaves:
        ys[threes] = oracle.add(ys[threes], e)
    return ys


def search_decomposition(oracle, x, targets, budget=DEFAULT_SEARCH_BUDGET):
    """Exhaustive search for parts with x = sum n_j x_j, first in enumeration
    order of (x_1, ..., x_r); None if there is none."""
    pool = list(oracle.below(x))
    nodes = 0

    def dfs(j, acc):
        nonlocal nodes
        if j == len(targets):
            return [] if acc == x else None
        for p in pool:
            nodes += 1
            if nodes > budget:
                raise PreconditionError(
                    f"decomposition search exceeded {budget} nodes", proven=False)
            s = oracle.add(acc, oracle.mul(targets[j], p))
            if not oracle.leq(s, x):
                continue
            rest = dfs(j + 1, s)
            if rest is not None:
                return [p] + rest
        return None

    return dfs(0, oracle.zero)


def weak_divide(oracle, x, targets, budget=DEFAULT_SEARCH_BUDGET):
    """Decompose x = sum n_j x_j for the given targets.

    The constructive route divides by the gcd and expands x through enough
    degree-2 layers that every coefficient becomes representable.  When
    the expansion is not available below x an exhaustive search decides.
    """
    targets = _check_gens(targets)
    x = oracle.check(x)
    try:
        return _constructive_divide(oracle, x, targets, budget)
    except (NotWeaklyDivisible, PreconditionError):
        pass
    parts = search_decomposition(oracle, x, targets, budget)
    if parts is not None:
        return DivisibilityCertificate(x, targets, parts).verify(oracle)
    if x != oracle.zero and degree2_witness(oracle, x) is None:
        raise NotWeaklyDivisible(oracle.label(x))
    raise PreconditionError(f"{oracle.label(x)} admits no decomposition with targets {targets}")


def _constructive_divide(oracle, x, targets, budget):
    d = reduce(gcd, targets)
    y = _divide_by(oracle, x, d, budget)
    reduced = tuple(n // d for n in targets)
    m0 = frobenius_bound(reduced)
    k = 0
    while 2 ** k < m0:
        k += 1
    ys = expand_degree2(oracle, y, k)
    parts = [oracle.zero] * len(targets)
    for l, yl in enumerate(ys):
        coeffs = represent(reduced, 2 ** (k - l) * 3 ** l)
        for j, c in enumerate(coeffs):
            if c:
                parts[j] = oracle.add(parts[j], oracle.mul(c, yl))
    return DivisibilityCertificate(x, targets, parts).verify(oracle)


def promote_divisibility(oracle, x, y, certificate, k_bound=64):
    """Carry a certificate at y over to x, for y <= x with x proportional to y.

    Each round peels one layer off u = x - y using refinement against the
    certificate's parts.  Every part is split in two, one share gaining a
    unit of coefficient; shares with equal coefficients are then summed, so
    no coefficient ever drops.
    """
    if certificate.x != y:
        raise DomainError("certificate is not for y")
    certificate.verify(oracle)
    u = oracle.difference(y, x)
    if u is None:
        raise PreconditionError(f"{oracle.label(y)} is not below {oracle.label(x)}")
    targets, parts = list(certificate.targets), list(certificate.parts)
    whole = oracle.total(parts)
    k = oracle.decide_propto(u, whole)
    if k is None:
        raise PreconditionError(f"{oracle.label(x)} is not proportional to {oracle.label(y)}")
    if k > k_bound:
        raise BudgetError(f"promotion needs {k} rounds, bound is {k_bound}")
    if k == 0:
        return DivisibilityCertificate(x, targets, parts).verify(oracle)

    # u + w = k * (sum of parts)
    w = oracle.difference(u, oracle.mul(k, whole))
    if w is None:
        raise InvariantError("no complement for u below k times the parts")
    cur_y = y
    for rounds_left in range(k, 0, -1):
        r = len(parts)
        cols = [p for p in parts for _ in range(rounds_left)]
        shares_u, shares_w = oracle.refine_matrix([u, w], cols)
        # column (j, i) sits at index j*rounds_left + i
        first = [shares_u[j * rounds_left] for j in range(r)]
        comp = [shares_w[j * rounds_left] for j in range(r)]
        for j in range(r):
            if oracle.add(first[j], comp[j]) != parts[j]:
                raise InvariantError("refinement share does not split a part")
        cur_y = oracle.add(cur_y, oracle.total(first))
        u = oracle.total(shares_u[j * rounds_left + i]
                         for j in range(r) for i in range(1, rounds_left))
        w = oracle.total(shares_w[j * rounds_left + i]
                         for j in range(r) for i in range(1, rounds_left))
        targets, parts = _merge_by_target(oracle, [n + 1 for n in targets] + targets,
                                          first + comp)
        if oracle.total(oracle.mul(n, p) for n, p in zip(targets, parts)) != cur_y:
            raise InvariantError("promoted decomposition does not add up")
        if oracle.add(cur_y, u) != x:
            raise InvariantError("x = y' + u' failed")
    if u != oracle.zero:
        raise InvariantError("remainder did not vanish")
    return DivisibilityCertificate(x, targets, parts).verify(oracle)


def _merge_by_target(oracle, targets, parts):
    # n*p + n*q = n*(p+q): keeps the part count linear in the number of rounds
    order, merged = [], {}
    for n, p in zip(targets, parts):
        if n not in merged:
            order.append(n)
            merged[n] = p
        else:
            merged[n] = oracle.add(merged[n], p)
    return order, [merged[n] for n in order]


def is_weakly_divisible_degree(oracle, x, n, budget=DEFAULT_SEARCH_BUDGET):
    """Brute-force decision of weak divisibility of degree n at x.

    x qualifies iff it lies in the submonoid generated by all m*z with
    m >= n; only elements below x can take part.
    """
    if n < 1:
        raise DomainError("degree must be positive")
    pool = list(oracle.below(x))
    if len(pool) > budget:
        raise BudgetError(f"{len(pool)} elements below {oracle.label(x)} exceed the budget")
    pool_set = set(pool)
    gens = set()
    for z in pool:
        # multiples of z only grow, and on a finite carrier they cycle
        seen = set()
        m = n
        v = oracle.mul(m, z)
        while v in pool_set and v not in seen:
            seen.add(v)
            m += 1
            v = oracle.mul(m, z)
        gens |= seen
    reach = {oracle.zero}
    frontier = [oracle.zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = oracle.add(a, g)
                if b in pool_set and b not in reach:
                    reach.add(b)
                    nxt.append(b)
        frontier = nxt
    return x in reach
