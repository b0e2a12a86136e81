"""Simplicial monoids (Z+)^r, their elements, and morphisms between them.

Elements are plain tuples of nonnegative Python ints.  Index sets are
frozensets of 0-based basis positions.  Morphisms are stored by the images
of the canonical basis (column-major), so ``f.columns[i] == f(e_i)``.
"""

from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError

Element = tuple


def _check_rank(x, y):
    if len(x) != len(y):
        raise DomainError(f"rank mismatch: {len(x)} vs {len(y)}")


def zero(rank):
    return (0,) * rank


def unit(rank, i):
    if not 0 <= i < rank:
        raise DomainError(f"basis index {i} out of range for rank {rank}")
    return tuple(1 if k == i else 0 for k in range(rank))


def add(x, y):
    _check_rank(x, y)
    return tuple(a + b for a, b in zip(x, y))


def scale(n, x):
    return tuple(n * a for a in x)


def leq(x, y):
    """Algebraic order of (Z+)^r, which is the coordinatewise order."""
    _check_rank(x, y)
    return all(a <= b for a, b in zip(x, y))


def support(x):
    return frozenset(i for i, a in enumerate(x) if a)


def support_mask(x):
    mask = 0
    for i, a in enumerate(x):
        if a:
            mask |= 1 << i
    return mask


def propto(x, y):
    """Least n >= 0 with x <= n*y, or None when x is not in the ideal of y."""
    _check_rank(x, y)
    n = 0
    for a, b in zip(x, y):
        if a == 0:
            continue
        if b == 0:
            return None
        n = max(n, -(-a // b))
    return n


@dataclass(frozen=True)
class SimplicialMonoid:
    rank: int

    def __post_init__(self):
        if self.rank < 0:
            raise DomainError("rank must be nonnegative")

    @property
    def zero(self):
        return zero(self.rank)

    def basis(self, i):
        return unit(self.rank, i)

    def basis_sum(self, indices):
        return basis_sum(self, indices)

    @property
    def top(self):
        """The sum of all basis elements."""
        return (1,) * self.rank


def basis_sum(m, indices):
    """e_I: the 0/1 vector with ones exactly at ``indices``."""
    indices = frozenset(indices)
    for i in indices:
        if not 0 <= i < m.rank:
            raise DomainError(f"basis index {i} out of range for rank {m.rank}")
    return tuple(1 if k in indices else 0 for k in range(m.rank))


@dataclass(frozen=True)
class Morphism:
    source_rank: int
    target_rank: int
    columns: tuple

    def __post_init__(self):
        cols = tuple(tuple(c) for c in self.columns)
        object.__setattr__(self, "columns", cols)
        if len(cols) != self.source_rank:
            raise DomainError(
                f"morphism needs {self.source_rank} columns, got {len(cols)}")
        for c in cols:
            if len(c) != self.target_rank:
                raise DomainError("column length differs from target rank")
            if any(a < 0 for a in c):
                raise DomainError("morphism entries must be nonnegative")

    @classmethod
    def from_columns(cls, target_rank, columns):
        columns = tuple(tuple(c) for c in columns)
        return cls(len(columns), target_rank, columns)

    @classmethod
    def identity(cls, rank):
        return cls(rank, rank, tuple(unit(rank, i) for i in range(rank)))

    @classmethod
    def zero_map(cls, source_rank, target_rank):
        return cls(source_rank, target_rank, (zero(target_rank),) * source_rank)

    def apply(self, x):
        if len(x) != self.source_rank:
            raise DomainError(
                f"element of rank {len(x)} applied to morphism from rank {self.source_rank}")
        out = [0] * self.target_rank
        for a, col in zip(x, self.columns):
            if a:
                for k, c in enumerate(col):
                    if c:
                        out[k] += a * c
        return tuple(out)

    __call__ = apply

    def then(self, g):
        """g after self."""
        return compose(g, self)

    def support_masks(self):
        return tuple(support_mask(c) for c in self.columns)


def compose(g, f):
    """g o f, defined basiswise by (g o f)(e_i) = g(f(e_i))."""
    if f.target_rank != g.source_rank:
        raise DomainError(
            f"cannot compose: f lands in rank {f.target_rank}, g starts at rank {g.source_rank}")
    return Morphism(f.source_rank, g.target_rank, tuple(g.apply(c) for c in f.columns))


def direct_sum(m1, m2):
    """External direct sum with its two injections; bases are concatenated."""
    m = SimplicialMonoid(m1.rank + m2.rank)
    inj1 = Morphism(m1.rank, m.rank, tuple(unit(m.rank, i) for i in range(m1.rank)))
    inj2 = Morphism(m2.rank, m.rank, tuple(unit(m.rank, m1.rank + j) for j in range(m2.rank)))
    return m, inj1, inj2


def subsets(r):
    """All index sets of {0..r-1}, by size and then lexicographically."""
    for size in range(r + 1):
        for c in combinations(range(r), size):
            yield frozenset(c)


def mask_of(indices):
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out
