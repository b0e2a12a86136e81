"""Target monoids M: an oracle interface plus concrete finite and free instances.

Every oracle fixes an enumeration x_0, x_1, ... of its carrier.  Witnesses
that the mathematics leaves non-unique (refinement matrices, Riesz
decompositions, differences) are chosen lexicographically first with
respect to that enumeration, so that everything built on top is
reproducible.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count, islice, product

from . import core
from .errors import DomainError, InvariantError, PreconditionError


class MonoidOracle(ABC):
    """A countable conical commutative monoid with decidable operations."""

    kind = None
    size = None  # carrier size, None when infinite

    @property
    @abstractmethod
    def zero(self):
        ...

    @abstractmethod
    def add(self, a, b):
        ...

    @abstractmethod
    def iter_elements(self):
        """The fixed enumeration x_0, x_1, ... of the carrier."""

    @abstractmethod
    def below(self, x):
        """All c with c <= x, in enumeration order."""

    @abstractmethod
    def check(self, a):
        """Return ``a`` normalised, or raise DomainError."""

    @abstractmethod
    def encode(self, a):
        ...

    @abstractmethod
    def decode(self, value):
        ...

    @abstractmethod
    def to_spec(self):
        """The specification-file dictionary describing this oracle."""

    def eq(self, a, b):
        return a == b

    def label(self, a):
        return str(self.encode(a))

    def total(self, elems):
        s = self.zero
        for a in elems:
            s = self.add(s, a)
        return s

    def mul(self, n, a):
        if n < 0:
            raise DomainError("multiplier must be nonnegative")
        s = self.zero
        # double-and-add keeps this cheap for large n
        while n:
            if n & 1:
                s = self.add(s, a)
            a = self.add(a, a)
            n >>= 1
        return s

    def enumerate(self, k):
        return list(islice(self.iter_elements(), k))

    def element(self, i):
        """x_i, or None once a finite enumeration is exhausted."""
        if self.size is not None and i >= self.size:
            return None
        return next(islice(self.iter_elements(), i, None))

    def difference(self, a, b):
        """The first c with a + c = b, or None when a is not below b."""
        for c in self.below(b):
            if self.add(a, c) == b:
                return c
        return None

    def leq(self, a, b):
        return self.difference(a, b) is not None

    def is_zero(self, a):
        return a == self.zero

    @abstractmethod
    def decide_propto(self, a, b):
        """Least n >= 0 with a <= n*b, or None."""

    def propto(self, a, b):
        return self.decide_propto(a, b) is not None

    def refine(self, x1, x2, y1, y2):
        """A 2x2 matrix ((z11, z12), (z21, z22)) with rows summing to x1, x2
        and columns summing to y1, y2.

        Among all such matrices the one returned is first in the order that
        compares z12, then z21, then z11, then z22.
        """
        if self.add(x1, x2) != self.add(y1, y2):
            raise PreconditionError(
                f"refine needs x1+x2 = y1+y2, got {self.label(x1)}+{self.label(x2)} "
                f"vs {self.label(y1)}+{self.label(y2)}")
        z = self._refine(x1, x2, y1, y2)
        if z is None:
            raise InvariantError(
                f"no refinement witness for {self.label(x1)}+{self.label(x2)}"
                f" = {self.label(y1)}+{self.label(y2)}")
        return z

    def _refine(self, x1, x2, y1, y2):
        add = self.add
        cand12 = [c for c in self.below(x1) if self.leq(c, y2)]
        cand21 = [c for c in self.below(x2) if self.leq(c, y1)]
        for z12 in cand12:
            for z21 in cand21:
                for z11 in self.below(x1):
                    if add(z11, z12) != x1 or add(z11, z21) != y1:
                        continue
                    for z22 in self.below(x2):
                        if add(z21, z22) == x2 and add(z12, z22) == y2:
                            return ((z11, z12), (z21, z22))
        return None

    def refine_matrix(self, rows, cols):
        """Generalised refinement: a matrix with the given row and column sums.

        Built from binary refinements by peeling off one row at a time.
        """
        rows, cols = list(rows), list(cols)
        if self.total(rows) != self.total(cols):
            raise PreconditionError("row and column totals differ")
        if not rows:
            return []
        out = []
        for k in range(len(rows) - 1):
            first, cols = self._split_columns(rows[k], self.total(rows[k + 1:]), cols)
            out.append(first)
        out.append(list(cols))
        return out

    def _split_columns(self, a1, a2, cols):
        # columns c_j = s1_j + s2_j with sum(s1) = a1 and sum(s2) = a2
        s1, s2 = [], []
        for j in range(len(cols) - 1):
            (z11, z12), (z21, z22) = self.refine(a1, a2, cols[j], self.total(cols[j + 1:]))
            s1.append(z11)
            s2.append(z21)
            a1, a2 = z12, z22
        if cols:
            s1.append(a1)
            s2.append(a2)
        return s1, s2

    def riesz_decompose(self, x, y, n):
        """(y_0, ..., y_n) with sum_j j*y_j = x and sum_j y_j = y.

        Requires x <= n*y.  The tuple returned is lexicographically first.
        """
        if n < 0 or not self.leq(x, self.mul(n, y)):
            raise PreconditionError(f"{self.label(x)} is not below {n}*{self.label(y)}")
        out = self._riesz(x, y, n)
        if out is None:
            raise InvariantError(
                f"no Riesz decomposition of {self.label(x)} <= {n}*{self.label(y)}")
        return tuple(out)

    def _riesz(self, x, y, n):
        # depth-first in enumeration order, memoising dead partial states
        # (j, sum of y_0..y_{j-1}, weighted sum); finite carriers only
        dead = set()
        add = self.add
        elems = self.below(y)

        def search(j, s, t):
            if j == n + 1:
                return [] if (s == y and t == x) else None
            if (j, s, t) in dead:
                return None
            for c in elems:
                s2 = add(s, c)
                if not self.leq(s2, y):
                    continue
                t2 = add(t, self.mul(j, c))
                if not self.leq(t2, x):
                    continue
                rest = search(j + 1, s2, t2)
                if rest is not None:
                    return [c] + rest
            dead.add((j, s, t))
            return None

        return search(0, self.zero, self.zero)

    def span(self, gens):
        """The submonoid generated by ``gens`` (finite carriers only)."""
        if self.size is None:
            raise DomainError("span is only enumerable for finite oracles")
        seen = {self.zero}
        frontier = [self.zero]
        gens = list(dict.fromkeys(gens))
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.add(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    def in_span(self, x, gens):
        return x in self.span(gens)

    def generates(self, gens):
        return len(self.span(gens)) == self.size


class FiniteMonoid(MonoidOracle):
    """A finite monoid given by its addition (Cayley) table.

    Elements are the row indices 0..size-1, enumerated in that order.  Only
    the shape of the table is validated here; the monoid axioms are checked
    by :func:`verify_axioms`.
    """

    kind = "cayley"

    def __init__(self, table, names=None, zero=None):
        table = [list(row) for row in table]
        size = len(table)
        if size == 0:
            raise DomainError("empty carrier")
        for row in table:
            if len(row) != size:
                raise DomainError("addition table must be square")
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < size:
                    raise DomainError(f"table entry {v!r} is not an element index")
        if names is None:
            names = [str(i) for i in range(size)]
        names = [str(n) for n in names]
        if len(names) != size or len(set(names)) != size:
            raise DomainError("names must be distinct and match the table size")
        if zero is None:
            zero = self._find_neutral(table)
            if zero is None:
                raise DomainError("table has no neutral element")
        if not 0 <= zero < size:
            raise DomainError("zero index out of range")
        self.size = size
        self.table = tuple(tuple(row) for row in table)
        self.names = tuple(names)
        self._zero = zero

    @staticmethod
    def _find_neutral(table):
        n = len(table)
        for e in range(n):
            if all(table[e][a] == a and table[a][e] == a for a in range(n)):
                return e
        return None

    def __repr__(self):
        return f"{type(self).__name__}({list(self.names)})"

    @property
    def zero(self):
        return self._zero

    def add(self, a, b):
        return self.table[a][b]

    def iter_elements(self):
        return iter(range(self.size))

    def element(self, i):
        return i if 0 <= i < self.size else None

    @cached_property
    def _leq(self):
        rel = [[False] * self.size for _ in range(self.size)]
        for a in range(self.size):
            for c in range(self.size):
                rel[a][self.table[a][c]] = True
        return rel

    def leq(self, a, b):
        return self._leq[a][b]

    def below(self, x):
        return [c for c in range(self.size) if self._leq[c][x]]

    def difference(self, a, b):
        for c in range(self.size):
            if self.table[a][c] == b:
                return c
        return None

    @cached_property
    def _propto(self):
        out = [[None] * self.size for _ in range(self.size)]
        for b in range(self.size):
            multiple = self._zero
            for n in range(self.size + 1):
                for a in range(self.size):
                    if out[a][b] is None and self._leq[a][multiple]:
                        out[a][b] = n
                multiple = self.table[multiple][b]
        return out

    def decide_propto(self, a, b):
        # the multiples n*b repeat after at most `size` steps
        return self._propto[a][b]

    @cached_property
    def _refine_cache(self):
        return {}

    def refine(self, x1, x2, y1, y2):
        key = (x1, x2, y1, y2)
        cache = self._refine_cache
        if key not in cache:
            cache[key] = super().refine(x1, x2, y1, y2)
        return cache[key]

    def check(self, a):
        if isinstance(a, bool) or not isinstance(a, int) or not 0 <= a < self.size:
            raise DomainError(f"{a!r} is not an element of {self!r}")
        return a

    def encode(self, a):
        return a

    def decode(self, value):
        if isinstance(value, str):
            if value in self.names:
                return self.names.index(value)
            raise DomainError(f"unknown element name {value!r}")
        return self.check(value)

    def label(self, a):
        return self.names[a]

    def to_spec(self):
        return {"kind": self.kind, "names": list(self.names),
                "table": [list(r) for r in self.table], "zero": self._zero}

    def is_idempotent(self):
        return all(self.table[a][a] == a for a in range(self.size))


class SemilatticeMonoid(FiniteMonoid):
    """A finite join-semilattice with least element, written additively."""

    kind = "semilattice"


def _riesz_1d(x, y, n):
    # lexicographically least (y_0..y_n) over Z+ with sum y_j = y,
    # sum j*y_j = x; feasible whenever x <= n*y
    out = []
    c, s = y, x
    for j in range(n):
        v = max(0, (j + 1) * c - s)
        out.append(v)
        c -= v
        s -= j * v
    if s != n * c:
        raise InvariantError("Riesz decomposition over Z+ failed")
    out.append(c)
    return out


def _refine_1d(x1, x2, y1, y2):
    z11 = min(x1, y1)
    z12 = x1 - z11
    z21 = y1 - z11
    return z11, z12, z21, x2 - z21


def _span_1d(gens, limit):
    reach = [False] * (limit + 1)
    reach[0] = True
    gens = sorted({g for g in gens if 0 < g <= limit})
    for m in range(1, limit + 1):
        reach[m] = any(reach[m - g] for g in gens if g <= m)
    return reach


class NaturalsOracle(MonoidOracle):
    """Z+ = {0, 1, 2, ...} enumerated in its natural order."""

    kind = "naturals"

    def __repr__(self):
        return "NaturalsOracle()"

    @property
    def zero(self):
        return 0

    def add(self, a, b):
        return a + b

    def mul(self, n, a):
        if n < 0:
            raise DomainError("multiplier must be nonnegative")
        return n * a

    def iter_elements(self):
        return count()

    def element(self, i):
        return i

    def below(self, x):
        return range(x + 1)

    def difference(self, a, b):
        return b - a if a <= b else None

    def leq(self, a, b):
        return a <= b

    def decide_propto(self, a, b):
        if a == 0:
            return 0
        if b == 0:
            return None
        return -(-a // b)

    def _refine(self, x1, x2, y1, y2):
        z11, z12, z21, z22 = _refine_1d(x1, x2, y1, y2)
        return ((z11, z12), (z21, z22))

    def _riesz(self, x, y, n):
        return _riesz_1d(x, y, n)

    def in_span(self, x, gens):
        return _span_1d(gens, x)[x]

    def generates(self, gens):
        return 1 in set(gens)

    def check(self, a):
        if isinstance(a, bool) or not isinstance(a, int) or a < 0:
            raise DomainError(f"{a!r} is not a natural number")
        return a

    def encode(self, a):
        return a

    def decode(self, value):
        return self.check(value)

    def to_spec(self):
        return {"kind": self.kind}


class FreeOracle(MonoidOracle):
    """The simplicial monoid (Z+)^r viewed as a target monoid.

    The enumeration is by total degree, then lexicographic.
    """

    kind = "simplicial"

    def __init__(self, rank):
        if rank < 0:
            raise DomainError("rank must be nonnegative")
        self.rank = rank
        if rank == 0:
            self.size = 1

    def __repr__(self):
        return f"FreeOracle({self.rank})"

    @property
    def zero(self):
        return core.zero(self.rank)

    def add(self, a, b):
        return core.add(a, b)

    def mul(self, n, a):
        if n < 0:
            raise DomainError("multiplier must be nonnegative")
        return core.scale(n, a)

    def iter_elements(self):
        if self.rank == 0:
            yield ()
            return
        for d in count():
            yield from _compositions(d, self.rank)

    def below(self, x):
        boxes = product(*(range(a + 1) for a in x))
        return sorted(boxes, key=lambda v: (sum(v), v))

    def difference(self, a, b):
        if not core.leq(a, b):
            return None
        return tuple(q - p for p, q in zip(a, b))

    def leq(self, a, b):
        return core.leq(a, b)

    def decide_propto(self, a, b):
        return core.propto(a, b)

    def _refine(self, x1, x2, y1, y2):
        parts = [_refine_1d(*c) for c in zip(x1, x2, y1, y2)]
        z11, z12, z21, z22 = (tuple(p[k] for p in parts) for k in range(4))
        return ((z11, z12), (z21, z22))

    def _riesz(self, x, y, n):
        cols = [_riesz_1d(a, b, n) for a, b in zip(x, y)]
        return [tuple(c[j] for c in cols) for j in range(n + 1)]

    def in_span(self, x, gens):
        gens = [g for g in dict.fromkeys(gens) if any(g) and core.leq(g, x)]
        seen = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = core.add(a, g)
                    if b not in seen and core.leq(b, x):
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return x in seen

    def generates(self, gens):
        gens = set(gens)
        return all(core.unit(self.rank, i) in gens for i in range(self.rank))

    def check(self, a):
        a = tuple(a)
        if len(a) != self.rank or any(
                isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in a):
            raise DomainError(f"{a!r} is not an element of (Z+)^{self.rank}")
        return a

    def encode(self, a):
        return list(a)

    def decode(self, value):
        if not isinstance(value, (list, tuple)):
            raise DomainError(f"{value!r} is not a coordinate list")
        return self.check(value)

    def label(self, a):
        return "(" + ",".join(map(str, a)) + ")"

    def to_spec(self):
        return {"kind": self.kind, "rank": self.rank}


def _compositions(total, parts):
    # weak compositions of `total` into `parts` pieces, lexicographically
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class AxiomReport:
    """Outcome of an exhaustive axiom check; violations are data."""

    oracle: MonoidOracle
    violations: list = field(default_factory=list)
    checked: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        out = [f"{name}: {n} cases checked" for name, n in self.checked.items()]
        out += self.violations
        out.append("all axioms hold" if self.ok else f"{len(self.violations)} violation(s)")
        return out


def _refinement_witness(m, x1, x2, y1, y2):
    n = m.size
    t = m.table
    for z11 in range(n):
        for z12 in range(n):
            if t[z11][z12] != x1:
                continue
            for z21 in range(n):
                if t[z11][z21] != y1:
                    continue
                for z22 in range(n):
                    if t[z21][z22] == x2 and t[z12][z22] == y2:
                        return (z11, z12, z21, z22)
    return None


def verify_axioms(m):
    """Exhaustively check the conical refinement monoid axioms on ``m``.

    Free oracles satisfy them by construction and are reported as such.
    """
    report = AxiomReport(m)
    if not isinstance(m, FiniteMonoid):
        report.checked["free commutative monoid (holds by construction)"] = 0
        return report
    n, t, z, name = m.size, m.table, m.zero, m.label
    v = report.violations

    for a in range(n):
        for b in range(a + 1, n):
            if t[a][b] != t[b][a]:
                v.append(f"commutativity violated: {name(a)}+{name(b)}={name(t[a][b])}"
                         f" but {name(b)}+{name(a)}={name(t[b][a])}")
    report.checked["commutativity"] = n * (n - 1) // 2

    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs, rhs = t[t[a][b]][c], t[a][t[b][c]]
                if lhs != rhs:
                    v.append(f"associativity violated: ({name(a)}+{name(b)})+{name(c)}={name(lhs)}"
                             f" but {name(a)}+({name(b)}+{name(c)})={name(rhs)}")
    report.checked["associativity"] = n ** 3

    for a in range(n):
        if t[z][a] != a or t[a][z] != a:
            v.append(f"unit violated: {name(z)}+{name(a)}={name(t[z][a])}")
    report.checked["unit"] = n

    for a in range(n):
        for b in range(a, n):
            if t[a][b] == z and (a != z or b != z):
                v.append(f"conicality violated: {name(a)}+{name(b)}={name(z)}")
    report.checked["conicality"] = n * (n + 1) // 2

    if isinstance(m, SemilatticeMonoid):
        for a in range(n):
            if t[a][a] != a:
                v.append(f"idempotence violated: {name(a)}+{name(a)}={name(t[a][a])}")
        report.checked["idempotence"] = n

    quads = 0
    for x1, x2, y1, y2 in product(range(n), repeat=4):
        if t[x1][x2] != t[y1][y2]:
            continue
        quads += 1
        if _refinement_witness(m, x1, x2, y1, y2) is None:
            v.append(f"refinement violated: {name(x1)}+{name(x2)}={name(y1)}+{name(y2)}"
                     " admits no refinement matrix")
    report.checked["refinement"] = quads
    return report
