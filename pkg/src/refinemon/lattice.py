"""Order-ideals, ideal lattices, the ideal-lattice isomorphism criterion,
and maximal semilattice quotients.

Monoids accepted here are either simplicial (a :class:`SimplicialMonoid`,
or a free oracle, whose ideals are spans of basis subsets) or finite
oracles (whose ideals are explicit carrier subsets).
"""

from dataclasses import dataclass, field
from itertools import permutations

from . import core
from .core import SimplicialMonoid
from .errors import BudgetError, DomainError, InsufficientDepth, InvariantError
from .oracles import FiniteMonoid, FreeOracle, NaturalsOracle, SemilatticeMonoid
from .resolution import ColimitElement, colimit_propto, image

MAX_ENUM = 20


def simplicial_rank(m):
    """Rank when ``m`` is simplicial or free, else None."""
    if isinstance(m, SimplicialMonoid):
        return m.rank
    if isinstance(m, NaturalsOracle):
        return 1
    if isinstance(m, FreeOracle):
        return m.rank
    return None


def _finite(m):
    if not isinstance(m, FiniteMonoid):
        raise DomainError(f"{m!r} is neither simplicial nor a finite oracle")
    return m


@dataclass(frozen=True)
class OrderIdeal:
    """Basis indices spanning the ideal (simplicial) or its carrier (finite)."""

    members: frozenset
    simplicial: bool = False

    def __le__(self, other):
        return self.members <= other.members

    def key(self):
        return (len(self.members), sorted(self.members))


@dataclass
class IdealLattice:
    ideals: list

    def __len__(self):
        return len(self.ideals)

    def index(self, ideal):
        return self.ideals.index(ideal)

    def hasse_edges(self):
        """Covering pairs (i, j): ideal i strictly below ideal j, nothing between."""
        n = len(self.ideals)
        sets = [I.members for I in self.ideals]
        edges = []
        for i in range(n):
            for j in range(n):
                if i == j or not sets[i] < sets[j]:
                    continue
                if not any(sets[i] < sets[k] < sets[j] for k in range(n)):
                    edges.append((i, j))
        return edges

    def meet(self, a, b):
        return OrderIdeal(a.members & b.members, a.simplicial)


def ideal_generated(m, elements):
    """The smallest order-ideal containing ``elements``."""
    elements = list(elements)
    r = simplicial_rank(m)
    if r is not None:
        supp = frozenset()
        for x in elements:
            if isinstance(m, NaturalsOracle):
                x = (x,)
            if len(x) != r:
                raise DomainError("element rank mismatch")
            supp |= core.support(x)
        return OrderIdeal(supp, True)
    m = _finite(m)
    s = m.total(elements)
    return OrderIdeal(frozenset(x for x in range(m.size) if m.propto(x, s)))


def is_order_ideal(m, members):
    m = _finite(m)
    if m.zero not in members:
        return False
    for x in members:
        if any(c not in members for c in m.below(x)):
            return False
        if any(m.add(x, y) not in members for y in members):
            return False
    return True


def enumerate_ideals(m):
    r = simplicial_rank(m)
    if r is not None:
        if r > MAX_ENUM:
            raise BudgetError(f"rank {r} too large to enumerate 2^{r} ideals")
        ideals = [OrderIdeal(S, True) for S in core.subsets(r)]
        return IdealLattice(ideals)
    m = _finite(m)
    if m.size > MAX_ENUM:
        raise BudgetError(f"carrier of size {m.size} too large to enumerate ideals")
    found = []
    for mask in range(1 << m.size):
        members = frozenset(core.indices_of(mask))
        if is_order_ideal(m, members):
            found.append(OrderIdeal(members))
    found.sort(key=OrderIdeal.key)
    return IdealLattice(found)


def _target_ideal_masks(oracle, alpha):
    """For each ideal T of the target, the basis directions i with alpha(e_i) in T."""
    lattice = enumerate_ideals(oracle)
    out = []
    for T in lattice.ideals:
        mask = 0
        for i, a in enumerate(alpha):
            if T.simplicial:
                a = (a,) if isinstance(oracle, NaturalsOracle) else a
                inside = core.support(a) <= T.members
            else:
                inside = a in T.members
            if inside:
                mask |= 1 << i
        out.append(mask)
    return lattice, out


def saturated_masks(beta):
    """Index sets S closed under the preorder that beta induces on basis elements.

    With beta the identity these are all subsets.
    """
    colmasks = beta.support_masks()
    out = []
    for S in core.subsets(beta.source_rank):
        smask = core.mask_of(S)
        cover = 0
        for i in S:
            cover |= colmasks[i]
        closure = 0
        for i, c in enumerate(colmasks):
            if c & ~cover == 0:
                closure |= 1 << i
        if closure == smask:
            out.append(smask)
    return out


@dataclass
class PreimageCheck:
    ok: bool
    target_size: int
    source_size: int
    problems: list = field(default_factory=list)


def verify_preimage_bijection(oracle, alpha, beta=None):
    """Check that I -> alpha^{-1}(I) is an order-isomorphism from L(M) onto the
    ideals of the stage that are saturated with respect to ``beta``."""
    alpha = tuple(alpha)
    r = len(alpha)
    if r > MAX_ENUM:
        raise BudgetError(f"rank {r} too large to enumerate ideals")
    beta = beta if beta is not None else core.Morphism.identity(r)
    lattice, pre = _target_ideal_masks(oracle, alpha)
    source = saturated_masks(beta)
    problems = []
    if len(set(pre)) != len(pre):
        problems.append("preimage map is not injective")
    if set(pre) != set(source):
        problems.append("preimage map does not hit exactly the saturated ideals")
    sets = [T.members for T in lattice.ideals]
    for a in range(len(sets)):
        for b in range(len(sets)):
            if (sets[a] <= sets[b]) != (pre[a] & ~pre[b] == 0):
                problems.append(f"order not preserved between ideals {a} and {b}")
    return PreimageCheck(not problems, len(sets), len(source), problems)


@dataclass
class IsoCertificate:
    holds: bool
    surjective: bool
    pairs_checked: int = 0
    violations: list = field(default_factory=list)
    bijection: PreimageCheck = None
    stage: int = None

    def __bool__(self):
        return self.holds


def _reflection_violations(oracle, alpha):
    r = len(alpha)
    vals = [image(oracle, alpha, core.basis_sum(SimplicialMonoid(r), core.indices_of(m)))
            for m in range(1 << r)]
    cache = {}
    violations, checked = [], 0
    for J in range(1 << r):
        for I in range(1 << r):
            checked += 1
            key = (vals[J], vals[I])
            if key not in cache:
                cache[key] = oracle.propto(*key)
            if cache[key] and J & ~I:
                violations.append((core.indices_of(J), core.indices_of(I)))
    return checked, violations


def _enumerable(oracle):
    return isinstance(oracle, FiniteMonoid) or simplicial_rank(oracle) is not None


def check_lattice_iso_criterion(oracle, alpha=None, tower=None):
    """Surjectivity plus reflection of proportionality, for a map out of a
    simplicial monoid (basis images ``alpha``) or out of a tower's colimit.

    When the criterion holds and both lattices are enumerable the preimage
    map on ideal lattices is additionally verified to be an isomorphism.
    """
    if (alpha is None) == (tower is None):
        raise DomainError("give exactly one of alpha or tower")
    if tower is not None:
        return _tower_criterion(tower)
    alpha = tuple(alpha)
    surjective = oracle.generates(alpha)
    checked, violations = _reflection_violations(oracle, alpha)
    cert = IsoCertificate(surjective and not violations, surjective, checked, violations)
    if cert.holds and _enumerable(oracle):
        cert.bijection = verify_preimage_bijection(oracle, alpha)
        if not cert.bijection.ok:
            raise InvariantError("criterion holds but the preimage map is not a bijection")
    return cert


def _tower_criterion(t):
    oracle = t.oracle
    last = len(t.stages) - 1
    surjective_at = None
    for j, st in enumerate(t.stages):
        if oracle.generates(st.alpha):
            surjective_at = j
            break
    surjective = surjective_at is not None
    cert = IsoCertificate(False, surjective)
    for j in range(last):
        st = t.stages[j]
        r = st.rank
        ms = SimplicialMonoid(r)
        elems = [ColimitElement(j, ms.basis_sum(core.indices_of(m))) for m in range(1 << r)]
        for a in elems:
            for b in elems:
                cert.pairs_checked += 1
                try:
                    colimit_propto(t, a, b)
                except (InvariantError, InsufficientDepth) as exc:
                    cert.violations.append((j, a.rep, b.rep, str(exc)))
    cert.holds = surjective and not cert.violations
    if cert.holds and _enumerable(oracle) and surjective_at < last:
        st = t.stages[surjective_at]
        cert.stage = surjective_at
        cert.bijection = verify_preimage_bijection(oracle, st.alpha, st.beta)
        if not cert.bijection.ok:
            raise InvariantError("criterion holds but the preimage map is not a bijection")
    return cert


@dataclass
class Nabla:
    """A maximal semilattice quotient: the semilattice and the quotient map."""

    semilattice: SemilatticeMonoid
    classify: object  # element -> class index
    classes: list     # per class: sorted members (finite) or support (free)

    @property
    def size(self):
        return self.semilattice.size


def nabla(m):
    r = simplicial_rank(m)
    if r is not None:
        if r > MAX_ENUM:
            raise BudgetError(f"rank {r} too large for an explicit quotient")
        supports = [core.mask_of(S) for S in core.subsets(r)]
        pos = {s: k for k, s in enumerate(supports)}
        table = [[pos[a | b] for b in supports] for a in supports]
        names = ["{" + ",".join(map(str, core.indices_of(s))) + "}" for s in supports]
        if isinstance(m, NaturalsOracle):
            return Nabla(SemilatticeMonoid(table, ["[0]", "[1]"], 0),
                         lambda x: 0 if x == 0 else 1, [[], [0]])
        return Nabla(SemilatticeMonoid(table, names, 0),
                     lambda x: pos[core.support_mask(x)],
                     [core.indices_of(s) for s in supports])
    m = _finite(m)
    cls = [None] * m.size
    classes = []
    for x in range(m.size):
        if cls[x] is not None:
            continue
        members = [y for y in range(m.size) if m.propto(x, y) and m.propto(y, x)]
        for y in members:
            cls[y] = len(classes)
        classes.append(members)
    reps = [c[0] for c in classes]
    table = [[cls[m.add(a, b)] for b in reps] for a in reps]
    for a in range(m.size):
        for b in range(m.size):
            if cls[m.add(a, b)] != table[cls[a]][cls[b]]:
                raise InvariantError("asymptotic equivalence is not a congruence")
    names = ["[" + m.label(x) + "]" for x in reps]
    quotient = SemilatticeMonoid(table, names, cls[m.zero])
    return Nabla(quotient, lambda x: cls[x], classes)


def is_isomorphism(src, dst, mapping):
    """``mapping[i]`` is the image of element i of finite ``src`` in ``dst``."""
    n = src.size
    if n != dst.size or sorted(mapping) != list(range(n)):
        return False
    if mapping[src.zero] != dst.zero:
        return False
    return all(mapping[src.add(a, b)] == dst.add(mapping[a], mapping[b])
               for a in range(n) for b in range(n))


def find_isomorphism(a, b, limit=9):
    if a.size != b.size:
        return None
    if a.size > limit:
        raise BudgetError("carrier too large for brute-force isomorphism search")
    for perm in permutations(range(a.size)):
        if is_isomorphism(a, b, perm):
            return perm
    return None


@dataclass
class NablaTransfer:
    ok: bool
    stage: int
    size: int
    mapping: dict = field(default_factory=dict)  # support mask in the next stage -> class
    problems: list = field(default_factory=list)


def tower_nabla_transfer(t, j=None):
    """Check that [x] -> [alpha(x)] is an isomorphism from the maximal
    semilattice quotient of the colimit onto that of M.

    Elements of stage j are compared through their images in stage j+1,
    where proportionality already matches the colimit's.  Defaults to the
    first stage whose image is all of M.
    """
    oracle = t.oracle
    if j is None:
        j = next((k for k, st in enumerate(t.stages) if oracle.generates(st.alpha)), None)
        if j is None:
            raise InsufficientDepth("no stage maps onto M")
    if j + 1 >= len(t.stages):
        raise InsufficientDepth(f"stage {j + 1} not built")
    st = t.stages[j]
    quotient = nabla(oracle)
    colmasks = st.beta.support_masks()
    r = st.rank
    mapping, problems = {}, []
    for S in range(1 << r):
        key = 0
        for i in core.indices_of(S):
            key |= colmasks[i]
        value = quotient.classify(image(oracle, st.alpha, core.basis_sum(
            SimplicialMonoid(r), core.indices_of(S))))
        if mapping.setdefault(key, value) != value:
            problems.append(f"class of support {core.indices_of(key)} is not well defined")
    if len(set(mapping.values())) != len(mapping):
        problems.append("induced map is not injective")
    if set(mapping.values()) != set(range(quotient.size)):
        problems.append("induced map is not surjective")
    for a, ca in mapping.items():
        for b, cb in mapping.items():
            if mapping.get(a | b) != quotient.semilattice.add(ca, cb):
                problems.append("induced map is not additive")
    return NablaTransfer(not problems, j, len(mapping), mapping, problems)
