"""Congruences, quotients, Imaoka's amalgam, and bounded class checks.

Every verdict about a class is relative to the size bound it was computed
with: "holds up to bound" never means the property holds for the whole class.
"""
import json
from dataclasses import dataclass, field
from itertools import product

from .errors import (
    EmbeddingCollapsed,
    FormatError,
    NotCommutative,
    NotInverse,
    NotMatchingSubalgebras,
    SpecViolation,
)
from .inverse import InverseSemigroup, classify, order_spectrum, try_inverse
from .morphisms import Morphism, first_isomorphism, iter_morphisms, morphism_failure
from .tables import (
    adjoin_identity,
    direct_product,
    enumerate_subsemigroups,
    is_closed,
    is_commutative,
    make_table,
    subtable,
)


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True


@dataclass(frozen=True)
class Congruence:
    base: object
    partition: tuple

    def blocks(self):
        out = {}
        for x, b in enumerate(self.partition):
            out.setdefault(b, []).append(x)
        return [out[b] for b in sorted(out)]

    def related(self, a, b):
        return self.partition[a] == self.partition[b]


def congruence_closure(S, pairs):
    """Least congruence containing ``pairs``; each block is named by its least member."""
    op = S.op
    n = S.size
    uf = UnionFind(n)
    for a, b in pairs:
        uf.union(a, b)
    changed = True
    while changed:
        changed = False
        for a in range(n):
            r = uf.find(a)
            if r == a:
                continue
            for c in range(n):
                if uf.union(op[c][a], op[c][r]):
                    changed = True
                if uf.union(op[a][c], op[r][c]):
                    changed = True
    return Congruence(S, tuple(uf.find(x) for x in range(n)))


def is_congruence(S, partition):
    op = S.op
    n = S.size
    for a in range(n):
        for b in range(a + 1, n):
            if partition[a] != partition[b]:
                continue
            for c in range(n):
                if partition[op[c][a]] != partition[op[c][b]]:
                    return False
                if partition[op[a][c]] != partition[op[b][c]]:
                    return False
    return True


def quotient(S, c):
    """Table on the blocks (ordered by least member) and the projection."""
    reps = sorted(set(c.partition))
    index = {r: i for i, r in enumerate(reps)}
    proj = tuple(index[c.partition[x]] for x in range(S.size))
    rows = [[proj[S.op[a][b]] for b in reps] for a in reps]
    Q = make_table(rows)
    assert morphism_failure(S, Q, proj) is None
    return Q, Morphism(S, Q, proj)


@dataclass
class AmalgamResult:
    result: InverseSemigroup
    embed_left: Morphism
    embed_right: Morphism
    shared_image: frozenset
    w_size: int = 0


def _inverse(S):
    return S if isinstance(S, InverseSemigroup) else try_inverse(S)


def imaoka_amalgam(T, Tp, u_left, u_right):
    """Amalgamate commutative inverse ``T`` and ``Tp`` over ``u_left[i] ~ u_right[i]``.

    ``W = T^1 x Tp^1 - {(1,1)}`` is divided by the least congruence joining
    ``(u, 1)`` and ``(1, u')``. The two embeddings and the intersection of
    their images are checked rather than assumed.
    """
    T, Tp = _inverse(T), _inverse(Tp)
    for X in (T, Tp):
        if not is_commutative(X.table):
            raise NotCommutative()
    u_left, u_right = list(u_left), list(u_right)
    if not u_left or len(u_left) != len(u_right) or len(set(u_left)) != len(u_left):
        raise NotMatchingSubalgebras("generator lists")
    if len(set(u_right)) != len(u_right):
        raise NotMatchingSubalgebras("generator lists")
    if not is_closed(T.table, u_left, T.inv) or not is_closed(Tp.table, u_right, Tp.inv):
        raise NotMatchingSubalgebras("not inverse subsemigroups")
    match = dict(zip(u_left, u_right))
    for a in u_left:
        for b in u_left:
            if match[T.mul(a, b)] != Tp.mul(match[a], match[b]):
                raise NotMatchingSubalgebras(a, b)

    n, m = T.size, Tp.size
    T1, Tp1 = adjoin_identity(T.table), adjoin_identity(Tp.table)
    full = direct_product(T1, Tp1)
    # (1,1) is the last index of the product, so deleting it keeps all other indices
    W, _ = subtable(full, range(full.size - 1))

    def left(x):
        return x * (m + 1) + m

    def right(x):
        return n * (m + 1) + x

    cong = congruence_closure(W, [(left(u), right(match[u])) for u in u_left])
    Q, proj = quotient(W, cong)
    R = try_inverse(Q)
    emb_l = tuple(proj.map[left(x)] for x in range(n))
    emb_r = tuple(proj.map[right(x)] for x in range(m))
    if len(set(emb_l)) != n:
        raise EmbeddingCollapsed("left", _collision(emb_l))
    if len(set(emb_r)) != m:
        raise EmbeddingCollapsed("right", _collision(emb_r))
    shared = frozenset(emb_l[u] for u in u_left)
    if set(emb_l) & set(emb_r) != shared:
        raise EmbeddingCollapsed("intersection", sorted(set(emb_l) & set(emb_r) - shared))
    return AmalgamResult(
        R, Morphism(T.table, Q, emb_l), Morphism(Tp.table, Q, emb_r), shared, W.size
    )


def _collision(f):
    seen = {}
    for x, y in enumerate(f):
        if y in seen:
            return (seen[y], x)
        seen[y] = x
    return None


# class specifications

@dataclass(frozen=True)
class ClassSpec:
    require_commutative: bool = False
    require_inverse: bool = True
    allowed_orders: frozenset = None
    max_size: int = 4
    require_clifford: bool = False

    def to_dict(self):
        d = {
            "commutative": self.require_commutative,
            "inverse": self.require_inverse,
            "allowed_orders": None if self.allowed_orders is None else sorted(self.allowed_orders),
            "max_size": self.max_size,
        }
        if self.require_clifford:
            d["clifford"] = True
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            orders = d.get("allowed_orders")
            return cls(
                require_commutative=bool(d.get("commutative", False)),
                require_inverse=bool(d.get("inverse", True)),
                allowed_orders=None if orders is None else frozenset(int(k) for k in orders),
                max_size=int(d.get("max_size", 4)),
                require_clifford=bool(d.get("clifford", False)),
            )
        except (AttributeError, TypeError, ValueError) as exc:
            raise FormatError(f"bad class spec: {exc}")

    @classmethod
    def from_json(cls, text):
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(str(exc))

    def admits(self, S):
        table = S.table if isinstance(S, InverseSemigroup) else S
        if self.require_commutative and not is_commutative(table):
            return False
        needs_inv = self.require_inverse or self.require_clifford or self.allowed_orders is not None
        if needs_inv:
            try:
                T = _inverse(S)
            except NotInverse:
                return False
            if self.require_clifford and not classify(T).is_clifford:
                return False
            if self.allowed_orders is not None:
                if not set(order_spectrum(T, range(T.size))) <= self.allowed_orders:
                    return False
        return True


SEMILATTICES = ClassSpec(require_commutative=True, allowed_orders=frozenset({1}), max_size=5)


# member generation

def semilattices_up_to(n):
    """One meet table per isomorphism type, sizes ``1..n``.

    A finite meet semilattice minus a maximal element is again one, so each
    size is obtained from the previous by adding a new maximal element over a
    down-closed set that keeps all meets defined.
    """
    from .semilattice import validate_semilattice

    levels = [[make_table([[0]])]]
    while len(levels) < n:
        found = _IsoIndex()
        for Y in levels[-1]:
            k = Y.size
            leq = [[Y.op[a][b] == a for b in range(k)] for a in range(k)]
            for mask in range(1, 2 ** k):
                D = [a for a in range(k) if mask >> a & 1]
                if any(leq[b][a] and not mask >> b & 1 for a in D for b in range(k)):
                    continue
                meets = []
                for y in range(k):
                    lower = [d for d in D if leq[d][y]]
                    top = [d for d in lower if all(leq[e][d] for e in lower)]
                    if len(top) != 1:
                        break
                    meets.append(top[0])
                else:
                    rows = [list(r) + [meets[i]] for i, r in enumerate(Y.op)]
                    rows.append(meets + [k])
                    found.add(make_table(rows))
        levels.append(found.tables)
    for level in levels:
        for Y in level:
            validate_semilattice(Y)
    return [Y for level in levels for Y in level]


class _IsoIndex:
    """Tables up to isomorphism, bucketed by a sorted invariant multiset."""

    def __init__(self):
        self.tables = []
        self._buckets = {}

    def add(self, table):
        from .morphisms import _full_invariants

        key = (table.size, tuple(sorted(_full_invariants(table))))
        bucket = self._buckets.setdefault(key, [])
        if any(first_isomorphism(other, table) is not None for other in bucket):
            return False
        bucket.append(table)
        self.tables.append(table)
        return True


def _add_new(found, table):
    for other in found:
        if other.size == table.size and first_isomorphism(other, table) is not None:
            return False
    found.append(table)
    return True


def small_groups(n, abelian_only=False):
    """Group tables of order ``n`` up to isomorphism (orders below 8)."""
    from .groups import build_abelian, prime_power_decomposition

    if n == 1:
        return [make_table([[0]])]
    out = []
    for spec in _abelian_specs(n):
        _add_new(out, build_abelian(spec).table)
    if n == 6 and not abelian_only:
        out.append(_s3())
    if n >= 8 and not abelian_only:
        raise NotImplementedError("non-abelian groups of order >= 8 are not tabulated")
    return out


def _abelian_specs(n):
    from .groups import prime_power_decomposition

    specs = [[]]
    for p, es in prime_power_decomposition([n]).items():
        e = es[0]
        specs = [s + [p ** k for k in part] for s in specs for part in _partitions(e)]
    return specs


def _partitions(e, largest=None):
    largest = e if largest is None else largest
    if e == 0:
        yield []
        return
    for k in range(min(e, largest), 0, -1):
        for rest in _partitions(e - k, k):
            yield [k] + rest


def _s3():
    from itertools import permutations

    perms = list(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    return make_table([[index[tuple(q[p[i]] for i in range(3))] for q in perms] for p in perms])


def clifford_members(spec, n=None):
    """Clifford semigroups admitted by ``spec`` with at most ``n`` elements, up to isomorphism.

    Connecting maps are chosen on covering pairs of the semilattice only; the
    rest follow by composition.
    """
    from .corpus import covering_pairs, systems_from_covers
    from .clifford import flatten
    from .semilattice import validate_semilattice

    n = spec.max_size if n is None else n
    abelian_only = spec.require_commutative
    groups = {k: small_groups(k, abelian_only) for k in range(1, n + 1)}
    groups = {k: [G for G in gs if _group_orders_ok(G, spec)] for k, gs in groups.items()}
    homs = {}
    found = _IsoIndex()
    for Y in map(validate_semilattice, semilattices_up_to(n)):
        k = Y.size
        covers = covering_pairs(Y)
        for sizes in _fiber_sizes(k, n):
            for fibers in product(*(groups[s] for s in sizes)):
                choices = []
                for a, b in covers:
                    key = (fibers[a].op, fibers[b].op)
                    if key not in homs:
                        homs[key] = _group_homs(fibers[a], fibers[b])
                    choices.append(homs[key])
                for maps in product(*choices):
                    sys = systems_from_covers(Y, list(fibers), dict(zip(covers, maps)))
                    if sys is None:
                        continue
                    S = flatten(sys)
                    if spec.admits(S):
                        found.add(S.table)
    return sorted(found.tables, key=lambda t: (t.size, t.op))


def _fiber_sizes(k, n):
    """Tuples of ``k`` positive integers with sum at most ``n``."""
    if k == 0:
        yield ()
        return
    for first in range(1, n - k + 2):
        for rest in _fiber_sizes(k - 1, n - first):
            yield (first,) + rest


def _group_orders_ok(G, spec):
    if spec.allowed_orders is None:
        return True
    T = try_inverse(G)
    return set(order_spectrum(T, range(T.size))) <= spec.allowed_orders


def _group_homs(G, H):
    return [m for m in iter_morphisms(G, H, "hom")]


def members_up_to(spec, n=None):
    """Canonical list of class members used by the bounded checks."""
    if spec.require_commutative and spec.allowed_orders == frozenset({1}):
        n = spec.max_size if n is None else n
        return [Y for Y in semilattices_up_to(n)]
    if spec.require_inverse and (spec.require_commutative or spec.require_clifford):
        return clifford_members(spec, n)
    raise NotImplementedError("member generation covers Clifford-type classes only")


# bounded Fraisse property checks

@dataclass
class Verdict:
    status: str
    checked: int = 0
    witness: object = None
    note: str = ""

    @property
    def holds(self):
        return self.status == "holds_up_to_bound"

    def to_dict(self):
        return {"status": self.status, "checked": self.checked, "witness": self.witness, "note": self.note}


def _sub_tables(T):
    S = _inverse(T)
    return [
        subtable(S.table, s.elements)
        for s in enumerate_subsemigroups(S.table, True, S.inv, cap=max(24, S.size))
    ]


def check_hp(gen, spec):
    checked = 0
    for i, T in enumerate(gen):
        for sub, labels in _sub_tables(T):
            checked += 1
            if not spec.admits(sub):
                return Verdict("failure_witness", checked, {"member": i, "subalgebra": labels})
            if not any(G.size == sub.size and first_isomorphism(G, sub) for G in gen):
                return Verdict("failure_witness", checked, {"member": i, "subalgebra": labels},
                               "subalgebra not isomorphic to any listed member")
    return Verdict("holds_up_to_bound", checked)


def _idempotent(T):
    return next(e for e in range(T.size) if T.op[e][e] == e)


def check_jep(gen, spec):
    checked = 0
    for i, A in enumerate(gen):
        for j in range(i, len(gen)):
            B = gen[j]
            checked += 1
            P = direct_product(A, B)
            if spec.admits(P):
                ea, eb = _idempotent(A), _idempotent(B)
                fa = tuple(a * B.size + eb for a in range(A.size))
                fb = tuple(ea * B.size + b for b in range(B.size))
                assert morphism_failure(A, P, fa) is None and morphism_failure(B, P, fb) is None
                continue
            if not any(
                next(iter_morphisms(A, C, "emb"), None) is not None
                and next(iter_morphisms(B, C, "emb"), None) is not None
                for C in gen
            ):
                return Verdict("exhausted_bound", checked, {"left": i, "right": j})
    return Verdict("holds_up_to_bound", checked)


def amalgamation_instances(gen, spec, max_size=None):
    """``(i, j, U, f)``: ``U`` a subalgebra of ``gen[i]``, ``f`` an embedding into ``gen[j]``.

    Subalgebras are taken up to automorphisms of ``gen[i]``, embeddings up to
    automorphisms of ``gen[j]``, and only pairs with ``|T| + |T'| <= max_size``.
    """
    bound = spec.max_size if max_size is None else max_size
    autos = {}

    def aut(k):
        if k not in autos:
            autos[k] = list(iter_morphisms(gen[k], gen[k], "iso"))
        return autos[k]

    smallest = min(T.size for T in gen)
    for i, T in enumerate(gen):
        if T.size + max(T.size, smallest) > bound:
            continue
        subs = []
        seen = set()
        S = _inverse(T)
        for s in enumerate_subsemigroups(T, True, S.inv, cap=max(24, T.size)):
            key = min(tuple(sorted(sig[x] for x in s.elements)) for sig in aut(i))
            if key not in seen:
                seen.add(key)
                subs.append(s.sorted())
        for j in range(i, len(gen)):
            Tp = gen[j]
            if T.size + Tp.size > bound:
                continue
            for U in subs:
                Utab, labels = subtable(T, U)
                emb_seen = set()
                for f in iter_morphisms(Utab, Tp, "emb"):
                    key = min(tuple(tau[y] for y in f) for tau in aut(j))
                    if key in emb_seen:
                        continue
                    emb_seen.add(key)
                    yield i, j, labels, f


def _bounded_amalgam(T, Tp, U, f, gen, bound):
    for C in gen:
        if C.size > bound:
            continue
        for f1 in iter_morphisms(T, C, "emb"):
            partial = {f[k]: f1[u] for k, u in enumerate(U)}
            if next(iter_morphisms(Tp, C, "emb", partial), None) is not None:
                return C
    return None


def check_ap(gen, spec, max_size=None, target_size=None):
    """Imaoka first for commutative classes, then a search over listed members."""
    checked = 0
    targets = spec.max_size if target_size is None else target_size
    for i, j, U, f in amalgamation_instances(gen, spec, max_size):
        checked += 1
        T, Tp = gen[i], gen[j]
        instance = {"left": i, "right": j, "shared": U, "shared_image": list(f)}
        if spec.require_commutative:
            try:
                res = imaoka_amalgam(T, Tp, U, list(f))
            except EmbeddingCollapsed as exc:
                return Verdict("failure_witness", checked, {**instance, "collapse": str(exc.witness)})
            if not spec.admits(res.result):
                return Verdict("failure_witness", checked, instance, "amalgam leaves the class")
            continue
        if _bounded_amalgam(T, Tp, U, f, gen, targets) is None:
            return Verdict("exhausted_bound", checked, instance,
                           f"no amalgam among listed members of size <= {targets}")
    return Verdict("holds_up_to_bound", checked)


@dataclass
class ClassReport:
    hp: Verdict
    jep: Verdict
    ap: Verdict
    members: int = 0

    def to_dict(self):
        return {"members": self.members, "hp": self.hp.to_dict(), "jep": self.jep.to_dict(),
                "ap": self.ap.to_dict()}


def check_class_properties(gen, spec, ap_size=None):
    for k, T in enumerate(gen):
        if not spec.admits(T):
            raise SpecViolation(k)
    return ClassReport(check_hp(gen, spec), check_jep(gen, spec),
                       check_ap(gen, spec, ap_size), len(gen))


# finite approximants

@dataclass
class ChainResult:
    chain: list
    embeddings: list = field(default_factory=list)
    extensions: list = field(default_factory=list)
    budget_exceeded: bool = False


def missing_extensions(T, spec, gen=None):
    """One-point extensions of subalgebras of ``T`` that ``T`` does not already realise.

    Yields ``(A, C, g)``: ``A`` a subalgebra of ``T`` (sorted elements), ``C``
    a listed member with ``|C| = |A| + 1`` and ``g`` an embedding of ``A``
    into ``C`` that no embedding ``C -> T`` fixing ``A`` undoes. Ordered by
    ``A`` then by ``(|C|, table)``.
    """
    S = _inverse(T)
    T = S.table
    gen = members_up_to(spec, T.size + 1) if gen is None else gen
    for s in enumerate_subsemigroups(T, True, S.inv, cap=max(24, T.size)):
        A = s.sorted()
        Atab, _ = subtable(T, A)
        for C in sorted((C for C in gen if C.size == len(A) + 1), key=lambda c: c.op):
            for g in iter_morphisms(Atab, C, "emb"):
                partial = {g[k]: a for k, a in enumerate(A)}
                if next(iter_morphisms(C, T, "emb", partial), None) is None:
                    yield A, C, g


def amalgamation_chain(seed, spec, steps, budget):
    """Finite approximants: each step realises the first missing one-point extension.

    The current approximant ``T`` is amalgamated with the extension ``C``
    over the shared subalgebra ``A``; the new stage contains ``T`` via the
    left embedding, which is checked explicitly. A step that would exceed
    ``budget`` elements ends the chain with ``budget_exceeded`` set.
    """
    S = _inverse(seed)
    if not spec.admits(S):
        raise SpecViolation("seed")
    out = ChainResult([S.table])
    for _ in range(steps):
        cur = out.chain[-1]
        nxt = next(missing_extensions(cur, spec), None)
        if nxt is None:
            break
        A, C, g = nxt
        res = imaoka_amalgam(cur, C, A, list(g))
        if res.result.size > budget:
            out.budget_exceeded = True
            break
        if not spec.admits(res.result):
            raise SpecViolation("amalgam")
        assert morphism_failure(cur, res.result.table, res.embed_left.map) is None
        assert len(set(res.embed_left.map)) == cur.size
        out.chain.append(res.result.table)
        out.embeddings.append(res.embed_left.map)
        out.extensions.append({"shared": A, "extension": [list(r) for r in C.op]})
    return out
