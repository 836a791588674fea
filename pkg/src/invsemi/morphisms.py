"""Homomorphism checks and backtracking search for morphisms between tables.

The search assigns images to domain elements in ascending index order and
tries candidates in ascending order, so results come out lexicographically
sorted by their image lists. Each assignment is propagated through the
multiplication: once ``a -> x`` and ``b -> y`` are fixed, ``ab -> xy`` is
forced. On groups and Clifford semigroups this means branching happens only
on a generating set.
"""
from dataclasses import dataclass
from functools import lru_cache
from itertools import islice

from .errors import NotInverse, NotIsomorphism, SizeCapExceeded, SquareFails
from .tables import monogenic_size

DEFAULT_AUT_CAP = 24


@dataclass(frozen=True)
class Morphism:
    dom: object
    cod: object
    map: tuple

    def __call__(self, a):
        return self.map[a]


@dataclass(frozen=True)
class CliffordIso:
    pi: tuple
    thetas: tuple


def morphism_failure(dom, cod, mapping):
    """First pair ``(a, b)`` with ``f(ab) != f(a)f(b)``, or ``None``."""
    n = dom.size
    for a in range(n):
        for b in range(n):
            if mapping[dom.op[a][b]] != cod.op[mapping[a]][mapping[b]]:
                return (a, b)
    return None


def check_morphism(m):
    return morphism_failure(m.dom, m.cod, m.map) is None


def _inverse_map(S):
    from .inverse import try_inverse

    try:
        return try_inverse(S).inv
    except NotInverse:
        return None


@lru_cache(maxsize=256)
def _full_invariants(S):
    from .inverse import try_inverse, greens, natural_order
    from .tables import element_order

    n = S.size
    op = S.op
    try:
        T = try_inverse(S)
    except NotInverse:
        # generic isomorphism invariants for tables that are not inverse
        return tuple(
            (
                op[a][a] == a,
                monogenic_size(S, a),
                len(set(op[a])),
                len({op[x][a] for x in range(n)}),
                sum(op[x][a] == a for x in range(n)),
            )
            for a in range(n)
        )
    g = greens(T)
    le = natural_order(T)
    rsize = {x: len(b) for b in g.r_classes for x in b}
    lsize = {x: len(b) for b in g.l_classes for x in b}
    return tuple(
        (
            op[a][a] == a,
            element_order(S, T.inv, a),
            rsize[a],
            lsize[a],
            sum(le.leq[x][a] for x in range(n)),
        )
        for a in range(n)
    )


@lru_cache(maxsize=256)
def _embedding_invariants(S):
    inv = _inverse_map(S)
    if inv is not None:
        from .tables import element_order

        return tuple((S.op[a][a] == a, element_order(S, inv, a)) for a in range(S.size)), True
    return tuple((S.op[a][a] == a, monogenic_size(S, a)) for a in range(S.size)), False


def _candidates(A, B, kind):
    nA, nB = A.size, B.size
    if kind == "iso":
        ia, ib = _full_invariants(A), _full_invariants(B)
        return [[y for y in range(nB) if ib[y] == ia[x]] for x in range(nA)]
    if kind == "emb":
        (ia, inv_a), (ib, inv_b) = _embedding_invariants(A), _embedding_invariants(B)
        if inv_a != inv_b:
            # orders are measured differently on the two sides; keep only idempotency
            ia = [(t[0],) for t in ia]
            ib = [(t[0],) for t in ib]
        return [[y for y in range(nB) if ib[y] == ia[x]] for x in range(nA)]
    idem_b = [y for y in range(nB) if B.op[y][y] == y]
    return [idem_b if A.op[x][x] == x else list(range(nB)) for x in range(nA)]


class _Search:
    def __init__(self, A, B, kind, partial=None):
        self.A, self.B = A, B
        self.injective = kind in ("iso", "emb")
        self.cand = _candidates(A, B, kind)
        self.allowed = [set(c) for c in self.cand]
        self.m = [-1] * A.size
        self.used = [False] * B.size
        self.trail = []
        self.partial = dict(partial or {})

    def _assign(self, x, y):
        opA, opB, m = self.A.op, self.B.op, self.m
        stack = [(x, y)]
        while stack:
            a, b = stack.pop()
            if m[a] != -1:
                if m[a] != b:
                    return False
                continue
            if b not in self.allowed[a]:
                return False
            if self.injective and self.used[b]:
                return False
            m[a] = b
            self.used[b] = True
            self.trail.append(a)
            for c in self.trail:
                d = m[c]
                stack.append((opA[a][c], opB[b][d]))
                stack.append((opA[c][a], opB[d][b]))
        return True

    def _undo(self, mark):
        while len(self.trail) > mark:
            a = self.trail.pop()
            self.used[self.m[a]] = False
            self.m[a] = -1

    def run(self):
        if self.injective and self.A.size > self.B.size:
            return
        for x, y in sorted(self.partial.items()):
            if not self._assign(x, y):
                return
        yield from self._rec(0)

    def _rec(self, start):
        n = self.A.size
        m = self.m
        x = start
        while x < n and m[x] != -1:
            x += 1
        if x == n:
            yield tuple(m)
            return
        for y in self.cand[x]:
            if self.injective and self.used[y]:
                continue
            mark = len(self.trail)
            if self._assign(x, y):
                yield from self._rec(x + 1)
            self._undo(mark)


def iter_morphisms(A, B, kind, partial=None):
    """Lazily yield maps: ``kind`` is ``"iso"``, ``"emb"`` or ``"hom"``."""
    if kind == "iso" and A.size != B.size:
        return iter(())
    return _Search(A, B, kind, partial).run()


def _collect(A, B, kind, limit, partial=None):
    it = iter_morphisms(A, B, kind, partial)
    if limit is not None:
        it = islice(it, limit)
    return [Morphism(A, B, m) for m in it]


def find_isomorphisms(A, B, limit=None, partial=None):
    return _collect(A, B, "iso", limit, partial)


def find_embeddings(A, B, limit=None, partial=None):
    """Injective homomorphisms; returned as plain image tuples when ``partial`` is used."""
    if partial is not None:
        it = iter_morphisms(A, B, "emb", partial)
        return list(it if limit is None else islice(it, limit))
    return _collect(A, B, "emb", limit)


def find_homomorphisms(A, B, limit=None, partial=None):
    return _collect(A, B, "hom", limit, partial)


def first_isomorphism(A, B, partial=None):
    return next(iter_morphisms(A, B, "iso", partial), None)


def is_isomorphic(A, B):
    return first_isomorphism(A, B) is not None


def compose(f, g):
    """``x -> g(f(x))``."""
    return tuple(g[y] for y in f)


def invert(f):
    out = [0] * len(f)
    for x, y in enumerate(f):
        out[y] = x
    return tuple(out)


def is_group_of_maps(maps):
    """True iff ``maps`` (as tuples) is a group under composition.

    Greedily picks generators and checks that they generate exactly the set.
    """
    X = set(maps)
    if not X:
        return False
    n = len(next(iter(X)))
    ident = tuple(range(n))
    if ident not in X:
        return False
    gens = []
    H = {ident}
    for s in sorted(X):
        if s in H:
            continue
        gens.append(s)
        frontier = list(H)
        while frontier:
            new = []
            for h in frontier:
                for t in gens:
                    ht = compose(h, t)
                    if ht not in H:
                        if ht not in X:
                            return False
                        H.add(ht)
                        new.append(ht)
            frontier = new
    return H == X


def automorphism_group(A, cap=DEFAULT_AUT_CAP, verify=True):
    if A.size > cap:
        raise SizeCapExceeded(A.size, cap)
    auts = find_isomorphisms(A, A)
    if verify:
        assert is_group_of_maps([a.map for a in auts])
    return auts


# Clifford isomorphism decomposition

def decompose_clifford_iso(theta, sysA, sysB):
    """Split an isomorphism of flattened systems into ``pi`` and per-fiber maps."""
    from .clifford import element_index, fiber_of

    f = theta.map if isinstance(theta, Morphism) else tuple(theta)
    nA = sum(g.size for g in sysA.fibers)
    nB = sum(g.size for g in sysB.fibers)
    if len(f) != nA or nA != nB or len(set(f)) != nA:
        raise NotIsomorphism("not a bijection")
    pi = []
    for alpha in range(sysA.y.size):
        img = f[element_index(sysA, alpha, sysA.identity(alpha))]
        beta, h = fiber_of(sysB, img)
        if h != sysB.identity(beta):
            raise NotIsomorphism("identity not mapped to identity", alpha)
        pi.append(beta)
    yA, yB = sysA.y, sysB.y
    if len(set(pi)) != yA.size or yA.size != yB.size:
        raise NotIsomorphism("pi is not a bijection")
    for a in range(yA.size):
        for b in range(yA.size):
            if pi[yA.meet(a, b)] != yB.meet(pi[a], pi[b]):
                raise NotIsomorphism("pi does not preserve meets", a, b)
    thetas = []
    for alpha in range(sysA.y.size):
        t = []
        for g in range(sysA.fibers[alpha].size):
            beta, h = fiber_of(sysB, f[element_index(sysA, alpha, g)])
            if beta != pi[alpha]:
                raise NotIsomorphism("fiber not preserved", alpha, g)
            t.append(h)
        if morphism_failure(sysA.fibers[alpha], sysB.fibers[pi[alpha]], t) is not None:
            raise NotIsomorphism("fiber map is not a homomorphism", alpha)
        thetas.append(tuple(t))
    iso = CliffordIso(tuple(pi), tuple(thetas))
    for (alpha, beta), psi in sysA.psi.items():
        phi = sysB.connecting(pi[alpha], pi[beta])
        for g in range(sysA.fibers[alpha].size):
            if thetas[beta][psi[g]] != phi[thetas[alpha][g]]:
                raise SquareFails(alpha, beta)
    if reconstruct_clifford_iso(iso, sysA, sysB) != f:
        raise NotIsomorphism("reconstruction differs")
    return iso


def reconstruct_clifford_iso(iso, sysA, sysB):
    """The element map ``a_alpha -> a theta_alpha`` on flattened indices."""
    from .clifford import element_index

    out = []
    for alpha in range(sysA.y.size):
        for g in range(sysA.fibers[alpha].size):
            out.append(element_index(sysB, iso.pi[alpha], iso.thetas[alpha][g]))
    return tuple(out)


def extend_to_automorphism(S, partial):
    """Some automorphism of ``S`` agreeing with ``partial``, or ``None``."""
    return next(iter_morphisms(S, S, "iso", partial), None)


def automorphism_orbit(S, x, fixed=None):
    """Images of ``x`` under automorphisms fixing ``fixed`` pointwise."""
    base = {f: f for f in fixed or ()}
    return [y for y in range(S.size) if extend_to_automorphism(S, {**base, x: y}) is not None]


def automorphism_count(S):
    """``|Aut(S)|`` from a stabilizer chain, without listing the group.

    Base points are taken in ascending order, skipping anything generated by
    earlier ones; an automorphism is determined by its values on the base.
    """
    from .tables import extend_closure

    count = 1
    base = []
    closed = frozenset()
    for x in range(S.size):
        if x in closed:
            continue
        count *= len(automorphism_orbit(S, x, base))
        base.append(x)
        closed = extend_closure(S, closed, (x,))
    return count
