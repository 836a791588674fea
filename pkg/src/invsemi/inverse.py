"""Inverse-semigroup structure on top of a validated table."""
from dataclasses import dataclass

from .errors import MultipleInverses, NoInverse, NotClosed, NotIdempotent
from .tables import element_order, generate_closure, is_closed, is_commutative


@dataclass(frozen=True)
class InverseSemigroup:
    table: object
    inv: tuple
    idempotents: tuple

    @property
    def size(self):
        return self.table.size

    @property
    def op(self):
        return self.table.op

    def mul(self, a, b):
        return self.table.op[a][b]

    def rvalue(self, a):
        """``a a^-1``, the idempotent labelling the R-class of ``a``."""
        return self.table.op[a][self.inv[a]]

    def lvalue(self, a):
        return self.table.op[self.inv[a]][a]


@dataclass(frozen=True)
class GreensData:
    r_classes: tuple
    l_classes: tuple
    h_classes: tuple
    d_classes: tuple

    def class_of(self, relation, a):
        for block in getattr(self, relation + "_classes"):
            if a in block:
                return block
        raise KeyError(a)


@dataclass(frozen=True)
class NaturalOrder:
    leq: tuple

    def __call__(self, a, b):
        return self.leq[a][b]

    def below(self, a):
        return [x for x in range(len(self.leq)) if self.leq[x][a]]


@dataclass(frozen=True)
class Classification:
    is_clifford: bool
    is_bisimple: bool
    is_completely_semisimple: bool
    is_commutative: bool
    is_semilattice: bool
    is_group: bool
    is_primitive: bool


def try_inverse(S):
    """Compute the inverse map, failing if some element has zero or two inverses."""
    op = S.op
    n = S.size
    inv = []
    for a in range(n):
        found = [b for b in range(n) if op[op[a][b]][a] == a and op[op[b][a]][b] == b]
        if not found:
            raise NoInverse(a)
        if len(found) > 1:
            raise MultipleInverses(a, found[0], found[1])
        inv.append(found[0])
    for a in range(n):
        for b in range(n):
            assert inv[op[a][b]] == op[inv[b]][inv[a]], (a, b)
    idem = tuple(e for e in range(n) if op[e][e] == e)
    return InverseSemigroup(S, tuple(inv), idem)


def _partition(n, key):
    blocks = {}
    for a in range(n):
        blocks.setdefault(key(a), []).append(a)
    return tuple(sorted(tuple(b) for b in blocks.values()))


def greens(S):
    n = S.size
    r = _partition(n, S.rvalue)
    l = _partition(n, S.lvalue)
    h = _partition(n, lambda a: (S.rvalue(a), S.lvalue(a)))
    # a D b iff some c has a R c L b, i.e. some c with cc^-1 = aa^-1, c^-1c = b^-1b
    pairs = {(S.rvalue(c), S.lvalue(c)) for c in range(n)}
    d_rel = [[(S.rvalue(a), S.lvalue(b)) in pairs for b in range(n)] for a in range(n)]
    assert all(d_rel[a][b] == d_rel[b][a] for a in range(n) for b in range(n))
    d_blocks = []
    seen = set()
    for a in range(n):
        if a in seen:
            continue
        block = tuple(b for b in range(n) if d_rel[a][b])
        seen.update(block)
        d_blocks.append(block)
    return GreensData(r, l, h, tuple(sorted(d_blocks)))


def natural_order(S):
    op = S.op
    n = S.size
    leq = [[False] * n for _ in range(n)]
    for b in range(n):
        for e in S.idempotents:
            leq[op[e][b]][b] = True
    return NaturalOrder(tuple(tuple(r) for r in leq))


def maximal_subgroup(S, e):
    """The H-class of the idempotent ``e``."""
    if S.mul(e, e) != e:
        raise NotIdempotent(e)
    return frozenset(a for a in range(S.size) if S.rvalue(a) == e and S.lvalue(a) == e)


def classify(S, greens_data=None, order=None):
    g = greens_data or greens(S)
    le = order or natural_order(S)
    op = S.op
    n = S.size
    clifford = all(S.rvalue(x) == S.lvalue(x) for x in range(n))
    d_of = {}
    for i, block in enumerate(g.d_classes):
        for x in block:
            d_of[x] = i
    E = S.idempotents
    semisimple = not any(
        e != f and d_of[e] == d_of[f] and le(e, f) for e in E for f in E
    )
    primitive = all(not (le(f, e) and e != f) for e in E for f in E)
    return Classification(
        is_clifford=clifford,
        is_bisimple=len(g.d_classes) == 1,
        is_completely_semisimple=semisimple,
        is_commutative=is_commutative(S.table),
        is_semilattice=len(E) == n and is_commutative(S.table),
        is_group=len(E) == 1,
        is_primitive=primitive,
    )


def order_of(S, a):
    return element_order(S.table, S.inv, a)


def orders(S):
    return [order_of(S, a) for a in range(S.size)]


def order_spectrum(S, A):
    return sorted({order_of(S, a) for a in A})


def coprime_order(S, A, B):
    return set(order_spectrum(S, A)) & set(order_spectrum(S, B)) <= {1}


def order_characteristic_check(S, T):
    """Every element of ``S`` whose order occurs in ``T`` lies in ``T``."""
    T = frozenset(T)
    if not T or not is_closed(S.table, T, S.inv):
        raise NotClosed(sorted(T))
    spectrum = set(order_spectrum(S, T))
    return all(a in T for a in range(S.size) if order_of(S, a) in spectrum)


def inverse_closure(S, A):
    return generate_closure(S.table, A, True, S.inv).elements


def analyze_report(S):
    """Summary record used by the ``analyze`` command."""
    g = greens(S)
    c = classify(S, g)
    return {
        "is_clifford": c.is_clifford,
        "is_bisimple": c.is_bisimple,
        "is_completely_semisimple": c.is_completely_semisimple,
        "is_commutative": c.is_commutative,
        "is_semilattice": c.is_semilattice,
        "is_group": c.is_group,
        "is_primitive": c.is_primitive,
        "idempotent_count": len(S.idempotents),
        "d_class_count": len(g.d_classes),
        "order_spectrum": order_spectrum(S, range(S.size)),
    }
