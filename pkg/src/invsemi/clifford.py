"""Strong semilattices of groups.

A system ``[Y; G_alpha; psi_{alpha,beta}]`` stores one group table per
element of ``Y`` and a connecting map for every strictly comparable pair
``alpha > beta``. Flattened elements are numbered fiber by fiber: all of
``G_0`` first, then ``G_1``, and so on.
"""
import json
from dataclasses import dataclass, field

from .errors import (
    CompositionFails,
    FormatError,
    MissingMorphism,
    NotAGroup,
    NotClifford,
    NotHomomorphism,
    NotPreserved,
    NotSubgroup,
    NotSubSemilattice,
    SemilatticeMismatch,
)
from .inverse import InverseSemigroup, classify, maximal_subgroup, try_inverse
from .semilattice import Semilattice, validate_semilattice
from .tables import direct_product, identity_element, make_table, subtable, validate_table


@dataclass(frozen=True)
class FiberedElement:
    alpha: int
    g: int


@dataclass(frozen=True, eq=False)
class CliffordSystem:
    y: Semilattice
    fibers: tuple
    psi: dict
    identities: tuple = field(default=())
    offsets: tuple = field(default=())

    def identity(self, alpha):
        return self.identities[alpha]

    def connecting(self, alpha, beta):
        if alpha == beta:
            return tuple(range(self.fibers[alpha].size))
        return self.psi[(alpha, beta)]

    @property
    def size(self):
        return sum(g.size for g in self.fibers)

    def group_inverse(self, alpha, g):
        G = self.fibers[alpha]
        e = self.identities[alpha]
        return next(h for h in range(G.size) if G.op[g][h] == e)

    def key(self):
        return (
            self.y.table.op,
            tuple(f.op for f in self.fibers),
            tuple(sorted(self.psi.items())),
        )

    def __eq__(self, other):
        return isinstance(other, CliffordSystem) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


@dataclass(frozen=True)
class KernelImageReport:
    image: dict
    kernel: dict
    abs_image: dict
    abs_kernel: dict
    union_kernels: dict
    covering_images: dict
    abs_image_is_subgroup: dict
    is_surjective_system: bool
    is_image_trivial: bool


def element_index(sys, alpha, g):
    return sys.offsets[alpha] + g


def fiber_of(sys, index):
    for alpha in range(len(sys.fibers) - 1, -1, -1):
        if index >= sys.offsets[alpha]:
            return alpha, index - sys.offsets[alpha]
    raise IndexError(index)


def group_identity(G, alpha=None):
    e = identity_element(G)
    if e is None:
        raise NotAGroup(alpha)
    for g in range(G.size):
        if not any(G.op[g][h] == e for h in range(G.size)):
            raise NotAGroup(alpha)
    return e


def validate_system(y, fibers, psi):
    """Check fibers are groups and the maps obey both coherence laws."""
    if not isinstance(y, Semilattice):
        y = validate_semilattice(y)
    fibers = tuple(fibers)
    if len(fibers) != y.size:
        raise FormatError(f"{len(fibers)} fibers for a semilattice of size {y.size}")
    ids = tuple(group_identity(G, a) for a, G in enumerate(fibers))
    pairs = [(a, b) for a in range(y.size) for b in range(y.size) if y.lt(b, a)]
    psi = {tuple(k): tuple(v) for k, v in dict(psi).items()}
    extra = sorted(set(psi) - set(pairs))
    if extra:
        raise FormatError(f"morphism given for a pair that is not alpha > beta: {extra[0]}")
    for a, b in pairs:
        if (a, b) not in psi:
            raise MissingMorphism(a, b)
        m = psi[(a, b)]
        Ga, Gb = fibers[a], fibers[b]
        if len(m) != Ga.size or any(not 0 <= x < Gb.size for x in m):
            raise FormatError(f"map {a}->{b} has wrong length or range")
        for g in range(Ga.size):
            for h in range(Ga.size):
                if m[Ga.op[g][h]] != Gb.op[m[g]][m[h]]:
                    raise NotHomomorphism(a, b, g, h)
    for a, b in pairs:
        for c in range(y.size):
            if y.lt(c, b):
                ab, bc, ac = psi[(a, b)], psi[(b, c)], psi[(a, c)]
                for g in range(fibers[a].size):
                    if bc[ab[g]] != ac[g]:
                        raise CompositionFails(a, b, c, g)
    offsets = []
    total = 0
    for G in fibers:
        offsets.append(total)
        total += G.size
    return CliffordSystem(y, fibers, psi, ids, tuple(offsets))


def flatten(sys):
    """Multiply ``a_alpha * b_beta`` inside ``G_{alpha beta}`` after pushing both down."""
    labels = [(a, g) for a, G in enumerate(sys.fibers) for g in range(G.size)]
    rows = []
    for a, g in labels:
        row = []
        for b, h in labels:
            m = sys.y.meet(a, b)
            gm = sys.connecting(a, m)[g]
            hm = sys.connecting(b, m)[h]
            row.append(element_index(sys, m, sys.fibers[m].op[gm][hm]))
        rows.append(row)
    return try_inverse(make_table(rows))


def decompose_with_labels(S):
    """Decompose a Clifford semigroup; ``labels[i]`` is the element of ``S`` at flat index ``i``."""
    if not isinstance(S, InverseSemigroup):
        S = try_inverse(S)
    if not classify(S).is_clifford:
        bad = next(x for x in range(S.size) if S.rvalue(x) != S.lvalue(x))
        raise NotClifford(bad)
    E = list(S.idempotents)
    y_table, _ = subtable(S.table, E)
    y = validate_semilattice(y_table)
    groups = [sorted(maximal_subgroup(S, e)) for e in E]
    fibers = tuple(subtable(S.table, H)[0] for H in groups)
    position = [{x: i for i, x in enumerate(H)} for H in groups]
    psi = {}
    for a in range(len(E)):
        for b in range(len(E)):
            if y.lt(b, a):
                eb = E[b]
                psi[(a, b)] = tuple(position[b][S.mul(g, eb)] for g in groups[a])
    sys = validate_system(y, fibers, psi)
    labels = [x for H in groups for x in H]
    return sys, labels


def decompose(S):
    return decompose_with_labels(S)[0]


def _cyclic_order(G, g, e):
    k, x = 1, g
    while x != e:
        x = G.op[x][g]
        k += 1
    return k


def _closed_subgroup(G, elems):
    return all(G.op[a][b] in elems for a in elems for b in elems)


def kernel_image_analysis(sys):
    y = sys.y
    n = y.size
    image, kernel = {}, {}
    for (a, b), m in sys.psi.items():
        image[(a, b)] = frozenset(m)
        kernel[(a, b)] = frozenset(g for g in range(len(m)) if m[g] == sys.identity(b))
    abs_image, abs_kernel, union_kernels, cover, is_sub = {}, {}, {}, {}, {}
    for a in range(n):
        G = sys.fibers[a]
        below = [b for b in range(n) if y.lt(b, a)]
        if below:
            ak = frozenset.intersection(*(kernel[(a, b)] for b in below))
            uk = frozenset.union(*(kernel[(a, b)] for b in below))
        else:
            ak = frozenset(range(G.size))
            uk = frozenset({sys.identity(a)})
        orders = [_cyclic_order(G, g, sys.identity(a)) for g in range(G.size)]
        ai = frozenset(
            g
            for g in range(G.size)
            if all(
                _cyclic_order(sys.fibers[b], sys.psi[(a, b)][g], sys.identity(b)) == orders[g]
                for b in below
            )
        )
        abs_kernel[a], union_kernels[a], abs_image[a] = ak, uk, ai
        is_sub[a] = _closed_subgroup(G, ai)
        covers = [
            d for d in range(n)
            if y.lt(a, d) and not any(y.lt(a, c) and y.lt(c, d) for c in range(n))
        ]
        cover[a] = {d: image[(d, a)] for d in covers}
    surjective = all(len(image[k]) == sys.fibers[k[1]].size for k in image)
    trivial = all(len(image[k]) == 1 for k in image)
    return KernelImageReport(
        image, kernel, abs_image, abs_kernel, union_kernels, cover, is_sub, surjective, trivial
    )


def spined_product(s1, s2):
    """Fiberwise direct product over a shared semilattice."""
    if s1.y.table != s2.y.table:
        raise SemilatticeMismatch()
    fibers = [direct_product(G, H) for G, H in zip(s1.fibers, s2.fibers)]
    psi = {}
    for (a, b), m1 in s1.psi.items():
        m2 = s2.psi[(a, b)]
        k = s2.fibers[b].size
        psi[(a, b)] = tuple(m1[g] * k + m2[h] for g in range(len(m1)) for h in range(len(m2)))
    return validate_system(s1.y, fibers, psi)


def trivial_system(y, g):
    """Constant fiber ``g`` with every connecting map sending all of it to the identity."""
    e = group_identity(g)
    psi = {
        (a, b): (e,) * g.size
        for a in range(y.size) for b in range(y.size) if y.lt(b, a)
    }
    return validate_system(y, [g] * y.size, psi)


def product_system(y, g):
    """Constant fiber ``g`` with identity connecting maps; flattens to ``Y x G``."""
    ident = tuple(range(g.size))
    psi = {(a, b): ident for a in range(y.size) for b in range(y.size) if y.lt(b, a)}
    return validate_system(y, [g] * y.size, psi)


def restrict_system(sys, yp, subgroups):
    """Subsystem on the sub-semilattice ``yp`` with fibers ``subgroups[alpha]``."""
    return _restrict(sys, yp, subgroups)[0]


def restriction_embedding(sys, yp, subgroups):
    """Flat indices in ``flatten(sys)`` of the elements of the restricted flatten."""
    return _restrict(sys, yp, subgroups)[1]


def _restrict(sys, yp, subgroups):
    y = sys.y
    yp = sorted(set(yp))
    for a in yp:
        for b in yp:
            if y.meet(a, b) not in yp:
                raise NotSubSemilattice(a, b)
    subs = {a: sorted(set(subgroups[a])) for a in yp}
    for a in yp:
        G, H = sys.fibers[a], set(subs[a])
        e = sys.identity(a)
        if e not in H or not _closed_subgroup(G, H):
            raise NotSubgroup(a)
        if any(sys.group_inverse(a, h) not in H for h in H):
            raise NotSubgroup(a)
    for a in yp:
        for b in yp:
            if y.lt(b, a):
                m = sys.psi[(a, b)]
                if any(m[h] not in set(subs[b]) for h in subs[a]):
                    raise NotPreserved(a, b)
    y_table, _ = subtable(y.table, yp)
    fibers = [subtable(sys.fibers[a], subs[a])[0] for a in yp]
    pos = {a: {h: i for i, h in enumerate(subs[a])} for a in yp}
    psi = {}
    for i, a in enumerate(yp):
        for j, b in enumerate(yp):
            if y.lt(b, a):
                m = sys.psi[(a, b)]
                psi[(i, j)] = tuple(pos[b][m[h]] for h in subs[a])
    restricted = validate_system(validate_semilattice(y_table), fibers, psi)
    labels = [element_index(sys, a, h) for a in yp for h in subs[a]]
    return restricted, labels


def component_pairs_table(s1, s2):
    """The subsemigroup of ``flatten(s1) x flatten(s2)`` of pairs over a common alpha.

    Built directly from the two flattened tables; used as an independent
    route to the spined product.
    """
    F1, F2 = flatten(s1), flatten(s2)
    prod = direct_product(F1.table, F2.table)
    k = F2.size
    keep = [
        i * k + j
        for i in range(F1.size)
        for j in range(F2.size)
        if fiber_of(s1, i)[0] == fiber_of(s2, j)[0]
    ]
    return subtable(prod, keep)[0]


# JSON

def system_to_dict(sys):
    return {
        "semilattice": [list(r) for r in sys.y.table.op],
        "fibers": [[list(r) for r in G.op] for G in sys.fibers],
        "morphisms": [
            {"from": a, "to": b, "map": list(m)} for (a, b), m in sorted(sys.psi.items())
        ],
    }


def system_from_dict(data):
    try:
        y = validate_semilattice(validate_table(data["semilattice"]))
        fibers = [validate_table(t) for t in data["fibers"]]
        psi = {}
        for item in data.get("morphisms", []):
            psi[(int(item["from"]), int(item["to"]))] = tuple(int(x) for x in item["map"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad system JSON: {exc}")
    return validate_system(y, fibers, psi)


def dumps_system(sys):
    return json.dumps(system_to_dict(sys), sort_keys=True) + "\n"


def loads_system(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(str(exc))
    return system_from_dict(data)
