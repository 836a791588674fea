"""Finite meet semilattices, viewed both as algebras and as posets."""
from dataclasses import dataclass
from itertools import product

from .errors import (
    NotCommutative,
    NotEmbedding,
    NotIdempotent,
    NotMeetClosed,
    SizeCapExceeded,
)
from .tables import make_table, subtable

POWERSET_MAX = 6


@dataclass(frozen=True)
class Semilattice:
    table: object
    leq: tuple

    @property
    def size(self):
        return self.table.size

    def meet(self, a, b):
        return self.table.op[a][b]

    def lt(self, a, b):
        return a != b and self.leq[a][b]

    def incomparable(self, a, b):
        return not self.leq[a][b] and not self.leq[b][a]

    def is_chain(self):
        n = self.size
        return all(not self.incomparable(a, b) for a in range(n) for b in range(n))

    def downset(self, a):
        return frozenset(b for b in range(self.size) if self.leq[b][a])


@dataclass(frozen=True)
class Diamond:
    delta: int
    alpha: int
    gamma: int
    beta: int


def validate_semilattice(S):
    op = S.op
    n = S.size
    for a in range(n):
        if op[a][a] != a:
            raise NotIdempotent(a)
    for a in range(n):
        for b in range(a + 1, n):
            if op[a][b] != op[b][a]:
                raise NotCommutative(a, b)
    leq = tuple(tuple(op[a][b] == a for b in range(n)) for a in range(n))
    # ab is a lower bound and every lower bound lies below it
    for a, b in product(range(n), repeat=2):
        m = op[a][b]
        assert leq[m][a] and leq[m][b]
        assert all(leq[c][m] for c in range(n) if leq[c][a] and leq[c][b])
    return Semilattice(S, leq)


def chain(n):
    """The ``n``-chain ``0 < 1 < ... < n-1``."""
    return validate_semilattice(make_table([[min(a, b) for b in range(n)] for a in range(n)]))


def from_poset(leq_pairs, n):
    """Meet table of a finite poset given by its order relation, if every meet exists."""
    le = [[a == b or (a, b) in leq_pairs for b in range(n)] for a in range(n)]
    for k, a, b in product(range(n), repeat=3):
        if le[a][k] and le[k][b]:
            le[a][b] = True
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            lower = [c for c in range(n) if le[c][a] and le[c][b]]
            greatest = [c for c in lower if all(le[d][c] for d in lower)]
            if len(greatest) != 1:
                raise ValueError(f"no meet for {a}, {b}")
            row.append(greatest[0])
        rows.append(row)
    return validate_semilattice(make_table(rows))


def diamond_semilattice():
    """Bottom 0, incomparable middles 1 and 2, top 3."""
    return from_poset({(0, 1), (0, 2), (1, 3), (2, 3)}, 4)


def find_diamond(Y):
    """Lexicographically least ``(delta, alpha, gamma, beta)`` forming a diamond."""
    n = Y.size
    for delta in range(n):
        for alpha in range(n):
            if not Y.lt(alpha, delta):
                continue
            for gamma in range(n):
                if not Y.lt(gamma, delta) or not Y.incomparable(alpha, gamma):
                    continue
                return Diamond(delta, alpha, gamma, Y.meet(alpha, gamma))
    return None


def powerset_semilattice(k):
    """Subsets of a ``k``-set under intersection; subset index is its bitmask."""
    if k > POWERSET_MAX:
        raise SizeCapExceeded(2 ** k, 2 ** POWERSET_MAX)
    n = 2 ** k
    return validate_semilattice(make_table([[a & b for b in range(n)] for a in range(n)]))


def downset_embedding(Y):
    """Map ``a`` to the bitmask of its principal downset, into ``powerset(|Y|)``."""
    return [sum(1 << b for b in Y.downset(a)) for a in range(Y.size)]


def sub_semilattice(Y, elements):
    table, labels = subtable(Y.table, elements)
    return validate_semilattice(table), labels


def embed_and_extend(Y, Z, Zp, theta):
    """Find ``X`` disjoint from ``Z`` with ``Z | X`` isomorphic to ``Zp`` over ``theta``.

    ``theta`` maps each element of ``Z`` (a meet-closed subset of ``Y``) into
    ``Zp``. The returned ``X`` is the lexicographically least sorted list, or
    ``None`` when the bounded search finds nothing.
    """
    from .morphisms import find_embeddings

    Z = sorted(set(Z))
    for a in Z:
        for b in Z:
            if Y.meet(a, b) not in Z:
                raise NotMeetClosed(Z)
    theta = dict(theta)
    if sorted(theta) != Z:
        raise NotEmbedding(theta)
    images = [theta[z] for z in Z]
    if len(set(images)) != len(images):
        raise NotEmbedding(theta)
    for a in Z:
        for b in Z:
            if theta[Y.meet(a, b)] != Zp.meet(theta[a], theta[b]):
                raise NotEmbedding(theta)
    fixed = {theta[z]: z for z in Z}
    best = None
    for emb in find_embeddings(Zp.table, Y.table, partial=fixed):
        X = sorted(set(emb) - set(Z))
        if best is None or X < best:
            best = X
    return best
