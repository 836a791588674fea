"""Finite multiplication tables.

Elements are the dense indices ``0..n-1``; ``op[a][b]`` is the product ``ab``.
Every construction here fixes an explicit index order so that outputs are
reproducible byte for byte.
"""
import heapq
from dataclasses import dataclass
from itertools import product

from .errors import (
    EmptyGeneratorSet,
    FormatError,
    NotAssociative,
    NotClosed,
    OutOfRange,
    SizeCapExceeded,
)

DEFAULT_ENUM_CAP = 24


@dataclass(frozen=True)
class SemigroupTable:
    op: tuple

    @property
    def size(self):
        return len(self.op)

    def __len__(self):
        return len(self.op)

    def mul(self, a, b):
        return self.op[a][b]

    def rows(self):
        return [list(r) for r in self.op]


@dataclass(frozen=True)
class SubsetClosure:
    generators: frozenset
    elements: frozenset
    inverse_closed: bool = False

    def sorted(self):
        return sorted(self.elements)

    def __len__(self):
        return len(self.elements)


def make_table(rows):
    """Wrap rows without checking associativity (internal constructions only)."""
    return SemigroupTable(tuple(tuple(int(x) for x in r) for r in rows))


def validate_table(rows, size=None):
    """Check shape, range and associativity; return a :class:`SemigroupTable`.

    The associativity witness is the lexicographically first failing triple.
    """
    rows = [list(r) for r in rows]
    n = len(rows) if size is None else size
    if n < 1:
        raise FormatError("empty table")
    if len(rows) != n:
        raise FormatError(f"expected {n} rows, got {len(rows)}")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise FormatError(f"row {i} has {len(r)} entries, expected {n}")
        for j, x in enumerate(r):
            try:
                x = int(x)
            except (TypeError, ValueError):
                raise FormatError(f"entry ({i},{j}) is not an integer: {x!r}")
            if not 0 <= x < n:
                raise OutOfRange((i, j))
            r[j] = x
    first = associativity_failure(rows)
    if first is not None:
        raise NotAssociative(*first)
    return make_table(rows)


def associativity_failure(op):
    n = len(op)
    for a in range(n):
        ra = op[a]
        for b in range(n):
            ab = ra[b]
            rab = op[ab]
            rb = op[b]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    return (a, b, c)
    return None


def is_associative(op):
    return associativity_failure(op) is None


def _close(S, current, pending, use_inverses, inv):
    op = S.op
    members = set(current)
    order = sorted(current)
    queue = sorted(set(pending) - members)
    members.update(queue)
    while queue:
        a = heapq.heappop(queue)
        order.append(a)
        fresh = []
        for b in order:
            for c in (op[a][b], op[b][a]):
                if c not in members:
                    members.add(c)
                    fresh.append(c)
        if use_inverses and inv[a] not in members:
            members.add(inv[a])
            fresh.append(inv[a])
        for c in fresh:
            heapq.heappush(queue, c)
    return frozenset(members)


def generate_closure(S, A, use_inverses=False, inv=None):
    """Least subset containing ``A`` closed under the product (and ``inv``)."""
    A = frozenset(A)
    if not A:
        raise EmptyGeneratorSet()
    if use_inverses and (inv is None or len(inv) != S.size):
        raise ValueError("use_inverses requires a total inverse map")
    elems = _close(S, (), A, use_inverses, inv)
    return SubsetClosure(A, elems, bool(use_inverses))


def extend_closure(S, closed, extra, use_inverses=False, inv=None):
    """Closure of ``closed | extra`` where ``closed`` is already closed."""
    return _close(S, closed, extra, use_inverses, inv)


def is_closed(S, subset, inv=None):
    op = S.op
    sub = set(subset)
    for a in sub:
        if inv is not None and inv[a] not in sub:
            return False
        for b in sub:
            if op[a][b] not in sub:
                return False
    return True


def adjoin_identity(S):
    """Return ``S^1``: a fresh identity at index ``S.size``, always added."""
    n = S.size
    rows = [list(r) + [i] for i, r in enumerate(S.op)]
    rows.append(list(range(n + 1)))
    return make_table(rows)


def direct_product(S, T):
    """Componentwise product; the pair ``(i, j)`` has index ``i*|T| + j``."""
    m = T.size
    rows = []
    for i, j in product(range(S.size), range(m)):
        si, tj = S.op[i], T.op[j]
        rows.append([si[k] * m + tj[l] for k, l in product(range(S.size), range(m))])
    return make_table(rows)


def subtable(S, elements):
    """Restrict to a closed subset, reindexed in ascending order.

    Returns ``(table, labels)`` where ``labels[i]`` is the original element.
    """
    labels = sorted(elements)
    index = {x: i for i, x in enumerate(labels)}
    rows = []
    for a in labels:
        row = []
        for b in labels:
            c = S.op[a][b]
            if c not in index:
                raise NotClosed(a, b)
            row.append(index[c])
        rows.append(row)
    return make_table(rows), labels


def delete_element_subsemigroup(S, drop):
    """Remove one element whose complement is a subsemigroup."""
    keep = [x for x in range(S.size) if x != drop]
    if not keep:
        raise NotClosed(drop, drop)
    for a in keep:
        for b in keep:
            if S.op[a][b] == drop:
                raise NotClosed(a, b)
    return subtable(S, keep)[0]


def enumerate_subsemigroups(S, use_inverses=False, inv=None, cap=DEFAULT_ENUM_CAP):
    """All closed subsets, sorted by (size, element list).

    Each known subalgebra is extended by one element at a time and
    closed again, so every subalgebra is reached from a generating set.
    """
    if S.size > cap:
        raise SizeCapExceeded(S.size, cap)
    if use_inverses and inv is None:
        raise ValueError("use_inverses requires an inverse map")
    found = {}
    queue = []
    for x in range(S.size):
        c = _close(S, (), (x,), use_inverses, inv)
        if c not in found:
            found[c] = frozenset((x,))
            queue.append(c)
    while queue:
        c = queue.pop()
        for x in range(S.size):
            if x in c:
                continue
            d = _close(S, c, (x,), use_inverses, inv)
            if d not in found:
                found[d] = found[c] | {x}
                queue.append(d)
    out = [SubsetClosure(g, c, bool(use_inverses)) for c, g in found.items()]
    out.sort(key=lambda s: (len(s.elements), sorted(s.elements)))
    return out


def element_order(S, inv, a):
    """Size of the inverse subsemigroup generated by ``a``."""
    return len(_close(S, (), (a,), True, inv))


def monogenic_size(S, a):
    return len(_close(S, (), (a,), False, None))


def idempotents(S):
    return [e for e in range(S.size) if S.op[e][e] == e]


def identity_element(S):
    for e in range(S.size):
        if all(S.op[e][x] == x == S.op[x][e] for x in range(S.size)):
            return e
    return None


def is_commutative(S):
    op = S.op
    n = S.size
    return all(op[a][b] == op[b][a] for a in range(n) for b in range(a + 1, n))


# text format

def parse_table(text):
    tokens = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens.extend(stripped.split())
    if not tokens:
        raise FormatError("no table data")
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(str(exc))
    n, body = nums[0], nums[1:]
    if n < 1:
        raise FormatError("table size must be positive")
    if len(body) != n * n:
        raise FormatError(f"expected {n * n} entries, got {len(body)}")
    return validate_table([body[i * n:(i + 1) * n] for i in range(n)])


def format_table(S):
    lines = [str(S.size)]
    lines.extend(" ".join(str(x) for x in row) for row in S.op)
    return "\n".join(lines) + "\n"


def read_table(path):
    with open(path) as fh:
        return parse_table(fh.read())


def write_table(S, path):
    with open(path, "w") as fh:
        fh.write(format_table(S))
