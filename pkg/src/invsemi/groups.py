"""Finite abelian groups given as direct sums of cyclic groups."""
import json
from dataclasses import dataclass
from math import prod

from .errors import FormatError, NotAbelian, NotAGroup, SizeCapExceeded
from .inverse import InverseSemigroup, try_inverse
from .tables import enumerate_subsemigroups, generate_closure, is_commutative, make_table

DEFAULT_GROUP_CAP = 64


@dataclass(frozen=True)
class AbelianGroupSpec:
    cyclic_orders: tuple = ()

    def __post_init__(self):
        orders = tuple(int(k) for k in self.cyclic_orders)
        if any(k < 2 for k in orders):
            raise ValueError("cyclic orders must be at least 2")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def order(self):
        return prod(self.cyclic_orders)

    def to_json(self):
        return json.dumps(list(self.cyclic_orders))

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
            return cls(tuple(data))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise FormatError(str(exc))


def cyclic_group(n):
    return make_table([[(a + b) % n for b in range(n)] for a in range(n)])


def _digits(x, radices):
    out = []
    for r in reversed(radices):
        out.append(x % r)
        x //= r
    return out[::-1]


def _number(digits, radices):
    x = 0
    for d, r in zip(digits, radices):
        x = x * r + d
    return x


def build_abelian(spec, cap=DEFAULT_GROUP_CAP):
    """Mixed-radix table: the last cyclic factor is the least significant digit."""
    if not isinstance(spec, AbelianGroupSpec):
        spec = AbelianGroupSpec(tuple(spec))
    radices = spec.cyclic_orders
    n = spec.order
    if n > cap:
        raise SizeCapExceeded(n, cap)
    digits = [_digits(x, radices) for x in range(n)]
    rows = [
        [_number([(u + v) % r for u, v, r in zip(digits[a], digits[b], radices)], radices)
         for b in range(n)]
        for a in range(n)
    ]
    S = try_inverse(make_table(rows))
    neg = tuple(_number([(-u) % r for u, r in zip(digits[a], radices)], radices) for a in range(n))
    assert S.inv == neg
    return S


def _require_group(G):
    if not isinstance(G, InverseSemigroup):
        G = try_inverse(G)
    if len(G.idempotents) != 1:
        raise NotAGroup(len(G.idempotents))
    return G


def subgroups(G, cap=DEFAULT_GROUP_CAP):
    G = _require_group(G)
    return [s.elements for s in enumerate_subsemigroups(G.table, True, G.inv, cap=cap)]


def prime_power_decomposition(orders):
    """Map each prime to the list of exponents of its cyclic p-parts."""
    from sympy import factorint

    parts = {}
    for k in orders:
        for p, e in factorint(k).items():
            parts.setdefault(p, []).append(e)
    return {p: sorted(es) for p, es in sorted(parts.items())}


def is_homogeneous_abelian_form(spec):
    """One exponent per prime: the group is a sum of ``Z_{p^m}^n`` over distinct ``p``."""
    orders = spec.cyclic_orders if isinstance(spec, AbelianGroupSpec) else tuple(spec)
    return all(len(set(es)) == 1 for es in prime_power_decomposition(orders).values())


def disjoint_subset_check(G, A):
    """Is ``<A>`` the internal direct sum of the cyclic groups ``<h>``, ``h`` in ``A``?"""
    G = _require_group(G)
    if not is_commutative(G.table):
        raise NotAbelian()
    A = list(A)
    e = G.idempotents[0]
    for i, h in enumerate(A):
        own = generate_closure(G.table, {h}, True, G.inv).elements
        rest = A[:i] + A[i + 1:]
        if not rest:
            continue
        others = generate_closure(G.table, set(rest), True, G.inv).elements
        if own & others != {e}:
            return False
    return True


def product_set(G, H, K):
    return frozenset(G.mul(h, k) for h in H for k in K)


def subgroup_splits(G, H, K, L):
    """``L = (L & H)(L & K)`` inside ``G = H K``."""
    return product_set(G, L & H, L & K) == frozenset(L)


def morphism_splits(theta, G1, H1, K1, G2, H2, K2):
    """``(hk)theta = (h theta^H)(k theta^K)`` with ``theta^H: H1 -> H2``, ``theta^K: K1 -> K2``."""
    if any(theta[h] not in H2 for h in H1) or any(theta[k] not in K2 for k in K1):
        return False
    return all(theta[G1.mul(h, k)] == G2.mul(theta[h], theta[k]) for h in H1 for k in K1)
