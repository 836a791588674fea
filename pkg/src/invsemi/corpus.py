"""Named small structures and the Clifford-system fixtures used across the suite."""
from itertools import product

from .clifford import flatten, product_system, trivial_system, validate_system
from .errors import CompositionFails
from .groups import build_abelian, cyclic_group
from .inverse import try_inverse
from .semilattice import chain, diamond_semilattice, from_poset
from .tables import make_table


def trivial_semigroup():
    return make_table([[0]])


def left_zero(n=2):
    return make_table([[a] * n for a in range(n)])


def brandt_b2():
    """Index 0 is the zero; 1..4 are (1,1), (1,2), (2,1), (2,2)."""
    cells = [None, (1, 1), (1, 2), (2, 1), (2, 2)]
    index = {c: i for i, c in enumerate(cells)}

    def mul(x, y):
        if x == 0 or y == 0:
            return 0
        (i, j), (k, l) = cells[x], cells[y]
        return index[(i, l)] if j == k else 0

    return make_table([[mul(x, y) for y in range(5)] for x in range(5)])


def klein_four():
    return build_abelian([2, 2]).table


def vee_semilattice():
    """Bottom 0 with two incomparable elements 1 and 2 above it."""
    return from_poset({(0, 1), (0, 2)}, 3)


def mod_map(n, k):
    return tuple(g % k for g in range(n))


def chain_system(groups, maps):
    """Chain ``0 < 1 < ... < len(groups)-1``; ``maps[i]`` sends fiber ``i+1`` to fiber ``i``."""
    k = len(groups)
    y = chain(k)
    psi = {}
    for top in range(1, k):
        psi[(top, top - 1)] = tuple(maps[top - 1])
    for top in range(k):
        for bot in range(top - 2, -1, -1):
            step = psi[(bot + 1, bot)]
            psi[(top, bot)] = tuple(step[g] for g in psi[(top, bot + 1)])
    return validate_system(y, groups, psi)


def clifford_fixtures():
    """Named validated systems: chains, a diamond, surjective, image-trivial and mixed cases."""
    Z1, Z2, Z3, Z4 = (cyclic_group(n) for n in (1, 2, 3, 4))
    K4 = klein_four()
    D = diamond_semilattice()
    V = vee_semilattice()
    fx = {}
    fx["chain2_z2_identity"] = product_system(chain(2), Z2)
    fx["chain2_z4_to_z2"] = chain_system([Z2, Z4], [mod_map(4, 2)])
    fx["chain2_z2_trivial"] = trivial_system(chain(2), Z2)
    fx["chain3_z2_identity"] = product_system(chain(3), Z2)
    fx["chain3_z4_z2_z1"] = chain_system([Z1, Z2, Z4], [(0, 0), mod_map(4, 2)])
    fx["chain2_z3_z2_mixed"] = chain_system([Z2, Z3], [(0, 0, 0)])
    fx["chain2_k4_to_z2"] = chain_system([Z2, K4], [(0, 1, 0, 1)])
    fx["diamond_trivial_groups"] = product_system(D, Z1)
    fx["diamond_z2_identity"] = product_system(D, Z2)
    fx["diamond_z2_trivial"] = trivial_system(D, Z2)
    fx["vee_z2_identity"] = product_system(V, Z2)
    fx["vee_z3_trivial"] = trivial_system(V, Z3)
    fx["single_z4"] = product_system(chain(1), Z4)
    fx["chain2_z6_to_z3"] = chain_system([Z3, cyclic_group(6)], [mod_map(6, 3)])
    fx["vee_mixed"] = validate_system(
        V, [Z2, Z4, Z2], {(1, 0): mod_map(4, 2), (2, 0): (0, 1)}
    )
    return fx


def covering_pairs(Y):
    n = Y.size
    return [
        (a, b) for a in range(n) for b in range(n)
        if Y.lt(b, a) and not any(Y.lt(b, c) and Y.lt(c, a) for c in range(n))
    ]


def systems_from_covers(Y, fibers, cover_maps):
    """Extend maps on covering pairs to all pairs; ``None`` if two paths disagree."""
    n = Y.size
    psi = dict(cover_maps)
    # process pairs by decreasing distance: compose cover with an already known map
    for a in sorted(range(n), key=lambda x: len(Y.downset(x))):
        for b in sorted(Y.downset(a) - {a}, key=lambda x: -len(Y.downset(x))):
            if (a, b) in psi:
                continue
            for c, d in cover_maps:
                if c == a and Y.lt(b, d):
                    first, rest = cover_maps[(c, d)], psi[(d, b)]
                    composed = tuple(rest[g] for g in first)
                    if psi.get((a, b), composed) != composed:
                        return None
                    psi[(a, b)] = composed
    try:
        return validate_system(Y, fibers, psi)
    except CompositionFails:
        return None


def clifford_corpus(max_total=24, max_fiber=4):
    """Systems over the 1-, 2-, 3-chains and the diamond with small fibers.

    Fibers range over groups of order at most ``max_fiber``; connecting maps
    over all homomorphism choices on covering pairs that compose consistently.
    """
    from .fraisse import small_groups
    from .morphisms import iter_morphisms

    groups = [G for n in range(1, max_fiber + 1) for G in small_groups(n)]
    homs = {}
    out = []
    for Y in (chain(1), chain(2), chain(3), diamond_semilattice()):
        covers = covering_pairs(Y)
        for fibers in product(range(len(groups)), repeat=Y.size):
            if sum(groups[i].size for i in fibers) > max_total:
                continue
            choices = []
            for a, b in covers:
                key = (fibers[a], fibers[b])
                if key not in homs:
                    homs[key] = list(iter_morphisms(groups[key[0]], groups[key[1]], "hom"))
                choices.append(homs[key])
            for maps in product(*choices):
                sys = systems_from_covers(Y, [groups[i] for i in fibers], dict(zip(covers, maps)))
                if sys is not None:
                    out.append(sys)
    return out


def named_tables():
    return {
        "trivial": trivial_semigroup(),
        "brandt2": brandt_b2(),
        "klein4": klein_four(),
        "z4": cyclic_group(4),
        "z6": cyclic_group(6),
        "chain2": chain(2).table,
        "chain3": chain(3).table,
        "diamond": diamond_semilattice().table,
    }


def as_inverse(table):
    return try_inverse(table)
