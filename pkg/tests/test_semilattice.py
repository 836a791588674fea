import pytest
from hypothesis import given, settings, strategies as st

from invsemi.errors import NotCommutative, NotEmbedding, NotIdempotent, NotMeetClosed, SizeCapExceeded
from invsemi.fraisse import semilattices_up_to
from invsemi.groups import cyclic_group
from invsemi.morphisms import is_isomorphic, morphism_failure
from invsemi.semilattice import (
    Diamond,
    chain,
    diamond_semilattice,
    downset_embedding,
    embed_and_extend,
    find_diamond,
    powerset_semilattice,
    sub_semilattice,
    validate_semilattice,
)
from invsemi.tables import make_table

import oracles


def test_validate_examples(diamond):
    Y = chain(3)
    assert Y.is_chain()
    with pytest.raises(NotIdempotent) as exc:
        validate_semilattice(cyclic_group(2))
    assert exc.value.witness == (1,)
    assert diamond.size == 4 and not diamond.is_chain()
    assert diamond.incomparable(1, 2) and diamond.meet(1, 2) == 0


def test_not_commutative():
    with pytest.raises(NotCommutative):
        validate_semilattice(make_table([[0, 0], [1, 1]]))


def test_meet_is_greatest_lower_bound():
    for T in semilattices_up_to(5):
        Y = validate_semilattice(T)
        n = Y.size
        for a in range(n):
            for b in range(n):
                lower = [c for c in range(n) if Y.leq[c][a] and Y.leq[c][b]]
                assert Y.meet(a, b) in lower
                assert all(Y.leq[c][Y.meet(a, b)] for c in lower)


def test_find_diamond_examples(diamond):
    for n in range(1, 6):
        assert find_diamond(chain(n)) is None
    assert find_diamond(diamond) == Diamond(3, 1, 2, 0)
    assert find_diamond(powerset_semilattice(2)) is not None


def test_find_diamond_matches_brute_force():
    for T in semilattices_up_to(5):
        Y = validate_semilattice(T)
        n = Y.size
        brute = [
            (d, a, g, Y.meet(a, g))
            for d in range(n) for a in range(n) for g in range(n)
            if Y.lt(a, d) and Y.lt(g, d) and Y.incomparable(a, g)
        ]
        found = find_diamond(Y)
        if brute:
            assert (found.delta, found.alpha, found.gamma, found.beta) == min(brute)
            assert Y.lt(found.beta, found.alpha) and Y.lt(found.beta, found.gamma)
        else:
            assert found is None


def test_powerset_examples(diamond):
    assert powerset_semilattice(1).table == chain(2).table
    assert is_isomorphic(powerset_semilattice(2).table, diamond.table)
    with pytest.raises(SizeCapExceeded):
        powerset_semilattice(7)


def test_downset_embedding_on_all_small_semilattices():
    for T in semilattices_up_to(5):
        Y = validate_semilattice(T)
        P = powerset_semilattice(Y.size)
        f = downset_embedding(Y)
        assert len(set(f)) == Y.size
        assert morphism_failure(Y.table, P.table, f) is None


def test_sub_semilattice():
    P = powerset_semilattice(2)
    Y, labels = sub_semilattice(P, [0, 3])
    assert labels == [0, 3] and Y.table == chain(2).table


def _brute_extensions(Y, Z, Zp, theta):
    fixed = {theta[z]: z for z in Z}
    out = []
    for emb in oracles.embeddings(Zp.table, Y.table):
        if all(emb[k] == v for k, v in fixed.items()):
            out.append(sorted(set(emb) - set(Z)))
    return out


def test_embed_and_extend_examples():
    P3 = powerset_semilattice(3)
    X = embed_and_extend(P3, [7], chain(2), {7: 1})
    assert X == min(_brute_extensions(P3, [7], chain(2), {7: 1})) == [0]
    # Zp isomorphic to Z: nothing to add
    assert embed_and_extend(chain(3), [0, 2], chain(2), {0: 0, 2: 1}) == []
    assert embed_and_extend(chain(3), [2], diamond_semilattice(), {2: 3}) is None


def test_embed_and_extend_errors():
    P = powerset_semilattice(2)
    with pytest.raises(NotMeetClosed):
        embed_and_extend(P, [1, 2], chain(3), {1: 0, 2: 1})
    with pytest.raises(NotEmbedding):
        embed_and_extend(P, [0, 3], chain(2), {0: 1, 3: 0})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 7), st.integers(0, 6))
def test_embed_and_extend_against_brute_force(z, k):
    Y = powerset_semilattice(3)
    targets = [validate_semilattice(T) for T in semilattices_up_to(4)]
    Zp = targets[k % len(targets)]
    for t in range(Zp.size):
        got = embed_and_extend(Y, [z], Zp, {z: t})
        brute = _brute_extensions(Y, [z], Zp, {z: t})
        assert got == (min(brute) if brute else None)
