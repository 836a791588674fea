"""Acceptance criteria, one test each.

Every test carries a ``criterion`` marker; the summary at the end of the
pytest run prints one PASS/FAIL line per criterion. Run this file directly
to get just those lines.
"""
import subprocess
import sys
from functools import lru_cache
from itertools import islice
from math import gcd, lcm, prod
from pathlib import Path

import pytest

from invsemi import corpus
from invsemi.clifford import (
    component_pairs_table,
    decompose,
    decompose_with_labels,
    flatten,
    spined_product,
)
from invsemi.fraisse import (
    ClassSpec,
    amalgamation_instances,
    check_ap,
    check_class_properties,
    congruence_closure,
    imaoka_amalgam,
    members_up_to,
    semilattices_up_to,
    small_groups,
)
from invsemi.groups import (
    build_abelian,
    is_homogeneous_abelian_form,
    morphism_splits,
    subgroup_splits,
)
from invsemi.homogeneity import (
    find_defects,
    idempotent_transitivity,
    is_homogeneous,
    maximal_subgroups_pairwise_isomorphic,
)
from invsemi.inverse import classify, order_spectrum, try_inverse
from invsemi.morphisms import (
    automorphism_group,
    decompose_clifford_iso,
    find_homomorphisms,
    is_isomorphic,
    morphism_failure,
    reconstruct_clifford_iso,
)
from invsemi.semilattice import validate_semilattice
from invsemi.tables import (
    adjoin_identity,
    direct_product,
    enumerate_subsemigroups,
    identity_element,
    make_table,
    subtable,
)

import oracles

DATA = Path(__file__).parent / "data"


def criterion(number, title):
    return pytest.mark.criterion(number, title)


# shared corpora

def abelian_specs(limit):
    """Every non-decreasing list of cyclic orders >= 2 with product <= ``limit``."""
    def grow(budget, least):
        yield ()
        for k in range(least, budget + 1):
            for rest in grow(budget // k, k):
                yield (k,) + rest
    return sorted(set(grow(limit, 2)), key=lambda s: (prod(s), s))


@lru_cache(maxsize=None)
def homogeneity_corpus():
    """Semilattices up to 5, the Brandt semigroup, and all flattened small Clifford systems."""
    members = [("semilattice", try_inverse(Y)) for Y in semilattices_up_to(5)]
    members.append(("brandt2", try_inverse(corpus.brandt_b2())))
    members += [("clifford", flatten(s)) for s in corpus.clifford_corpus(max_total=24, max_fiber=4)]
    return members


@lru_cache(maxsize=None)
def homogeneity_verdicts():
    out = []
    for kind, S in homogeneity_corpus():
        his = not find_defects(S, "inverse", limit=1)
        hs = not find_defects(S, "plain", limit=1)
        out.append((kind, S, his, hs))
    return out


# criteria

@criterion(1, "homogeneous abelian groups of order <= 32 match the prime-power form")
def test_c1_abelian_groups(record_property):
    specs = abelian_specs(32)
    bad = [
        s for s in specs
        if is_homogeneous(build_abelian(s), "inverse", cap=32).holds != is_homogeneous_abelian_form(s)
    ]
    record_property("detail", f"{len(specs)} specs, {len(bad)} mismatches")
    assert not bad


@criterion(2, "no finite member with more than one idempotent is a HIS")
def test_c2_his_are_groups(record_property):
    rows = homogeneity_verdicts()
    bad = [S for _, S, his, _ in rows if his and len(S.idempotents) > 1]
    groups = sum(1 for _, S, his, _ in rows if his)
    record_property("detail", f"{len(rows)} members, {groups} HIS, {len(bad)} with several idempotents")
    assert not bad


@criterion(3, "HS and HIS agree on every corpus member")
def test_c3_hs_iff_his(record_property):
    rows = homogeneity_verdicts()
    bad = [S for _, S, his, hs in rows if his != hs]
    record_property("detail", f"{len(rows)} members, {len(bad)} disagreements")
    assert not bad


@criterion(4, "homogeneous members are idempotent-transitive with isomorphic maximal subgroups")
def test_c4_necessary_conditions(record_property):
    holders = [S for _, S, his, _ in homogeneity_verdicts() if his]
    bad = [
        S for S in holders
        if not (idempotent_transitivity(S) and maximal_subgroups_pairwise_isomorphic(S))
    ]
    record_property("detail", f"{len(holders)} homogeneous members checked")
    assert holders and not bad


def _relabel(S, perm):
    n = S.size
    back = [0] * n
    for i, p in enumerate(perm):
        back[p] = i
    return try_inverse(make_table([[perm[S.mul(back[x], back[y])] for y in range(n)] for x in range(n)]))


@criterion(5, "Clifford round trip: decompose . flatten = id, flatten . decompose is an isomorphism")
def test_c5_round_trip(record_property):
    fx = corpus.clifford_fixtures()
    assert len(fx) >= 12
    for name, sys in fx.items():
        S = flatten(sys)
        assert classify(S).is_clifford, name
        assert decompose(S) == sys, name
        # scramble the element order, then decompose back
        n = S.size
        perm = [(3 * i + 1) % n if gcd(3, n) == 1 else (n - 1 - i) for i in range(n)]
        R = _relabel(S, perm)
        back, labels = decompose_with_labels(R)
        F = flatten(back)
        assert sorted(labels) == list(range(n)), name
        assert morphism_failure(F.table, R.table, labels) is None, name
        assert is_isomorphic(F.table, S.table), name
    record_property("detail", f"{len(fx)} fixtures")


@criterion(6, "every automorphism of a flattened fixture splits as [theta_alpha, pi] with commuting squares")
def test_c6_iso_decomposition(record_property):
    total = 0
    for name, sys in corpus.clifford_fixtures().items():
        S = flatten(sys)
        if S.size > 24:
            continue
        for m in automorphism_group(S.table, cap=24):
            iso = decompose_clifford_iso(m, sys, sys)
            assert reconstruct_clifford_iso(iso, sys, sys) == m.map, name
            total += 1
    record_property("detail", f"{total} automorphisms decomposed")


@criterion(7, "spined product equals the componentwise system and has size sum |G1||G2|")
def test_c7_spined_product(record_property):
    fx = list(corpus.clifford_fixtures().values())
    pairs = 0
    for s1 in fx:
        for s2 in fx:
            if s1.y.table != s2.y.table:
                continue
            F = flatten(spined_product(s1, s2))
            assert F.size == sum(G.size * H.size for G, H in zip(s1.fibers, s2.fibers))
            assert is_isomorphic(F.table, component_pairs_table(s1, s2))
            pairs += 1
    record_property("detail", f"{pairs} fixture pairs")
    assert pairs


def coprime_factor_pairs(limit):
    groups = [G for n in range(2, 8) for G in small_groups(n)]
    groups += [G for n in range(8, limit // 2 + 1) for G in small_groups(n, abelian_only=True)]
    for H in groups:
        for K in groups:
            if H.size < K.size or H.size * K.size > limit or gcd(H.size, K.size) != 1:
                continue
            yield H, K


@criterion(8, "coprime direct products: subgroups and endomorphisms split")
def test_c8_coprime_splitting(record_property):
    instances = subgroups_checked = endos = 0
    for H, K in coprime_factor_pairs(36):
        G = try_inverse(direct_product(H, K))
        eh, ek = identity_element(H), identity_element(K)
        Hs = frozenset(h * K.size + ek for h in range(H.size))
        Ks = frozenset(eh * K.size + k for k in range(K.size))
        for L in enumerate_subsemigroups(G.table, True, G.inv, cap=36):
            assert subgroup_splits(G, Hs, Ks, L.elements)
            subgroups_checked += 1
        maps = find_homomorphisms(G.table, G.table)
        for m in maps:
            assert morphism_splits(m.map, G, Hs, Ks, G, Hs, Ks)
        # an endomorphism is a pair of factor endomorphisms and nothing else
        assert len(maps) == len(find_homomorphisms(H, H)) * len(find_homomorphisms(K, K))
        endos += len(maps)
        instances += 1
    record_property("detail", f"{instances} products, {subgroups_checked} subgroups, {endos} endomorphisms")
    assert instances


def _w_table(T, Tp):
    full = direct_product(adjoin_identity(T), adjoin_identity(Tp))
    return subtable(full, range(full.size - 1))[0]


@criterion(9, "Imaoka amalgam: Z2*Z3 = Z6, T*_T T = T, semilattices closed, spectra contained, congruences least")
def test_c9_imaoka(record_property):
    res = imaoka_amalgam(small_groups(2)[0], small_groups(3)[0], [0], [0])
    assert res.result.size == 6 and is_isomorphic(res.result.table, small_groups(6)[0])
    assert len(set(res.embed_left.map)) == 2 and len(set(res.embed_right.map)) == 3

    spec = ClassSpec(require_commutative=True, max_size=8)
    gen = members_up_to(ClassSpec(require_commutative=True, max_size=4))
    for T in gen:
        whole = list(range(T.size))
        assert imaoka_amalgam(T, T, whole, whole).result.table == T

    instances = semilattice_cases = congruence_cases = 0
    congruences = {}
    for i, j, U, f in amalgamation_instances(gen, spec):
        T, Tp = try_inverse(gen[i]), try_inverse(gen[j])
        R = imaoka_amalgam(T, Tp, U, list(f)).result
        spectra = set(order_spectrum(T, range(T.size))) | set(order_spectrum(Tp, range(Tp.size)))
        closure = {lcm(a, b) for a in spectra for b in spectra}
        assert set(order_spectrum(R, range(R.size))) <= closure
        if classify(T).is_semilattice and classify(Tp).is_semilattice:
            validate_semilattice(R.table)
            semilattice_cases += 1
        W = _w_table(T.table, Tp.table)
        if W.size <= 10:
            if (i, j) not in congruences:
                congruences[(i, j)] = oracles.all_congruences(W)
            m = Tp.size
            pairs = [(u * (m + 1) + m, T.size * (m + 1) + f[k]) for k, u in enumerate(U)]
            got = congruence_closure(W, pairs).partition
            assert oracles.blocks(got) == oracles.least_congruence(congruences[(i, j)], pairs)
            congruence_cases += 1
        instances += 1
    record_property(
        "detail",
        f"{instances} instances, {semilattice_cases} semilattice, {congruence_cases} congruence oracle checks",
    )


@criterion(10, "bounded Fraisse checks: semilattices <= 5, orders {1,2} AP <= 8, Clifford AP verdict explicit")
def test_c10_fraisse(record_property):
    semilattices = ClassSpec(require_commutative=True, allowed_orders=frozenset({1}), max_size=5)
    rep = check_class_properties(members_up_to(semilattices), semilattices)
    assert rep.hp.holds and rep.jep.holds and rep.ap.holds

    orders = ClassSpec(require_commutative=True, allowed_orders=frozenset({1, 2}), max_size=8)
    ap = check_ap(members_up_to(orders), orders)
    assert ap.holds

    clifford = ClassSpec(require_clifford=True, max_size=5)
    crep = check_class_properties(members_up_to(clifford), clifford)
    assert crep.ap.status in ("failure_witness", "exhausted_bound")
    assert crep.ap.witness is not None and crep.ap.note
    record_property(
        "detail",
        f"semilattice ap {rep.ap.checked} instances; orders ap {ap.checked} instances; "
        f"clifford ap {crep.ap.status}",
    )


def enumeration_cases():
    cases = [make_table(op) for n in (1, 2, 3) for op in oracles.semigroups_of_order(n)]
    cases += [corpus.left_zero(k) for k in (2, 3, 4)] + [corpus.brandt_b2()]
    cases += semilattices_up_to(6)
    cases += members_up_to(ClassSpec(require_clifford=True, max_size=6))
    cases += [build_abelian(s).table for s in abelian_specs(8)]
    big = members_up_to(ClassSpec(require_commutative=True, allowed_orders=frozenset({1, 2}), max_size=8))
    cases += list(islice((T for T in big if T.size >= 7), 0, None, 25))
    return cases


@criterion(11, "closure-based subalgebra enumeration equals subset filtering for |S| <= 8")
def test_c11_enumeration_oracle(record_property):
    plain = inverse = 0
    for S in enumeration_cases():
        got = [s.sorted() for s in enumerate_subsemigroups(S)]
        assert got == oracles.closed_subsets(S)
        plain += 1
        try:
            T = try_inverse(S)
        except Exception:
            continue
        got = [s.sorted() for s in enumerate_subsemigroups(S, True, T.inv)]
        assert got == oracles.closed_subsets(S, T.inv)
        inverse += 1
    record_property("detail", f"{plain} tables plain, {inverse} inverse")


CLI_RUNS = [
    ["analyze", "brandt2.tbl"],
    ["homog", "klein4.tbl", "--mode", "inverse"],
    ["homog", "diamond.tbl", "--mode", "plain", "--all-defects"],
    ["aut", "klein4.tbl"],
    ["iso", "z6.tbl", "z6.tbl"],
    ["clifford-flatten", "chain2_z4_to_z2.json"],
    ["clifford-decompose", "chain3.tbl"],
    ["kernels", "chain2_z4_to_z2.json"],
    ["spined", "chain2_z4_to_z2.json", "chain2_z2_identity.json"],
    ["trivial-system", "chain2.tbl", "z2.tbl"],
    ["product-system", "chain2.tbl", "z2.tbl"],
    ["amalgamate", "z2.tbl", "z3.tbl", "--shared", "0:0"],
    ["fraisse-check", "semilattices.json", "--max-size", "4"],
    ["chain", "trivial.tbl", "semilattices.json", "--steps", "2"],
    ["clifford-flatten", "missing-morphism.json"],
]


@criterion(12, "every CLI command gives byte-identical output on repeated runs")
def test_c12_cli_determinism(record_property):
    def run(argv):
        proc = subprocess.run(
            [sys.executable, "-m", "invsemi.cli"] + argv, cwd=DATA, capture_output=True, check=False,
        )
        return proc.returncode, proc.stdout, proc.stderr

    for argv in CLI_RUNS:
        first, second = run(argv), run(argv)
        assert first == second, argv
        assert first[1] or first[2], argv
    record_property("detail", f"{len(CLI_RUNS)} commands run twice")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
