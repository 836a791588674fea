"""Does every isomorphism between subalgebras extend to an automorphism?

For a finite structure every subalgebra is finitely generated, so the check
is exhaustive. It is organised around isomorphism classes of subalgebras.
Fix a representative ``A`` of a class. Then

* every isomorphism ``A -> B`` extends iff one does and the setwise
  stabiliser of ``A`` in ``Aut(S)`` restricts onto all of ``Aut(A)``;
* the restricted stabiliser is a subgroup of ``Aut(A)``, so it is built up
  from the extensions found so far and an extension search is only run for
  automorphisms of ``A`` it does not already contain.

This never lists ``Aut(S)`` itself, which matters for groups such as
``Z_2^5`` whose automorphism group has about ten million elements.
"""
from dataclasses import dataclass, field

from .errors import NotClosed, SizeCapExceeded
from .inverse import maximal_subgroup
from .morphisms import (
    automorphism_count,
    automorphism_orbit,
    compose,
    extend_to_automorphism,
    first_isomorphism,
    iter_morphisms,
)
from .tables import (
    enumerate_subsemigroups,
    generate_closure,
    is_closed,
    monogenic_size,
    subtable,
)

DEFAULT_HOMOG_CAP = 24
DEFAULT_DEFECT_LIMIT = 10


@dataclass
class Defect:
    A: list
    B: list
    map: list

    def to_dict(self):
        return {"A": self.A, "B": self.B, "map": self.map}


@dataclass
class HomogeneityReport:
    mode: str
    holds: bool
    defects: list = field(default_factory=list)
    aut_count: int = 0
    idempotent_transitive: bool = False
    max_subgroups_isomorphic: bool = False

    def to_dict(self):
        return {
            "mode": self.mode,
            "holds": self.holds,
            "defect_count": len(self.defects),
            "defects": [d.to_dict() for d in self.defects],
            "aut_count": self.aut_count,
            "idempotent_transitive": self.idempotent_transitive,
            "max_subgroups_isomorphic": self.max_subgroups_isomorphic,
        }


def subalgebras(S, mode, cap=DEFAULT_HOMOG_CAP):
    if mode not in ("inverse", "plain"):
        raise ValueError(f"unknown mode {mode!r}")
    use_inv = mode == "inverse"
    subs = enumerate_subsemigroups(S.table, use_inv, S.inv if use_inv else None, cap=cap)
    return [s.sorted() for s in subs]


def _signature(S, elems):
    return (len(elems), tuple(sorted((S.mul(a, a) == a, monogenic_size(S.table, a)) for a in elems)))


def isomorphism_classes(S, subs):
    """Group sorted element lists into isomorphism classes, in canonical order."""
    tables = {}
    classes = []
    by_sig = {}
    for elems in subs:
        tab, _ = subtable(S.table, elems)
        tables[tuple(elems)] = tab
        sig = _signature(S, elems)
        for cls in by_sig.setdefault(sig, []):
            if first_isomorphism(tables[tuple(cls[0])], tab) is not None:
                cls.append(elems)
                break
        else:
            cls = [elems]
            by_sig[sig].append(cls)
            classes.append(cls)
    return classes, tables


def _as_partial(A, B, iso):
    return {a: B[iso[i]] for i, a in enumerate(A)}


def _restricted_subgroup_closure(H, gens, new):
    """Add ``new`` to a permutation group ``H`` given with its generators."""
    gens.append(new)
    frontier = list(H)
    while frontier:
        nxt = []
        for h in frontier:
            for t in gens:
                ht = compose(h, t)
                if ht not in H:
                    H.add(ht)
                    nxt.append(ht)
        frontier = nxt


def _monogenic(S, mode):
    use_inv = mode == "inverse"
    found = set()
    for a in range(S.size):
        c = generate_closure(S.table, {a}, use_inv, S.inv if use_inv else None)
        found.add(tuple(c.sorted()))
    return sorted((list(c) for c in found), key=lambda c: (len(c), c))


def _class_defects(S, classes, tables, record):
    full = list(range(S.size))
    for cls in classes:
        A = cls[0]
        if A == full:
            continue
        tA = tables[tuple(A)]
        pos = {a: i for i, a in enumerate(A)}
        for B in cls[1:]:
            iso = first_isomorphism(tA, tables[tuple(B)])
            partial = _as_partial(A, B, iso)
            if extend_to_automorphism(S.table, partial) is None:
                if record(A, B, partial):
                    return True
        # automorphisms of A realised by the setwise stabiliser of A
        ident = tuple(range(len(A)))
        realised, gens = {ident}, []
        for alpha in iter_morphisms(tA, tA, "iso"):
            if alpha in realised:
                continue
            partial = _as_partial(A, A, alpha)
            sigma = extend_to_automorphism(S.table, partial)
            if sigma is None:
                if record(A, A, partial):
                    return True
                continue
            _restricted_subgroup_closure(realised, gens, tuple(pos[sigma[a]] for a in A))
    return False


def find_defects(S, mode, cap=DEFAULT_HOMOG_CAP, limit=DEFAULT_DEFECT_LIMIT):
    """Isomorphisms between subalgebras that do not extend, up to ``limit`` of them.

    One-generated subalgebras are screened first since most failures already
    show there; the full enumeration runs only if the screen finds nothing.
    """
    if S.size > cap:
        raise SizeCapExceeded(S.size, cap)
    if mode not in ("inverse", "plain"):
        raise ValueError(f"unknown mode {mode!r}")
    defects = []

    def record(A, B, partial):
        defects.append(Defect(list(A), list(B), [partial[a] for a in A]))
        return limit is not None and len(defects) >= limit

    classes, tables = isomorphism_classes(S, _monogenic(S, mode))
    if _class_defects(S, classes, tables, record) or defects:
        return defects
    classes, tables = isomorphism_classes(S, subalgebras(S, mode, cap))
    _class_defects(S, classes, tables, record)
    return defects


def idempotent_transitivity(S):
    E = list(S.idempotents)
    return set(automorphism_orbit(S.table, E[0])) >= set(E)


def maximal_subgroups_pairwise_isomorphic(S):
    groups = [subtable(S.table, maximal_subgroup(S, e))[0] for e in S.idempotents]
    return all(first_isomorphism(groups[0], G) is not None for G in groups[1:])


def is_homogeneous(S, mode="inverse", cap=DEFAULT_HOMOG_CAP, defect_limit=DEFAULT_DEFECT_LIMIT):
    defects = find_defects(S, mode, cap, defect_limit)
    return HomogeneityReport(
        mode=mode,
        holds=not defects,
        defects=defects,
        aut_count=automorphism_count(S.table),
        idempotent_transitive=idempotent_transitivity(S),
        max_subgroups_isomorphic=maximal_subgroups_pairwise_isomorphic(S),
    )


def is_quasi_characteristic(S, A):
    """Any automorphism moving some element of ``A`` into ``A`` maps ``A`` into ``A``."""
    A = frozenset(A)
    if not A or not is_closed(S.table, A):
        raise NotClosed(sorted(A))
    for sigma in iter_morphisms(S.table, S.table, "iso"):
        if any(sigma[a] in A for a in A) and not all(sigma[x] in A for x in A):
            return False
    return True


def hs_iff_his_check(S, cap=DEFAULT_HOMOG_CAP):
    plain = not find_defects(S, "plain", cap, limit=1)
    inverse = not find_defects(S, "inverse", cap, limit=1)
    return plain == inverse
