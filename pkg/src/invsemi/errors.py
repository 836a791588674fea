"""Exception hierarchy.

Errors fall in three families, mirrored by the CLI exit codes: malformed
input (``FormatError``), inputs that parse but violate a structural
precondition (``StructureError``), and size guards (``CapError``).
"""


class AlgebraError(Exception):
    exit_code = 1

    def __init__(self, *args):
        super().__init__(*args)
        self.witness = args

    @property
    def kind(self):
        return type(self).__name__

    def to_dict(self):
        return {"error": self.kind, "witness": [_plain(w) for w in self.witness]}


def _plain(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, tuple):
        return [_plain(y) for y in x]
    return x


class FormatError(AlgebraError):
    exit_code = 2


class StructureError(AlgebraError):
    exit_code = 3


class CapError(AlgebraError):
    exit_code = 4


class SizeCapExceeded(CapError):
    pass


class BudgetExceeded(CapError):
    pass


class OutOfRange(FormatError):
    pass


class NotAssociative(StructureError):
    pass


class EmptyGeneratorSet(StructureError):
    pass


class NotClosed(StructureError):
    pass


class NotInverse(StructureError):
    pass


class NoInverse(NotInverse):
    pass


class MultipleInverses(NotInverse):
    pass


class NotIdempotent(StructureError):
    pass


class NotCommutative(StructureError):
    pass


class NotMeetClosed(StructureError):
    pass


class NotEmbedding(StructureError):
    pass


class NotAGroup(StructureError):
    pass


class NotAbelian(StructureError):
    pass


class MissingMorphism(StructureError):
    pass


class NotHomomorphism(StructureError):
    pass


class CompositionFails(StructureError):
    pass


class NotClifford(StructureError):
    pass


class SemilatticeMismatch(StructureError):
    pass


class NotSubSemilattice(StructureError):
    pass


class NotSubgroup(StructureError):
    pass


class NotPreserved(StructureError):
    pass


class NotIsomorphism(StructureError):
    pass


class SquareFails(StructureError):
    pass


class NotMatchingSubalgebras(StructureError):
    pass


class EmbeddingCollapsed(StructureError):
    pass


class SpecViolation(StructureError):
    pass
