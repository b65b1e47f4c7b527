"""Exception hierarchy.

Three families, mirrored by the CLI exit codes: a mathematical check that
failed (``CheckFailure``, exit 2), malformed or inconsistent input
(``InputError``, exit 3) and an enumeration that would exceed its budget
(``CapacityError``, exit 4).
"""


class TrussError(Exception):
    """Base class; ``witness`` holds the offending tuple when there is one."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class CheckFailure(TrussError):
    pass


class InputError(TrussError, ValueError):
    pass


class CapacityError(TrussError, RuntimeError):
    pass


class StructureError(InputError):
    """Elements from different carriers were mixed."""


class ConstraintViolation(InputError):
    pass


class ArithmeticOverflow(TrussError, OverflowError):
    pass


# truss axioms
class TrussAxiomError(CheckFailure):
    axiom = "truss"


class AssocViolation(TrussAxiomError):
    axiom = "associativity"


class LeftDistribViolation(TrussAxiomError):
    axiom = "left-distributivity"


class RightDistribViolation(TrussAxiomError):
    axiom = "right-distributivity"


class NotMultiHeapMap(CheckFailure):
    pass


class NotIdempotent(CheckFailure):
    pass


class ClosureViolation(CheckFailure):
    pass


# Nijenhuis / affine
class NotAssociative(CheckFailure):
    pass


class NotNijenhuis(CheckFailure):
    pass


class EvenArity(InputError):
    pass


class ConditionNEViolated(CheckFailure):
    pass


class NotCosetPreserving(CheckFailure):
    pass


class NotAffine(CheckFailure):
    pass


class WeightsNotBarycentric(InputError):
    pass


class CompatibilityFailure(CheckFailure):
    pass
