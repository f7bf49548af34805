"""Exception hierarchy shared by every module.

Three branches matter for the CLI exit-code contract: syntax problems in input
text (exit 2), objects that fail their own defining laws (exit 1), and
operations called outside their preconditions (exit 3).
"""

from __future__ import annotations


class GerbeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GerbeError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnresolvedReference(GerbeError):
    def __init__(self, name: str, kind: str = ""):
        what = f"{kind} {name!r}" if kind else repr(name)
        super().__init__(f"unresolved reference to {what}")
        self.name = name
        self.kind = kind


class ValidationError(GerbeError):
    """An object violates one of its defining laws."""


class PreconditionError(GerbeError):
    """An operation was invoked outside its stated precondition."""


class IndexOutOfRange(GerbeError, IndexError):
    pass


# --- validation failures, named after the law that broke ---

class NotAGroup(ValidationError):
    pass


class NotAHom(ValidationError):
    pass


class NotAnAction(ValidationError):
    pass


class Peiffer1Violation(ValidationError):
    def __init__(self, h: int, g: int):
        super().__init__(f"Peiffer1Violation at (h={h}, g={g})")
        self.h = h
        self.g = g


class Peiffer2Violation(ValidationError):
    def __init__(self, g: int, g2: int):
        super().__init__(f"Peiffer2Violation at (g={g}, g'={g2})")
        self.g = g
        self.g2 = g2


class InvalidCover(ValidationError):
    pass


class NotARefinement(ValidationError):
    def __init__(self, j: int, x: int):
        super().__init__(f"NotARefinement: set {j} has point {x} outside its coarse set")
        self.j = j
        self.x = x


class NotAGroupoid(ValidationError):
    pass


class CocycleRelation1(ValidationError):
    def __init__(self, i: int, j: int, k: int, x: int):
        super().__init__(f"CocycleRelation1 at (i={i}, j={j}, k={k}, x={x})")
        self.witness = (i, j, k, x)


class CocycleRelation2(ValidationError):
    def __init__(self, i: int, j: int, k: int, l: int, x: int):
        super().__init__(f"CocycleRelation2 at (i={i}, j={j}, k={k}, l={l}, x={x})")
        self.witness = (i, j, k, l, x)


class NormalizationViolation(ValidationError):
    def __init__(self, i: int, j: int, x: int):
        super().__init__(f"NormalizationViolation at (i={i}, j={j}, x={x})")
        self.witness = (i, j, x)


class NotSurjective(ValidationError):
    pass


class KernelFiberMismatch(ValidationError):
    def __init__(self, m):
        super().__init__(f"KernelFiberMismatch at object {m!r}")
        self.m = m


class ChiNotEquivariant(ValidationError):
    pass


class ChiRhoViolation(ValidationError):
    pass


class BundleAxiomViolation(ValidationError):
    pass


class NotComposable(ValidationError):
    pass


# --- precondition failures ---

class DomainMismatch(PreconditionError):
    pass


class SearchSpaceTooLarge(PreconditionError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"search space of size {size} exceeds bound {bound}")
        self.size = size
        self.bound = bound


class NotGenSurjSubmersion(PreconditionError):
    pass


class NotAdapted(PreconditionError):
    pass


class BaseNotCech(PreconditionError):
    pass


class BaseMismatch(PreconditionError):
    pass


class BaseNotTrivialGroupoid(PreconditionError):
    pass


class NotRelating(PreconditionError):
    pass


class NotASection(PreconditionError):
    pass


class MiddleMismatch(PreconditionError):
    pass


class ShapeMismatch(PreconditionError):
    pass
