"""Exception hierarchy.

Input problems derive from ``InvalidInput`` (CLI exit code 2); search and
enumeration guards raise ``BudgetExceeded`` (exit code 3).
"""


class NestfanError(Exception):
    pass


class InvalidInput(NestfanError, ValueError):
    pass


class BudgetExceeded(NestfanError):
    pass


class EmptyMember(InvalidInput):
    pass


class EmptySubset(InvalidInput):
    pass


class MissingSingleton(InvalidInput):
    def __init__(self, element):
        self.element = element
        super().__init__(f"missing singleton {{{element}}}")


class NotUnionClosed(InvalidInput):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        super().__init__(
            f"union of intersecting members {sorted(first)} and {sorted(second)} is missing"
        )


class GroundSetTooLarge(InvalidInput):
    pass


class MemberNotInB(InvalidInput):
    pass


class MemberIsBMax(InvalidInput):
    pass


class NotSmooth(InvalidInput):
    pass


class NotComplete(InvalidInput):
    pass


class NonMaximalDimensionCone(InvalidInput):
    pass


class NotAWallConfiguration(InvalidInput):
    pass


class NotWeakFano(InvalidInput):
    pass


class NotFano(InvalidInput):
    pass


class NotSmoothFano(InvalidInput):
    pass


class NotFullDimensional(InvalidInput):
    def __init__(self, rank, dim):
        self.rank = rank
        self.dim = dim
        super().__init__(f"points have affine rank {rank} < {dim}")


class NotConnected(InvalidInput):
    pass


class NotACone(InvalidInput):
    pass


class UnsupportedStar(InvalidInput):
    pass


class InvalidCartanMatrix(InvalidInput):
    pass


class IndexOutOfRange(InvalidInput):
    pass


class OrbitTooLarge(BudgetExceeded):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass
