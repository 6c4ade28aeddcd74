"""Exception hierarchy shared by every layer of the engine."""


class StwError(Exception):
    """Base class for all engine errors."""


class NotPrime(StwError, ValueError):
    pass


class NotNilpotent(StwError, ArithmeticError):
    pass


class NoSolution(StwError, ArithmeticError):
    """A linear system x·m = b is inconsistent."""


class AlgebraError(StwError):
    pass


class NotAssociative(AlgebraError):
    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__("(b%d*b%d)*b%d != b%d*(b%d*b%d)" % (
            witness[0], witness[1], witness[2], witness[0], witness[1], witness[2]))


class NoUnit(AlgebraError):
    pass


class NotLocal(AlgebraError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotSymmetric(AlgebraError):
    pass


class NotNilpotentElement(AlgebraError):
    pass


class FreenessFailed(AlgebraError):
    def __init__(self, side, power, rank, expected):
        self.side, self.power, self.rank, self.expected = side, power, rank, expected
        super().__init__("%s multiplication by x^%d has rank %d, expected %d"
                         % (side, power, rank, expected))


class ModuleError(StwError):
    """Action matrices do not define a module."""


class AlgebraMismatch(StwError):
    pass


class LiftFailed(StwError):
    pass


class NotSurjective(StwError):
    pass


class NotTruncatedPolynomial(StwError):
    pass


class HypothesisFailed(StwError):
    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class CommutationFailed(HypothesisFailed):
    pass


class NotWellDefined(HypothesisFailed):
    pass


class EndoRingMismatch(HypothesisFailed):
    pass


class BadParameter(StwError, ValueError):
    pass


class RewriteDiverged(StwError):
    pass


class InvalidWord(StwError, ValueError):
    pass


class ParseError(StwError):
    pass
