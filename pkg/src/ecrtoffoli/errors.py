"""Exception hierarchy shared by every module."""


class EcrToffoliError(Exception):
    """Base class for all library errors."""


class NonHermitian(EcrToffoliError, ValueError):
    pass


class NotPowerOfTwo(EcrToffoliError, ValueError):
    pass


class DimMismatch(EcrToffoliError, ValueError):
    pass


class NotUnitary(EcrToffoliError, ValueError):
    pass


class UnknownGate(EcrToffoliError, LookupError):
    pass


class WrongParamCount(EcrToffoliError, ValueError):
    pass


class CircuitSyntaxError(EcrToffoliError, ValueError):
    """Malformed circuit text. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class QubitOutOfRange(CircuitSyntaxError):
    pass


class DuplicateQubit(CircuitSyntaxError):
    pass


class TooManyQubits(EcrToffoliError, ValueError):
    pass


class VerificationFailed(EcrToffoliError, RuntimeError):
    pass


class SearchFailed(EcrToffoliError, RuntimeError):
    pass


class UnsupportedGate(EcrToffoliError, ValueError):
    pass


class NoFeasibleDecomposition(EcrToffoliError, RuntimeError):
    pass


class AmbiguousDressing(EcrToffoliError, ValueError):
    pass


class DegenerateCoeffs(EcrToffoliError, ValueError):
    pass
