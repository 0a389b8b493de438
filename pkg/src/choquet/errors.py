"""Exception hierarchy shared by every module."""


class ChoquetError(Exception):
    """Base class for all library errors."""


class InputError(ChoquetError):
    """Malformed or invalid input (CLI exit code 1)."""


class NumericError(ChoquetError):
    """A numerical procedure failed (CLI exit code 2)."""


class NotHermitian(InputError):
    pass


class EmptyInput(InputError):
    pass


class ZeroWeight(InputError):
    pass


class NonpositiveWeight(InputError):
    pass


class NotUnimodular(InputError):
    pass


class NotScalarBlock(InputError):
    pass


class ScalarOperator(InputError):
    pass


class UnsupportedDescriptor(InputError):
    pass


class NoConvergence(NumericError):
    pass


class DecompositionFailure(NumericError):
    pass


class CountMismatch(NumericError):
    pass


class HyponormalityFails(ChoquetError):
    """[T*, T] is not positive semidefinite, so no certified output exists."""


class ParseError(InputError):
    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(InputError):
    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path
