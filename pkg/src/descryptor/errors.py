"""Exception hierarchy shared by every module."""


class DescryptorError(Exception):
    """Base class for all package errors."""


class ContractError(DescryptorError, ValueError):
    """A caller violated an operation's precondition (bad sizes, indices, labels)."""


class ResourceError(DescryptorError):
    """A dense computation would exceed the configured size cap."""


class CircuitError(ContractError):
    """Malformed gate or circuit; ``line`` is set when raised by the parser."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PreconditionError(DescryptorError):
    """An analysis was asked for on a state that does not satisfy its premise."""


class DecompositionError(DescryptorError):
    """No certificate could be produced; carries the best residual reached."""

    def __init__(self, message: str, residual: float | None = None):
        self.residual = residual
        super().__init__(message)
