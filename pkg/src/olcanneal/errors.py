"""Exception hierarchy shared by the pipeline stages."""


class OlcAnnealError(Exception):
    """Base class for all errors raised by olcanneal."""


class InvalidArgument(OlcAnnealError, ValueError):
    pass


class FastaParseError(InvalidArgument):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class NotAcyclicError(InvalidArgument):
    """Raised when an encoding that needs a DAG receives a cyclic graph.

    ``cycle`` holds one witness cycle as a list of ``(u, v)`` vertex pairs.
    """

    def __init__(self, cycle):
        self.cycle = list(cycle)
        path = " -> ".join(str(u) for u, _ in self.cycle)
        if self.cycle:
            path += f" -> {self.cycle[0][0]}"
        super().__init__(f"graph is not acyclic; cycle: {path}")


class TooLargeError(InvalidArgument):
    pass


class PreconditionError(InvalidArgument):
    pass


class DecompositionError(InvalidArgument):
    pass


class DecodeError(OlcAnnealError):
    """A solver configuration does not describe a valid path."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class InvalidPathError(DecodeError):
    pass


class CorruptionError(OlcAnnealError):
    pass


class StitchError(OlcAnnealError):
    pass
