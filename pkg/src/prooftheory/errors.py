"""
Error families shared by the proof toolkit.

Every error is a ValueError so callers that only care about "bad input"
can keep catching ValueError. The CLI turns the family into an exit code.
"""

from typing import Optional, Tuple


class ProofToolError(ValueError):
    """Base class for every toolkit failure."""
    exit_code = 1


class ParseError(ProofToolError):
    """Malformed s-expression or an s-expression of the wrong shape."""
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None and line > 0:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class CheckError(ProofToolError):
    """A rule schema, side condition or proof condition is violated."""
    exit_code = 3

    def __init__(self, message: str, path: Tuple[int, ...] = (), condition: str = ""):
        self.path = tuple(path)
        self.condition = condition
        super().__init__(message)


class EmbeddingError(ProofToolError):
    """The input derivation is outside what the embedding accepts."""
    exit_code = 4


class CertificateFailure(ProofToolError):
    """A required essential-order fact could not be certified."""
    exit_code = 5

    def __init__(self, low, high, context):
        self.triple = (low, high, context)
        super().__init__(f"no certificate for {low} << {high} {{{context}}}")


class SideConditionFailure(ProofToolError):
    """A rewritten proof does not satisfy the proof conditions or does not descend."""
    exit_code = 6


class NoRedex(ProofToolError):
    """A bar sequent exists but none of the reduction patterns matches."""
    exit_code = 7


class InvalidTerm(ProofToolError):
    """An ordinal term or index violates its canonical-form invariants."""
    exit_code = 8
