"""Exception hierarchy shared by the engine and the CLI.

Each class carries the CLI exit code it maps to.
"""

from __future__ import annotations


class WresError(Exception):
    exit_code = 2


class ParseError(WresError):
    """Malformed polynomial text, rational literal, or request."""

    exit_code = 1

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class StructuralError(WresError):
    """Shape mismatch: ambient rings, invariant lengths, empty inputs."""

    exit_code = 2


class ContractError(WresError):
    """A precondition was violated; signals a logic bug in the caller."""

    exit_code = 2


class VerificationError(WresError):
    """An executable check of a theorem failed (strict drop, vanishing, ...)."""

    exit_code = 3


class ResourceError(WresError):
    """An iteration cap or round limit was hit. Carries the partial state."""

    exit_code = 4

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
