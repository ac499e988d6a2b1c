"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: usage errors exit 2 (argparse),
input/parse/contract errors exit 1, resource errors exit 3.
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed or out-of-range value supplied by a caller."""


class ParseError(InputError):
    """Unreadable graph/set/tree file, with best-effort location info."""

    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", offset {offset}" if offset is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.offset = offset


class ContractError(InputError):
    """A documented precondition of an operation was violated."""


class ResourceLimitError(RuntimeError):
    """A configured budget (search nodes, states, moves) was exhausted.

    ``info`` carries whatever partial result is worth keeping, e.g. the
    best incumbent of an interrupted exact search.
    """

    def __init__(self, message: str, **info):
        super().__init__(message)
        self.info = info


class InvariantError(RuntimeError):
    """An internal invariant broke; this indicates a bug, not bad input."""
