"""Shared error types, check results, and bitmask helpers."""

from __future__ import annotations

from dataclasses import dataclass


class ReductError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ReductError):
    """Malformed document, unusable argument, or unmet precondition.

    Maps to exit code 2 at the command line.
    """


class CapExceeded(InputError):
    """An enumeration would exceed its documented work cap."""


class ParseError(InputError):
    """Term syntax error; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class PropertyViolation(ReductError):
    """A mathematical property that should hold was found violated.

    Maps to exit code 1 at the command line.  The witness describes the
    failing instance.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a boolean-with-witness check.

    Truthiness follows ``ok``.  When ``ok`` is false, ``witness`` holds the
    violating instance and ``reason`` a short human-readable tag.
    """

    ok: bool
    witness: object = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.reason}: {self.witness!r}" if self.reason else repr(self.witness)


def passed() -> CheckResult:
    return CheckResult(True)


def failed(reason: str, witness) -> CheckResult:
    return CheckResult(False, witness=witness, reason=reason)


def bit_indices(mask: int) -> tuple[int, ...]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(indices) -> int:
    """Bitmask with the given indices set."""
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def popcount(mask: int) -> int:
    return bin(mask).count("1")
