"""Shared exception types and monotonicity-violation witnesses."""

from __future__ import annotations

from dataclasses import dataclass


class CapacityError(ValueError):
    """An operation would materialize or scan more grid points than allowed."""


class InfeasibleLevelError(ValueError):
    """No grid point satisfies the requested bounds and coordinate sum."""


class InstanceFormatError(ValueError):
    """An instance file failed to parse; carries the offending line number."""

    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: {reason}")


@dataclass(frozen=True)
class Violation:
    """Witness that F is not monotone: x <= y but not F(x) <= F(y)."""

    x: tuple
    y: tuple
    fx: tuple
    fy: tuple


def find_violation_pair(pairs) -> Violation | None:
    """Scan (point, value) pairs for an explicit violating pair.

    Pairs with unknown value (None) are skipped.
    """
    known = [(p, v) for p, v in pairs if v is not None]
    for xp, xv in known:
        for yp, yv in known:
            if xp == yp:
                continue
            if all(a <= b for a, b in zip(xp, yp)) and not all(
                a <= b for a, b in zip(xv, yv)
            ):
                return Violation(xp, yp, xv, yv)
    return None


class MonotonicityViolation(Exception):
    """The observed F-values cannot belong to any monotone function.

    ``implicated`` is the constant-size set of (point, F(point)) pairs the
    failing step examined (value None when never queried). ``witness`` is an
    explicit violating pair when one exists among them; extracting it is best
    effort, the implicated set itself is the reliable diagnostic.
    """

    def __init__(self, message: str, implicated=(), witness: Violation | None = None):
        self.implicated = tuple(implicated)
        self.witness = witness if witness is not None else find_violation_pair(self.implicated)
        super().__init__(message)

    def extended(self, extra_pairs) -> "MonotonicityViolation":
        """Same failure with more context points attached (dedup by point)."""
        merged: dict = {}
        for p, v in tuple(self.implicated) + tuple(extra_pairs):
            if p not in merged or merged[p] is None:
                merged[p] = v
        return MonotonicityViolation(str(self), tuple(merged.items()))
