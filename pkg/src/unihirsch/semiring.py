"""Max-type semirings over 64-bit signed integers.

Values are plain Python ints confined to the int64 range.  The most negative
int64 is reserved as the bottom element, so the semiring order coincides with
integer order and ``combine`` is just ``max``.  Every forward pass in the
package relies on that: it compares values with ``>`` directly.
"""

from __future__ import annotations

from dataclasses import dataclass

BOTTOM = -(2**63)
TOP = 2**63 - 1
# smallest attainable score; everything below is bottom
FLOOR = BOTTOM + 1


class SemiringError(ValueError):
    """A value does not belong to the semiring's domain."""


def _saturate(x: int) -> int:
    if x > TOP:
        return TOP
    if x < FLOOR:
        return FLOOR
    return x


@dataclass(frozen=True)
class Semiring:
    """A totally ordered (max, +)-type algebra.

    Both shipped instances share the arithmetic: ``combine`` is max and
    ``extend`` is saturating addition with an absorbing bottom.  They differ
    only in which values they admit.
    """

    tag: str
    bottom: int = BOTTOM
    one: int = 0
    nonnegative: bool = False

    def combine(self, a: int, b: int) -> int:
        return a if a >= b else b

    def extend(self, a: int, b: int) -> int:
        if a == BOTTOM or b == BOTTOM:
            return BOTTOM
        return _saturate(a + b)

    def leq(self, a: int, b: int) -> bool:
        return a <= b

    def fold(self, values) -> int:
        """Multiply a sequence of values, starting from the identity."""
        acc = self.one
        for v in values:
            acc = self.extend(acc, v)
        return acc

    def validate(self, x: int) -> int:
        if not isinstance(x, int) or isinstance(x, bool):
            raise SemiringError(f"{self.tag}: expected an integer, got {x!r}")
        if x == BOTTOM:
            return x
        if not FLOOR <= x <= TOP:
            raise SemiringError(f"{self.tag}: {x} outside the int64 score range")
        if self.nonnegative and x < 0:
            raise SemiringError(f"{self.tag}: negative score {x}")
        return x


MAX_PLUS = Semiring("max-plus")
# match-counting scores: the same algebra restricted to naturals
LCS = Semiring("lcs", nonnegative=True)

SEMIRINGS = {s.tag: s for s in (MAX_PLUS, LCS)}


def get_semiring(tag: str) -> Semiring:
    try:
        return SEMIRINGS[tag]
    except KeyError:
        raise SemiringError(
            f"unknown semiring {tag!r}; choose from {sorted(SEMIRINGS)}"
        ) from None


def format_value(x: int) -> str:
    return "bottom" if x == BOTTOM else str(x)


def parse_value(token: str) -> int:
    return BOTTOM if token == "bottom" else int(token)
