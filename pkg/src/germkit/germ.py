"""The group of germs at +infinity of piecewise-linear line maps.

Two increasing PL maps with finitely many breakpoints agree on some ray
``[n, +oo)`` exactly when their affine tails coincide, so the germ of a map
is faithfully represented by the tail pair ``(slope, offset)``.  Germs
multiply by composition of representatives:

    (a1, b1) * (a2, b2) == (a1*a2, a1*b2 + b1)

and carry the left-invariant total order whose positive cone consists of the
germs that are eventually above the diagonal: ``(a, b)`` is positive iff
``a > 1`` or (``a == 1`` and ``b > 0``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .plmap import PLMap
from .rationals import format_rational


class OrderSign(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class Germ:
    """Eventual-agreement class of an increasing PL map, as its affine tail."""

    slope: Fraction
    offset: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "slope", Fraction(self.slope))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if self.slope <= 0:
            raise ValueError("germ slope must be positive")

    @classmethod
    def of(cls, f: PLMap) -> "Germ":
        """Germ of a canonical map: its affine tail."""
        return cls(f.right_slope, f.tail_offset)

    @classmethod
    def identity(cls) -> "Germ":
        return cls(Fraction(1), Fraction(0))

    def __mul__(self, other: "Germ") -> "Germ":
        if not isinstance(other, Germ):
            return NotImplemented
        return Germ(self.slope * other.slope, self.slope * other.offset + self.offset)

    def __invert__(self) -> "Germ":
        return Germ(1 / self.slope, -self.offset / self.slope)

    def is_identity(self) -> bool:
        return self.slope == 1 and self.offset == 0

    def is_positive(self) -> bool:
        """Membership in the positive cone (eventually above the diagonal)."""
        return self.slope > 1 or (self.slope == 1 and self.offset > 0)

    def representative(self) -> PLMap:
        """The affine map with this germ (the canonical representative)."""
        return PLMap.affine(self.slope, self.offset)

    def __repr__(self) -> str:
        return f"Germ({format_rational(self.slope)}, {format_rational(self.offset)})"


def compare(u: Germ, v: Germ) -> OrderSign:
    """Left-invariant total order: ``u < v`` iff ``~u * v`` is positive."""
    if u == v:
        return OrderSign.EQ
    return OrderSign.LT if (~u * v).is_positive() else OrderSign.GT


def eventual_comparison_bound(u: Germ) -> Fraction:
    """A point beyond which a representative of ``u`` stays on one side of
    the diagonal: past this, ``f(x) - x`` has constant sign (or is zero)."""
    if u.slope == 1:
        return Fraction(0)
    return abs(u.offset / (1 - u.slope))
