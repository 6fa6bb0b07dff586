"""Color-profile arithmetic and the total order on play values.

A finite color profile counts, per color, how many times that color occurs
along a finite play.  The two infinities stand for the extreme play values:
``-inf`` for plays player 0 has already lost, ``+inf`` for plays player 0
keeps winning forever.  Profiles of the same dimension are ordered by the
highest color at which they differ: more visits to an even color is better
for player 0, more visits to an odd color is worse.

Finite profiles store their counts in a parity-folded key (highest color
first, odd-color counts negated) so that this game order coincides with
plain tuple comparison.  All values are immutable and safe to share.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionError, ProfileArithmeticError

_NEG, _FIN, _POS = -1, 0, 1


class ColorProfile:
    """An element of the play-value domain: a d-dimensional count vector or
    one of the two infinities.

    Instances compare with the usual rich operators; ``<`` is the strict
    game order.  Addition is componentwise, an infinity absorbs any finite
    summand, and adding opposite infinities raises
    :class:`ProfileArithmeticError`.  Subtraction is defined for finite
    profiles only.
    """

    __slots__ = ("_sign", "_key")

    def __init__(self, sign: int, key: tuple[int, ...]):
        # Internal: use finite()/zero_profile()/unit_profile() or the two
        # module-level infinity constants instead.
        self._sign = sign
        self._key = key

    @classmethod
    def finite(cls, counts: Sequence[int]) -> "ColorProfile":
        """Build a finite profile from per-color counts, lowest color first."""
        counts = tuple(counts)
        if not counts:
            raise DimensionError("a finite profile needs at least one color")
        d = len(counts)
        key = tuple(counts[k] if k % 2 == 0 else -counts[k] for k in range(d - 1, -1, -1))
        return cls(_FIN, key)

    @property
    def is_finite(self) -> bool:
        return self._sign == _FIN

    @property
    def dimension(self) -> int | None:
        """Number of colors, or None for an infinity."""
        return len(self._key) if self._sign == _FIN else None

    @property
    def counts(self) -> tuple[int, ...]:
        """Per-color counts, lowest color first.  Finite profiles only."""
        if self._sign != _FIN:
            raise ProfileArithmeticError("an infinite profile has no counts")
        key = self._key
        d = len(key)
        return tuple(key[d - 1 - k] if k % 2 == 0 else -key[d - 1 - k] for k in range(d))

    def _require_same_dimension(self, other: "ColorProfile") -> None:
        if len(self._key) != len(other._key):
            raise DimensionError(
                "profile dimensions differ: %d vs %d" % (len(self._key), len(other._key))
            )

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, ColorProfile):
            return NotImplemented
        return self._sign == other._sign and self._key == other._key

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        return hash((self._sign, self._key))

    def __lt__(self, other: "ColorProfile") -> bool:
        if not isinstance(other, ColorProfile):
            return NotImplemented
        if self._sign or other._sign:
            return self._sign < other._sign
        self._require_same_dimension(other)
        return self._key < other._key

    def __le__(self, other: "ColorProfile") -> bool:
        if not isinstance(other, ColorProfile):
            return NotImplemented
        if self._sign or other._sign:
            return self._sign <= other._sign
        self._require_same_dimension(other)
        return self._key <= other._key

    def __gt__(self, other: "ColorProfile") -> bool:
        lt = other.__lt__(self)
        return lt

    def __ge__(self, other: "ColorProfile") -> bool:
        return other.__le__(self)

    def __add__(self, other: "ColorProfile") -> "ColorProfile":
        if not isinstance(other, ColorProfile):
            return NotImplemented
        if self._sign or other._sign:
            if self._sign and other._sign and self._sign != other._sign:
                raise ProfileArithmeticError("+inf plus -inf is undefined")
            return self if self._sign else other
        self._require_same_dimension(other)
        a, b = self._key, other._key
        return ColorProfile(_FIN, tuple(a[i] + b[i] for i in range(len(a))))

    def __sub__(self, other: "ColorProfile") -> "ColorProfile":
        if not isinstance(other, ColorProfile):
            return NotImplemented
        if self._sign or other._sign:
            raise ProfileArithmeticError("subtraction needs two finite profiles")
        self._require_same_dimension(other)
        a, b = self._key, other._key
        return ColorProfile(_FIN, tuple(a[i] - b[i] for i in range(len(a))))

    def __str__(self) -> str:
        if self._sign == _NEG:
            return "-inf"
        if self._sign == _POS:
            return "+inf"
        return "(%s)" % ",".join(str(c) for c in self.counts)

    def __repr__(self) -> str:
        return "ColorProfile(%s)" % self


NEG_INFINITY = ColorProfile(_NEG, ())
POS_INFINITY = ColorProfile(_POS, ())


def compare(a: ColorProfile, b: ColorProfile) -> int:
    """Three-way comparison in the game order: -1, 0 or +1."""
    if a == b:
        return 0
    return -1 if a < b else 1


@lru_cache(maxsize=None)
def zero_profile(d: int) -> ColorProfile:
    """The all-zero profile of dimension d: the value of the empty play."""
    if d < 1:
        raise DimensionError("dimension must be at least 1, got %d" % d)
    return ColorProfile.finite((0,) * d)


@lru_cache(maxsize=None)
def unit_profile(color: int, d: int) -> ColorProfile:
    """The profile of a single visit to `color` in a d-color game."""
    if d < 1:
        raise DimensionError("dimension must be at least 1, got %d" % d)
    if not 0 <= color < d:
        raise DimensionError("color %d outside [0, %d)" % (color, d))
    counts = [0] * d
    counts[color] = 1
    return ColorProfile.finite(counts)


def path_value(colors: Iterable[int], d: int) -> ColorProfile:
    """Sum of unit profiles over a color sequence (the value of a finite path)."""
    if d < 1:
        raise DimensionError("dimension must be at least 1, got %d" % d)
    counts = [0] * d
    for c in colors:
        if not 0 <= c < d:
            raise DimensionError("color %d outside [0, %d)" % (c, d))
        counts[c] += 1
    return ColorProfile.finite(counts)
