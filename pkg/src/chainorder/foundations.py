"""Shared exact primitives.

Everything in this module is small, pure, and hashable: exact rationals,
the narrow index ranges produced by chain covers, eventually periodic
subsets of the naturals, and the verdict record that order comparisons
return.  No floating point anywhere; geometry stays in ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable

Rational = Fraction


def rational(value: int | str | Fraction) -> Fraction:
    """Coerce an int, a 'p/q' string, or a Fraction to an exact rational."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def rational_str(value: Fraction) -> str:
    """Serialize a rational as 'p/q', or plain 'p' for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class IndexRange:
    """The 1-based link indices containing a point of a chain cover.

    Adjacent links overlap, so a point lies in one link or in two
    consecutive ones; any wider range means the cover is broken.
    """

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 1 <= self.lo <= self.hi <= self.lo + 1:
            raise ValueError(f"not one or two consecutive links: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, index: int) -> bool:
        return self.lo <= index <= self.hi

    def indices(self) -> tuple[int, ...]:
        return tuple(range(self.lo, self.hi + 1))


def _minimal_period(pattern: tuple[bool, ...]) -> tuple[bool, ...]:
    for d in range(1, len(pattern) + 1):
        if len(pattern) % d == 0 and pattern == pattern[:d] * (len(pattern) // d):
            return pattern[:d]
    return pattern


@dataclass(frozen=True)
class EventuallyPeriodicSet:
    """A subset of the naturals with a finite prefix and a repeating tail.

    ``n`` is a member iff ``prefix[n]`` when ``n < len(prefix)``, else
    ``pattern[(n - len(prefix)) % len(pattern)]``.  Construction
    normalizes to the minimal period and the shortest prefix, so equal
    sets compare equal as values.
    """

    prefix: tuple[bool, ...]
    pattern: tuple[bool, ...]

    def __post_init__(self) -> None:
        if not self.pattern:
            raise ValueError("pattern must be nonempty")
        prefix = tuple(bool(b) for b in self.prefix)
        pattern = _minimal_period(tuple(bool(b) for b in self.pattern))
        # Absorbing a prefix bit into the tail rotates the pattern right;
        # rotation preserves the minimal period, so no second reduction.
        while prefix and prefix[-1] == pattern[-1]:
            prefix = prefix[:-1]
            pattern = pattern[-1:] + pattern[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "pattern", pattern)

    # -- constructors ---------------------------------------------------

    @classmethod
    def full(cls) -> EventuallyPeriodicSet:
        return cls((), (True,))

    @classmethod
    def empty(cls) -> EventuallyPeriodicSet:
        return cls((), (False,))

    @classmethod
    def evens(cls) -> EventuallyPeriodicSet:
        return cls((), (True, False))

    @classmethod
    def odds(cls) -> EventuallyPeriodicSet:
        return cls((), (False, True))

    @classmethod
    def finite(cls, elements: Iterable[int]) -> EventuallyPeriodicSet:
        members = set(elements)
        if any(n < 0 for n in members):
            raise ValueError("members must be naturals")
        size = max(members) + 1 if members else 0
        return cls(tuple(n in members for n in range(size)), (False,))

    @classmethod
    def cofinite_from(cls, start: int) -> EventuallyPeriodicSet:
        """All naturals >= start."""
        if start < 0:
            raise ValueError("start must be a natural")
        return cls((False,) * start, (True,))

    @classmethod
    def residue_class(cls, residue: int, modulus: int) -> EventuallyPeriodicSet:
        """All naturals congruent to residue mod modulus."""
        if modulus <= 0:
            raise ValueError("modulus must be positive")
        return cls((), tuple(i == residue % modulus for i in range(modulus)))

    # -- queries ---------------------------------------------------------

    def __contains__(self, n: int) -> bool:
        if n < 0:
            raise ValueError("membership is defined on naturals only")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.pattern[(n - len(self.prefix)) % len(self.pattern)]

    def bits(self, count: int) -> tuple[bool, ...]:
        """Membership bits for 0..count-1."""
        return tuple(n in self for n in range(count))

    def members_below(self, bound: int) -> tuple[int, ...]:
        return tuple(n for n in range(bound) if n in self)

    def is_finite(self) -> bool:
        return not any(self.pattern)

    def is_cofinite(self) -> bool:
        return all(self.pattern)

    def is_empty(self) -> bool:
        return self.is_finite() and not any(self.prefix)

    def is_full(self) -> bool:
        return self.is_cofinite() and all(self.prefix)

    # -- algebra ----------------------------------------------------------

    def _combine(
        self, other: EventuallyPeriodicSet, op: Callable[[bool, bool], bool]
    ) -> EventuallyPeriodicSet:
        start = max(len(self.prefix), len(other.prefix))
        period = lcm(len(self.pattern), len(other.pattern))
        prefix = tuple(op(n in self, n in other) for n in range(start))
        pattern = tuple(op(n in self, n in other) for n in range(start, start + period))
        return EventuallyPeriodicSet(prefix, pattern)

    def union(self, other: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: EventuallyPeriodicSet) -> EventuallyPeriodicSet:
        return self._combine(other, lambda a, b: a and not b)

    def complement(self) -> EventuallyPeriodicSet:
        return EventuallyPeriodicSet(
            tuple(not b for b in self.prefix), tuple(not b for b in self.pattern)
        )

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __invert__ = complement

    def as_dict(self) -> dict:
        return {
            "prefix": [int(b) for b in self.prefix],
            "period": len(self.pattern),
            "pattern": [int(b) for b in self.pattern],
        }


# Verdict kinds.
STABILIZED = "stabilized"
ULTRAFILTER_DEPENDENT = "ultrafilter_dependent"
UNKNOWN = "unknown"

# Directions.
LE = "le"
GE = "ge"
EQ = "eq"


@dataclass(frozen=True)
class ComparisonVerdict:
    """What a depth-bounded comparison of two points established.

    ``stabilized`` means the level relation is constant from ``threshold``
    on, with proof, and ``threshold <= depth``.  ``ultrafilter_dependent``
    means both strict directions recur forever; ``le_set`` is the exact
    set of levels where the first point lies at or below the second, so
    any ultrafilter decides the comparison by voting on that set.
    ``unknown`` reports only that ``depth`` levels were inspected.
    """

    kind: str
    depth: int
    direction: str | None = None
    threshold: int | None = None
    le_set: EventuallyPeriodicSet | None = None
    tower_extended: bool = False
    certificate: dict | None = None

    def __post_init__(self) -> None:
        if self.kind not in (STABILIZED, ULTRAFILTER_DEPENDENT, UNKNOWN):
            raise ValueError(f"unknown verdict kind: {self.kind!r}")
        if self.kind == STABILIZED:
            if self.direction not in (LE, GE, EQ):
                raise ValueError("stabilized verdict needs a direction")
            if self.threshold is None or self.threshold > self.depth:
                raise ValueError("stabilized verdict needs threshold <= depth")
        if self.kind == ULTRAFILTER_DEPENDENT and self.le_set is None:
            raise ValueError("ultrafilter-dependent verdict needs its le_set")

    @classmethod
    def stabilized(
        cls,
        direction: str,
        threshold: int,
        depth: int,
        certificate: dict | None = None,
    ) -> ComparisonVerdict:
        return cls(
            kind=STABILIZED,
            depth=depth,
            direction=direction,
            threshold=threshold,
            certificate=certificate,
        )

    @classmethod
    def ultrafilter_dependent(
        cls,
        le_set: EventuallyPeriodicSet,
        depth: int,
        direction: str | None = None,
        tower_extended: bool = False,
        certificate: dict | None = None,
    ) -> ComparisonVerdict:
        return cls(
            kind=ULTRAFILTER_DEPENDENT,
            depth=depth,
            direction=direction,
            le_set=le_set,
            tower_extended=tower_extended,
            certificate=certificate,
        )

    @classmethod
    def unknown(cls, depth: int) -> ComparisonVerdict:
        return cls(kind=UNKNOWN, depth=depth)

    def as_dict(self) -> dict:
        out: dict = {"kind": self.kind, "depth": self.depth}
        if self.direction is not None:
            out["direction"] = self.direction
        if self.threshold is not None:
            out["threshold"] = self.threshold
        if self.le_set is not None:
            out["le_set"] = self.le_set.as_dict()
        if self.kind == ULTRAFILTER_DEPENDENT:
            out["tower_extended"] = self.tower_extended
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out
