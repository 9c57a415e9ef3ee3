"""Threads of an inverse limit of PL interval maps, with exact coordinates.

A point is a finite stem of coordinates plus a tail rule saying how the
remaining coordinates are produced: constant zero, a finite branch word,
or an eventually periodic branch word.  Branch letters index the sorted
preimage list of the previous coordinate, so letter 0 is always the
leftmost preimage.

For constant systems whose bonding map has full laps, coordinatewise
comparisons eventually follow a finite state machine over (letter cycle
position, letter cycle position, boundary class, boundary class, sign).
Detecting a recurrence in that machine certifies the sign pattern at
every level at once; that certificate backs the Stabilized and
UltrafilterDependent verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .foundations import (
    EQ,
    GE,
    LE,
    ComparisonVerdict,
    EventuallyPeriodicSet,
    rational,
    rational_str,
)
from .plmaps import PLMap, tent
from .ultrafilter import SimulatedUltrafilter

LT = "LT"
EQL = "EQ"
GT = "GT"


class DepthExceededError(ValueError):
    """A coordinate beyond the reach of a finite branch word was requested."""


@dataclass(frozen=True)
class InverseSystem:
    """Bonding maps f_n : I -> I, where f_n carries coordinate n+1 to n."""

    name: str
    constant: bool
    _rule: Callable[[int], PLMap] = field(compare=False, repr=False)

    def bonding(self, n: int) -> PLMap:
        if n < 0:
            raise ValueError("bonding index must be a natural")
        return self._rule(n)


_TENT_SYSTEM = None


def tent_system() -> InverseSystem:
    """The constant system with the full tent map at every level."""
    global _TENT_SYSTEM
    if _TENT_SYSTEM is None:
        t = tent()
        _TENT_SYSTEM = InverseSystem("tent", True, lambda n: t)
    return _TENT_SYSTEM


@dataclass(frozen=True)
class ZeroTail:
    kind: str = field(default="zero", init=False)

    def as_dict(self) -> dict:
        return {"kind": "zero"}


@dataclass(frozen=True)
class WordTail:
    letters: tuple[int, ...]
    kind: str = field(default="word", init=False)

    def __post_init__(self) -> None:
        letters = tuple(int(l) for l in self.letters)
        if any(l < 0 for l in letters):
            raise ValueError("branch letters are naturals")
        object.__setattr__(self, "letters", letters)

    def as_dict(self) -> dict:
        return {"kind": "word", "letters": list(self.letters)}


@dataclass(frozen=True)
class PeriodicTail:
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]
    kind: str = field(default="periodic", init=False)

    def __post_init__(self) -> None:
        prefix = tuple(int(l) for l in self.prefix)
        cycle = tuple(int(l) for l in self.cycle)
        if not cycle:
            raise ValueError("periodic tail needs a nonempty cycle")
        if any(l < 0 for l in prefix + cycle):
            raise ValueError("branch letters are naturals")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "cycle", cycle)

    def as_dict(self) -> dict:
        return {"kind": "periodic", "prefix": list(self.prefix), "cycle": list(self.cycle)}


Tail = ZeroTail | WordTail | PeriodicTail

_LETTER_CODES = {"L": 0, "R": 1}


def word_letters(word: str) -> tuple[int, ...]:
    """Translate an 'LRL' style branch word to letter indices."""
    try:
        return tuple(_LETTER_CODES[c] for c in word)
    except KeyError as exc:
        raise ValueError(f"unknown branch letter {exc.args[0]!r}") from None


@dataclass(frozen=True)
class ThreadPoint:
    system: InverseSystem
    stem: tuple[Fraction, ...]
    tail: Tail
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        stem = tuple(rational(v) for v in self.stem)
        if not stem:
            raise ValueError("a thread needs at least coordinate zero")
        if any(not 0 <= v <= 1 for v in stem):
            raise ValueError("coordinates must lie in [0,1]")
        for i in range(len(stem) - 1):
            if self.system.bonding(i)(stem[i + 1]) != stem[i]:
                raise ValueError(
                    f"stem breaks the thread condition at level {i}: "
                    f"f_{i}({stem[i + 1]}) != {stem[i]}"
                )
        if isinstance(self.tail, ZeroTail):
            n = len(stem) - 1
            if self.system.bonding(n)(Fraction(0)) != stem[-1]:
                raise ValueError("zero tail does not extend the stem")
        object.__setattr__(self, "stem", stem)

    @property
    def max_level(self) -> int | None:
        """Deepest computable coordinate, or None when unbounded."""
        if isinstance(self.tail, WordTail):
            return len(self.stem) - 1 + len(self.tail.letters)
        return None

    def letter_for_step(self, j: int) -> int:
        """The branch letter producing coordinate j from coordinate j-1."""
        offset = j - len(self.stem)
        if offset < 0:
            raise ValueError("step lies inside the stem")
        if isinstance(self.tail, ZeroTail):
            preimages = self.system.bonding(j - 1).preimages(Fraction(0))
            return preimages.index(Fraction(0))
        if isinstance(self.tail, WordTail):
            if offset >= len(self.tail.letters):
                raise DepthExceededError(
                    f"coordinate {j} exceeds the branch word (max level {self.max_level})"
                )
            return self.tail.letters[offset]
        if offset < len(self.tail.prefix):
            return self.tail.prefix[offset]
        return self.tail.cycle[(offset - len(self.tail.prefix)) % len(self.tail.cycle)]

    def coordinate(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("levels are naturals")
        if n < len(self.stem):
            return self.stem[n]
        if isinstance(self.tail, ZeroTail):
            return Fraction(0)
        if n in self._cache:
            return self._cache[n]
        max_level = self.max_level
        if max_level is not None and n > max_level:
            raise DepthExceededError(
                f"coordinate {n} exceeds the branch word (max level {max_level})"
            )
        start = len(self.stem) - 1
        value = self.stem[start]
        j = start
        while j < n:
            nxt = j + 1
            if nxt in self._cache:
                value = self._cache[nxt]
                j = nxt
                continue
            letter = self.letter_for_step(nxt)
            preimages = self.system.bonding(j).preimages(value)
            if letter >= len(preimages):
                raise ValueError(
                    f"letter {letter} invalid at level {nxt}: "
                    f"{value} has {len(preimages)} preimages"
                )
            value = preimages[letter]
            self._cache[nxt] = value
            j = nxt
        return value

    def has_periodic_certificate(self) -> bool:
        return isinstance(self.tail, (ZeroTail, PeriodicTail))

    def certificate_start(self) -> int:
        """First level from which the branch letters are purely cyclic."""
        if isinstance(self.tail, ZeroTail):
            return len(self.stem)
        if isinstance(self.tail, PeriodicTail):
            return len(self.stem) + len(self.tail.prefix)
        raise ValueError("finite branch words carry no periodic certificate")

    def letter_cycle(self) -> tuple[int, ...]:
        if isinstance(self.tail, ZeroTail):
            zeros = self.system.bonding(0).preimages(Fraction(0))
            return (zeros.index(Fraction(0)),)
        if isinstance(self.tail, PeriodicTail):
            return self.tail.cycle
        raise ValueError("finite branch words carry no periodic certificate")

    def as_dict(self) -> dict:
        return {
            "stem": [rational_str(v) for v in self.stem],
            "tail": self.tail.as_dict(),
        }


def zero_thread(system: InverseSystem) -> ThreadPoint:
    return ThreadPoint(system, (Fraction(0),), ZeroTail())


def thread_from_letters(
    system: InverseSystem,
    x0: int | str | Fraction,
    letters: str | tuple[int, ...] = (),
    cycle: str | tuple[int, ...] | None = None,
) -> ThreadPoint:
    """Build a thread from coordinate zero plus branch letters.

    With ``cycle`` the letters form the preperiod of an eventually
    periodic word; without it they are a finite word (depth-limited).
    """
    prefix = word_letters(letters) if isinstance(letters, str) else tuple(letters)
    if cycle is None:
        tail: Tail = WordTail(prefix)
    else:
        cyc = word_letters(cycle) if isinstance(cycle, str) else tuple(cycle)
        tail = PeriodicTail(prefix, cyc)
    return ThreadPoint(system, (rational(x0),), tail)


def compare_level(x: ThreadPoint, y: ThreadPoint, n: int) -> str:
    a, b = x.coordinate(n), y.coordinate(n)
    if a < b:
        return LT
    if a > b:
        return GT
    return EQL


@dataclass(frozen=True)
class LevelComparisonTrace:
    outcomes: tuple[str, ...]

    def __iter__(self):
        return iter(self.outcomes)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __getitem__(self, i):
        return self.outcomes[i]

    def as_dict(self) -> dict:
        return {"outcomes": list(self.outcomes)}


def level_trace(x: ThreadPoint, y: ThreadPoint, depth: int) -> LevelComparisonTrace:
    """Coordinatewise comparisons at levels 0..depth."""
    if depth < 0:
        raise ValueError("depth must be a natural")
    return LevelComparisonTrace(tuple(compare_level(x, y, n) for n in range(depth + 1)))


_ZERO_BAND, _ONE_BAND, _INT_BAND = 0, 1, 2


@dataclass(frozen=True)
class SignCertificate:
    """Exact sign history plus a proof it repeats from cycle_start on.

    rel(n) = history[n] for n < len(history), and for n >= cycle_start
    rel(n) = cycle[(n - cycle_start) % len(cycle)].
    """

    history: tuple[str, ...]
    cycle_start: int
    cycle: tuple[str, ...]

    def rel(self, n: int) -> str:
        if n < len(self.history):
            return self.history[n]
        return self.cycle[(n - self.cycle_start) % len(self.cycle)]

    def as_dict(self) -> dict:
        return {
            "history": list(self.history),
            "cycle_start": self.cycle_start,
            "cycle": list(self.cycle),
        }


def _band_of(v: Fraction) -> int:
    if v == 0:
        return _ZERO_BAND
    if v == 1:
        return _ONE_BAND
    return _INT_BAND


class _LapGeometry:
    """Combinatorial data of a full-lap map used by the sign machine.

    Positions live on a scale where lap k's interior is 2k+1 and the
    boundary knot to its right is 2k+2; the left endpoint of [0,1] is 0.
    """

    def __init__(self, f: PLMap) -> None:
        if not f.is_full_lap():
            raise ValueError("sign machine needs a full-lap bonding map")
        self.laps = f.laps()
        self.knot_scale: dict[Fraction, int] = {f.breakpoints[self.laps[0].start]: 0}
        for k, lap in enumerate(self.laps):
            self.knot_scale[f.breakpoints[lap.stop]] = 2 * (k + 1)
        self.zero_knots = f.preimages(Fraction(0))
        self.one_knots = f.preimages(Fraction(1))
        for t in self.zero_knots + self.one_knots:
            if t not in self.knot_scale:
                raise AssertionError("extreme preimage not at a lap boundary")

    def step_point(self, band: int, letter: int) -> tuple[int, int, Fraction | None]:
        """(new band, scale position, knot value if at a knot) after one letter."""
        if band == _INT_BAND:
            if letter >= len(self.laps):
                raise ValueError(f"letter {letter} exceeds the {len(self.laps)} laps")
            return _INT_BAND, 2 * letter + 1, None
        knots = self.zero_knots if band == _ZERO_BAND else self.one_knots
        if letter >= len(knots):
            raise ValueError(f"letter {letter} exceeds {len(knots)} boundary preimages")
        t = knots[letter]
        return _band_of(t), self.knot_scale[t], t


def sign_certificate(x: ThreadPoint, y: ThreadPoint) -> SignCertificate:
    """Certify the full coordinatewise sign pattern of (x, y).

    Requires a shared constant full-lap system and periodic-capable tails.
    Exact coordinates drive the preperiod; after both letter streams are
    cyclic, transitions no longer depend on the exact values, so a state
    recurrence pins the pattern forever.
    """
    if x.system != y.system:
        raise ValueError("points live on different systems")
    if not x.system.constant:
        raise ValueError("sign machine needs a constant system")
    if not (x.has_periodic_certificate() and y.has_periodic_certificate()):
        raise ValueError("both points need periodic branch representations")
    f = x.system.bonding(0)
    geo = _LapGeometry(f)

    start = max(x.certificate_start(), y.certificate_start())
    cyc_x, cyc_y = x.letter_cycle(), y.letter_cycle()
    history = [compare_level(x, y, n) for n in range(start + 1)]

    band_x = _band_of(x.coordinate(start))
    band_y = _band_of(y.coordinate(start))
    rel = history[start]
    # Positions of the letters that will produce coordinate start+1.
    pos_x = (start + 1 - x.certificate_start()) % len(cyc_x)
    pos_y = (start + 1 - y.certificate_start()) % len(cyc_y)

    seen: dict[tuple, int] = {}
    state = (pos_x, pos_y, band_x, band_y, rel)
    level = start
    bound = 27 * len(cyc_x) * len(cyc_y) + len(history) + 8
    trail: list[str] = []
    while state not in seen:
        seen[state] = level
        pos_x, pos_y, band_x, band_y, rel = state
        lx, ly = cyc_x[pos_x], cyc_y[pos_y]
        new_band_x, scale_x, _ = geo.step_point(band_x, lx)
        new_band_y, scale_y, _ = geo.step_point(band_y, ly)
        if scale_x < scale_y:
            new_rel = LT
        elif scale_x > scale_y:
            new_rel = GT
        elif scale_x % 2 == 0:
            new_rel = EQL  # same boundary knot
        else:
            # Same lap interior, hence the same letter applied to both
            # base values: a strictly monotone branch keeps or flips the
            # strict sign and preserves equality.
            if rel == EQL:
                new_rel = EQL
            elif geo.laps[(scale_x - 1) // 2].increasing:
                new_rel = rel
            else:
                new_rel = LT if rel == GT else GT
        level += 1
        state = (
            (pos_x + 1) % len(cyc_x),
            (pos_y + 1) % len(cyc_y),
            new_band_x,
            new_band_y,
            new_rel,
        )
        trail.append(new_rel)
        if level - start > bound:
            raise AssertionError("sign machine failed to recur within its bound")

    cycle_start = seen[state]
    history.extend(trail)
    # The state seen at `cycle_start` reproduces at `level`, so the rels
    # at levels cycle_start+1..level repeat forever.
    cycle = tuple(history[cycle_start + 1 : level + 1])
    cert = SignCertificate(tuple(history[: level + 1]), cycle_start + 1, cycle)

    for probe in range(start + 1, min(start + 4, len(cert.history))):
        if compare_level(x, y, probe) != cert.rel(probe):
            raise AssertionError("sign machine disagrees with exact coordinates")
    if EQL in cert.cycle and set(cert.cycle) != {EQL}:
        raise AssertionError("equality cannot recur alongside strict signs")
    return cert


def inverse_limit_order(
    x: ThreadPoint,
    y: ThreadPoint,
    ultrafilter: SimulatedUltrafilter,
    depth: int,
) -> ComparisonVerdict:
    """Compare two threads in the chain-induced order voted by the ultrafilter.

    Stabilized verdicts need the sign trace constant from a threshold at
    most `depth` and a recurrence certificate; genuinely alternating
    patterns are returned UltrafilterDependent together with the exact
    eventually periodic set of levels where x <= y holds, and the
    ultrafilter's verdict on that set.  Anything weaker is Unknown.
    """
    if depth < 0:
        raise ValueError("depth must be a natural")
    if x.system != y.system:
        raise ValueError("points live on different systems")
    for p in (x, y):
        if p.max_level is not None and p.max_level < depth:
            raise DepthExceededError(
                f"point only reaches level {p.max_level}, below depth {depth}"
            )
    if x == y:
        return ComparisonVerdict.stabilized(EQ, 0, depth)

    certifiable = (
        x.system.constant
        and x.has_periodic_certificate()
        and y.has_periodic_certificate()
        and x.system.bonding(0).is_full_lap()
    )
    if not certifiable:
        return ComparisonVerdict.unknown(depth)

    cert = sign_certificate(x, y)
    kinds = set(cert.cycle)
    if kinds == {EQL}:
        if set(cert.history) != {EQL}:
            raise AssertionError("equal tails must be equal at every level")
        return ComparisonVerdict.stabilized(EQ, 0, depth, certificate=cert.as_dict())
    if kinds in ({LT}, {GT}):
        direction = LE if kinds == {LT} else GE
        target = LT if kinds == {LT} else GT
        threshold = cert.cycle_start
        while threshold > 0 and cert.history[threshold - 1] == target:
            threshold -= 1
        if threshold > depth:
            return ComparisonVerdict.unknown(depth)
        return ComparisonVerdict.stabilized(direction, threshold, depth, certificate=cert.as_dict())

    le_prefix = tuple(r != GT for r in cert.history[: cert.cycle_start])
    le_pattern = tuple(r != GT for r in cert.cycle)
    le_set = EventuallyPeriodicSet(le_prefix, le_pattern)
    decision = ultrafilter.decide(le_set)
    return ComparisonVerdict.ultrafilter_dependent(
        le_set,
        depth,
        direction=LE if decision.value else GE,
        tower_extended=decision.extended,
        certificate=cert.as_dict(),
    )


def fiber_diameter_bound(system: InverseSystem, n: int) -> Fraction:
    """Diameter bound for a fiber of the level-n projection.

    Points sharing coordinate n share all coordinates up to n, so only
    the tail mass sum_{i>n} 2^-i remains.
    """
    if n < 0:
        raise ValueError("levels are naturals")
    return Fraction(1, 2**n)


def epsilon_map_modulus(system: InverseSystem, n: int, eps: int | Fraction) -> Fraction:
    """A delta such that level-n sets of diameter < delta pull back to
    thread sets of diameter < eps.

    Coordinates below n are Lipschitz images of coordinate n, giving
    d(x, y) <= S_n * |x_n - y_n| + 2^-n with S_n the weighted Lipschitz
    sum; delta = (eps - 2^-n) / S_n (capped at 1) makes that < eps.
    """
    if n < 0:
        raise ValueError("levels are naturals")
    eps = rational(eps)
    gamma = Fraction(1, 2**n)
    if eps <= gamma:
        raise ValueError(f"eps must exceed the fiber diameter bound {gamma}")
    weighted = Fraction(0)
    lip_product = Fraction(1)
    for i in range(n, -1, -1):
        weighted += Fraction(1, 2**i) * lip_product
        if i > 0:
            lip_product *= system.bonding(i - 1).lipschitz()
    delta = (eps - gamma) / weighted
    return min(Fraction(1), delta)


def distance_bounds(x: ThreadPoint, y: ThreadPoint, depth: int) -> tuple[Fraction, Fraction]:
    """Exact lower and upper bounds on d(x,y) from the first depth+1 levels."""
    if depth < 0:
        raise ValueError("depth must be a natural")
    head = sum(
        (Fraction(1, 2**i) * abs(x.coordinate(i) - y.coordinate(i)) for i in range(depth + 1)),
        Fraction(0),
    )
    return head, head + Fraction(1, 2**depth)
