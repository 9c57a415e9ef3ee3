"""Chain covers, their level preorders, and orders pulled back to threads.

A chain level assigns every point the one or two consecutive links that
contain it.  Comparing two points at one level keeps whichever of
x-before-y / y-before-x the link indices allow; a genuine chain always
allows at least one.  Sequences of levels with shrinking mesh then give
limit orders, decided levelwise and voted on by an ultrafilter when the
levelwise answers keep alternating.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .foundations import (
    EQ,
    GE,
    LE,
    STABILIZED,
    ComparisonVerdict,
    EventuallyPeriodicSet,
    IndexRange,
    rational,
    rational_str,
)
from .inverse_limit import (
    InverseSystem,
    ThreadPoint,
    epsilon_map_modulus,
    fiber_diameter_bound,
    sign_certificate,
)
from .ultrafilter import SimulatedUltrafilter

LE_ONLY = "le_only"
GE_ONLY = "ge_only"
BOTH = "both"


class MeshBudgetError(ValueError):
    """The base chain is too coarse for the requested pullback mesh."""


def level_preorder(range_x: IndexRange, range_y: IndexRange) -> str:
    """Which of x-before-y / y-before-x the two index ranges allow."""
    le = range_x.lo <= range_y.hi
    ge = range_y.lo <= range_x.hi
    if not (le or ge):
        raise AssertionError("index ranges allow neither direction")
    if le and ge:
        return BOTH
    return LE_ONLY if le else GE_ONLY


def relation_allows_le(relation: str) -> bool:
    return relation in (LE_ONLY, BOTH)


def relation_allows_ge(relation: str) -> bool:
    return relation in (GE_ONLY, BOTH)


def reverse_range(k: int, r: IndexRange) -> IndexRange:
    """Index range in the reversely numbered chain d'_i = d_{k-i+1}."""
    if r.hi > k:
        raise ValueError("range exceeds the chain")
    return IndexRange(k - r.hi + 1, k - r.lo + 1)


@dataclass(frozen=True)
class ChainLevel:
    """One cover in a chain sequence, with exact point-to-links assignment."""

    level: int
    size: int
    mesh_bound: Fraction
    index_fn: Callable = field(compare=False, repr=False)
    base_mesh: Fraction | None = None

    def index_of(self, point) -> IndexRange:
        return self.index_fn(point)

    def relation(self, x, y) -> str:
        return level_preorder(self.index_of(x), self.index_of(y))

    def trace_entry(self, x, y) -> dict:
        rx, ry = self.index_of(x), self.index_of(y)
        return {
            "level": self.level,
            "k": self.size,
            "mesh": rational_str(self.mesh_bound),
            "idx_x": [rx.lo, rx.hi],
            "idx_y": [ry.lo, ry.hi],
            "relation": level_preorder(rx, ry),
        }


@dataclass(frozen=True)
class IntervalChain:
    """The canonical k-link chain on [0,1].

    Link i is the open interval ((i-1)/k - 1/(4k), i/k + 1/(4k)) cut to
    [0,1]: consecutive links overlap on a quarter-link, others are
    disjoint, and every mesh is 3/(2k).
    """

    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("a chain needs at least one link")

    @property
    def mesh(self) -> Fraction:
        return Fraction(3, 2 * self.k)

    def raw_link(self, i: int) -> tuple[Fraction, Fraction]:
        if not 1 <= i <= self.k:
            raise ValueError(f"link index {i} outside 1..{self.k}")
        return Fraction(4 * i - 5, 4 * self.k), Fraction(4 * i + 1, 4 * self.k)

    def link(self, i: int) -> tuple[Fraction, Fraction]:
        lo, hi = self.raw_link(i)
        return max(lo, Fraction(0)), min(hi, Fraction(1))

    def contains(self, i: int, t: int | Fraction) -> bool:
        lo, hi = self.raw_link(i)
        return lo < rational(t) < hi

    def index_of(self, t: int | Fraction) -> IndexRange:
        t = rational(t)
        if not 0 <= t <= 1:
            raise ValueError(f"point outside [0,1]: {t}")
        # i ranges over integers with (4kt-1)/4 < i < (4kt+5)/4.
        a = (4 * self.k * t - 1) / 4
        b = (4 * self.k * t + 5) / 4
        lo = a.numerator // a.denominator + 1
        hi = -((-b.numerator) // b.denominator) - 1
        lo = max(lo, 1)
        hi = min(hi, self.k)
        return IndexRange(lo, hi)


def canonical_interval_chain(k: int) -> IntervalChain:
    return IntervalChain(k)


def pullback_chain(system: InverseSystem, n: int, base: IntervalChain) -> ChainLevel:
    """Pull the base chain back through the level-n projection.

    The links become thread sets whose diameters stay below
    eps_n = (fiber diameter bound) + 1/n, provided the base mesh fits
    under the continuity modulus for eps_n.
    """
    if n < 1:
        raise ValueError("pullback levels start at 1")
    eps_n = fiber_diameter_bound(system, n) + Fraction(1, n)
    delta = epsilon_map_modulus(system, n, eps_n)
    if base.mesh >= delta:
        raise MeshBudgetError(
            f"base mesh {base.mesh} not below the modulus {delta} for level {n}"
        )

    def index_of(point: ThreadPoint) -> IndexRange:
        return base.index_of(point.coordinate(n))

    return ChainLevel(
        level=n,
        size=base.k,
        mesh_bound=eps_n,
        index_fn=index_of,
        base_mesh=base.mesh,
    )


@dataclass(frozen=True)
class PullbackSequence:
    """Chain levels on an inverse limit, one pullback per depth."""

    system: InverseSystem
    _levels: dict = field(default_factory=dict, compare=False, repr=False)

    def level(self, n: int) -> ChainLevel:
        if n not in self._levels:
            eps_n = fiber_diameter_bound(self.system, n) + Fraction(1, n)
            delta = epsilon_map_modulus(self.system, n, eps_n)
            # Smallest canonical chain fitting under the modulus.
            k = 3 * delta.denominator // (2 * delta.numerator) + 1
            self._levels[n] = pullback_chain(self.system, n, IntervalChain(k))
        return self._levels[n]


def chain_trace(seq, x, y, depth: int) -> list[dict]:
    """Per-level relation records for reporting."""
    return [seq.level(n).trace_entry(x, y) for n in range(1, depth + 1)]


def _lipschitz_products(system: InverseSystem, upto: int) -> list[Fraction]:
    """Prefix products of bonding Lipschitz constants: lam[n] bounds how
    much the level-0 gap can shrink relative to the level-n gap."""
    lams = [Fraction(1)]
    for j in range(upto):
        lams.append(lams[-1] * system.bonding(j).lipschitz())
    return lams


def _pullback_compare(
    seq: PullbackSequence,
    x: ThreadPoint,
    y: ThreadPoint,
    ultrafilter: SimulatedUltrafilter,
    depth: int,
) -> ComparisonVerdict:
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if x.system != seq.system or y.system != seq.system:
        raise ValueError("points do not live on this sequence's system")
    if x == y:
        return ComparisonVerdict.stabilized(EQ, 1, depth)
    if not (x.has_periodic_certificate() and y.has_periodic_certificate()):
        return ComparisonVerdict.unknown(depth)

    cert = sign_certificate(x, y)
    if set(cert.cycle) == {"EQ"}:
        return ComparisonVerdict.stabilized(EQ, 1, depth, certificate=cert.as_dict())

    # First level from which the coordinate signs are strict forever.
    strict_from = 0
    for n, rel in enumerate(cert.history):
        if rel == "EQ":
            strict_from = n + 1

    # Coordinate gaps can shrink at most by the bonding Lipschitz factor
    # per level, while the base mesh at level n sits below 1/(n * lam_n).
    # So once gap_T * lam_T >= 1/T, the gap dominates every later mesh
    # and the chain relation equals the coordinate sign from T on.
    T = max(1, strict_from)
    lams = _lipschitz_products(seq.system, T)
    while True:
        gap = abs(x.coordinate(T) - y.coordinate(T))
        if gap * lams[T] >= Fraction(1, T):
            break
        T += 1
        lams.append(lams[-1] * seq.system.bonding(T - 1).lipschitz())
        if T > 100_000:
            raise AssertionError("gap dominance search failed to terminate")

    below = {n: seq.level(n).relation(x, y) for n in range(1, T)}
    meta = {"sign": cert.as_dict(), "gap_dominance_level": T}

    kinds = set(cert.cycle)
    if kinds in ({"LT"}, {"GT"}):
        target = LE_ONLY if kinds == {"LT"} else GE_ONLY
        threshold = T
        while threshold - 1 >= 1 and below.get(threshold - 1) == target:
            threshold -= 1
        if threshold > depth:
            return ComparisonVerdict.unknown(depth)
        direction = LE if kinds == {"LT"} else GE
        return ComparisonVerdict.stabilized(direction, threshold, depth, certificate=meta)

    # Mixed strict cycle: the level set {n : x <=_n y} is eventually
    # periodic; levels below T are computed outright, levels from T on
    # follow the certified coordinate signs.
    start = max(T, cert.cycle_start)
    prefix_bits = [False]  # levels are 1-based; 0 is not a level
    for n in range(1, start):
        if n < T:
            prefix_bits.append(relation_allows_le(below[n]))
        else:
            prefix_bits.append(cert.rel(n) != "GT")
    pattern_bits = [cert.rel(start + j) != "GT" for j in range(len(cert.cycle))]
    le_set = EventuallyPeriodicSet(tuple(prefix_bits), tuple(pattern_bits))
    decision = ultrafilter.decide(le_set)
    return ComparisonVerdict.ultrafilter_dependent(
        le_set,
        depth,
        direction=LE if decision.value else GE,
        tower_extended=decision.extended,
        certificate=meta,
    )


def _spot_check(seq, x, y, verdict: ComparisonVerdict, depth: int) -> None:
    """Verify a certificate's claims against directly computed levels."""
    if verdict.kind != STABILIZED:
        return
    t = verdict.threshold if verdict.threshold and verdict.threshold >= 1 else 1
    probes = sorted({t, min(depth, t + 1), min(depth, t + 3), depth})
    for n in probes:
        if n < 1:
            continue
        rel = seq.level(n).relation(x, y)
        if verdict.direction == EQ:
            ok = rel == BOTH
        elif verdict.direction == LE:
            ok = rel == LE_ONLY
        else:
            ok = rel == GE_ONLY
        if not ok:
            raise AssertionError(
                f"certificate claims {verdict.direction} from {t}, "
                f"but level {n} computes {rel}"
            )


def chain_order_compare(seq, x, y, ultrafilter: SimulatedUltrafilter, depth: int) -> ComparisonVerdict:
    """Compare two points in the order induced by a chain sequence.

    Sequences may certify verdicts themselves; certified claims are
    spot-checked against directly computed level relations.  Pullback
    sequences use the coordinate sign certificate plus gap dominance.
    Without a certificate the comparison stays Unknown.
    """
    certifier = getattr(seq, "compare_certificate", None)
    if certifier is not None:
        verdict = certifier(x, y, ultrafilter, depth)
        _spot_check(seq, x, y, verdict, depth)
        return verdict
    if isinstance(seq, PullbackSequence):
        return _pullback_compare(seq, x, y, ultrafilter, depth)
    return ComparisonVerdict.unknown(depth)


@dataclass(frozen=True)
class NeverBetweenReport:
    ok: bool
    levels_checked: tuple[int, ...]
    first_failure: dict | None

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "levels_checked": list(self.levels_checked),
            "first_failure": self.first_failure,
        }


def never_between_after(seq, x, y, z, threshold_mesh: Fraction, depth: int) -> NeverBetweenReport:
    """Check that z never sits between x and y once the mesh is fine enough.

    Levels whose mesh bound is below the threshold are examined; at each,
    betweenness means the index ranges allow x <= z <= y or y <= z <= x.
    """
    if z == x or z == y:
        raise ValueError("z must differ from both endpoints")
    checked = []
    for n in range(1, depth + 1):
        lvl = seq.level(n)
        if lvl.mesh_bound >= threshold_mesh:
            continue
        checked.append(n)
        rx, ry, rz = lvl.index_of(x), lvl.index_of(y), lvl.index_of(z)
        xz = level_preorder(rx, rz)
        zy = level_preorder(rz, ry)
        between = (relation_allows_le(xz) and relation_allows_le(zy)) or (
            relation_allows_ge(xz) and relation_allows_ge(zy)
        )
        if between:
            return NeverBetweenReport(
                False,
                tuple(checked),
                {
                    "level": n,
                    "idx_x": [rx.lo, rx.hi],
                    "idx_y": [ry.lo, ry.hi],
                    "idx_z": [rz.lo, rz.hi],
                },
            )
    return NeverBetweenReport(True, tuple(checked), None)


def _validate_order(order) -> list:
    items = list(order)
    if not items:
        raise ValueError("an order needs at least one element")
    if len(set(items)) != len(items):
        raise ValueError("order contains repeated elements")
    return items


def equal_or_opposite(first, second) -> str:
    """Classify two total orders on the same elements."""
    a = _validate_order(first)
    b = _validate_order(second)
    if set(a) != set(b):
        raise ValueError("orders rank different element sets")
    if a == b:
        return "equal"
    if a == b[::-1]:
        return "opposite"
    return "neither"


def orders_never_mix(first, second) -> bool:
    """True when betweenness transfers: every middle element of a triple
    in the first order stays in the middle in the second."""
    a = _validate_order(first)
    b = _validate_order(second)
    if set(a) != set(b):
        raise ValueError("orders rank different element sets")
    pos = {v: i for i, v in enumerate(b)}
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            for k in range(j + 1, len(a)):
                p, q, r = pos[a[i]], pos[a[j]], pos[a[k]]
                if not (p < q < r or p > q > r):
                    return False
    return True
