"""Strand models and chain-sequence generators for the example continua.

Five planar spaces live here, each presented as a finite list of
parameterized strands: the arc, the closed sine curve S1 (oscillating
strand plus its limit interval), the variant S2 whose limit interval is
extended by an outer arc, the forest S3 of sine-approached teeth, and
the space T whose limit interval is replaced by a spiral strand that
accumulates on the whole closed sine curve.

Every chain family assigns link indices combinatorially, as exact
rational functions of strand parameters, so level relations and the
orders they stabilize to are computed without any floating point.  The
planar geometry enters only through the declared mesh bounds, which the
sampled validator checks against exact L-infinity diameters.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple

from .chains import (
    BOTH,
    GE_ONLY,
    LE_ONLY,
    ChainLevel,
    IntervalChain,
    reverse_range,
)
from .foundations import (
    EQ,
    GE,
    LE,
    ComparisonVerdict,
    IndexRange,
    rational,
    rational_str,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _floor(f: Fraction) -> int:
    return f.numerator // f.denominator


def _ceil(f: Fraction) -> int:
    return -((-f.numerator) // f.denominator)


def _clamp(t: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    return min(max(t, lo), hi)


def _open_int_range(a: Fraction, b: Fraction) -> tuple[int, int]:
    """Smallest and largest integers strictly between a and b."""
    return _floor(a) + 1, _ceil(b) - 1


def _window_range(t: Fraction, step: Fraction, overlap: Fraction, count: int) -> IndexRange:
    """Window i of a 1..count grid spans ((i-1)*step - overlap, i*step + overlap).

    With overlap < step/2 a point meets one window or two consecutive
    ones, which is exactly the IndexRange contract.
    """
    lo, hi = _open_int_range((t - overlap) / step, (t + overlap) / step + 1)
    return IndexRange(max(lo, 1), min(hi, count))


def _shift(r: IndexRange, offset: int) -> IndexRange:
    return IndexRange(r.lo + offset, r.hi + offset)


# -- exact plane distance ---------------------------------------------------

Point2 = tuple[Fraction, Fraction]


def _segment_distance(z: Point2, a: Point2, b: Point2) -> Fraction:
    """Exact L-infinity distance from z to the segment [a, b].

    The distance is the minimum over t of max(|fx + t*dx|, |fy + t*dy|);
    minima of a max of two absolute linear functions occur at endpoints,
    at the zero of either function, or where the two are equal.
    """
    fx, fy = a[0] - z[0], a[1] - z[1]
    dx, dy = b[0] - a[0], b[1] - a[1]
    candidates = [_ZERO, _ONE]
    if dx:
        candidates.append(-fx / dx)
    if dy:
        candidates.append(-fy / dy)
    for sign in (1, -1):
        den = dx - sign * dy
        if den:
            candidates.append(-(fx - sign * fy) / den)
    best: Fraction | None = None
    for t in candidates:
        t = _clamp(t, _ZERO, _ONE)
        value = max(abs(fx + t * dx), abs(fy + t * dy))
        if best is None or value < best:
            best = value
    return best


def _polyline_distance(z: Point2, pts: list[Point2]) -> Fraction:
    if len(pts) == 1:
        return max(abs(pts[0][0] - z[0]), abs(pts[0][1] - z[1]))
    return min(_segment_distance(z, pts[i], pts[i + 1]) for i in range(len(pts) - 1))


# -- the oscillating strand --------------------------------------------------

_WAVE_Y = (Fraction(-1), Fraction(0), Fraction(1), Fraction(0))


def _wave_anchor_x(j: int) -> Fraction:
    return Fraction(2, j + 3)


def _wave_point(u: Fraction) -> Point2:
    """Piecewise linear oscillation through (2/(j+3), -1,0,1,0,...).

    Anchor j sits at x = 2/(j+3); successive anchors differ by 1 in the
    parameter and sweep y through a full -1,0,1,0 cycle, so the strand
    alternates troughs and peaks while x decreases to 0.
    """
    j = _floor(u)
    s = u - j
    x = (1 - s) * _wave_anchor_x(j) + s * _wave_anchor_x(j + 1)
    y = (1 - s) * _WAVE_Y[j % 4] + s * _WAVE_Y[(j + 1) % 4]
    return x, y


def _wave_polyline(ua: Fraction, ub: Fraction) -> list[Point2]:
    params = [ua]
    j = _floor(ua) + 1
    while j < ub:
        if j > ua:
            params.append(Fraction(j))
        j += 1
    if ub > params[-1]:
        params.append(ub)
    return [_wave_point(t) for t in params]


# -- points, strands, spaces -------------------------------------------------


@dataclass(frozen=True)
class CatalogPoint:
    """A point of a catalog space, named by strand and exact parameter."""

    strand: str
    param: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "param", rational(self.param))

    def as_dict(self) -> dict:
        return {"strand": self.strand, "param": rational_str(self.param)}


@dataclass(frozen=True)
class Strand:
    """One injectively parameterized piece of a space.

    ``lo``/``hi`` bound the parameter domain (``hi=None`` means
    unbounded above); the open flags exclude an endpoint, which models
    strands that only accumulate on the rest of the space.
    """

    name: str
    component: str
    lo: Fraction | None
    hi: Fraction | None
    lo_open: bool = False
    hi_open: bool = False
    position: Callable = field(compare=False, repr=False, default=None)
    polyline: Callable = field(compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        if self.polyline is None:
            pos = self.position

            def straight(a: Fraction, b: Fraction) -> list[Point2]:
                return [pos(a)] if a == b else [pos(a), pos(b)]

            object.__setattr__(self, "polyline", straight)

    def contains_param(self, t: Fraction) -> bool:
        if self.lo is not None and (t < self.lo or (self.lo_open and t == self.lo)):
            return False
        if self.hi is not None and (t > self.hi or (self.hi_open and t == self.hi)):
            return False
        return True


@dataclass(frozen=True)
class StrandSpace:
    """A finite strand presentation of a planar continuum."""

    name: str
    strands: tuple[Strand, ...]
    limit_points: tuple[CatalogPoint, ...] = ()
    resolver: Callable = field(compare=False, repr=False, default=None)

    def strand(self, name: str) -> Strand:
        for s in self.strands:
            if s.name == name:
                return s
        if self.resolver is not None:
            found = self.resolver(name)
            if found is not None:
                return found
        raise ValueError(f"unknown point: no strand {name!r} in {self.name}")

    def validate(self, point: CatalogPoint) -> Strand:
        s = self.strand(point.strand)
        if not s.contains_param(point.param):
            raise ValueError(
                f"unknown point: parameter {point.param} outside strand "
                f"{point.strand!r} of {self.name}"
            )
        return s

    def position(self, point: CatalogPoint) -> Point2:
        return self.validate(point).position(point.param)

    def components(self) -> tuple[str, ...]:
        seen: list[str] = []
        for s in self.strands:
            if s.component not in seen:
                seen.append(s.component)
        return tuple(seen)


def component_of(space: StrandSpace, point: CatalogPoint) -> str:
    """The arc component containing the point, per the declared partition."""
    return space.validate(point).component


# -- space registry ----------------------------------------------------------


@lru_cache(maxsize=None)
def arc_space() -> StrandSpace:
    segment = Strand(
        "segment", "arc", _ZERO, _ONE, position=lambda t: (t, _ZERO)
    )
    return StrandSpace("arc", (segment,))


def _bar_strand(component: str) -> Strand:
    return Strand(
        "bar", component, Fraction(-1), _ONE, position=lambda y: (_ZERO, y)
    )


def _wave_strand(component: str) -> Strand:
    return Strand(
        "wave",
        component,
        _ZERO,
        None,
        position=_wave_point,
        polyline=_wave_polyline,
    )


@lru_cache(maxsize=None)
def s1_space() -> StrandSpace:
    return StrandSpace(
        "s1",
        (_wave_strand("sine"), _bar_strand("limit_interval")),
        limit_points=(CatalogPoint("bar", 1), CatalogPoint("bar", -1)),
    )


def _ell_point(p: Fraction) -> Point2:
    # Inner wall down, floor left, outer wall up: an arc from (0,1) to (-1,1).
    if p <= 2:
        return (_ZERO, 1 - p)
    if p <= 3:
        return (2 - p, Fraction(-1))
    return (Fraction(-1), p - 4)


def _ell_polyline(pa: Fraction, pb: Fraction) -> list[Point2]:
    params = [pa] + [Fraction(c) for c in (2, 3) if pa < c < pb] + [pb]
    return [_ell_point(t) for t in params]


@lru_cache(maxsize=None)
def s2_space() -> StrandSpace:
    ell = Strand(
        "ell",
        "outer_arc",
        _ZERO,
        Fraction(5),
        position=_ell_point,
        polyline=_ell_polyline,
    )
    return StrandSpace(
        "s2",
        (_wave_strand("sine"), ell),
        limit_points=(CatalogPoint("ell", 0), CatalogPoint("ell", 2)),
    )


# -- S3 geometry: teeth and the gaps between them -----------------------------


def _gap_width(i: int) -> Fraction:
    return Fraction(1, i * (i + 1))


def _anchor_abs(kind: str, k: int) -> Fraction:
    # |w| of the k-th zero ("z") or peak ("p") on either flank of a gap.
    if kind == "z":
        return 1 - Fraction(1, 2**k)
    return 1 - Fraction(3, 2 ** (k + 2))


def _anchor_point(i: int, side: int, kind: str, k: int) -> Point2:
    width = _gap_width(i)
    if kind == "z":
        off = width / 2 / 2**k
        y = _ZERO
    else:
        off = 3 * width / 8 / 2**k
        y = (1 - Fraction(1, 2 ** (k + 1))) / (i if side > 0 else i + 1)
    x = Fraction(1, i) - off if side > 0 else Fraction(1, i + 1) + off
    return x, y


def _gap_point(i: int, w: Fraction) -> Point2:
    """Gap strand i: zigzag in 1/(i+1) < x < 1/i accumulating on both teeth.

    Flank anchors sit at |w| = 1 - 2^-k (zeros) and 1 - 3*2^-(k+2)
    (peaks); peak heights climb toward the adjacent tooth's height, so
    the closure adds both full teeth and nothing else.
    """
    if w == 0:
        return _anchor_point(i, 1, "z", 0)
    side = 1 if w > 0 else -1
    aw = abs(w)
    q = 1 / (1 - aw)
    k = (q.numerator // q.denominator).bit_length() - 1
    za = _anchor_abs("z", k)
    pa = _anchor_abs("p", k)
    if aw <= pa:
        a, b = _anchor_point(i, side, "z", k), _anchor_point(i, side, "p", k)
        t = (aw - za) / (pa - za)
    else:
        zb = _anchor_abs("z", k + 1)
        a, b = _anchor_point(i, side, "p", k), _anchor_point(i, side, "z", k + 1)
        t = (aw - pa) / (zb - pa)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def _gap_polyline(i: int, wa: Fraction, wb: Fraction) -> list[Point2]:
    kmax = 1
    for bound in (wa, wb):
        if abs(bound) > 0:
            q = 1 / (1 - abs(bound))
            kmax = max(kmax, (q.numerator // q.denominator).bit_length() + 1)
    anchors: list[Fraction] = [_ZERO]
    for k in range(kmax + 1):
        for kind in ("z", "p"):
            aw = _anchor_abs(kind, k)
            anchors.extend((aw, -aw))
    params = sorted({w for w in anchors if wa < w < wb})
    pts = [_gap_point(i, wa)] + [_gap_point(i, w) for w in params]
    if wb > wa:
        pts.append(_gap_point(i, wb))
    return pts


def _tooth_strand(i: int) -> Strand:
    x = Fraction(1, i)
    return Strand(
        f"tooth_{i}",
        f"tooth_{i}",
        _ZERO,
        Fraction(1, i),
        position=lambda y, x=x: (x, y),
    )


def _gap_strand(i: int) -> Strand:
    return Strand(
        f"gap_{i}",
        f"gap_{i}",
        Fraction(-1),
        _ONE,
        lo_open=True,
        hi_open=True,
        position=lambda w, i=i: _gap_point(i, w),
        polyline=lambda wa, wb, i=i: _gap_polyline(i, wa, wb),
    )


def _s3_resolver(name: str):
    kind, _, idx = name.partition("_")
    if idx.isdigit() and int(idx) >= 1:
        if kind == "tooth":
            return _tooth_strand(int(idx))
        if kind == "gap":
            return _gap_strand(int(idx))
    return None


@lru_cache(maxsize=None)
def s3_space() -> StrandSpace:
    strands = [_tooth_strand(i) for i in range(1, 9)]
    strands += [_gap_strand(i) for i in range(1, 9)]
    strands.append(
        Strand("origin", "origin", _ZERO, _ZERO, position=lambda t: (_ZERO, _ZERO))
    )
    return StrandSpace(
        "s3",
        tuple(strands),
        limit_points=(CatalogPoint("origin", 0),),
        resolver=_s3_resolver,
    )


# -- the spiral strand of space T ---------------------------------------------


def _spiral_eps(p: int) -> Fraction:
    return Fraction(1, 2 ** (2 * p + 3))


class _PassData(NamedTuple):
    verts: tuple[Point2, ...]
    tags: tuple[tuple, ...]
    cum: tuple[Fraction, ...]
    total: Fraction
    cut_index: int
    bar_x_max: Fraction
    j_stop: int
    j_top: int


def _wave_wall_x(u_zero: int, toward: int, y: Fraction) -> Fraction:
    # x of the wave leg pair through anchor u_zero, at height y, walking
    # toward anchor u_zero + toward as y leaves the zero level.
    a0 = _wave_anchor_x(u_zero)
    if y >= 0:
        return a0 + y * (_wave_anchor_x(u_zero + toward) - a0)
    return a0 - y * (_wave_anchor_x(u_zero - toward) - a0)


@lru_cache(maxsize=None)
def _pass_data(p: int) -> _PassData:
    """One full circuit of the spiral at offset e_p = 2^(-2p-3).

    The circuit traces the outline of the e_p-neighborhood of the closed
    sine curve: it dives under every trough whose pocket is still wider
    than 4*e_p, probes each pocket up to the height where the walls come
    within 4*e_p of each other, runs up the far side of the limit bar,
    probes the top pockets the same way, and descends the outer flank to
    the gate of the next, tighter circuit.
    """
    if p < 1:
        raise ValueError("passes start at 1")
    e = _spiral_eps(p)
    e_next = _spiral_eps(p + 1)
    a = _wave_anchor_x
    pts: list[Point2] = [(a(0) + e, -1 - e)]
    tags: list[tuple] = []

    def go(pt: Point2, tag: tuple) -> None:
        if pt == pts[-1]:
            raise AssertionError("degenerate spiral segment")
        pts.append(pt)
        tags.append(tag)

    def wtag(u0, u1=None) -> tuple:
        u1 = u0 if u1 is None else u1
        return ("wave", rational(u0), rational(u1))

    # Bottom journey: probe pocket j between troughs 4j and 4j+4.
    j = 0
    while a(4 * j) - a(4 * j + 4) > 4 * e:
        go((a(4 * j) - e, -1 - e), wtag(4 * j))
        go((a(4 * j) - e, Fraction(-1)), wtag(4 * j))
        mouth = a(4 * j) - a(4 * j + 4)
        g0 = a(4 * j + 1) - a(4 * j + 3)
        if 4 * e >= g0:
            ystar = -1 + (mouth - 4 * e) / (mouth - g0)
        else:
            ystar = 1 - 4 * e / g0
        u_r = 4 * j + 1 + ystar
        u_l = 4 * j + 3 - ystar
        xr = _wave_wall_x(4 * j + 1, 1, ystar)
        xl = _wave_wall_x(4 * j + 3, -1, ystar)
        if ystar > 0:
            go((a(4 * j + 1) - e, _ZERO), wtag(4 * j, 4 * j + 1))
            go((xr - e, ystar), wtag(4 * j + 1, u_r))
        else:
            go((xr - e, ystar), wtag(4 * j, u_r))
        mid = ((xr - e + xl + e) / 2, ystar)
        go(mid, wtag(u_r))
        go((xl + e, ystar), wtag(u_l))
        if ystar > 0:
            go((a(4 * j + 3) + e, _ZERO), wtag(u_l, 4 * j + 3))
            go((a(4 * j + 4) + e, Fraction(-1)), wtag(4 * j + 3, 4 * j + 4))
        else:
            go((a(4 * j + 4) + e, Fraction(-1)), wtag(u_l, 4 * j + 4))
        go((a(4 * j + 4) + e, -1 - e), wtag(4 * j + 4))
        j += 1
    j_stop = j
    if j_stop < p:
        raise AssertionError("bottom journey shallower than the pass index")

    go((-e, -1 - e), ("bar",))
    cut_index = len(pts) - 1
    go((-e, 1 + e), ("bar",))

    # Top journey: probe pocket j between peaks 4j-2 and 4j+2, deepest first.
    j_top = 0
    while a(4 * (j_top + 1) - 2) - a(4 * (j_top + 1) + 2) > 4 * e:
        j_top += 1
    if j_top < 1:
        raise AssertionError("no probeable top pocket")
    go((a(4 * j_top + 2) + e, 1 + e), ("bar",))
    for j in range(j_top, 0, -1):
        go((a(4 * j + 2) + e, _ONE), wtag(4 * j + 2))
        mouth = a(4 * j - 2) - a(4 * j + 2)
        g0 = a(4 * j - 1) - a(4 * j + 1)
        if 4 * e < g0:
            ystar = -1 + 4 * e / g0
        else:
            ystar = (4 * e - g0) / (mouth - g0)
        u_l = 4 * j + 1 + ystar
        u_r = 4 * j - 1 - ystar
        xl = _wave_wall_x(4 * j + 1, 1, ystar)
        xr = _wave_wall_x(4 * j - 1, -1, ystar)
        if ystar < 0:
            go((a(4 * j + 1) + e, _ZERO), wtag(4 * j + 2, 4 * j + 1))
            go((xl + e, ystar), wtag(4 * j + 1, u_l))
        else:
            go((xl + e, ystar), wtag(4 * j + 2, u_l))
        mid = ((xl + e + xr - e) / 2, ystar)
        go(mid, wtag(u_l))
        go((xr - e, ystar), wtag(u_r))
        if ystar < 0:
            go((a(4 * j - 1) - e, _ZERO), wtag(u_r, 4 * j - 1))
            go((a(4 * j - 2) - e, _ONE), wtag(4 * j - 1, 4 * j - 2))
        else:
            go((a(4 * j - 2) - e, _ONE), wtag(u_r, 4 * j - 2))
        go((a(4 * j - 2) - e, 1 + e), wtag(4 * j - 2))
        go((a(4 * j - 2) + e, 1 + e), wtag(4 * j - 2))

    # Outer flank down to the next gate.
    go((a(2) + e, _ONE), wtag(2))
    go((a(1) + e, _ZERO), wtag(2, 1))
    go((a(0) + e, Fraction(-1)), wtag(1, 0))
    go((a(0) + e, -1 - e_next), wtag(0))
    go((a(0) + e_next, -1 - e_next), wtag(0))

    cum = [_ZERO]
    for i in range(len(pts) - 1):
        seg = max(abs(pts[i + 1][0] - pts[i][0]), abs(pts[i + 1][1] - pts[i][1]))
        cum.append(cum[-1] + seg)
    bar_x = max(a(4 * j_stop) + e, a(4 * j_top + 2) + e)
    data = _PassData(
        tuple(pts), tuple(tags), tuple(cum), cum[-1], cut_index, bar_x, j_stop, j_top
    )
    if p > 1:
        prev = _pass_data(p - 1)
        prev_e = _spiral_eps(p - 1)
        if data.j_stop <= prev.j_stop or data.j_top < prev.j_top:
            raise AssertionError("circuits must deepen monotonically")
        if a(4 * data.j_stop) + e >= a(4 * prev.j_stop) + prev_e:
            raise AssertionError("bottom glide would cross the previous circuit")
        if a(4 * data.j_top + 2) + e >= a(4 * prev.j_top + 2) + prev_e:
            raise AssertionError("top glide would cross the previous circuit")
    return data


@lru_cache(maxsize=None)
def _prefix_total(p: int) -> Fraction:
    if p == 0:
        return _ZERO
    return _prefix_total(p - 1) + _pass_data(p).total


def _pass_of(v: Fraction) -> int:
    # v in (2^-p, 2^-(p-1)] belongs to circuit p.
    if not 0 < v <= 1:
        raise ValueError(f"spiral parameter outside (0, 1]: {v}")
    q = 1 / v
    k = (q.numerator // q.denominator).bit_length() - 1
    return k + 1


def _spiral_arclength(v: Fraction) -> Fraction:
    p = _pass_of(v)
    frac = (Fraction(1, 2 ** (p - 1)) - v) * 2**p
    return _prefix_total(p - 1) + frac * _pass_data(p).total


def _spiral_locate(v: Fraction) -> tuple[_PassData, int, Fraction]:
    p = _pass_of(v)
    data = _pass_data(p)
    frac = (Fraction(1, 2 ** (p - 1)) - v) * 2**p
    s_local = frac * data.total
    i = bisect_right(data.cum, s_local) - 1
    i = min(i, len(data.verts) - 2)
    seg = data.cum[i + 1] - data.cum[i]
    t = (s_local - data.cum[i]) / seg
    return data, i, t


def _spiral_point(v: Fraction) -> Point2:
    data, i, t = _spiral_locate(v)
    ax, ay = data.verts[i]
    bx, by = data.verts[i + 1]
    return (ax + t * (bx - ax), ay + t * (by - ay))


def _spiral_param_at(s: Fraction) -> Fraction:
    """Inverse of the arclength map, for building walk samples."""
    if s < 0:
        raise ValueError("arclength must be nonnegative")
    p = 1
    while _prefix_total(p) <= s:
        p += 1
    frac = (s - _prefix_total(p - 1)) / _pass_data(p).total
    return Fraction(1, 2 ** (p - 1)) - frac * Fraction(1, 2**p)


def _spiral_polyline(va: Fraction, vb: Fraction) -> list[Point2]:
    # The strand runs from deep (small v) to the free end at v = 1, so
    # the slice covers arclengths s(vb) .. s(va).
    s_hi = _spiral_arclength(va)
    s_lo = _spiral_arclength(vb)
    pts = [_spiral_point(vb)]
    p = _pass_of(vb)
    while True:
        data = _pass_data(p)
        base = _prefix_total(p - 1)
        for i, vert in enumerate(data.verts):
            s = base + data.cum[i]
            if s_lo < s < s_hi:
                pts.append(vert)
        if base + data.total >= s_hi:
            break
        p += 1
    if va < vb:
        pts.append(_spiral_point(va))
    return pts


@lru_cache(maxsize=None)
def t_space() -> StrandSpace:
    spiral = Strand(
        "spiral",
        "T3",
        _ZERO,
        _ONE,
        lo_open=True,
        position=_spiral_point,
        polyline=_spiral_polyline,
    )
    return StrandSpace(
        "t",
        (_bar_strand("T1"), _wave_strand("T2"), spiral),
        limit_points=(CatalogPoint("bar", 1), CatalogPoint("bar", -1)),
    )


@lru_cache(maxsize=None)
def catalog_spaces() -> dict[str, StrandSpace]:
    return {
        "arc": arc_space(),
        "s1": s1_space(),
        "s2": s2_space(),
        "s3": s3_space(),
        "t": t_space(),
    }


# -- separation data ----------------------------------------------------------


@dataclass(frozen=True)
class MinimalArc:
    """The arc of one strand between two parameters."""

    space: str
    strand: str
    lo: Fraction
    hi: Fraction

    def contains(self, point: CatalogPoint) -> bool:
        return point.strand == self.strand and self.lo <= point.param <= self.hi

    def as_dict(self) -> dict:
        return {
            "space": self.space,
            "strand": self.strand,
            "lo": rational_str(self.lo),
            "hi": rational_str(self.hi),
        }


def separation_data(
    space: StrandSpace, x: CatalogPoint, y: CatalogPoint, z: CatalogPoint
) -> tuple[MinimalArc, Fraction]:
    """The minimal arc M through x and y, and half its distance to z.

    Any chain level with mesh below the returned threshold must keep z's
    links disjoint from the links meeting M, so z can never sit between
    x and y at such a level.
    """
    sx = space.validate(x)
    space.validate(y)
    space.validate(z)
    if y.strand != x.strand:
        raise ValueError("x and y lie in different arc components")
    lo, hi = min(x.param, y.param), max(x.param, y.param)
    arc = MinimalArc(space.name, x.strand, lo, hi)
    if arc.contains(z):
        raise ValueError("no separating continuum exists: z lies on the minimal arc")
    distance = _polyline_distance(space.position(z), sx.polyline(lo, hi))
    if distance <= 0:
        raise AssertionError("strands must be disjoint away from the arc")
    return arc, distance / 2


# -- shared certificate machinery ---------------------------------------------


def _scan_certificate(family, x, y, depth: int) -> ComparisonVerdict:
    """Stabilization by direct scan plus a persistence gate.

    The scan finds the earliest level from which the computed relation
    is strict and constant through ``depth``; the verdict is only issued
    from a level where both points are in settled zones, where the walk
    layout pins their relative order at every finer level as well.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if x == y:
        return ComparisonVerdict.stabilized(EQ, 1, depth)
    rels = [family.level(n).relation(x, y) for n in range(1, depth + 1)]
    final = rels[-1]
    if final not in (LE_ONLY, GE_ONLY):
        return ComparisonVerdict.unknown(depth)
    first = depth
    while first > 1 and rels[first - 2] == final:
        first -= 1
    threshold = None
    for n in range(first, depth + 1):
        if family._pair_settled(x, y, n):
            threshold = n
            break
    if threshold is None:
        return ComparisonVerdict.unknown(depth)
    direction = LE if final == LE_ONLY else GE
    certificate = {
        "kind": "walk-scan",
        "first_constant_level": first,
        "settled_level": threshold,
    }
    return ComparisonVerdict.stabilized(direction, threshold, depth, certificate=certificate)


def _require_level(n: int) -> None:
    if n < 1:
        raise ValueError("levels start at 1")


# -- the arc ------------------------------------------------------------------


@dataclass(frozen=True)
class ArcChainFamily:
    """Canonical chains of 2^n links on [0,1], optionally reversely numbered."""

    variant: str = "standard"
    _levels: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.variant not in ("standard", "reversed"):
            raise ValueError(f"unknown arc variant: {self.variant!r}")

    @property
    def space(self) -> StrandSpace:
        return arc_space()

    def _param(self, point) -> Fraction:
        if isinstance(point, CatalogPoint):
            if point.strand != "segment":
                raise ValueError(f"unknown point: {point}")
            return point.param
        return rational(point)

    def level(self, n: int) -> ChainLevel:
        _require_level(n)
        if n not in self._levels:
            chain = IntervalChain(2**n)
            flip = self.variant == "reversed"

            def index_of(point, chain=chain, flip=flip) -> IndexRange:
                r = chain.index_of(self._param(point))
                return reverse_range(chain.k, r) if flip else r

            self._levels[n] = ChainLevel(
                level=n, size=chain.k, mesh_bound=chain.mesh, index_fn=index_of
            )
        return self._levels[n]

    def compare_certificate(self, x, y, ultrafilter, depth: int) -> ComparisonVerdict:
        if depth < 1:
            raise ValueError("depth must be at least 1")
        s, t = self._param(x), self._param(y)
        if s == t:
            return ComparisonVerdict.stabilized(EQ, 1, depth)
        lo, hi = min(s, t), max(s, t)
        for n in range(1, depth + 1):
            k = 2**n
            # An integer m with k*lo + 1/4 <= m <= k*hi - 1/4 separates the
            # two link ranges, and doubling the chain maps m to 2m, which
            # satisfies the same bounds: separation persists forever.
            m = _ceil(k * lo + Fraction(1, 4))
            if m <= k * hi - Fraction(1, 4):
                forward = LE if s < t else GE
                if self.variant == "reversed":
                    forward = GE if forward == LE else LE
                certificate = {"kind": "interval-gap", "witness_index": m, "links": k}
                return ComparisonVerdict.stabilized(forward, n, depth, certificate=certificate)
        return ComparisonVerdict.unknown(depth)

    def walk_samples(self, n: int) -> list:
        k = 2**n
        return [CatalogPoint("segment", Fraction(i, 8 * k)) for i in range(8 * k + 1)]

    def tail_samples(self, n: int) -> list:
        return []


# -- the closed sine curve S1 --------------------------------------------------


class _SinePlan(NamedTuple):
    n: int
    h: Fraction
    ov: Fraction
    deep: int
    ustar: Fraction
    windows: int
    slabs: int
    band: Fraction
    ovb: Fraction
    size: int
    top_first: bool
    flip: bool
    mesh: Fraction


@dataclass(frozen=True)
class SineChainFamily:
    """Chains on S1 that walk the oscillation first, then the limit bar.

    Variant D cuts the oscillation at a peak and enters the bar from the
    top; D' cuts at a trough and enters from the bottom; E and E' are
    the reversely numbered copies.
    """

    variant: str = "D"
    _levels: dict = field(default_factory=dict, compare=False, repr=False)
    _plans: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.variant not in ("D", "D'", "E", "E'"):
            raise ValueError(f"unknown variant: {self.variant!r}")

    @property
    def space(self) -> StrandSpace:
        return s1_space()

    def _plan(self, n: int) -> _SinePlan:
        _require_level(n)
        if n not in self._plans:
            c = 3 * (n + 3)
            h = Fraction(1, c)
            peak_cut = self.variant in ("D", "E")
            deep = 4 * n + 2 if peak_cut else 4 * n + 4
            windows = deep * c
            slabs = 4 * (n + 3)
            band = Fraction(2, slabs)
            plan = _SinePlan(
                n=n,
                h=h,
                ov=h / 8,
                deep=deep,
                ustar=deep - h / 8,
                windows=windows,
                slabs=slabs,
                band=band,
                ovb=band / 8,
                size=windows + slabs,
                top_first=peak_cut,
                flip=self.variant in ("E", "E'"),
                mesh=max(h + h / 4, band + band / 4, _wave_point(deep - h / 8)[0]),
            )
            self._plans[n] = plan
        return self._plans[n]

    def _base_index(self, plan: _SinePlan, point: CatalogPoint) -> IndexRange:
        if point.strand == "wave":
            u = point.param
            if u <= plan.ustar:
                return _window_range(u, plan.h, plan.ov, plan.windows)
            if u < plan.deep + plan.ov:
                return IndexRange(plan.windows, plan.windows + 1)
            y = _clamp(_wave_point(u)[1], Fraction(-1), _ONE)
        elif point.strand == "bar":
            y = point.param
        else:
            raise ValueError(f"unknown point: {point}")
        o = (1 - y) if plan.top_first else (y + 1)
        return _shift(_window_range(o, plan.band, plan.ovb, plan.slabs), plan.windows)

    def level(self, n: int) -> ChainLevel:
        if n not in self._levels:
            plan = self._plan(n)

            def index_of(point, plan=plan) -> IndexRange:
                r = self._base_index(plan, point)
                return reverse_range(plan.size, r) if plan.flip else r

            lvl = ChainLevel(level=n, size=plan.size, mesh_bound=plan.mesh, index_fn=index_of)
            # The walk enters from the free end: the outermost trough is in
            # the first link, and the bar is first met by its entry slab.
            outer = self._base_index(plan, CatalogPoint("wave", 0))
            if outer != IndexRange(1, 1):
                raise AssertionError("free end must open the walk")
            entry = CatalogPoint("bar", 1 if plan.top_first else -1)
            if self._base_index(plan, entry) != IndexRange(plan.windows + 1, plan.windows + 1):
                raise AssertionError("bar entry must follow the last window")
            self._levels[n] = lvl
        return self._levels[n]

    def _pair_settled(self, x: CatalogPoint, y: CatalogPoint, n: int) -> bool:
        plan = self._plan(n)

        def settled(p: CatalogPoint) -> bool:
            return p.strand == "bar" or p.param <= plan.ustar

        return settled(x) and settled(y)

    def compare_certificate(self, x, y, ultrafilter, depth: int) -> ComparisonVerdict:
        return _scan_certificate(self, x, y, depth)

    def walk_samples(self, n: int) -> list:
        plan = self._plan(n)
        pts = [
            CatalogPoint("wave", Fraction(k) * plan.h / 8)
            for k in range(8 * plan.windows + 1)
        ]
        pts.append(CatalogPoint("wave", plan.deep + plan.ov / 2))
        for k in range(8 * plan.slabs + 1):
            o = Fraction(k) * plan.band / 8
            y = (1 - o) if plan.top_first else (o - 1)
            pts.append(CatalogPoint("bar", y))
        return pts

    def tail_samples(self, n: int) -> list:
        plan = self._plan(n)
        u = plan.deep + plan.ov
        out = []
        while u <= plan.deep + 2:
            out.append(CatalogPoint("wave", u))
            u += plan.h / 4
        return out


# -- S2: the sine curve with an outer arc --------------------------------------


class _S2Plan(NamedTuple):
    n: int
    h: Fraction
    ov: Fraction
    deep: int
    ustar: Fraction
    windows: int
    slabs: int
    eta: Fraction
    ovp: Fraction
    size: int
    flip: bool
    mesh: Fraction


@dataclass(frozen=True)
class OuterArcChainFamily:
    """Chains on S2 walking the oscillation, then the outer arc end to end.

    The oscillation is cut at a peak, so the walk always enters the
    outer arc at its inner top corner; the reversed variant renumbers
    the same cover backwards.
    """

    variant: str = "standard"
    _levels: dict = field(default_factory=dict, compare=False, repr=False)
    _plans: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.variant not in ("standard", "reversed"):
            raise ValueError(f"unknown variant: {self.variant!r}")

    @property
    def space(self) -> StrandSpace:
        return s2_space()

    def _plan(self, n: int) -> _S2Plan:
        _require_level(n)
        if n not in self._plans:
            c = 3 * (n + 3)
            h = Fraction(1, c)
            deep = 4 * n + 2
            windows = deep * c
            eta = Fraction(1, 2 * (n + 3))
            slabs = 10 * (n + 3)
            self._plans[n] = _S2Plan(
                n=n,
                h=h,
                ov=h / 8,
                deep=deep,
                ustar=deep - h / 8,
                windows=windows,
                slabs=slabs,
                eta=eta,
                ovp=eta / 8,
                size=windows + slabs,
                flip=self.variant == "reversed",
                mesh=max(h + h / 4, eta + eta / 4 + _wave_point(deep - h / 8)[0]),
            )
        return self._plans[n]

    def _base_index(self, plan: _S2Plan, point: CatalogPoint) -> IndexRange:
        if point.strand == "wave":
            u = point.param
            if u <= plan.ustar:
                return _window_range(u, plan.h, plan.ov, plan.windows)
            if u < plan.deep + plan.ov:
                return IndexRange(plan.windows, plan.windows + 1)
            # The tail hugs the inner wall of the outer arc.
            p = 1 - _clamp(_wave_point(u)[1], Fraction(-1), _ONE)
        elif point.strand == "ell":
            p = point.param
        else:
            raise ValueError(f"unknown point: {point}")
        return _shift(_window_range(p, plan.eta, plan.ovp, plan.slabs), plan.windows)

    def level(self, n: int) -> ChainLevel:
        if n not in self._levels:
            plan = self._plan(n)

            def index_of(point, plan=plan) -> IndexRange:
                r = self._base_index(plan, point)
                return reverse_range(plan.size, r) if plan.flip else r

            if self._base_index(plan, CatalogPoint("wave", 0)) != IndexRange(1, 1):
                raise AssertionError("free end must open the walk")
            corner = self._base_index(plan, CatalogPoint("ell", 0))
            if corner != IndexRange(plan.windows + 1, plan.windows + 1):
                raise AssertionError("outer arc must start right after the windows")
            self._levels[n] = ChainLevel(
                level=n, size=plan.size, mesh_bound=plan.mesh, index_fn=index_of
            )
        return self._levels[n]

    def _pair_settled(self, x: CatalogPoint, y: CatalogPoint, n: int) -> bool:
        plan = self._plan(n)

        def settled(p: CatalogPoint) -> bool:
            return p.strand == "ell" or p.param <= plan.ustar

        return settled(x) and settled(y)

    def compare_certificate(self, x, y, ultrafilter, depth: int) -> ComparisonVerdict:
        return _scan_certificate(self, x, y, depth)

    def walk_samples(self, n: int) -> list:
        plan = self._plan(n)
        pts = [
            CatalogPoint("wave", Fraction(k) * plan.h / 8)
            for k in range(8 * plan.windows + 1)
        ]
        pts.append(CatalogPoint("wave", plan.deep + plan.ov / 2))
        pts += [
            CatalogPoint("ell", Fraction(k) * plan.eta / 8)
            for k in range(8 * plan.slabs + 1)
        ]
        return pts

    def tail_samples(self, n: int) -> list:
        plan = self._plan(n)
        u = plan.deep + plan.ov
        out = []
        while u <= plan.deep + 2:
            out.append(CatalogPoint("wave", u))
            u += plan.h / 4
        return out


# -- S3: the forest of teeth ----------------------------------------------------


class _Leg(NamedTuple):
    w_hi: Fraction
    w_lo: Fraction
    count: int
    step: Fraction
    ovw: Fraction
    link_base: int


class _GapPlan(NamedTuple):
    base: int
    legs: tuple[_Leg, ...]
    total: int
    cut_r_w: Fraction
    marg_r: Fraction
    kind_l: str
    cut_l_w: Fraction
    marg_l: Fraction


class _S3Plan(NamedTuple):
    m: int
    bits: tuple[int, ...]
    tooth_base: dict
    tooth_slabs: dict
    tooth_bt: dict
    gaps: dict
    blob: int
    size: int
    mesh: Fraction


def _tooth_wlim(j: int, m: int) -> Fraction:
    lim = min(Fraction(1, 4 * m), _gap_width(j) / 4)
    if j >= 2:
        lim = min(lim, _gap_width(j - 1) / 4)
    return lim


def _cut_depth(i: int, side: int, kind: str, m: int, tooth: int) -> int:
    wlim = _tooth_wlim(tooth, m)
    width = _gap_width(i)
    k = 1
    while True:
        off = (width / 2 if kind == "z" else 3 * width / 8) / 2**k
        ok = off <= wlim / 2
        if ok and kind == "p":
            height = Fraction(1, i) if side > 0 else Fraction(1, i + 1)
            ok = height / 2 ** (k + 1) <= Fraction(1, 16 * m)
        if ok:
            return k
        k += 1


def _build_gap(i: int, m: int, bits: tuple[int, ...], base: int) -> _GapPlan:
    kind_r = "z" if bits[i - 1] == 1 else "p"
    k_r = _cut_depth(i, 1, kind_r, m, i)
    if i < m:
        kind_l = "p" if bits[i] == 1 else "z"
        k_l = _cut_depth(i, -1, kind_l, m, i + 1)
    else:
        kind_l = "blob"
        k_l = (2 * m - 1).bit_length()

    anchors: list[tuple[Fraction, Point2]] = []
    right: list[tuple[str, int]] = []
    if kind_r == "p":
        right.append(("p", k_r))
    right.append(("z", k_r))
    for k in range(k_r - 1, -1, -1):
        right.append(("p", k))
        right.append(("z", k))
    for kind, k in right:
        anchors.append((_anchor_abs(kind, k), _anchor_point(i, 1, kind, k)))
    left: list[tuple[str, int]] = []
    for k in range(k_l):
        left.append(("p", k))
        left.append(("z", k + 1))
    if kind_l == "p":
        left.append(("p", k_l))
    for kind, k in left:
        anchors.append((-_anchor_abs(kind, k), _anchor_point(i, -1, kind, k)))

    eta = Fraction(1, 4 * m)
    legs: list[_Leg] = []
    link = base
    for (wa, pa), (wb, pb) in zip(anchors, anchors[1:]):
        dy = abs(pb[1] - pa[1])
        count = max(1, _ceil(dy / eta))
        step = (wa - wb) / count
        legs.append(_Leg(wa, wb, count, step, step / 8, link))
        link += count

    # Peak cuts leave a small height deficit at the adjoining tooth; it
    # must fall inside the entry slab's own band.
    for kind, k, tooth, side in (
        (kind_r, k_r, i, 1),
        (kind_l, k_l, i + 1, -1),
    ):
        if kind == "p":
            height = Fraction(1, i) if side > 0 else Fraction(1, i + 1)
            deficit = height / 2 ** (k + 1)
            slab = Fraction(1, tooth) / _ceil(Fraction(4 * m, tooth))
            if deficit > slab / 2:
                raise AssertionError("cut deficit escapes the entry slab")

    return _GapPlan(
        base=base,
        legs=tuple(legs),
        total=link - base,
        cut_r_w=anchors[0][0],
        marg_r=legs[0].ovw,
        kind_l=kind_l,
        cut_l_w=anchors[-1][0],
        marg_l=legs[-1].ovw,
    )


def _parse_s3_strand(name: str) -> tuple[str, int]:
    if name == "origin":
        return "origin", 0
    kind, _, idx = name.partition("_")
    if kind in ("tooth", "gap") and idx.isdigit():
        return kind, int(idx)
    raise ValueError(f"unknown point: strand {name!r}")


@dataclass(frozen=True)
class ToothForestChainFamily:
    """Chains on S3 walking tooth 1, gap 1, tooth 2, ... then one deep blob.

    Bit i of the prefix picks the walk direction through tooth i: bit 0
    covers the bottom endpoint in an earlier link than the top, bit 1
    the reverse.  Everything beyond the level's reach is absorbed into
    the single last link.
    """

    bits: tuple[int, ...]
    _levels: dict = field(default_factory=dict, compare=False, repr=False)
    _plans: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError("the prefix must be a nonempty tuple of 0/1 bits")

    @property
    def space(self) -> StrandSpace:
        return s3_space()

    def _plan(self, m: int) -> _S3Plan:
        _require_level(m)
        if m > len(self.bits):
            raise ValueError(
                f"prefix too short: level {m} needs {m} bits, got {len(self.bits)}"
            )
        if m not in self._plans:
            tooth_base: dict[int, int] = {}
            tooth_slabs: dict[int, int] = {}
            tooth_bt: dict[int, Fraction] = {}
            gaps: dict[int, _GapPlan] = {}
            off = 0
            for i in range(1, m + 1):
                slabs = _ceil(Fraction(4 * m, i))
                tooth_base[i] = off
                tooth_slabs[i] = slabs
                tooth_bt[i] = Fraction(1, i) / slabs
                off += slabs
                gaps[i] = _build_gap(i, m, self.bits, off)
                off += gaps[i].total
            self._plans[m] = _S3Plan(
                m=m,
                bits=self.bits[:m],
                tooth_base=tooth_base,
                tooth_slabs=tooth_slabs,
                tooth_bt=tooth_bt,
                gaps=gaps,
                blob=off + 1,
                size=off + 1,
                mesh=Fraction(4 * m + 1, 4 * m * (m + 1)),
            )
        return self._plans[m]

    def _tooth_index(self, plan: _S3Plan, i: int, y: Fraction) -> IndexRange:
        if i > plan.m:
            return IndexRange(plan.blob, plan.blob)
        y = _clamp(y, _ZERO, Fraction(1, i))
        o = (Fraction(1, i) - y) if plan.bits[i - 1] == 1 else y
        r = _window_range(o, plan.tooth_bt[i], plan.tooth_bt[i] / 8, plan.tooth_slabs[i])
        return _shift(r, plan.tooth_base[i])

    def _gap_index(self, plan: _S3Plan, i: int, w: Fraction) -> IndexRange:
        if i > plan.m:
            return IndexRange(plan.blob, plan.blob)
        g = plan.gaps[i]
        if w > g.cut_r_w:
            if w < g.cut_r_w + g.marg_r:
                return IndexRange(g.base, g.base + 1)
            return self._tooth_index(plan, i, _gap_point(i, w)[1])
        if w < g.cut_l_w:
            if w > g.cut_l_w - g.marg_l:
                last = g.base + g.total
                return IndexRange(last, last + 1)
            if g.kind_l == "blob":
                return IndexRange(plan.blob, plan.blob)
            return self._tooth_index(plan, i + 1, _gap_point(i, w)[1])
        for leg in g.legs:
            if w >= leg.w_lo:
                d = leg.w_hi - w
                r = _window_range(d, leg.step, leg.ovw, leg.count)
                lo, hi = r.lo + leg.link_base, r.hi + leg.link_base
                if d < leg.ovw and leg.link_base > g.base:
                    lo = leg.link_base
                elif d > leg.count * leg.step - leg.ovw and leg.link_base + leg.count < g.base + g.total:
                    hi = leg.link_base + leg.count + 1
                return IndexRange(lo, hi)
        raise AssertionError("gap legs must cover the span between the cuts")

    def level(self, n: int) -> ChainLevel:
        if n not in self._levels:
            plan = self._plan(n)

            def index_of(point: CatalogPoint, plan=plan) -> IndexRange:
                kind, i = _parse_s3_strand(point.strand)
                if kind == "origin":
                    return IndexRange(plan.blob, plan.blob)
                if kind == "tooth":
                    return self._tooth_index(plan, i, point.param)
                return self._gap_index(plan, i, point.param)

            self._levels[n] = ChainLevel(
                level=n, size=plan.size, mesh_bound=plan.mesh, index_fn=index_of
            )
        return self._levels[n]

    def _classify(self, plan: _S3Plan, p: CatalogPoint) -> str:
        kind, i = _parse_s3_strand(p.strand)
        if kind == "origin" or i > plan.m:
            return "blob"
        if kind == "tooth":
            return "pure"
        g = plan.gaps[i]
        w = p.param
        if w > g.cut_r_w:
            return "margin" if w < g.cut_r_w + g.marg_r else "tail"
        if w < g.cut_l_w:
            if w > g.cut_l_w - g.marg_l:
                return "margin"
            return "blob-partial" if g.kind_l == "blob" else "tail"
        return "pure"

    def _pair_settled(self, x: CatalogPoint, y: CatalogPoint, n: int) -> bool:
        plan = self._plan(n)
        cx, cy = self._classify(plan, x), self._classify(plan, y)
        if {cx, cy} == {"pure"}:
            return True
        if {cx, cy} == {"pure", "blob"}:
            return True
        if {cx, cy} == {"pure", "blob-partial"}:
            # A point still beyond the deepest covered gap's blob cut will
            # graduate behind every currently covered link except later
            # parameters of its own strand.
            return x.strand != y.strand
        return False

    def compare_certificate(self, x, y, ultrafilter, depth: int) -> ComparisonVerdict:
        return _scan_certificate(self, x, y, depth)

    def walk_samples(self, n: int) -> list:
        plan = self._plan(n)
        pts: list[CatalogPoint] = []
        for i in range(1, plan.m + 1):
            bt = plan.tooth_bt[i]
            top = Fraction(1, i)
            for k in range(8 * plan.tooth_slabs[i] + 1):
                o = Fraction(k) * bt / 8
                y = top - o if plan.bits[i - 1] == 1 else o
                pts.append(CatalogPoint(f"tooth_{i}", y))
            g = plan.gaps[i]
            pts.append(CatalogPoint(f"gap_{i}", g.cut_r_w + g.marg_r / 2))
            for leg in g.legs:
                for k in range(8 * leg.count + 1):
                    pts.append(CatalogPoint(f"gap_{i}", leg.w_hi - Fraction(k) * leg.step / 8))
            pts.append(CatalogPoint(f"gap_{i}", g.cut_l_w - g.marg_l / 2))
        blob_gap = plan.gaps[plan.m]
        deep = plan.m + 1
        pts += [
            CatalogPoint(f"gap_{plan.m}", (blob_gap.cut_l_w - 1) / 2),
            CatalogPoint(f"tooth_{deep}", 0),
            CatalogPoint(f"tooth_{deep}", Fraction(1, 2 * deep)),
            CatalogPoint(f"tooth_{deep}", Fraction(1, deep)),
            CatalogPoint(f"gap_{deep}", Fraction(-1, 2)),
            CatalogPoint(f"gap_{deep}", _ZERO),
            CatalogPoint(f"gap_{deep}", Fraction(1, 2)),
            CatalogPoint(f"tooth_{deep + 1}", 0),
            CatalogPoint("origin", 0),
        ]
        return pts

    def tail_samples(self, n: int) -> list:
        plan = self._plan(n)
        pts: list[CatalogPoint] = []
        for i in range(1, plan.m + 1):
            g = plan.gaps[i]
            for lo, hi in (
                (g.cut_r_w + g.marg_r, (g.cut_r_w + 3) / 4),
                ((g.cut_l_w - 1) / 2, g.cut_l_w - g.marg_l),
            ):
                span = hi - lo
                if span <= 0:
                    continue
                for k in range(33):
                    pts.append(CatalogPoint(f"gap_{i}", lo + span * Fraction(k, 32)))
        return pts


# -- space T ---------------------------------------------------------------------


class _TPlan(NamedTuple):
    n: int
    h: Fraction
    ov: Fraction
    deep: int
    ustar: Fraction
    wave_count: int
    slabs: int
    band: Fraction
    ovb: Fraction
    hs: Fraction
    ovs: Fraction
    spiral_count: int
    spiral_len: Fraction
    off_spiral: int
    off_bar: int
    off_wave: int
    size: int
    bottom_up: bool
    mesh: Fraction


@dataclass(frozen=True)
class SpiralChainFamily:
    """Chains on T ordering the components as spiral, bar, oscillation (D)
    or bar, oscillation, spiral (E).

    Variant D covers the spiral from its free end down to the cut vertex
    of circuit n and hands over to the bar's bottom slab; variant E
    covers the circuits outward from the gate of circuit n, so its
    spiral block trails the oscillation block instead.
    """

    variant: str = "D"
    _levels: dict = field(default_factory=dict, compare=False, repr=False)
    _plans: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.variant not in ("D", "E"):
            raise ValueError(f"unknown variant: {self.variant!r}")

    @property
    def space(self) -> StrandSpace:
        return t_space()

    def _plan(self, n: int) -> _TPlan:
        _require_level(n)
        if n not in self._plans:
            c = 3 * (n + 3)
            h = Fraction(1, c)
            slabs = 4 * (n + 3)
            band = Fraction(2, slabs)
            is_d = self.variant == "D"
            deep = 4 * n + 2 if is_d else 4 * n + 4
            wave_count = deep * c
            hs = h
            data = _pass_data(n)
            if is_d:
                spiral_len = _prefix_total(n - 1) + data.cum[data.cut_index]
            else:
                spiral_len = _prefix_total(n - 1)
            spiral_count = _ceil(spiral_len / hs)
            if is_d:
                off_spiral, off_bar, off_wave = 0, spiral_count, spiral_count + slabs
            else:
                off_bar, off_wave, off_spiral = 0, slabs, slabs + wave_count
            e = _spiral_eps(n)
            mesh = max(
                h + h / 4 + 6 * e,
                band + band / 4 + 2 * e,
                _wave_point(deep - h / 8)[0] + 2 * e,
                data.bar_x_max + 2 * e,
                hs + hs / 4,
            )
            self._plans[n] = _TPlan(
                n=n,
                h=h,
                ov=h / 8,
                deep=deep,
                ustar=deep - h / 8,
                wave_count=wave_count,
                slabs=slabs,
                band=band,
                ovb=band / 8,
                hs=hs,
                ovs=hs / 8,
                spiral_count=spiral_count,
                spiral_len=spiral_len,
                off_spiral=off_spiral,
                off_bar=off_bar,
                off_wave=off_wave,
                size=spiral_count + slabs + wave_count,
                bottom_up=is_d,
                mesh=mesh,
            )
        return self._plans[n]

    def _bar_index(self, plan: _TPlan, y: Fraction) -> IndexRange:
        o = (y + 1) if plan.bottom_up else (1 - y)
        return _shift(_window_range(o, plan.band, plan.ovb, plan.slabs), plan.off_bar)

    def _wave_index(self, plan: _TPlan, u: Fraction) -> IndexRange:
        # Windows run from the deep cutoff outward to the free end.
        if u <= plan.ustar:
            r = _window_range(plan.deep - u, plan.h, plan.ov, plan.wave_count)
            return _shift(r, plan.off_wave)
        if u < plan.deep + plan.ov:
            return IndexRange(plan.off_wave, plan.off_wave + 1)
        return self._bar_index(plan, _clamp(_wave_point(u)[1], Fraction(-1), _ONE))

    def _spiral_host(self, plan: _TPlan, v: Fraction) -> IndexRange:
        data, i, t = _spiral_locate(v)
        tag = data.tags[i]
        if tag[0] == "bar":
            y = _clamp(_spiral_point(v)[1], Fraction(-1), _ONE)
            return self._bar_index(plan, y)
        u = tag[1] + t * (tag[2] - tag[1])
        return self._wave_index(plan, u)

    def _spiral_index(self, plan: _TPlan, v: Fraction) -> IndexRange:
        s = _spiral_arclength(v)
        if self.variant == "D":
            if s <= plan.spiral_len:
                return _window_range(s, plan.hs, plan.ovs, plan.spiral_count)
            if s < plan.spiral_len + plan.ovs:
                return IndexRange(plan.spiral_count, plan.spiral_count + 1)
        elif plan.spiral_count > 0:
            if s <= plan.spiral_len:
                r = _window_range(plan.spiral_len - s, plan.hs, plan.ovs, plan.spiral_count)
                return _shift(r, plan.off_spiral)
            if s < plan.spiral_len + plan.ovs:
                return IndexRange(plan.off_spiral, plan.off_spiral + 1)
        return self._spiral_host(plan, v)

    def level(self, n: int) -> ChainLevel:
        if n not in self._levels:
            plan = self._plan(n)

            def index_of(point: CatalogPoint, plan=plan) -> IndexRange:
                if point.strand == "spiral":
                    return self._spiral_index(plan, point.param)
                if point.strand == "bar":
                    return self._bar_index(plan, point.param)
                if point.strand == "wave":
                    return self._wave_index(plan, point.param)
                raise ValueError(f"unknown point: {point}")

            self._levels[n] = ChainLevel(
                level=n, size=plan.size, mesh_bound=plan.mesh, index_fn=index_of
            )
        return self._levels[n]

    def _pair_settled(self, x: CatalogPoint, y: CatalogPoint, n: int) -> bool:
        plan = self._plan(n)

        def settled(p: CatalogPoint) -> bool:
            if p.strand == "bar":
                return True
            if p.strand == "wave":
                return p.param <= plan.ustar
            if plan.spiral_count == 0:
                return False
            return _spiral_arclength(p.param) <= plan.spiral_len

        return settled(x) and settled(y)

    def compare_certificate(self, x, y, ultrafilter, depth: int) -> ComparisonVerdict:
        return _scan_certificate(self, x, y, depth)

    def _spiral_walk(self, plan: _TPlan, outward: bool) -> list:
        # Sample per window in the window coordinate so the terminal
        # partial window still receives a full grid; window boundaries
        # land exactly on the overlap and witness adjacency.
        if plan.spiral_count == 0 or plan.spiral_len == 0:
            return []
        ts: list[Fraction] = []
        for i in range(1, plan.spiral_count + 1):
            lo = plan.hs * (i - 1)
            hi = min(plan.hs * i, plan.spiral_len)
            step = (hi - lo) / 8
            for k in range(9):
                t = lo + step * k
                if not ts or t > ts[-1]:
                    ts.append(t)
        ss = [plan.spiral_len - t for t in ts] if outward else ts
        return [CatalogPoint("spiral", _spiral_param_at(s)) for s in ss]

    def walk_samples(self, n: int) -> list:
        plan = self._plan(n)
        pts: list[CatalogPoint] = []
        bar = []
        for k in range(8 * plan.slabs + 1):
            o = Fraction(k) * plan.band / 8
            y = o - 1 if plan.bottom_up else 1 - o
            bar.append(CatalogPoint("bar", y))
        wave = [CatalogPoint("wave", plan.deep + plan.ov / 2)]
        for k in range(8 * plan.wave_count + 1):
            wave.append(CatalogPoint("wave", plan.deep - Fraction(k) * plan.h / 8))
        if self.variant == "D":
            pts += self._spiral_walk(plan, outward=False)
            pts.append(CatalogPoint("spiral", _spiral_param_at(plan.spiral_len + plan.ovs / 2)))
            pts += bar + wave
        else:
            pts += bar + wave
            if plan.spiral_count > 0:
                pts.append(
                    CatalogPoint("spiral", _spiral_param_at(plan.spiral_len + plan.ovs / 2))
                )
            pts += self._spiral_walk(plan, outward=True)
        return pts

    def tail_samples(self, n: int) -> list:
        plan = self._plan(n)
        pts = []
        u = plan.deep + plan.ov
        while u <= plan.deep + 2:
            pts.append(CatalogPoint("wave", u))
            u += plan.h / 4
        s = plan.spiral_len + plan.ovs
        stop = plan.spiral_len + 2
        while s <= stop:
            pts.append(CatalogPoint("spiral", _spiral_param_at(s)))
            s += plan.hs / 3
        deep_pass = Fraction(1, 2**n)
        for k in range(1, 17):
            pts.append(CatalogPoint("spiral", deep_pass - deep_pass / 2 * Fraction(k, 17)))
        return pts


# -- family factories and level facades -----------------------------------------


@lru_cache(maxsize=None)
def arc_family(variant: str = "standard") -> ArcChainFamily:
    return ArcChainFamily(variant)


@lru_cache(maxsize=None)
def s1_family(variant: str = "D") -> SineChainFamily:
    return SineChainFamily(variant)


@lru_cache(maxsize=None)
def s2_family(variant: str = "standard") -> OuterArcChainFamily:
    return OuterArcChainFamily(variant)


@lru_cache(maxsize=None)
def _s3_family_cached(bits: tuple[int, ...]) -> ToothForestChainFamily:
    return ToothForestChainFamily(bits)


def s3_family(bits) -> ToothForestChainFamily:
    return _s3_family_cached(tuple(int(b) for b in bits))


@lru_cache(maxsize=None)
def t_family(variant: str = "D") -> SpiralChainFamily:
    return SpiralChainFamily(variant)


def arc_chain_family(variant: str, n: int) -> ChainLevel:
    return arc_family(variant).level(n)


def s1_chain_family(variant: str, n: int) -> ChainLevel:
    return s1_family(variant).level(n)


def s2_chain_family(variant: str, n: int) -> ChainLevel:
    return s2_family(variant).level(n)


def s3_chain_family(xprefix, n: int) -> ChainLevel:
    return s3_family(xprefix).level(n)


def t_chain_family(variant: str, n: int) -> ChainLevel:
    return t_family(variant).level(n)


# -- witnesses --------------------------------------------------------------------

S1_WITNESSES: dict[str, CatalogPoint] = {
    "limit_top": CatalogPoint("bar", 1),
    "limit_bottom": CatalogPoint("bar", -1),
    "outer_trough": CatalogPoint("wave", 0),
    "second_trough": CatalogPoint("wave", 4),
}

S2_WITNESSES: dict[str, CatalogPoint] = {
    "wall_bottom": CatalogPoint("ell", 3),
    "wall_top": CatalogPoint("ell", 5),
    "outer_trough": CatalogPoint("wave", 0),
    "second_trough": CatalogPoint("wave", 4),
}

T_REPRESENTATIVES: dict[str, tuple[CatalogPoint, ...]] = {
    "T1": (CatalogPoint("bar", 1), CatalogPoint("bar", 0), CatalogPoint("bar", -1)),
    "T2": (CatalogPoint("wave", 0), CatalogPoint("wave", 4), CatalogPoint("wave", 8)),
    "T3": (
        CatalogPoint("spiral", 1),
        CatalogPoint("spiral", Fraction(3, 4)),
        CatalogPoint("spiral", Fraction(1, 2)),
    ),
}


def s3_witness_pair(i: int) -> tuple[CatalogPoint, CatalogPoint]:
    """The endpoints of tooth i, bottom first."""
    return CatalogPoint(f"tooth_{i}", 0), CatalogPoint(f"tooth_{i}", Fraction(1, i))


# -- sampled validator --------------------------------------------------------------


def validate_level(family, n: int, *, min_samples_per_link: int = 8) -> dict:
    """Check a generated level against the chain axioms by dense sampling.

    Along the family's covered walk the index ranges must grow
    monotonically without skipping a link, every consecutive pair of
    links must be witnessed by a shared sample, and every link's sampled
    point set (walk plus absorbed-tail samples) must fit in the declared
    mesh bound.
    """
    level = family.level(n)
    size = level.size
    walk = family.walk_samples(n)
    ranges = [level.index_of(p) for p in walk]
    if ranges and ranges[0].lo > ranges[-1].lo:
        walk.reverse()
        ranges.reverse()

    def failure(reason: str, **extra) -> dict:
        return {"ok": False, "level": n, "links": size, "reason": reason, **extra}

    if ranges[0].lo != 1:
        return failure("walk must open at link 1")
    if ranges[-1].hi != size:
        return failure("walk must close at the last link")
    shared: set[int] = set()
    for prev, cur in zip(ranges, ranges[1:]):
        if cur.lo < prev.lo or cur.hi < prev.hi:
            return failure("walk indices must be monotone")
        if cur.lo > prev.hi + 1:
            return failure("walk skipped a link", at=[prev.hi, cur.lo])
    for r in ranges:
        if r.width == 2:
            shared.add(r.lo)
    missing = [i for i in range(1, size) if i not in shared]
    if missing:
        return failure("adjacent links without a shared sample", links=missing[:5])

    space = family.space
    buckets: dict[int, list[Point2]] = {}
    for p, r in zip(walk, ranges):
        pos = space.position(p)
        for i in r.indices():
            buckets.setdefault(i, []).append(pos)
    for p in family.tail_samples(n):
        pos = space.position(p)
        for i in level.index_of(p).indices():
            buckets.setdefault(i, []).append(pos)

    thin = [i for i in range(1, size + 1) if len(buckets.get(i, ())) < min_samples_per_link]
    if thin:
        return failure("links sampled too thinly", links=thin[:5])
    worst = _ZERO
    for i, pts in buckets.items():
        xs = [q[0] for q in pts]
        ys = [q[1] for q in pts]
        diam = max(max(xs) - min(xs), max(ys) - min(ys))
        if diam > level.mesh_bound:
            return failure(
                "sampled diameter exceeds the mesh bound",
                link=i,
                diameter=rational_str(diam),
                mesh=rational_str(level.mesh_bound),
            )
        worst = max(worst, diam)
    return {
        "ok": True,
        "level": n,
        "links": size,
        "max_sampled_diameter": rational_str(worst),
        "mesh_bound": rational_str(level.mesh_bound),
        "samples": sum(len(v) for v in buckets.values()),
    }
