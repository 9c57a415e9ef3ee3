"""Tail-flip combinatorics on finite binary words.

The maps ``s_n`` complement every coordinate from position ``n`` on.
Truncated to words of a fixed length they are commuting involutions, so
any composition is determined by the set of indices used mod 2; the
interest is in which compositions are reachable under structural side
conditions: odd length, restriction to a marked set, or a prescribed
parity while steering one cylinder onto another.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

Word = tuple[int, ...]

EVEN = "even"
ODD = "odd"


class SearchBoundExceeded(ValueError):
    """No composition within the declared search bound (indicates a bug)."""


def parse_word(text: str | Iterable[int]) -> Word:
    """Normalize ``"0110"`` or any 0/1 iterable to a bit tuple."""
    bits = tuple(int(b) for b in text)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"not a binary word: {text!r}")
    return bits


def flip(n: int, w: Sequence[int]) -> Word:
    """Complement every coordinate of ``w`` from position ``n`` on."""
    word = parse_word(w)
    if not 0 <= n < len(word):
        raise ValueError(f"flip index {n} outside word of length {len(word)}")
    return word[:n] + tuple(1 - b for b in word[n:])


def in_A_n(n: int, w: Sequence[int]) -> bool:
    """Membership in A_n: zeros through position n-2, then a one.

    A_0 is everything.
    """
    word = parse_word(w)
    if len(word) < n:
        raise ValueError(f"word of length {len(word)} too short for A_{n}")
    if n == 0:
        return True
    return all(b == 0 for b in word[: n - 1]) and word[n - 1] == 1


def apply_composition(composition: Sequence[int], w: Sequence[int]) -> Word:
    """Apply the flips leftmost first.

    The flips commute, so the order never changes the result; one order
    is fixed anyway to keep reports reproducible.
    """
    word = parse_word(w)
    for i in composition:
        word = flip(i, word)
    return word


def composition_parity(composition: Sequence[int]) -> str:
    return ODD if len(composition) % 2 else EVEN


def _prefix_flip(i: int, prefix: Word) -> Word:
    # Flips at indices >= len(prefix) fix the cylinder setwise.
    if i >= len(prefix):
        return prefix
    return prefix[:i] + tuple(1 - b for b in prefix[i:])


def decompose_on_cylinder(n: int, s: Sequence[int]) -> Word:
    """Odd-length flip composition agreeing with ``flip(n, .)`` on B_s.

    Conjugates the restricted map ``s_n | A_n`` by a mover that carries
    the cylinder into A_n; the mover uses only indices below n, so the
    whole composition stays within indices <= n.
    """
    prefix = parse_word(s)
    if len(prefix) != n:
        raise ValueError(f"cylinder prefix must have length {n}, got {len(prefix)}")
    if n == 0:
        return (0,)
    target = (0,) * (n - 1) + (1,)
    mover: list[int] = []
    cur = prefix
    for i in range(n):
        if cur[i] != target[i]:
            mover.append(i)
            cur = _prefix_flip(i, cur)
    assert in_A_n(n, cur), "mover failed to land in A_n"
    return tuple(mover) + (n,) + tuple(reversed(mover))


@dataclass(frozen=True)
class ReachResult:
    """A parity-constrained steering of one cylinder onto another.

    ``composition`` applied to the words extending ``source`` yields
    exactly the words extending ``image``; ``image`` extends the
    requested target prefix and ``source`` extends the requested source
    prefix.
    """

    composition: Word
    source: Word
    image: Word

    @property
    def parity(self) -> str:
        return composition_parity(self.composition)

    def as_dict(self) -> dict:
        return {
            "composition": list(self.composition),
            "parity": self.parity,
            "source": list(self.source),
            "image": list(self.image),
        }


def reach_with_parity(
    s: Sequence[int], target: Sequence[int], parity: str, depth: int
) -> ReachResult:
    """Steer a sub-cylinder of B_s onto the target cylinder.

    Breadth-first search over (prefix, parity) states; moves are the
    prefix flips plus one fresh index that fixes every cylinder setwise
    and toggles the parity.  Exploration order is fixed (sources in
    ascending binary order, flip indices ascending), so the returned
    composition is deterministic.
    """
    src = parse_word(s)
    tgt = parse_word(target)
    if parity not in (EVEN, ODD):
        raise ValueError(f"parity must be {EVEN!r} or {ODD!r}")
    length = max(len(src), len(tgt))
    if depth < length + 2:
        raise ValueError(f"depth {depth} too shallow: need at least {length + 2}")
    bound = 2 * (len(tgt) + 2)
    want_odd = parity == ODD

    def is_goal(prefix: Word, odd: bool) -> bool:
        return odd == want_odd and prefix[: len(tgt)] == tgt

    starts = []
    for ext in range(2 ** (length - len(src))):
        tail = tuple((ext >> (length - len(src) - 1 - k)) & 1 for k in range(length - len(src)))
        starts.append(src + tail)

    seen: dict[tuple[Word, bool], tuple] = {}
    queue: deque[tuple[Word, bool]] = deque()
    for start in starts:
        state = (start, False)
        if state not in seen:
            seen[state] = (None, None, start)
            queue.append(state)

    moves = list(range(length)) + [length]  # the last entry is the fresh index

    def unwind(state: tuple[Word, bool]) -> ReachResult:
        path: list[int] = []
        prefix, odd = state
        image = prefix
        while True:
            parent, move, origin = seen[(prefix, odd)]
            if parent is None:
                return ReachResult(tuple(path), origin, image)
            path.insert(0, move)
            prefix, odd = parent

    for state in list(queue):
        if is_goal(*state):
            return unwind(state)
    steps = 0
    while queue and steps < bound:
        steps += 1
        for _ in range(len(queue)):
            prefix, odd = queue.popleft()
            for i in moves:
                nxt = (_prefix_flip(i, prefix), not odd)
                if nxt in seen:
                    continue
                seen[nxt] = ((prefix, odd), i, seen[(prefix, odd)][2])
                if is_goal(*nxt):
                    return unwind(nxt)
                queue.append(nxt)
    raise SearchBoundExceeded(
        f"no composition of length <= {bound} reaches {tgt} with {parity} parity"
    )
