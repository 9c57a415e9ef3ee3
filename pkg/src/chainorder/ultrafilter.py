"""Finitely represented stand-ins for nonprincipal ultrafilters on the naturals.

A tower holds a chain of moduli, each dividing the next, with one residue
per modulus, compatible downward.  The residue classes generate a filter
whose nonprincipal extensions all agree on every eventually periodic set
whose period divides some modulus in the tower; that shared verdict is
what ``decide`` returns.  When no modulus fits, the tower is extended in
the minimal compatible way and the result is flagged.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .foundations import EventuallyPeriodicSet


@dataclass(frozen=True)
class Decision:
    """Outcome of deciding one set: the verdict plus the tower that made it."""

    value: bool
    modulus: int
    extended: bool
    tower: "SimulatedUltrafilter"

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "modulus": self.modulus,
            "extended": self.extended,
            "tower": self.tower.as_dict(),
        }


@dataclass(frozen=True)
class SimulatedUltrafilter:
    moduli: tuple[int, ...]
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        moduli = tuple(int(m) for m in self.moduli)
        residues = tuple(int(r) for r in self.residues)
        if not moduli or len(moduli) != len(residues):
            raise ValueError("need one residue per modulus, at least one modulus")
        if any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive")
        if any(n % m != 0 for m, n in zip(moduli, moduli[1:])):
            raise ValueError("each modulus must divide the next")
        if any(m >= n for m, n in zip(moduli, moduli[1:])):
            raise ValueError("moduli must increase strictly")
        if any(not 0 <= r < m for m, r in zip(moduli, residues)):
            raise ValueError("residues must be reduced mod their modulus")
        if any(rn % m != rm for (m, rm), rn in zip(zip(moduli, residues), residues[1:])):
            raise ValueError("residues must be compatible down the tower")
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "residues", residues)

    @classmethod
    def binary_tower(cls, bits: tuple[int, ...] | list[int]) -> "SimulatedUltrafilter":
        """Tower 1 | 2 | 4 | ... with the residue's binary digits given low-first."""
        moduli = [1]
        residues = [0]
        for k, bit in enumerate(bits):
            if bit not in (0, 1):
                raise ValueError("binary tower digits must be 0 or 1")
            moduli.append(2 ** (k + 1))
            residues.append(residues[-1] + bit * 2**k)
        return cls(tuple(moduli), tuple(residues))

    @classmethod
    def factorial_tower(cls, digits: tuple[int, ...] | list[int]) -> "SimulatedUltrafilter":
        """Tower 1! | 2! | 3! | ... ; digit k picks the residue refinement mod (k+2)!."""
        moduli = [1]
        residues = [0]
        for k, digit in enumerate(digits):
            base = moduli[-1]
            if not 0 <= digit < k + 2:
                raise ValueError(f"factorial digit {k} must lie in [0, {k + 2})")
            moduli.append(base * (k + 2))
            residues.append(residues[-1] + digit * base)
        return cls(tuple(moduli), tuple(residues))

    @classmethod
    def parse(cls, text: str) -> "SimulatedUltrafilter":
        """Parse 'r2=0,r6=4' style residue lists, ascending by modulus."""
        entries = []
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            m = re.fullmatch(r"r(\d+)=(\d+)", token)
            if m is None:
                raise ValueError(f"bad residue token: {token!r}")
            entries.append((int(m.group(1)), int(m.group(2))))
        entries.sort()
        moduli = tuple(m for m, _ in entries)
        residues = tuple(r for _, r in entries)
        if not moduli or moduli[0] != 1:
            moduli = (1,) + moduli
            residues = (0,) + residues
        return cls(moduli, residues)

    def as_dict(self) -> dict:
        return {"moduli": list(self.moduli), "residues": list(self.residues)}

    def label(self) -> str:
        return ",".join(f"r{m}={r}" for m, r in zip(self.moduli, self.residues) if m > 1) or "r1=0"

    def ensure_period(self, period: int) -> "SimulatedUltrafilter":
        """Extend minimally (fresh digits zero) until some modulus absorbs the period."""
        if period < 1:
            raise ValueError("period must be positive")
        if any(m % period == 0 for m in self.moduli):
            return self
        new_modulus = math.lcm(self.moduli[-1], period)
        return SimulatedUltrafilter(
            self.moduli + (new_modulus,), self.residues + (self.residues[-1],)
        )

    def decide(self, s: EventuallyPeriodicSet) -> Decision:
        """The verdict 'is s in the ultrafilter', from the residue class alone.

        Every member of the class n = r (mod m) beyond the prefix has the
        same membership bit in s once the period divides m, so all
        nonprincipal ultrafilters containing the class agree.
        """
        period = len(s.pattern)
        tower = self.ensure_period(period)
        extended = tower is not self
        for m, r in zip(tower.moduli, tower.residues):
            if m % period == 0:
                value = bool(s.pattern[(r - len(s.prefix)) % period])
                return Decision(value, m, extended, tower)
        raise AssertionError("ensure_period left no usable modulus")

    def decides(self, s: EventuallyPeriodicSet) -> bool:
        return self.decide(s).value


def filter_axiom_report(
    tower: SimulatedUltrafilter,
    s: EventuallyPeriodicSet,
    t: EventuallyPeriodicSet,
) -> dict:
    """Check the ultrafilter laws on the Boolean algebra generated by s and t.

    All verdicts are taken on one common tower so no decision triggers a
    further extension mid-report.
    """
    period = math.lcm(len(s.pattern), len(t.pattern))
    common = tower.ensure_period(period)
    extended = common is not tower

    def verdict(a: EventuallyPeriodicSet) -> bool:
        decision = common.decide(a)
        assert not decision.extended
        return decision.value

    ds, dt = verdict(s), verdict(t)
    d_and, d_or = verdict(s & t), verdict(s | t)
    horizon = max(len(s.prefix), len(t.prefix)) + 2
    checks = {
        "complement_dichotomy": verdict(~s) == (not ds) and verdict(~t) == (not dt),
        "intersection": d_and == (ds and dt),
        "union": d_or == (ds or dt),
        "upward_closure": (not ds or d_or) and (not dt or d_or),
        "full_set": verdict(EventuallyPeriodicSet.full()),
        "empty_set": not verdict(EventuallyPeriodicSet.empty()),
        "cofinite_sets": verdict(EventuallyPeriodicSet.cofinite_from(horizon)),
    }
    return {
        "tower": common.as_dict(),
        "extended": extended,
        "decisions": {"s": ds, "t": dt, "s_and_t": d_and, "s_or_t": d_or},
        "checks": checks,
        "pass": all(checks.values()),
    }
