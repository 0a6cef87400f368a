"""Eventually periodic subsets of the naturals.

An :class:`EPSet` is described by a threshold ``t``, a period ``p``, the
membership bits of ``[0, t)`` and one period of bits for ``n >= t``. Values
are kept in canonical form (minimal period, then minimal threshold), so
dataclass equality is set equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

EMPTY_KIND = "empty"
FINITE_KIND = "finite"
COFINITE_KIND = "cofinite"
INFINITE_KIND = "infinite-coinfinite"


def _check_bits(bits: str, name: str) -> str:
    if not isinstance(bits, str) or bits.strip("01"):
        raise ValueError(f"{name} must be a 0/1 string, got {bits!r}")
    return bits


def _minimal_period(pattern: str) -> str:
    p = len(pattern)
    for d in range(1, p + 1):
        if p % d == 0 and pattern[:d] * (p // d) == pattern:
            return pattern[:d]
    return pattern


@dataclass(frozen=True)
class EPSet:
    threshold: int
    period: int
    prefix: str
    pattern: str

    def __post_init__(self):
        _check_bits(self.prefix, "prefix")
        _check_bits(self.pattern, "pattern")
        if self.period < 1 or len(self.pattern) != self.period:
            raise ValueError("pattern length must equal a positive period")
        if self.threshold < 0 or len(self.prefix) != self.threshold:
            raise ValueError("prefix length must equal the threshold")
        pattern = _minimal_period(self.pattern)
        prefix = self.prefix
        # slide the periodic part left while the last prefix bit repeats it
        while prefix and prefix[-1] == pattern[-1]:
            prefix = prefix[:-1]
            pattern = pattern[-1] + pattern[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "threshold", len(prefix))
        object.__setattr__(self, "period", len(pattern))

    # constructors

    @classmethod
    def from_bits(cls, prefix: str, pattern: str) -> EPSet:
        return cls(len(prefix), len(pattern), prefix, pattern)

    @classmethod
    def finite(cls, members: Iterable[int]) -> EPSet:
        members = set(members)
        if any(n < 0 for n in members):
            raise ValueError("naturals only")
        bits = bytearray(b"0" * (max(members) + 1 if members else 0))
        for n in members:
            bits[n] = ord("1")
        return cls.from_bits(bits.decode(), "0")

    @classmethod
    def cofinite(cls, missing: Iterable[int]) -> EPSet:
        return ~cls.finite(missing)

    @classmethod
    def progression(cls, start: int, step: int) -> EPSet:
        """``{start, start + step, start + 2*step, ...}``."""
        if start < 0 or step < 1:
            raise ValueError("progression needs start >= 0 and step >= 1")
        return cls.from_bits("0" * start, "1" + "0" * (step - 1))

    @classmethod
    def residues(cls, modulus: int, residues: Iterable[int]) -> EPSet:
        rs = {r % modulus for r in residues}
        return cls.from_bits("", "".join("1" if i in rs else "0" for i in range(modulus)))

    # semantics

    def __contains__(self, n: int) -> bool:
        return ep_member(self, n)

    def bit(self, n: int) -> bool:
        return ep_member(self, n)

    def window(self, length: int) -> str:
        """Membership bits for ``[0, length)``."""
        if length <= self.threshold:
            return self.prefix[:length]
        reps = -(-(length - self.threshold) // self.period)
        return (self.prefix + self.pattern * reps)[:length]

    def members_below(self, bound: int) -> list[int]:
        return [n for n, c in enumerate(self.window(max(bound, 0))) if c == "1"]

    def first(self, start: int = 0) -> int | None:
        """Least member ``>= start``, or None."""
        if "1" not in self.pattern:
            hits = [n for n in range(start, self.threshold) if self.prefix[n] == "1"]
            return hits[0] if hits else None
        n = start
        while not ep_member(self, n):
            n += 1
        return n

    @property
    def is_infinite(self) -> bool:
        return "1" in self.pattern

    def __or__(self, other: EPSet) -> EPSet:
        return ep_union(self, other)

    def __and__(self, other: EPSet) -> EPSet:
        return ep_inter(self, other)

    def __sub__(self, other: EPSet) -> EPSet:
        return ep_inter(self, ep_complement(other))

    def __xor__(self, other: EPSet) -> EPSet:
        return _combine(self, other, lambda a, b: a != b)

    def __invert__(self) -> EPSet:
        return ep_complement(self)

    def __le__(self, other: EPSet) -> bool:
        return (self - other) == EMPTY

    def isdisjoint(self, other: EPSet) -> bool:
        return (self & other) == EMPTY

    def to_json(self) -> dict:
        return {"threshold": self.threshold, "period": self.period,
                "prefix": self.prefix, "pattern": self.pattern}

    @classmethod
    def from_json(cls, obj) -> EPSet:
        if not isinstance(obj, dict):
            raise ValueError(f"malformed EPSet: {obj!r}")
        try:
            return cls(int(obj["threshold"]), int(obj["period"]),
                       str(obj["prefix"]), str(obj["pattern"]))
        except KeyError as exc:
            raise ValueError(f"EPSet missing field {exc.args[0]!r}") from None


def ep_member(s: EPSet, n: int) -> bool:
    if n < 0:
        return False
    if n < s.threshold:
        return s.prefix[n] == "1"
    return s.pattern[(n - s.threshold) % s.period] == "1"


def _combine(s: EPSet, t: EPSet, op) -> EPSet:
    threshold = max(s.threshold, t.threshold)
    period = math.lcm(s.period, t.period)
    bits = "".join("1" if op(a == "1", b == "1") else "0"
                   for a, b in zip(s.window(threshold + period), t.window(threshold + period)))
    return EPSet(threshold, period, bits[:threshold], bits[threshold:])


def ep_union(s: EPSet, t: EPSet) -> EPSet:
    return _combine(s, t, lambda a, b: a or b)


def ep_inter(s: EPSet, t: EPSet) -> EPSet:
    return _combine(s, t, lambda a, b: a and b)


def ep_complement(s: EPSet) -> EPSet:
    flip = str.maketrans("01", "10")
    return EPSet(s.threshold, s.period, s.prefix.translate(flip), s.pattern.translate(flip))


def ep_classify(s: EPSet) -> tuple[str, int | None]:
    """Kind of ``s`` and, for finite sets, its size."""
    if "1" not in s.pattern:
        size = s.prefix.count("1")
        return (EMPTY_KIND if size == 0 else FINITE_KIND), size
    if "0" not in s.pattern:
        return COFINITE_KIND, None
    return INFINITE_KIND, None


def agree_on_window(s: EPSet, t: EPSet) -> bool:
    """Equality test by comparing ``[0, max threshold + lcm period)``."""
    bound = max(s.threshold, t.threshold) + math.lcm(s.period, t.period)
    return all(ep_member(s, n) == ep_member(t, n) for n in range(bound))


EMPTY = EPSet.from_bits("", "0")
NATURALS = EPSet.from_bits("", "1")
EVENS = EPSet.progression(0, 2)
ODDS = EPSet.progression(1, 2)
