"""Sets of naturals that eventually respect the pairs ``{2k, 2k + 1}``.

An eventually periodic ``M`` belongs to the algebra when ``2k in M`` iff
``2k + 1 in M`` for all ``k`` past some vanish index. The pair differences
``mu_n(E) = [2n in E] - [2n + 1 in E]`` vanish past that index.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .epsets import EPSet, ep_member
from .families import (BlockSchema, LazyUnion, PresentedAntichain,
                       SeparationWitness, partner)


class UnsupportedInputError(ValueError):
    pass


class SchemaRequiredError(ValueError):
    """The antichain is an ad-hoc finite list, so no infinite witness exists."""


def in_pair_algebra(s: EPSet) -> tuple[bool, int | None]:
    """Membership in the algebra and, if a member, the least vanish index."""
    first_periodic = -(-s.threshold // 2)
    pair_period = s.period // math.gcd(s.period, 2)

    def paired(k):
        return ep_member(s, 2 * k) == ep_member(s, 2 * k + 1)

    if not all(paired(k) for k in range(first_periodic, first_periodic + pair_period)):
        return False, None
    bits = s.window(2 * first_periodic)
    for k in range(first_periodic - 1, -1, -1):
        if bits[2 * k] != bits[2 * k + 1]:
            return True, k + 1
    return True, 0


@dataclass(frozen=True)
class PairElement:
    carrier: EPSet
    vanish_index: int

    def __post_init__(self):
        ok, least = in_pair_algebra(self.carrier)
        if not ok:
            raise ValueError("set does not eventually respect the pairs")
        if self.vanish_index < least:
            raise ValueError(f"vanish index {self.vanish_index} below the least valid {least}")

    @classmethod
    def of(cls, s: EPSet) -> PairElement:
        ok, least = in_pair_algebra(s)
        if not ok:
            raise ValueError("set does not eventually respect the pairs")
        return cls(s, least)

    @classmethod
    def finite(cls, members) -> PairElement:
        return cls.of(EPSet.finite(members))

    def __contains__(self, n: int) -> bool:
        return ep_member(self.carrier, n)

    @property
    def is_finite(self) -> bool:
        return not self.carrier.is_infinite

    def members(self) -> frozenset[int]:
        if not self.is_finite:
            raise ValueError("infinite element")
        return frozenset(self.carrier.members_below(self.carrier.threshold))

    def __or__(self, other: PairElement) -> PairElement:
        return PairElement.of(self.carrier | other.carrier)

    def __and__(self, other: PairElement) -> PairElement:
        return PairElement.of(self.carrier & other.carrier)

    def __sub__(self, other: PairElement) -> PairElement:
        return PairElement.of(self.carrier - other.carrier)

    def __invert__(self) -> PairElement:
        return PairElement.of(~self.carrier)

    def to_json(self) -> dict:
        return {"set": self.carrier.to_json(), "vanish_index": self.vanish_index}


def pair_closure(s) -> PairElement:
    """Smallest superset of ``s`` that contains both members of every pair it meets."""
    if isinstance(s, PairElement):
        s = s.carrier
    ok, vanish = in_pair_algebra(s)
    if not ok:
        # finite sets always pass, so only infinite ones land here
        raise UnsupportedInputError("infinite set outside the pair algebra")
    # past 2*vanish the set is already closed
    extra = {partner(n) for n in range(2 * vanish) if ep_member(s, n)}
    return PairElement.of(s | EPSet.finite(extra))


def mu_eval(n: int, e) -> Fraction:
    """``mu_n(E) = [2n in E] - [2n + 1 in E]``."""
    return Fraction(int(2 * n in e) - int(2 * n + 1 in e))


@dataclass(frozen=True)
class LazyPairUnion(LazyUnion):
    """Union of pair-closed, pairwise disjoint schema components."""

    closed: bool = True
    vanish_index = 0


def pair_antichain(schema: BlockSchema) -> PresentedAntichain:
    """The pairwise disjoint family of schema components, as pair-algebra elements."""
    return PresentedAntichain(
        "pair", lambda n: PairElement.finite(schema.component(n)),
        certificate="structural: components occupy disjoint block windows",
        schema=schema, label="block family")


class GreedySelection:
    """Indices kept by scanning the closures ``B_n`` in ascending order and
    dropping any that meets an already kept closure.

    ``B_n`` can only meet the closures of the components holding partners of
    ``B_n - A_n``, so each index conflicts with finitely many others and the
    stream never runs dry.
    """

    certificate = "greedy selection over a conflict graph of finite degree"

    def __init__(self, ac: PresentedAntichain):
        self._ac = ac
        self._closures: dict[int, frozenset[int]] = {}
        self.selected: list[int] = []
        self.dropped: list[int] = []
        self._position: dict[int, int] = {}
        self._next = ac.start

    def closure(self, n: int) -> frozenset[int]:
        if n not in self._closures:
            self._closures[n] = pair_closure(self._ac[n]).members()
        return self._closures[n]

    def _advance(self, bound: int):
        while self._next < bound:
            n = self._next
            b = self.closure(n)
            low = min(b)
            conflict = False
            for j in reversed(self.selected):
                bj = self.closure(j)
                if max(bj) < low:
                    break
                if not b.isdisjoint(bj):
                    conflict = True
                    break
            if conflict:
                self.dropped.append(n)
            else:
                self._position[n] = len(self.selected)
                self.selected.append(n)
            self._next += 1

    def __contains__(self, n: int) -> bool:
        self._advance(n + 1)
        return n in self._position

    def members_below(self, bound: int) -> list[int]:
        self._advance(bound)
        return [n for n in self.selected if n < bound]

    def position(self, n: int) -> int | None:
        self._advance(n + 1)
        return self._position.get(n)

    def positions(self, parity: int) -> PositionSubset:
        return PositionSubset(self, parity)


@dataclass(frozen=True, eq=False)
class PositionSubset:
    """Selected indices at even (``parity=0``) or odd positions of the selection."""

    stream: GreedySelection
    parity: int

    @property
    def certificate(self) -> str:
        return f"every other element of an endless stream ({self.stream.certificate})"

    def __contains__(self, n: int) -> bool:
        pos = self.stream.position(n)
        return pos is not None and pos % 2 == self.parity

    def members_below(self, bound: int) -> list[int]:
        return self.stream.members_below(bound)[self.parity::2]


def wssp_witness(ac: PresentedAntichain) -> SeparationWitness:
    """Separation witness for a block-schema antichain of pair-algebra elements.

    The closures of a conflict-free subfamily are disjoint; ``A`` is the union
    of those at even positions, which contains them and misses the odd ones.
    """
    if ac.schema is None:
        raise SchemaRequiredError("wssp_witness needs a block-schema family")
    if ac.carrier != "pair":
        raise ValueError(f"expected a pair-algebra antichain, got {ac.carrier!r}")
    selection = GreedySelection(ac)
    evens = selection.positions(0)
    union = LazyPairUnion(ac.schema, evens)
    return SeparationWitness(union, evens, selection.positions(1))


def random_pair_element(rng: random.Random, max_prefix_pairs: int = 6,
                        max_pair_period: int = 4) -> PairElement:
    """Random member of the algebra: arbitrary bits up to ``2K``, pair-doubled tail."""
    k = rng.randint(0, max_prefix_pairs)
    prefix = "".join(rng.choice("01") for _ in range(2 * k))
    tail = "".join(2 * rng.choice("01") for _ in range(rng.randint(1, max_pair_period)))
    return PairElement.of(EPSet.from_bits(prefix, tail))
