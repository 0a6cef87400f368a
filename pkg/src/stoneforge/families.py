"""Finitely described infinite objects: index sets, block schemas, lazy unions,
presented antichains and separation witnesses.

Infinite index sets always carry a structural reason for being infinite
(an arithmetic progression, an infinite eventually periodic set, or a
selection stream that cannot terminate). Nothing here decides infiniteness by
sampling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Protocol, Sequence

from .epsets import EPSet


class IndexSet(Protocol):
    certificate: str

    def __contains__(self, n: int) -> bool: ...

    def members_below(self, bound: int) -> list[int]: ...


@dataclass(frozen=True)
class Progression:
    """``{start, start + step, ...}``; infinite by construction."""

    start: int
    step: int = 1

    def __post_init__(self):
        if self.start < 0 or self.step < 1:
            raise ValueError("progression needs start >= 0 and step >= 1")

    @property
    def certificate(self) -> str:
        return f"arithmetic progression {self.start} + {self.step}k"

    def __contains__(self, n: int) -> bool:
        return n >= self.start and (n - self.start) % self.step == 0

    def members_below(self, bound: int) -> list[int]:
        return list(range(self.start, max(bound, self.start), self.step))

    def next_at_or_after(self, n: int) -> int:
        if n <= self.start:
            return self.start
        return self.start + -(-(n - self.start) // self.step) * self.step

    def next_outside(self, n: int) -> int:
        """Least integer ``>= n`` not in the progression."""
        if self.step == 1 and n >= self.start:
            raise ValueError("a step-1 progression has no members outside it past its start")
        while n in self:
            n += 1
        return n

    def doubled(self, offset: int = 0) -> Progression:
        return Progression(2 * self.start + offset, 2 * self.step)

    def to_epset(self) -> EPSet:
        return EPSet.progression(self.start, self.step)

    def to_json(self) -> dict:
        return {"start": self.start, "step": self.step}


@dataclass(frozen=True)
class EPIndex:
    """An infinite eventually periodic index set."""

    members: EPSet

    def __post_init__(self):
        if not self.members.is_infinite:
            raise ValueError("index set must be infinite")

    @property
    def certificate(self) -> str:
        return "eventually periodic with a nonzero periodic part"

    def __contains__(self, n: int) -> bool:
        return n in self.members

    def members_below(self, bound: int) -> list[int]:
        return self.members.members_below(bound)

    def to_epset(self) -> EPSet:
        return self.members


def as_index_set(obj) -> IndexSet:
    if isinstance(obj, EPSet):
        return EPIndex(obj)
    if hasattr(obj, "members_below") and hasattr(obj, "certificate"):
        return obj
    raise TypeError(f"not an index set: {obj!r}")


def index_epset(ix) -> EPSet | None:
    """Eventually periodic form of an index set, when it has one."""
    if isinstance(ix, EPSet):
        return ix
    to_epset = getattr(ix, "to_epset", None)
    return to_epset() if to_epset is not None else None


@dataclass(frozen=True)
class Block:
    """Window ``n`` is ``[start + n*stride, start + n*stride + width)``."""

    start: int
    stride: int
    width: int

    def __post_init__(self):
        if self.start < 0 or self.width < 1 or self.stride < self.width:
            raise ValueError("block needs start >= 0 and 1 <= width <= stride")

    def low(self, n: int) -> int:
        return self.start + n * self.stride

    def window_of(self, x: int) -> int | None:
        """Index of the window containing ``x``, if any."""
        if x < self.start:
            return None
        n, off = divmod(x - self.start, self.stride)
        return n if off < self.width else None

    def to_json(self) -> dict:
        return {"start": self.start, "stride": self.stride, "width": self.width}


@dataclass(frozen=True)
class BlockSchema:
    """Component ``n`` is ``{low(n) + o : o in offsets}``.

    ``offsets`` is a fixed set, or a callable ``n -> offsets`` for families
    whose shape varies along the index.
    """

    block: Block
    offsets: Any = None

    def __post_init__(self):
        if self.offsets is None:
            object.__setattr__(self, "offsets", frozenset(range(self.block.width)))
        elif not callable(self.offsets):
            object.__setattr__(self, "offsets", frozenset(self.offsets))
            self._check(self.offsets)

    def _check(self, offs):
        if not offs or any(o < 0 or o >= self.block.width for o in offs):
            raise ValueError("offsets must be a nonempty subset of [0, width)")

    @property
    def fixed(self) -> bool:
        return not callable(self.offsets)

    def offsets_at(self, n: int) -> frozenset[int]:
        if self.fixed:
            return self.offsets
        offs = frozenset(self.offsets(n))
        self._check(offs)
        return offs

    def component(self, n: int) -> frozenset[int]:
        lo = self.block.low(n)
        return frozenset(lo + o for o in self.offsets_at(n))

    def owner(self, x: int) -> int | None:
        n = self.block.window_of(x)
        if n is not None and x - self.block.low(n) in self.offsets_at(n):
            return n
        return None

    def to_json(self) -> dict:
        if not self.fixed:
            raise ValueError("only fixed-offset schemas serialise")
        return {"block": self.block.to_json(), "pattern": sorted(self.offsets)}


def partner(x: int) -> int:
    """The other member of ``x``'s pair ``{2k, 2k + 1}``."""
    return x ^ 1


@dataclass(frozen=True)
class LazyUnion:
    """Union of the schema components whose index lies in ``selection``.

    With ``closed=True`` each component is replaced by its pair closure
    (the component plus the partner of every member).
    """

    schema: BlockSchema
    selection: Any
    closed: bool = False

    def component(self, n: int) -> frozenset[int]:
        base = self.schema.component(n)
        if self.closed:
            return base | frozenset(partner(x) for x in base)
        return base

    def owners(self, x: int) -> set[int]:
        candidates = {self.schema.owner(x)}
        if self.closed:
            candidates.add(self.schema.owner(partner(x)))
        return {n for n in candidates if n is not None}

    def __contains__(self, x: int) -> bool:
        return x >= 0 and any(n in self.selection for n in self.owners(x))

    def members_below(self, bound: int) -> list[int]:
        return [x for x in range(bound) if x in self]

    def to_epset(self) -> EPSet | None:
        """Eventually periodic form, when the selection is eventually periodic
        and the component shape is fixed."""
        sel = index_epset(self.selection)
        if sel is None or not self.schema.fixed:
            return None
        block = self.schema.block
        period = block.stride * sel.period
        if self.closed:
            # partner(x + period) == partner(x) + period needs an even period
            period *= 2
        threshold = block.low(sel.threshold) + block.stride
        bits = "".join("1" if x in self else "0" for x in range(threshold + period))
        return EPSet(threshold, period, bits[:threshold], bits[threshold:])

    def to_json(self) -> dict:
        sel = index_epset(self.selection)
        if sel is None:
            raise ValueError("only eventually periodic selections serialise")
        out = self.schema.to_json()
        out["selection"] = sel.to_json()
        if self.closed:
            out["closed"] = True
        return out

    @classmethod
    def from_json(cls, obj) -> LazyUnion:
        schema = schema_from_json(obj)
        sel = EPSet.from_json(obj["selection"])
        return cls(schema, EPIndex(sel) if sel.is_infinite else sel,
                   bool(obj.get("closed", False)))


def schema_from_json(obj) -> BlockSchema:
    try:
        b = obj["block"]
        block = Block(int(b["start"]), int(b["stride"]), int(b["width"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed block schema: {obj!r}") from exc
    pattern = obj.get("pattern")
    return BlockSchema(block, None if pattern is None else [int(o) for o in pattern])


@dataclass(frozen=True)
class UnionElement:
    """Finite union of set-like parts, evaluated lazily by membership."""

    parts: tuple

    def __contains__(self, x: int) -> bool:
        return any(x in p for p in self.parts)


@dataclass(frozen=True)
class PresentedAntichain:
    """An indexed family of pairwise disjoint elements, materialised on demand.

    ``carrier`` is ``"tree"``, ``"powerset"`` or ``"pair"``. ``length`` is set
    only for ad-hoc finite lists; schema-backed families carry ``schema``.
    """

    carrier: str
    element_at: Callable[[int], Any]
    start: int = 0
    certificate: str = "checked-at-horizon"
    schema: BlockSchema | None = None
    length: int | None = None
    label: str = ""

    def __getitem__(self, n: int):
        if n < self.start or (self.length is not None and n >= self.start + self.length):
            raise IndexError(f"index {n} outside the presented family")
        return self.element_at(n)

    def indices(self, horizon: int) -> range:
        stop = horizon if self.length is None else min(horizon, self.start + self.length)
        return range(self.start, max(stop, self.start))

    def materialize(self, horizon: int) -> list:
        return [self[n] for n in self.indices(horizon)]

    @classmethod
    def from_list(cls, carrier: str, items: Sequence, start: int = 0) -> PresentedAntichain:
        items = tuple(items)
        return cls(carrier, lambda n: items[n - start], start=start,
                   length=len(items), certificate="checked-at-horizon")


@dataclass(frozen=True)
class SeparationWitness:
    """An element ``A`` with index sets ``M1`` (members below ``A``) and
    ``M0`` (members disjoint from ``A``), both certified infinite."""

    A: Any
    M1: Any
    M0: Any

    def __post_init__(self):
        object.__setattr__(self, "M1", as_index_set(self.M1))
        object.__setattr__(self, "M0", as_index_set(self.M0))
        e1, e0 = index_epset(self.M1), index_epset(self.M0)
        if e1 is not None and e0 is not None and not e1.isdisjoint(e0):
            raise ValueError("M1 and M0 must be disjoint")


@dataclass(frozen=True)
class SSPWitness:
    """An element ``A`` and an infinite set ``M`` of ``n`` with
    ``A_{2n} <= A`` and ``A_{2n+1} & A = 0``."""

    A: Any
    M: Any

    def __post_init__(self):
        object.__setattr__(self, "M", as_index_set(self.M))

    def to_wssp(self) -> SeparationWitness:
        """The same element read as a weak witness on doubled indices."""
        return SeparationWitness(self.A, _Doubled(self.M, 0), _Doubled(self.M, 1))


@dataclass(frozen=True)
class _Doubled:
    base: Any
    offset: int

    @property
    def certificate(self) -> str:
        return f"image of ({self.base.certificate}) under n -> 2n + {self.offset}"

    def __contains__(self, n: int) -> bool:
        return n >= self.offset and (n - self.offset) % 2 == 0 and (n - self.offset) // 2 in self.base

    def members_below(self, bound: int) -> list[int]:
        half = (bound - self.offset + 1) // 2 + 1
        return [2 * m + self.offset for m in self.base.members_below(max(half, 0))
                if 2 * m + self.offset < bound]

    def to_epset(self) -> EPSet | None:
        base = index_epset(self.base)
        if base is None:
            return None
        threshold = 2 * base.threshold + self.offset
        period = 2 * base.period
        bits = "".join("1" if n in self else "0" for n in range(threshold + period))
        return EPSet(threshold, period, bits[:threshold], bits[threshold:])
