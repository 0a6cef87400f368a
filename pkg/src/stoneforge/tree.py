"""The free algebra on tree-indexed generators modulo the prefix kernel.

Generators are finite binary strings (``""`` is the root). The kernel ideal is
generated by every meet ``A_s & A_t`` with ``s`` a proper prefix of ``t``.
A homomorphism to {0, 1} kills the kernel exactly when its set of true
generators is prefix-incomparable, so finite antichains of nodes serve as
concrete points: ``A_s`` is the set of points containing ``s``.

The decision procedure (:func:`is_zero_mod_kernel`) and the brute-force
oracle (:func:`brute_force_zero_mod_kernel`) share only the comparability
table; the oracle scans every subset of the generators.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import _kernels
from .terms import DNF, Conjunction

DEFAULT_MAX_BRUTE = 15


class BruteForceSizeError(ValueError):
    """Too many generators for exhaustive enumeration."""


class KernelPreconditionError(ValueError):
    """A witness was requested for a conjunction that is zero mod the kernel."""


def check_node(s: str) -> str:
    if not isinstance(s, str) or s.strip("01"):
        raise ValueError(f"tree node must be a 0/1 string, got {s!r}")
    return s


def is_proper_prefix(s: str, t: str) -> bool:
    return len(s) < len(t) and t.startswith(s)


def comparable(s: str, t: str) -> bool:
    """Distinct nodes on a common branch."""
    return s != t and (t.startswith(s) or s.startswith(t))


def is_antichain(nodes: Iterable[str]) -> bool:
    ordered = sorted(set(nodes))
    # after lexicographic sorting a prefix precedes its extensions, and any
    # node lying between them also extends the prefix
    return not any(t.startswith(s) for s, t in zip(ordered, ordered[1:]))


def all_nodes(max_depth: int) -> list[str]:
    """Every node of depth at most ``max_depth``, shortest first."""
    return ["".join(bits) for d in range(max_depth + 1)
            for bits in itertools.product("01", repeat=d)]


@dataclass(frozen=True)
class AntichainPoint:
    """A finite set of pairwise prefix-incomparable nodes."""

    nodes: frozenset[str] = frozenset()

    def __post_init__(self):
        nodes = frozenset(check_node(s) for s in self.nodes)
        if not is_antichain(nodes):
            raise ValueError(f"nodes are not prefix-incomparable: {sorted(nodes)}")
        object.__setattr__(self, "nodes", nodes)

    def __contains__(self, s: str) -> bool:
        return s in self.nodes

    def satisfies(self, c: Conjunction) -> bool:
        return c.pos <= self.nodes and self.nodes.isdisjoint(c.neg)

    def to_json(self) -> list[str]:
        return sorted(self.nodes)


def point_membership(s: str, p: AntichainPoint) -> bool:
    """Is the point ``p`` in ``A_s``?"""
    return s in p.nodes


def kernel_generator(s: str, t: str) -> DNF:
    """The kernel element ``A_s & A_t``."""
    return DNF.of(({s, t}, ()))


class NodeIndex:
    """Bit positions and prefix-comparability masks for a set of nodes."""

    def __init__(self, nodes: Iterable[str]):
        self.nodes = sorted({check_node(s) for s in nodes}, key=lambda s: (len(s), s))
        self.position = {s: i for i, s in enumerate(self.nodes)}
        self.comp = [
            sum(1 << j for j, t in enumerate(self.nodes) if comparable(s, t))
            for s in self.nodes
        ]

    def __len__(self):
        return len(self.nodes)

    def mask(self, nodes: Iterable[str]) -> int:
        return sum(1 << self.position[s] for s in set(nodes))

    def unmask(self, mask: int) -> frozenset[str]:
        return frozenset(s for i, s in enumerate(self.nodes) if mask >> i & 1)


def conjunct_nonzero(c: Conjunction) -> bool:
    """A conjunct survives the kernel iff its positive nodes form an antichain
    and it is not contradictory."""
    if c.contradictory:
        return False
    index = NodeIndex(c.pos)
    return _kernels.conjunct_nonzero(index.comp, index.mask(c.pos), 0)


def is_zero_mod_kernel(d: DNF) -> bool:
    """Decide whether ``d`` lies in the kernel ideal."""
    for c in d.conjuncts:
        for s in c.pos | c.neg:
            check_node(s)
        if conjunct_nonzero(c):
            return False
    return True


def witness_point(c: Conjunction) -> AntichainPoint:
    """A point of ``c`` when ``c`` is nonzero modulo the kernel."""
    if not conjunct_nonzero(c):
        raise KernelPreconditionError(
            f"conjunction U={sorted(c.pos)} V={sorted(c.neg)} is zero mod kernel")
    return AntichainPoint(c.pos)


def nonzero_witness(d: DNF) -> AntichainPoint | None:
    for c in d:
        if conjunct_nonzero(c):
            return witness_point(c)
    return None


def star_check(s: str, t: str) -> bool:
    """Is ``A_s & A_t`` zero modulo the kernel?"""
    return is_zero_mod_kernel(kernel_generator(check_node(s), check_node(t)))


def max_brute() -> int:
    return int(os.environ.get("STONEFORGE_MAX_BRUTE", DEFAULT_MAX_BRUTE))


def brute_force_model(d: DNF, gens: Iterable[str], limit: int | None = None
                      ) -> AntichainPoint | None:
    """The first antichain ``W`` of ``gens`` satisfying a conjunct of ``d``."""
    index = NodeIndex(gens)
    bound = max_brute() if limit is None else limit
    if len(index) > bound:
        raise BruteForceSizeError(
            f"{len(index)} generators exceed the brute-force bound {bound}")
    missing = d.generators() - set(index.nodes)
    if missing:
        raise ValueError(f"gens must cover the DNF; missing {sorted(missing)}")
    conj = sorted(d.conjuncts, key=Conjunction.sort_key)
    w = _kernels.first_model(index.comp, len(index),
                             [index.mask(c.pos) for c in conj],
                             [index.mask(c.neg) for c in conj])
    return None if w < 0 else AntichainPoint(index.unmask(w))


def brute_force_zero_mod_kernel(d: DNF, gens: Iterable[str] | None = None,
                                limit: int | None = None) -> bool:
    """Exhaustive oracle for :func:`is_zero_mod_kernel`."""
    if gens is None:
        gens = d.generators()
    return brute_force_model(d, gens, limit) is None


def ternary_conjunct(t: int, nodes: Sequence[str]) -> Conjunction:
    """Decode a base-3 conjunct index (digit 1 positive, 2 negative)."""
    pos, neg = set(), set()
    for s in nodes:
        t, digit = divmod(t, 3)
        if digit == 1:
            pos.add(s)
        elif digit == 2:
            neg.add(s)
    return Conjunction(frozenset(pos), frozenset(neg))


@dataclass(frozen=True)
class SweepResult:
    nodes: int
    conjuncts: int
    nonzero: int
    mismatches: tuple[Conjunction, ...]


def sweep_single_conjuncts(max_depth: int) -> SweepResult:
    """Decision procedure vs oracle on every consistent conjunct over the
    nodes of depth at most ``max_depth``."""
    index = NodeIndex(all_nodes(max_depth))
    k = len(index)
    decided = _kernels.decide_all_conjuncts(index.comp, k)
    oracle = _kernels.oracle_all_conjuncts(index.comp, k)
    mismatches = ()
    if decided != oracle:
        bad = [t for t, (a, b) in enumerate(zip(decided, oracle)) if a != b]
        mismatches = tuple(ternary_conjunct(t, index.nodes) for t in bad[:20])
    return SweepResult(nodes=k, conjuncts=len(decided),
                       nonzero=decided.count(1), mismatches=mismatches)
