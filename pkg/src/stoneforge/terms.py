"""Boolean terms over named generators and their disjunctive normal form.

Terms are immutable trees. :func:`to_dnf` produces a subsumption-pruned set of
elementary conjunctions; the empty DNF is the zero element. Semantics are
those of the free Boolean algebra, i.e. truth tables over the generators.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Mapping


class MissingAssignmentError(KeyError):
    """An assignment did not give a value to some generator of the term."""


class Term:
    """Base class of the term tree. Use the operators ``&``, ``|`` and ``~``."""

    __slots__ = ()

    def __and__(self, other: Term) -> Term:
        return Meet(self, other)

    def __or__(self, other: Term) -> Term:
        return Join(self, other)

    def __invert__(self) -> Term:
        return Not(self)


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


@dataclass(frozen=True)
class Var(Term):
    id: str


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Term):
    arg: Term


ZERO = Zero()
ONE = One()


def meet_all(terms: Iterable[Term]) -> Term:
    result: Term | None = None
    for t in terms:
        result = t if result is None else Meet(result, t)
    return ONE if result is None else result


def join_all(terms: Iterable[Term]) -> Term:
    result: Term | None = None
    for t in terms:
        result = t if result is None else Join(result, t)
    return ZERO if result is None else result


def generators(t: Term) -> frozenset[str]:
    out: set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.id)
        elif isinstance(node, (Meet, Join)):
            stack.extend((node.left, node.right))
        elif isinstance(node, Not):
            stack.append(node.arg)
    return frozenset(out)


@dataclass(frozen=True)
class Conjunction:
    """Meet of the generators in ``pos`` and the complements of those in ``neg``."""

    pos: frozenset[str] = frozenset()
    neg: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(self.pos))
        object.__setattr__(self, "neg", frozenset(self.neg))

    @property
    def contradictory(self) -> bool:
        return not self.pos.isdisjoint(self.neg)

    def subsumes(self, other: Conjunction) -> bool:
        """True when ``other <= self`` syntactically (fewer literals is larger)."""
        return self.pos <= other.pos and self.neg <= other.neg

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        try:
            ok = all(assignment[g] for g in self.pos) and not any(
                assignment[g] for g in self.neg)
        except KeyError as exc:
            raise MissingAssignmentError(exc.args[0]) from None
        return int(ok)

    def as_term(self) -> Term:
        lits = [Var(g) for g in sorted(self.pos)]
        lits += [Not(Var(g)) for g in sorted(self.neg)]
        return meet_all(lits)

    def sort_key(self):
        return (len(self.pos) + len(self.neg), sorted(self.pos), sorted(self.neg))

    def to_json(self) -> dict:
        return {"U": sorted(self.pos), "V": sorted(self.neg)}


def _prune(conjuncts: Iterable[Conjunction]) -> frozenset[Conjunction]:
    kept: list[Conjunction] = []
    for c in sorted(set(conjuncts), key=Conjunction.sort_key):
        if c.contradictory:
            continue
        if any(k.subsumes(c) for k in kept):
            continue
        kept.append(c)
    return frozenset(kept)


@dataclass(frozen=True)
class DNF:
    """Subsumption-pruned disjunction of elementary conjunctions."""

    conjuncts: frozenset[Conjunction] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "conjuncts", _prune(self.conjuncts))

    @classmethod
    def of(cls, *pairs) -> DNF:
        """Build from ``(pos, neg)`` pairs, e.g. ``DNF.of(({"a"}, {"b"}))``."""
        return cls(frozenset(Conjunction(frozenset(p), frozenset(n)) for p, n in pairs))

    def __iter__(self):
        return iter(sorted(self.conjuncts, key=Conjunction.sort_key))

    def __len__(self):
        return len(self.conjuncts)

    @property
    def is_empty(self) -> bool:
        return not self.conjuncts

    def generators(self) -> frozenset[str]:
        out: set[str] = set()
        for c in self.conjuncts:
            out |= c.pos | c.neg
        return frozenset(out)

    def evaluate(self, assignment: Mapping[str, int]) -> int:
        return int(any(c.evaluate(assignment) for c in self.conjuncts))

    def as_term(self) -> Term:
        return join_all(c.as_term() for c in self)

    def meet(self, other: DNF) -> DNF:
        return DNF(frozenset(
            Conjunction(a.pos | b.pos, a.neg | b.neg)
            for a in self.conjuncts for b in other.conjuncts))

    def join(self, other: DNF) -> DNF:
        return DNF(self.conjuncts | other.conjuncts)

    def to_json(self) -> list:
        return [c.to_json() for c in sorted(self.conjuncts, key=_serial_key)]


def _serial_key(c: Conjunction):
    return (sorted(c.pos), sorted(c.neg))


DNF_ZERO = DNF()
DNF_ONE = DNF(frozenset({Conjunction()}))


def _literal(g: str, positive: bool) -> DNF:
    c = Conjunction(frozenset({g}), frozenset()) if positive else Conjunction(
        frozenset(), frozenset({g}))
    return DNF(frozenset({c}))


def _dnf(t: Term, negated: bool) -> DNF:
    if isinstance(t, Zero):
        return DNF_ONE if negated else DNF_ZERO
    if isinstance(t, One):
        return DNF_ZERO if negated else DNF_ONE
    if isinstance(t, Var):
        return _literal(t.id, not negated)
    if isinstance(t, Not):
        return _dnf(t.arg, not negated)
    if isinstance(t, Meet):
        left, right = _dnf(t.left, negated), _dnf(t.right, negated)
        return left.join(right) if negated else left.meet(right)
    if isinstance(t, Join):
        left, right = _dnf(t.left, negated), _dnf(t.right, negated)
        return left.meet(right) if negated else left.join(right)
    raise TypeError(f"not a term: {t!r}")


def to_dnf(t: Term) -> DNF:
    """Normalise ``t`` to a subsumption-pruned DNF with the same truth table."""
    return _dnf(t, False)


def evaluate(t: Term, assignment: Mapping[str, int]) -> int:
    """Value of ``t`` in {0, 1} under a total assignment of its generators."""
    if isinstance(t, Zero):
        return 0
    if isinstance(t, One):
        return 1
    if isinstance(t, Var):
        try:
            return 1 if assignment[t.id] else 0
        except KeyError:
            raise MissingAssignmentError(t.id) from None
    if isinstance(t, Not):
        return 1 - evaluate(t.arg, assignment)
    if isinstance(t, Meet):
        return min(evaluate(t.left, assignment), evaluate(t.right, assignment))
    if isinstance(t, Join):
        return max(evaluate(t.left, assignment), evaluate(t.right, assignment))
    raise TypeError(f"not a term: {t!r}")


def assignments(gens: Iterable[str]):
    """Every 0/1 assignment of ``gens``, in lexicographic order of ids."""
    names = sorted(gens)
    for values in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, values))


def is_zero_free(t: Term) -> bool:
    """True iff ``t`` is the zero element of the free algebra."""
    return to_dnf(t).is_empty


def is_antichain_free(terms: list[Term]) -> bool:
    """True iff the terms are pairwise disjoint in the free algebra."""
    dnfs = [to_dnf(t) for t in terms]
    return all(a.meet(b).is_empty for a, b in itertools.combinations(dnfs, 2))


# JSON: {"op": "zero"|"one"|"var"|"meet"|"join"|"not", "id": ..., "args": [...]}

def term_from_json(obj) -> Term:
    if not isinstance(obj, dict) or "op" not in obj:
        raise ValueError(f"malformed term: {obj!r}")
    op = obj["op"]
    args = obj.get("args", [])
    if op == "zero":
        return ZERO
    if op == "one":
        return ONE
    if op == "var":
        if not isinstance(obj.get("id"), str):
            raise ValueError("var term needs a string id")
        return Var(obj["id"])
    if op == "not":
        if len(args) != 1:
            raise ValueError("not takes exactly one argument")
        return Not(term_from_json(args[0]))
    if op in ("meet", "join"):
        if not args:
            raise ValueError(f"{op} needs at least one argument")
        parts = [term_from_json(a) for a in args]
        return meet_all(parts) if op == "meet" else join_all(parts)
    raise ValueError(f"unknown term op {op!r}")


def term_to_json(t: Term) -> dict:
    if isinstance(t, Zero):
        return {"op": "zero"}
    if isinstance(t, One):
        return {"op": "one"}
    if isinstance(t, Var):
        return {"op": "var", "id": t.id}
    if isinstance(t, Not):
        return {"op": "not", "args": [term_to_json(t.arg)]}
    if isinstance(t, Meet):
        return {"op": "meet", "args": [term_to_json(t.left), term_to_json(t.right)]}
    if isinstance(t, Join):
        return {"op": "join", "args": [term_to_json(t.left), term_to_json(t.right)]}
    raise TypeError(f"not a term: {t!r}")


def dnf_from_json(obj) -> DNF:
    if not isinstance(obj, list):
        raise ValueError("DNF must be a list of {U, V} objects")
    pairs = []
    for item in obj:
        if not isinstance(item, dict):
            raise ValueError(f"malformed conjunct: {item!r}")
        pos, neg = item.get("U", []), item.get("V", [])
        if not all(isinstance(g, str) for g in [*pos, *neg]):
            raise ValueError("generator ids must be strings")
        pairs.append((pos, neg))
    return DNF.of(*pairs)


def dumps(obj) -> str:
    """Canonical JSON text for terms and DNFs."""
    if isinstance(obj, DNF):
        obj = obj.to_json()
    elif isinstance(obj, Term):
        obj = term_to_json(obj)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
