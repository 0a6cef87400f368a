"""Reference implementations used only by the tests.

They share no code with the package beyond the plain data classes they read,
and favour obviousness over speed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from stoneforge import terms


def eval_term(t, a) -> int:
    if isinstance(t, terms.Zero):
        return 0
    if isinstance(t, terms.One):
        return 1
    if isinstance(t, terms.Var):
        return a[t.id]
    if isinstance(t, terms.Not):
        return 1 - eval_term(t.arg, a)
    left, right = eval_term(t.left, a), eval_term(t.right, a)
    return left & right if isinstance(t, terms.Meet) else left | right


def all_assignments(gens):
    gens = sorted(gens)
    for bits in itertools.product((0, 1), repeat=len(gens)):
        yield dict(zip(gens, bits))


def truth_table(t, gens) -> tuple[int, ...]:
    return tuple(eval_term(t, a) for a in all_assignments(gens))


def eval_dnf(d, a) -> int:
    return int(any(all(a[u] for u in c.pos) and not any(a[v] for v in c.neg)
                   for c in d.conjuncts))


def antichain(nodes) -> bool:
    nodes = list(nodes)
    return not any(s != t and t.startswith(s) for s in nodes for t in nodes)


def antichain_points(gens):
    """Every antichain subset of ``gens``."""
    gens = sorted(set(gens))
    for r in range(len(gens) + 1):
        for combo in itertools.combinations(gens, r):
            if antichain(combo):
                yield frozenset(combo)


def point_satisfies(w, c) -> bool:
    return c.pos <= w and not (c.neg & w)


def zero_mod_prefix_kernel(d, gens=None) -> bool:
    """No antichain of the appearing nodes satisfies any conjunct."""
    gens = d.generators() if gens is None else gens
    return not any(point_satisfies(w, c) for w in antichain_points(gens) for c in d.conjuncts)


def unrolled(s, length: int) -> list[bool]:
    bits = s.prefix + s.pattern * (length // max(s.period, 1) + 1)
    return [b == "1" for b in bits[:length]]


def naive_measure(atoms, member) -> Fraction:
    total = Fraction(0)
    for i, w in atoms:
        if member(i):
            total = total + w
    return total
