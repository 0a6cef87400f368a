"""Separation witnesses and the independent family built from tree branches.

Three carriers are supported:

``tree``
    DNFs over tree nodes modulo the prefix kernel, plus :class:`BranchJoin`,
    the join of the nodes ``x|k`` over a set of depths ``k``. Such joins are
    realised in the algebra of all sets of finite antichains, where ``A_s`` is
    the set of antichains containing ``s``.
``powerset``
    Sets of naturals: finite sets, :class:`~stoneforge.epsets.EPSet`, lazy
    unions.
``pair``
    Elements of the pair algebra and lazy unions of pair-closed components.

Order and disjointness are decided exactly in every carrier; witness checks
evaluate them for the certified index sets below a horizon.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

from .epsets import EPSet
from .families import (LazyUnion, PresentedAntichain, Progression,
                       SeparationWitness, SSPWitness, UnionElement,
                       as_index_set, index_epset)
from .pairs import LazyPairUnion, PairElement, in_pair_algebra
from .terms import DNF, Conjunction, Meet, Not, to_dnf
from .tree import (AntichainPoint, brute_force_zero_mod_kernel, conjunct_nonzero,
                   is_antichain, is_zero_mod_kernel)


class CarrierMismatchError(TypeError):
    pass


class UnsupportedCarrierError(TypeError):
    pass


class IndistinguishableBranchError(ValueError):
    pass


def carrier_of(x) -> str:
    if isinstance(x, (DNF, BranchJoin)):
        return "tree"
    if isinstance(x, (PairElement, LazyPairUnion)):
        return "pair"
    if isinstance(x, (frozenset, set, EPSet, LazyUnion, UnionElement)):
        return "powerset"
    raise CarrierMismatchError(f"no carrier for {type(x).__name__}")


# -- branches ---------------------------------------------------------------

@dataclass(frozen=True)
class BranchSelection:
    """An eventually periodic branch ``prefix + period + period + ...`` and the
    depths whose prefixes it joins."""

    prefix: str = ""
    period: str = "0"
    selected: Progression = field(default_factory=lambda: Progression(2, 2))

    def __post_init__(self):
        if self.prefix.strip("01") or not self.period or self.period.strip("01"):
            raise ValueError("branch needs 0/1 prefix and a nonempty 0/1 period")
        if self.selected.step < 2:
            raise ValueError("selected depths must leave infinitely many depths out")

    def bit(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def restrict(self, m: int) -> str:
        """The node ``x|m``."""
        return "".join(self.bit(i) for i in range(m))

    def on_branch(self, s: str) -> bool:
        return self.restrict(len(s)) == s

    def as_epset(self) -> EPSet:
        """Positions of the 1 bits; equal branches give equal sets."""
        return EPSet.from_bits(self.prefix, self.period)

    def to_json(self) -> dict:
        return {"prefix": self.prefix, "period": self.period,
                "selected": self.selected.to_json()}

    @classmethod
    def from_json(cls, obj) -> BranchSelection:
        if not isinstance(obj, dict):
            raise ValueError(f"malformed branch: {obj!r}")
        sel = obj.get("selected", {"start": 2, "step": 2})
        return cls(str(obj.get("prefix", "")), str(obj.get("period", "")),
                   Progression(int(sel["start"]), int(sel["step"])))


@dataclass(frozen=True)
class BranchJoin:
    """Join of ``A_{x|k}`` over the selected depths ``k``.

    A point (finite antichain) belongs to it iff it contains some ``x|k`` with
    ``k`` selected.
    """

    branch: BranchSelection

    def selects(self, s: str) -> bool:
        return len(s) in self.branch.selected and self.branch.on_branch(s)

    def __contains__(self, point: AntichainPoint) -> bool:
        return any(self.selects(s) for s in point.nodes)


def construct_A_x(b: BranchSelection) -> BranchJoin:
    return BranchJoin(b)


def branch_antichain(b: BranchSelection, horizon: int) -> PresentedAntichain:
    """``A_{x|1}, ..., A_{x|horizon}``; comparable prefixes meet in the kernel."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return PresentedAntichain(
        "tree", lambda n: DNF.of(({b.restrict(n)}, ())), start=1, length=horizon,
        certificate="structural: distinct prefixes of one branch are comparable, "
                    "so their meets lie in the kernel",
        label=f"branch {b.prefix}({b.period})")


# -- order and disjointness --------------------------------------------------

def _conjunct_below_join(c: Conjunction, j: BranchJoin) -> bool:
    # W = U is a point of c; it lies in the join iff U meets the selection
    return not conjunct_nonzero(c) or any(j.selects(u) for u in c.pos)


def _conjunct_disjoint_join(c: Conjunction, j: BranchJoin) -> bool:
    if not conjunct_nonzero(c):
        return True
    if any(j.selects(u) for u in c.pos):
        return False
    x = j.branch
    # past every literal's depth, x|k avoids V and is incomparable to U
    # unless some u in U is a prefix of x
    if not any(x.on_branch(u) for u in c.pos):
        return False
    depth = max((len(s) for s in c.pos | c.neg), default=0)
    for k in x.selected.members_below(depth + 1):
        node = x.restrict(k)
        if node not in c.neg and is_antichain(c.pos | {node}):
            return False
    return True


def _tree_leq(a, b) -> bool:
    if isinstance(a, DNF) and isinstance(b, DNF):
        return is_zero_mod_kernel(to_dnf(Meet(a.as_term(), Not(b.as_term()))))
    if isinstance(a, DNF) and isinstance(b, BranchJoin):
        return all(_conjunct_below_join(c, b) for c in a.conjuncts)
    raise UnsupportedCarrierError(
        f"cannot compare {type(a).__name__} <= {type(b).__name__} in the tree carrier")


def _tree_disjoint(a, b) -> bool:
    if isinstance(a, DNF) and isinstance(b, DNF):
        return is_zero_mod_kernel(a.meet(b))
    if isinstance(a, BranchJoin) and isinstance(b, DNF):
        a, b = b, a
    if isinstance(a, DNF) and isinstance(b, BranchJoin):
        return all(_conjunct_disjoint_join(c, b) for c in a.conjuncts)
    raise UnsupportedCarrierError(
        f"cannot decide disjointness of {type(a).__name__} and {type(b).__name__}")


def _finite_members(x) -> frozenset[int] | None:
    if isinstance(x, (frozenset, set)):
        return frozenset(x)
    if isinstance(x, EPSet) and not x.is_infinite:
        return frozenset(x.members_below(x.threshold))
    if isinstance(x, PairElement) and x.is_finite:
        return x.members()
    return None


def _ep_form(x) -> EPSet | None:
    if isinstance(x, EPSet):
        return x
    if isinstance(x, PairElement):
        return x.carrier
    if isinstance(x, (frozenset, set)):
        return EPSet.finite(x)
    if isinstance(x, LazyUnion):
        return x.to_epset()
    return None


def _set_leq(a, b) -> bool:
    fa = _finite_members(a)
    if fa is not None:
        return all(i in b for i in fa)
    ea, eb = _ep_form(a), _ep_form(b)
    if ea is None or eb is None:
        raise UnsupportedCarrierError("order undecidable for these presentations")
    return ea <= eb


def _set_disjoint(a, b) -> bool:
    fa = _finite_members(a)
    if fa is not None:
        return not any(i in b for i in fa)
    fb = _finite_members(b)
    if fb is not None:
        return not any(i in a for i in fb)
    ea, eb = _ep_form(a), _ep_form(b)
    if ea is None or eb is None:
        raise UnsupportedCarrierError("disjointness undecidable for these presentations")
    return ea.isdisjoint(eb)


def leq(carrier: str, a, b) -> bool:
    return _tree_leq(a, b) if carrier == "tree" else _set_leq(a, b)


def disjoint(carrier: str, a, b) -> bool:
    return _tree_disjoint(a, b) if carrier == "tree" else _set_disjoint(a, b)


def verify_antichain(ac: PresentedAntichain, horizon: int) -> bool:
    """Pairwise disjointness of the materialised elements."""
    items = ac.materialize(horizon)
    return all(disjoint(ac.carrier, a, b) for a, b in itertools.combinations(items, 2))


# -- witness checks ----------------------------------------------------------

def _require_carrier(ac: PresentedAntichain, element):
    found = carrier_of(element)
    if found != ac.carrier:
        raise CarrierMismatchError(f"antichain lives in {ac.carrier!r}, element in {found!r}")


def _member(ac: PresentedAntichain, n: int):
    try:
        return ac[n]
    except IndexError:
        return None


def check_wssp_witness(ac: PresentedAntichain, w: SeparationWitness, horizon: int) -> bool:
    """``A_n <= A`` on ``M1`` and ``A_n & A = 0`` on ``M0``, for indices below horizon."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    _require_carrier(ac, w.A)
    below, apart = w.M1.members_below(horizon), w.M0.members_below(horizon)
    if not set(below).isdisjoint(apart):
        return False
    for n in below:
        a = _member(ac, n)
        if a is None or not leq(ac.carrier, a, w.A):
            return False
    for n in apart:
        a = _member(ac, n)
        if a is None or not disjoint(ac.carrier, a, w.A):
            return False
    return True


def check_ssp_witness(ac: PresentedAntichain, w: SSPWitness, horizon: int) -> bool:
    """``A_{2n} <= A`` and ``A_{2n+1} & A = 0`` for every certified ``n`` with
    ``2n + 1`` below horizon."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    _require_carrier(ac, w.A)
    for n in w.M.members_below((horizon + 1) // 2):
        even, odd = _member(ac, 2 * n), _member(ac, 2 * n + 1)
        if even is None or odd is None:
            return False
        if not (leq(ac.carrier, even, w.A) and disjoint(ac.carrier, odd, w.A)):
            return False
    return True


def check_scp_witness(ac: PresentedAntichain, M, sup_candidate, horizon: int) -> bool:
    """``sup_candidate`` bounds ``{A_n : n in M}`` below horizon and equals the
    canonical lazy union of that subfamily."""
    if ac.carrier == "tree":
        raise UnsupportedCarrierError("finite DNFs cannot represent infinite joins")
    if ac.schema is None:
        raise UnsupportedCarrierError("joins are representable only for block-schema families")
    _require_carrier(ac, sup_candidate)
    M = as_index_set(M)
    for n in M.members_below(horizon):
        a = _member(ac, n)
        if a is None or not leq(ac.carrier, a, sup_candidate):
            return False
    canonical = LazyUnion(ac.schema, M)
    target, offered = canonical.to_epset(), _ep_form(sup_candidate)
    if target is None or offered is None:
        return (isinstance(sup_candidate, LazyUnion) and not sup_candidate.closed
                and sup_candidate.schema == ac.schema and sup_candidate.selection == M)
    if ac.carrier == "pair" and not in_pair_algebra(target)[0]:
        return False
    return offered == target


def ssp_branch_witness(b: BranchSelection) -> SSPWitness:
    """The join of the even-indexed members of the branch antichain."""
    even = BranchSelection(b.prefix, b.period, Progression(2, 2))
    return SSPWitness(BranchJoin(even), Progression(1, 1))


def branch_wssp_witness(b: BranchSelection) -> SeparationWitness:
    """``A_x`` with the selected depths above it and the rest disjoint from it."""
    sel = b.selected
    outside = EPSet.progression(1, 1) - sel.to_epset()
    return SeparationWitness(BranchJoin(b), sel, outside)


# -- independence ------------------------------------------------------------

@dataclass(frozen=True)
class IndependenceResult:
    witness: AntichainPoint | None
    depths: tuple[int, ...]
    separation_depth: int
    checks: dict[str, bool]

    @property
    def verified(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "witness": None if self.witness is None else self.witness.to_json(),
            "depths": list(self.depths),
            "separation_depth": self.separation_depth,
            "checks": dict(sorted(self.checks.items())),
            "verified": self.verified,
        }


def separation_depth(branches: Sequence[BranchSelection]) -> int:
    """Least ``m`` such that the ``x_i|m`` are pairwise distinct."""
    sets = [b.as_epset() for b in branches]
    m = 0
    for i, j in itertools.combinations(range(len(sets)), 2):
        first = (sets[i] ^ sets[j]).first()
        if first is None:
            raise IndistinguishableBranchError(f"branches {i} and {j} are equal")
        m = max(m, first + 1)
    return m


def independence_meet(branches: Sequence[BranchSelection], F, G=None) -> IndependenceResult:
    """Point and depths exhibiting ``meet_{i in F} A_{x_i} & meet_{i in G} ~A_{x_i} != 0``.

    Indices are 0-based positions in ``branches``; ``G`` defaults to the
    complement of ``F``.
    """
    n = len(branches)
    F = frozenset(F)
    G = frozenset(range(n)) - F if G is None else frozenset(G)
    if F & G or F | G != frozenset(range(n)):
        raise ValueError("F and G must partition the branch indices")
    m = separation_depth(branches)
    depths = []
    for i, b in enumerate(branches):
        floor = max(m, b.selected.start)
        depths.append(b.selected.next_at_or_after(floor) if i in F
                      else b.selected.next_outside(floor))
    nodes = [b.restrict(d) for b, d in zip(branches, depths)]
    joins = [BranchJoin(b) for b in branches]

    checks = {"antichain": len(set(nodes)) == n and is_antichain(nodes)}
    point = AntichainPoint(frozenset(nodes)) if checks["antichain"] else None
    if point is None:
        checks.update(in_F=False, out_G=False, nonzero=False, oracle=False, meet_below=False)
        return IndependenceResult(None, tuple(depths), m, checks)
    checks["in_F"] = all(point in joins[i] for i in F)
    checks["out_G"] = all(point not in joins[i] for i in G)
    meet = Conjunction(frozenset(nodes))
    checks["nonzero"] = conjunct_nonzero(meet)
    checks["oracle"] = not brute_force_zero_mod_kernel(DNF(frozenset({meet})), nodes)
    dnf = DNF(frozenset({meet}))
    checks["meet_below"] = (all(_tree_leq(dnf, joins[i]) for i in F)
                            and all(_tree_disjoint(dnf, joins[i]) for i in G))
    return IndependenceResult(point, tuple(depths), m, checks)


def all_splits(n: int):
    """Every ``F`` subset of ``range(n)``, in binary counting order."""
    for mask in range(1 << n):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def index_set_json(ix) -> Any:
    ep = index_epset(ix)
    if isinstance(ix, Progression):
        return ix.to_json()
    return ep.to_json() if ep is not None else ix.certificate
