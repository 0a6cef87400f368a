"""Finite-support rational measures on sets of naturals.

Everything is exact (:class:`fractions.Fraction`); comparisons are strict
where the inequalities are strict, with no tolerances.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .families import PresentedAntichain, SeparationWitness, UnionElement
from .separation import carrier_of, disjoint, leq

log = logging.getLogger(__name__)


class HypothesisViolationError(ValueError):
    """Some ``|mu_k(A_k)|`` is not above epsilon."""


class EmptySelectionError(ValueError):
    """Thinning kept fewer than two indices."""


class VerificationFailure(AssertionError):
    """An inequality that the preconditions guarantee did not hold."""


class WitnessMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FASMeasure:
    """``sum_i w_i * delta_i`` over finitely many atoms ``i`` with nonzero ``w_i``."""

    atoms: tuple[tuple[int, Fraction], ...] = ()

    def __init__(self, atoms: Mapping[int, Fraction] | Sequence = ()):
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        merged: dict[int, Fraction] = {}
        for i, w in items:
            if i < 0:
                raise ValueError("atoms are naturals")
            merged[i] = merged.get(i, Fraction(0)) + Fraction(w)
        object.__setattr__(self, "atoms", tuple(sorted(
            (i, w) for i, w in merged.items() if w != 0)))

    @classmethod
    def dirac(cls, i: int, weight=1) -> FASMeasure:
        return cls({i: Fraction(weight)})

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.atoms)

    def weight(self, i: int) -> Fraction:
        return dict(self.atoms).get(i, Fraction(0))

    def __call__(self, a) -> Fraction:
        return measure_eval(self, a)

    @property
    def norm(self) -> Fraction:
        return sum((abs(w) for _, w in self.atoms), Fraction(0))

    @property
    def total_mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @property
    def is_nonnegative(self) -> bool:
        return all(w > 0 for _, w in self.atoms)

    def __add__(self, other: FASMeasure) -> FASMeasure:
        return FASMeasure([*self.atoms, *other.atoms])

    def __neg__(self) -> FASMeasure:
        return FASMeasure([(i, -w) for i, w in self.atoms])

    def __sub__(self, other: FASMeasure) -> FASMeasure:
        return self + (-other)

    def scale(self, c) -> FASMeasure:
        return FASMeasure([(i, Fraction(c) * w) for i, w in self.atoms])

    def to_json(self) -> dict:
        return {"atoms": [[i, w.numerator, w.denominator] for i, w in self.atoms]}

    @classmethod
    def from_json(cls, obj) -> FASMeasure:
        if not isinstance(obj, dict) or not isinstance(obj.get("atoms"), list):
            raise ValueError(f"malformed measure: {obj!r}")
        atoms = []
        for entry in obj["atoms"]:
            if not (isinstance(entry, list) and len(entry) == 3):
                raise ValueError(f"atom must be [index, numerator, denominator]: {entry!r}")
            i, p, q = (int(v) for v in entry)
            atoms.append((i, Fraction(p, q)))
        return cls(atoms)


ZERO_MEASURE = FASMeasure()


def measure_eval(mu: FASMeasure, a) -> Fraction:
    """Exact ``mu(A)`` for any element with decidable membership."""
    return sum((w for i, w in mu.atoms if i in a), Fraction(0))


@dataclass(frozen=True)
class MeasureFamily:
    """``n -> mu_n`` with an explicit bound on the variation norms."""

    measure_at: Callable[[int], FASMeasure]
    bound: Fraction
    length: int | None = None
    label: str = ""

    def __getitem__(self, n: int) -> FASMeasure:
        if n < 0 or (self.length is not None and n >= self.length):
            raise IndexError(f"family has no measure at {n}")
        mu = self.measure_at(n)
        if mu.norm > self.bound:
            raise ValueError(f"measure {n} exceeds the declared norm bound {self.bound}")
        return mu

    @classmethod
    def explicit(cls, measures: Sequence[FASMeasure], label: str = "explicit") -> MeasureFamily:
        measures = tuple(measures)
        bound = max((m.norm for m in measures), default=Fraction(0))
        return cls(lambda n: measures[n], bound, len(measures), label)

    def __add__(self, other: MeasureFamily) -> MeasureFamily:
        length = _min_length(self.length, other.length)
        return MeasureFamily(lambda n: self[n] + other[n], self.bound + other.bound,
                             length, f"({self.label}) + ({other.label})")


def _min_length(a, b):
    if a is None:
        return b
    return a if b is None else min(a, b)


def pair_difference_family() -> MeasureFamily:
    """``n -> delta_{2n} - delta_{2n+1}``."""
    return MeasureFamily(lambda n: FASMeasure({2 * n: 1, 2 * n + 1: -1}),
                         Fraction(2), label="pair differences")


def dirac_family(step: int = 2, offset: int = 0, weight=1) -> MeasureFamily:
    """``n -> weight * delta_{step*n + offset}``."""
    w = Fraction(weight)
    return MeasureFamily(lambda n: FASMeasure({step * n + offset: w}), abs(w),
                         label=f"{w} delta_{step}n+{offset}")


def zero_family() -> MeasureFamily:
    return MeasureFamily(lambda n: ZERO_MEASURE, Fraction(0), label="zero")


# -- thinning and alternation ------------------------------------------------

@dataclass
class Thinning:
    selected: list[int]
    epsilon: Fraction
    cross_sums: dict[int, Fraction] = field(default_factory=dict)

    @property
    def max_cross_sum(self) -> Fraction:
        return max(self.cross_sums.values(), default=Fraction(0))


def rosenthal_thin(fam: MeasureFamily, ac: PresentedAntichain, epsilon,
                   horizon: int) -> Thinning:
    """Greedy ascending subsequence with ``sum_{n != k} |mu_k(A_n)| < epsilon/3``
    for every kept ``k``; all sums are over the kept indices and exact."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    idx = list(ac.indices(horizon))
    elements = {n: ac[n] for n in idx}
    for k in idx:
        if abs(fam[k](elements[k])) <= eps:
            raise HypothesisViolationError(
                f"|mu_{k}(A_{k})| = {abs(fam[k](elements[k]))} is not above {eps}")
    third = eps / 3
    cross = {(k, n): abs(fam[k](elements[n])) for k in idx for n in idx if k != n}
    selected: list[int] = []
    sums: dict[int, Fraction] = {}
    for k in idx:
        own = sum((cross[k, n] for n in selected), Fraction(0))
        if own >= third:
            continue
        if any(sums[j] + cross[j, k] >= third for j in selected):
            continue
        for j in selected:
            sums[j] += cross[j, k]
        sums[k] = own
        selected.append(k)
    if len(selected) < 2:
        raise EmptySelectionError(f"thinning kept {len(selected)} index(es)")
    return Thinning(selected, eps, sums)


@dataclass
class AlternationReport:
    values: dict[int, Fraction]
    even_positions: list[int]
    odd_positions: list[int]
    lower: Fraction
    upper: Fraction

    @property
    def gap(self) -> Fraction:
        """``min |mu_k(A)|`` over even positions minus the max over odd ones."""
        low = min(abs(self.values[k]) for k in self.even_positions)
        high = max((abs(self.values[k]) for k in self.odd_positions), default=Fraction(0))
        return low - high

    def to_json(self) -> dict:
        return {
            "values": {str(k): str(v) for k, v in sorted(self.values.items())},
            "even_positions": self.even_positions,
            "odd_positions": self.odd_positions,
            "lower": str(self.lower),
            "upper": str(self.upper),
            "gap": str(self.gap),
        }


def alternation_witness(fam: MeasureFamily, ac: PresentedAntichain, epsilon,
                        selected) -> tuple[UnionElement, AlternationReport]:
    """Union of the kept elements at even positions, with ``|mu_k(A)|`` above
    ``2*epsilon/3`` at even positions and below ``epsilon/3`` at odd ones."""
    if isinstance(selected, Thinning):
        selected = selected.selected
    selected = list(selected)
    if len(selected) < 2:
        raise EmptySelectionError("alternation needs at least two kept indices")
    eps = Fraction(epsilon)
    evens, odds = selected[0::2], selected[1::2]
    union = UnionElement(tuple(ac[n] for n in evens))
    values = {k: fam[k](union) for k in selected}
    report = AlternationReport(values, evens, odds, 2 * eps / 3, eps / 3)
    bad = [k for k in evens if not abs(values[k]) > report.lower]
    bad += [k for k in odds if not abs(values[k]) < report.upper]
    if bad:
        raise VerificationFailure(f"alternation bounds fail at indices {bad}")
    return union, report


# -- positive decompositions -------------------------------------------------

@dataclass(frozen=True)
class PositiveDecomposition:
    """``mu_n = lam_n + nu_n`` with ``lam_n >= 0``, total mass ``eta`` and
    ``lam_n(B_n) > 3*eta/4``."""

    mu: MeasureFamily
    lam: MeasureFamily
    nu: MeasureFamily
    B: Callable[[int], object]
    eta: Fraction

    @classmethod
    def from_parts(cls, lam: MeasureFamily, nu: MeasureFamily,
                   B: Callable[[int], object], eta) -> PositiveDecomposition:
        return cls(lam + nu, lam, nu, B, Fraction(eta))


def decomposition_failure(d: PositiveDecomposition, horizon: int) -> tuple[int, str] | None:
    """First ``(index, clause)`` that fails below horizon, or None."""
    eta = Fraction(d.eta)
    if eta <= 0:
        return (0, "eta")
    for n in range(horizon):
        lam = d.lam[n]
        if d.mu[n] != lam + d.nu[n]:
            return (n, "sum")
        if not lam.is_nonnegative or lam.total_mass != eta:
            return (n, "mass")
        if not lam(d.B(n)) > 3 * eta / 4:
            return (n, "concentration")
    return None


def verify_positive_decomposition(d: PositiveDecomposition, horizon: int) -> bool:
    failure = decomposition_failure(d, horizon)
    if failure is not None:
        log.info("decomposition fails at index %d (%s)", *failure)
    return failure is None


@dataclass
class GrothendieckReport:
    above: dict[int, tuple[Fraction, Fraction]]
    below: dict[int, tuple[Fraction, Fraction]]
    stronger_bound: dict[int, bool]

    @property
    def passed(self) -> bool:
        return (all(v > b for v, b in self.above.values())
                and all(v < b for v, b in self.below.values()))

    def to_json(self) -> dict:
        def rows(table):
            return {str(n): {"value": str(v), "bound": str(b)} for n, (v, b) in sorted(table.items())}
        return {"M1": rows(self.above), "M0": rows(self.below),
                "stronger_bound_holds": all(self.stronger_bound.values()),
                "passed": self.passed}


def positive_grothendieck_report(d: PositiveDecomposition, w: SeparationWitness,
                                 horizon: int) -> GrothendieckReport:
    eta = Fraction(d.eta)
    A = w.A
    above, below, stronger = {}, {}, {}
    for n in w.M1.members_below(horizon):
        b = d.B(n)
        if not leq(carrier_of(A), b, A):
            raise WitnessMismatchError(f"B_{n} is not below the witness")
        nu_a = d.nu[n](A)
        value = d.mu[n](A)
        above[n] = (value, eta / 2 + nu_a)
        stronger[n] = value > 3 * eta / 4 + nu_a
        if stronger[n]:
            log.debug("index %d also clears 3*eta/4 + nu_n(A)", n)
    for n in w.M0.members_below(horizon):
        if not disjoint(carrier_of(A), d.B(n), A):
            raise WitnessMismatchError(f"B_{n} meets the witness")
        below[n] = (d.mu[n](A), eta / 4 + d.nu[n](A))
    return GrothendieckReport(above, below, stronger)


def positive_grothendieck_check(d: PositiveDecomposition, w: SeparationWitness,
                                horizon: int) -> bool:
    """``mu_n(A) > eta/2 + nu_n(A)`` on ``M1`` and ``< eta/4 + nu_n(A)`` on ``M0``."""
    return positive_grothendieck_report(d, w, horizon).passed
