import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import naive_measure
from stoneforge.campaigns import (base_decomposition, base_separation, perturbed_decomposition,
                                  powerset_family, random_measure_case, schema_family)
from stoneforge.epsets import EPSet
from stoneforge.families import Block, BlockSchema, Progression, SeparationWitness
from stoneforge.measures import (EmptySelectionError, FASMeasure, HypothesisViolationError,
                                 MeasureFamily, PositiveDecomposition, WitnessMismatchError,
                                 alternation_witness, decomposition_failure, dirac_family,
                                 measure_eval, pair_difference_family,
                                 positive_grothendieck_check, positive_grothendieck_report,
                                 rosenthal_thin, verify_positive_decomposition, zero_family)
from stoneforge.pairs import random_pair_element

HALF = Fraction(1, 2)

atoms = st.dictionaries(st.integers(0, 30),
                        st.fractions(min_value=-5, max_value=5, max_denominator=12), max_size=6)


def test_eval_examples():
    assert measure_eval(FASMeasure({0: 1, 1: -1}), {0}) == 1
    assert measure_eval(FASMeasure({4: 1, 5: -1}), set(range(10))) == 0


@given(atoms, st.sets(st.integers(0, 30)))
def test_eval_matches_naive_sum(a, s):
    mu = FASMeasure(a)
    assert mu(frozenset(s)) == naive_measure(mu.atoms, lambda i: i in s)
    assert mu(EPSet.finite(s)) == mu(frozenset(s))


@given(atoms, st.sets(st.integers(0, 30)), st.sets(st.integers(0, 30)))
def test_finitely_additive(a, s, t):
    mu = FASMeasure(a)
    t = t - s
    assert mu(frozenset(s | t)) == mu(frozenset(s)) + mu(frozenset(t))
    es, et = EPSet.finite(s), EPSet.finite(t)
    assert mu(es | et) == mu(es) + mu(et)


@given(st.integers(0, 2 ** 32))
def test_additive_on_pair_elements(seed):
    rng = random.Random(seed)
    a, b = random_pair_element(rng), random_pair_element(rng)
    b = b - a
    mu = FASMeasure({rng.randrange(40): rng.randint(-3, 3) for _ in range(5)})
    assert mu(a | b) == mu(a) + mu(b)


def test_measure_normalisation_and_json():
    mu = FASMeasure([(3, Fraction(1, 2)), (3, Fraction(-1, 2)), (1, 2)])
    assert mu.atoms == ((1, Fraction(2)),)
    assert FASMeasure.from_json(mu.to_json()) == mu
    assert (mu - mu) == FASMeasure()
    assert mu.scale(Fraction(1, 4)).norm == HALF
    with pytest.raises(ValueError):
        FASMeasure({-1: 1})
    with pytest.raises(ValueError):
        FASMeasure.from_json({"atoms": [[1, 2]]})


def test_family_norm_bound_enforced():
    fam = MeasureFamily(lambda n: FASMeasure({n: 3}), Fraction(2))
    with pytest.raises(ValueError):
        fam[0]
    with pytest.raises(IndexError):
        MeasureFamily.explicit([FASMeasure()])[1]


def test_pair_family_on_aligned_pairs_violates_hypothesis():
    # each pair difference cancels on its own pair
    ac = schema_family(BlockSchema(Block(0, 2, 2)))
    with pytest.raises(HypothesisViolationError):
        rosenthal_thin(pair_difference_family(), ac, HALF, 10)


def test_pair_family_on_even_points():
    ac = schema_family(BlockSchema(Block(0, 2, 1)))
    fam = pair_difference_family()
    thin = rosenthal_thin(fam, ac, HALF, 12)
    assert thin.selected == list(range(12))
    assert set(thin.cross_sums.values()) == {0}
    union, report = alternation_witness(fam, ac, HALF, thin)
    assert all(report.values[k] == 1 for k in report.even_positions)
    assert all(report.values[k] == 0 for k in report.odd_positions)
    assert (report.lower, report.upper) == (Fraction(1, 3), Fraction(1, 6))
    assert report.gap == 1
    assert 0 in union and 2 not in union and 4 in union


def test_thinning_with_decaying_tail():
    fam = MeasureFamily(lambda k: FASMeasure({2 * k: 1, 2 * k + 1: -1, 0: Fraction(1, 2 ** k)}),
                        Fraction(3))
    ac = schema_family(BlockSchema(Block(0, 2, 1)))
    thin = rosenthal_thin(fam, ac, HALF, 10)
    # mu_1(A_0) = 1/2 and mu_2(A_0) = 1/4 reach eps/3 = 1/6
    assert thin.selected == [0, 3, 4, 5, 6, 7, 8, 9]
    assert thin.cross_sums[3] == Fraction(1, 8)
    assert thin.max_cross_sum < HALF / 3
    alternation_witness(fam, ac, HALF, thin)


def test_hypothesis_and_selection_errors():
    ac = powerset_family([{0}, {1}, {2}])
    weak = MeasureFamily.explicit([FASMeasure({0: HALF}), FASMeasure({1: 1}), FASMeasure({2: 1})])
    with pytest.raises(HypothesisViolationError):
        rosenthal_thin(weak, ac, HALF, 3)
    with pytest.raises(EmptySelectionError):
        alternation_witness(dirac_family(1), ac, HALF, [0])
    crowded = MeasureFamily.explicit([FASMeasure({0: 1}), FASMeasure({0: 1, 1: 1})])
    with pytest.raises(EmptySelectionError):
        rosenthal_thin(crowded, powerset_family([{0}, {1}]), HALF, 2)
    with pytest.raises(ValueError):
        rosenthal_thin(dirac_family(1), ac, 0, 3)


@given(st.integers(0, 2 ** 32))
def test_random_families_thin_and_alternate(seed):
    fam, ac, eps = random_measure_case(random.Random(seed), horizon=10)
    thin = rosenthal_thin(fam, ac, eps, 10)
    for k in thin.selected:
        total = sum((abs(fam[k](ac[n])) for n in thin.selected if n != k), Fraction(0))
        assert total == thin.cross_sums[k] < eps / 3
    # maximality: every skipped index would break the bound somewhere
    for k in set(range(10)) - set(thin.selected):
        earlier = [n for n in thin.selected if n < k]
        own = sum((abs(fam[k](ac[n])) for n in earlier), Fraction(0))
        partial = {j: sum((abs(fam[j](ac[n])) for n in earlier if n != j), Fraction(0))
                   for j in earlier}
        assert own >= eps / 3 or any(partial[j] + abs(fam[j](ac[k])) >= eps / 3 for j in earlier)
    _, report = alternation_witness(fam, ac, eps, thin)
    assert report.gap >= eps / 3


def test_decomposition_examples():
    assert verify_positive_decomposition(base_decomposition(), 20)
    half = PositiveDecomposition.from_parts(
        MeasureFamily(lambda n: FASMeasure({2 * n: HALF, 2 * n + 1: HALF}), Fraction(1)),
        zero_family(), lambda n: frozenset({2 * n}), 1)
    assert decomposition_failure(half, 5) == (0, "concentration")
    d = base_decomposition()
    broken = PositiveDecomposition(
        MeasureFamily(lambda n: d.mu[n] + FASMeasure({0: 1}) if n == 3 else d.mu[n], Fraction(2)),
        d.lam, d.nu, d.B, d.eta)
    assert decomposition_failure(broken, 10) == (3, "sum")
    not_positive = PositiveDecomposition.from_parts(
        dirac_family(2, 0, -1), zero_family(), lambda n: frozenset({2 * n}), 1)
    assert decomposition_failure(not_positive, 5) == (0, "mass")
    assert decomposition_failure(PositiveDecomposition.from_parts(
        dirac_family(2), zero_family(), lambda n: frozenset(), 0), 3) == (0, "eta")


def test_grothendieck_example():
    rep = positive_grothendieck_report(base_decomposition(), base_separation(), 20)
    assert rep.passed
    assert all(v == 1 and b == HALF for v, b in rep.above.values())
    assert all(v == 0 and b == Fraction(1, 4) for v, b in rep.below.values())
    assert all(rep.stronger_bound.values())
    assert sorted(rep.above) == list(range(0, 20, 2))


def test_grothendieck_small_perturbation():
    d = PositiveDecomposition.from_parts(
        dirac_family(2), dirac_family(2, 0, Fraction(1, 100)), lambda n: frozenset({2 * n}), 1)
    assert verify_positive_decomposition(d, 20)
    assert positive_grothendieck_check(d, base_separation(), 20)


def test_grothendieck_witness_mismatch():
    w = SeparationWitness(EPSet.progression(0, 4) - EPSet.finite({8}),
                          Progression(0, 2), Progression(1, 2))
    with pytest.raises(WitnessMismatchError):
        positive_grothendieck_check(base_decomposition(), w, 20)
    meets = SeparationWitness(EPSet.progression(0, 2), Progression(0, 2), Progression(1, 2))
    with pytest.raises(WitnessMismatchError):
        positive_grothendieck_check(base_decomposition(), meets, 20)


@given(st.integers(0, 2 ** 32))
def test_perturbed_decompositions(seed):
    d = perturbed_decomposition(random.Random(seed))
    assert verify_positive_decomposition(d, 12)
    assert positive_grothendieck_check(d, base_separation(), 12)


def test_pair_family_has_no_alternation_among_pair_elements():
    # mu_n(E) is eventually zero for every element of the pair algebra
    rng = random.Random(7)
    fam = pair_difference_family()
    for _ in range(50):
        e = random_pair_element(rng)
        assert all(fam[n](e) == 0 for n in range(e.vanish_index, e.vanish_index + 20))
