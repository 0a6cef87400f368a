import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import NODES3, branches, tree_dnfs
from oracles import antichain, antichain_points, point_satisfies
from stoneforge.epsets import EVENS, EPSet
from stoneforge.families import (Block, BlockSchema, LazyUnion, PresentedAntichain,
                                 Progression, SeparationWitness, SSPWitness)
from stoneforge.pairs import pair_antichain, wssp_witness
from stoneforge.separation import (BranchJoin, BranchSelection, CarrierMismatchError,
                                   IndistinguishableBranchError, UnsupportedCarrierError,
                                   all_splits, branch_antichain, branch_wssp_witness,
                                   carrier_of, check_scp_witness, check_ssp_witness,
                                   check_wssp_witness, construct_A_x, disjoint,
                                   independence_meet, leq, separation_depth,
                                   ssp_branch_witness, verify_antichain)
from stoneforge.terms import DNF, DNF_ONE
from stoneforge.tree import AntichainPoint, is_zero_mod_kernel

ZEROS = BranchSelection("", "0")
ONES = BranchSelection("", "1")


def point(*nodes):
    return AntichainPoint(frozenset(nodes))


def test_construct_A_x_examples():
    a = construct_A_x(ZEROS)
    assert point("00") in a
    assert point("000") not in a
    assert point("0") not in a
    assert point("1", "0000") in a


def test_branch_antichain_examples():
    ac = branch_antichain(ZEROS, 3)
    items = ac.materialize(10)
    assert [sorted(d.generators()) for d in items] == [["0"], ["00"], ["000"]]
    assert verify_antichain(ac, 10)
    assert all(is_zero_mod_kernel(a.meet(b)) for a in items for b in items if a is not b)
    alt = branch_antichain(BranchSelection("", "01"), 2)
    assert [sorted(d.generators()) for d in alt.materialize(5)] == [["0"], ["01"]]
    with pytest.raises(IndexError):
        alt[3]


def test_tree_wssp_example():
    ac = branch_antichain(ZEROS, 30)
    w = branch_wssp_witness(ZEROS)
    assert w.M1.members_below(9) == [2, 4, 6, 8]
    assert w.M0.members_below(9) == [1, 3, 5, 7]
    assert check_wssp_witness(ac, w, 12)
    bad = SeparationWitness(BranchJoin(ZEROS), Progression(3, 2), Progression(2, 2))
    assert not check_wssp_witness(ac, bad, 12)


def test_pair_wssp_example():
    ac = pair_antichain(BlockSchema(Block(0, 4, 2)))
    assert check_wssp_witness(ac, wssp_witness(ac), 100)


def test_carrier_mismatch():
    ac = pair_antichain(BlockSchema(Block(0, 4, 2)))
    with pytest.raises(CarrierMismatchError):
        check_wssp_witness(ac, SeparationWitness(EVENS, EVENS, ~EVENS), 10)
    with pytest.raises(CarrierMismatchError):
        carrier_of(3.5)


def test_ssp_examples():
    ac = branch_antichain(ZEROS, 40)
    w = ssp_branch_witness(ZEROS)
    assert check_ssp_witness(ac, w, 30)
    assert check_wssp_witness(ac, w.to_wssp(), 30)
    assert not check_ssp_witness(ac, SSPWitness(DNF_ONE, Progression(1, 1)), 30)


@given(branches())
def test_branch_witnesses_hold(b):
    ac = branch_antichain(b, 24)
    assert check_wssp_witness(ac, branch_wssp_witness(b), 20)
    w = ssp_branch_witness(b)
    assert check_ssp_witness(ac, w, 20)
    assert check_wssp_witness(ac, w.to_wssp(), 20)


def powerset_schema_family(schema):
    return PresentedAntichain("powerset", schema.component, schema=schema)


def test_scp_examples():
    schema = BlockSchema(Block(0, 3, 2))
    ac = powerset_schema_family(schema)
    sup = LazyUnion(schema, Progression(0, 2))
    assert check_scp_witness(ac, EVENS, sup, 30)
    missing = sup.to_epset() - EPSet.finite(schema.component(4))
    assert not check_scp_witness(ac, EVENS, missing, 30)
    with pytest.raises(UnsupportedCarrierError):
        check_scp_witness(branch_antichain(ZEROS, 5), EVENS, DNF_ONE, 5)
    with pytest.raises(UnsupportedCarrierError):
        check_scp_witness(PresentedAntichain.from_list("powerset", [frozenset({0})]),
                          EVENS, frozenset({0}), 5)


def test_scp_rejects_strict_upper_bound():
    schema = BlockSchema(Block(0, 3, 2))
    ac = powerset_schema_family(schema)
    too_big = LazyUnion(schema, Progression(0, 1)).to_epset()
    assert not check_scp_witness(ac, EVENS, too_big, 30)


def test_independence_example():
    r = independence_meet([ZEROS, ONES], {0})
    assert r.separation_depth == 1
    assert r.depths == (2, 3)
    assert r.witness.nodes == {"00", "111"}
    assert r.verified


def test_independence_all_positive():
    bs = [ZEROS, ONES, BranchSelection("0", "1"), BranchSelection("1", "0")]
    r = independence_meet(bs, range(4))
    assert r.verified
    assert all(d % 2 == 0 for d in r.depths)


def test_indistinguishable_branches():
    with pytest.raises(IndistinguishableBranchError):
        independence_meet([ZEROS, BranchSelection("00", "00")], {0})
    with pytest.raises(ValueError):
        independence_meet([ZEROS, ONES], {0}, {0, 1})


def test_separation_depth():
    assert separation_depth([BranchSelection("", "01"), BranchSelection("0", "0")]) == 2


@given(st.lists(branches(), min_size=1, max_size=5), st.data())
def test_independence_random(bs, data):
    assume(len({b.as_epset() for b in bs}) == len(bs))
    F = data.draw(st.sampled_from(list(all_splits(len(bs)))))
    r = independence_meet(bs, F)
    assert r.verified
    assert antichain(r.witness.nodes)
    joins = [BranchJoin(b) for b in bs]
    assert all((r.witness in joins[i]) == (i in F) for i in range(len(bs)))


def join_oracle(d: DNF, j: BranchJoin):
    """(below, disjoint) by enumerating antichains of the DNF's nodes plus
    branch nodes deep enough to cover the first selected depth past them."""
    depth = max((len(s) for s in d.generators()), default=0)
    sel = j.branch.selected
    reach = sel.next_at_or_after(depth + 1) + 1
    pool = d.generators() | {j.branch.restrict(k) for k in range(reach + 1)}
    below, apart = True, True
    for w in antichain_points(pool):
        if any(point_satisfies(w, c) for c in d.conjuncts):
            inside = AntichainPoint(w) in j
            below &= inside
            apart &= not inside
    return below, apart


@given(tree_dnfs(NODES3), branches(max_prefix=2, max_period=2))
def test_tree_order_against_points(d, b):
    j = BranchJoin(b)
    below, apart = join_oracle(d, j)
    assert leq("tree", d, j) == below
    assert disjoint("tree", d, j) == apart
    assert disjoint("tree", j, d) == apart


@given(tree_dnfs(NODES3), tree_dnfs(NODES3))
def test_tree_order_between_dnfs(a, b):
    pool = a.generators() | b.generators()
    pts = [w for w in antichain_points(pool)]
    sat = lambda d, w: any(point_satisfies(w, c) for c in d.conjuncts)  # noqa: E731
    assert leq("tree", a, b) == all(sat(b, w) for w in pts if sat(a, w))
    assert disjoint("tree", a, b) == (not any(sat(a, w) and sat(b, w) for w in pts))


def test_unsupported_tree_comparison():
    with pytest.raises(UnsupportedCarrierError):
        leq("tree", BranchJoin(ZEROS), DNF_ONE)


def test_branch_validation_and_json():
    with pytest.raises(ValueError):
        BranchSelection("", "")
    with pytest.raises(ValueError):
        BranchSelection("", "0", Progression(2, 1))
    b = BranchSelection("01", "1", Progression(3, 3))
    assert BranchSelection.from_json(b.to_json()) == b
    assert b.restrict(5) == "01111"
