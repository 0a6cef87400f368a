import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from stoneforge import terms  # noqa: E402
from stoneforge.epsets import EPSet  # noqa: E402
from stoneforge.separation import BranchSelection  # noqa: E402
from stoneforge.families import Progression  # noqa: E402
from stoneforge.tree import all_nodes  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GENS = ["g1", "g2", "g3", "g4", "g5"]
NODES3 = all_nodes(3)
NODES4 = all_nodes(4)


def term_strategy(gens=GENS):
    leaves = st.one_of(st.just(terms.ZERO), st.just(terms.ONE),
                       st.sampled_from(gens).map(terms.Var))
    return st.recursive(leaves, lambda sub: st.one_of(
        st.builds(terms.Meet, sub, sub),
        st.builds(terms.Join, sub, sub),
        st.builds(terms.Not, sub)), max_leaves=12)


@st.composite
def conjunctions(draw, nodes=NODES3, max_nodes=6):
    pool = draw(st.lists(st.sampled_from(nodes), min_size=0, max_size=max_nodes, unique=True))
    pos, neg = set(), set()
    for s in pool:
        kind = draw(st.sampled_from("pn-"))
        if kind == "p":
            pos.add(s)
        elif kind == "n":
            neg.add(s)
    return terms.Conjunction(frozenset(pos), frozenset(neg))


@st.composite
def tree_dnfs(draw, nodes=NODES3, max_conjuncts=3):
    cs = draw(st.lists(conjunctions(nodes), min_size=0, max_size=max_conjuncts))
    return terms.DNF(frozenset(cs))


bitstrings = st.text(alphabet="01", max_size=8)


@st.composite
def epsets(draw, max_threshold=8, max_period=6):
    prefix = draw(st.text(alphabet="01", max_size=max_threshold))
    pattern = draw(st.text(alphabet="01", min_size=1, max_size=max_period))
    return EPSet.from_bits(prefix, pattern)


@st.composite
def branches(draw, max_prefix=3, max_period=3):
    prefix = draw(st.text(alphabet="01", max_size=max_prefix))
    period = draw(st.text(alphabet="01", min_size=1, max_size=max_period))
    start = draw(st.integers(1, 4))
    step = draw(st.integers(2, 4))
    return BranchSelection(prefix, period, Progression(start, step))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
