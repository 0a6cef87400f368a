"""Verification campaigns: seeded corpora, exhaustive sweeps, and the reports
the command line prints.

Each campaign returns a :class:`Report` whose JSON form depends only on the
inputs and the seed. Wall-clock time is kept on the report object but only
serialised on request.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from . import terms
from .epsets import (EMPTY, NATURALS, EPSet, agree_on_window, ep_complement,
                     ep_inter, ep_member, ep_union)
from .families import Block, BlockSchema, PresentedAntichain, Progression, SeparationWitness
from .measures import (FASMeasure, MeasureFamily, PositiveDecomposition,
                       alternation_witness, dirac_family, pair_difference_family,
                       positive_grothendieck_report, rosenthal_thin,
                       verify_positive_decomposition, zero_family)
from .pairs import (PairElement, mu_eval,
                    pair_antichain, random_pair_element, wssp_witness)
from .separation import (BranchSelection, all_splits, check_wssp_witness,
                         independence_meet)
from .terms import DNF, Conjunction
from .tree import (AntichainPoint, all_nodes, brute_force_zero_mod_kernel,
                   is_antichain, is_proper_prefix, is_zero_mod_kernel, star_check,
                   sweep_single_conjuncts, witness_point)

DEFAULT_SEED = 42


@dataclass
class Check:
    id: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"id": self.id, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    campaign: str
    inputs: dict
    checks: list[Check] = field(default_factory=list)
    runtime: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def inputs_digest(self) -> str:
        text = json.dumps(self.inputs, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "campaign": self.campaign,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "passed": self.passed,
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.id)],
        }
        if timings and self.runtime is not None:
            out["runtime_seconds"] = round(self.runtime, 3)
        return out

    def dumps(self, timings: bool = False) -> str:
        return json.dumps(self.to_json(timings), sort_keys=True, indent=2)

    def table(self) -> str:
        width = max((len(c.id) for c in self.checks), default=10)
        lines = [f"{self.campaign}  ({'PASS' if self.passed else 'FAIL'})"]
        for c in sorted(self.checks, key=lambda c: c.id):
            lines.append(f"  {'PASS' if c.passed else 'FAIL'}  {c.id:<{width}}  "
                         + json.dumps(c.detail, sort_keys=True))
        return "\n".join(lines)


def _timed(fn):
    def run(*args, **kwargs):
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.runtime = time.perf_counter() - start
        return report
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# -- random corpora -----------------------------------------------------------

def random_term(rng: random.Random, gens, depth: int = 4) -> terms.Term:
    if depth == 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.05:
            return terms.ZERO
        if roll < 0.1:
            return terms.ONE
        return terms.Var(rng.choice(gens))
    op = rng.choice(("meet", "join", "not"))
    if op == "not":
        return terms.Not(random_term(rng, gens, depth - 1))
    left, right = random_term(rng, gens, depth - 1), random_term(rng, gens, depth - 1)
    return terms.Meet(left, right) if op == "meet" else terms.Join(left, right)


def random_tree_dnf(rng: random.Random, max_conjuncts: int = 3, max_nodes: int = 6,
                    max_depth: int = 4) -> DNF:
    pool = rng.sample(all_nodes(max_depth), rng.randint(1, max_nodes))
    conjuncts = []
    for _ in range(rng.randint(1, max_conjuncts)):
        pos, neg = set(), set()
        for s in pool:
            roll = rng.random()
            if roll < 0.4:
                pos.add(s)
            elif roll < 0.6:
                neg.add(s)
        conjuncts.append(Conjunction(frozenset(pos), frozenset(neg)))
    return DNF(frozenset(conjuncts))


def random_epset(rng: random.Random, max_threshold: int = 8, max_period: int = 6) -> EPSet:
    t = rng.randint(0, max_threshold)
    p = rng.randint(1, max_period)
    bits = "".join(rng.choice("01") for _ in range(t + p))
    return EPSet.from_bits(bits[:t], bits[t:])


def unrolled(s: EPSet, copies: int = 4) -> list[bool]:
    """Membership list for ``[0, threshold + copies*period)``."""
    return [c == "1" for c in s.prefix + s.pattern * copies]


def random_branch(rng: random.Random, max_prefix: int = 3, max_period: int = 3,
                  vary_selection: bool = True) -> BranchSelection:
    prefix = "".join(rng.choice("01") for _ in range(rng.randint(0, max_prefix)))
    period = "".join(rng.choice("01") for _ in range(rng.randint(1, max_period)))
    selected = Progression(2, 2)
    if vary_selection:
        selected = Progression(rng.randint(1, 4), rng.randint(2, 4))
    return BranchSelection(prefix, period, selected)


def small_branches(max_length: int = 4) -> list[BranchSelection]:
    """One description of every distinct branch with prefix + period length
    at most ``max_length``."""
    seen: dict[EPSet, BranchSelection] = {}
    for total in range(1, max_length + 1):
        for q in range(1, total + 1):
            for prefix in itertools.product("01", repeat=total - q):
                for period in itertools.product("01", repeat=q):
                    b = BranchSelection("".join(prefix), "".join(period))
                    seen.setdefault(b.as_epset(), b)
    return list(seen.values())


# -- kernel word problem ------------------------------------------------------

@_timed
def kernel_equivalence(seed: int = DEFAULT_SEED, random_cases: int = 10_000,
                       exhaustive_depth: int = 3) -> Report:
    """Decision procedure vs brute force, exhaustively and on random DNFs."""
    report = Report("kernel-equivalence", {"seed": seed, "random_cases": random_cases,
                                           "exhaustive_depth": exhaustive_depth})
    sweep = sweep_single_conjuncts(exhaustive_depth)
    report.checks.append(Check("1a.exhaustive_single_conjuncts", not sweep.mismatches, {
        "nodes": sweep.nodes, "conjuncts": sweep.conjuncts, "nonzero": sweep.nonzero,
        "mismatches": [c.to_json() for c in sweep.mismatches]}))

    rng = random.Random(seed)
    disagreements, zeros = [], 0
    for _ in range(random_cases):
        d = random_tree_dnf(rng)
        decided = is_zero_mod_kernel(d)
        zeros += decided
        if decided != brute_force_zero_mod_kernel(d, d.generators()):
            disagreements.append(d.to_json())
    report.checks.append(Check("1b.random_dnfs", not disagreements, {
        "cases": random_cases, "zero": zeros, "nonzero": random_cases - zeros,
        "disagreements": disagreements[:5]}))
    return report


# -- comparable and incomparable nodes ----------------------------------------

@_timed
def star_sweep(max_depth: int = 4, max_size: int = 4) -> Report:
    report = Report("star-sweep", {"max_depth": max_depth, "max_size": max_size})
    nodes = all_nodes(max_depth)
    pairs = [(s, t) for s in nodes for t in nodes if is_proper_prefix(s, t)]
    failed = [[s, t] for s, t in pairs if not star_check(s, t)]
    report.checks.append(Check("2a.comparable_pairs_zero", not failed,
                               {"pairs": len(pairs), "failures": failed[:5]}))

    count, bad = 0, []
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(nodes, size):
            if not is_antichain(combo):
                continue
            count += 1
            c = Conjunction(frozenset(combo))
            d = DNF(frozenset({c}))
            ok = not is_zero_mod_kernel(d) and not brute_force_zero_mod_kernel(d)
            if ok:
                w = witness_point(c)
                ok = isinstance(w, AntichainPoint) and w.satisfies(c)
            if not ok:
                bad.append(sorted(combo))
    report.checks.append(Check("2b.antichains_nonzero_with_witness", not bad,
                               {"antichains": count, "failures": bad[:5]}))
    return report


# -- independence -------------------------------------------------------------

def _independence_batch(families, label: str) -> Check:
    cases, failures = 0, []
    for branches in families:
        for F in all_splits(len(branches)):
            cases += 1
            result = independence_meet(branches, F)
            if not result.verified:
                failures.append({"branches": [b.to_json() for b in branches],
                                 "F": sorted(F), "result": result.to_json()})
    return Check(label, not failures, {"cases": cases, "failures": failures[:3]})


@_timed
def independence_campaign(seed: int = DEFAULT_SEED, random_cases: int = 200,
                          max_length: int = 4) -> Report:
    report = Report("independence", {"seed": seed, "random_cases": random_cases,
                                     "max_length": max_length})
    small = small_branches(max_length)
    report.checks.append(_independence_batch(
        itertools.combinations(small, 3), "3a.all_triples_all_splits"))
    report.checks[-1].detail["distinct_branches"] = len(small)

    rng = random.Random(seed)
    families = []
    while len(families) < random_cases:
        branches = [random_branch(rng) for _ in range(5)]
        if len({b.as_epset() for b in branches}) == 5:
            families.append(branches)
    report.checks.append(_independence_batch(families, "3b.random_five_branch_cases"))
    return report


# -- eventually periodic sets -------------------------------------------------

def _law_failures(a: EPSet, b: EPSet, c: EPSet) -> list[str]:
    laws = {
        "union_assoc": (a | b) | c == a | (b | c),
        "inter_assoc": (a & b) & c == a & (b & c),
        "union_comm": a | b == b | a,
        "inter_comm": a & b == b & a,
        "distrib_inter": a & (b | c) == (a & b) | (a & c),
        "distrib_union": a | (b & c) == (a | b) & (a | c),
        "de_morgan_union": ~(a | b) == ~a & ~b,
        "de_morgan_inter": ~(a & b) == ~a | ~b,
        "complement_union": a | ~a == NATURALS,
        "complement_inter": a & ~a == EMPTY,
        "double_complement": ~~a == a,
        "absorption": a | (a & b) == a,
    }
    return [name for name, ok in laws.items() if not ok]


@_timed
def ep_laws(seed: int = DEFAULT_SEED, triples: int = 10_000, memberships: int = 100_000,
            pairs: int = 10_000) -> Report:
    report = Report("ep-laws", {"seed": seed, "triples": triples,
                                "memberships": memberships, "pairs": pairs})
    rng = random.Random(seed)

    broken: dict[str, int] = {}
    for _ in range(triples):
        for name in _law_failures(random_epset(rng), random_epset(rng), random_epset(rng)):
            broken[name] = broken.get(name, 0) + 1
    report.checks.append(Check("4a.boolean_laws", not broken,
                               {"triples": triples, "violations": broken}))

    wrong = 0
    for _ in range(memberships):
        s = random_epset(rng)
        table = unrolled(s)
        n = rng.randrange(len(table))
        wrong += ep_member(s, n) != table[n]
    report.checks.append(Check("4b.membership_vs_unrolled", wrong == 0,
                               {"checks": memberships, "wrong": wrong}))

    pointwise = 0
    for _ in range(pairs):
        s, t = random_epset(rng), random_epset(rng)
        ts, tt = unrolled(s, 40), unrolled(t, 40)
        bound = max(s.threshold, t.threshold) + 4 * (s.period * t.period)
        bound = min(bound, len(ts), len(tt))
        for op, fn in ((ep_union, lambda x, y: x or y), (ep_inter, lambda x, y: x and y)):
            r = op(s, t)
            pointwise += any(ep_member(r, n) != fn(ts[n], tt[n]) for n in range(bound))
        r = ep_complement(s)
        pointwise += any(ep_member(r, n) == ts[n] for n in range(len(ts)))
    report.checks.append(Check("4c.operations_pointwise", pointwise == 0,
                               {"pairs": pairs, "wrong": pointwise}))

    mismatched, equal_cases = 0, 0
    for _ in range(pairs):
        s = random_epset(rng)
        if rng.random() < 0.5:
            # same set, longer raw description
            extra_t, mult = rng.randint(0, 5), rng.randint(1, 3)
            bits = "".join("1" if ep_member(s, n) else "0"
                           for n in range(s.threshold + extra_t + mult * s.period))
            t = EPSet.from_bits(bits[:s.threshold + extra_t], bits[s.threshold + extra_t:])
        else:
            t = random_epset(rng)
        equal_cases += s == t
        mismatched += agree_on_window(s, t) != (s == t)
    report.checks.append(Check("4d.equality_window", mismatched == 0,
                               {"pairs": pairs, "equal": equal_cases, "mismatched": mismatched}))
    return report


# -- pair algebra -------------------------------------------------------------

def pair_schemas() -> dict[str, BlockSchema]:
    return {
        "pairs_4n": BlockSchema(Block(0, 4, 2)),
        "singles_4n": BlockSchema(Block(0, 4, 1)),
        "singles_n": BlockSchema(Block(0, 1, 1)),
        "odd_stride": BlockSchema(Block(1, 3, 2)),
        "varying": BlockSchema(Block(0, 5, 4), lambda n: {n % 4} | {(n + 1) % 4}),
    }


def _weak_null_failures(e: PairElement) -> list[int]:
    s = e.carrier
    # mu_n reads bits 2n, 2n+1; past the threshold these repeat with this period
    start = max(e.vanish_index, -(-s.threshold // 2))
    span = s.period // (2 if s.period % 2 == 0 else 1)
    window = range(e.vanish_index, start + span)
    bad = [n for n in window if mu_eval(n, e) != 0]
    if e.vanish_index > 0 and mu_eval(e.vanish_index - 1, e) == 0:
        bad.append(-1)
    return bad


@_timed
def pair_campaign(seed: int = DEFAULT_SEED, corpus: int = 1000,
                  horizons=(10, 100, 1000)) -> Report:
    report = Report("pair-demo", {"seed": seed, "corpus": corpus, "horizons": list(horizons)})
    rng = random.Random(seed)
    failures = []
    for i in range(corpus):
        e = random_pair_element(rng)
        if _weak_null_failures(e):
            failures.append({"element": e.to_json()})
    report.checks.append(Check("5a.weak_star_null", not failures,
                               {"corpus": corpus, "failures": failures[:3]}))

    for name, schema in pair_schemas().items():
        ac = pair_antichain(schema)
        w = wssp_witness(ac)
        results = {str(h): check_wssp_witness(ac, w, h) for h in horizons}
        sel = w.M1.stream
        kept = sel.members_below(max(horizons))
        closures = [sel.closure(n) for n in kept]
        closed = all(PairElement.finite(b).vanish_index == 0 and
                     all((x ^ 1) in b for x in b) for b in closures)
        disjoint_ok = all(a.isdisjoint(b) for a, b in zip(closures, closures[1:]))
        ok = all(results.values()) and closed and disjoint_ok
        report.checks.append(Check(f"5b.wssp_witness.{name}", ok, {
            "horizons": results, "kept_below_max": len(kept),
            "dropped_below_max": len([n for n in sel.dropped if n < max(horizons)]),
            "closures_pair_closed": closed, "closures_disjoint": disjoint_ok}))
    return report


def mu_table(horizon: int, seed: int = DEFAULT_SEED, count: int = 5) -> list[dict]:
    """``mu_n(E)`` for ``n < horizon`` over a small seeded corpus."""
    rng = random.Random(seed)
    rows = []
    for _ in range(count):
        e = random_pair_element(rng)
        rows.append({"set": e.carrier.to_json(), "vanish_index": e.vanish_index,
                     "mu": [int(mu_eval(n, e)) for n in range(horizon)]})
    return rows


# -- thinning and alternation -------------------------------------------------

def powerset_family(sets) -> PresentedAntichain:
    return PresentedAntichain.from_list("powerset", [frozenset(s) for s in sets])


def schema_family(schema: BlockSchema, carrier: str = "powerset") -> PresentedAntichain:
    return PresentedAntichain(carrier, schema.component, schema=schema,
                              certificate="structural: components occupy disjoint block windows")


def _thin_and_alternate(fam, ac, eps, horizon) -> dict:
    thin = rosenthal_thin(fam, ac, eps, horizon)
    # independent pass: recompute every cross-sum from the atoms
    third = Fraction(eps) / 3
    recomputed = {}
    for k in thin.selected:
        total = Fraction(0)
        for n in thin.selected:
            if n != k:
                members = set(ac[n])
                total += abs(sum((w for i, w in fam[k].atoms if i in members), Fraction(0)))
        recomputed[k] = total
    post_ok = recomputed == thin.cross_sums and all(v < third for v in recomputed.values())
    _, alt = alternation_witness(fam, ac, eps, thin.selected)
    return {"thinning": thin, "alternation": alt, "postcondition": post_ok,
            "gap_ok": alt.gap >= third}


def random_measure_case(rng: random.Random, horizon: int = 16):
    """Disjoint finite sets with a family meeting the thinning hypothesis."""
    eps = Fraction(rng.randint(1, 4), rng.randint(2, 6))
    width = rng.randint(1, 3)
    schema = BlockSchema(Block(0, width + rng.randint(0, 2), width))
    measures = []
    for k in range(horizon):
        while True:
            atoms = {schema.block.low(k) + rng.randrange(width):
                     rng.choice((1, -1)) * (eps + Fraction(rng.randint(1, 8), 4))}
            for _ in range(rng.randint(0, 3)):
                x = schema.block.low(rng.randrange(horizon)) + rng.randrange(width)
                atoms[x] = atoms.get(x, 0) + Fraction(rng.randint(-9, 9), 40) * eps
            mu = FASMeasure(atoms)
            if abs(mu(schema.component(k))) > eps:
                break
        measures.append(mu)
    return MeasureFamily.explicit(measures), schema_family(schema), eps


def _pair_family_check(width: int, horizon: int) -> tuple[bool, dict]:
    """Pair differences against ``A_n = {2n, ..., 2n + width - 1}`` with eps 1/2."""
    eps = Fraction(1, 2)
    fam = pair_difference_family()
    ac = schema_family(BlockSchema(Block(0, 2, width)))
    try:
        res = _thin_and_alternate(fam, ac, eps, horizon)
    except ValueError as exc:
        return False, {"error": type(exc).__name__, "message": str(exc)}
    thin, alt = res["thinning"], res["alternation"]
    ok = (thin.selected == list(range(horizon))
          and all(v == 0 for v in thin.cross_sums.values())
          and all(alt.values[k] == 1 for k in alt.even_positions)
          and all(alt.values[k] == 0 for k in alt.odd_positions)
          and res["postcondition"])
    return ok, {"selected": thin.selected, "alternation": alt.to_json()}


@_timed
def thinning_campaign(seed: int = DEFAULT_SEED, random_families: int = 100,
                      horizon: int = 20) -> Report:
    report = Report("thinning-alternation", {"seed": seed, "random_families": random_families,
                                             "horizon": horizon})
    # A_n = {2n, 2n+1}: each mu_n cancels on its own pair, so the size
    # hypothesis fails at n = 0 and the check reports it
    ok, detail = _pair_family_check(2, horizon)
    report.checks.append(Check("6a.pair_family_on_pairs", ok, detail))
    ok, detail = _pair_family_check(1, horizon)
    report.checks.append(Check("6c.pair_family_on_even_points", ok, detail))

    rng = random.Random(seed)
    failures, kept = [], []
    for i in range(random_families):
        fam_i, ac_i, eps_i = random_measure_case(rng)
        try:
            res = _thin_and_alternate(fam_i, ac_i, eps_i, fam_i.length)
            kept.append(len(res["thinning"].selected))
            if not (res["postcondition"] and res["gap_ok"]):
                failures.append(i)
        except ValueError as exc:
            failures.append(f"{i}: {type(exc).__name__}: {exc}")
    report.checks.append(Check("6b.random_families", not failures, {
        "families": random_families, "failures": failures[:5],
        "min_kept": min(kept, default=0), "max_kept": max(kept, default=0)}))
    return report


# -- positive decompositions --------------------------------------------------

def base_decomposition() -> PositiveDecomposition:
    return PositiveDecomposition.from_parts(
        dirac_family(2, 0), zero_family(), lambda n: frozenset({2 * n}), 1)


def base_separation() -> SeparationWitness:
    return SeparationWitness(EPSet.progression(0, 4), Progression(0, 2), Progression(1, 2))


def perturbed_decomposition(rng: random.Random) -> PositiveDecomposition:
    cache: dict[int, FASMeasure] = {}

    def nu(n):
        if n not in cache:
            atoms = {rng.randrange(4 * n + 8): Fraction(rng.randint(-9, 9), rng.randint(10, 200))
                     for _ in range(rng.randint(1, 3))}
            cache[n] = FASMeasure(atoms)
        return cache[n]

    return PositiveDecomposition.from_parts(
        dirac_family(2, 0), MeasureFamily(nu, Fraction(3), label="perturbation"),
        lambda n: frozenset({2 * n}), 1)


@_timed
def grothendieck_campaign(seed: int = DEFAULT_SEED, perturbations: int = 50,
                          horizon: int = 40) -> Report:
    report = Report("positive-grothendieck", {"seed": seed, "perturbations": perturbations,
                                              "horizon": horizon})
    w = base_separation()
    d = base_decomposition()
    base = positive_grothendieck_report(d, w, horizon)
    report.checks.append(Check("7a.base_decomposition",
                               verify_positive_decomposition(d, horizon) and base.passed,
                               base.to_json()))
    rng = random.Random(seed)
    failures, stronger = [], 0
    for i in range(perturbations):
        d = perturbed_decomposition(rng)
        # materialise in index order so the seeded draws do not depend on call order
        for n in range(horizon):
            d.nu[n]
        rep = positive_grothendieck_report(d, w, horizon)
        stronger += all(rep.stronger_bound.values())
        if not (verify_positive_decomposition(d, horizon) and rep.passed):
            failures.append(i)
    report.checks.append(Check("7b.perturbations", not failures, {
        "perturbations": perturbations, "failures": failures,
        "stronger_bound_everywhere": stronger}))
    return report


# -- selftest -----------------------------------------------------------------

CAMPAIGNS = {
    "kernel-equivalence": kernel_equivalence,
    "star-sweep": star_sweep,
    "independence": independence_campaign,
    "ep-laws": ep_laws,
    "pair-demo": pair_campaign,
    "thinning-alternation": thinning_campaign,
    "positive-grothendieck": grothendieck_campaign,
}


def selftest(seed: int = DEFAULT_SEED) -> Report:
    """Every campaign with its acceptance-size inputs, merged into one report."""
    start = time.perf_counter()
    merged = Report("selftest", {"seed": seed})
    for name, fn in CAMPAIGNS.items():
        kwargs = {"seed": seed} if "seed" in fn.__code__.co_varnames else {}
        sub = fn(**kwargs)
        for check in sub.checks:
            merged.checks.append(Check(f"{name}/{check.id}", check.passed, check.detail))
    merged.runtime = time.perf_counter() - start
    return merged
