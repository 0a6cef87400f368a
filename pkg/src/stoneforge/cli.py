"""``stoneforge`` command line.

Every subcommand prints a JSON report (or a table with ``--human``) and exits
0 when all checks pass, 1 on any violated check and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import campaigns
from .campaigns import Check, Report
from .families import PresentedAntichain, schema_from_json
from .measures import FASMeasure, MeasureFamily, alternation_witness, rosenthal_thin
from .separation import BranchSelection, all_splits, independence_meet
from .terms import DNF, dnf_from_json, term_from_json, to_dnf
from .tree import (BruteForceSizeError, brute_force_zero_mod_kernel, check_node,
                   is_zero_mod_kernel, nonzero_witness)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Malformed or unreadable input; maps to exit code 2."""


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _parse_dnf(obj) -> DNF:
    """A DNF list of ``{"U": [...], "V": [...]}`` or a term tree."""
    try:
        d = dnf_from_json(obj) if isinstance(obj, list) else to_dnf(term_from_json(obj))
        for s in d.generators():
            check_node(s)
        return d
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed formula: {exc}") from None


def _parse_epsilon(text: str) -> Fraction:
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"epsilon must look like p/q, got {text!r}") from None
    if eps <= 0:
        raise InputError("epsilon must be positive")
    return eps


def _parse_split(text: str, n: int) -> frozenset[int]:
    try:
        F = frozenset(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise InputError(f"split must be comma-separated indices, got {text!r}") from None
    if any(i < 0 or i >= n for i in F):
        raise InputError(f"split indices must lie in [0, {n})")
    return F


# -- subcommands --------------------------------------------------------------

def cmd_kernel_check(args) -> Report:
    if args.dnf is None:
        return campaigns.kernel_equivalence(args.seed, args.random_cases)
    d = _parse_dnf(_load_json(args.dnf))
    start = time.perf_counter()
    report = Report("kernel-check", {"dnf": d.to_json(), "oracle": args.oracle})
    zero = is_zero_mod_kernel(d)
    witness = nonzero_witness(d)
    detail = {"zero": zero, "witness": None if witness is None else witness.to_json()}
    report.checks.append(Check("decision", zero == (witness is None), detail))
    if args.oracle:
        try:
            brute = brute_force_zero_mod_kernel(d)
        except BruteForceSizeError as exc:
            raise InputError(str(exc)) from None
        report.checks.append(Check("oracle_agreement", brute == zero, {"oracle_zero": brute}))
    report.runtime = time.perf_counter() - start
    return report


def cmd_star_sweep(args) -> Report:
    return campaigns.star_sweep(args.max_depth, args.max_size)


def cmd_independence(args) -> Report:
    if args.branches is None:
        return campaigns.independence_campaign(args.seed, args.random_cases)
    raw = _load_json(args.branches)
    if not isinstance(raw, list) or not raw:
        raise InputError("branches file must hold a nonempty JSON list")
    try:
        branches = [BranchSelection.from_json(b) for b in raw]
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed branch: {exc}") from None
    if args.all_splits:
        splits = list(all_splits(len(branches)))
    elif args.split is not None:
        splits = [_parse_split(args.split, len(branches))]
    else:
        raise InputError("give --split or --all-splits with --branches")
    start = time.perf_counter()
    report = Report("independence", {"branches": [b.to_json() for b in branches],
                                     "splits": [sorted(F) for F in splits]})
    for F in splits:
        try:
            result = independence_meet(branches, F)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        label = "F=" + (",".join(map(str, sorted(F))) or "none")
        report.checks.append(Check(label, result.verified, result.to_json()))
    report.runtime = time.perf_counter() - start
    return report


def cmd_pair_demo(args) -> Report:
    horizons = tuple(args.horizon or (10, 100, 1000))
    if any(h < 1 for h in horizons):
        raise InputError("horizons must be positive")
    report = campaigns.pair_campaign(args.seed, args.corpus, horizons)
    if args.show_mu:
        report.checks.append(Check("mu_table", True,
                                   {"rows": campaigns.mu_table(min(horizons), args.seed)}))
    return report


def _parse_family(obj) -> MeasureFamily:
    items = obj.get("measures") if isinstance(obj, dict) else obj
    if not isinstance(items, list) or not items:
        raise InputError("family must be a nonempty list of measures")
    try:
        return MeasureFamily.explicit([FASMeasure.from_json(m) for m in items])
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"malformed measure: {exc}") from None


def _parse_antichain(obj) -> PresentedAntichain:
    try:
        if isinstance(obj, dict) and "block" in obj:
            return campaigns.schema_family(schema_from_json(obj))
        if isinstance(obj, list) and all(isinstance(a, list) for a in obj):
            sets = [frozenset(int(x) for x in a) for a in obj]
            if any(x < 0 for s in sets for x in s):
                raise ValueError("members must be naturals")
            if any(not a.isdisjoint(b) for i, a in enumerate(sets) for b in sets[i + 1:]):
                raise ValueError("sets must be pairwise disjoint")
            return campaigns.powerset_family(sets)
    except (ValueError, TypeError) as exc:
        raise InputError(f"malformed antichain: {exc}") from None
    raise InputError("antichain must be a list of integer lists or a block schema")


def cmd_grothendieck(args) -> Report:
    given = [args.family, args.antichain, args.epsilon]
    if not any(given):
        merged = Report("grothendieck", {"seed": args.seed})
        start = time.perf_counter()
        for sub in (campaigns.thinning_campaign(args.seed),
                    campaigns.grothendieck_campaign(args.seed)):
            merged.checks.extend(Check(f"{sub.campaign}/{c.id}", c.passed, c.detail)
                                 for c in sub.checks)
        merged.runtime = time.perf_counter() - start
        return merged
    if not all(given):
        raise InputError("--family, --antichain and --epsilon go together")
    fam = _parse_family(_load_json(args.family))
    ac = _parse_antichain(_load_json(args.antichain))
    eps = _parse_epsilon(args.epsilon)
    horizon = args.horizon if args.horizon is not None else fam.length
    if ac.length is not None:
        horizon = min(horizon, ac.length)
    horizon = min(horizon, fam.length)
    start = time.perf_counter()
    report = Report("grothendieck", {"family": [fam[n].to_json() for n in range(fam.length)],
                                     "epsilon": str(eps), "horizon": horizon})
    try:
        thin = rosenthal_thin(fam, ac, eps, horizon)
        _, alt = alternation_witness(fam, ac, eps, thin)
        report.checks.append(Check("thinning", True, {
            "selected": thin.selected,
            "cross_sums": {str(k): str(v) for k, v in sorted(thin.cross_sums.items())}}))
        report.checks.append(Check("alternation", True, alt.to_json()))
    except (ValueError, AssertionError) as exc:
        report.checks.append(Check("thinning", False,
                                   {"error": type(exc).__name__, "message": str(exc)}))
    report.runtime = time.perf_counter() - start
    return report


def cmd_ep_laws(args) -> Report:
    return campaigns.ep_laws(args.seed, args.triples, args.memberships, args.pairs)


def cmd_selftest(args) -> Report:
    return campaigns.selftest(args.seed)


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=campaigns.DEFAULT_SEED,
                        help="seed for randomized campaigns (default %(default)s)")
    common.add_argument("--human", action="store_true", help="print a table instead of JSON")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock time in the report")

    parser = argparse.ArgumentParser(prog="stoneforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("kernel-check", parents=[common],
                       help="decide a formula modulo the comparability ideal")
    p.add_argument("--dnf", metavar="FILE", help="formula as DNF list or term JSON; "
                   "without it, run the equivalence campaign")
    p.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    p.add_argument("--random-cases", type=int, default=10_000)
    p.set_defaults(run=cmd_kernel_check)

    p = sub.add_parser("star-sweep", parents=[common],
                       help="comparable pairs vanish, antichains survive")
    p.add_argument("--max-depth", type=int, default=4)
    p.add_argument("--max-size", type=int, default=4)
    p.set_defaults(run=cmd_star_sweep)

    p = sub.add_parser("independence", parents=[common],
                       help="witness points for Boolean combinations of branch joins")
    p.add_argument("--branches", metavar="FILE", help="JSON list of branches; "
                   "without it, run the independence campaign")
    p.add_argument("--split", metavar="I,J,...", help="0-based indices of the positive branches")
    p.add_argument("--all-splits", action="store_true")
    p.add_argument("--random-cases", type=int, default=200)
    p.set_defaults(run=cmd_independence)

    p = sub.add_parser("pair-demo", parents=[common],
                       help="pair-difference functionals and separation in the pair algebra")
    p.add_argument("--horizon", type=int, action="append",
                   help="check horizon (repeatable; default 10, 100, 1000)")
    p.add_argument("--corpus", type=int, default=1000)
    p.add_argument("--show-mu", action="store_true", help="append a table of mu_n values")
    p.set_defaults(run=cmd_pair_demo)

    p = sub.add_parser("grothendieck", parents=[common],
                       help="thinning, alternation and positive decompositions")
    p.add_argument("--family", metavar="FILE", help="JSON list of measures")
    p.add_argument("--antichain", metavar="FILE",
                   help="JSON list of disjoint finite sets, or a block schema")
    p.add_argument("--epsilon", metavar="P/Q")
    p.add_argument("--horizon", type=int)
    p.set_defaults(run=cmd_grothendieck)

    p = sub.add_parser("ep-laws", parents=[common],
                       help="Boolean laws and membership for eventually periodic sets")
    p.add_argument("--triples", type=int, default=10_000)
    p.add_argument("--memberships", type=int, default=100_000)
    p.add_argument("--pairs", type=int, default=10_000)
    p.set_defaults(run=cmd_ep_laws)

    p = sub.add_parser("selftest", parents=[common], help="run every campaign")
    p.set_defaults(run=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        report = args.run(args)
    except InputError as exc:
        print(f"stoneforge: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.human:
        print(report.table())
        if args.timings and report.runtime is not None:
            print(f"runtime: {report.runtime:.3f} s")
    else:
        print(report.dumps(args.timings))
    return EXIT_OK if report.passed else EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
