"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--repeat N] [--depth D]
"""

import argparse
import random
import statistics
import time

from stoneforge import _kernels
from stoneforge.tree import NodeIndex, all_nodes


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times)


def workloads(depth, seed):
    index = NodeIndex(all_nodes(depth))
    k = len(index)
    rng = random.Random(seed)
    small = NodeIndex(all_nodes(3))
    queries = [(rng.getrandbits(15), rng.getrandbits(15)) for _ in range(20_000)]
    models = []
    for _ in range(300):
        n = rng.randint(1, 3)
        models.append(([rng.getrandbits(12) for _ in range(n)], [rng.getrandbits(12) for _ in range(n)]))
    comp12 = NodeIndex(rng.sample(all_nodes(4), 12)).comp

    def table(b):
        return lambda: b.decide_all_conjuncts(index.comp, k)

    def oracle(b):
        return lambda: b.oracle_all_conjuncts(index.comp, k)

    def singles(b):
        return lambda: [b.conjunct_nonzero(small.comp, p & ~q, q) for p, q in queries]

    def first(b):
        return lambda: [b.first_model(comp12, 12, pos, neg) for pos, neg in models]

    return {
        f"decide_all_conjuncts (3^{k})": table,
        f"oracle_all_conjuncts (2^{k} points)": oracle,
        "conjunct_nonzero x 20000": singles,
        "first_model x 300 (12 nodes)": first,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--depth", type=int, default=3, help="node depth for the table sweeps")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = {name: _kernels.load_backend(name) for name in _kernels.available_backends()}
    print(f"backends: {', '.join(backends)} (active: {_kernels.BACKEND})")
    print(f"{'workload':38} " + " ".join(f"{name:>12}" for name in backends) + "     speedup")
    for label, make in workloads(args.depth, args.seed).items():
        results = {name: best_of(make(b), args.repeat)[0] for name, b in backends.items()}
        row = f"{label:38} " + " ".join(f"{results[n]:11.4f}s" for n in backends)
        if "compiled" in results:
            row += f"  {results['python'] / results['compiled']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
