"""Initializer comparison tables on a synthetic (or supplied) cube, plus a seed sweep.

    python3 scripts/reproduce_tables.py --dims 64x64x40 --seeds 10
    python3 scripts/reproduce_tables.py --dataset path/to/indian_pines.img --seeds 0
"""

import argparse
import json
from collections import Counter

from hsitucker.bench import format_tables, parse_dataset, run_benchmark
from hsitucker.hooi import ConvergenceConfig


def ordering_sweep(dims, seeds, cfg, corr, noise):
    """How often the iteration and first-sweep orderings hold across seeds."""
    tally = Counter()
    for seed in range(seeds):
        x = parse_dataset(f"synth:{dims},corr={corr},noise={noise},seed={seed}")
        report = run_benchmark(x, "half", cfg, repeats=0)
        it = {r.strategy: r.iterations for r in report.rows}
        first = {r.strategy: r.fitness_differences[0] for r in report.rows}
        tally["random_most_iterations"] += it["random"] > max(it["svd"], it["correlation"])
        tally["svd<=corr<=random_first_sweep"] += first["svd"] <= first["correlation"] <= first["random"]
        tally["runs"] += 1
    return dict(tally)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dataset", help="cube file; defaults to a synthetic cube of --dims")
    parser.add_argument("--dims", default="64x64x40")
    parser.add_argument("--corr", type=float, default=0.99)
    parser.add_argument("--noise", type=float, default=0.01)
    parser.add_argument("--repeats", type=int, default=100)
    parser.add_argument("--seeds", type=int, default=10, help="synthetic seeds for the ordering sweep (0 to skip)")
    parser.add_argument("--tol", type=float, default=1e-6)
    args = parser.parse_args()

    cfg = ConvergenceConfig(tol=args.tol)
    name = args.dataset or f"synth:{args.dims},corr={args.corr},noise={args.noise}"
    report = run_benchmark(parse_dataset(name), "half", cfg, repeats=args.repeats, dataset=name)
    print(format_tables(report, dash_random_init=True))
    if args.seeds and not args.dataset:
        print()
        print(json.dumps(ordering_sweep(args.dims, args.seeds, cfg, args.corr, args.noise), indent=2))


if __name__ == "__main__":
    main()
