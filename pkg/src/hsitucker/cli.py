"""Command-line entry point: ``hsitucker {compress,decompress,info,benchmark}``.

Exit status is 0 on success, 1 on runtime or I/O failure and 2 on usage
errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import container
from .bench import format_tables, parse_dataset, run_benchmark
from .codec import MAX_BPPPB, compress, decompress, snr
from .errors import HsiTuckerError
from .hooi import ConvergenceConfig
from .hsi_io import band_correlation, load_cube, save_native
from .initializers import InitStrategy, STRATEGY_KINDS

log = logging.getLogger("hsitucker")


def _bpppb(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= MAX_BPPPB:
        raise argparse.ArgumentTypeError(f"bpppb must lie in (0, {MAX_BPPPB:g}], got {value:g}")
    return value


def _positive(conv):
    def parse(text):
        try:
            value = conv(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return parse


def _bits(text):
    value = int(text)
    if not container.MIN_BITS <= value <= container.MAX_BITS:
        raise argparse.ArgumentTypeError(f"bits must lie in [{container.MIN_BITS}, {container.MAX_BITS}]")
    return value


def _add_convergence(p):
    p.add_argument("--tol", type=_positive(float), default=1e-6, help="fitness-difference threshold")
    p.add_argument("--max-iters", type=_positive(int), default=50)
    p.add_argument("--seed", type=int, default=0, help="seed of the random initializer")


def build_parser():
    parser = argparse.ArgumentParser(prog="hsitucker", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compress", help="compress a cube into a THC1 file")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--header", type=Path, help="ENVI header of a raw input cube")
    p.add_argument("--bpppb", required=True, type=_bpppb, help="target bits per pixel per band")
    p.add_argument("--init", choices=STRATEGY_KINDS, default="correlation")
    p.add_argument("--factor-bits", type=_bits, default=16)
    p.add_argument("--core-bits", type=_bits, default=16)
    p.add_argument("--output", required=True, type=Path)
    _add_convergence(p)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="decode a THC1 file into a native cube")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--reference", type=Path, help="original cube; report the SNR against it")
    p.add_argument("--reference-header", type=Path)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("info", help="describe a THC1 file or a cube")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--header", type=Path)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("benchmark", help="compare the three initializers on one cube")
    p.add_argument("--dataset", required=True, help="cube file or synth:I1xI2xI3[,rank=..,corr=..,noise=..,seed=..]")
    p.add_argument("--header", type=Path)
    p.add_argument("--ranks", default="half", help="'half' or r1,r2,r3")
    p.add_argument("--repeats", type=int, default=100, help="runs per factor timing")
    p.add_argument("--csv", type=Path)
    p.add_argument("--json", type=Path)
    p.add_argument("--table", action="store_true", help="print the comparison tables")
    p.add_argument("--dash-random-init", action="store_true", help="print '-' for the random init time")
    _add_convergence(p)
    p.set_defaults(func=cmd_benchmark)
    return parser


def _emit(record):
    print(json.dumps(record, sort_keys=True))


def cmd_compress(args):
    x = load_cube(args.input, args.header)
    cfg = ConvergenceConfig(args.tol, args.max_iters)
    strategy = InitStrategy.coerce(args.init, args.seed)
    cube, trace = compress(x, args.bpppb, strategy, cfg, args.factor_bits, args.core_bits, return_trace=True)
    data = container.encode(cube)
    args.output.write_bytes(data)
    # SNR of exactly what a reader will decode
    restored = decompress(container.decode(data))
    _emit(
        {
            "input": str(args.input),
            "output": str(args.output),
            "dims": list(cube.dims),
            "ranks": list(cube.ranks),
            "init": args.init,
            "bpppb_target": args.bpppb,
            "bpppb": 8 * len(data) / float(np.prod(cube.dims)),
            "bytes": len(data),
            "iterations": trace.iterations,
            "converged": trace.converged,
            "fitness": trace.final_fitness,
            "snr_db": snr(x, restored),
        }
    )
    return 0


def cmd_decompress(args):
    data = args.input.read_bytes()
    x = decompress(container.decode(data))
    save_native(args.output, x)
    record = {"input": str(args.input), "output": str(args.output), "dims": list(x.shape)}
    if args.reference is not None:
        record["snr_db"] = snr(load_cube(args.reference, args.reference_header), x)
    _emit(record)
    return 0


def _correlation_summary(x):
    if x.shape[2] < 2:
        return None
    corr = band_correlation(x)
    return {
        "mean": float(corr.mean()),
        "min": float(corr.min()),
        "max": float(corr.max()),
        "excluded_bands": int(np.ma.count_masked(corr)),
    }


def cmd_info(args):
    data = args.input.read_bytes()
    if data[:4] == container.MAGIC:
        cube = container.decode(data)
        x = decompress(cube)
        record = {
            "format": "THC1",
            "dims": list(cube.dims),
            "ranks": list(cube.ranks),
            "factor_bits": cube.factor_bits,
            "core_bits": cube.core_bits,
            "bytes": len(data),
            "bpppb": 8 * len(data) / float(np.prod(cube.dims)),
        }
    else:
        x = load_cube(args.input, args.header)
        record = {"format": "cube", "dims": list(x.shape)}
    record["band_correlation"] = _correlation_summary(x)
    _emit(record)
    return 0


def cmd_benchmark(args):
    x = parse_dataset(args.dataset, args.header)
    cfg = ConvergenceConfig(args.tol, args.max_iters)
    report = run_benchmark(x, args.ranks, cfg, repeats=args.repeats, seed=args.seed, dataset=args.dataset)
    if args.csv:
        args.csv.write_text(report.to_csv())
    if args.json:
        args.json.write_text(report.to_json())
    if args.table:
        print(format_tables(report, dash_random_init=args.dash_random_init))
    elif not args.json:
        print(report.to_json())
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (HsiTuckerError, ValueError, OSError) as exc:
        print(f"hsitucker {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
