"""SNR against bitrate for the three initializers on one cube.

    python3 scripts/rate_distortion.py --dims 64x64x40 --rates 0.1 0.2 0.3 0.4
"""

import argparse

from hsitucker import container
from hsitucker.bench import parse_dataset
from hsitucker.codec import compress, decompress, snr


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dataset", help="cube file; defaults to a synthetic cube of --dims")
    parser.add_argument("--dims", default="64x64x40")
    parser.add_argument("--rates", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.4])
    parser.add_argument("--init", nargs="+", default=["random", "svd", "correlation"])
    args = parser.parse_args()

    x = parse_dataset(args.dataset or f"synth:{args.dims}")
    print(f"{'init':<12} {'target':>7} {'ranks':>15} {'achieved':>9} {'SNR dB':>8} {'iters':>6}")
    for init in args.init:
        for rate in args.rates:
            cube, trace = compress(x, rate, init, return_trace=True)
            data = container.encode(cube)
            value = snr(x, decompress(container.decode(data)))
            achieved = 8 * len(data) / x.size
            print(f"{init:<12} {rate:>7.3f} {str(cube.ranks):>15} {achieved:>9.4f} {value:>8.2f} {trace.iterations:>6}")


if __name__ == "__main__":
    main()
