"""Time the numba kernels against the numpy fallbacks and print a CSV table.

    python benchmarks/bench_backends.py [--census-x N] [--threads T]
"""
import argparse
import csv
import sys

from uqfrank import bench


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--census-x", type=int, default=200_000)
    p.add_argument("--expsum-x", type=int, default=100_000)
    p.add_argument("--threads", type=int, default=1)
    args = p.parse_args()
    rows = bench.run(census_x=args.census_x, expsum_x=args.expsum_x, threads=args.threads)
    w = csv.DictWriter(sys.stdout, fieldnames=bench.FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
