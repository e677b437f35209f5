"""Throughput of the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--trials N] [--repeat R]

Both backends run the same trials and must return identical accumulators;
the table reports trials per second and the speedup.
"""

from __future__ import annotations

import argparse
import time

from becfeedback import _runner
from becfeedback.channel import derive_key

CASES = [
    ("huffman-repeat M=8 d=0.5", "huffman_repeat", (8, 0.0, 0.5, 100_000)),
    ("q-channel M=32 d=0.5", "q_channel", (32, 0.5, 100_000)),
    ("vlsf iid M=64 d=0.5", "vlsf", (0, 64, 0.0, 0.5, 100_000)),
    ("vlsf balanced M=64 d=0.5", "vlsf", (1, 64, 0.0, 0.5, 100_000)),
    ("vlsf linear k=3 d=0.5", "vlsf", (2, 8, 0.0, 0.5, 100_000)),
    ("vlsf linear k=20 d=0.5", "vlsf", (2, 1 << 20, 0.0, 0.5, 100_000)),
    ("sprt m=3 under Q", "sprt", (3, (0.0, 1.0, 1.0, 1.0), 1, 0.5, 100_000)),
]


def best_time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if not _runner.COMPILED:
        raise SystemExit("compiled extension not available; build it with pip install -e .")
    key = derive_key(1, 1)
    print(f"{'case':28s} {'python/s':>12s} {'compiled/s':>12s} {'speedup':>8s}")
    for label, name, kargs in CASES:
        results = {}
        rates = {}
        for backend in ("python", "compiled"):
            fn = getattr(_runner.kernels(backend), name)
            results[backend] = fn(key, 0, args.trials, *kargs)
            elapsed = best_time(lambda: fn(key, 0, args.trials, *kargs), args.repeat)
            rates[backend] = args.trials / elapsed
        assert results["python"] == results["compiled"], f"backends disagree on {label}"
        print(f"{label:28s} {rates['python']:12.0f} {rates['compiled']:12.0f} "
              f"{rates['compiled'] / rates['python']:7.0f}x")


if __name__ == "__main__":
    main()
