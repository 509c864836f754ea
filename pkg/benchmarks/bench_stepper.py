#!/usr/bin/env python3
"""Compare the compiled and pure-Python configuration steppers.

Workload: the union-language machine run over every word up to a given
length (both bit fixings), i.e. the inner loop of the exhaustive
classification path. Outputs per-backend wall time and words/second, and
verifies the two backends return identical results.

Usage: python benchmarks/bench_stepper.py [--max-len N]
"""

import argparse
import time
from array import array

from ctcsim import _stepper_py
from ctcsim.words import encode_corpus, word_count
from ctcsim.zoo import build_union_ijk_ctc_dpda

try:
    from ctcsim import _stepper
except ImportError:
    _stepper = None


def run(backend, spec, flat, offs):
    n = len(offs) - 1
    item = array("i").itemsize
    outs = []
    for bit in (0, 1):
        status = array("i", bytes(item * n))
        state = array("i", bytes(item * n))
        steps = array("i", bytes(item * n))
        backend.run_batch(spec._encoded, flat, offs, bit, 0, 10,
                          status, state, steps)
        outs.append((status, state))
    return outs


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-len", type=int, default=10)
    args = parser.parse_args()

    spec = build_union_ijk_ctc_dpda()
    flat, offs = encode_corpus("abc", args.max_len)
    n = word_count(3, args.max_len)
    print(f"machine: union-ijk ({len(spec.states)} states), "
          f"{n} words up to length {args.max_len}, two bit fixings each")

    results = {}
    backends = [("python", _stepper_py)]
    if _stepper is not None:
        backends.insert(0, ("cython", _stepper))
    else:
        print("compiled stepper not built; benchmarking the fallback only")
    for name, backend in backends:
        start = time.perf_counter()
        results[name] = run(backend, spec, flat, offs)
        elapsed = time.perf_counter() - start
        print(f"{name:>7}: {elapsed:8.3f}s  ({2 * n / elapsed:12.0f} runs/s)")

    if len(results) == 2:
        same = all(a[0].tolist() == b[0].tolist()
                   and a[1].tolist() == b[1].tolist()
                   for a, b in zip(results["cython"], results["python"]))
        print("backends agree:", same)
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
