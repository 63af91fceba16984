"""Time the compiled and pure-Python pair scanners on the same sweeps.

    python benchmarks/bench_kernel.py [--repeat 3] [--quick]
"""
import argparse
import time

from rsumset import kernel
from rsumset.verify import SweepSpec, build_universe
from rsumset.verify.sweep import _merge, _run_chunk, kernel_params

CASES = [
    ("T4, Z window 10", SweepSpec("T4", window=10)),
    ("LEMMAS, Z window 10", SweepSpec("LEMMAS", window=10)),
    ("T5, p = 13", SweepSpec("T5", prime=13)),
    ("KAROLYI, p = 11", SweepSpec("KAROLYI", prime=11)),
    ("KAROLYI, p = 13", SweepSpec("KAROLYI", prime=13)),
]


def time_scan(scan, uni, params, chunks, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = _merge([_run_chunk(rows, uni, params, scan=scan) for rows in chunks])
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the p = 13 Karolyi sweep")
    args = ap.parse_args()

    compiled = kernel.compiled_scan_rows()
    if compiled is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'sweep':<22}{'pairs':>10}{'cython s':>11}{'python s':>11}{'speedup':>9}")
    for label, spec in CASES:
        if args.quick and spec.prime == 13 and spec.theorem == "KAROLYI":
            continue
        spec = spec.validate()
        uni = build_universe(spec)
        params = kernel_params(spec)
        chunks = uni.chunks()
        slow, ref = time_scan(kernel.python_scan_rows, uni, params, chunks, 1)
        pairs = ref[0][0]
        if compiled is None:
            print(f"{label:<22}{pairs:>10}{'-':>11}{slow:>11.3f}{'-':>9}")
            continue
        fast, got = time_scan(compiled, uni, params, chunks, args.repeat)
        assert got == ref, f"backends disagree on {label}"
        print(f"{label:<22}{pairs:>10}{fast:>11.3f}{slow:>11.3f}{slow / fast:>8.0f}x")


if __name__ == "__main__":
    main()
