"""Compare the compiled and NumPy profile-histogram backends.

    python3 benchmarks/bench_counting.py --case E7a5 --primes 5,7,11 --repeat 3

Both backends must produce identical histograms; the script exits 1 otherwise.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from e7paving.counting import compute_histogram
from e7paving.counting.engine import _kernel


def bench(case: str, q: int, backend: str, repeat: int, jobs: int) -> tuple[float, np.ndarray]:
    best, hist = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        hist = compute_histogram(case, q, backend, jobs=jobs)
        best = min(best, time.perf_counter() - t0)
    return best, hist


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--case", default="E7a4", choices=("E7a4", "E7a5"))
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["compiled"] if _kernel is not None else [])
    rows, ok = [], True
    for q in (int(x) for x in args.primes.split(",")):
        times, hists = {}, {}
        for b in backends:
            times[b], hists[b] = bench(args.case, q, b, args.repeat, args.jobs)
        same = all(np.array_equal(hists[backends[0]], h) for h in hists.values())
        ok &= same
        rows.append({"q": q, "points": int(hists[backends[0]].sum()), "seconds": times, "identical": same})

    if args.json:
        print(json.dumps({"case": args.case, "rows": rows}, indent=2))
    else:
        if _kernel is None:
            print("compiled kernel not built; timing the NumPy backend only")
        print(f"{'q':>3} {'points':>12} " + " ".join(f"{b:>10}" for b in backends) + "  speedup  identical")
        for r in rows:
            t = r["seconds"]
            speed = f"{t['numpy'] / t['compiled']:7.1f}x" if "compiled" in t else "      -"
            print(f"{r['q']:>3} {r['points']:>12} " + " ".join(f"{t[b]:>9.3f}s" for b in backends)
                  + f"  {speed}  {r['identical']}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
