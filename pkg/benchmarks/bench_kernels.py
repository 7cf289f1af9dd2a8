"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --tokens 2000000 --repeat 3
"""

import argparse
import time

import numpy as np

from lexbias import kernels
from lexbias.diversity import new_mtld_state
from lexbias.synthetic import generate_pair


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tokens", type=int, default=2_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    pair = generate_pair(n_sentences=max(1, args.tokens // 28), n_concepts=20000, seed=args.seed)
    c = pair.ht
    n_types = len(c.types)
    rng = np.random.default_rng(args.seed)
    order = rng.integers(0, len(c), size=len(c), dtype=np.int64)
    print(f"{c.token_count} tokens, {len(c)} sentences, {n_types} types")

    results = {}
    for name in sorted(kernels.BACKENDS):
        with kernels.use_backend(name):
            def scan():
                stamp, state = new_mtld_state(n_types)
                kernels.mtld_scan(c.ids, stamp, state, 0.72)

            def scan_resampled():
                stamp, state = new_mtld_state(n_types)
                kernels.mtld_scan_sentences(c.ids, c.offsets, order, True, stamp, state, 0.72)

            def spectrum():
                kernels.resample_spectrum(c.ids, c.offsets, order, np.zeros(n_types, dtype=np.int64))

            results[name] = {
                "mtld_scan": best_of(scan, args.repeat),
                "mtld_scan_sentences": best_of(scan_resampled, args.repeat),
                "resample_spectrum": best_of(spectrum, args.repeat),
            }

    kernels_ = list(next(iter(results.values())))
    print(f"{'kernel':24}" + "".join(f"{b:>12}" for b in results) + ("     speedup" if len(results) > 1 else ""))
    for k in kernels_:
        row = f"{k:24}" + "".join(f"{results[b][k]:11.3f}s" for b in results)
        if "cython" in results and "python" in results:
            row += f"{results['python'][k] / results['cython'][k]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
