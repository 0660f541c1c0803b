"""Time the numba and numpy training backends against each other.

Trains the same model with every available backend and reports wall time
plus the resulting speedup. Results are asserted identical before timing
is reported, so the benchmark doubles as an equivalence check.

Usage:
    python benchmarks/bench_backends.py
    python benchmarks/bench_backends.py --vocab-size 5000 --domain utf8 --repeat 5
"""

import argparse
import time
from pathlib import Path

from bytebpe import ByteDomain, train
from bytebpe.kernels import available_backends

DATA = Path(__file__).resolve().parent.parent / "data" / "mini"


def load_corpus(paths):
    lines = []
    for path in paths:
        lines += Path(path).read_text(encoding="utf-8").splitlines()
    return lines


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--vocab-size", type=int, default=3000)
    parser.add_argument("--domain", choices=["utf8", "utf16le"], default="utf16le")
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--corpus", nargs="*", default=None,
                        help="corpus files (default: the bundled trilingual set)")
    args = parser.parse_args()

    paths = args.corpus or sorted(DATA.glob("*.txt"))
    corpus = load_corpus(paths)
    domain = ByteDomain(args.domain)
    backends = available_backends()
    print(f"corpus: {len(corpus)} lines from {len(paths)} file(s); "
          f"vocab {args.vocab_size}, domain {domain.value}")
    if "numba" not in backends:
        print("note: numba not installed, timing the numpy fallback only")

    dumps = {}
    timings = {}
    for backend in backends:
        # warm up once: numba pays JIT compilation here, caches thereafter
        dumps[backend] = train(corpus, args.vocab_size, domain, backend=backend).dumps()
        best = min(
            _timed(lambda: train(corpus, args.vocab_size, domain, backend=backend))
            for _ in range(args.repeat)
        )
        timings[backend] = best
        print(f"  {backend:>6}: {best:8.3f}s   (best of {args.repeat})")

    if len(set(dumps.values())) != 1:
        raise SystemExit("backends produced different models; timing is meaningless")
    if len(backends) == 2:
        print(f"numba speedup over numpy: {timings['numpy'] / timings['numba']:.2f}x")


def _timed(fn):
    started = time.perf_counter()
    fn()
    return time.perf_counter() - started


if __name__ == "__main__":
    main()
