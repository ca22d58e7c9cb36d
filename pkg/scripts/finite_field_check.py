"""Compare counting polynomials with exhaustive point counts over small prime fields."""

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from split_systems import brute_force_count, split_corpus  # noqa: E402

from countdiff.thomas import decompose, verify_over_prime_field  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=20240501)
    args = ap.parse_args()
    start = time.perf_counter()
    bad = 0
    for i, (S, p) in enumerate(split_corpus(args.count, args.seed)):
        D = decompose(S)
        got = D.counting_polynomial()
        want = brute_force_count(S, p)
        report = verify_over_prime_field(D, p)
        ok = got.evaluate(p) == want and report.partition_ok
        bad += not ok
        if not ok:
            print(f"system {i} over F_{p}: count {got.render()} -> {got.evaluate(p)}, "
                  f"exhaustive {want}, partition ok {report.partition_ok}")
    print(f"{args.count - bad}/{args.count} systems agree "
          f"({time.perf_counter() - start:.2f} s)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
