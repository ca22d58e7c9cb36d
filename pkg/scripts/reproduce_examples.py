"""Recompute the worked examples shipped in corpus/ and print their counts."""

import argparse
import time
from pathlib import Path

from countdiff.counting_ring import decide_sequences
from countdiff.diffcount import (
    SimpleDifferentialSystem,
    counting_sequence_simple,
    crosscheck_truncation,
    stratified_counting,
)
from countdiff.textio import load
from countdiff.thomas import count_constructible

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def closed(name, crosscheck):
    system = load(CORPUS / name).build()
    S = SimpleDifferentialSystem.certify(system)
    seq = counting_sequence_simple(S, system.point).render().replace("\n", "\n  ")
    print(f"{name} [{S.passivity}]:\n  {seq}")
    if crosscheck:
        report = crosscheck_truncation(S, system.point, crosscheck)
        for k, _, got in report.rows:
            print(f"  truncated at l = {k}: {got.render()}")
        print(f"  truncations agree: {report.ok}")


def strata(name):
    m = load(CORPUS / name)
    seq = stratified_counting(m.strata(m.point), degree=m.degree or 1)
    print(f"{name}:\n  " + seq.render().replace("\n", "\n  "))
    return seq


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--crosscheck", type=int, default=3, help="highest truncation order")
    args = ap.parse_args()
    start = time.perf_counter()
    for name in ("split3.sys", "xy.sys", "parabola.sys"):
        print(f"{name}: {count_constructible(load(CORPUS / name)).render()}")
    for name in ("heat.dsys", "wave.dsys", "u1sq.dsys", "navier_stokes.dsys"):
        closed(name, args.crosscheck)
    hard_t, hard_s = strata("hard_T.mf"), strata("hard_S.mf")
    print(f"hard T vs S: {decide_sequences(hard_t, hard_s, K=2)}")
    better_t, better_s = strata("better_T.mf"), strata("better_S.mf")
    print(f"better T vs S: {decide_sequences(better_t, better_s)}")
    print(f"elapsed: {time.perf_counter() - start:.2f} s")


if __name__ == "__main__":
    main()
