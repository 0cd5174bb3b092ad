#!/usr/bin/env python3
"""Stress the decision procedures against brute force on random inputs.

Draws random generator sets (reduced words up to --max-len, up to --gens
generators), runs freeness / membership / counting, and compares with the
exhaustive product table wherever the table is conclusive.
"""

import argparse
import random
import time

from sl2z_semigroups.algebra import GeneratorSet, SignedWord
from sl2z_semigroups import oracle
from sl2z_semigroups.decisions import NO, YES, count_factorizations, is_free, membership


def random_generator_set(rng, max_gens, max_len):
    words = []
    for _ in range(rng.randint(1, max_gens)):
        length = rng.randint(0, max_len)
        w = ""
        while len(w) < length:
            ch = rng.choice("sr")
            if (w + ch).endswith("ss") or (w + ch).endswith("rrr"):
                continue
            w += ch
        words.append(SignedWord(rng.choice((1, -1)), w))
    return GeneratorSet.from_words(words)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--gens", type=int, default=3)
    ap.add_argument("--max-len", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    t0 = time.monotonic()
    stats = {"free": 0, "not_free": 0, "checked_counts": 0}
    for trial in range(args.trials):
        gens = random_generator_set(rng, args.gens, args.max_len)
        if oracle.max_exhaustive_depth(len(gens)) < args.depth:
            continue
        table = oracle.enumerate_products(gens, args.depth)
        collision = oracle.find_collision(gens, args.depth)
        verdict = is_free(gens)
        stats["free" if verdict.answer == YES else "not_free"] += 1
        if collision is not None and verdict.answer != NO:
            raise SystemExit(f"trial {trial}: oracle found {collision} but "
                             f"freeness said {verdict.answer}")
        if verdict.answer == YES and collision is not None:
            raise SystemExit(f"trial {trial}: free verdict contradicted")
        mats = table.matrices()
        for m in mats[:3]:
            if membership(gens, m).answer != YES:
                raise SystemExit(f"trial {trial}: member of table rejected")
        m = mats[0]
        counted = count_factorizations(gens, m, cap=5)
        if counted.count.kind == "exact":
            stats["checked_counts"] += 1
            if table.count(m) > counted.count.value:
                raise SystemExit(f"trial {trial}: count too small for {m}")
    print(f"{args.trials} trials in {time.monotonic() - t0:.1f}s: {stats}")


if __name__ == "__main__":
    main()
