#!/usr/bin/env python3
"""Run the headline constructions end to end and print their verdicts.

Covers: torsion generators, a free pair, the recurrent-without-identity
set, subset-sum instances (solvable and not), equal-subset-sum instances
(free and not), and a DFA-intersection encoding.
"""

import time

from sl2z_semigroups.algebra import GeneratorSet, IDENTITY, S, SignedWord, evaluate
from sl2z_semigroups.decisions import (
    count_factorizations, finite_freeness, identity_in_semigroup, is_free,
    is_recurrent,
)
from sl2z_semigroups.encodings import (
    DfaSpec, encode_dfa_intersection, encode_equal_subset_sum,
    encode_subset_sum, marked_query_word, recurrent_without_identity_fixture,
)

F_A = evaluate(SignedWord(1, "srsr"))
F_B = evaluate(SignedWord(1, "srrsrr"))


def show(label, verdict):
    extra = ""
    if verdict.count is not None:
        extra += f"  count={verdict.count}"
    if verdict.witness and verdict.witness.get("sequences"):
        extra += f"  witness={verdict.witness['sequences']}"
    if verdict.depth_bound is not None:
        extra += f"  depth={verdict.depth_bound}"
    print(f"  {label:<34} {verdict.answer}{extra}")


def main():
    t0 = time.monotonic()

    print("torsion generator {S}")
    g = GeneratorSet.from_matrices([S])
    show("identity", identity_in_semigroup(g))
    show("free", is_free(g))
    show("count of -I", count_factorizations(g, -IDENTITY, cap=4))
    show("finitely free (depth 1)", finite_freeness(g, 1))

    print("free pair {f(a), f(b)}")
    g = GeneratorSet.from_matrices([F_A, F_B])
    show("identity", identity_in_semigroup(g))
    show("free", is_free(g))
    show("finitely free (depth 4)", finite_freeness(g, 4))

    print("recurrent matrix without identity")
    fx = recurrent_without_identity_fixture()
    show("identity", identity_in_semigroup(fx.generators))
    show("recurrent target", is_recurrent(fx.generators,
                                          fx.expected["recurrent_target"]))
    show("finitely free (depth 2)", finite_freeness(fx.generators, 2))

    for values, x in (([1, 2], 3), ([1, 2], 4)):
        print(f"subset sum U={values}, x={x}")
        fx = encode_subset_sum(values, x)
        show("identity", identity_in_semigroup(fx.generators))
        show("count of the 0.e.1' target",
             count_factorizations(fx.generators, fx.expected["count_target"],
                                  cap=4))

    for values in ([1, 2, 3], [1, 2, 4]):
        print(f"equal subset sum U={values}")
        fx = encode_equal_subset_sum(values)
        show("free", is_free(fx.generators))

    print("DFA intersection encoding (a*b accepted by the first DFA)")
    dfa = DfaSpec(2, ("a", "b"), ((0, "a", 0), (0, "b", 1)), frozenset({1}))
    fx = encode_dfa_intersection([dfa])
    from sl2z_semigroups.decisions import membership
    for w in (("a", "b"), ("b",), ("a", "a")):
        m = marked_query_word(fx, w)
        show(f"membership of #{''.join(w)}#", membership(fx.generators, m))

    print(f"total {time.monotonic() - t0:.1f}s")


if __name__ == "__main__":
    main()
