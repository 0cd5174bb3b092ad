"""Cancellation automata and saturation.

Independent oracle: bounded path enumeration.  Every edge path of length up
to a bound is walked and its word reduced directly, giving the ground-truth
trivial-path relation to compare saturation against.
"""

import pytest

from sl2z_semigroups.algebra import (
    IDENTITY, R, S, GeneratorSet, SignedWord, evaluate, reduce,
)
from sl2z_semigroups.automata import (
    AutomatonError, WitnessError, build_loop_automaton,
    build_membership_automaton, build_pattern_automaton, decode_pattern_witness,
    epsilon_cycle, extract_path, extract_witness, saturate, trivial_path_exists,
)
from sl2z_semigroups.algebra import decompose

F_A = evaluate(SignedWord(1, "srsr"))
F_B = evaluate(SignedWord(1, "srrsrr"))


def brute_trivial_relation(auto, max_edges):
    """All (q, p, sigma) with a trivial path of <= max_edges edges.

    Breadth-first over (state, reduced word, sign) with dedup per step; a
    reduced word longer than the remaining budget can never cancel in time.
    """
    found = set()
    out_edges = {}
    for src, dst, label, weight in auto.edges:
        out_edges.setdefault(src, []).append((dst, label, weight))
    for start in range(auto.n_states):
        frontier = {(start, "", 1)}
        for step in range(max_edges):
            nxt = set()
            for (q, word, sign) in frontier:
                for (dst, label, weight) in out_edges.get(q, ()):
                    red = reduce(word + (label or ""), sign * weight)
                    if red.word == "":
                        found.add((start, dst, red.sign))
                    if len(red.word) <= max_edges - step - 1:
                        nxt.add((dst, red.word, red.sign))
            frontier = nxt
    return found


class TestLoopAutomaton:
    def test_single_letter_chain(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([S]))
        assert auto.n_states == 1
        assert auto.edges == [(0, 0, "s", 1)]

    def test_neg_identity_epsilon_edge(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([-IDENTITY]))
        assert auto.edges == [(0, 0, None, -1)]

    def test_chain_lengths(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([F_A, F_B]))
        assert len(auto.edges) == 4 + 6
        assert auto.n_states == 1 + 3 + 5

    def test_generator_sign_on_first_edge(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([-S]))
        assert auto.edges == [(0, 0, "s", -1)]


class TestSaturation:
    def test_s_loop_relation(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([S]))
        sat = saturate(auto)
        assert sat.triples == {(0, 0, -1), (0, 0, 1)}

    def test_free_generator_empty(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([F_A]))
        assert len(saturate(auto)) == 0

    def test_free_pair_loop_empty(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([F_A, F_B]))
        assert len(saturate(auto)) == 0

    @pytest.mark.parametrize("mats", [
        [S], [R], [-IDENTITY], [S, R], [S, -S], [S, R, -IDENTITY], [F_A],
    ])
    def test_matches_path_enumeration(self, mats):
        auto = build_loop_automaton(GeneratorSet.from_matrices(mats))
        sat = saturate(auto)
        brute = brute_trivial_relation(auto, 12)
        assert brute <= sat.triples
        # small automata: every triple also has a short witness
        assert sat.triples == brute

    def test_pattern_matches_path_enumeration(self):
        gens = GeneratorSet.from_matrices([S, R])
        auto = build_pattern_automaton(1, 2, gens)
        sat = saturate(auto)
        brute = brute_trivial_relation(auto, 12)
        assert brute <= sat.triples

    def test_soundness_every_triple_extracts(self):
        for mats in ([S], [S, R], [-IDENTITY, R]):
            auto = build_loop_automaton(GeneratorSet.from_matrices(mats))
            sat = saturate(auto)
            for (q, p, sigma) in sat.triples:
                path = extract_path(auto, sat, q, p, sigma)
                assert auto.path_value(path) == SignedWord(sigma, "")

    def test_monotone_under_new_generators(self):
        small = build_loop_automaton(GeneratorSet.from_matrices([S]))
        big = build_loop_automaton(GeneratorSet.from_matrices([S, R]))
        assert saturate(small).triples <= saturate(big).triples


class TestWitnesses:
    def test_s_identity_witness(self):
        gens = GeneratorSet.from_matrices([S])
        auto = build_loop_automaton(gens)
        sat = saturate(auto)
        assert extract_witness(auto, sat, 0, 0, 1, gens) == [1, 1, 1, 1]

    def test_neg_identity_witness(self):
        gens = GeneratorSet.from_matrices([-IDENTITY])
        auto = build_loop_automaton(gens)
        sat = saturate(auto)
        assert extract_witness(auto, sat, 0, 0, 1, gens) == [1, 1]

    def test_missing_triple_raises(self):
        gens = GeneratorSet.from_matrices([F_A])
        auto = build_loop_automaton(gens)
        sat = saturate(auto)
        with pytest.raises(WitnessError):
            extract_path(auto, sat, 0, 0, 1)


class TestPatternAutomaton:
    def test_rejects_equal_indices(self):
        gens = GeneratorSet.from_matrices([S, R])
        with pytest.raises(AutomatonError):
            build_pattern_automaton(1, 1, gens)

    def test_duplicate_generators_trivially_accepted(self):
        gens = GeneratorSet.from_matrices([S, S])
        auto = build_pattern_automaton(1, 2, gens)
        sat = saturate(auto)
        assert trivial_path_exists(auto, sat, auto.initial, auto.final, 1)
        path = extract_path(auto, sat, auto.initial, auto.final, 1)
        alpha, beta = decode_pattern_witness(auto, path, gens)
        assert (alpha, beta) == ([1], [2])

    def test_free_pair_has_no_collision_path(self):
        gens = GeneratorSet.from_matrices([F_A, F_B])
        auto = build_pattern_automaton(1, 2, gens)
        sat = saturate(auto)
        assert not trivial_path_exists(auto, sat, auto.initial, auto.final, 1)

    def test_decoded_pair_verifies(self):
        gens = GeneratorSet.from_matrices([S, R])
        auto = build_pattern_automaton(1, 2, gens)
        sat = saturate(auto)
        path = extract_path(auto, sat, auto.initial, auto.final, 1)
        alpha, beta = decode_pattern_witness(auto, path, gens)
        assert alpha != beta
        assert alpha[0] == 1 and beta[0] == 2
        assert gens.product(alpha) == gens.product(beta)


class TestMembershipAutomaton:
    def test_product_of_free_pair(self):
        gens = GeneratorSet.from_matrices([F_A, F_B])
        target = F_A * F_B
        auto = build_membership_automaton(gens, decompose(target))
        sat = saturate(auto)
        assert trivial_path_exists(auto, sat, auto.initial, auto.final, 1)
        assert extract_witness(auto, sat, auto.initial, auto.final, 1, gens) == [1, 2]

    def test_non_member(self):
        gens = GeneratorSet.from_matrices([F_A, F_B])
        auto = build_membership_automaton(gens, decompose(S))
        sat = saturate(auto)
        assert not trivial_path_exists(auto, sat, auto.initial, auto.final, 1)

    def test_rejects_identity_target(self):
        gens = GeneratorSet.from_matrices([S])
        with pytest.raises(AutomatonError):
            build_membership_automaton(gens, SignedWord(1, ""))


class TestRecurrentFixtureAutomaton:
    def test_relation_nonempty_but_acyclic(self):
        # partial cancellations bridge states, yet no trivial cycle exists
        # (the semigroup has no +-I element)
        from sl2z_semigroups.encodings import recurrent_without_identity_fixture
        fx = recurrent_without_identity_fixture()
        auto = build_loop_automaton(fx.generators)
        sat = saturate(auto)
        assert len(sat) > 0
        assert epsilon_cycle(auto, sat) is None
        assert all(q != p for (q, p, _) in sat.triples)
        # soundness spot-check on a slice of the relation
        for triple in sorted(sat.triples)[:25]:
            path = extract_path(auto, sat, *triple)
            assert auto.path_value(path) == SignedWord(triple[2], "")


class TestEpsilonCycle:
    def test_s_has_cycle(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([S]))
        sat = saturate(auto)
        state, sign, cyc = epsilon_cycle(auto, sat)
        assert state == 0 and sign == -1 and cyc == [0, 0]

    def test_free_pair_has_none(self):
        auto = build_loop_automaton(GeneratorSet.from_matrices([F_A, F_B]))
        assert epsilon_cycle(auto, saturate(auto)) is None

    @pytest.mark.parametrize("mats", [
        [S], [R], [-IDENTITY], [F_A], [F_A, F_B], [S, R],
    ])
    def test_cycle_iff_plus_minus_identity_at_hub(self, mats):
        auto = build_loop_automaton(GeneratorSet.from_matrices(mats))
        sat = saturate(auto)
        has_cycle = epsilon_cycle(auto, sat) is not None
        at_hub = (trivial_path_exists(auto, sat, 0, 0, 1)
                  or trivial_path_exists(auto, sat, 0, 0, -1))
        assert has_cycle == at_hub
