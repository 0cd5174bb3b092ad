"""Cancellation automata over {s,r} and their signed epsilon-saturation.

An automaton edge carries a label in {s, r, eps} and a weight in {+1,-1};
the value of a path is the product of weight * phi(label) over its edges.
Saturation computes every triple (q, p, sigma) such that some nonempty path
q -> p has value sigma * I, i.e. its letter word reduces to the empty word
with accumulated sign sigma.  Derivations are recorded so any triple can be
expanded back into a concrete edge path (and hence a generator sequence).
"""

from collections import deque
from dataclasses import dataclass

from .algebra import GeneratorSet, SignedWord, evaluate, inv, mul, reduce


class AutomatonError(ValueError):
    pass


class WitnessError(RuntimeError):
    """A requested witness does not exist or failed re-verification."""


# chain tag kinds; decode logic keys off these.  A chain of length 0 (its
# generator reduces to +-I) is a single base epsilon edge with the same kind.
LOOP = "loop"            # full generator chain hub -> hub
ENTRY = "entry"          # pattern automaton: initial -> A spelling w_i
FWD_LOOP = "fwd_loop"    # pattern automaton: loops at A
BRIDGE_INV = "bridge_inv"  # pattern automaton: A -> B spelling inv(w_g)
INV_LOOP = "inv_loop"    # pattern automaton: loops at B
EXIT_INV = "exit_inv"    # pattern automaton: A/B -> final spelling inv(w_j)
TARGET_INV = "target_inv"  # membership automaton: hub -> final


@dataclass(frozen=True)
class ChainTag:
    kind: str
    gen: int        # 1-based generator index, 0 when not generator-bound
    pos: int
    length: int


class CancellationAutomaton:
    """Finite automaton over {s,r} with sign-weighted base epsilon edges.

    States are ints.  Immutable once built (builders below do all mutation).
    """

    def __init__(self, kind: str):
        self.kind = kind
        self.n_states = 0
        self.initial = None
        self.final = None
        self.edges = []       # (src, dst, label in 'sr' or None, weight)
        self.tags = []        # ChainTag per edge

    # -- construction helpers -------------------------------------------------

    def _new_state(self) -> int:
        s = self.n_states
        self.n_states += 1
        return s

    def _add_edge(self, src, dst, label, weight, tag) -> int:
        self.edges.append((src, dst, label, weight))
        self.tags.append(tag)
        return len(self.edges) - 1

    def _add_chain(self, src, dst, word: SignedWord, kind: str, gen: int):
        """Simple path src -> dst spelling word, its sign on the first edge.

        An empty word becomes a base epsilon edge carrying the sign.
        """
        letters = word.word
        if not letters:
            self._add_edge(src, dst, None, word.sign, ChainTag(kind, gen, 0, 0))
            return
        n = len(letters)
        prev = src
        for pos, ch in enumerate(letters):
            nxt = dst if pos == n - 1 else self._new_state()
            w = word.sign if pos == 0 else 1
            self._add_edge(prev, nxt, ch, w, ChainTag(kind, gen, pos, n))
            prev = nxt

    # -- views -----------------------------------------------------------------

    def path_value(self, edge_ids) -> SignedWord:
        """Reduced signed word spelled by an edge path."""
        sign = 1
        letters = []
        for e in edge_ids:
            src, dst, label, weight = self.edges[e]
            sign *= weight
            if label is not None:
                letters.append(label)
        return reduce("".join(letters), sign)

    def __repr__(self):
        return (f"CancellationAutomaton({self.kind}, {self.n_states} states, "
                f"{len(self.edges)} edges)")


def build_loop_automaton(gens: GeneratorSet) -> CancellationAutomaton:
    """Hub state with one cycle per generator spelling its reduced word.

    Closed paths at the hub are in bijection with nonempty generator index
    sequences, so (hub, hub, sigma) in the saturation relation says exactly
    that sigma * I is a nonempty product of generators.
    """
    auto = CancellationAutomaton("loop")
    hub = auto._new_state()
    auto.initial = auto.final = hub
    for i, g in enumerate(gens, start=1):
        auto._add_chain(hub, hub, g.word, LOOP, i)
    return auto


def build_pattern_automaton(i: int, j: int, gens: GeneratorSet) -> CancellationAutomaton:
    """Accepts the values of M_i u v^-1 M_j^-1 for u, v in G* (1-based i != j).

    initial --w_i--> A; loops at A spell every w_g; chains A -> B and loops
    at B spell every inv(w_g); A -> final and B -> final spell inv(w_j).
    A positively-signed trivial path initial -> final therefore witnesses
    M_i u = M_j v, two factorizations starting with different generators.
    """
    if i == j:
        raise AutomatonError("pattern automaton needs two distinct indices")
    n = len(gens)
    if not (1 <= i <= n and 1 <= j <= n):
        raise AutomatonError(f"indices out of range: ({i}, {j}) with {n} generators")
    auto = CancellationAutomaton("pattern")
    initial = auto._new_state()
    a = auto._new_state()
    b = auto._new_state()
    final = auto._new_state()
    auto.initial, auto.final = initial, final
    auto._add_chain(initial, a, gens.word(i), ENTRY, i)
    for g in range(1, n + 1):
        auto._add_chain(a, a, gens.word(g), FWD_LOOP, g)
    for g in range(1, n + 1):
        w = inv(gens.word(g))
        auto._add_chain(a, b, w, BRIDGE_INV, g)
        auto._add_chain(b, b, w, INV_LOOP, g)
    exit_word = inv(gens.word(j))
    auto._add_chain(a, final, exit_word, EXIT_INV, j)
    auto._add_chain(b, final, exit_word, EXIT_INV, j)
    return auto


def build_membership_automaton(gens: GeneratorSet, target_word: SignedWord) -> CancellationAutomaton:
    """Loop automaton plus a chain spelling inv(target) from hub to final.

    Only valid for targets other than +-I: the inverse chain is nonempty and
    reduced, so a trivial path hub -> final must traverse at least one
    generator loop.  (+-I queries stay on the loop automaton itself.)
    """
    w = inv(target_word)
    if not w.word:
        raise AutomatonError("membership chain for +-I is degenerate; "
                             "query the loop automaton instead")
    auto = CancellationAutomaton("membership")
    hub = auto._new_state()
    auto.initial = hub
    for i, g in enumerate(gens, start=1):
        auto._add_chain(hub, hub, g.word, LOOP, i)
    final = auto._new_state()
    auto.final = final
    auto._add_chain(hub, final, w, TARGET_INV, 0)
    return auto


class SaturationRelation:
    """All triples (q, p, sigma) with a nonempty trivial path q -> p.

    `parents` records one derivation per triple for witness extraction:
      ("eps", edge)                           base epsilon edge
      ("ss", e1, gap, e2)                     s (gap) s cancellation
      ("rrr", e1, gap1, e2, gap2, e3)         r (gap1) r (gap2) r
      ("compose", t1, t2)                     transitive composition
    where gaps are triples or None.
    """

    def __init__(self, n_states: int):
        self.triples = set()
        self.parents = {}
        self.rel_from = [[] for _ in range(n_states)]
        self.rel_to = [[] for _ in range(n_states)]

    def has(self, q: int, p: int, sigma: int) -> bool:
        return (q, p, sigma) in self.triples

    def __len__(self):
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)


def saturate(auto: CancellationAutomaton) -> SaturationRelation:
    """Least fixpoint of the cancellation rules.

    (q,p,sigma) enters the relation iff some nonempty edge path q -> p spells
    a word reducing to the empty word with total sign sigma (edge weights
    times one flip per deleted "ss"/"rrr").  Sound and complete: deletions in
    a word nest, so the first letter of a trivial word cancels against later
    matching letters with trivial gaps in between, which is exactly the rule
    shape below.
    """
    n = auto.n_states
    edges = auto.edges
    s_in = [[] for _ in range(n)]
    s_out = [[] for _ in range(n)]
    r_in = [[] for _ in range(n)]
    r_out = [[] for _ in range(n)]
    eps_edges = []
    for e, (src, dst, label, weight) in enumerate(edges):
        if label == "s":
            s_in[dst].append(e)
            s_out[src].append(e)
        elif label == "r":
            r_in[dst].append(e)
            r_out[src].append(e)
        else:
            eps_edges.append(e)

    rel = SaturationRelation(n)
    triples = rel.triples
    parents = rel.parents
    rel_from = rel.rel_from
    rel_to = rel.rel_to
    work = deque()

    def add(q, p, sigma, parent):
        t = (q, p, sigma)
        if t in triples:
            return
        triples.add(t)
        parents[t] = parent
        rel_from[q].append((p, sigma))
        rel_to[p].append((q, sigma))
        work.append(t)

    # seeds: base epsilon edges, adjacent ss, adjacent rrr
    for e in eps_edges:
        src, dst, _, weight = edges[e]
        add(src, dst, weight, ("eps", e))
    for x in range(n):
        for e1 in s_in[x]:
            q, _, _, w1 = edges[e1]
            for e2 in s_out[x]:
                _, p, _, w2 = edges[e2]
                add(q, p, -w1 * w2, ("ss", e1, None, e2))
    for e2 in range(len(edges)):
        src2, dst2, label2, w2 = edges[e2]
        if label2 != "r":
            continue
        for e1 in r_in[src2]:
            q, _, _, w1 = edges[e1]
            for e3 in r_out[dst2]:
                _, p, _, w3 = edges[e3]
                add(q, p, -w1 * w2 * w3, ("rrr", e1, None, e2, None, e3))

    while work:
        t = work.popleft()
        x, y, sg = t

        # rule (i): t fills the gap between two s edges
        for e1 in s_in[x]:
            q, _, _, w1 = edges[e1]
            base = -sg * w1
            for e2 in s_out[y]:
                _, p, _, w2 = edges[e2]
                add(q, p, base * w2, ("ss", e1, t, e2))

        # rule (ii): t as the first gap of r (gap) r (gap) r
        for e1 in r_in[x]:
            q, _, _, w1 = edges[e1]
            for e2 in r_out[y]:
                _, z, _, w2 = edges[e2]
                base = -sg * w1 * w2
                for e3 in r_out[z]:
                    _, p, _, w3 = edges[e3]
                    add(q, p, base * w3, ("rrr", e1, t, e2, None, e3))
                for (u, sg2) in list(rel_from[z]):
                    t2 = (z, u, sg2)
                    for e3 in r_out[u]:
                        _, p, _, w3 = edges[e3]
                        add(q, p, base * sg2 * w3, ("rrr", e1, t, e2, t2, e3))

        # rule (ii): t as the second gap
        for e3 in r_out[y]:
            _, p, _, w3 = edges[e3]
            for e2 in r_in[x]:
                y1, _, _, w2 = edges[e2]
                base = -sg * w2 * w3
                for e1 in r_in[y1]:
                    q, _, _, w1 = edges[e1]
                    add(q, p, base * w1, ("rrr", e1, None, e2, t, e3))
                for (q1, sg1) in list(rel_to[y1]):
                    t1 = (q1, y1, sg1)
                    for e1 in r_in[q1]:
                        q, _, _, w1 = edges[e1]
                        add(q, p, base * sg1 * w1, ("rrr", e1, t1, e2, t, e3))

        # rule (iv): transitive composition with everything already present
        for (u, sg2) in list(rel_from[y]):
            add(x, u, sg * sg2, ("compose", t, (y, u, sg2)))
        for (q0, sg0) in list(rel_to[x]):
            add(q0, y, sg0 * sg, ("compose", (q0, x, sg0), t))

    return rel


def trivial_path_exists(auto: CancellationAutomaton, sat: SaturationRelation,
                        frm: int, to: int, sigma: int) -> bool:
    """Is there a nonempty path frm -> to whose word reduces to (sigma, e)?

    The relation is already transitively closed, so this is a lookup.
    """
    return sat.has(frm, to, sigma)


def extract_path(auto: CancellationAutomaton, sat: SaturationRelation,
                 frm: int, to: int, sigma: int) -> list:
    """Edge path realizing the triple, rebuilt from the stored derivations."""
    root = (frm, to, sigma)
    if root not in sat.triples:
        raise WitnessError(f"no trivial path for {root}")

    def expand(t):
        parent = sat.parents[t]
        kind = parent[0]
        if kind == "eps":
            return [parent[1]]
        if kind == "ss":
            _, e1, gap, e2 = parent
            mid = expand(gap) if gap is not None else []
            return [e1] + mid + [e2]
        if kind == "rrr":
            _, e1, g1, e2, g2, e3 = parent
            m1 = expand(g1) if g1 is not None else []
            m2 = expand(g2) if g2 is not None else []
            return [e1] + m1 + [e2] + m2 + [e3]
        _, t1, t2 = parent
        return expand(t1) + expand(t2)

    path = expand(root)
    value = auto.path_value(path)
    if value != SignedWord(sigma, ""):
        raise WitnessError(f"extracted path value {value} disagrees with sign {sigma}")
    return path


def decode_closed_path(auto: CancellationAutomaton, path: list) -> list:
    """Generator index sequence of a hub -> hub path in a loop automaton."""
    seq = []
    idx = 0
    tags = auto.tags
    while idx < len(path):
        tag = tags[path[idx]]
        if tag.kind != LOOP or tag.pos != 0:
            raise WitnessError(f"path enters chain mid-way at edge {path[idx]}")
        if tag.length == 0:
            seq.append(tag.gen)
            idx += 1
            continue
        for pos in range(tag.length):
            got = tags[path[idx]]
            if got.gen != tag.gen or got.pos != pos:
                raise WitnessError("path does not follow a full generator chain")
            idx += 1
        seq.append(tag.gen)
    return seq


def extract_witness(auto: CancellationAutomaton, sat: SaturationRelation,
                    frm: int, to: int, sigma: int, gens: GeneratorSet) -> list:
    """Generator index sequence for a loop/membership-automaton triple.

    The decoded sequence is re-multiplied with exact matrix arithmetic and
    must equal sigma * I (loop) or the membership target; anything else
    raises instead of returning a bogus certificate.
    """
    path = extract_path(auto, sat, frm, to, sigma)
    if auto.kind == "loop":
        seq = decode_closed_path(auto, path)
        value = gens.product(seq)
        expected = evaluate(SignedWord(sigma, ""))
        if value != expected:
            raise WitnessError(f"witness {seq} multiplies to {value}, not {expected}")
        return seq
    if auto.kind == "membership":
        split = next((i for i, e in enumerate(path)
                      if auto.tags[e].kind == TARGET_INV), None)
        if split is None:
            raise WitnessError("membership path never enters the target chain")
        seq = decode_closed_path(auto, path[:split])
        tail = [auto.tags[e] for e in path[split:]]
        if [t.pos for t in tail] != list(range(len(tail))):
            raise WitnessError("membership path does not end with the full target chain")
        if not seq:
            raise WitnessError("membership witness must use at least one generator")
        return seq
    raise WitnessError(f"no index-sequence decoding for {auto.kind} automata")


def decode_pattern_witness(auto: CancellationAutomaton, path: list,
                           gens: GeneratorSet) -> tuple:
    """Two distinct equal-product sequences from a pattern-automaton path.

    The path spells w_i u (v-chains reversed) inv(w_j); it decodes to
    alpha = [i] + forward loop gens and beta = [j] + reversed inverse-chain
    gens, with product(alpha) == product(beta).
    """
    runs = []
    idx = 0
    tags = auto.tags
    while idx < len(path):
        tag = tags[path[idx]]
        if tag.pos != 0:
            raise WitnessError("pattern path enters a chain mid-way")
        for pos in range(tag.length):
            got = tags[path[idx]]
            if got.kind != tag.kind or got.gen != tag.gen or got.pos != pos:
                raise WitnessError("pattern path does not follow a full chain")
            idx += 1
        if tag.length == 0:
            idx += 1
        runs.append(tag)
    if not runs or runs[0].kind != ENTRY or runs[-1].kind != EXIT_INV:
        raise WitnessError("pattern path must run entry chain to exit chain")
    alpha = [runs[0].gen]
    beta_rev = []
    for tag in runs[1:-1]:
        if tag.kind == FWD_LOOP:
            alpha.append(tag.gen)
        elif tag.kind in (BRIDGE_INV, INV_LOOP):
            beta_rev.append(tag.gen)
        else:
            raise WitnessError(f"unexpected {tag.kind} chain inside pattern path")
    beta = [runs[-1].gen] + beta_rev[::-1]
    if alpha == beta:
        raise WitnessError("pattern decode produced identical sequences")
    if gens.product(alpha) != gens.product(beta):
        raise WitnessError("pattern witness products disagree")
    return alpha, beta


def epsilon_cycle(auto: CancellationAutomaton, sat: SaturationRelation):
    """A cycle through relation triples, if any: (state, sign, [state, state]).

    The relation is transitively closed, so a cycle exists iff some (q, q,
    sigma) triple does.  On a loop automaton this is equivalent to +-I lying
    in the semigroup: a trivial cycle at a mid-chain state q of chain c
    forces M_c * X = +-I for the block X of full chains it traverses.
    """
    for q in range(auto.n_states):
        for sigma in (-1, 1):
            if sat.has(q, q, sigma):
                return (q, sigma, [q, q])
    return None
