"""Context-free machinery: target grammars, marker lifting, DFA intersection.

The target grammar of a signed reduced word t derives exactly the unreduced
words over {s,r} with the same value.  Lifting over markers closes the
language under inserting marker symbols anywhere, and intersecting with the
marked semigroup DFA (blocks "#i w_i") leaves one word per factorization.
Emptiness, finiteness and enumeration of the result answer the membership /
recurrence / counting questions.

Words are tuples of terminal symbols.  Nonterminals and terminals may be any
hashable values; the Bar-Hillel construction uses (state, symbol, state)
triples as nonterminals.
"""

from collections import deque
from dataclasses import dataclass
from itertools import count

from .algebra import GeneratorSet, SignedWord


class GrammarError(ValueError):
    pass


N_POS = "N+"
N_NEG = "N-"


@dataclass
class Grammar:
    nonterminals: set
    terminals: set
    productions: list  # (head, tuple body)
    start: object
    trimmed: bool = False

    def productions_of(self, head):
        return [body for h, body in self.productions if h == head]

    def __repr__(self):
        return (f"Grammar({len(self.nonterminals)} nonterminals, "
                f"{len(self.productions)} productions)")


def _n_core_productions():
    """Words deriving +-I: N+ <=> value I, N- <=> value -I.

    s (gap) s flips the gap's sign and r g1 r g2 r flips the product of both
    gap signs, since phi(ss) = phi(rrr) = -I; the binary productions compose
    consecutive trivial blocks.
    """
    return [
        (N_POS, ()),
        (N_POS, ("s", N_NEG, "s")),
        (N_POS, ("r", N_POS, "r", N_NEG, "r")),
        (N_POS, ("r", N_NEG, "r", N_POS, "r")),
        (N_POS, (N_POS, N_POS)),
        (N_POS, (N_NEG, N_NEG)),
        (N_NEG, ("s", N_POS, "s")),
        (N_NEG, ("r", N_POS, "r", N_POS, "r")),
        (N_NEG, ("r", N_NEG, "r", N_NEG, "r")),
        (N_NEG, (N_POS, N_NEG)),
        (N_NEG, (N_NEG, N_POS)),
    ]


def _n_symbol(sign: int):
    return N_POS if sign == 1 else N_NEG


def _chain_symbol(i: int, sign: int):
    return ("B", i, sign)


def target_chain_productions(word: str) -> list:
    """Suffix chain ("B", i, tau): letters i.. of the target interleaved with
    trivial gaps whose remaining sign product is tau.  Independent of the
    target sign; a start symbol ("B", 1, sign) selects the parity."""
    prods = []
    n = len(word)
    for i in range(1, n + 1):
        t = word[i - 1]
        for tau in (1, -1):
            prods.append((_chain_symbol(i, tau), (N_POS, t, _chain_symbol(i + 1, tau))))
            prods.append((_chain_symbol(i, tau), (N_NEG, t, _chain_symbol(i + 1, -tau))))
    for tau in (1, -1):
        prods.append((_chain_symbol(n + 1, tau), (_n_symbol(tau),)))
    return prods


def build_target_grammar(target: SignedWord) -> Grammar:
    """Grammar of every word w over {s,r} with reduce(w, +) == target.

    Such a word splits as gap t_1 gap t_2 ... t_n gap around the surviving
    target letters, each gap reducing to +-I with the gap signs multiplying
    to the target sign.
    """
    if not target.is_reduced():
        raise GrammarError(f"target must be reduced: {target}")
    prods = _n_core_productions() + target_chain_productions(target.word)
    start = _chain_symbol(1, target.sign)
    nts = {h for h, _ in prods}
    return Grammar(nts, {"s", "r"}, prods, start)


LIFT_PAD = "K"


def _lift_symbol(t):
    return ("lifted", t)


def lift_over_markers(g: Grammar, markers) -> Grammar:
    """Inverse image of L(g) under erasing the marker symbols.

    Each terminal a becomes a nonterminal deriving a K, with K matching any
    run of markers, and one leading K is prepended at the start.
    """
    markers = list(markers)
    prods = [(LIFT_PAD, ())]
    for m in markers:
        prods.append((LIFT_PAD, (m, LIFT_PAD)))
    for t in sorted(g.terminals, key=repr):
        prods.append((_lift_symbol(t), (t, LIFT_PAD)))
    for head, body in g.productions:
        prods.append((head, tuple(_lift_symbol(x) if x in g.terminals else x
                                  for x in body)))
    start = ("lift_start",)
    prods.append((start, (LIFT_PAD, g.start)))
    nts = {h for h, _ in prods}
    return Grammar(nts, set(g.terminals) | set(markers), prods, start)


@dataclass
class MarkedDfa:
    """DFA over {s,r} + markers accepting (#i w_i)+ block sequences.

    With sign_parity set, only sequences whose generator signs multiply to
    that parity are accepted (states carry the running parity; marker edges
    flip it by the sign of the generator they open).
    """

    n_states: int
    initial: int
    finals: frozenset
    alphabet: tuple
    transitions: dict  # (state, symbol) -> state
    markers: tuple
    sign_parity: object = None   # None, +1 or -1
    hub_states: dict = None      # parity (or None) -> accepting hub state

    def run(self, word) -> bool:
        q = self.initial
        for sym in word:
            q = self.transitions.get((q, sym))
            if q is None:
                return False
        return q in self.finals

    def decode(self, word) -> list:
        """Marked word -> 1-based generator index sequence."""
        marker_index = {m: i for i, m in enumerate(self.markers, start=1)}
        if not word or word[0] not in marker_index:
            raise GrammarError(f"marked word does not start with a marker: {word}")
        seq = []
        for sym in word:
            if sym in marker_index:
                seq.append(marker_index[sym])
            elif sym not in ("s", "r"):
                raise GrammarError(f"unexpected symbol in marked word: {sym!r}")
        return seq

    def __repr__(self):
        return f"MarkedDfa({self.n_states} states, {len(self.markers)} markers)"


def build_marked_semigroup_dfa(gens: GeneratorSet, sign_parity=None) -> MarkedDfa:
    """DFA for (#1 w_1 | ... | #n w_n)+ over the generators' reduced words.

    Generator signs are not spelled; accepted words biject with nonempty
    index sequences.  sign_parity refines acceptance by the product of the
    generators' signs (used to count true factorizations exactly).
    """
    markers = tuple(g.marker for g in gens)
    parities = (1,) if sign_parity is None else (1, -1)
    states = {}

    def intern(key):
        if key not in states:
            states[key] = len(states)
        return states[key]

    trans = {}
    for p in parities:
        intern(("start", p))
        intern(("hub", p))
    for p in parities:
        for src_kind in ("start", "hub"):
            src = intern((src_kind, p))
            for i, g in enumerate(gens, start=1):
                p2 = p * g.word.sign if sign_parity is not None else p
                word = g.word.word
                if not word:
                    trans[(src, g.marker)] = intern(("hub", p2))
                    continue
                trans[(src, g.marker)] = intern(("chain", i, 0, p2))
                for pos in range(len(word)):
                    cur = intern(("chain", i, pos, p2))
                    nxt = (intern(("hub", p2)) if pos == len(word) - 1
                           else intern(("chain", i, pos + 1, p2)))
                    trans[(cur, word[pos])] = nxt
    finals = frozenset(
        intern(("hub", p)) for p in parities
        if sign_parity is None or p == sign_parity
    )
    alphabet = tuple(markers) + ("s", "r")
    hubs = ({None: intern(("hub", 1))} if sign_parity is None
            else {p: intern(("hub", p)) for p in parities})
    return MarkedDfa(len(states), intern(("start", parities[0])), finals,
                     alphabet, trans, markers, sign_parity, hubs)


# ---------------------------------------------------------------------------
# sparse Bar-Hillel intersection
# ---------------------------------------------------------------------------


_BIN_NONCE = count()


def _binarize(g_productions):
    """Bodies of length <= 2; continuation symbols are globally fresh
    ("cat", k) tuples so staged rule additions never collide."""
    prods = []
    for head, body in g_productions:
        while len(body) > 2:
            sym = ("cat", next(_BIN_NONCE))
            prods.append((head, (body[0], sym)))
            head, body = sym, body[1:]
        prods.append((head, body))
    return prods


def _nullable_symbols(prods):
    nullable = set()
    changed = True
    while changed:
        changed = False
        for head, body in prods:
            if head not in nullable and all(x in nullable for x in body):
                nullable.add(head)
                changed = True
    return nullable


class IntersectionEngine:
    """Agenda-based derivability of (state, symbol, state) items over a DFA.

    An item (p, X, q) means X derives some word driving the DFA from p to q.
    Rules can be added in stages; existing items are replayed against new
    rules, so a closed lower stratum (the N+/N- core, which never mentions a
    target chain) can be computed once and reused for many targets via
    clone().
    """

    def __init__(self, dfa: MarkedDfa):
        self.dfa = dfa
        self.from_idx = {}   # sym -> {p: set(q)}
        self.to_idx = {}     # sym -> {q: set(p)}
        self.unit_prods = {}
        self.left_prods = {}
        self.right_prods = {}
        self.nullable = set()
        self.rules = []
        self._seeded_terminals = set()
        self._agenda = deque()

    def clone(self) -> "IntersectionEngine":
        eng = IntersectionEngine.__new__(IntersectionEngine)
        eng.dfa = self.dfa
        eng.from_idx = {s: {p: set(qs) for p, qs in idx.items()}
                        for s, idx in self.from_idx.items()}
        eng.to_idx = {s: {q: set(ps) for q, ps in idx.items()}
                      for s, idx in self.to_idx.items()}
        eng.unit_prods = {s: list(v) for s, v in self.unit_prods.items()}
        eng.left_prods = {s: list(v) for s, v in self.left_prods.items()}
        eng.right_prods = {s: list(v) for s, v in self.right_prods.items()}
        eng.nullable = set(self.nullable)
        eng.rules = list(self.rules)
        eng._seeded_terminals = set(self._seeded_terminals)
        eng._agenda = deque()
        return eng

    # -- item bookkeeping ------------------------------------------------------

    def has_item(self, p, sym, q) -> bool:
        return q in self.from_idx.get(sym, {}).get(p, ())

    def _add(self, p, sym, q):
        idx = self.from_idx.setdefault(sym, {})
        bucket = idx.setdefault(p, set())
        if q in bucket:
            return
        bucket.add(q)
        self.to_idx.setdefault(sym, {}).setdefault(q, set()).add(p)
        self._agenda.append((p, sym, q))

    def _seed_if_terminal(self, x):
        if x in self._seeded_terminals or x not in self.dfa.alphabet:
            return
        self._seeded_terminals.add(x)
        for (q, sym), q2 in self.dfa.transitions.items():
            if sym == x:
                self._add(q, x, q2)

    # -- staged rule addition ----------------------------------------------------

    def add_rules(self, productions):
        """Add binarized productions, replay the database, run to fixpoint."""
        productions = list(productions)
        new_nullable = _nullable_symbols(self.rules + productions)
        grew = new_nullable - self.nullable
        self.nullable = new_nullable
        for a in grew:
            for p in range(self.dfa.n_states):
                self._add(p, a, p)
        for head, body in productions:
            self.rules.append((head, body))
            if len(body) == 0:
                continue
            if len(body) == 1:
                x = body[0]
                self._seed_if_terminal(x)
                self.unit_prods.setdefault(x, []).append(head)
                for p, qs in list(self.from_idx.get(x, {}).items()):
                    for q in list(qs):
                        self._add(p, head, q)
            else:
                x, y = body
                self._seed_if_terminal(x)
                self._seed_if_terminal(y)
                self.left_prods.setdefault(x, []).append((head, y))
                self.right_prods.setdefault(y, []).append((head, x))
                y_from = self.from_idx.get(y, {})
                for p, qs in list(self.from_idx.get(x, {}).items()):
                    for q in list(qs):
                        for r in list(y_from.get(q, ())):
                            self._add(p, head, r)
        self._run()

    def _run(self):
        agenda = self._agenda
        from_idx = self.from_idx
        to_idx = self.to_idx
        add = self._add
        unit_prods = self.unit_prods
        left_prods = self.left_prods
        right_prods = self.right_prods
        while agenda:
            p, x, q = agenda.popleft()
            for a in unit_prods.get(x, ()):
                add(p, a, q)
            for (a, y) in left_prods.get(x, ()):
                for r in list(from_idx.get(y, {}).get(q, ())):
                    add(p, a, r)
            for (a, y) in right_prods.get(x, ()):
                for o in list(to_idx.get(y, {}).get(p, ())):
                    add(o, a, q)

    # -- output --------------------------------------------------------------------

    def start_items(self, start_symbol, finals=None) -> list:
        dfa = self.dfa
        finals = dfa.finals if finals is None else finals
        return [(dfa.initial, start_symbol, f) for f in sorted(finals)
                if self.has_item(dfa.initial, start_symbol, f)]

    def extract_grammar(self, start_symbol, terminals, finals=None) -> Grammar:
        """Trimmed Bar-Hillel grammar over the items reachable from the start.

        Bodies are materialized by re-joining the item indexes, so the
        unreachable bulk of the database is never touched.
        """
        start = ("bh_start",)
        roots = self.start_items(start_symbol, finals)
        if not roots:
            return Grammar({start}, set(terminals), [], start, trimmed=True)
        prods = [(start, (item,)) for item in roots]
        seen = set(roots)
        stack = list(roots)
        rules_by_head = {}
        for head, body in self.rules:
            rules_by_head.setdefault(head, []).append(body)

        def visit(it):
            if it not in seen:
                seen.add(it)
                stack.append(it)

        while stack:
            item = stack.pop()
            p, sym, q = item
            if sym in terminals:
                prods.append((item, (sym,)))
                continue
            for body in rules_by_head.get(sym, ()):
                if len(body) == 0:
                    if p == q:
                        prods.append((item, ()))
                elif len(body) == 1:
                    x = body[0]
                    if self.has_item(p, x, q):
                        sub = (p, x, q)
                        prods.append((item, (sub,)))
                        visit(sub)
                else:
                    x, y = body
                    x_from = self.from_idx.get(x, {}).get(p, ())
                    y_from = self.from_idx.get(y, {})
                    for mid in x_from:
                        if q in y_from.get(mid, ()):
                            left, right = (p, x, mid), (mid, y, q)
                            prods.append((item, (left, right)))
                            visit(left)
                            visit(right)
        nts = {h for h, _ in prods}
        return Grammar(nts, set(terminals), prods, start, trimmed=True)


def intersect(g: Grammar, d: MarkedDfa) -> Grammar:
    """Bar-Hillel intersection L(g) & L(d), trimmed.

    Only derivable (state, symbol, state) triples are materialized, keeping
    the construction proportional to what the two languages actually share
    rather than |productions| * |states|^3.
    """
    eng = IntersectionEngine(d)
    eng.add_rules(_binarize(g.productions))
    return eng.extract_grammar(g.start, g.terminals)


# ---------------------------------------------------------------------------
# trimming, emptiness, finiteness, enumeration
# ---------------------------------------------------------------------------


def _productive(g: Grammar):
    productive = set()
    changed = True
    while changed:
        changed = False
        for head, body in g.productions:
            if head in productive:
                continue
            if all(x in productive or x in g.terminals for x in body):
                productive.add(head)
                changed = True
    return productive


def trim(g: Grammar) -> Grammar:
    """Drop unproductive and unreachable nonterminals (and their productions)."""
    productive = _productive(g)
    if g.start not in productive:
        return Grammar({g.start}, set(g.terminals), [], g.start, trimmed=True)
    kept = [(h, b) for h, b in g.productions
            if h in productive and all(x in productive or x in g.terminals for x in b)]
    by_head = {}
    for h, b in kept:
        by_head.setdefault(h, []).append(b)
    reach = {g.start}
    stack = [g.start]
    while stack:
        a = stack.pop()
        for body in by_head.get(a, ()):
            for x in body:
                if x not in g.terminals and x not in reach:
                    reach.add(x)
                    stack.append(x)
    final = [(h, b) for h, b in kept if h in reach]
    return Grammar(reach, set(g.terminals), final, g.start, trimmed=True)


def is_empty(g: Grammar) -> bool:
    """True iff L(g) is empty, i.e. trimming removes the start symbol."""
    return g.start not in _productive(g)


def _derives_nonempty(g: Grammar):
    """Nonterminals that can derive at least one nonempty terminal word."""
    fertile = set()
    changed = True
    while changed:
        changed = False
        for head, body in g.productions:
            if head in fertile:
                continue
            if any(x in g.terminals or x in fertile for x in body):
                fertile.add(head)
                changed = True
    return fertile


def find_growth_cycle(g: Grammar):
    """Certificate that L(g) is infinite, or None.

    A production A -> x B y pumps B when x y can derive a nonempty word, so
    L is infinite iff the (trimmed) dependency graph has a cycle through
    such a pumping edge.  Returns [A_1, ..., A_k, A_1] when found.
    """
    gt = g if g.trimmed else trim(g)
    fertile = _derives_nonempty(gt)
    edges = {}       # A -> set of B (all dependency edges)
    pumping = set()  # (A, B) edges whose side material can be nonempty
    for head, body in gt.productions:
        nts = [x for x in body if x in gt.nonterminals]
        for i, b in enumerate(nts):
            edges.setdefault(head, set()).add(b)
            rest_nonempty = any(x in gt.terminals for x in body) or any(
                other in fertile for j, other in enumerate(nts) if j != i)
            if rest_nonempty:
                pumping.add((head, b))
    if not pumping:
        return None

    # iterative Tarjan SCC
    index = {}
    low = {}
    on_stack = set()
    scc_of = {}
    scc_id = count()
    counter = count()
    stack = []
    for root in list(edges):
        if root in index:
            continue
        work = [(root, iter(sorted(edges.get(root, ()), key=repr)))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = next(counter)
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(sorted(edges.get(nxt, ()), key=repr))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                sid = next(scc_id)
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc_of[w] = sid
                    if w == node:
                        break

    for (a, b) in sorted(pumping, key=repr):
        if scc_of.get(a) is None or scc_of.get(a) != scc_of.get(b):
            continue
        if a == b:
            return [a, a]
        # close the cycle: BFS b ->* a inside the SCC, prepend the a -> b edge
        sid = scc_of[a]
        prev = {b: None}
        queue = deque([b])
        while queue:
            node = queue.popleft()
            if node == a:
                break
            for nxt in sorted(edges.get(node, ()), key=repr):
                if scc_of.get(nxt) == sid and nxt not in prev:
                    prev[nxt] = node
                    queue.append(nxt)
        back_path = [a]
        while prev.get(back_path[-1]) is not None:
            back_path.append(prev[back_path[-1]])
        if back_path[-1] != b:
            continue  # unreachable for a genuine SCC, but stay safe
        return [a] + back_path[::-1]
    return None


def is_finite(g: Grammar) -> bool:
    """Decidable finiteness of L(g) via the pumping-cycle criterion."""
    return find_growth_cycle(g) is None


@dataclass
class WordEnumeration:
    exact: bool
    words: frozenset = None   # set of word tuples when exact
    count: int = 0
    cap: int = None           # the exceeded cap when not exact

    def __repr__(self):
        if self.exact:
            return f"WordEnumeration(count={self.count})"
        return f"WordEnumeration(more_than={self.cap})"


def enumerate_words(g: Grammar, cap: int = None) -> WordEnumeration:
    """Distinct words of L(g): the exact set, or "more than cap".

    Requires a finite language or a cap; an infinite language with a cap
    short-circuits to more-than.  Distinct derivations of one word count
    once.  Since the grammar is trimmed first, any nonterminal whose word
    set exceeds the cap forces the start's set past the cap too, which
    bounds the work.
    """
    gt = g if g.trimmed else trim(g)
    if is_empty(gt):
        return WordEnumeration(True, frozenset(), 0)
    if find_growth_cycle(gt) is not None:
        if cap is None:
            raise GrammarError("enumerate_words on an infinite grammar needs a cap")
        return WordEnumeration(False, cap=cap)

    sets = {a: set() for a in gt.nonterminals}
    changed = True
    while changed:
        changed = False
        for head, body in gt.productions:
            partial = {()}
            for x in body:
                pieces = sets[x] if x in sets else {(x,)}
                partial = {w + piece for w in partial for piece in pieces}
                if cap is not None and len(partial) > cap + 1:
                    # |L(head)| >= |partial| already beats the cap
                    return WordEnumeration(False, cap=cap)
            target = sets[head]
            before = len(target)
            target.update(partial)
            if len(target) != before:
                changed = True
                if cap is not None and len(target) > cap + 1:
                    return WordEnumeration(False, cap=cap)
    words = frozenset(sets[gt.start])
    if cap is not None and len(words) > cap:
        return WordEnumeration(False, cap=cap)
    return WordEnumeration(True, words, len(words))


def words_up_to(g: Grammar, max_len: int) -> set:
    """All words of L(g) of length <= max_len, by bottom-up fixpoint."""
    sets = {t: {(t,)} for t in g.terminals}
    for a in g.nonterminals:
        sets[a] = set()
    changed = True
    while changed:
        changed = False
        for head, body in g.productions:
            partial = {()}
            for x in body:
                nxt = set()
                for w in partial:
                    room = max_len - len(w)
                    for piece in sets[x]:
                        if len(piece) <= room:
                            nxt.add(w + piece)
                partial = nxt
                if not partial:
                    break
            bucket = sets[head]
            before = len(bucket)
            bucket.update(partial)
            if len(bucket) != before:
                changed = True
    return set(sets[g.start])
