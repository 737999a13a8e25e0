"""General PDA algorithms: epsilon pre* saturation over regular configuration
sets, stack annotation by a DFA, end-of-word-marker elimination, the
DPDA-to-HD translation, grammar conversion with CYK membership, closure with
regular languages, and bounded brute-force oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Iterable

from .core import (
    EOW,
    AutomatonError,
    Configuration,
    Pda,
    PositionalResolver,
    Resolver,
    Run,
    Transition,
    enabled,
    is_deterministic,
    step,
)
from .finite import Dfa, Nfa, determinize

U_MARK = "__u__"
F_STATE = ("__f__",)


# ---------------------------------------------------------------------------
# Regular sets of configurations


@dataclass(frozen=True)
class ConfigSet:
    """A regular configuration set: an NFA over stack symbols rooted at PDA
    states.  (q, gamma) is a member iff reading gamma top first (bottom marker
    last) from the entry node of q reaches an accepting node."""

    entries: dict  # pda state -> node
    nodes: frozenset
    edges: frozenset  # (node, sym-or-None, node)
    accepting: frozenset

    def _post(self, nodes: frozenset, sym) -> frozenset:
        return frozenset(d for (s, x, d) in self.edges if s in nodes and x == sym)

    def read(self, start_nodes: Iterable, word: Iterable) -> frozenset:
        cur = frozenset(start_nodes)
        for sym in word:
            cur = self._post(cur, sym)
            if not cur:
                break
        return cur

    def contains(self, state, stack: tuple) -> bool:
        entry = self.entries.get(state)
        if entry is None:
            return False
        return bool(self.read({entry}, reversed(stack)) & self.accepting)

    def contains_config(self, config: Configuration) -> bool:
        return self.contains(config.state, config.stack)


def final_config_set(pda: Pda) -> ConfigSet:
    """The set {(q, gamma) : q final}."""
    entries = {q: ("entry", q) for q in pda.states}
    acc = "__acc__"
    edges = set()
    for q in pda.finals:
        e = entries[q]
        for x in pda.stack_alphabet:
            edges.add((e, x, e))
        edges.add((e, None, acc))
    nodes = frozenset(entries.values()) | {acc}
    return ConfigSet(entries, nodes, frozenset(edges), frozenset({acc}))


def epsilon_pre_star(pda: Pda, target: ConfigSet) -> ConfigSet:
    """Configurations from which ``target`` is reachable via epsilon
    transitions only; computed by the standard saturation fixpoint."""
    entries = dict(target.entries)
    for q in pda.states:
        entries.setdefault(q, ("entry", q))
    edges = set(target.edges)
    nodes = set(target.nodes) | set(entries.values())
    eps_rules = [t for t in pda.transitions if t.label is None]
    cs = ConfigSet(entries, frozenset(nodes), frozenset(edges), target.accepting)
    changed = True
    while changed:
        changed = False
        for t in eps_rules:
            reached = cs.read({entries[t.dst]}, reversed(t.pushed))
            for s in reached:
                e = (entries[t.src], t.top, s)
                if e not in edges:
                    edges.add(e)
                    changed = True
        if changed:
            cs = ConfigSet(entries, frozenset(nodes), frozenset(edges),
                           target.accepting)
    return cs


def config_set_to_dfa(cs: ConfigSet, pda: Pda) -> Dfa:
    """Deterministic bottom-first view of a ConfigSet.

    The DFA reads the bottom marker, then the stack symbols bottom-up, then a
    state marker ("st", q); it accepts exactly the encoded configurations.
    Obtained by reversing the top-first NFA and determinizing.
    """
    flipped = frozenset((d, x, s) for (s, x, d) in cs.edges)
    accept = "__ok__"
    state_edges = frozenset(
        (node, ("st", q), accept) for q, node in cs.entries.items()
    )
    letters = tuple(pda.stack_alphabet) + (None,) + tuple(
        ("st", q) for q in pda.states
    )
    nfa = Nfa(tuple(cs.nodes) + (accept,), letters, frozenset(cs.accepting),
              flipped | state_edges, frozenset({accept}))
    return determinize(nfa)


# ---------------------------------------------------------------------------
# Stack annotation and end-of-word elimination


def annotate_stack_with_dfa(pda: Pda, dfa: Dfa) -> Pda:
    """Extend the stack alphabet to (X, s, s') so that reachable stacks track
    the DFA run on the stack content read bottom first: s is the DFA state
    after the content up to and including X, s' the state one symbol below
    (a fresh marker at height one).  States and language are untouched."""
    qa = tuple(dfa.states)
    if None not in dfa.letters:
        raise AutomatonError("annotation DFA must read the bottom marker")
    s_bot = dfa.delta[(dfa.initial, None)]

    def below(s_prime):
        return s_bot if s_prime == U_MARK else s_prime

    def lift(pushed, s_prime):
        out = []
        cur = below(s_prime)
        prev = s_prime
        for y in pushed:
            nxt = dfa.delta[(cur, y)]
            out.append((y, nxt, prev))
            prev = nxt
            cur = nxt
        return tuple(out)

    seconds = qa + (U_MARK,)
    new_trans: list[Transition] = []
    for t in pda.transitions:
        if t.top is None:
            if t.pushed == (None,):
                new_trans.append(t)
            else:
                (_, y) = t.pushed
                sym = (y, dfa.delta[(s_bot, y)], U_MARK)
                new_trans.append(Transition(t.src, None, t.label, t.dst, (None, sym)))
        else:
            for s in qa:
                for sp in seconds:
                    top = (t.top, s, sp)
                    new_trans.append(
                        Transition(t.src, top, t.label, t.dst, lift(t.pushed, sp))
                    )
    gamma = tuple(sorted(
        {t.top for t in new_trans if t.top is not None}
        | {y for t in new_trans for y in t.pushed if y is not None},
        key=repr,
    ))
    return Pda(pda.states, pda.alphabet, gamma, pda.initial, tuple(new_trans),
               pda.finals, name=pda.name)


def eliminate_eow(pda: Pda) -> Pda:
    """Equivalent PDA in which every accepted word also has an accepting run
    whose last transition processes the last letter.

    Saturates the final configurations under epsilon pre*, annotates the stack
    with the (determinized) result, and doubles the states so that the final
    copy is entered exactly when the tracked configuration can still reach
    acceptance by epsilon moves alone.
    """
    cset = epsilon_pre_star(pda, final_config_set(pda))
    dfa = config_set_to_dfa(cset, pda)
    annotated = annotate_stack_with_dfa(pda, dfa)
    s_bot = dfa.delta[(dfa.initial, None)]

    def flag(state, new_top) -> int:
        s_after = s_bot if new_top is None else new_top[1]
        return 1 if dfa.delta[(s_after, ("st", state))] in dfa.finals else 0

    new_trans = []
    for t in annotated.transitions:
        if t.pushed:
            new_top = t.pushed[-1]
            b2 = flag(t.dst, new_top)
            for b in (0, 1):
                new_trans.append(Transition((t.src, b), t.top, t.label,
                                            (t.dst, b2), t.pushed))
        else:
            # pop: the annotation of the popped symbol knows the state below
            (_, _, sp) = t.top
            s_after = s_bot if sp == U_MARK else sp
            b2 = 1 if dfa.delta[(s_after, ("st", t.dst))] in dfa.finals else 0
            for b in (0, 1):
                new_trans.append(Transition((t.src, b), t.top, t.label,
                                            (t.dst, b2), ()))
    states = tuple((q, b) for q in annotated.states for b in (0, 1))
    b0 = 1 if cset.contains(pda.initial, (None,)) else 0
    finals = frozenset((q, 1) for q in annotated.states)
    return Pda(states, pda.alphabet, annotated.stack_alphabet,
               (pda.initial, b0), tuple(new_trans), finals, name=pda.name)


# ---------------------------------------------------------------------------
# DPDA -> HD-PDA


class _HdResolver(PositionalResolver):
    """Resolver for the guess-and-postpone automaton: guesses the actual next
    letter, simulating the deterministic source otherwise."""

    def __init__(self, out: Pda, guess_states: frozenset):
        self.out = out
        self.guess = guess_states

    def choose_at(self, config, letter):
        if letter is EOW:
            return None
        eps = enabled(self.out, config, None)
        if config.state in self.guess:
            if eps:  # pending epsilon simulation (deterministic)
                return eps[0]
            ts = enabled(self.out, config, letter)  # dummy processing
            return ts[0] if ts else None
        for t in eps:
            if t.dst in self.guess:
                if t.dst[1] == letter:
                    return t  # guess exactly the real next letter
            else:
                return t  # original leading epsilon
        return None


def dpda_to_hdpda(dpda: Pda) -> tuple[Pda, Resolver]:
    """Language-preserving HD-PDA from a DPDA: letters are guessed and stored
    in the state, processed by a dummy transition once the simulated machine
    sits in a reading mode.  Ships the resolver that guesses the real letter.
    """
    if not is_deterministic(dpda):
        raise AutomatonError("input is not deterministic")
    letters = dpda.alphabet.letters
    guess_states = [(q, a) for q in dpda.states for a in letters]
    if set(guess_states) & set(dpda.states):
        raise AutomatonError("state/letter pairs collide with existing states")
    eps_modes = {(t.src, t.top) for t in dpda.transitions if t.label is None}
    reading_modes = [
        (q, x)
        for q in dpda.states
        for x in (None,) + dpda.stack_alphabet
        if (q, x) not in eps_modes
    ]
    trans: list[Transition] = []
    for t in dpda.transitions:
        if t.label is None:
            trans.append(t)  # leading epsilon simulation
        else:
            trans.append(Transition(t.src, t.top, None, (t.dst, t.label), t.pushed))
    for t in dpda.transitions:
        if t.label is None:
            for a in letters:
                trans.append(Transition((t.src, a), t.top, None, (t.dst, a), t.pushed))
    for (q, x) in reading_modes:
        keep = (None,) if x is None else (x,)
        for a in letters:
            trans.append(Transition((q, a), x, a, q, keep))

    eps_in_l = epsilon_pre_star(dpda, final_config_set(dpda)).contains(
        dpda.initial, (None,))
    finals = dpda.finals | ({dpda.initial} if eps_in_l else frozenset())
    out = Pda(dpda.states + tuple(guess_states), dpda.alphabet,
              dpda.stack_alphabet, dpda.initial, tuple(trans),
              frozenset(finals), name=dpda.name)
    return out, _HdResolver(out, frozenset(guess_states))


# ---------------------------------------------------------------------------
# Grammar conversion and CYK membership


@dataclass(frozen=True)
class Cfg:
    variables: tuple
    terminals: tuple
    start: Hashable
    productions: tuple  # (variable, tuple of symbols)

    def validate(self) -> list[str]:
        problems = []
        vs, ts = set(self.variables), set(self.terminals)
        if self.start not in vs:
            problems.append("start symbol not a variable")
        for (v, rhs) in self.productions:
            if v not in vs:
                problems.append(f"production from unknown variable {v!r}")
            for s in rhs:
                if s not in vs and s not in ts:
                    problems.append(f"undeclared symbol {s!r} in production")
        return problems


def pda_to_cfg(pda: Pda) -> Cfg:
    """Triple construction after adding a fresh state that accepts by popping
    the whole stack; only triples reachable from the start triple are kept."""
    all_states = pda.states + (F_STATE,)
    by_src_top: dict = {}
    for t in pda.transitions:
        by_src_top.setdefault((t.src, t.top), []).append(t)

    start = (pda.initial, None, F_STATE)
    prods: list[tuple] = []
    seen = {start}
    todo = [start]

    def want(var):
        if var not in seen:
            seen.add(var)
            todo.append(var)

    while todo:
        var = todo.pop()
        (p, x, qv) = var
        if p == F_STATE:
            if qv == F_STATE:
                prods.append((var, ()))
            continue
        if p in pda.finals:
            tgt = (F_STATE, x, qv)
            prods.append((var, (tgt,)))
            want(tgt)
        for t in by_src_top.get((p, x), ()):
            term = () if t.label is None else (t.label,)
            if t.top is None:
                rest = t.pushed[1:]
                if not rest:  # bottom kept: behaves like replacing X by X
                    tgt = (t.dst, None, qv)
                    prods.append((var, term + (tgt,)))
                    want(tgt)
                else:
                    (z,) = rest
                    for mid in all_states:
                        t1, t2 = (t.dst, z, mid), (mid, None, qv)
                        prods.append((var, term + (t1, t2)))
                        want(t1)
                        want(t2)
            else:
                if len(t.pushed) == 0:
                    if t.dst == qv:
                        prods.append((var, term))
                elif len(t.pushed) == 1:
                    tgt = (t.dst, t.pushed[0], qv)
                    prods.append((var, term + (tgt,)))
                    want(tgt)
                else:
                    (y, z) = t.pushed  # z is the new top, consumed first
                    for mid in all_states:
                        t1, t2 = (t.dst, z, mid), (mid, y, qv)
                        prods.append((var, term + (t1, t2)))
                        want(t1)
                        want(t2)
    return Cfg(tuple(seen), pda.alphabet.letters, start, tuple(prods))


def _normalize(cfg: Cfg):
    """Chomsky-style normalization; returns (unit-free binary/terminal
    productions, nullable start flag)."""
    # nullable closure
    nullable: set = set()
    changed = True
    while changed:
        changed = False
        for (v, rhs) in cfg.productions:
            if v not in nullable and all(s in nullable for s in rhs):
                nullable.add(v)
                changed = True

    terminals = set(cfg.terminals)
    fresh: dict = {}

    def term_var(a):
        if a not in fresh:
            fresh[a] = ("T", a)
        return fresh[a]

    binary: list[tuple] = []
    counter = itertools.count()
    for (v, rhs) in cfg.productions:
        # expand nullable occurrences (rhs lengths are at most 3 here)
        var_positions = [i for i, s in enumerate(rhs) if s in nullable]
        for mask in itertools.product((True, False), repeat=len(var_positions)):
            keep = list(rhs)
            for on, i in zip(mask, var_positions):
                if not on:
                    keep[i] = None
            out = [s for s in keep if s is not None]
            if not out:
                continue
            if len(out) == 1 and out[0] in terminals:
                binary.append((v, (out[0],)))
                continue
            head = v
            syms = [term_var(s) if s in terminals else s for s in out]
            while len(syms) > 2:
                nv = ("B", next(counter))
                binary.append((head, (syms[0], nv)))
                head, syms = nv, syms[1:]
            binary.append((head, tuple(syms)))
    for a, tv in fresh.items():
        binary.append((tv, (a,)))

    # unit closure, indexed by head to stay near-linear
    unit: dict = {}
    proper: dict = {}
    for (v, rhs) in binary:
        if len(rhs) == 1 and rhs[0] not in terminals:
            unit.setdefault(v, set()).add(rhs[0])
        else:
            proper.setdefault(v, set()).add(rhs)

    final: set = set()
    all_vars = {v for (v, _) in binary} | set(cfg.variables)
    for v in all_vars:
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for rhs in proper.get(u, ()):
                final.add((v, rhs))
            for w in unit.get(u, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return tuple(final), (cfg.start in nullable)


@lru_cache(maxsize=32)
def _cyk_tables(cfg: Cfg):
    prods, eps_ok = _normalize(cfg)
    by_first: dict = {}
    by_term: dict = {}
    for (v, rhs) in prods:
        if len(rhs) == 2:
            by_first.setdefault(rhs[0], []).append((rhs[1], v))
        else:
            by_term.setdefault(rhs[0], set()).add(v)
    return by_first, by_term, eps_ok


def cfg_membership(cfg: Cfg, word) -> bool:
    """CYK decision after standard normalization."""
    word = tuple(word)
    by_first, by_term, eps_ok = _cyk_tables(cfg)
    n = len(word)
    if n == 0:
        return eps_ok
    table = [[set() for _ in range(n + 1)] for _ in range(n)]
    for i, a in enumerate(word):
        table[i][i + 1] = set(by_term.get(a, ()))
    for span in range(2, n + 1):
        for i in range(n - span + 1):
            j = i + span
            cell = table[i][j]
            for k in range(i + 1, j):
                left, right = table[i][k], table[k][j]
                if not left or not right:
                    continue
                for b in left:
                    for (c, v) in by_first.get(b, ()):
                        if c in right:
                            cell.add(v)
    return cfg.start in table[0][n]


@lru_cache(maxsize=32)
def _grammar_of(pda: Pda) -> Cfg:
    return pda_to_cfg(pda)


def pda_membership(pda: Pda, word) -> bool:
    """w in L(pda), via the grammar route (trailing epsilons permitted)."""
    return cfg_membership(_grammar_of(pda), word)


def cfg_language(cfg: Cfg, max_len: int) -> set:
    """All derivable words of length <= max_len (bounded oracle)."""
    words: dict = {v: set() for v in cfg.variables}
    changed = True
    while changed:
        changed = False
        for (v, rhs) in cfg.productions:
            parts = [
                {(s,)} if s in cfg.terminals else words[s] for s in rhs
            ]
            combos = {()}
            for p in parts:
                combos = {
                    a + b for a in combos for b in p if len(a) + len(b) <= max_len
                }
                if not combos:
                    break
            new = combos - words[v]
            if new:
                words[v] |= new
                changed = True
    return words[cfg.start]


# ---------------------------------------------------------------------------
# Closure with regular languages


def add_sink(pda: Pda, sink="__sink__") -> Pda:
    """Total-run form: every mode gets, for every letter, a transition to a
    fresh nonfinal sink."""
    while sink in pda.states:
        sink = sink + "'"
    states = pda.states + (sink,)
    trans = list(pda.transitions)
    for q in states:
        for x in (None,) + pda.stack_alphabet:
            keep = (None,) if x is None else (x,)
            for a in pda.alphabet.letters:
                trans.append(Transition(q, x, a, sink, keep))
    return Pda(states, pda.alphabet, pda.stack_alphabet, pda.initial,
               tuple(trans), pda.finals, name=pda.name)


def regular_closure(pda: Pda, reg: Dfa, mode: str) -> Pda:
    """Union, intersection or difference of L(pda) with the regular language
    of ``reg``, as a PDA (sink-augmented product; the DFA idles on epsilon)."""
    if mode not in ("union", "intersection", "difference"):
        raise AutomatonError(f"unknown closure mode {mode!r}")
    if set(reg.letters) != set(pda.alphabet.letters):
        raise AutomatonError("alphabet mismatch")
    total = add_sink(pda)
    trans = []
    for t in total.transitions:
        for s in reg.states:
            s2 = s if t.label is None else reg.delta[(s, t.label)]
            trans.append(Transition((t.src, s), t.top, t.label, (t.dst, s2),
                                    t.pushed))
    states = tuple((q, s) for q in total.states for s in reg.states)
    if mode == "union":
        finals = frozenset((q, s) for (q, s) in states
                           if q in total.finals or s in reg.finals)
    elif mode == "intersection":
        finals = frozenset((q, s) for (q, s) in states
                           if q in total.finals and s in reg.finals)
    else:
        finals = frozenset((q, s) for (q, s) in states
                           if q in total.finals and s not in reg.finals)
    return Pda(states, pda.alphabet, pda.stack_alphabet,
               (total.initial, reg.initial), tuple(trans), finals,
               name=pda.name)


# ---------------------------------------------------------------------------
# Regular stack access to mode-only resolvers


def regular_stack_resolver_to_mode_resolver(pda: Pda, pdt) -> tuple[Pda, object]:
    """Rebuild the automaton so the stack-abstraction state of the resolver's
    DFA becomes part of the top stack symbol, and rewrite the transducer to
    read only the mode.  Resolver-induced runs are bisimilar (annotations
    project away)."""
    from .core import PdTransducer

    if pdt.stack_dfa is None:
        raise AutomatonError("transducer has no stack abstraction to remove")
    dfa = pdt.stack_dfa
    annotated = annotate_stack_with_dfa(pda, dfa)
    s_bot = dfa.delta[(dfa.initial, None)]

    # a lifted transition is determined by the original one plus the top
    lift_index: dict = {}
    lifts_of: dict = {}
    for t2 in annotated.transitions:
        top0 = t2.top if t2.top is None else t2.top[0]
        pushed0 = tuple(s if s is None else s[0] for s in t2.pushed)
        orig = Transition(t2.src, top0, t2.label, t2.dst, pushed0)
        lift_index[(orig, t2.top)] = t2
        lifts_of.setdefault(orig, []).append(t2)

    dtrans = []
    for td in pdt.dpda.transitions:
        if td.label is None:
            dtrans.append(td)
            continue
        for t2 in lifts_of.get(td.label, ()):
            dtrans.append(Transition(td.src, td.top, t2, td.dst, td.pushed))
    from .core import mkalphabet

    dpda2 = Pda(pdt.dpda.states, mkalphabet(tuple(annotated.transitions)),
                pdt.dpda.stack_alphabet, pdt.dpda.initial, tuple(dtrans),
                pdt.dpda.finals)

    output2: dict = {}
    for state, table in pdt.output.items():
        out: dict = {}
        for (q, a_state, letter), tau in table.items():
            if tau.top is None:
                if a_state == s_bot:
                    lifted = lift_index.get((tau, None))
                    if lifted is not None:
                        out[(q, None, letter)] = lifted
            else:
                for sp in tuple(dfa.states) + (U_MARK,):
                    top2 = (tau.top, a_state, sp)
                    lifted = lift_index.get((tau, top2))
                    if lifted is not None:
                        out[(q, top2, letter)] = lifted
        output2[state] = out
    return annotated, PdTransducer(dpda2, output2, stack_dfa=None,
                                   kind="pushdown-transducer")


# ---------------------------------------------------------------------------
# Bounded brute-force oracles


@dataclass
class ConfigGraph:
    nodes: set = field(default_factory=set)
    edges: set = field(default_factory=set)  # (config, label, config)


def bounded_config_graph(pda: Pda, max_height: int, max_len: int) -> ConfigGraph:
    """All configurations reachable processing at most ``max_len`` letters
    while the stack stays within ``max_height``; epsilon chains are explored
    inside the same bounds."""
    if max_height < 0 or max_len < 0:
        raise AutomatonError("bounds must be nonnegative")
    g = ConfigGraph()
    init = pda.initial_config()
    frontier = {(init, 0)}
    seen = {(init, 0)}
    g.nodes.add(init)
    while frontier:
        nxt = set()
        for (cfg, used) in frontier:
            for label in (None,) + pda.alphabet.letters:
                if label is not None and used >= max_len:
                    continue
                for t in enabled(pda, cfg, label):
                    c2 = step(cfg, t)
                    if c2.stack_height > max_height:
                        continue
                    g.nodes.add(c2)
                    g.edges.add((cfg, label, c2))
                    key = (c2, used + (0 if label is None else 1))
                    if key not in seen:
                        seen.add(key)
                        nxt.add(key)
        frontier = nxt
    return g


def _eps_closure(pda: Pda, configs: frozenset, max_height: int) -> frozenset:
    out = set(configs)
    todo = list(configs)
    while todo:
        c = todo.pop()
        for t in enabled(pda, c, None):
            c2 = step(c, t)
            if c2.stack_height > max_height or c2 in out:
                continue
            out.add(c2)
            todo.append(c2)
    return frozenset(out)


def bounded_membership(pda: Pda, word, max_height: int | None = None,
                       semantics: str = "plain") -> bool:
    """Word membership by explicit configuration-set tracking.

    Exact whenever accepting runs fit under ``max_height``; an oracle, not a
    decision procedure.  ``semantics`` is "plain" (trailing epsilons allowed)
    or "last-letter" (the run must accept as the final letter is processed).
    """
    word = tuple(word)
    if max_height is None:
        max_height = len(word) + 2
    if not word:
        if semantics == "plain":
            cur = _eps_closure(pda, frozenset({pda.initial_config()}), max_height)
            return any(pda.is_final(c.state) for c in cur)
        return pda.is_final(pda.initial)
    cur = _eps_closure(pda, frozenset({pda.initial_config()}), max_height)
    post: frozenset = frozenset()
    for a in word:
        post = frozenset(
            step(c, t) for c in cur for t in enabled(pda, c, a)
            if step(c, t).stack_height <= max_height
        )
        cur = _eps_closure(pda, post, max_height)
    if semantics == "plain":
        return any(pda.is_final(c.state) for c in cur)
    return any(pda.is_final(c.state) for c in post)


def bounded_language(pda: Pda, max_len: int, max_height: int | None = None,
                     semantics: str = "plain") -> set:
    """All accepted words up to ``max_len``, sharing work across prefixes."""
    if max_height is None:
        max_height = max_len + 2
    out = set()
    init = _eps_closure(pda, frozenset({pda.initial_config()}), max_height)
    if semantics == "plain":
        if any(pda.is_final(c.state) for c in init):
            out.add(())
    elif pda.is_final(pda.initial):
        out.add(())
    stack = [((), init)]
    while stack:
        word, cur = stack.pop()
        if len(word) >= max_len:
            continue
        for a in pda.alphabet.letters:
            post = frozenset(
                step(c, t) for c in cur for t in enabled(pda, c, a)
                if step(c, t).stack_height <= max_height
            )
            if not post:
                continue
            closed = _eps_closure(pda, post, max_height)
            w2 = word + (a,)
            hits = post if semantics == "last-letter" else closed
            if any(pda.is_final(c.state) for c in hits):
                out.add(w2)
            stack.append((w2, closed))
    return out
