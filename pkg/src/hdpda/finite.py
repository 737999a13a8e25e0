"""Finite automata support: subset construction, products, and the HD-NFA
letter game with determinization by pruning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from .core import AutomatonError

DEAD = "__dead__"


@dataclass(frozen=True)
class Nfa:
    states: tuple
    letters: tuple
    initials: frozenset
    transitions: frozenset  # (src, letter, dst)
    finals: frozenset

    def successors(self, state, letter) -> frozenset:
        return frozenset(d for (s, a, d) in self.transitions
                         if s == state and a == letter)

    def step_set(self, states: frozenset, letter) -> frozenset:
        return frozenset(d for (s, a, d) in self.transitions
                         if s in states and a == letter)

    def accepts(self, word) -> bool:
        cur = self.initials
        for a in word:
            cur = self.step_set(cur, a)
        return bool(cur & self.finals)


@dataclass(frozen=True)
class Dfa:
    states: tuple
    letters: tuple
    initial: Hashable
    delta: dict  # (state, letter) -> state, total
    finals: frozenset

    def __post_init__(self):
        for q in self.states:
            for a in self.letters:
                if (q, a) not in self.delta:
                    raise AutomatonError(f"partial DFA: no move for ({q!r},{a!r})")

    def run(self, word, start=None):
        q = self.initial if start is None else start
        for a in word:
            q = self.delta[(q, a)]
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.finals

    def as_nfa(self) -> Nfa:
        return Nfa(self.states, self.letters, frozenset({self.initial}),
                   frozenset((s, a, d) for (s, a), d in self.delta.items()),
                   self.finals)


def mknfa(states, letters, initials, transitions, finals) -> Nfa:
    return Nfa(tuple(states), tuple(letters), frozenset(initials),
               frozenset(transitions), frozenset(finals))


def mkdfa(states, letters, initial, delta, finals) -> Dfa:
    return Dfa(tuple(states), tuple(letters), initial, dict(delta), frozenset(finals))


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction, reachable states only.

    Subset states are frozensets of NFA states; the empty set is the dead
    state, so the result is always complete.
    """
    init = frozenset(nfa.initials)
    by_src: dict[tuple, set] = {}
    for (s, a, d) in nfa.transitions:
        by_src.setdefault((s, a), set()).add(d)
    states = [init]
    seen = {init}
    delta = {}
    todo = [init]
    while todo:
        cur = todo.pop()
        for a in nfa.letters:
            nxt = frozenset(q for s in cur for q in by_src.get((s, a), ()))
            delta[(cur, a)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
                todo.append(nxt)
    finals = frozenset(s for s in states if s & nfa.finals)
    return Dfa(tuple(states), nfa.letters, init, delta, finals)


def product(a: Dfa, b: Dfa, mode: str) -> Dfa:
    """Synchronous product; ``mode`` is ``union`` or ``intersection``."""
    if set(a.letters) != set(b.letters):
        raise AutomatonError("alphabet mismatch in product")
    if mode not in ("union", "intersection"):
        raise AutomatonError(f"unknown product mode {mode!r}")
    init = (a.initial, b.initial)
    states = [init]
    seen = {init}
    delta = {}
    todo = [init]
    while todo:
        (p, q) = todo.pop()
        for x in a.letters:
            nxt = (a.delta[(p, x)], b.delta[(q, x)])
            delta[((p, q), x)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)
                todo.append(nxt)
    if mode == "union":
        finals = frozenset((p, q) for (p, q) in states
                           if p in a.finals or q in b.finals)
    else:
        finals = frozenset((p, q) for (p, q) in states
                           if p in a.finals and q in b.finals)
    return Dfa(tuple(states), a.letters, init, delta, finals)


def complement(a: Dfa) -> Dfa:
    return Dfa(a.states, a.letters, a.initial, a.delta,
               frozenset(a.states) - a.finals)


def dfa_is_empty(a: Dfa) -> bool:
    todo = [a.initial]
    seen = {a.initial}
    while todo:
        q = todo.pop()
        if q in a.finals:
            return False
        for x in a.letters:
            n = a.delta[(q, x)]
            if n not in seen:
                seen.add(n)
                todo.append(n)
    return True


def dfa_equivalent(a: Dfa, b: Dfa) -> bool:
    sym1 = product(a, complement(b), "intersection")
    sym2 = product(complement(a), b, "intersection")
    return dfa_is_empty(sym1) and dfa_is_empty(sym2)


def _live_subsets(det: Dfa) -> frozenset:
    """Subset states from which an accepting subset state is reachable."""
    rev: dict = {}
    for (q, a), d in det.delta.items():
        rev.setdefault(d, set()).add(q)
    live = set(det.finals)
    todo = list(live)
    while todo:
        q = todo.pop()
        for p in rev.get(q, ()):
            if p not in live:
                live.add(p)
                todo.append(p)
    return frozenset(live)


def _letter_game(nfa: Nfa):
    """The letter game on the product of ``nfa`` with its determinization.

    Positions are (q, S) (Resolver to see a letter) and (q, S, a) (Resolver to
    pick a q-successor).  Safety for Resolver: whenever S contains a final
    state, q is final.  Dead subsets (no final reachable) are safe forever.
    Returns (safe positions, strategy (q,S,a) -> q', initial position).
    """
    if len(nfa.initials) != 1:
        raise AutomatonError("letter game needs a single initial state")
    det = determinize(nfa)
    live = _live_subsets(det)
    (q0,) = tuple(nfa.initials)
    init = (q0, det.initial)

    positions = set()
    todo = [init]
    edges: dict = {}
    while todo:
        pos = todo.pop()
        if pos in positions:
            continue
        positions.add(pos)
        if len(pos) == 2:
            q, s = pos
            succ = [(q, s, a) for a in nfa.letters]
        else:
            q, s, a = pos
            s2 = det.delta[(s, a)]
            succ = [(d, s2) for d in nfa.successors(q, a)]
            if not succ and s2 not in live:
                succ = [(DEAD, s2)]  # safe stall: language is dead anyway
        edges[pos] = succ
        for n in succ:
            if n not in positions:
                todo.append(n)
    positions.update(n for succ in edges.values() for n in succ)

    def bad(pos) -> bool:
        if len(pos) != 2:
            return False
        q, s = pos
        if q == DEAD:
            return False
        return bool(s & nfa.finals) and q not in nfa.finals

    # Challenger attractor to bad or stuck-live positions.
    losing = set(p for p in positions if bad(p))
    losing.update(p for p in positions if len(p) == 3 and not edges.get(p))
    changed = True
    while changed:
        changed = False
        for p in positions:
            if p in losing or p not in edges:
                continue
            succ = edges[p]
            if len(p) == 2:  # Challenger picks any letter
                if any(n in losing for n in succ):
                    losing.add(p)
                    changed = True
            else:  # Resolver must have an escape
                if succ and all(n in losing for n in succ):
                    losing.add(p)
                    changed = True
    safe = positions - losing
    strategy = {}
    for p in safe:
        if len(p) == 3 and edges.get(p):
            for n in edges[p]:
                if n in safe:
                    strategy[p] = n[0]
                    break
    return safe, strategy, init, det


def nfa_is_hd(nfa: Nfa) -> bool:
    """True iff Resolver wins the letter game on the NFA."""
    safe, _, init, _ = _letter_game(nfa)
    return init in safe


def hd_nfa_prune(nfa: Nfa) -> Dfa:
    """Prune an HD-NFA to an equivalent DFA via a positional letter-game
    strategy: one representative subset position per NFA state."""
    safe, strategy, init, det = _letter_game(nfa)
    if init not in safe:
        raise AutomatonError("not HD")
    # Representative product position per NFA state, reached when the
    # Resolver plays the strategy and Challenger plays anything.
    rep: dict = {init[0]: init[1]}
    frontier = [init]
    visited = {init}
    while frontier:
        (q, s) = frontier.pop(0)
        for a in nfa.letters:
            nxt = strategy.get((q, s, a))
            if nxt is None:
                continue
            pos = (nxt, det.delta[(s, a)])
            if pos in visited:
                continue
            visited.add(pos)
            if nxt not in rep:
                rep[nxt] = pos[1]
            frontier.append(pos)

    states = list(rep) + [DEAD]
    delta = {}
    for q in rep:
        for a in nfa.letters:
            delta[(q, a)] = strategy.get((q, rep[q], a), DEAD)
    for a in nfa.letters:
        delta[(DEAD, a)] = DEAD
    finals = frozenset(q for q in rep if q in nfa.finals)
    return Dfa(tuple(states), nfa.letters, init[0], delta, finals)


def nfa_language(nfa: Nfa, max_len: int) -> set:
    """All accepted words of length <= max_len (exhaustive oracle)."""
    out = set()
    frontier = [((), nfa.initials)]
    while frontier:
        word, cur = frontier.pop()
        if cur & nfa.finals:
            out.add(word)
        if len(word) < max_len:
            for a in nfa.letters:
                nxt = nfa.step_set(cur, a)
                if nxt:
                    frontier.append((word + (a,), nxt))
    return out
