"""Visibly pushdown automata: validation, the summary determinization,
boolean closure and the ExpTime decision problems."""

from __future__ import annotations

import heapq

from .core import (
    AutomatonError,
    Configuration,
    Pda,
    Transition,
    complete,
    enabled,
    step,
    validate,
)


def vpa_violations(pda: Pda) -> list[str]:
    """Shape violations against the visible discipline (empty = valid VPA)."""
    problems = validate(pda)
    part = pda.alphabet.partition
    if part is None:
        problems.append("alphabet has no call/return/internal partition")
        return problems
    for t in pda.transitions:
        where = repr(t)
        if t.label is None:
            problems.append(f"epsilon transition {where}")
            continue
        cls = part.class_of(t.label)
        if cls == "call":
            ok = len(t.pushed) == 2 and t.pushed[0] == t.top and t.pushed[1] is not None
            if not ok:
                problems.append(f"call letter must push one symbol: {where}")
        elif cls == "return":
            if t.top is None:
                if t.pushed != (None,):
                    problems.append(f"return at empty stack must stay: {where}")
            elif t.pushed != ():
                problems.append(f"return letter must pop: {where}")
        else:
            if t.pushed != (t.top,):
                problems.append(f"internal letter must keep the stack: {where}")
    return problems


def vpa_validate(pda: Pda, partition=None) -> Pda:
    """Return the automaton as a validated VPA, attaching ``partition``
    (calls, returns, internals) if the alphabet does not carry one."""
    if partition is not None:
        from .core import Alphabet, Partition

        calls, returns, internals = partition
        alph = Alphabet(pda.alphabet.letters,
                        Partition(frozenset(calls), frozenset(returns),
                                  frozenset(internals)))
        pda = Pda(pda.states, alph, pda.stack_alphabet, pda.initial,
                  pda.transitions, pda.finals, name=pda.name)
    problems = vpa_violations(pda)
    if problems:
        raise AutomatonError("not a VPA: " + "; ".join(problems))
    return pda


# ---------------------------------------------------------------------------
# Summary determinization
#
# A summary state is a pair (S, R):
#   S: same-level summaries (q, g, q') keyed by the current-level context
#      symbol g (None at the bottom level),
#   R: currently reachable states with their context symbol.


def _grouped(vpa: Pda):
    part = vpa.alphabet.partition
    calls: dict = {}
    rets: dict = {}
    ints: dict = {}
    bot_rets: dict = {}
    for t in vpa.transitions:
        cls = part.class_of(t.label)
        if cls == "call":
            calls.setdefault((t.src, t.top, t.label), []).append(t)
        elif cls == "internal":
            ints.setdefault((t.src, t.top, t.label), []).append(t)
        elif t.top is None:
            bot_rets.setdefault((t.src, t.label), []).append(t)
        else:
            rets.setdefault((t.src, t.top, t.label), []).append(t)
    return calls, rets, ints, bot_rets


class _Summaries:
    """Update rules shared by determinization and single-word membership."""

    def __init__(self, vpa: Pda):
        self.vpa = vpa
        self.part = vpa.alphabet.partition
        self.calls, self.rets, self.ints, self.bot_rets = _grouped(vpa)

    def initial(self):
        qi = self.vpa.initial
        return (frozenset({(qi, None, qi)}), frozenset({(qi, None)}))

    def internal(self, state, a):
        s, r = state
        s2 = frozenset(
            (q, g, t.dst)
            for (q, g, q1) in s
            for t in self.ints.get((q1, g, a), ())
        )
        r2 = frozenset(
            (t.dst, g) for (q, g) in r for t in self.ints.get((q, g, a), ())
        )
        return (s2, r2)

    def call(self, state, a):
        """Returns (new summary state, frame to push)."""
        _, r = state
        s2 = set()
        r2 = set()
        for (q, g) in r:
            for t in self.calls.get((q, g, a), ()):
                gp = t.pushed[1]
                s2.add((t.dst, gp, t.dst))
                r2.add((t.dst, gp))
        return (frozenset(s2), frozenset(r2)), (state, a)

    def ret(self, state, a, frame):
        """Matched return: ``frame`` is (summary state at call time, letter)."""
        s, _ = state
        (s0, r0), call_letter = frame
        s2 = set()
        r2 = set()
        for (q0, g0, q1) in s0:
            for tc in self.calls.get((q1, g0, call_letter), ()):
                gp = tc.pushed[1]
                for (q2, g, q2p) in s:
                    if q2 != tc.dst or g != gp:
                        continue
                    for tr in self.rets.get((q2p, gp, a), ()):
                        s2.add((q0, g0, tr.dst))
        for (q0, g0) in r0:
            for tc in self.calls.get((q0, g0, call_letter), ()):
                gp = tc.pushed[1]
                for (q2, g, q2p) in s:
                    if q2 != tc.dst or g != gp:
                        continue
                    for tr in self.rets.get((q2p, gp, a), ()):
                        r2.add((tr.dst, g0))
        return (frozenset(s2), frozenset(r2))

    def ret_empty(self, state, a):
        s, r = state
        s2 = frozenset(
            (q, g, t.dst)
            for (q, g, q1) in s
            for t in self.bot_rets.get((q1, a), ())
        )
        r2 = frozenset(
            (t.dst, g) for (q, g) in r for t in self.bot_rets.get((q, a), ())
        )
        return (s2, r2)

    def is_final(self, state) -> bool:
        _, r = state
        return any(q in self.vpa.finals for (q, _) in r)


def vpa_determinize(vpa: Pda) -> Pda:
    """Deterministic, complete, language-equal VPA over the same partition.

    States are reachable summary states, hash-consed to small integers; the
    stack alphabet consists of (summary state, call letter) frames.  Only
    (state, top) pairs reachable in the configuration graph get transitions,
    so pop landings are propagated to a fixpoint.
    """
    vpa = vpa_validate(vpa)
    part = vpa.alphabet.partition
    upd = _Summaries(vpa)

    intern: dict = {}
    rev: list = []

    def iid(state) -> int:
        if state not in intern:
            intern[state] = len(rev)
            rev.append(state)
        return intern[state]

    frame_intern: dict = {}
    frame_rev: list = []

    def fid(state_id, a):
        key = (state_id, a)
        if key not in frame_intern:
            frame_intern[key] = ("F", len(frame_rev))
            frame_rev.append(key)
        return frame_intern[key]

    d0 = iid(upd.initial())
    pairs: set = set()
    tops_of: dict = {}       # state id -> set of tops seen
    ret_landing: dict = {}   # call-state id -> set of landing state ids
    trans: dict = {}         # (state id, top, letter) -> action
    pending = [(d0, None)]

    while pending:
        pair = pending.pop()
        if pair in pairs:
            continue
        pairs.add(pair)
        (did, top) = pair
        tops_of.setdefault(did, set()).add(top)
        # a new top below a call state propagates to all known pop landings
        for d2 in ret_landing.get(did, ()):
            pending.append((d2, top))
        state = rev[did]
        for a in vpa.alphabet.letters:
            cls = part.class_of(a)
            if cls == "internal":
                d2 = iid(upd.internal(state, a))
                trans[(did, top, a)] = ("int", d2)
                pending.append((d2, top))
            elif cls == "call":
                nxt, _ = upd.call(state, a)
                d2 = iid(nxt)
                trans[(did, top, a)] = ("call", d2, fid(did, a))
                pending.append((d2, fid(did, a)))
            elif top is None:
                d2 = iid(upd.ret_empty(state, a))
                trans[(did, top, a)] = ("retbot", d2)
                pending.append((d2, None))
            else:
                (cid, ca) = frame_rev[top[1]]
                d2 = iid(upd.ret(state, a, (rev[cid], ca)))
                trans[(did, top, a)] = ("ret", d2)
                ret_landing.setdefault(cid, set()).add(d2)
                for below in tops_of.get(cid, ()):
                    pending.append((d2, below))

    out_trans = []
    for (did, top, a), action in sorted(trans.items(), key=repr):
        if action[0] == "int":
            out_trans.append(Transition(did, top, a, action[1],
                                        (top,) if top is not None else (None,)))
        elif action[0] == "call":
            base = (top,) if top is not None else (None,)
            out_trans.append(Transition(did, top, a, action[1],
                                        base + (action[2],)))
        elif action[0] == "retbot":
            out_trans.append(Transition(did, None, a, action[1], (None,)))
        else:
            out_trans.append(Transition(did, top, a, action[1], ()))
    states = tuple(range(len(rev)))
    finals = frozenset(i for i, st in enumerate(rev) if upd.is_final(st))
    syms = tuple(frame_intern[k] for k in sorted(frame_intern, key=repr))
    return Pda(states, vpa.alphabet, syms, d0, tuple(out_trans), finals,
               name=(vpa.name + "|det" if vpa.name else "det"))


def vpa_membership(vpa: Pda, word) -> bool:
    """On-the-fly determinization along the single input word."""
    part = vpa.alphabet.partition
    if part is None:
        raise AutomatonError("membership needs a partitioned alphabet")
    upd = _Summaries(vpa)
    state = upd.initial()
    frames: list = []
    for a in word:
        cls = part.class_of(a)
        if cls == "internal":
            state = upd.internal(state, a)
        elif cls == "call":
            state, frame = upd.call(state, a)
            frames.append(frame)
        elif frames:
            state = upd.ret(state, a, frames.pop())
        else:
            state = upd.ret_empty(state, a)
    return upd.is_final(state)


def vpa_accepts_from(vpa: Pda, configs, word) -> bool:
    """Membership from explicit start configurations (no epsilon moves, so
    configuration sets stay small for short suffixes)."""
    cur = set(configs)
    for a in word:
        cur = {step(c, t) for c in cur for t in enabled(vpa, c, a)}
        if not cur:
            return False
    return any(vpa.is_final(c.state) for c in cur)


def vpa_product(a: Pda, b: Pda, mode: str) -> Pda:
    """Synchronized product with paired stacks; ``union`` completes both
    inputs first so the product never starves a run."""
    if mode not in ("union", "intersection"):
        raise AutomatonError(f"unknown product mode {mode!r}")
    pa, pb = a.alphabet.partition, b.alphabet.partition
    if (tuple(a.alphabet.letters) != tuple(b.alphabet.letters)
            or pa is None or pa != pb):
        raise AutomatonError("alphabet or partition mismatch")
    if mode == "union":
        a, b = complete(a), complete(b)
    part = a.alphabet.partition

    by_letter_a: dict = {}
    by_letter_b: dict = {}
    for t in a.transitions:
        by_letter_a.setdefault(t.label, []).append(t)
    for t in b.transitions:
        by_letter_b.setdefault(t.label, []).append(t)

    trans = []
    for letter in a.alphabet.letters:
        cls = part.class_of(letter)
        for ta in by_letter_a.get(letter, ()):
            for tb in by_letter_b.get(letter, ()):
                if (ta.top is None) != (tb.top is None):
                    continue  # heights move in lockstep, bottoms coincide
                src = (ta.src, tb.src)
                dst = (ta.dst, tb.dst)
                top = None if ta.top is None else (ta.top, tb.top)
                if cls == "call":
                    base = (top,) if top is not None else (None,)
                    pushed = base + ((ta.pushed[1], tb.pushed[1]),)
                elif cls == "internal":
                    pushed = (top,) if top is not None else (None,)
                else:
                    pushed = (None,) if top is None else ()
                trans.append(Transition(src, top, letter, dst, pushed))
    states = tuple((qa, qb) for qa in a.states for qb in b.states)
    syms = tuple((xa, xb) for xa in a.stack_alphabet for xb in b.stack_alphabet)
    if mode == "union":
        finals = frozenset((qa, qb) for (qa, qb) in states
                           if qa in a.finals or qb in b.finals)
    else:
        finals = frozenset((qa, qb) for (qa, qb) in states
                           if qa in a.finals and qb in b.finals)
    return Pda(states, a.alphabet, syms, (a.initial, b.initial), tuple(trans),
               finals)


def vpa_complement(vpa: Pda) -> Pda:
    """Determinize (complete by construction) and flip final states."""
    det = vpa_determinize(vpa)
    return Pda(det.states, det.alphabet, det.stack_alphabet, det.initial,
               det.transitions, frozenset(det.states) - det.finals,
               name=(vpa.name + "|comp" if vpa.name else "comp"))


# ---------------------------------------------------------------------------
# Emptiness by demand-driven summary reachability (shortest witnesses)


def vpa_emptiness(vpa: Pda) -> tuple[bool, tuple | None]:
    """(is empty, shortest witness word or None).

    Weighted derivation of level entries E(e, g) (absolute distance from the
    initial configuration) and same-level summaries S(e, g, q) (entry distance
    plus within-level length), closed in Dijkstra order so the first settled
    accepting summary yields a shortest accepted word.
    """
    vpa = vpa_validate(vpa)
    calls, rets, ints, bot_rets = _grouped(vpa)
    rets_by_srctop: dict = {}
    for (src, top, _), ts in rets.items():
        rets_by_srctop.setdefault((src, top), []).extend(ts)

    # facts: ("E", e, g) and ("S", e, g, q) -> [dist, settled]
    dist: dict = {}
    parent: dict = {}
    heap: list = []
    counter = 0

    def push(fact, d, par):
        nonlocal counter
        cur = dist.get(fact)
        if cur is None or (not cur[1] and d < cur[0]):
            dist[fact] = [d, False]
            parent[fact] = par
            counter += 1
            heapq.heappush(heap, (d, counter, fact))

    def rel(s_fact) -> int:
        """Within-level length of a settled summary."""
        (_, e, g, _) = s_fact
        return dist[s_fact][0] - dist[("E", e, g)][0]

    # call contexts waiting for inner summaries: (entry, g2) -> [(outer S, letter)]
    waiting: dict = {}
    settled_inner: dict = {}  # (entry, g2) -> list of settled S facts

    push(("E", vpa.initial, None), 0, ("root",))
    best = None

    while heap and best is None:
        d, _, fact = heapq.heappop(heap)
        if dist[fact][1] or d > dist[fact][0]:
            continue
        dist[fact][1] = True
        if fact[0] == "E":
            (_, e, g) = fact
            push(("S", e, g, e), d, ("base",))
            continue
        (_, e, g, q) = fact
        if q in vpa.finals:
            best = fact
            break
        for a in vpa.alphabet.letters:
            for t in ints.get((q, g, a), ()):
                push(("S", e, g, t.dst), d + 1, ("step", fact, a))
            if g is None:
                for t in bot_rets.get((q, a), ()):
                    push(("S", e, g, t.dst), d + 1, ("step", fact, a))
            for tc in calls.get((q, g, a), ()):
                g2 = tc.pushed[1]
                key = (tc.dst, g2)
                push(("E", tc.dst, g2), d + 1, ("call", fact, a))
                waiting.setdefault(key, []).append((fact, a))
                for inner in settled_inner.get(key, ()):
                    (_, _, _, q3) = inner
                    for tr in rets_by_srctop.get((q3, g2), ()):
                        push(("S", e, g, tr.dst), d + 2 + rel(inner),
                             ("nest", fact, a, inner, tr.label))
        # a settled summary serves as inner part of waiting call contexts
        settled_inner.setdefault((e, g), []).append(fact)
        for (outer, a) in waiting.get((e, g), ()):
            if not dist[outer][1]:
                continue
            (_, eo, go, _) = outer
            for tr in rets_by_srctop.get((q, g), ()):
                push(("S", eo, go, tr.dst),
                     dist[outer][0] + 2 + rel(fact),
                     ("nest", outer, a, fact, tr.label))

    if best is None:
        return True, None

    def rel_word(s_fact) -> tuple:
        par = parent[s_fact]
        if par[0] == "base":
            return ()
        if par[0] == "step":
            return rel_word(par[1]) + (par[2],)
        (_, outer, a, inner, r) = par
        return rel_word(outer) + (a,) + rel_word(inner) + (r,)

    def abs_word(e_fact) -> tuple:
        par = parent[e_fact]
        if par[0] == "root":
            return ()
        (_, outer_s, a) = par
        (_, eo, go, _) = outer_s
        return abs_word(("E", eo, go)) + rel_word(outer_s) + (a,)

    (_, e, g, _) = best
    return False, abs_word(("E", e, g)) + rel_word(best)


def vpa_universality(vpa: Pda) -> tuple[bool, tuple | None]:
    """(universal?, counterexample word when not)."""
    empty, cex = vpa_emptiness(vpa_complement(vpa))
    return empty, cex


def vpa_inclusion(a: Pda, b: Pda) -> tuple[bool, tuple | None]:
    """L(a) subseteq L(b), with a counterexample when it fails."""
    inter = vpa_product(a, vpa_complement(b), "intersection")
    empty, cex = vpa_emptiness(inter)
    return empty, cex


def vpa_equivalence(a: Pda, b: Pda) -> tuple[bool, tuple | None]:
    ok, cex = vpa_inclusion(a, b)
    if not ok:
        return False, cex
    ok, cex = vpa_inclusion(b, a)
    if not ok:
        return False, cex
    return True, None


def vpa_language(vpa: Pda, max_len: int) -> set:
    """Exhaustive accepted-word set up to ``max_len`` via configuration sets."""
    out = set()
    init = Configuration(vpa.initial, (None,))
    if vpa.is_final(vpa.initial):
        out.add(())
    stack = [((), frozenset({init}))]
    while stack:
        word, cur = stack.pop()
        if len(word) >= max_len:
            continue
        for a in vpa.alphabet.letters:
            nxt = frozenset(step(c, t) for c in cur for t in enabled(vpa, c, a))
            if not nxt:
                continue
            w2 = word + (a,)
            if any(vpa.is_final(c.state) for c in nxt):
                out.add(w2)
            stack.append((w2, nxt))
    return out
