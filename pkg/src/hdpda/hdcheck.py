"""Deciding history-determinism of VPA via the one-token game, resolver
extraction as a visibly pushdown transducer, and a bounded letter-game
search used as an independent cross-validation oracle."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    EOW,
    AutomatonError,
    Pda,
    PdTransducer,
    Resolver,
    Transition,
    complete,
    enabled,
    mkalphabet,
    step,
)
from .vpa import vpa_validate
from .vpg import EVE, GBOT, Move, VpGame, solve_vpg


def _reachable_modes(vpa: Pda) -> set:
    """(state, top) pairs reachable in some run (pop landings propagated to
    the tops recorded at matching calls; an over-approximation)."""
    by_mode: dict = {}
    for t in vpa.transitions:
        by_mode.setdefault((t.src, t.top), []).append(t)
    part = vpa.alphabet.partition
    call_tops: dict = {}  # pushed symbol -> tops seen below at call time
    pop_land: dict = {}   # pushed symbol -> states popped to
    modes = set()
    todo = [(vpa.initial, None)]
    while todo:
        mode = todo.pop()
        if mode in modes:
            continue
        modes.add(mode)
        (q, x) = mode
        for t in by_mode.get(mode, ()):
            cls = part.class_of(t.label)
            if cls == "internal" or (cls == "return" and x is None):
                todo.append((t.dst, x))
            elif cls == "call":
                y = t.pushed[1]
                call_tops.setdefault(y, set()).add(x)
                for q_l in pop_land.get(y, ()):
                    todo.append((q_l, x))
                todo.append((t.dst, y))
            else:
                pop_land.setdefault(x, set()).add(t.dst)
                for below in call_tops.get(x, ()):
                    todo.append((t.dst, below))
    return modes


def _reachable_pairs(vpa: Pda) -> set:
    """State pairs jointly reachable on a common word (lockstep but with the
    stack correlation dropped; a safe over-approximation for restricting the
    arena).  Transitions from unreachable modes are ignored."""
    modes = _reachable_modes(vpa)
    succ: dict = {}
    for t in vpa.transitions:
        if (t.src, t.top) in modes:
            succ.setdefault((t.src, t.label), set()).add(t.dst)
    init = (vpa.initial, vpa.initial)
    pairs = {init}
    todo = [init]
    while todo:
        (q2, q1) = todo.pop()
        for a in vpa.alphabet.letters:
            for d2 in succ.get((q2, a), ()):
                for d1 in succ.get((q1, a), ()):
                    if (d2, d1) not in pairs:
                        pairs.add((d2, d1))
                        todo.append((d2, d1))
    return pairs


def one_token_position_bound(vpa: Pda) -> int:
    """Documented bound on the number of positions of the one-token game of
    the completed automaton: |Q|^2 (1 + |Sigma| + i + r + c |Gamma|) with c/r/i
    the numbers of call/return/internal letters."""
    vc = complete(vpa_validate(vpa))
    part = vc.alphabet.partition
    n = len(vc.states)
    c = len(part.calls)
    r = len(part.returns)
    i = len(part.internals)
    g = len(vc.stack_alphabet)
    return n * n * (1 + (c + r + i) + i + r + c * g)


def build_one_token_game(vpa: Pda) -> VpGame:
    """The one-token game of a VPA on the lockstep product arena.

    The automaton is completed first.  Positions: ("L", q2, q1) Adam picks a
    letter; ("E", a, q2, q1) Eve picks her a-transition; ("A", a, q2', tag,
    q1) Adam picks his, after which the joint stack action fires (tag is
    Eve's pushed symbol on calls).  Game stack symbols are pairs of automaton
    symbols, Eve's component first.  Safety for Eve: letter positions where
    Adam's run is accepting and Eve's is not are bad.
    """
    vc = complete(vpa_validate(vpa))
    part = vc.alphabet.partition
    gamma = vc.stack_alphabet
    modes = _reachable_modes(vc)
    by_state_letter: dict = {}
    for t in vc.transitions:
        if (t.src, t.top) in modes:
            by_state_letter.setdefault((t.src, t.label), []).append(t)

    pairs = _reachable_pairs(vc)
    positions: list = []
    known: set = set()
    eve: set = set()
    moves: list = []
    bad: set = set()

    def add(pos, owner_eve: bool) -> bool:
        if pos in known:
            return False
        known.add(pos)
        positions.append(pos)
        if owner_eve:
            eve.add(pos)
        return True

    def eve_gates(x2):
        # the game top is (eve sym, adam sym); GBOT when both stacks are empty
        if x2 is None:
            return (GBOT,)
        return tuple((x2, x1) for x1 in gamma)

    def adam_gates(x1):
        if x1 is None:
            return (GBOT,)
        return tuple((x2, x1) for x2 in gamma)

    for (q2, q1) in pairs:
        lpos = ("L", q2, q1)
        add(lpos, owner_eve=False)
        if q1 in vc.finals and q2 not in vc.finals:
            bad.add(lpos)
            continue
        for a in vc.alphabet.letters:
            cls = part.class_of(a)
            epos = ("E", a, q2, q1)
            add(epos, owner_eve=True)
            moves.append(Move(lpos, epos, "internal"))
            for t2 in by_state_letter.get((q2, a), ()):
                tag = t2.pushed[1] if cls == "call" else ()
                apos = ("A", a, t2.dst, tag, q1)
                for g in eve_gates(t2.top):
                    moves.append(Move(epos, apos, "internal", top=g, note=t2))
                if not add(apos, owner_eve=False):
                    continue
                for t1 in by_state_letter.get((q1, a), ()):
                    dst = ("L", t2.dst, t1.dst)
                    if cls == "internal":
                        for g in adam_gates(t1.top):
                            moves.append(Move(apos, dst, "internal", top=g,
                                              note=t1))
                    elif cls == "call":
                        sym = (tag, t1.pushed[1])
                        for g in adam_gates(t1.top):
                            moves.append(Move(apos, dst, "push", top=g,
                                              push_sym=sym, note=t1))
                    elif t1.top is None:
                        moves.append(Move(apos, dst, "internal", top=GBOT,
                                          note=t1))
                    else:
                        for g in adam_gates(t1.top):
                            if g == GBOT:
                                continue
                            moves.append(Move(apos, dst, "pop", top=g,
                                              note=t1))
    syms = tuple((y2, y1) for y2 in gamma for y1 in gamma)
    adam = frozenset(known) - frozenset(eve)
    return VpGame(tuple(positions), frozenset(eve), adam, syms, tuple(moves),
                  ("L", vc.initial, vc.initial), ("safety", frozenset(bad)))


@dataclass
class OneTokenAnalysis:
    vpa: Pda
    completed: Pda
    game: VpGame
    solution: object

    @property
    def is_hd(self) -> bool:
        return self.solution.winner == EVE


def analyze_one_token(vpa: Pda) -> OneTokenAnalysis:
    vc = complete(vpa_validate(vpa))
    game = build_one_token_game(vpa)
    return OneTokenAnalysis(vpa, vc, game, solve_vpg(game))


def vpa_is_hd(vpa: Pda) -> bool:
    """True iff Eve (Player 2) wins the one-token game."""
    return analyze_one_token(vpa).is_hd


# ---------------------------------------------------------------------------
# Resolver extraction


class ExtractedResolver(Resolver):
    """Replays Eve's one-token strategy along the copycat diagonal.

    Produces an accepting run of the automaton on every word it accepts.  On
    dead prefixes it falls back to completion transitions, which are legal
    only when run against the completed automaton.
    """

    kind = "pushdown-transducer"

    def __init__(self, analysis: OneTokenAnalysis):
        if analysis.solution.winner != EVE:
            raise AutomatonError("not HD")
        self.analysis = analysis
        self.sol = analysis.solution
        self.vc = analysis.completed

    def choose(self, run, letter):
        if letter is EOW:
            return None
        sol = self.sol
        key = sol.bottom_key
        frames: list = []
        state = self.vc.initial
        for t in run.transitions:
            cls = self.vc.alphabet.partition.class_of(t.label)
            if cls == "call":
                frames.append(key)
                sym = (t.pushed[1], t.pushed[1])
                key = (sym, sol.claims[key])
            elif cls == "return" and t.top is not None:
                key = frames.pop()
            state = t.dst
        move = sol.strategies.get(key, {}).get(("E", letter, state, state))
        if move is not None:
            return move.note
        ts = enabled(self.vc, run.last, letter)
        return ts[0] if ts else None


def extract_resolver(vpa: Pda) -> PdTransducer:
    """Visibly pushdown transducer implementing a resolver for an HD-VPA.

    Transducer states are the level tags (game stack symbol, claim) of the
    solved one-token game; its own stack holds one tag frame per pending call
    and the output function reads only the current mode.  Raises "not HD"
    otherwise.  ``pdt.resolver`` carries the equivalent stateless resolver
    and ``pdt.controlled`` the completed automaton.
    """
    analysis = analyze_one_token(vpa)
    if not analysis.is_hd:
        raise AutomatonError("not HD")
    sol = analysis.solution
    vc = analysis.completed
    part = vc.alphabet.partition

    key_ids: dict = {}
    keys_back: list = []

    def kid(key) -> int:
        if key not in key_ids:
            key_ids[key] = len(keys_back)
            keys_back.append(key)
        return key_ids[key]

    # closure over diagonal plays: nodes (key id, transducer top, vpa state)
    trans: dict = {}
    outputs: dict = {}
    seen: set = set()
    call_tops: dict = {}    # key id -> tops seen when a call fired there
    pop_into: dict = {}     # key id -> vpa states popped back into it
    start = (kid(sol.bottom_key), None, vc.initial)
    todo = [start]
    while todo:
        node = todo.pop()
        if node in seen:
            continue
        seen.add(node)
        (sid, top, q) = node
        key = keys_back[sid]
        theta = key[0]
        x = None if theta == GBOT else theta[0]
        for a in vc.alphabet.letters:
            move = sol.strategies.get(key, {}).get(("E", a, q, q))
            if move is None:
                continue
            t2 = move.note
            outputs.setdefault(sid, {})[(q, x, a)] = t2
            cls = part.class_of(a)
            if cls == "internal" or (cls == "return" and x is None):
                keep = (None,) if top is None else (top,)
                trans[(sid, top, t2)] = (sid, keep)
                todo.append((sid, top, t2.dst))
            elif cls == "call":
                sym = (t2.pushed[1], t2.pushed[1])
                child = kid((sym, sol.claims[key]))
                base = (None,) if top is None else (top,)
                trans[(sid, top, t2)] = (child, base + (sid,))
                call_tops.setdefault(sid, set()).add(top)
                for q_l in pop_into.get(sid, ()):
                    todo.append((sid, top, q_l))
                todo.append((child, sid, t2.dst))
            else:
                parent = top  # frame is the parent key id
                trans[(sid, top, t2)] = (parent, ())
                pop_into.setdefault(parent, set()).add(t2.dst)
                for pt in call_tops.get(parent, ()):
                    todo.append((parent, pt, t2.dst))

    states = tuple(range(len(keys_back)))
    letters = tuple(vc.transitions)
    dtrans = tuple(
        Transition(sid, top, tau, dst, pushed)
        for (sid, top, tau), (dst, pushed) in sorted(trans.items(), key=repr)
    )
    dpda = Pda(states, mkalphabet(letters), states,
               kid(sol.bottom_key), dtrans, frozenset())
    pdt = PdTransducer(dpda, outputs, kind="pushdown-transducer")
    pdt.resolver = ExtractedResolver(analysis)
    pdt.controlled = vc
    return pdt


# ---------------------------------------------------------------------------
# Bounded letter game oracle


def letter_game_bounded(pda: Pda, max_len: int, eps_budget: int | None = None,
                        max_height: int | None = None) -> str:
    """Exhaustive letter-game search truncated at ``max_len`` letters.

    Returns "challenger" when Challenger forces a violation within the
    horizon against every (epsilon-budgeted) Resolver response, "resolver"
    when Resolver survives all Challenger plays up to the horizon, and
    "unknown" when a survival verdict was affected by the epsilon budget or
    the stack cap.  For VPA the search is untruncated, so both verdicts are
    exact within the horizon.
    """
    if eps_budget is None:
        eps_budget = max_len + 2
    if max_height is None:
        max_height = max_len + 2
    truncated = [False]
    letters = pda.alphabet.letters

    def closure(configs) -> frozenset:
        out = set(configs)
        todo = list(configs)
        while todo:
            c = todo.pop()
            for t in enabled(pda, c, None):
                c2 = step(c, t)
                if c2.stack_height > max_height:
                    truncated[0] = True
                    continue
                if c2 not in out:
                    out.add(c2)
                    todo.append(c2)
        return frozenset(out)

    def responses(cfg, a) -> set:
        """Resolver end configurations: epsilon chain then one a-transition."""
        chain = {cfg}
        frontier = {cfg}
        for _ in range(eps_budget):
            nxt = set()
            for c in frontier:
                for t in enabled(pda, c, None):
                    c2 = step(c, t)
                    if c2.stack_height > max_height:
                        truncated[0] = True
                    elif c2 not in chain:
                        chain.add(c2)
                        nxt.add(c2)
            if not nxt:
                break
            frontier = nxt
        else:
            if any(enabled(pda, c, None) for c in frontier):
                truncated[0] = True
        ends = set()
        for c in chain:
            for t in enabled(pda, c, a):
                c2 = step(c, t)
                if c2.stack_height > max_height:
                    truncated[0] = True
                else:
                    ends.add(c2)
        return ends

    def step_frontier(frontier, a) -> frozenset:
        out = set()
        for c in frontier:
            for t in enabled(pda, c, a):
                c2 = step(c, t)
                if c2.stack_height > max_height:
                    truncated[0] = True
                else:
                    out.add(c2)
        return closure(out)

    def in_language(frontier) -> bool:
        return any(pda.is_final(c.state) for c in frontier)

    def can_accept_within(frontier, k) -> bool:
        layer = {frontier}
        for _ in range(k):
            nxt = set()
            for f in layer:
                for a in letters:
                    f2 = step_frontier(f, a)
                    if not f2:
                        continue
                    if in_language(f2):
                        return True
                    nxt.add(f2)
            layer = nxt
            if not layer:
                return False
        return False

    memo: dict = {}

    def challenger_wins(cfg, frontier, k) -> bool:
        keym = (cfg, frontier, k)
        if keym in memo:
            return memo[keym]
        if in_language(frontier) and not pda.is_final(cfg.state):
            memo[keym] = True
            return True
        if k == 0:
            memo[keym] = False
            return False
        result = False
        for a in letters:
            f2 = step_frontier(frontier, a)
            if not f2:
                continue  # the word is dead forever, no violation can arise
            ends = responses(cfg, a)
            if not ends:
                if in_language(f2) or can_accept_within(f2, k - 1):
                    result = True
                    break
                continue
            if all(challenger_wins(c2, f2, k - 1) for c2 in ends):
                result = True
                break
        memo[keym] = result
        return result

    init = pda.initial_config()
    if challenger_wins(init, closure({init}), max_len):
        return "challenger"
    return "unknown" if truncated[0] else "resolver"
