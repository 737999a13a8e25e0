"""Gale-Stewart games with visibly pushdown winning conditions, universality
via games, good-enough synthesis, and arena-composition product games."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .core import (
    Alphabet,
    AutomatonError,
    Partition,
    Pda,
    Transition,
    replay,
)
from .hdcheck import extract_resolver, vpa_is_hd
from .vpa import vpa_determinize, vpa_validate
from .vpg import ADAM, EVE, GBOT, Move, VpGame, extract_strategy, solve_vpg

log = logging.getLogger(__name__)

END = "end"


@dataclass(frozen=True)
class Arena:
    """A finite labeled arena; end-edges lead to terminal positions."""

    positions: tuple
    p1: frozenset
    p2: frozenset
    edges: tuple  # (src, label, dst)
    initial: object

    def validate(self) -> list[str]:
        problems = []
        pos = set(self.positions)
        if self.initial not in pos:
            problems.append("initial position unknown")
        if self.p1 | self.p2 != pos or self.p1 & self.p2:
            problems.append("ownership is not a partition")
        out: dict = {}
        incoming: dict = {}
        for (s, lab, d) in self.edges:
            if s not in pos or d not in pos:
                problems.append(f"edge endpoints unknown: {(s, lab, d)}")
                continue
            out.setdefault(s, []).append(lab)
            incoming.setdefault(d, set()).add(lab == END)
        for p in pos:
            if out.get(p):
                if True in incoming.get(p, ()):
                    problems.append(f"end edge into non-terminal {p!r}")
            elif False in incoming.get(p, ()):
                problems.append(f"non-end edge into terminal {p!r}")
        return problems

    def owner(self, p) -> str:
        return ADAM if p in self.p1 else EVE

    def out_edges(self, p):
        return [e for e in self.edges if e[0] == p]


@dataclass(frozen=True)
class GsSpec:
    """A Gale-Stewart game specification: a product alphabet and a visibly
    pushdown condition automaton over it."""

    sigma1: tuple
    sigma2: tuple
    condition: Pda

    def validate(self) -> list[str]:
        problems = []
        want = {(a, b) for a in self.sigma1 for b in self.sigma2}
        if set(self.condition.alphabet.letters) != want:
            problems.append("condition alphabet is not the product alphabet")
        return problems


def safety_reduction(vpa: Pda) -> Pda:
    """Remove letter transitions into non-final states; the runs that survive
    are exactly those accepting after every single letter, so a word can be
    carried on iff all its prefixes are in the language."""
    keep = tuple(t for t in vpa.transitions
                 if t.label is None or t.dst in vpa.finals)
    return Pda(vpa.states, vpa.alphabet, vpa.stack_alphabet, vpa.initial,
               keep, vpa.finals, name=(vpa.name + "|safe" if vpa.name else ""))


def _gs_game(cond: Pda, sigma1, sigma2) -> VpGame:
    """Rounds: Adam picks a in sigma1, Eve picks b plus one (a, b)-transition
    of the safety reduction; stuck Eve positions are losing for Eve."""
    safe = safety_reduction(cond)
    by_state_letter: dict = {}
    for t in safe.transitions:
        by_state_letter.setdefault((t.src, t.label[0]), []).append(t)

    positions = []
    eve, adam, bad = set(), set(), set()
    moves = []
    reach = {cond.initial}
    todo = [cond.initial]
    while todo:
        q = todo.pop()
        apos = ("adam", q)
        positions.append(apos)
        adam.add(apos)
        for a in sigma1:
            epos = ("eve", q, a)
            positions.append(epos)
            eve.add(epos)
            moves.append(Move(apos, epos, "internal"))
            ts = by_state_letter.get((q, a), ())
            if not ts:
                bad.add(epos)  # statically stuck: Eve cannot answer a
                continue
            for t in ts:
                dst = ("adam", t.dst)
                cls = cond.alphabet.partition.class_of(t.label)
                if cls == "internal":
                    tops = (GBOT,) if t.top is None else (t.top,)
                    for g in tops:
                        moves.append(Move(epos, dst, "internal", top=g, note=t))
                elif cls == "call":
                    g = GBOT if t.top is None else t.top
                    moves.append(Move(epos, dst, "push", top=g,
                                      push_sym=t.pushed[1], note=t))
                elif t.top is None:
                    moves.append(Move(epos, dst, "internal", top=GBOT, note=t))
                else:
                    moves.append(Move(epos, dst, "pop", top=t.top, note=t))
                if t.dst not in reach:
                    reach.add(t.dst)
                    todo.append(t.dst)
    return VpGame(tuple(positions), frozenset(eve), frozenset(adam),
                  tuple(cond.stack_alphabet), tuple(moves),
                  ("adam", cond.initial), ("safety", frozenset(bad)))


class GsStrategy:
    """Player 2 strategy replayer: feed Player 1 letters, read off Player 2
    letters (and the transitions backing them)."""

    def __init__(self, solution, cond: Pda):
        self.play = extract_strategy(solution, EVE).new_play()
        self.cond = cond
        self.state = cond.initial

    def respond(self, a):
        epos = ("eve", self.state, a)
        # account for Adam's letter move
        move = self.play.choose(epos)
        if move is None:
            raise AutomatonError(f"no strategy move at {epos!r}")
        self.play.record(move)
        t = move.note
        self.state = t.dst
        return t.label[1], t


def solve_gale_stewart(spec: GsSpec, assume_hd: bool = False):
    """Winner of the Gale-Stewart game; when Player 2 wins, also a
    :class:`GsStrategy`.  The condition must be history-deterministic for the
    reduction to be sound; otherwise it is determinized first (logged)."""
    problems = spec.validate()
    if problems:
        raise AutomatonError("; ".join(problems))
    cond = vpa_validate(spec.condition)
    if not assume_hd and not vpa_is_hd(cond):
        log.warning("condition automaton is not HD; determinizing")
        cond = vpa_determinize(cond)
    game = _gs_game(cond, spec.sigma1, spec.sigma2)
    sol = solve_vpg(game)
    winner = 2 if sol.winner == EVE else 1
    return winner, (GsStrategy(sol, cond) if winner == 2 else None)


def universality_via_game(vpa: Pda) -> bool:
    """Universality by pairing every letter with a dummy output letter and
    solving the induced Gale-Stewart game."""
    vpa = vpa_validate(vpa)
    part = vpa.alphabet.partition
    lift = {a: (a, "#") for a in vpa.alphabet.letters}
    letters = tuple(lift[a] for a in vpa.alphabet.letters)
    alph = Alphabet(letters, Partition(
        frozenset(lift[a] for a in part.calls),
        frozenset(lift[a] for a in part.returns),
        frozenset(lift[a] for a in part.internals)))
    trans = tuple(
        Transition(t.src, t.top, lift[t.label], t.dst, t.pushed)
        for t in vpa.transitions
    )
    lifted = Pda(vpa.states, alph, vpa.stack_alphabet, vpa.initial, trans,
                 vpa.finals)
    spec = GsSpec(tuple(vpa.alphabet.letters), ("#",), lifted)
    winner, _ = solve_gale_stewart(spec)
    return winner == 2


# ---------------------------------------------------------------------------
# Good-enough synthesis


class GeSynthesizer:
    """Output function backed by the extracted resolver of the projection."""

    def __init__(self, projection: Pda, annotations: dict, pdt):
        self.projection = projection
        self.annotations = annotations
        self.pdt = pdt

    def outputs(self, word) -> list:
        """The Player 2 letters produced along ``word``; requires every
        prefix of ``word`` to be extendable inside the projection language."""
        resolver = self.pdt.resolver
        auto = self.pdt.controlled
        from .core import run_with_resolver

        run, _ = run_with_resolver(auto, resolver, word)
        out = []
        for t in run.transitions:
            key = (t.src, t.top, t.label, t.dst, t.pushed)
            out.append(self.annotations.get(key))
        return out


def ge_synthesis(vpa: Pda):
    """Good-enough synthesis for a condition over a product alphabet:
    realizable iff the first-component projection is HD; the synthesis
    function is then read off the extracted resolver's annotations.

    Returns (realizable, GeSynthesizer or None).
    """
    vpa = vpa_validate(vpa)
    part = vpa.alphabet.partition
    classes: dict = {}
    for (a, b) in vpa.alphabet.letters:
        classes.setdefault(a, set()).add(part.class_of((a, b)))
    for a, cs in classes.items():
        if len(cs) != 1:
            raise AutomatonError("visibility not first-component-determined")
    sigma1 = tuple(sorted(classes, key=repr))
    cls_of = {a: next(iter(cs)) for a, cs in classes.items()}
    alph = Alphabet(sigma1, Partition(
        frozenset(a for a in sigma1 if cls_of[a] == "call"),
        frozenset(a for a in sigma1 if cls_of[a] == "return"),
        frozenset(a for a in sigma1 if cls_of[a] == "internal")))
    proj_trans: dict = {}
    annotations: dict = {}
    for t in vpa.transitions:
        (a, b) = t.label
        key = (t.src, t.top, a, t.dst, t.pushed)
        if key not in proj_trans:
            proj_trans[key] = Transition(t.src, t.top, a, t.dst, t.pushed)
            annotations[key] = b
    projection = Pda(vpa.states, alph, vpa.stack_alphabet, vpa.initial,
                     tuple(proj_trans.values()), vpa.finals,
                     name=(vpa.name + "|proj" if vpa.name else "proj"))
    if not vpa_is_hd(projection):
        return False, None
    pdt = extract_resolver(projection)
    # completion transitions carry no annotation; only language words use them
    return True, GeSynthesizer(projection, annotations, pdt)


# ---------------------------------------------------------------------------
# Arena composition


def build_product_game(arena: Arena, vpa: Pda) -> VpGame:
    """The product game: the arena owner moves along labeled edges, Player 2
    answers non-end letters with one automaton transition; Player 2 wins by
    reaching a terminal arena position with a final automaton state.  All
    infinite plays lose for Player 2 (reachability objective)."""
    problems = arena.validate()
    if problems:
        raise AutomatonError("invalid arena: " + "; ".join(problems))
    vpa = vpa_validate(vpa)
    labels = {lab for (_, lab, _) in arena.edges if lab != END}
    if not labels <= set(vpa.alphabet.letters):
        raise AutomatonError("alphabet mismatch between arena and automaton")
    part = vpa.alphabet.partition
    by_state_letter: dict = {}
    for t in vpa.transitions:
        by_state_letter.setdefault((t.src, t.label), []).append(t)

    positions: list = []
    eve, adam, target = set(), set(), set()
    moves: list = []
    init = ("ar", arena.initial, vpa.initial)
    seen = {init}
    todo = [init]
    while todo:
        pos = todo.pop()
        positions.append(pos)
        shape = pos[0]
        if shape == "done":
            eve.add(pos)  # terminal; Eve wins iff the state is final
            if vpa.is_final(pos[2]):
                target.add(pos)
            continue
        if shape == "ar":
            (_, v, q) = pos
            (eve if arena.owner(v) == EVE else adam).add(pos)
            for e in arena.out_edges(v):
                (_, lab, v2) = e
                nxt = ("done", v2, q) if lab == END else ("tr", e, q)
                moves.append(Move(pos, nxt, "internal"))
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        else:
            (_, (v, lab, v2), q) = pos
            eve.add(pos)
            for t in by_state_letter.get((q, lab), ()):
                dst = ("ar", v2, t.dst)
                cls = part.class_of(lab)
                if cls == "internal":
                    g = GBOT if t.top is None else t.top
                    moves.append(Move(pos, dst, "internal", top=g, note=t))
                elif cls == "call":
                    g = GBOT if t.top is None else t.top
                    moves.append(Move(pos, dst, "push", top=g,
                                      push_sym=t.pushed[1], note=t))
                elif t.top is None:
                    moves.append(Move(pos, dst, "internal", top=GBOT, note=t))
                else:
                    moves.append(Move(pos, dst, "pop", top=t.top, note=t))
                if dst not in seen:
                    seen.add(dst)
                    todo.append(dst)
    # positions without moves and outside the target lose for their owner,
    # which is the intended semantics for stuck run construction
    return VpGame(tuple(positions), frozenset(eve),
                  frozenset(p for p in positions if p not in eve),
                  tuple(vpa.stack_alphabet), tuple(moves), init,
                  ("reachability", frozenset(target)))


@dataclass
class CompositionalityReport:
    winner_with_automaton: str
    winner_with_determinization: str

    @property
    def compositional_here(self) -> bool:
        return self.winner_with_automaton == self.winner_with_determinization


def compositionality_check(arena: Arena, vpa: Pda) -> CompositionalityReport:
    """Instance-level compositionality: the product-game winner should be
    unchanged when the automaton is replaced by its determinization.  Equality
    is guaranteed for HD automata; a discrepancy witnesses non-HDness."""
    w1 = solve_vpg(build_product_game(arena, vpa)).winner
    w2 = solve_vpg(build_product_game(arena, vpa_determinize(vpa))).winner
    return CompositionalityReport(w1, w2)
