"""Two-player safety and reachability games on visibly pushdown arenas.

The solver summarizes the infinite configuration game into finite per-level
games: a level is tagged by its stack symbol and by the claim, the set of
positions at which popping the level counts as an Eve win.  Claims are not
enumerated a priori; exactly the claims produced by the fixpoint appear.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable

from .core import AutomatonError

GBOT = "__gbot__"  # gate value for moves available only at empty stack

EVE = "eve"
ADAM = "adam"


def _other(player: str) -> str:
    return ADAM if player == EVE else EVE


@dataclass(frozen=True)
class Move:
    """A labeled game move.

    ``kind`` is internal/push/pop; ``top`` gates the move on the current top
    of stack (a symbol, ``GBOT`` for the empty stack, or ``None`` for any
    nonempty-compatible behaviour: internal moves with ``None`` apply at every
    top including the empty stack).  Pop moves must carry a symbol gate;
    empty-stack return behaviour is modeled as an internal move gated ``GBOT``.
    """

    src: Hashable
    dst: Hashable
    kind: str
    top: Hashable = None
    push_sym: Hashable = None
    note: Hashable = None  # free-form payload (e.g. the automaton transition)


@dataclass(frozen=True)
class VpGame:
    positions: tuple
    eve: frozenset
    adam: frozenset
    stack_syms: tuple
    moves: tuple
    initial: Hashable
    objective: tuple  # ("safety", bad) or ("reachability", target)

    # A position without applicable moves is terminal: its owner loses there
    # unless the objective already decides it.

    def validate(self) -> list[str]:
        problems = []
        pos = set(self.positions)
        if self.initial not in pos:
            problems.append("initial position unknown")
        if self.eve | self.adam != pos or self.eve & self.adam:
            problems.append("ownership is not a partition")
        kind, special = self.objective
        if kind not in ("safety", "reachability"):
            problems.append(f"unknown objective {kind!r}")
        if not special <= pos:
            problems.append("objective set contains unknown positions")
        syms = set(self.stack_syms)
        for m in self.moves:
            if m.src not in pos or m.dst not in pos:
                problems.append(f"move endpoints unknown: {m}")
            if m.kind not in ("internal", "push", "pop"):
                problems.append(f"unknown move kind {m.kind!r}")
            if m.kind == "push" and m.push_sym not in syms:
                problems.append(f"push of unknown symbol: {m}")
            if m.kind == "pop" and (m.top is None or m.top == GBOT):
                problems.append(f"pop move must be gated by a symbol: {m}")
        return problems

    def owner(self, p) -> str:
        return EVE if p in self.eve else ADAM


# ---------------------------------------------------------------------------
# Finite games


@dataclass
class FiniteGame:
    """Explicit two-player game with terminal verdicts and a default winner
    for infinite plays.  ``edges`` maps a node to (tag, successor) pairs."""

    nodes: list
    owner: dict
    edges: dict
    eve_sinks: frozenset
    adam_sinks: frozenset
    default: str


def solve_finite_game(fg: FiniteGame):
    """Returns (winner per node, strategy per node for its winner).

    The player who does not win infinite plays must force a terminal verdict;
    their winning region is a reachability attractor, the complement belongs
    to the defaulting player.  Stuck non-terminal nodes lose for their owner.
    """
    attacker = _other(fg.default)
    win: dict = {}
    strategy: dict = {}

    preds: dict = {}
    out_count: dict = {}
    for n in fg.nodes:
        es = fg.edges.get(n, ())
        out_count[n] = len(es)
        for (_, d) in es:
            preds.setdefault(d, []).append(n)

    attacker_sinks = fg.eve_sinks if attacker == EVE else fg.adam_sinks
    defender_sinks = fg.adam_sinks if attacker == EVE else fg.eve_sinks

    queue = deque()
    for n in fg.nodes:
        if n in attacker_sinks:
            win[n] = attacker
            queue.append(n)
        elif n in defender_sinks:
            win[n] = fg.default
        elif out_count[n] == 0:
            loser = fg.owner[n]
            win[n] = _other(loser)
            if win[n] == attacker:
                queue.append(n)

    remaining = dict(out_count)
    while queue:
        n = queue.popleft()
        for p in preds.get(n, ()):
            if p in win:
                continue
            if fg.owner[p] == attacker:
                win[p] = attacker
                for (tag, d) in fg.edges[p]:
                    if win.get(d) == attacker:
                        strategy[p] = (tag, d)
                        break
                queue.append(p)
            else:
                remaining[p] -= 1
                if remaining[p] == 0:
                    win[p] = attacker
                    queue.append(p)

    for n in fg.nodes:
        if n not in win:
            win[n] = fg.default
        if n in strategy or n in fg.eve_sinks or n in fg.adam_sinks:
            continue
        if fg.owner.get(n) == win[n] and fg.edges.get(n):
            for (tag, d) in fg.edges[n]:
                if win.get(d, fg.default) == win[n]:
                    strategy[n] = (tag, d)
                    break
    return win, strategy


# ---------------------------------------------------------------------------
# The summarizing solver


def _applicable(move: Move, theta) -> bool:
    if move.top is None:
        return move.kind != "pop"
    return move.top == theta


@dataclass
class VpgSolution:
    winner: str
    game: VpGame
    memo: dict          # key (theta, claim) -> frozenset of Eve-winning positions
    claims: dict        # key -> claim offered to children
    bottom_key: tuple
    pop_land: frozenset
    _strategy_solver: object = None
    _strategies: dict | None = None

    def eve_wins(self, position, key=None) -> bool:
        key = key or self.bottom_key
        return position in self.memo[key]

    @property
    def strategies(self) -> dict:
        """Per-key positional strategies (computed on first use)."""
        if self._strategies is None:
            self._strategies = self._strategy_solver()
        return self._strategies


EVE_SINK = ("__verdict__", EVE)
ADAM_SINK = ("__verdict__", ADAM)


def solve_vpg(g: VpGame):
    """Solve the game from (initial position, empty stack).

    Returns a :class:`VpgSolution`; ``solution.winner`` is "eve" or "adam"
    and :func:`extract_strategy` packages the winner's pushdown strategy.

    Level games are built only on the part reachable from level entries
    (initial position, push landings, pop landings) under the level's gate;
    all claim and verdict queries fall inside that part.
    """
    problems = g.validate()
    if problems:
        raise AutomatonError("invalid game: " + "; ".join(problems))
    kind, special = g.objective
    default = EVE if kind == "safety" else ADAM
    pop_land = frozenset(m.dst for m in g.moves if m.kind == "pop")
    entries = ({g.initial} | pop_land
               | {m.dst for m in g.moves if m.kind == "push"})
    bottom_key = (GBOT, frozenset())
    init_value = frozenset(g.positions) if kind == "safety" else frozenset()
    memo: dict = {bottom_key: init_value}

    moves_any: dict = {}
    moves_gated: dict = {}
    for m in g.moves:
        if m.top is None:
            moves_any.setdefault(m.src, []).append(m)
        else:
            moves_gated.setdefault((m.src, m.top), []).append(m)

    reach_cache: dict = {}

    def level_scope(theta) -> tuple:
        """Static per-gate scaffold: positions reachable from the entries,
        per-position move lists, and the push symbols occurring in scope."""
        if theta in reach_cache:
            return reach_cache[theta]
        scope = set()
        outs: dict = {}
        pushed: set = set()
        todo = [p for p in entries]
        while todo:
            p = todo.pop()
            if p in scope:
                continue
            scope.add(p)
            if p in special:
                continue
            out = [m for m in moves_any.get(p, ()) if m.kind != "pop"]
            out += moves_gated.get((p, theta), ())
            outs[p] = out
            for m in out:
                if m.kind == "internal" and m.dst not in scope:
                    todo.append(m.dst)
                elif m.kind == "push":
                    pushed.add(m.push_sym)
        result = (frozenset(scope), outs, frozenset(pushed))
        reach_cache[theta] = result
        return result

    def children_of(key) -> tuple:
        (theta, _) = key
        claim = memo[key] & pop_land
        _, _, pushed = level_scope(theta)
        return tuple((s, claim) for s in sorted(pushed, key=repr))

    def input_sig(key):
        kids = children_of(key)
        return (memo[key] & pop_land,
                tuple(memo.get(ck, init_value) for ck in kids))

    def build_level(key) -> FiniteGame:
        (theta, claim) = key
        claim_of_key = memo[key] & pop_land
        scope, outs, _ = level_scope(theta)
        edges = {}
        for p in scope:
            if p in special:
                continue
            out = []
            for m in outs[p]:
                if m.kind == "internal":
                    out.append((m, m.dst))
                elif m.kind == "push":
                    ck = (m.push_sym, claim_of_key)
                    if ck not in memo:
                        memo[ck] = init_value
                    verdict = EVE_SINK if m.dst in memo[ck] else ADAM_SINK
                    out.append((m, verdict))
                else:
                    out.append((m, EVE_SINK if m.dst in claim else ADAM_SINK))
            edges[p] = out
        owner = {p: g.owner(p) for p in scope}
        owner[EVE_SINK] = EVE
        owner[ADAM_SINK] = ADAM
        eve_sinks = {EVE_SINK}
        adam_sinks = {ADAM_SINK}
        if kind == "safety":
            adam_sinks |= set(special) & scope
        else:
            eve_sinks |= set(special) & scope
        nodes = list(scope) + [EVE_SINK, ADAM_SINK]
        return FiniteGame(nodes, owner, edges, frozenset(eve_sinks),
                          frozenset(adam_sinks), default)

    # Int-indexed solving tables per gate; only the terminal verdicts of push
    # and pop edges vary with the key, so predecessor lists are static.
    table_cache: dict = {}

    def theta_tables(theta):
        if theta in table_cache:
            return table_cache[theta]
        scope, outs, _ = level_scope(theta)
        pos_list = sorted(scope, key=repr)
        index = {p: i for i, p in enumerate(pos_list)}
        n = len(pos_list)
        owner_eve = [g.owner(p) == EVE for p in pos_list]
        is_special = [p in special for p in pos_list]
        succ: list = [[] for _ in range(n)]
        preds: list = [[] for _ in range(n)]
        pop_tests: list = []   # (node, landing position)
        push_tests: list = []  # (node, pushed symbol, landing position)
        for p in pos_list:
            i = index[p]
            for m in outs.get(p, ()):
                if m.kind == "internal":
                    j = index[m.dst]
                    succ[i].append(j)
                    preds[j].append(i)
                elif m.kind == "push":
                    push_tests.append((i, m.push_sym, m.dst))
                else:
                    pop_tests.append((i, m.dst))
        result = (pos_list, index, owner_eve, is_special, succ, preds,
                  pop_tests, push_tests)
        table_cache[theta] = result
        return result

    def solve_level(key) -> frozenset:
        (theta, claim) = key
        claim_of_key = memo[key] & pop_land
        (pos_list, index, owner_eve, is_special, succ, preds,
         pop_tests, push_tests) = theta_tables(theta)
        n = len(pos_list)
        attacker_eve = default != EVE
        # per-node counts of verdict edges favouring each side
        good = [0] * n   # attacker-win verdicts
        bad_v = [0] * n  # defender-win verdicts
        for (i, dstpos) in pop_tests:
            if (dstpos in claim) == attacker_eve:
                good[i] += 1
            else:
                bad_v[i] += 1
        for (i, sym, dstpos) in push_tests:
            ck = (sym, claim_of_key)
            if ck not in memo:
                memo[ck] = init_value
            if (dstpos in memo[ck]) == attacker_eve:
                good[i] += 1
            else:
                bad_v[i] += 1
        win_att = [False] * n
        # counter: non-attacker-winning successors left for defender nodes
        remaining = [len(succ[i]) + bad_v[i] for i in range(n)]
        queue = deque()
        for i in range(n):
            if is_special[i]:
                # the objective set always belongs to the attacking player:
                # bad positions under safety, targets under reachability
                win_att[i] = True
                queue.append(i)
                continue
            att_owned = owner_eve[i] == attacker_eve
            total = len(succ[i]) + good[i] + bad_v[i]
            if total == 0:
                # stuck: the owner loses
                if owner_eve[i] != attacker_eve:
                    win_att[i] = True
                    queue.append(i)
            elif att_owned and good[i] > 0:
                win_att[i] = True
                queue.append(i)
            elif not att_owned and remaining[i] == 0 and good[i] > 0:
                win_att[i] = True
                queue.append(i)
        while queue:
            j = queue.popleft()
            for i in preds[j]:
                if win_att[i] or is_special[i]:
                    continue
                if owner_eve[i] == attacker_eve:
                    win_att[i] = True
                    queue.append(i)
                else:
                    remaining[i] -= 1
                    if remaining[i] == 0:
                        win_att[i] = True
                        queue.append(i)
        if attacker_eve:
            return frozenset(p for i, p in enumerate(pos_list) if win_att[i])
        return frozenset(p for i, p in enumerate(pos_list) if not win_att[i])

    # Chaotic iteration restricted to keys reachable from the bottom level
    # via current claims; a key is re-solved only when its inputs changed.
    last_sig: dict = {}
    while True:
        live = [bottom_key]
        seen = {bottom_key}
        idx = 0
        while idx < len(live):
            key = live[idx]
            idx += 1
            for ck in children_of(key):
                if ck not in seen:
                    seen.add(ck)
                    if ck not in memo:
                        memo[ck] = init_value
                    live.append(ck)
        changed = False
        for key in reversed(live):  # children first: one sweep propagates up
            # capture the inputs as consumed by this solve; a key referencing
            # itself must be re-solved once its own value moves
            sig = input_sig(key)
            if last_sig.get(key) == sig:
                continue
            new = solve_level(key)
            last_sig[key] = sig
            if new != memo[key]:
                memo[key] = new
                changed = True
        if not changed:
            break

    claims = {key: memo[key] & pop_land for key in memo}

    def strategy_solver() -> dict:
        strategies: dict = {}
        for key in list(memo):
            _, strat = solve_finite_game(build_level(key))
            strategies[key] = {p: tag for p, (tag, _) in strat.items()
                               if isinstance(tag, Move)}
        return strategies

    winner = EVE if g.initial in memo[bottom_key] else ADAM
    return VpgSolution(winner, g, memo, claims, bottom_key, pop_land,
                       _strategy_solver=strategy_solver)


@dataclass
class PdStrategy:
    """Positional per-level strategy replayed with a frame stack of
    (symbol, claim) level tags mirroring the game stack."""

    player: str
    solution: VpgSolution

    def new_play(self):
        return _StrategyPlay(self)


class _StrategyPlay:
    def __init__(self, strat: PdStrategy):
        self.strat = strat
        self.key = strat.solution.bottom_key
        self.frames: list = []

    def choose(self, position) -> Move | None:
        return self.strat.solution.strategies.get(self.key, {}).get(position)

    def record(self, move: Move) -> None:
        """Account for any move actually played, by either player."""
        sol = self.strat.solution
        if move.kind == "push":
            self.frames.append(self.key)
            self.key = (move.push_sym, sol.claims[self.key])
        elif move.kind == "pop":
            self.key = self.frames.pop()


def extract_strategy(solution: VpgSolution, player: str | None = None) -> PdStrategy:
    return PdStrategy(player or solution.winner, solution)


# ---------------------------------------------------------------------------
# Materialized claim game


def reduce_to_claim_game(g: VpGame) -> tuple[FiniteGame, Hashable]:
    """The finite claim game: push moves route through an Eve claim proposal
    and an Adam descend-or-skip resolution.  Claims are drawn lazily from the
    solved fixpoint rather than enumerating all subsets.

    Returns (finite game, initial node); the winner from the initial node
    matches :func:`solve_vpg` on ``g``.
    """
    sol = solve_vpg(g)
    kind, special = g.objective
    default = EVE if kind == "safety" else ADAM
    menu = sorted(set(sol.claims.values()),
                  key=lambda c: sorted(map(repr, c)))
    if frozenset() not in menu:
        menu.append(frozenset())

    moves_by_src: dict = {}
    for m in g.moves:
        moves_by_src.setdefault(m.src, []).append(m)

    init = ("pos", g.initial, GBOT, frozenset())
    nodes: list = [EVE_SINK, ADAM_SINK]
    owner = {EVE_SINK: EVE, ADAM_SINK: ADAM}
    edges: dict = {}
    eve_sinks = {EVE_SINK}
    adam_sinks = {ADAM_SINK}
    todo = [init]
    seen = {init}
    while todo:
        node = todo.pop()
        nodes.append(node)
        shape = node[0]
        if shape == "pos":
            (_, p, theta, claim) = node
            if p in special:
                owner[node] = g.owner(p)
                (adam_sinks if kind == "safety" else eve_sinks).add(node)
                continue
            owner[node] = g.owner(p)
            out = []
            for m in moves_by_src.get(p, ()):
                if not _applicable(m, theta):
                    continue
                if m.kind == "internal":
                    out.append((m, ("pos", m.dst, theta, claim)))
                elif m.kind == "push":
                    out.append((m, ("claim", m, theta, claim)))
                else:
                    out.append((m, EVE_SINK if m.dst in claim else ADAM_SINK))
            edges[node] = out
        elif shape == "claim":
            (_, m, theta, claim) = node
            owner[node] = EVE
            edges[node] = [
                (cp, ("resolve", m, theta, claim, cp)) for cp in menu
            ]
        else:
            (_, m, theta, claim, cp) = node
            owner[node] = ADAM
            out = [("descend", ("pos", m.dst, m.push_sym, cp))]
            for p2 in sorted(cp, key=repr):
                out.append((("skip", p2), ("pos", p2, theta, claim)))
            edges[node] = out
        for (_, d) in edges.get(node, ()):
            if isinstance(d, tuple) and d and d[0] in ("pos", "claim", "resolve"):
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
    fg = FiniteGame(nodes, owner, edges, frozenset(eve_sinks),
                    frozenset(adam_sinks), default)
    return fg, init


# ---------------------------------------------------------------------------
# Exhaustive oracle on bounded configuration graphs


def bounded_game_winner(g: VpGame, max_height: int) -> str:
    """Exact winner by an attractor over the explicit configuration graph;
    only sound for games whose plays never exceed ``max_height``."""
    kind, special = g.objective
    default = EVE if kind == "safety" else ADAM
    moves_by_src: dict = {}
    for m in g.moves:
        moves_by_src.setdefault(m.src, []).append(m)

    init = (g.initial, ())
    nodes = []
    owner = {}
    edges = {}
    eve_sinks, adam_sinks = set(), set()
    seen = {init}
    todo = [init]
    while todo:
        node = todo.pop()
        nodes.append(node)
        (p, stack) = node
        owner[node] = g.owner(p)
        if p in special:
            (adam_sinks if kind == "safety" else eve_sinks).add(node)
            continue
        theta = stack[-1] if stack else GBOT
        out = []
        for m in moves_by_src.get(p, ()):
            if not _applicable(m, theta):
                continue
            if m.kind == "internal":
                nxt = (m.dst, stack)
            elif m.kind == "push":
                if len(stack) >= max_height:
                    raise AutomatonError("bounded game oracle: height exceeded")
                nxt = (m.dst, stack + (m.push_sym,))
            else:
                nxt = (m.dst, stack[:-1])
            out.append((m, nxt))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
        edges[node] = out
    fg = FiniteGame(nodes, owner, edges, frozenset(eve_sinks),
                    frozenset(adam_sinks), default)
    win, _ = solve_finite_game(fg)
    return win[init]
