"""Game solver tests: the claim reduction, the finite attractor and the
pushdown strategy replay, all cross-checked against exhaustive search."""

import random

from hdpda.core import AutomatonError
from hdpda.vpg import (
    ADAM,
    EVE,
    GBOT,
    FiniteGame,
    Move,
    VpGame,
    bounded_game_winner,
    extract_strategy,
    reduce_to_claim_game,
    solve_finite_game,
    solve_vpg,
)


def toy_push_pop_game():
    """Eve must push then pop back to a safe position; one bad trap."""
    moves = (
        Move("start", "up", "push", push_sym="X"),
        Move("up", "good", "pop", top="X"),
        Move("up", "trap", "internal", top=None),
        Move("good", "good", "internal", top=GBOT),
        Move("trap", "trap", "internal", top=None),
    )
    return VpGame(("start", "up", "good", "trap"), frozenset({"start", "up"}),
                  frozenset({"good", "trap"}), ("X",), moves, "start",
                  ("safety", frozenset({"trap"})))


def test_solve_finite_game_all_bad():
    fg = FiniteGame(["a", "b"], {"a": EVE, "b": ADAM},
                    {"a": [("m", "b")], "b": []},
                    frozenset(), frozenset({"a", "b"}), EVE)
    win, _ = solve_finite_game(fg)
    assert win["a"] == ADAM and win["b"] == ADAM


def test_solve_finite_game_single_safe_loop():
    fg = FiniteGame(["a"], {"a": EVE}, {"a": [("m", "a")]},
                    frozenset(), frozenset(), EVE)
    win, _ = solve_finite_game(fg)
    assert win["a"] == EVE


def test_solve_finite_game_stuck_owner_loses():
    fg = FiniteGame(["a"], {"a": EVE}, {"a": []}, frozenset(), frozenset(),
                    EVE)
    win, _ = solve_finite_game(fg)
    assert win["a"] == ADAM


def test_solve_finite_game_vs_value_iteration():
    rng = random.Random(31)
    for _ in range(30):
        n = 50
        nodes = list(range(n))
        owner = {i: (EVE if rng.random() < 0.5 else ADAM) for i in nodes}
        edges = {i: [("m", rng.randrange(n))
                     for _ in range(rng.randint(0, 3))] for i in nodes}
        eve_sinks = frozenset(i for i in nodes if rng.random() < 0.08)
        adam_sinks = frozenset(i for i in nodes
                               if i not in eve_sinks and rng.random() < 0.08)
        for s in eve_sinks | adam_sinks:
            edges[s] = []
        default = rng.choice([EVE, ADAM])
        fg = FiniteGame(nodes, owner, edges, eve_sinks, adam_sinks, default)
        win, _ = solve_finite_game(fg)

        # value iteration oracle
        val = {}
        for i in nodes:
            if i in eve_sinks:
                val[i] = EVE
            elif i in adam_sinks:
                val[i] = ADAM
            elif not edges[i]:
                val[i] = ADAM if owner[i] == EVE else EVE
            else:
                val[i] = default
        changed = True
        while changed:
            changed = False
            for i in nodes:
                if i in eve_sinks or i in adam_sinks or not edges[i]:
                    continue
                succ = [val[d] for (_, d) in edges[i]]
                attacker = ADAM if default == EVE else EVE
                if owner[i] == attacker:
                    new = attacker if attacker in succ else default
                else:
                    new = attacker if all(s == attacker for s in succ) \
                        else default
                if new != val[i]:
                    val[i] = new
                    changed = True
        assert all(win[i] == val[i] for i in nodes)


def test_no_push_game_matches_finite_arena():
    moves = (
        Move(0, 1, "internal"),
        Move(1, 0, "internal"),
        Move(1, 2, "internal"),
    )
    g = VpGame((0, 1, 2), frozenset({1}), frozenset({0, 2}), (), moves, 0,
               ("safety", frozenset({2})))
    sol = solve_vpg(g)
    assert sol.winner == EVE  # Eve simply avoids moving into the bad sink
    g2 = VpGame((0, 1, 2), frozenset(), frozenset({0, 1, 2}), (), moves, 0,
                ("safety", frozenset({2})))
    assert solve_vpg(g2).winner == ADAM  # Adam steers into it


def test_toy_push_pop_matches_bounded_search():
    g = toy_push_pop_game()
    assert solve_vpg(g).winner == bounded_game_winner(g, max_height=4)


def test_random_games_match_bounded_search():
    rng = random.Random(33)
    compared = 0
    for _ in range(150):
        n = rng.randint(3, 6)
        positions = tuple(range(n))
        eve = frozenset(p for p in positions if rng.random() < 0.5)
        syms = ("X", "Y")[: rng.randint(1, 2)]
        moves = []
        for _ in range(rng.randint(4, 10)):
            src, dst = rng.choice(positions), rng.choice(positions)
            kind = rng.choice(["internal", "internal", "push", "pop"])
            if kind == "push":
                moves.append(Move(src, dst, "push",
                                  top=rng.choice((None,) + syms + (GBOT,)),
                                  push_sym=rng.choice(syms)))
            elif kind == "pop":
                moves.append(Move(src, dst, "pop", top=rng.choice(syms)))
            else:
                moves.append(Move(src, dst, "internal",
                                  top=rng.choice([None, GBOT] + list(syms))))
        g = VpGame(positions, eve, frozenset(positions) - eve, syms,
                   tuple(moves), 0,
                   (rng.choice(["safety", "reachability"]),
                    frozenset(p for p in positions if rng.random() < 0.25)))
        try:
            oracle = bounded_game_winner(g, max_height=7)
        except AutomatonError:
            continue  # unbounded pushes: oracle out of scope
        compared += 1
        assert solve_vpg(g).winner == oracle
    assert compared >= 60


def test_reduce_to_claim_game_winner_and_bound():
    g = toy_push_pop_game()
    sol = solve_vpg(g)
    fg, init = reduce_to_claim_game(g)
    win, _ = solve_finite_game(fg)
    assert win[init] == sol.winner
    n_pos = len(g.positions)
    n_claims = 2 ** n_pos
    bound = n_pos * (len(g.stack_syms) + 1) * n_claims
    core_nodes = [x for x in fg.nodes
                  if isinstance(x, tuple) and x and x[0] == "pos"]
    assert len(core_nodes) <= bound


def test_strategy_replay_fuzz():
    rng = random.Random(34)
    g = toy_push_pop_game()
    sol = solve_vpg(g)
    assert sol.winner == EVE
    strat = extract_strategy(sol, EVE)
    msrc = {}
    for m in g.moves:
        msrc.setdefault(m.src, []).append(m)
    bad = g.objective[1]
    for _ in range(500):
        play = strat.new_play()
        pos, stack = g.initial, []
        for _ in range(rng.randint(1, 40)):
            assert pos not in bad
            top = stack[-1] if stack else GBOT
            cands = [m for m in msrc.get(pos, [])
                     if m.top is None or m.top == top]
            if not cands:
                break
            if pos in g.eve:
                m = play.choose(pos) or cands[0]
            else:
                m = rng.choice(cands)
            play.record(m)
            if m.kind == "push":
                stack.append(m.push_sym)
            elif m.kind == "pop":
                stack.pop()
            pos = m.dst


def test_determinacy_every_position_has_one_winner():
    g = toy_push_pop_game()
    sol = solve_vpg(g)
    for key, val in sol.memo.items():
        assert val <= frozenset(g.positions)
