"""Shared corpus builders and brute-force helpers for the test suite."""

import random
from itertools import product

import pytest

from hdpda.core import Configuration, Pda, Run, enabled, mkpda, step


def words_upto(letters, max_len):
    for n in range(max_len + 1):
        yield from map(lambda t: "".join(t), product(letters, repeat=n))


def random_vpa(rng, max_states=4, max_syms=2, letters="abcd"):
    """A random valid VPA with a random letter partition."""
    letters = tuple(letters)
    classes = {a: rng.choice(["call", "return", "internal"]) for a in letters}
    calls = tuple(a for a in letters if classes[a] == "call")
    returns = tuple(a for a in letters if classes[a] == "return")
    states = tuple(range(rng.randint(1, max_states)))
    syms = tuple("XY"[: rng.randint(1, max_syms)])
    trans = []
    for q in states:
        for x in (None,) + syms:
            for a in letters:
                for _ in range(rng.choice([0, 1, 1, 2])):
                    dst = rng.choice(states)
                    if classes[a] == "call":
                        trans.append((q, x, a, dst, (x, rng.choice(syms))))
                    elif classes[a] == "return":
                        trans.append((q, x, a, dst, (None,) if x is None else ()))
                    else:
                        trans.append((q, x, a, dst, (x,)))
    finals = [q for q in states if rng.random() < 0.5]
    return mkpda(states, letters, syms, 0, sorted(set(trans), key=repr),
                 finals, calls=calls, returns=returns)


def random_dvpa(rng, n_states=3, n_syms=2, letters="abc"):
    """A random deterministic complete VPA (one transition per mode/letter)."""
    letters = tuple(letters)
    classes = {a: rng.choice(["call", "return", "internal"]) for a in letters}
    calls = tuple(a for a in letters if classes[a] == "call")
    returns = tuple(a for a in letters if classes[a] == "return")
    states = tuple(range(n_states))
    syms = tuple("XY"[:n_syms])
    trans = []
    for q in states:
        for x in (None,) + syms:
            for a in letters:
                dst = rng.choice(states)
                if classes[a] == "call":
                    trans.append((q, x, a, dst, (x, rng.choice(syms))))
                elif classes[a] == "return":
                    trans.append((q, x, a, dst, (None,) if x is None else ()))
                else:
                    trans.append((q, x, a, dst, (x,)))
    finals = [q for q in states if rng.random() < 0.5]
    return mkpda(states, letters, syms, 0, trans, finals,
                 calls=calls, returns=returns)


def random_pda(rng, max_states=3, max_syms=3, letters="ab", eps_rate=0.3):
    """A random valid PDA, possibly with epsilon transitions."""
    letters = tuple(letters)
    states = tuple(range(rng.randint(1, max_states)))
    syms = tuple("XYZ"[: rng.randint(1, max_syms)])
    trans = []
    n_rules = rng.randint(2, 4 + 3 * len(states))
    for _ in range(n_rules):
        q = rng.choice(states)
        x = rng.choice((None,) + syms)
        a = None if rng.random() < eps_rate else rng.choice(letters)
        dst = rng.choice(states)
        if x is None:
            pushed = rng.choice([(None,)] + [(None, y) for y in syms])
        else:
            pushed = rng.choice([(), (x,)] + [(x, y) for y in syms]
                                + [(y,) for y in syms])
        trans.append((q, x, a, dst, pushed))
    finals = [q for q in states if rng.random() < 0.5]
    return mkpda(states, letters, syms, 0, sorted(set(trans), key=repr), finals)


def run_tree_check(vpa: Pda, resolver, max_len: int):
    """Walk the prefix tree once, extending the resolver run per letter, and
    assert it is accepting exactly when the word frontier contains a final
    state.  Returns the number of language words covered."""
    init = Configuration(vpa.initial, (None,))
    root_run = Run((), (init,))
    covered = 0
    stack = [(root_run, frozenset({init}))]
    while stack:
        run, frontier = stack.pop()
        if len(run.transitions) >= max_len:
            continue
        for a in vpa.alphabet.letters:
            nxt = frozenset(step(c, t) for c in frontier
                            for t in enabled(vpa, c, a))
            if not nxt:
                continue
            in_lang = any(vpa.is_final(c.state) for c in nxt)
            t = resolver.choose(run, a)
            if t is None or (t.src, t.top) != run.last.mode or t.label != a:
                assert not in_lang, (
                    f"resolver stuck on {''.join(run.word()) + a!r}")
                continue
            c2 = step(run.last, t)
            run2 = Run(run.transitions + (t,), run.configs + (c2,))
            if in_lang:
                covered += 1
                assert vpa.is_final(c2.state), (
                    f"resolver run not accepting on "
                    f"{''.join(map(str, run2.word()))!r}")
            stack.append((run2, nxt))
    return covered


@pytest.fixture(scope="session")
def b2():
    from hdpda.families import gen_b2

    return gen_b2()


@pytest.fixture(scope="session")
def cn_prime_1():
    from hdpda.families import gen_cn_prime

    return gen_cn_prime(1)
