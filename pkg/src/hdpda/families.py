"""Generators for the named automaton families, each paired with a
closed-form membership oracle and, where one exists, a shipped resolver.

All families use single-character letters, so words can be given as plain
strings; oracles accept strings or letter tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import (
    Pda,
    PositionalResolver,
    Resolver,
    Transition,
    enabled,
)


def as_str(word) -> str:
    return word if isinstance(word, str) else "".join(word)


def _push_all(src, letter, dst, gamma):
    """One push transition per possible top symbol (letter pushed on top)."""
    out = [Transition(src, None, letter, dst, (None, letter))]
    out.extend(Transition(src, x, letter, dst, (x, letter)) for x in gamma)
    return out


def _keep_all(src, letter, dst, gamma):
    out = [Transition(src, None, letter, dst, (None,))]
    out.extend(Transition(src, x, letter, dst, (x,)) for x in gamma)
    return out


# ---------------------------------------------------------------------------
# Running example: { a c^n d^n a } u { b c^n d^2n b }


def gen_fig1() -> Pda:
    """Six-state PDA whose d-blocks are matched against pushed counters,
    doubling them on the b-branch."""
    gamma = ("A", "B", "N")
    trans = []
    trans.append(Transition("i", None, "a", "u", (None, "A")))
    trans.append(Transition("i", None, "b", "u", (None, "B")))
    for x in (None,) + gamma:
        base = (None,) if x is None else (x,)
        trans.append(Transition("u", x, "c", "u", base + ("N",)))
    trans.append(Transition("u", "N", "d", "q1", ()))
    trans.append(Transition("u", "N", "d", "q2", ("N",)))
    trans.append(Transition("q1", "N", "d", "q1", ()))
    trans.append(Transition("q2", "N", "d", "q2b", ()))
    trans.append(Transition("q2b", "N", "d", "q2", ("N",)))
    trans.append(Transition("q1", "A", "a", "acc", ()))
    trans.append(Transition("q2b", "B", "b", "acc", ()))
    return Pda(("i", "u", "q1", "q2", "q2b", "acc"),
               _alph("abcd"), gamma, "i", tuple(trans), frozenset({"acc"}),
               name="fig1")


def oracle_fig1(word) -> bool:
    w = as_str(word)
    for (x, mult) in (("a", 1), ("b", 2)):
        if len(w) >= 4 and w[0] == x and w[-1] == x:
            body = w[1:-1]
            n = body.count("c")
            if n >= 1 and body == "c" * n + "d" * (mult * n):
                return True
    return False


def _alph(letters, calls=(), returns=()):
    from .core import mkalphabet

    return mkalphabet(tuple(letters), calls=calls, returns=returns)


# ---------------------------------------------------------------------------
# B2 = { a^i $ a^j $ b^k $ : k <= max(i, j) }


def gen_b2() -> tuple[Pda, Resolver]:
    gamma = ("a", "$")
    trans = []
    trans += _push_all("q1", "a", "q1", gamma)
    trans += _push_all("q1", "$", "q2", gamma)
    trans += _push_all("q2", "a", "q2", gamma)
    trans += _keep_all("q2", "$", "p1", gamma)
    trans += _keep_all("q2", "$", "p2", gamma)
    trans.append(Transition("p1", "a", None, "p1", ()))
    trans.append(Transition("p1", "$", None, "p2", ()))
    trans.append(Transition("p2", "a", "b", "p2", ()))
    trans += _push_all("p2", "$", "f", gamma)
    pda = Pda(("q1", "q2", "p1", "p2", "f"), _alph("a$b"), gamma, "q1",
              tuple(trans), frozenset({"f"}), name="b2")
    return pda, B2Resolver(pda)


class B2Resolver(PositionalResolver):
    """Compares the two pushed blocks; ties go to the second block."""

    def __init__(self, pda: Pda):
        self.pda = pda

    def choose_at(self, config, letter):
        if config.state == "q2" and letter == "$":
            content = config.stack[1:]
            # stack holds a^i $ a^j (the second block on top)
            j = 0
            k = len(content) - 1
            while k >= 0 and content[k] == "a":
                j += 1
                k -= 1
            i = sum(1 for s in content[:max(k, 0)] if s == "a")
            target = "p1" if i > j else "p2"
            for t in enabled(self.pda, config, "$"):
                if t.dst == target:
                    return t
        for lab in (letter, None):
            ts = enabled(self.pda, config, lab)
            if ts:
                return ts[0]
        return None


def oracle_b2(word) -> bool:
    w = as_str(word)
    parts = w.split("$")
    if len(parts) != 4 or parts[3] != "":
        return False
    i, j, b = parts[0], parts[1], parts[2]
    if set(i) - {"a"} or set(j) - {"a"} or set(b) - {"b"}:
        return False
    return len(b) <= max(len(i), len(j))


# ---------------------------------------------------------------------------
# B3 = { a^i $ a^j $ a^k $ b^l $ : l <= max(i, j, k) }


def gen_b3() -> tuple[Pda, Resolver]:
    gamma = ("a", "$")
    trans = []
    for q in ("q1", "q2", "q3"):
        trans += _push_all(q, "a", q, gamma)
    trans += _push_all("q1", "$", "q2", gamma)
    trans += _push_all("q2", "$", "q3", gamma)
    for p in ("p1", "p2", "p3"):
        trans += _keep_all("q3", "$", p, gamma)
    trans.append(Transition("p1", "a", None, "p1", ()))
    trans.append(Transition("p1", "$", None, "p2", ()))
    trans.append(Transition("p2", "a", None, "p2", ()))
    trans.append(Transition("p2", "$", None, "p3", ()))
    trans.append(Transition("p3", "a", "b", "p3", ()))
    trans += _push_all("p3", "$", "f", gamma)
    pda = Pda(("q1", "q2", "q3", "p1", "p2", "p3", "f"), _alph("a$b"), gamma,
              "q1", tuple(trans), frozenset({"f"}), name="b3")
    return pda, B3Resolver(pda)


class B3Resolver(PositionalResolver):
    """Pops down to the longest block; ties go to the latest longest block.

    The choice is a function of the stack content alone; no pushdown
    transducer can implement it, an unrestricted one ships instead.
    """

    kind = "unrestricted"

    def __init__(self, pda: Pda):
        self.pda = pda

    def choose_at(self, config, letter):
        if config.state == "q3" and letter == "$":
            blocks = "".join(
                "a" if s == "a" else "$" for s in config.stack[1:]
            ).split("$")
            # blocks[0], blocks[1], blocks[2] are the three a-blocks
            best = max(range(3), key=lambda idx: (len(blocks[idx]), idx))
            target = ("p1", "p2", "p3")[best]
            for t in enabled(self.pda, config, "$"):
                if t.dst == target:
                    return t
        for lab in (letter, None):
            ts = enabled(self.pda, config, lab)
            if ts:
                return ts[0]
        return None


def oracle_b3(word) -> bool:
    w = as_str(word)
    parts = w.split("$")
    if len(parts) != 5 or parts[4] != "":
        return False
    if any(set(p) - {"a"} for p in parts[:3]) or set(parts[3]) - {"b"}:
        return False
    return len(parts[3]) <= max(len(parts[0]), len(parts[1]), len(parts[2]))


# ---------------------------------------------------------------------------
# Bad counters C_n = { w != c_n # } and the visible variant


def counter_word(n: int) -> str:
    """The n-bit counter word: $ 0^n $ 0^(n-1)1 $ ... $ 1^n."""
    return "".join("$" + format(i, f"0{n}b") for i in range(2 ** n))


def _cn_states(n: int):
    a_states = [("A", k) for k in range(n + 2)]
    b_states = [("B", 0)] + [("B", i, z) for i in range(1, n + 1)
                             for z in ("has0", "all1")]
    k_states = [("K", v, c, t) for v in "01"
                for c in ("no$", "$no0", "$has0") for t in range(1, n + 2)]
    return a_states, b_states, k_states


def _evidence_condition(v, c, x) -> bool:
    """The popped window witnesses a bad increment: equal bits with no zero
    after the block separator, or unequal bits with one."""
    return (x == v and c == "$no0") or (x != v and c == "$has0")


def gen_cn(n: int) -> tuple[Pda, Resolver]:
    """Bad-counter PDA: 3(n+1) push states, 6(n+1) check states, 3 final
    states; the stack alphabet is {0, 1, $}."""
    if n < 1:
        raise ValueError("n >= 1")
    gamma = ("0", "1", "$")
    a_states, b_states, k_states = _cn_states(n)
    boundary2 = ("B", n, "has0")
    chk = ("B", n, "all1")
    t0, t1, acc = ("T", 0), ("T", 1), "acc"
    states = tuple(a_states + b_states + k_states + [t0, t1, acc])
    trans: list[Transition] = []

    def deviate(src, letters):
        for y in letters:
            trans.extend(_keep_all(src, y, acc, gamma))

    # push phase, part A: the prefix $ 0^n
    trans += _push_all(("A", 0), "$", ("A", 1), gamma)
    deviate(("A", 0), "01#")
    for k in range(1, n + 1):
        trans += _push_all(("A", k), "0", ("A", k + 1), gamma)
        deviate(("A", k), "1$#")
    trans += _push_all(("A", n + 1), "$", ("B", 0), gamma)
    deviate(("A", n + 1), "01#")

    # push phase, part B: n-bit blocks, tracking a zero among the bits
    first = {"0": ("B", 1, "has0"), "1": ("B", 1, "all1")}
    if n == 1:
        first = {"0": boundary2, "1": chk}
    for y, dst in first.items():
        trans += _push_all(("B", 0), y, dst, gamma)
    deviate(("B", 0), "$#")
    for i in range(1, n):
        for z in ("has0", "all1"):
            trans += _push_all(("B", i, z), "0", ("B", i + 1, "has0"), gamma)
            trans += _push_all(("B", i, z), "1", ("B", i + 1, z), gamma)
            deviate(("B", i, z), "$#")
    trans += _push_all(boundary2, "$", ("B", 0), gamma)
    deviate(boundary2, "01#")

    # check phase: free pops, a guess, and the n+1 step window checker
    for x in gamma:
        trans.append(Transition(chk, x, None, chk, ()))
    for b in "01":
        trans.append(Transition(chk, b, None, ("K", b, "no$", 1), ()))
    trans.append(Transition(chk, None, None, t0, (None,)))
    for v in "01":
        for c in ("no$", "$no0", "$has0"):
            for t in range(1, n + 1):
                src = ("K", v, c, t)
                for s in gamma:
                    if s == "$":
                        if c == "no$":
                            trans.append(Transition(src, "$", None,
                                                    ("K", v, "$no0", t + 1), ()))
                    else:
                        c2 = c
                        if s == "0" and c in ("$no0", "$has0"):
                            c2 = "$has0"
                        trans.append(Transition(src, s, None,
                                                ("K", v, c2, t + 1), ()))
            src = ("K", v, c, n + 1)
            for x in "01":
                if _evidence_condition(v, c, x):
                    trans.append(Transition(src, x, None, acc, (x,)))

    # final phase: the leftover suffix must differ from a single '#'
    trans += _keep_all(t0, "#", t1, gamma)
    for y in "01$":
        trans += _keep_all(t0, y, acc, gamma)
    for y in "01$#":
        trans += _keep_all(t1, y, acc, gamma)
        trans += _keep_all(acc, y, acc, gamma)

    finals = frozenset(a_states) | frozenset(b_states) | {t0, acc}
    pda = Pda(states, _alph("01$#"), gamma, ("A", 0), tuple(trans), finals,
              name=f"cn[{n}]")
    return pda, CnResolver(pda, n)


def _find_evidence(content: tuple, n: int) -> int | None:
    """Offset from the top of the first window witnessing a bad increment,
    or None.  ``content`` is the pushed word (bottom first)."""
    m = len(content)
    for off in range(m):
        v = content[m - 1 - off]
        if v not in "01":
            continue
        c = "no$"
        pos = m - 1 - off
        ok = True
        for _ in range(n):
            pos -= 1
            if pos < 0:
                ok = False
                break
            s = content[pos]
            if s == "$":
                if c != "no$":
                    ok = False
                    break
                c = "$no0"
            elif s == "0" and c in ("$no0", "$has0"):
                c = "$has0"
        if not ok or pos - 1 < 0:
            continue
        x = content[pos - 1]
        if x in "01" and _evidence_condition(v, c, x):
            return off
    return None


class CnResolver(PositionalResolver):
    """During the check phase, pops exactly down to a witness of bad
    counting, or to the bottom when the counter was correct; the choice
    depends only on the current stack content."""

    def __init__(self, pda: Pda, n: int):
        self.pda = pda
        self.n = n

    def choose_at(self, config, letter):
        if config.state == ("B", self.n, "all1"):
            off = _find_evidence(config.stack[1:], self.n)
            if off is None:
                ts = enabled(self.pda, config, None)
                # free pop until the bottom transition applies
                return ts[0]
            if off > 0:
                return enabled(self.pda, config, None)[0]
            guess = [t for t in enabled(self.pda, config, None)
                     if t.dst[0] == "K"]
            return guess[0]
        for lab in (None, letter):
            ts = enabled(self.pda, config, lab)
            if ts:
                if lab is None and letter is not None:
                    # prefer processing the letter at reading modes
                    direct = enabled(self.pda, config, letter)
                    if direct:
                        return direct[0]
                return ts[0]
        return None


def make_cn_oracle(n: int) -> Callable:
    forbidden = counter_word(n) + "#"

    def oracle(word) -> bool:
        return as_str(word) != forbidden

    return oracle


# ---------------------------------------------------------------------------
# C'_n: the visibly pushdown bad counters (0, 1, $ calls; # returns)


def gen_cn_prime(n: int) -> tuple[Pda, Resolver]:
    """Visible variant: the check phase consumes one '#' per pop and the
    bottom-most pushed symbol is marked so emptying the stack is observable.
    Rejects exactly c_n followed by one '#' per pushed symbol."""
    if n < 1:
        raise ValueError("n >= 1")
    gamma = ("0", "1", "$", "$b")
    a_states, b_states, k_states = _cn_states(n)
    boundary2 = ("B", n, "has0")
    chk = ("B", n, "all1")
    fin0, acc = ("T", 0), "acc"
    states = tuple(a_states + b_states + k_states + [fin0, acc])
    trans: list[Transition] = []

    def push_any(src, y, dst):
        trans.append(Transition(src, None, y, dst, (None, y)))
        for x in gamma:
            trans.append(Transition(src, x, y, dst, (x, y)))

    def deviate(src, letters):
        for y in letters:
            if y == "#":
                trans.append(Transition(src, None, "#", acc, (None,)))
                for x in gamma:
                    trans.append(Transition(src, x, "#", acc, ()))
            else:
                push_any(src, y, acc)

    # part A; the very first push is the marked block separator
    trans.append(Transition(("A", 0), None, "$", ("A", 1), (None, "$b")))
    deviate(("A", 0), "01#")
    for k in range(1, n + 1):
        push_any(("A", k), "0", ("A", k + 1))
        deviate(("A", k), "1$#")
    push_any(("A", n + 1), "$", ("B", 0))
    deviate(("A", n + 1), "01#")

    first = {"0": ("B", 1, "has0"), "1": ("B", 1, "all1")}
    if n == 1:
        first = {"0": boundary2, "1": chk}
    for y, dst in first.items():
        push_any(("B", 0), y, dst)
    deviate(("B", 0), "$#")
    for i in range(1, n):
        for z in ("has0", "all1"):
            push_any(("B", i, z), "0", ("B", i + 1, "has0"))
            push_any(("B", i, z), "1", ("B", i + 1, z))
            deviate(("B", i, z), "$#")
    push_any(boundary2, "$", ("B", 0))
    deviate(boundary2, "01#")

    # check phase: every pop consumes a '#'
    for x in ("0", "1", "$"):
        trans.append(Transition(chk, x, "#", chk, ()))
    trans.append(Transition(chk, "$b", "#", fin0, ()))
    for b in "01":
        trans.append(Transition(chk, b, "#", ("K", b, "no$", 1), ()))
    for y in "01$":
        push_any(chk, y, acc)
    # walks that would cross the bottom marker are doomed guesses and die;
    # non-# letters during the check still divert to the final sink
    for v in "01":
        for c in ("no$", "$no0", "$has0"):
            for t in range(1, n + 2):
                src = ("K", v, c, t)
                for y in "01$":
                    push_any(src, y, acc)
            for t in range(1, n + 1):
                src = ("K", v, c, t)
                for s in ("0", "1", "$"):
                    if s == "$":
                        if c == "no$":
                            trans.append(Transition(src, s, "#",
                                                    ("K", v, "$no0", t + 1), ()))
                    else:
                        c2 = c
                        if s == "0" and c in ("$no0", "$has0"):
                            c2 = "$has0"
                        trans.append(Transition(src, s, "#",
                                                ("K", v, c2, t + 1), ()))
            src = ("K", v, c, n + 1)
            for x in "01":
                if _evidence_condition(v, c, x):
                    trans.append(Transition(src, x, "#", acc, ()))

    # final phase: any further letter proves the word differs
    for y in "01$":
        trans.append(Transition(fin0, None, y, acc, (None, y)))
    trans.append(Transition(fin0, None, "#", acc, (None,)))
    for y in "01$":
        push_any(acc, y, acc)
    trans.append(Transition(acc, None, "#", acc, (None,)))
    for x in gamma:
        trans.append(Transition(acc, x, "#", acc, ()))

    # checker states stay final: every strict '#'-prefix is in the language,
    # and on the correct counter every guessed window dies at the comparison
    finals = (frozenset(a_states) | frozenset(b_states) | frozenset(k_states)
              | {acc})
    pda = Pda(states, _alph("01$#", calls=("0", "1", "$"), returns=("#",)),
              gamma, ("A", 0), tuple(trans), finals, name=f"cnprime[{n}]")
    return pda, CnPrimeResolver(pda, n)


class CnPrimeResolver(PositionalResolver):
    """Keeps consuming '#'s in the popping state until a witness of bad
    counting sits on top of the stack, then commits to the checker."""

    def __init__(self, pda: Pda, n: int):
        self.pda = pda
        self.n = n

    def choose_at(self, config, letter):
        if config.state == ("B", self.n, "all1") and letter == "#":
            content = tuple("$" if s == "$b" else s for s in config.stack[1:])
            off = _find_evidence(content, self.n)
            ts = enabled(self.pda, config, "#")
            if off == 0:
                for t in ts:
                    if isinstance(t.dst, tuple) and t.dst[0] == "K":
                        return t
            for t in ts:
                if not (isinstance(t.dst, tuple) and t.dst[0] == "K"):
                    return t
            return ts[0] if ts else None
        ts = enabled(self.pda, config, letter)
        return ts[0] if ts else None


def make_cn_prime_oracle(n: int) -> Callable:
    forbidden = counter_word(n) + "#" * (2 ** n * (n + 1))

    def oracle(word) -> bool:
        return as_str(word) != forbidden

    return oracle


# ---------------------------------------------------------------------------
# L_n: the n-th bit from the end is a 1 (log-size PDA)


def gen_ln(n: int) -> Pda:
    """Guess the n-th-last bit, then count n-1 letters down with a binary
    counter kept on the stack ({0, 1} plus the bottom marker)."""
    if n < 1:
        raise ValueError("n >= 1")
    gamma = ("0", "1")
    trans: list[Transition] = []
    for y in "01":
        trans += _keep_all("g", y, "g", gamma)
    if n == 1:
        for x in (None,) + gamma:
            keep = (None,) if x is None else (x,)
            trans.append(Transition("g", x, "1", "F", keep))
        return Pda(("g", "F"), _alph("01"), gamma, "g", tuple(trans),
                   frozenset({"F"}), name=f"ln[{n}]")

    bits = format(n - 2, "b") if n > 2 else "0"
    width = len(bits)
    # push the countdown value, most significant bit first
    chain = ["D"] if width == 1 else [("p", i) for i in range(1, width)] + ["D"]
    for x in (None,) + gamma:
        base = (None,) if x is None else (x,)
        trans.append(Transition("g", x, "1", chain[0], base + (bits[0],)))
    for i in range(1, width):
        src = ("p", i)
        dst = chain[i]
        for x in gamma:
            trans.append(Transition(src, x, None, dst, (x, bits[i])))

    for y in "01":
        trans.append(Transition("D", "1", y, "D", ("0",)))
        trans.append(Transition("D", "0", y, ("b", 1), ()))
    for j in range(1, width + 1):
        if j < width:
            trans.append(Transition(("b", j), "0", None, ("b", j + 1), ()))
            # j zeros popped: flip the 1 and push the j flipped bits back
            trans.append(Transition(("b", j), "1", None, _r(j), ("0",)))
        trans.append(Transition(("b", j), None, None, "F", (None,)))
    for j in range(1, width):
        for x in gamma:
            trans.append(Transition(("r", j), x, None, _r(j - 1), (x, "1")))

    states = ["g", "D", "F"] + [("p", i) for i in range(1, width)] \
        + [("b", j) for j in range(1, width + 1)] \
        + [("r", j) for j in range(1, width)]
    return Pda(tuple(states), _alph("01"), gamma, "g", tuple(trans),
               frozenset({"F"}), name=f"ln[{n}]")


def _r(j):
    return "D" if j == 0 else ("r", j)


def make_ln_oracle(n: int) -> Callable:
    def oracle(word) -> bool:
        w = as_str(word)
        return len(w) >= n and w[-n] == "1"

    return oracle


# ---------------------------------------------------------------------------
# L'_n: pairwise words in (01+10)*(eps+0+1) with the n-th-last letter 1


_SHAPE_MOVES = {("e", "0"): "o0", ("e", "1"): "o1",
                ("o0", "1"): "e", ("o1", "0"): "e"}


def gen_ln_prime_vpa(n: int, partition_choice: str = "internal") -> Pda:
    """Guess automaton for the alternating-pair language; the partition is a
    free choice since the automaton never reads its stack."""
    if n < 1:
        raise ValueError("n >= 1")
    if partition_choice == "internal":
        calls, returns = (), ()
        gamma = ()
    elif partition_choice == "calls":
        calls, returns = ("0", "1"), ()
        gamma = ("J",)
    elif partition_choice == "mixed":
        calls, returns = ("1",), ("0",)
        gamma = ("J",)
    else:
        raise ValueError(f"unknown partition choice {partition_choice!r}")

    def emit(src, y, dst, out):
        if y in calls:
            out.append(Transition(src, None, y, dst, (None, "J")))
            for x in gamma:
                out.append(Transition(src, x, y, dst, (x, "J")))
        elif y in returns:
            out.append(Transition(src, None, y, dst, (None,)))
            for x in gamma:
                out.append(Transition(src, x, y, dst, ()))
        else:
            out.append(Transition(src, None, y, dst, (None,)))
            for x in gamma:
                out.append(Transition(src, x, y, dst, (x,)))

    trans: list[Transition] = []
    shapes = ("e", "o0", "o1")
    for s in shapes:
        for y in "01":
            s2 = _SHAPE_MOVES.get((s, y))
            if s2 is None:
                continue
            emit(("s", s), y, ("s", s2), trans)
            if y == "1":
                emit(("s", s), y, ("d", s2, n - 1), trans)
            for k in range(1, n):
                emit(("d", s, k), y, ("d", s2, k - 1), trans)
    states = [("s", s) for s in shapes] + [
        ("d", s, k) for s in shapes for k in range(n)
    ]
    finals = frozenset(("d", s, 0) for s in shapes)
    return Pda(tuple(states), _alph("01", calls=calls, returns=returns),
               gamma, ("s", "e"), tuple(trans), finals,
               name=f"lnprime[{n}]")


def make_ln_prime_oracle(n: int) -> Callable:
    def shape_ok(w: str) -> bool:
        pairs, tail = w[: len(w) - len(w) % 2], w[len(w) - len(w) % 2:]
        for i in range(0, len(pairs), 2):
            if pairs[i: i + 2] not in ("01", "10"):
                return False
        return tail in ("", "0", "1")

    def oracle(word) -> bool:
        w = as_str(word)
        return shape_ok(w) and len(w) >= n and w[-n] == "1"

    return oracle


# ---------------------------------------------------------------------------
# Words w# with an a^k infix


def gen_linfix(k: int) -> tuple[Pda, Resolver]:
    """Pushes the input, then empties the stack before the single '#',
    guessing where a block of k a's sits."""
    if k < 1:
        raise ValueError("k >= 1")
    gamma = ("a", "b")
    trans: list[Transition] = []
    for y in "ab":
        trans += _push_all("P", y, "P", gamma)
    trans.append(Transition("P", None, None, "E", (None,)))
    for x in gamma:
        trans.append(Transition("P", x, None, "E", (x,)))
        trans.append(Transition("E", x, None, "E", ()))
    trans.append(Transition("E", "a", None, ("G", 1), ()))
    for i in range(1, k):
        trans.append(Transition(("G", i), "a", None, ("G", i + 1), ()))
    for x in gamma:
        trans.append(Transition(("G", k), x, None, ("G", k), ()))
    trans.append(Transition(("G", k), None, "#", "facc", (None,)))
    states = ("P", "E", "facc") + tuple(("G", i) for i in range(1, k + 1))
    pda = Pda(states, _alph("ab#"), gamma, "P", tuple(trans),
              frozenset({"facc"}), name=f"linfix[{k}]")
    return pda, LinfixResolver(pda, k)


class LinfixResolver(PositionalResolver):
    """Pops to the shallowest a-block of length k; needs the whole stack, so
    no finite-state resolver can replace it."""

    def __init__(self, pda: Pda, k: int):
        self.pda = pda
        self.k = k

    def choose_at(self, config, letter):
        state = config.state
        if state == "P":
            if letter == "#":
                return enabled(self.pda, config, None)[0]
            ts = enabled(self.pda, config, letter)
            return ts[0] if ts else None
        if state == "E":
            content = config.stack[1:]
            m = len(content)
            for off in range(m - self.k + 1):
                window = content[m - off - self.k: m - off]
                if all(s == "a" for s in window):
                    ts = enabled(self.pda, config, None)
                    if off == 0:
                        for t in ts:
                            if t.dst == ("G", 1):
                                return t
                    for t in ts:
                        if t.dst == "E":
                            return t
            return None  # no block: the word is not in the language
        for lab in (None, letter):
            ts = enabled(self.pda, config, lab)
            if ts:
                return ts[0]
        return None


def make_linfix_oracle(k: int) -> Callable:
    def oracle(word) -> bool:
        w = as_str(word)
        return ("#" in w and w.index("#") == len(w) - 1
                and "a" * k in w[:-1])

    return oracle


# ---------------------------------------------------------------------------
# a*b: weakly compositional but not history-deterministic


def gen_astar_b() -> Pda:
    gamma = ("a",)
    trans = [
        Transition("q1", None, None, "q1", (None, "a")),
        Transition("q1", "a", None, "q1", ("a", "a")),
        Transition("q1", None, None, "q2", (None,)),
        Transition("q1", "a", None, "q2", ("a",)),
        Transition("q2", "a", "a", "q2", ()),
        Transition("q2", None, "b", "f", (None,)),
        Transition("q2", "a", "b", "f", ("a",)),
    ]
    return Pda(("q1", "q2", "f"), _alph("ab"), gamma, "q1", tuple(trans),
               frozenset({"f"}), name="astarb")


def oracle_astar_b(word) -> bool:
    w = as_str(word)
    return len(w) >= 1 and w[-1] == "b" and set(w[:-1]) <= {"a"}


# ---------------------------------------------------------------------------
# Registry


@dataclass
class FamilyEntry:
    name: str
    kind: str  # "pda" | "vpa"
    generate: Callable  # (**params) -> Pda
    oracle: Callable  # (**params) -> predicate on words
    resolver: Callable | None  # (**params) -> Resolver, built with the pda
    parameters: tuple
    note: str


def _with_resolver(genfun):
    def gen(**kw):
        pda, _ = genfun(**kw)
        return pda

    def res(**kw):
        _, r = genfun(**kw)
        return r

    return gen, res


_b2_gen, _b2_res = _with_resolver(lambda: gen_b2())
_b3_gen, _b3_res = _with_resolver(lambda: gen_b3())
_cn_gen, _cn_res = _with_resolver(lambda n: gen_cn(n))
_cnp_gen, _cnp_res = _with_resolver(lambda n: gen_cn_prime(n))
_linfix_gen, _linfix_res = _with_resolver(lambda k: gen_linfix(k))

FAMILIES = {
    "fig1": FamilyEntry(
        "fig1", "pda", lambda: gen_fig1(), lambda: oracle_fig1, None, (),
        "matched c/d blocks with doubled d's on the b branch"),
    "b2": FamilyEntry(
        "b2", "pda", _b2_gen, lambda: oracle_b2, _b2_res, (),
        "b-block bounded by the longer of two a-blocks"),
    "b3": FamilyEntry(
        "b3", "pda", _b3_gen, lambda: oracle_b3, _b3_res, (),
        "b-block bounded by the longest of three a-blocks"),
    "cn": FamilyEntry(
        "cn", "pda", _cn_gen, lambda n: make_cn_oracle(n), _cn_res, ("n",),
        "everything except the n-bit counter word followed by #"),
    "ln": FamilyEntry(
        "ln", "pda", lambda n: gen_ln(n), lambda n: make_ln_oracle(n), None,
        ("n",), "n-th bit from the end is 1, log-size counter"),
    "cnprime": FamilyEntry(
        "cnprime", "vpa", _cnp_gen, lambda n: make_cn_prime_oracle(n),
        _cnp_res, ("n",), "visible bad counters, pops driven by #"),
    "lnprime": FamilyEntry(
        "lnprime", "vpa", lambda n, partition_choice="internal":
            gen_ln_prime_vpa(n, partition_choice),
        lambda n, partition_choice="internal": make_ln_prime_oracle(n),
        None, ("n",), "alternating pairs with the n-th-last letter 1"),
    "linfix": FamilyEntry(
        "linfix", "pda", _linfix_gen, lambda k: make_linfix_oracle(k),
        _linfix_res, ("k",), "single-# words with an a^k infix"),
    "astarb": FamilyEntry(
        "astarb", "pda", lambda: gen_astar_b(), lambda: oracle_astar_b, None,
        (), "a*b via an up-front bound guess; weakly compositional only"),
}
