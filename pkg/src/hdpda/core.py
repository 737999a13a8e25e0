"""Pushdown automaton data model and the resolver-driven run engine.

States are arbitrary hashable values (strings, ints, tuples); stack symbols
likewise.  The stack bottom marker and the epsilon label are both represented
by ``None`` (in the ``top``/``pushed`` and ``label`` slots respectively, so
there is no ambiguity).  A stack content is a tuple whose first entry is
``None`` followed by plain stack symbols, top at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

Letter = Hashable
Sym = Hashable

#: label of epsilon transitions / stack bottom marker.
EPSILON: None = None
BOTTOM: None = None


class _EndOfWord:
    """Marker handed to EoW-resolvers once the whole input is processed."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "EOW"


EOW = _EndOfWord()


class AutomatonError(ValueError):
    """Structurally invalid automaton or malformed query."""


class ResolverError(RuntimeError):
    """A resolver returned an illegal move or exhausted its epsilon budget.

    Carries the transition history accumulated so far for diagnosis.
    """

    def __init__(self, message: str, history: tuple["Transition", ...] = ()):
        super().__init__(message)
        self.history = history


@dataclass(frozen=True)
class Partition:
    """Call/return/internal split of an alphabet."""

    calls: frozenset
    returns: frozenset
    internals: frozenset

    def class_of(self, letter: Letter) -> str:
        if letter in self.calls:
            return "call"
        if letter in self.returns:
            return "return"
        if letter in self.internals:
            return "internal"
        raise AutomatonError(f"letter {letter!r} not in partition")


@dataclass(frozen=True)
class Alphabet:
    letters: tuple
    partition: Partition | None = None

    def __post_init__(self):
        if not self.letters:
            raise AutomatonError("alphabet must be nonempty")
        if len(set(self.letters)) != len(self.letters):
            raise AutomatonError("duplicate letters in alphabet")
        p = self.partition
        if p is not None:
            groups = (p.calls, p.returns, p.internals)
            union = p.calls | p.returns | p.internals
            if union != set(self.letters):
                raise AutomatonError("partition does not cover the alphabet")
            if sum(len(g) for g in groups) != len(union):
                raise AutomatonError("partition classes overlap")

    def __contains__(self, letter: Letter) -> bool:
        return letter in self.letters


def mkalphabet(letters: Iterable[Letter], calls=None, returns=None,
               internals=None) -> Alphabet:
    """Build an alphabet; passing any of ``calls``/``returns``/``internals``
    (even empty) yields a partitioned alphabet, with unlisted letters
    internal."""
    letters = tuple(letters)
    if calls is None and returns is None and internals is None:
        return Alphabet(letters)
    calls = frozenset(calls or ())
    returns = frozenset(returns or ())
    if internals is None:
        internals = frozenset(letters) - calls - returns
    return Alphabet(letters, Partition(calls, returns, frozenset(internals)))


@dataclass(frozen=True)
class Transition:
    """One rewrite rule (src, top, label, dst, pushed).

    ``top`` is a stack symbol or ``None`` for the bottom marker; ``label`` is a
    letter or ``None`` for epsilon; ``pushed`` replaces the top of the stack.
    """

    src: Hashable
    top: Sym | None
    label: Letter | None
    dst: Hashable
    pushed: tuple

    def is_eps(self) -> bool:
        return self.label is None

    def __repr__(self) -> str:
        lab = "eps" if self.label is None else repr(self.label)
        top = "bot" if self.top is None else repr(self.top)
        push = ",".join("bot" if s is None else repr(s) for s in self.pushed)
        return f"({self.src!r},{top},{lab},{self.dst!r},[{push}])"


def label_word(transitions: Iterable[Transition]) -> tuple:
    """The word processed by a transition sequence (epsilons dropped)."""
    return tuple(t.label for t in transitions if t.label is not None)


@dataclass(frozen=True)
class Configuration:
    state: Hashable
    stack: tuple  # (None, sym, sym, ...), top at the end

    @property
    def top(self) -> Sym | None:
        return self.stack[-1]

    @property
    def mode(self) -> tuple:
        return (self.state, self.stack[-1])

    @property
    def stack_height(self) -> int:
        return len(self.stack) - 1

    def __repr__(self) -> str:
        syms = ["bot" if s is None else str(s) for s in self.stack]
        return f"<{self.state!r} {' '.join(syms)}>"


@dataclass(frozen=True)
class Pda:
    """A pushdown automaton (final-state acceptance).

    ``transitions`` is ordered; shipped resolvers break ties by this order.
    """

    states: tuple
    alphabet: Alphabet
    stack_alphabet: tuple
    initial: Hashable
    transitions: tuple
    finals: frozenset
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "_by_mode", None)

    @property
    def size(self) -> int:
        """|Q| + |Gamma| (bottom marker not counted)."""
        return len(self.states) + len(self.stack_alphabet)

    def initial_config(self) -> Configuration:
        return Configuration(self.initial, (BOTTOM,))

    def mode_index(self) -> dict:
        """(src, top, label) -> transitions in declaration order."""
        idx = getattr(self, "_by_mode", None)
        if idx is None:
            idx = {}
            for t in self.transitions:
                idx.setdefault((t.src, t.top, t.label), []).append(t)
            object.__setattr__(self, "_by_mode", idx)
        return idx

    def is_final(self, state) -> bool:
        return state in self.finals


def mkpda(states, letters, stack, initial, transitions, finals, *,
          calls=(), returns=(), internals=None, name="") -> Pda:
    """Convenience constructor from plain tuples.

    ``transitions`` entries are (src, top, label, dst, pushed) with ``None``
    for bottom/epsilon and ``pushed`` any sequence of symbols.
    """
    alph = mkalphabet(letters, calls, returns, internals)
    trans = tuple(
        Transition(src, top, label, dst, tuple(pushed))
        for (src, top, label, dst, pushed) in transitions
    )
    return Pda(tuple(states), alph, tuple(stack), initial, trans,
               frozenset(finals), name=name)


def validate(pda: Pda) -> list[str]:
    """Return the list of violated structural invariants (empty = valid)."""
    problems: list[str] = []
    states = set(pda.states)
    gamma = set(pda.stack_alphabet)
    if None in gamma:
        problems.append("bottom marker listed in stack alphabet")
    if pda.initial not in states:
        problems.append(f"initial state {pda.initial!r} not a state")
    for q in pda.finals:
        if q not in states:
            problems.append(f"final state {q!r} not a state")
    for t in pda.transitions:
        where = repr(t)
        if t.src not in states:
            problems.append(f"unknown source state in {where}")
        if t.dst not in states:
            problems.append(f"unknown target state in {where}")
        if t.label is not None and t.label not in pda.alphabet:
            problems.append(f"unknown letter in {where}")
        if t.top is not None and t.top not in gamma:
            problems.append(f"unknown top symbol in {where}")
        for s in t.pushed[1:]:
            if s is None:
                problems.append(f"bottom written above stack base in {where}")
        if t.top is None:
            # bottom never erased or duplicated: pushed is bot or bot+one symbol
            ok = (len(t.pushed) >= 1 and t.pushed[0] is None and len(t.pushed) <= 2
                  and all(s in gamma for s in t.pushed[1:]))
            if not ok:
                problems.append(f"bottom erased or malformed rewrite in {where}")
        else:
            if len(t.pushed) > 2:
                problems.append(f"pushed string longer than 2 in {where}")
            elif not all(s in gamma for s in t.pushed):
                problems.append(f"bottom written or unknown symbol pushed in {where}")
    return problems


def is_deterministic(pda: Pda) -> bool:
    """Both DPDA clauses: one transition per (mode, letter); eps excludes letters."""
    by_mode: dict[tuple, list[Transition]] = {}
    for t in pda.transitions:
        by_mode.setdefault((t.src, t.top), []).append(t)
    for ts in by_mode.values():
        seen: set = set()
        has_eps = False
        has_letter = False
        for t in ts:
            if t.label in seen:
                return False
            seen.add(t.label)
            if t.label is None:
                has_eps = True
            else:
                has_letter = True
        if has_eps and has_letter:
            return False
    return True


def enabled(pda: Pda, config: Configuration, label) -> tuple[Transition, ...]:
    """All transitions enabled in ``config`` carrying ``label`` (letter or None)."""
    if label is not None and label not in pda.alphabet:
        raise AutomatonError(f"unknown letter {label!r}")
    return tuple(pda.mode_index().get((config.state, config.top, label), ()))


def step(config: Configuration, t: Transition) -> Configuration:
    """Apply an enabled transition: replace the stack top with the pushed string."""
    if (t.src, t.top) != config.mode:
        raise AutomatonError(f"transition {t!r} not enabled in {config!r}")
    return Configuration(t.dst, config.stack[:-1] + t.pushed)


@dataclass(frozen=True)
class Run:
    """A run: transition sequence plus the configurations it induces."""

    transitions: tuple
    configs: tuple  # len(transitions) + 1

    @property
    def last(self) -> Configuration:
        return self.configs[-1]

    def word(self) -> tuple:
        return label_word(self.transitions)

    def __len__(self) -> int:
        return len(self.transitions)


def replay(pda: Pda, transitions: Sequence[Transition]) -> Run:
    """Reconstruct the unique run induced by a transition sequence."""
    cfg = pda.initial_config()
    configs = [cfg]
    for t in transitions:
        if (t.src, t.top) != cfg.mode:
            raise AutomatonError(f"sequence does not induce a run at {t!r}")
        cfg = step(cfg, t)
        configs.append(cfg)
    return Run(tuple(transitions), tuple(configs))


class Resolver:
    """Policy resolving nondeterminism: (run so far, next letter) -> transition.

    ``choose`` may be queried with ``EOW`` in place of a letter only when
    driven by :func:`run_with_eow_resolver`; returning ``None`` then signals
    that the run should stop.
    """

    kind = "unrestricted"

    def choose(self, run: Run, letter) -> Transition | None:
        raise NotImplementedError


class FunctionResolver(Resolver):
    def __init__(self, fn: Callable[[Run, Letter], Transition | None], kind="unrestricted"):
        self.fn = fn
        self.kind = kind

    def choose(self, run: Run, letter):
        return self.fn(run, letter)


class PositionalResolver(Resolver):
    """Resolver whose choice depends only on (last configuration, letter)."""

    kind = "positional"

    def choose_at(self, config: Configuration, letter) -> Transition | None:
        raise NotImplementedError

    def choose(self, run: Run, letter):
        return self.choose_at(run.last, letter)


class FirstEnabledResolver(PositionalResolver):
    """Picks the first enabled letter transition, falling back to epsilon."""

    def __init__(self, pda: Pda):
        self.pda = pda

    def choose_at(self, config, letter):
        if letter is not EOW:
            ts = enabled(self.pda, config, letter)
            if ts:
                return ts[0]
        ts = enabled(self.pda, config, None)
        if ts:
            return ts[0]
        return None


def default_eps_budget(pda: Pda, config: Configuration) -> int:
    return len(pda.states) * (config.stack_height + 2)


def _drive(pda: Pda, resolver: Resolver, word, *, eow: bool,
           eps_budget: int | None) -> tuple[Run, bool]:
    word = tuple(word)
    cfg = pda.initial_config()
    transitions: list[Transition] = []
    configs = [cfg]

    def ask(letter):
        run = Run(tuple(transitions), tuple(configs))
        return resolver.choose(run, letter)

    def illegal(msg):
        return ResolverError(msg, tuple(transitions))

    for letter in word:
        if letter not in pda.alphabet:
            raise AutomatonError(f"unknown letter {letter!r}")
        budget = eps_budget if eps_budget is not None else default_eps_budget(pda, cfg)
        while True:
            t = ask(letter)
            if t is None:
                raise illegal("resolver illegal move: no transition returned")
            if t.label is not None and t.label != letter:
                raise illegal(f"resolver illegal move: {t!r} does not process {letter!r}")
            if (t.src, t.top) != cfg.mode:
                raise illegal(f"resolver illegal move: {t!r} not enabled")
            cfg = step(cfg, t)
            transitions.append(t)
            configs.append(cfg)
            if t.label is not None:
                break
            budget -= 1
            if budget < 0:
                raise illegal("epsilon budget exceeded")

    if eow:
        budget = eps_budget if eps_budget is not None else default_eps_budget(pda, cfg)
        while True:
            t = ask(EOW)
            if t is None:
                break
            if t.label is not None:
                raise illegal(f"resolver illegal move: {t!r} after end of word")
            if (t.src, t.top) != cfg.mode:
                raise illegal(f"resolver illegal move: {t!r} not enabled")
            cfg = step(cfg, t)
            transitions.append(t)
            configs.append(cfg)
            budget -= 1
            if budget < 0:
                raise illegal("epsilon budget exceeded")

    run = Run(tuple(transitions), tuple(configs))
    return run, pda.is_final(cfg.state)


def run_with_resolver(pda: Pda, resolver: Resolver, word,
                      eps_budget: int | None = None) -> tuple[Run, bool]:
    """The resolver-induced run on ``word``; stops with the last letter.

    For the empty word the run is empty and acceptance is decided by the
    initial configuration.
    """
    return _drive(pda, resolver, word, eow=False, eps_budget=eps_budget)


def run_with_eow_resolver(pda: Pda, resolver: Resolver, word,
                          eps_budget: int | None = None) -> tuple[Run, bool]:
    """As :func:`run_with_resolver`, but after the last letter the resolver is
    queried with ``EOW`` and may append trailing epsilon transitions until it
    returns ``None``."""
    return _drive(pda, resolver, word, eow=True, eps_budget=eps_budget)


@dataclass
class PdTransducer:
    """A pushdown transducer implementing a resolver.

    ``dpda`` is a deterministic PDA whose input letters are the controlled
    automaton's transitions; ``output`` maps a transducer state to a table
    (controlled state, key, next letter) -> transition, where the key is the
    controlled mode's top symbol, or the state of ``stack_dfa`` on the whole
    stack for the regular-stack-access variant.
    """

    dpda: Pda
    output: dict
    stack_dfa: object | None = None
    kind: str = "pushdown-transducer"

    def validate(self) -> list[str]:
        problems = validate(self.dpda)
        if not is_deterministic(self.dpda):
            problems.append("transducer automaton is not deterministic")
        return problems

    def drive(self, inputs) -> Configuration:
        """Longest run of the transducer on a transition sequence."""
        cfg = self.dpda.initial_config()

        def eps_exhaust(cfg):
            budget = default_eps_budget(self.dpda, cfg)
            while True:
                ts = enabled(self.dpda, cfg, None)
                if not ts:
                    return cfg
                cfg = step(cfg, ts[0])
                budget -= 1
                if budget < 0:
                    raise ResolverError("transducer epsilon budget exceeded")

        for tau in inputs:
            cfg = eps_exhaust(cfg)
            ts = enabled(self.dpda, cfg, tau)
            if not ts:
                return cfg  # dead: no further tracking
            cfg = step(cfg, ts[0])
        return eps_exhaust(cfg)

    def as_resolver(self) -> "Resolver":
        return _TransducerResolver(self)


class _TransducerResolver(Resolver):
    kind = "pushdown-transducer"

    def __init__(self, pdt: PdTransducer):
        self.pdt = pdt

    def choose(self, run: Run, letter):
        if letter is EOW:
            return None
        cfg_t = self.pdt.drive(run.transitions)
        last = run.last
        if self.pdt.stack_dfa is not None:
            key = self.pdt.stack_dfa.run(last.stack)
        else:
            key = last.top
        table = self.pdt.output.get(cfg_t.state, {})
        return table.get((last.state, key, letter))


def complete(pda: Pda, sink_name="__sink__", sink_sym="__S__") -> Pda:
    """Language-preserving completion of a VPA: a fresh non-final sink absorbs
    every missing (mode, letter) pair, pushing a designated sink symbol on
    calls.  Requires a partitioned alphabet and no epsilon transitions."""
    part = pda.alphabet.partition
    if part is None:
        raise AutomatonError("complete() needs a partitioned alphabet")
    if any(t.label is None for t in pda.transitions):
        raise AutomatonError("complete() does not support epsilon transitions")
    while sink_name in pda.states:
        sink_name = sink_name + "'"
    while sink_sym in pda.stack_alphabet:
        sink_sym = sink_sym + "'"
    states = pda.states + (sink_name,)
    gamma = pda.stack_alphabet + (sink_sym,)
    idx = pda.mode_index()
    new = list(pda.transitions)
    for q in states:
        for x in (None,) + gamma:
            for a in pda.alphabet.letters:
                if idx.get((q, x, a)):
                    continue
                cls = part.class_of(a)
                if cls == "call":
                    pushed = (x, sink_sym)
                elif cls == "return":
                    pushed = (None,) if x is None else ()
                else:
                    pushed = (x,)
                new.append(Transition(q, x, a, sink_name, pushed))
    return Pda(states, pda.alphabet, gamma, pda.initial, tuple(new),
               pda.finals, name=pda.name)
