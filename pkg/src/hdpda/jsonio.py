"""JSON interchange for automata, grammars, games and arenas.

States and stack symbols are interned to stable string names on the way out
("eps" and "bot" are reserved literals); see docs/schema.md for the field
layout.  Schema violations raise :class:`SchemaError` with the offending
path in the message.
"""

from __future__ import annotations

import json

from .core import Alphabet, Partition, Pda, Transition
from .finite import Dfa, Nfa
from .synthesis import Arena
from .vpg import GBOT, Move, VpGame

EPS_LIT = "eps"
BOT_LIT = "bot"


class SchemaError(ValueError):
    pass


def _name(x) -> str:
    if isinstance(x, str):
        return x
    return repr(x)


def _letter_out(a):
    if isinstance(a, tuple):
        return list(_letter_out(p) for p in a)
    return a


def _letter_in(a):
    if isinstance(a, list):
        return tuple(_letter_in(p) for p in a)
    return a


def _name_map(items) -> dict:
    out: dict = {}
    used: set = set()
    for x in items:
        base = _name(x)
        name = base
        k = 2
        while name in used:
            name = f"{base}#{k}"
            k += 1
        used.add(name)
        out[x] = name
    return out


def pda_to_json(pda: Pda) -> dict:
    states = _name_map(pda.states)
    syms = _name_map(pda.stack_alphabet)
    part = pda.alphabet.partition

    def sym_out(s):
        return BOT_LIT if s is None else syms[s]

    obj = {
        "type": "vpa" if part is not None else "pda",
        "states": [states[q] for q in pda.states],
        "alphabet": {"letters": [_letter_out(a) for a in pda.alphabet.letters]},
        "stack": [syms[s] for s in pda.stack_alphabet],
        "initial": states[pda.initial],
        "finals": sorted(states[q] for q in pda.finals),
        "transitions": [
            [states[t.src], sym_out(t.top),
             EPS_LIT if t.label is None else _letter_out(t.label),
             states[t.dst], [sym_out(s) for s in t.pushed]]
            for t in pda.transitions
        ],
    }
    if pda.name:
        obj["name"] = pda.name
    if part is not None:
        obj["alphabet"]["partition"] = {
            "calls": sorted((_letter_out(a) for a in part.calls), key=repr),
            "returns": sorted((_letter_out(a) for a in part.returns), key=repr),
            "internals": sorted((_letter_out(a) for a in part.internals), key=repr),
        }
    return obj


def _need(obj, field, path):
    if field not in obj:
        raise SchemaError(f"{path}: missing field {field!r}")
    return obj[field]


def pda_from_json(obj: dict, path: str = "$") -> Pda:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    states = _need(obj, "states", path)
    stack = _need(obj, "stack", path)
    alph = _need(obj, "alphabet", path)
    letters = tuple(_letter_in(a) for a in _need(alph, "letters", path + ".alphabet"))
    part = None
    if "partition" in alph:
        p = alph["partition"]
        part = Partition(
            frozenset(_letter_in(a) for a in _need(p, "calls", path + ".partition")),
            frozenset(_letter_in(a) for a in _need(p, "returns", path + ".partition")),
            frozenset(_letter_in(a) for a in _need(p, "internals", path + ".partition")),
        )
    state_set = set(states)
    sym_set = set(stack)
    if BOT_LIT in sym_set:
        raise SchemaError(f"{path}.stack: {BOT_LIT!r} is reserved")

    def sym_in(s, where):
        if s == BOT_LIT:
            return None
        if s not in sym_set:
            raise SchemaError(f"{where}: unknown stack symbol {s!r}")
        return s

    trans = []
    for i, row in enumerate(_need(obj, "transitions", path)):
        where = f"{path}.transitions[{i}]"
        if not isinstance(row, list) or len(row) != 5:
            raise SchemaError(f"{where}: expected a 5-tuple")
        src, top, label, dst, pushed = row
        if src not in state_set:
            raise SchemaError(f"{where}: unknown state {src!r}")
        if dst not in state_set:
            raise SchemaError(f"{where}: unknown state {dst!r}")
        lab = None if label == EPS_LIT else _letter_in(label)
        if lab is not None and lab not in letters:
            raise SchemaError(f"{where}: unknown letter {label!r}")
        trans.append(Transition(src, sym_in(top, where), lab, dst,
                                tuple(sym_in(s, where) for s in pushed)))
    initial = _need(obj, "initial", path)
    if initial not in state_set:
        raise SchemaError(f"{path}.initial: unknown state {initial!r}")
    finals = _need(obj, "finals", path)
    for q in finals:
        if q not in state_set:
            raise SchemaError(f"{path}.finals: unknown state {q!r}")
    return Pda(tuple(states), Alphabet(letters, part), tuple(stack), initial,
               tuple(trans), frozenset(finals), name=obj.get("name", ""))


def nfa_to_json(nfa: Nfa) -> dict:
    return {
        "type": "nfa",
        "states": [_name(q) for q in nfa.states],
        "alphabet": {"letters": [_letter_out(a) for a in nfa.letters]},
        "initial": sorted(_name(q) for q in nfa.initials),
        "finals": sorted(_name(q) for q in nfa.finals),
        "transitions": sorted(
            [_name(s), _letter_out(a), _name(d)] for (s, a, d) in nfa.transitions
        ),
    }


def nfa_from_json(obj: dict, path: str = "$") -> Nfa:
    states = tuple(_need(obj, "states", path))
    letters = tuple(_letter_in(a) for a in _need(obj["alphabet"], "letters", path))
    state_set = set(states)
    trans = set()
    for i, row in enumerate(_need(obj, "transitions", path)):
        where = f"{path}.transitions[{i}]"
        if len(row) != 3:
            raise SchemaError(f"{where}: expected a 3-tuple")
        (s, a, d) = row
        if s not in state_set or d not in state_set:
            raise SchemaError(f"{where}: unknown state")
        trans.add((s, _letter_in(a), d))
    return Nfa(states, letters, frozenset(_need(obj, "initial", path)),
               frozenset(trans), frozenset(_need(obj, "finals", path)))


def cfg_to_json(cfg) -> dict:
    return {
        "type": "cfg",
        "variables": [_name(v) for v in cfg.variables],
        "terminals": [_letter_out(t) for t in cfg.terminals],
        "start": _name(cfg.start),
        "productions": [
            [_name(v), [_name(s) if s in cfg.variables else _letter_out(s)
                        for s in rhs]]
            for (v, rhs) in cfg.productions
        ],
    }


def pdt_to_json(pdt) -> dict:
    """A pushdown transducer: the controlled automaton is embedded and the
    transducer's input letters reference its transitions by index."""
    controlled = getattr(pdt, "controlled", None)
    if controlled is None:
        raise TypeError("transducer carries no controlled automaton")
    tindex = {t: i for i, t in enumerate(controlled.transitions)}
    d = pdt.dpda
    states = _name_map(d.states)
    syms = _name_map(d.stack_alphabet)

    def sym_out(s):
        return BOT_LIT if s is None else syms[s]

    return {
        "type": "transducer",
        "controlled": pda_to_json(controlled),
        "states": [states[q] for q in d.states],
        "stack": [syms[s] for s in d.stack_alphabet],
        "initial": states[d.initial],
        "transitions": [
            [states[t.src], sym_out(t.top), tindex[t.label], states[t.dst],
             [sym_out(s) for s in t.pushed]]
            for t in d.transitions
        ],
        "output": {
            states[q]: [[_name(st), BOT_LIT if key is None else _name(key),
                         _letter_out(letter), tindex[tau]]
                        for (st, key, letter), tau in sorted(table.items(),
                                                             key=repr)]
            for q, table in pdt.output.items()
        },
    }


def configset_to_json(cs) -> dict:
    """A configuration set as its annotated NFA: entry nodes are tagged with
    their automaton states."""
    names = _name_map(sorted(cs.nodes, key=repr))
    return {
        "type": "configset",
        "nodes": [names[n] for n in sorted(cs.nodes, key=repr)],
        "entries": {_name(q): names[n] for q, n in sorted(cs.entries.items(),
                                                          key=repr)},
        "accepting": sorted(names[n] for n in cs.accepting),
        "edges": sorted(
            [names[s], BOT_LIT if x is None else _name(x), names[d]]
            for (s, x, d) in cs.edges
        ),
    }


def arena_to_json(arena: Arena) -> dict:
    return {
        "type": "arena",
        "positions": [_name(p) for p in arena.positions],
        "owner": {_name(p): (1 if p in arena.p1 else 2) for p in arena.positions},
        "edges": [{"src": _name(s), "label": _letter_out(lab), "dst": _name(d)}
                  for (s, lab, d) in arena.edges],
        "initial": _name(arena.initial),
    }


def arena_from_json(obj: dict, path: str = "$") -> Arena:
    positions = tuple(_need(obj, "positions", path))
    owner = _need(obj, "owner", path)
    for p in positions:
        if str(owner.get(p)) not in ("1", "2"):
            raise SchemaError(f"{path}.owner[{p!r}]: must be 1 or 2")
    edges = []
    for i, e in enumerate(_need(obj, "edges", path)):
        where = f"{path}.edges[{i}]"
        for f in ("src", "label", "dst"):
            if f not in e:
                raise SchemaError(f"{where}: missing {f!r}")
        edges.append((e["src"], _letter_in(e["label"]), e["dst"]))
    p1 = frozenset(p for p in positions if int(owner[p]) == 1)
    return Arena(positions, p1, frozenset(positions) - p1, tuple(edges),
                 _need(obj, "initial", path))


def vpgame_to_json(g: VpGame) -> dict:
    def top_out(t):
        if t is None:
            return None
        if t == GBOT:
            return BOT_LIT
        return _name(t)

    kind, special = g.objective
    return {
        "type": "vpgame",
        "positions": [_name(p) for p in g.positions],
        "eve": sorted(_name(p) for p in g.eve),
        "adam": sorted(_name(p) for p in g.adam),
        "stack": [_name(s) for s in g.stack_syms],
        "moves": [
            {k: v for k, v in
             [("src", _name(m.src)), ("dst", _name(m.dst)), ("kind", m.kind),
              ("top", top_out(m.top)), ("push", None if m.push_sym is None
                                        else _name(m.push_sym))]
             if v is not None}
            for m in g.moves
        ],
        "initial": _name(g.initial),
        "objective": {"kind": kind, "positions": sorted(_name(p) for p in special)},
    }


def vpgame_from_json(obj: dict, path: str = "$") -> VpGame:
    positions = tuple(_need(obj, "positions", path))
    pos_set = set(positions)
    eve = frozenset(_need(obj, "eve", path))
    adam = frozenset(_need(obj, "adam", path))
    syms = tuple(_need(obj, "stack", path))
    moves = []
    for i, m in enumerate(_need(obj, "moves", path)):
        where = f"{path}.moves[{i}]"
        src, dst = _need(m, "src", where), _need(m, "dst", where)
        if src not in pos_set or dst not in pos_set:
            raise SchemaError(f"{where}: unknown position")
        top = m.get("top")
        if top == BOT_LIT:
            top = GBOT
        moves.append(Move(src, dst, _need(m, "kind", where), top=top,
                          push_sym=m.get("push")))
    objective = _need(obj, "objective", path)
    kind = _need(objective, "kind", path + ".objective")
    if kind not in ("safety", "reachability"):
        raise SchemaError(f"{path}.objective: unknown kind {kind!r}")
    return VpGame(positions, eve, adam, syms, tuple(moves),
                  _need(obj, "initial", path),
                  (kind, frozenset(objective.get("positions", ()))))


def load(fp_or_path):
    """Load any supported object from a file path or file object."""
    if isinstance(fp_or_path, str):
        with open(fp_or_path) as fp:
            obj = json.load(fp)
    else:
        obj = json.load(fp_or_path)
    return from_json(obj)


def from_json(obj):
    kind = obj.get("type") if isinstance(obj, dict) else None
    if kind in ("pda", "vpa"):
        return pda_from_json(obj)
    if kind == "nfa":
        return nfa_from_json(obj)
    if kind == "arena":
        return arena_from_json(obj)
    if kind == "vpgame":
        return vpgame_from_json(obj)
    raise SchemaError(f"$.type: unsupported or missing object type {kind!r}")


def to_json(x) -> dict:
    from .core import PdTransducer

    if isinstance(x, PdTransducer):
        return pdt_to_json(x)
    if isinstance(x, Pda):
        return pda_to_json(x)
    if isinstance(x, Nfa):
        return nfa_to_json(x)
    if isinstance(x, Dfa):
        return nfa_to_json(x.as_nfa())
    if isinstance(x, Arena):
        return arena_to_json(x)
    if isinstance(x, VpGame):
        return vpgame_to_json(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(x, indent=2) -> str:
    return json.dumps(to_json(x), indent=indent, sort_keys=False)
