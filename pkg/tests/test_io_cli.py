"""JSON round-trips and the command-line surface."""

import json
import os

import pytest

from hdpda import jsonio
from hdpda.analysis import bounded_language, pda_to_cfg
from hdpda.cli import main
from hdpda.families import FAMILIES, gen_b2
from hdpda.synthesis import END, Arena
from hdpda.vpa import vpa_language
from hdpda.vpg import GBOT, Move, VpGame


def test_pda_json_roundtrip_stable_and_language_preserving():
    for name in ("b2", "cnprime", "lnprime", "fig1"):
        entry = FAMILIES[name]
        kwargs = {p: 1 for p in entry.parameters}
        pda = entry.generate(**kwargs)
        blob = jsonio.to_json(pda)
        back = jsonio.pda_from_json(blob)
        assert jsonio.to_json(back) == blob  # serialization fixpoint
        if pda.alphabet.partition is not None:
            assert vpa_language(pda, 6) == vpa_language(back, 6)
        else:
            assert bounded_language(pda, 6) == bounded_language(back, 6)


def test_pda_json_tuple_letters():
    from hdpda.core import mkpda

    letters = [("a", "x"), ("a", "y")]
    v = mkpda(["q"], letters, [], "q",
              [("q", None, ("a", "x"), "q", (None,))], ["q"],
              internals=letters)
    blob = jsonio.to_json(v)
    back = jsonio.pda_from_json(blob)
    assert set(back.alphabet.letters) == set(letters)


def test_schema_errors_are_path_precise():
    pda, _ = gen_b2()
    blob = jsonio.to_json(pda)
    blob["transitions"][3][0] = "missing-state"
    with pytest.raises(jsonio.SchemaError, match=r"transitions\[3\]"):
        jsonio.pda_from_json(blob)
    blob2 = jsonio.to_json(pda)
    del blob2["initial"]
    with pytest.raises(jsonio.SchemaError, match="initial"):
        jsonio.pda_from_json(blob2)


def test_arena_and_game_roundtrip():
    arena = Arena(("u", "v", "t"), frozenset({"u"}), frozenset({"v", "t"}),
                  (("u", "a", "v"), ("v", END, "t")), "u")
    back = jsonio.arena_from_json(jsonio.to_json(arena))
    assert jsonio.to_json(back) == jsonio.to_json(arena)

    game = VpGame(("p", "q"), frozenset({"p"}), frozenset({"q"}), ("X",),
                  (Move("p", "q", "push", push_sym="X"),
                   Move("q", "p", "pop", top="X"),
                   Move("q", "q", "internal", top=GBOT)),
                  "p", ("safety", frozenset({"q"})))
    back = jsonio.vpgame_from_json(jsonio.to_json(game))
    assert jsonio.to_json(back) == jsonio.to_json(game)


def test_cfg_serialization_shape():
    pda, _ = gen_b2()
    blob = jsonio.cfg_to_json(pda_to_cfg(pda))
    assert set(blob) == {"type", "variables", "terminals", "start",
                         "productions"}


# --- CLI ----------------------------------------------------------------------


def _write(tmp_path, name, family, n=None):
    entry = FAMILIES[family]
    kwargs = {p: n for p in entry.parameters} if n is not None else {}
    pda = entry.generate(**kwargs)
    path = tmp_path / name
    path.write_text(jsonio.dumps(pda))
    return str(path)


def test_cli_validate_and_hd_check(tmp_path, capsys):
    f = _write(tmp_path, "cn1.json", "cnprime", 1)
    assert main(["validate", f]) == 0
    assert main(["hd", "check", f]) == 0
    out = capsys.readouterr().out
    assert "HD: yes" in out


def test_cli_hd_check_negative(tmp_path, capsys):
    f = _write(tmp_path, "ln2.json", "lnprime", 2)
    assert main(["hd", "check", f]) == 1
    assert "HD: no" in capsys.readouterr().out


def test_cli_universal_negative_with_counterexample(tmp_path, capsys):
    f = _write(tmp_path, "ln2.json", "lnprime", 2)
    assert main(["vpa", "universal", f]) == 1
    assert "counterexample" in capsys.readouterr().out


def test_cli_empty_and_member(tmp_path, capsys):
    f = _write(tmp_path, "cn1.json", "cnprime", 1)
    assert main(["vpa", "empty", f]) == 1  # nonempty
    assert main(["vpa", "member", f, "--word", "01"]) == 0
    forbidden = "$0$1" + "#" * 4
    assert main(["vpa", "member", f, "--word", forbidden]) == 1


def test_cli_equiv_det(tmp_path, capsys):
    f = _write(tmp_path, "ln1.json", "lnprime", 1)
    out = str(tmp_path / "det.json")
    assert main(["vpa", "det", f, "-o", out]) == 0
    assert main(["vpa", "equiv", f, out]) == 0
    f2 = _write(tmp_path, "ln2.json", "lnprime", 2)
    assert main(["vpa", "equiv", f, f2]) == 1


def test_cli_malformed_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == 2
    missing = tmp_path / "nothere.json"
    assert main(["validate", str(missing)]) == 2
    schema_bad = tmp_path / "schema.json"
    schema_bad.write_text(json.dumps({"type": "pda", "states": ["q"]}))
    assert main(["validate", str(schema_bad)]) == 2


def test_cli_family_gen_and_oracle(tmp_path, capsys):
    out = str(tmp_path / "b2.json")
    assert main(["family", "gen", "b2", "-o", out]) == 0
    assert os.path.exists(out)
    assert main(["family", "oracle", "b2", "a$aa$bb$"]) == 0
    assert main(["family", "oracle", "b2", "aa$a$bbb$"]) == 1
    assert main(["family", "oracle", "nosuch", "w"]) == 2


def test_cli_hd_oracle(tmp_path, capsys):
    f = _write(tmp_path, "ln2.json", "lnprime", 2)
    assert main(["hd", "oracle", f, "--horizon", "5"]) == 1
    assert "challenger" in capsys.readouterr().out


def test_cli_exit_codes_deterministic(tmp_path):
    f = _write(tmp_path, "ln2.json", "lnprime", 2)
    codes = {main(["hd", "check", f]) for _ in range(3)}
    assert codes == {1}


def test_cli_bench_writes_csv_and_figure(tmp_path, capsys):
    outdir = str(tmp_path / "rep")
    assert main(["bench", "succinctness", "--family", "lnprime",
                 "--range", "2:4", "--out-dir", outdir]) == 0
    assert os.path.exists(os.path.join(outdir, "bench_lnprime.csv"))
    assert os.path.exists(os.path.join(outdir, "bench_lnprime.png"))
    rows = open(os.path.join(outdir, "bench_lnprime.csv")).read().splitlines()
    assert rows[0].startswith("family,parameter")
    assert len(rows) == 4


def test_cli_game_compose(tmp_path, capsys):
    auto = _write(tmp_path, "ln1.json", "lnprime", 1)
    arena = Arena(("u", "v", "t"), frozenset({"u", "v", "t"}), frozenset(),
                  (("u", "1", "v"), ("v", END, "t")), "u")
    apath = tmp_path / "arena.json"
    apath.write_text(json.dumps(jsonio.to_json(arena)))
    assert main(["game", "compose", str(apath), auto]) == 0
    assert main(["game", "compose", "--check", str(apath), auto]) == 0
