"""Family generators: validity, oracle agreement, size budgets, resolvers."""

import math

import pytest

from hdpda.core import (
    Configuration,
    ResolverError,
    run_with_resolver,
    validate,
)
from hdpda.analysis import bounded_language
from hdpda.families import (
    FAMILIES,
    counter_word,
    gen_astar_b,
    gen_b2,
    gen_b3,
    gen_cn,
    gen_cn_prime,
    gen_fig1,
    gen_linfix,
    gen_ln,
    gen_ln_prime_vpa,
    make_cn_oracle,
    make_cn_prime_oracle,
    make_linfix_oracle,
    make_ln_oracle,
    make_ln_prime_oracle,
    oracle_astar_b,
    oracle_b2,
    oracle_b3,
    oracle_fig1,
)
from hdpda.vpa import vpa_language, vpa_violations

from conftest import words_upto


def assert_language_matches(pda, oracle, letters, max_len, height=None):
    lang = bounded_language(pda, max_len, max_height=height or max_len + 3)
    for w in words_upto(letters, max_len):
        assert (tuple(w) in lang) == oracle(w), w


def resolver_accepts(pda, res, w):
    try:
        _, acc = run_with_resolver(pda, res, w)
    except ResolverError:
        return False
    return acc


# --- fig 1 -------------------------------------------------------------------


def test_fig1_examples_and_language():
    pda = gen_fig1()
    assert validate(pda) == []
    assert oracle_fig1("acda")
    assert oracle_fig1("bcddb")
    assert not oracle_fig1("acdda")
    assert_language_matches(pda, oracle_fig1, "abcd", 8)


# --- b2 / b3 -----------------------------------------------------------------


def test_b2_language_and_resolver():
    pda, res = gen_b2()
    assert validate(pda) == []
    assert oracle_b2("a$aa$bb$")
    assert not oracle_b2("aa$a$bbb$")
    assert_language_matches(pda, oracle_b2, "a$b", 8)
    for w in words_upto("a$b", 8):
        assert resolver_accepts(pda, res, w) == oracle_b2(w), w


def test_b2_resolver_picks_p2_on_longer_second_block():
    pda, res = gen_b2()
    run, acc = run_with_resolver(pda, res, "a$aa$bb$")
    assert acc
    assert any(t.dst == "p2" and t.label == "$" and t.src == "q2"
               for t in run.transitions)


def test_b2_resolver_positional_replay():
    # two distinct histories with equal end configurations get equal choices
    pda, res = gen_b2()
    run1, _ = run_with_resolver(pda, res, "aa$")
    cfg = run1.last
    alt = Configuration(cfg.state, cfg.stack)
    assert res.choose_at(cfg, "a") == res.choose_at(alt, "a")


def test_b3_language_and_resolver():
    pda, res = gen_b3()
    assert validate(pda) == []
    assert oracle_b3("a$a$aa$bb$")
    assert not oracle_b3("a$a$a$bb$")
    assert_language_matches(pda, oracle_b3, "a$b", 8)
    for w in words_upto("a$b", 9):
        assert resolver_accepts(pda, res, w) == oracle_b3(w), w


def test_b3_resolver_pops_to_longest_block():
    pda, res = gen_b3()
    run, acc = run_with_resolver(pda, res, "a$aaa$a$bbb$")
    assert acc
    # the longest block is the second: the resolver enters p2
    entered = [t.dst for t in run.transitions
               if t.src == "q3" and t.label == "$"]
    assert entered == ["p2"]


# --- bad counters ------------------------------------------------------------


@pytest.mark.parametrize("n", range(2, 9))
def test_cn_state_budget_exact(n):
    pda, _ = gen_cn(n)
    assert len(pda.states) == 3 * (n + 1) + 6 * (n + 1) + 3
    assert len(pda.stack_alphabet) == 3
    assert validate(pda) == []


def test_cn_paper_words():
    pda, res = gen_cn(2)
    oracle = make_cn_oracle(2)
    forbidden = counter_word(2) + "#"
    assert forbidden == "$00$01$10$11#"
    assert not oracle(forbidden)
    assert oracle("$00$01$11$10#")
    from hdpda.analysis import pda_membership

    assert not pda_membership(pda, forbidden)
    assert pda_membership(pda, "$00$01$11$10#")
    assert resolver_accepts(pda, res, "$00$01$11$10#")
    assert not resolver_accepts(pda, res, forbidden)


def test_cn1_exhaustive_language_and_resolver():
    pda, res = gen_cn(1)
    oracle = make_cn_oracle(1)
    assert_language_matches(pda, oracle, "01$#", 7, height=9)
    for w in words_upto("01$#", 7):
        assert resolver_accepts(pda, res, w) == oracle(w), w


def test_cn_resolver_positional():
    pda, res = gen_cn(1)
    run, _ = run_with_resolver(pda, res, "$0$1")
    cfg = run.last
    alt = Configuration(cfg.state, cfg.stack)
    assert res.choose_at(cfg, "#") == res.choose_at(alt, "#")


# --- log-size family ---------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8])
def test_ln_language(n):
    pda = gen_ln(n)
    assert validate(pda) == []
    oracle = make_ln_oracle(n)
    maxlen = min(n + 4, 9)
    assert_language_matches(pda, oracle, "01", maxlen, height=maxlen + 4)


def test_ln_stack_and_state_budgets():
    for n in (4, 8, 16, 64, 256, 1024):
        pda = gen_ln(n)
        assert len(pda.stack_alphabet) + 1 == 3  # 0, 1 and the bottom marker
        assert len(pda.states) <= 4 * math.ceil(math.log2(n))


# --- visible bad counters ----------------------------------------------------


@pytest.mark.parametrize("n", [1, 2])
def test_cn_prime_validates_and_short_words(n):
    pda, _ = gen_cn_prime(n)
    assert vpa_violations(pda) == []
    oracle = make_cn_prime_oracle(n)
    lang = vpa_language(pda, 7)
    for w in words_upto("01$#", 7):
        assert (tuple(w) in lang) == oracle(w), w


def test_cn_prime_forbidden_word_rejected():
    pda, res = gen_cn_prime(1)
    forbidden = counter_word(1) + "#" * 4
    from hdpda.vpa import vpa_membership

    assert not vpa_membership(pda, forbidden)
    assert vpa_membership(pda, forbidden[:-1])
    assert vpa_membership(pda, forbidden + "#")
    assert not resolver_accepts(pda, res, forbidden)


def test_cn_prime_resolver_exhaustive():
    pda, res = gen_cn_prime(1)
    oracle = make_cn_prime_oracle(1)
    for w in words_upto("01$#", 9):
        assert resolver_accepts(pda, res, w) == oracle(w), w


# --- alternating-pair guess family --------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ln_prime_language(n):
    v = gen_ln_prime_vpa(n)
    assert vpa_violations(v) == []
    oracle = make_ln_prime_oracle(n)
    lang = vpa_language(v, 8)
    for w in words_upto("01", 8):
        assert (tuple(w) in lang) == oracle(w), w


def test_ln_prime_paper_style_examples():
    o2 = make_ln_prime_oracle(2)
    assert not o2("1001")  # second-to-last letter is 0
    o1 = make_ln_prime_oracle(1)
    assert not o1("10")
    assert o1("01")


@pytest.mark.parametrize("choice", ["internal", "calls", "mixed"])
def test_ln_prime_partition_choices_same_language(choice):
    v = gen_ln_prime_vpa(2, choice)
    assert vpa_violations(v) == []
    oracle = make_ln_prime_oracle(2)
    lang = vpa_language(v, 7)
    for w in words_upto("01", 7):
        assert (tuple(w) in lang) == oracle(w), (choice, w)


# --- infix family ------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_linfix_language_and_resolver(k):
    pda, res = gen_linfix(k)
    assert validate(pda) == []
    oracle = make_linfix_oracle(k)
    assert oracle("baab#") == (k <= 2)
    assert not oracle("ab#") or k <= 1
    assert_language_matches(pda, oracle, "ab#", 7)
    for w in words_upto("ab#", 8):
        assert resolver_accepts(pda, res, w) == oracle(w), w


# --- a*b ----------------------------------------------------------------------


def test_astar_b_language():
    pda = gen_astar_b()
    assert validate(pda) == []
    assert oracle_astar_b("b") and oracle_astar_b("aab")
    assert_language_matches(pda, oracle_astar_b, "ab", 7)


# --- registry ----------------------------------------------------------------


def test_registry_generators_validate():
    for name, entry in FAMILIES.items():
        kwargs = {p: 2 for p in entry.parameters}
        pda = entry.generate(**kwargs)
        assert validate(pda) == [], name
        oracle = entry.oracle(**kwargs)
        assert callable(oracle)
        if entry.resolver is not None:
            assert entry.resolver(**kwargs) is not None
