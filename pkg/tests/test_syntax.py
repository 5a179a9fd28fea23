import random

import numpy as np
import pytest
from hypothesis import given, settings

from sdlkit.errors import DuplicateNameError, EmptySystemError, SDLSyntaxError
from sdlkit.generators import random_formula, random_formulas
from sdlkit.kripke import truth_tables
from sdlkit.syntax import (BOTTOM, TOP, And, Atom, Box, Diamond, Iff, Implies,
                           Not, Or, atoms_of, format_formula, is_nnf,
                           modal_depth, parse_formula, parse_system, to_nnf)

from .conftest import formulas

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, expected", [
    ("J -> [] act_ag1_term", Implies(Atom("J"), Box(Atom("act_ag1_term")))),
    ("<> p", Diamond(p)),
    ("[] p & q", And(Box(p), q)),
    ("~p | q & r", Or(Not(p), And(q, r))),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("p <-> q <-> r", Iff(p, Iff(q, r))),
    ("p & q & r", And(And(p, q), r)),
    ("p | q -> r <-> p", Iff(Implies(Or(p, q), r), p)),
    ("true & ~false", And(TOP, Not(BOTTOM))),
    ("[]<>~p", Box(Diamond(Not(p)))),
    ("□(p → q) ∧ ◇¬p", And(Box(Implies(p, q)), Diamond(Not(p)))),
])
def test_parse_examples(text, expected):
    assert parse_formula(text) == expected


@pytest.mark.parametrize("text, col", [
    ("p &", 4), ("(p | q", 7), ("p q", 3), ("p $ q", 3), ("", 1), ("[] -> p", 4),
])
def test_parse_errors_report_position(text, col):
    with pytest.raises(SDLSyntaxError) as info:
        parse_formula(text)
    assert info.value.line == 1
    assert info.value.column == col
    assert info.value.expected or "character" in str(info.value)


def test_parse_error_expected_set():
    with pytest.raises(SDLSyntaxError) as info:
        parse_formula("p & ")
    assert {"~", "[]", "<>", "(", "IDENT"} <= info.value.expected


def test_atoms_intern_by_name():
    assert Atom("act_ag1_term") == parse_formula("act_ag1_term")
    assert len({Atom("x"), Atom("x")}) == 1
    with pytest.raises(ValueError):
        Atom("1abc")


@given(formulas())
@settings(max_examples=300, deadline=None)
def test_round_trip(f):
    assert parse_formula(format_formula(f)) == f


@given(formulas())
@settings(max_examples=300, deadline=None)
def test_nnf_shape_idempotent_and_depth(f):
    g = to_nnf(f)
    assert is_nnf(g)
    assert to_nnf(g) == g
    assert modal_depth(g) == modal_depth(f)


def test_nnf_examples():
    assert to_nnf(Not(Box(p))) == Diamond(Not(p))
    assert to_nnf(Not(Implies(p, q))) == And(p, Not(q))
    assert to_nnf(Not(Diamond(p))) == Box(Not(p))
    assert to_nnf(Not(Not(p))) == p


def _equivalent_on_small_models(f, g, atoms, worlds=(1, 2, 3)):
    for n in worlds:
        if not np.array_equal(truth_tables(f, n, atoms), truth_tables(g, n, atoms)):
            return False
    return True


def test_nnf_equivalence_500_random():
    # every serial model with at most 3 worlds, every world
    rng = random.Random(11)
    for _ in range(500):
        f = random_formula(rng, ("p", "q", "s", "t"), height=4, max_modal=3)
        atoms = sorted(atoms_of(f)) or ["p"]
        assert _equivalent_on_small_models(f, to_nnf(f), atoms), format_formula(f)


def test_nnf_equivalence_detects_difference():
    # the checker itself must be able to fail
    assert not _equivalent_on_small_models(Box(p), Diamond(p), ["p"])


@pytest.mark.parametrize("text, depth", [
    ("p & q", 0), ("[](p -> q)", 1), ("[]<>p", 2), ("<>p & [][]q", 2), ("~[]~<>p", 2),
])
def test_modal_depth(text, depth):
    assert modal_depth(parse_formula(text)) == depth


def test_parse_system_counts_lines():
    n = parse_system("# comment\np\nformula: [] q\n")
    assert n.formulas == [p, Box(q)]
    assert n.global_formulas == []


def test_parse_system_globals_header_and_dedupe():
    n = parse_system("system demo\nglobal: p -> q\np\np  # again\n")
    assert n.name == "demo"
    assert n.formulas == [p]
    assert n.global_formulas == [Implies(p, q)]


def test_parse_system_empty():
    with pytest.raises(EmptySystemError):
        parse_system("")
    with pytest.raises(EmptySystemError):
        parse_system("# only a comment\n\n")


def test_parse_system_duplicate_header():
    with pytest.raises(DuplicateNameError):
        parse_system("system a\nsystem b\np\n")


def test_parse_system_error_line_and_column():
    with pytest.raises(SDLSyntaxError) as info:
        parse_system("p\n\nformula: q & \n")
    assert info.value.line == 3
    assert info.value.column == 14


def test_robots_corpus(robots):
    assert len(robots.formulas) == 4
    assert len(robots.global_formulas) == 4
    assert all(str(g).endswith(o) for g, o in zip(
        robots.global_formulas, ["outcome_worst", "outcome_bad", "outcome_mild", "outcome_best"]))
    assert parse_formula("J -> [] act_ag1_term") in robots.formulas


def test_system_text_round_trip(robots):
    assert parse_system(robots.to_text()) == robots


def test_generator_is_seeded_and_bounded():
    a = random_formulas(5, 50)
    assert a == random_formulas(5, 50)
    assert all(modal_depth(f) <= 2 and len(atoms_of(f)) <= 4 for f in a)
