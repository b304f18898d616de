import random

import pytest

from oracles import naive_mtl, naive_tptl
from tempo_ef.corpus import FamilyParams, family
from tempo_ef.evaluate import UnboundRegister, eval_mtl, eval_tptl, lasso_horizon, satisfies, until_witness
from tempo_ef.formulas import Not, mtl_to_tptl1
from tempo_ef.parser import parse_mtl, parse_tptl
from tempo_ef.selfcheck import random_lasso, random_mtl, random_tptl, random_word
from tempo_ef.words import ArithLassoWord, FiniteDataWord, materialize

WEATHER = FiniteDataWord([("rainy", 10), ("cloudy", 8), ("sunny", 12), ("sunny", 13)])


def test_weather_until():
    phi = parse_mtl("sunny U[-3,-1] cloudy")
    assert eval_mtl(WEATHER, 0, phi)
    assert until_witness(WEATHER, 0, phi) == 1
    assert not eval_mtl(WEATHER, 1, phi)


def test_trivial_examples():
    assert eval_mtl(WEATHER, 2, parse_mtl("true"))
    assert not eval_mtl(FiniteDataWord([("p", 0), ("p", 5)]), 0, parse_mtl("X[0,0] p"))
    for i in range(len(WEATHER)):
        assert eval_tptl(WEATHER, i, {"x1": 0}, parse_tptl("x1.(x1 = 0)"))


def test_until_is_strict_and_finite_ends_are_false():
    w = FiniteDataWord([("q", 0), ("p", 1)])
    assert not eval_mtl(w, 0, parse_mtl("F q"))
    assert not eval_mtl(w, 1, parse_mtl("X true"))
    assert eval_mtl(w, 0, parse_mtl("false U p"))


def test_tptl_left_operand_between():
    # in-between positions are checked against the left operand
    w = FiniteDataWord([("", 0), ("a", 1), ("b", 2)])
    assert eval_tptl(w, 0, None, parse_tptl("a U b"))
    assert not eval_tptl(w, 0, None, parse_tptl("b U b"))


def test_xfff_and_until_pair_examples():
    fam = family("prop4.2-xfff", FamilyParams(r=2, s=4, k=2))
    assert [fam.w0.point_at(j).data for j in range(7)] == [4, 0, 2, 4, 6, 8, 10]
    assert [fam.w1.point_at(j).data for j in range(6)] == [4, 2, 4, 6, 8, 10]
    phi = parse_tptl("x1.FFF(x1=0)")
    assert eval_tptl(fam.w0, 0, None, phi)
    assert not eval_tptl(fam.w1, 0, None, phi)
    H = lasso_horizon(fam.w1, phi)
    assert not eval_tptl(fam.w1, 0, None, phi, H) and not eval_tptl(fam.w1, 0, None, phi, 2 * H)


def test_until_hierarchy_words_materialized():
    fam = family("prop4.8-until", FamilyParams(r=2, k=1))
    w = materialize(fam.w0, 5)
    assert [(sorted(p.labels), p.data) for p in w.points] == [
        (["p"], 0), (["p"], 2), (["p"], 4), (["q"], 6), (["q"], 8)]


def test_lasso_example():
    w = ArithLassoWord([], [("p", 0)], delta=1)
    phi = parse_mtl("F[5,5] true")
    assert lasso_horizon(w, phi) >= 8
    assert eval_mtl(w, 0, phi) and eval_mtl(w, 0, phi, 8) and eval_mtl(w, 0, phi, 100)


def test_lasso_matches_long_prefix():
    rng = random.Random(11)
    for _ in range(60):
        w = random_lasso(rng)
        phi = random_mtl(rng, 2, ("p",), rng.sample(range(-3, 4), 2))
        long = materialize(w, 200)
        assert eval_mtl(w, 0, phi) == naive_mtl(long, 0, phi)


def test_engines_match_naive_semantics():
    rng = random.Random(7)
    for _ in range(200):
        w = random_word(rng, ("p", "q"), 6, 5)
        f = random_mtl(rng, 3, ("p", "q"), [-1, 0, 2])
        g = random_tptl(rng, 3, ("p",), [0, 1], ("x1", "x2"))
        for i in range(len(w)):
            assert eval_mtl(w, i, f) == naive_mtl(w, i, f)
            assert eval_mtl(w, i, Not(f)) != eval_mtl(w, i, f)
            nu = {"x1": rng.randint(0, 5), "x2": rng.randint(0, 5)}
            assert eval_tptl(w, i, nu, g) == naive_tptl(w, i, nu, g)


def test_translation_agrees_at_every_position():
    rng = random.Random(8)
    for _ in range(100):
        w = random_word(rng, ("p", "q"), 6, 6)
        f = random_mtl(rng, 2, ("p", "q"), rng.sample(range(-3, 4), 2))
        for i in range(len(w)):
            assert eval_mtl(w, i, f) == eval_tptl(w, i, None, mtl_to_tptl1(f))


def test_unbound_register_and_bad_position():
    w = FiniteDataWord([("p", 0)])
    with pytest.raises(UnboundRegister):
        eval_tptl(w, 0, {}, parse_tptl("x2 = 0"))
    with pytest.raises(Exception):
        eval_mtl(w, 3, parse_mtl("p"))
    with pytest.raises(TypeError):
        eval_mtl(w, 0, parse_tptl("x1.(x1 = 0)"))
    assert satisfies(w, parse_tptl("x1 = 0"))
