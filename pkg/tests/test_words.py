import itertools

import pytest
from hypothesis import given, strategies as st

from oracles import naive_region
from tempo_ef.words import (
    INF,
    ArithLassoWord,
    ConstantSet,
    DataPoint,
    FiniteDataWord,
    Interval,
    WordError,
    as_finite,
    load_word,
    same_region,
    save_word,
    word_from_json,
    word_to_json,
)


def test_worked_region_example():
    C = ConstantSet([1, 3, 8])
    assert not same_region(1, 2, C)
    assert same_region(4, 5, C)
    assert same_region(-7, 0, C)
    assert not same_region(8, 9, C)


@given(st.lists(st.integers(-10, 10), max_size=4), st.integers(-12, 12), st.integers(-12, 12))
def test_region_matches_naive(cs, m, n):
    C = ConstantSet(cs)
    assert same_region(m, n, C) == (naive_region(m, cs) == naive_region(n, cs))


@given(st.lists(st.integers(-6, 6), max_size=3), st.integers(-8, 8))
def test_region_interval_contains_value(cs, m):
    C = ConstantSet(cs)
    assert C.region_interval(C.region(m)).contains(m)


def test_region_intervals_skip_integer_free_gaps():
    C = ConstantSet([0, 1, 3])
    ivs = C.region_intervals()
    assert Interval(0, 1) not in ivs
    assert Interval(1, 3) in ivs
    assert len(ivs) == 6


def test_constant_set_parse_ignores_infinities():
    assert ConstantSet.parse("{-inf, -1, 0, 1, +inf}") == ConstantSet([-1, 0, 1])
    assert ConstantSet.parse("") == ConstantSet()


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(2, 1)
    with pytest.raises(ValueError):
        Interval(1, 1, True, False)
    with pytest.raises(ValueError):
        Interval(-INF, 0, True, False)
    assert Interval.point(3).contains(3) and not Interval.point(3).contains(4)


def test_finite_word_labels_and_access():
    w = FiniteDataWord([("p", 0), (("p", "q"), 5), ("", 2)])
    assert w.props == {"p", "q"}
    assert w.data == [0, 5, 2]
    assert w.point_at(1) == DataPoint(frozenset({"p", "q"}), 5)
    with pytest.raises(WordError):
        w.point_at(3)
    with pytest.raises(WordError):
        FiniteDataWord([])
    with pytest.raises(WordError):
        FiniteDataWord([("r", 0)], props={"p"})


def test_shift_and_suffix():
    w = FiniteDataWord([("p", 0), ("", 3)])
    assert w.shifted(2).data == [2, 5]
    assert w.suffix(1).data == [3]


def test_arith_lasso_positions():
    w = ArithLassoWord([("a", 0)], [("b", 1), ("c", 2)], delta=3)
    assert [w.point_at(j).data for j in range(7)] == [0, 1, 2, 4, 5, 7, 8]
    assert w.state_of(5) == (1, 2)
    assert w.materialize(3) == FiniteDataWord([("a", 0), ("b", 1), ("c", 2)], w.props)
    with pytest.raises(WordError):
        ArithLassoWord([], [])
    with pytest.raises(WordError):
        as_finite(w, None)


@pytest.mark.parametrize(
    "w",
    [
        FiniteDataWord([("p", 0), ("", 4)], props={"p", "q"}),
        ArithLassoWord([("a", 1)], [("b", 2)], 1),
    ],
)
def test_json_round_trip(w, tmp_path):
    assert word_from_json(word_to_json(w)) == w
    save_word(w, tmp_path / "w.json")
    assert load_word(tmp_path / "w.json") == w


def test_coarsening_small_exhaustive():
    values = range(-4, 5)
    for cs in itertools.chain.from_iterable(itertools.combinations(values, r) for r in range(3)):
        C = ConstantSet(cs)
        ends = [-INF, *cs, INF]
        for a, b in itertools.combinations_with_replacement(ends, 2):
            for lc, hc in itertools.product((False, True), repeat=2):
                try:
                    iv = Interval(a, b, lc and a != -INF, hc and b != INF)
                except ValueError:
                    continue
                for m, n in itertools.product(values, repeat=2):
                    if same_region(m, n, C):
                        assert iv.contains(m) == iv.contains(n)
