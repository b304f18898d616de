import random

import pytest

from oracles import naive_tg
from tempo_ef.corpus import FamilyParams, family, phi_until
from tempo_ef.enumerate import EnumBudget, find_distinguisher
from tempo_ef.evaluate import eval_tptl
from tempo_ef.formulas import FragmentSpec, fragment_check, registers_of, until_rank
from tempo_ef.games import GameError, Player, TptlGameConfig, TptlGamePosition, atomic_agree, extract_formula_tptl, solve_tg
from tempo_ef.games.mtl import MtlGameConfig, winner as mg_winner
from tempo_ef.games.tptl import TptlSolver, winner
from tempo_ef.parser import parse_tptl
from tempo_ef.selfcheck import random_word
from tempo_ef.words import ConstantSet, FiniteDataWord

C138 = ConstantSet([1, 3, 8])


def random_case(rng, n=None, k=None):
    w0 = random_word(rng, ("p",), 4, 3)
    w1 = random_word(rng, ("p",), 4, 3)
    C = ConstantSet(rng.sample(range(-2, 3), rng.randint(0, 2)))
    n = rng.randint(1, 2) if n is None else n
    k = rng.randint(0, 2) if k is None else k
    nu0 = tuple(rng.randint(0, 3) for _ in range(n))
    nu1 = tuple(rng.randint(0, 3) for _ in range(n))
    return w0, w1, C, n, k, TptlGamePosition(0, 0, nu0, nu1)


def test_atomic_agree_examples():
    w = FiniteDataWord([("p", 0), ("p", 4)])
    assert atomic_agree(w, 1, (0,), w, 1, (0,), 1, C138)
    v = FiniteDataWord([("p", 0), ("p", 5)])
    assert atomic_agree(w, 1, (0,), v, 1, (0,), 1, C138)
    u = FiniteDataWord([("p", 0), ("p", 2)])
    assert not atomic_agree(w, 0, (0,), u, 1, (0,), 1, ConstantSet(), FragmentSpec(equality_only=True))


def test_solver_matches_naive_game():
    rng = random.Random(31)
    seen = set()
    for _ in range(250):
        w0, w1, C, n, k, pos = random_case(rng)
        expected = naive_tg(w0, w1, C.values, n, k, 0, 0, pos.nu0, pos.nu1)
        assert str(winner(TptlGameConfig(w0, w1, C, n, k), pos)) == expected
        eq = FragmentSpec.parse("eq", n)
        expected_eq = naive_tg(w0, w1, C.values, n, k, 0, 0, pos.nu0, pos.nu1, equality=True)
        assert str(winner(TptlGameConfig(w0, w1, C, n, k, fragment=eq), pos)) == expected_eq
        seen.add(expected)
    assert seen == {"Spoiler", "Duplicator"}


def test_canonical_keys_agree_with_raw_valuations():
    rng = random.Random(32)
    for _ in range(200):
        w0, w1, C, n, k, pos = random_case(rng, k=rng.randint(1, 3))
        for frag in ("", "eq", "unary"):
            cfg = TptlGameConfig(w0, w1, C, n, k, fragment=FragmentSpec.parse(frag, n))
            assert TptlSolver(cfg, canonical=True).spoiler_wins(pos) == TptlSolver(cfg, canonical=False).spoiler_wins(pos)


@pytest.mark.parametrize("frag", ["", "eq", "unary", "eq+unary"])
def test_extracted_formulas_live_in_the_fragment(frag):
    rng = random.Random(33)
    for _ in range(120):
        w0, w1, C, n, k, pos = random_case(rng)
        spec = FragmentSpec.parse(frag, n)
        cfg = TptlGameConfig(w0, w1, C, n, k, fragment=spec)
        if winner(cfg, pos) is not Player.SPOILER:
            continue
        phi = extract_formula_tptl(cfg, pos)
        names = {f"x{j + 1}": v for j, v in enumerate(pos.nu0)}
        other = {f"x{j + 1}": v for j, v in enumerate(pos.nu1)}
        assert eval_tptl(w0, 0, names, phi) != eval_tptl(w1, 0, other, phi)
        assert until_rank(phi) <= k
        assert registers_of(phi) <= set(names)
        assert fragment_check(phi, spec)


@pytest.mark.parametrize("frag", ["unary", "eq+unary"])
def test_unary_duplicator_wins_have_no_small_distinguisher(frag):
    rng = random.Random(34)
    checked = 0
    for _ in range(80):
        w0, w1, C, _, k, _ = random_case(rng, n=1, k=rng.randint(1, 2))
        spec = FragmentSpec.parse(frag, 1)
        if winner(TptlGameConfig(w0, w1, C, 1, k, fragment=spec)) is Player.DUPLICATOR:
            budget = EnumBudget(k, C, 6, ("p",), registers=1, fragment=spec)
            assert find_distinguisher(w0, 0, w1, 0, budget) is None
            checked += 1
    assert checked > 0


def test_register_monotonicity_and_cross_logic():
    rng = random.Random(35)
    for _ in range(150):
        w0, w1, C, _, k, _ = random_case(rng, n=2)
        two = winner(TptlGameConfig(w0, w1, C, 2, k))
        one = winner(TptlGameConfig(w0, w1, C, 1, k))
        if two is Player.DUPLICATOR:
            assert one is Player.DUPLICATOR
        if one is Player.DUPLICATOR:
            assert mg_winner(MtlGameConfig(w0, w1, C, k)) is Player.DUPLICATOR


def test_shift_with_valuations():
    rng = random.Random(36)
    for _ in range(60):
        w = random_word(rng, ("p",), 4, 4)
        nu = (rng.randint(0, 4), rng.randint(0, 4))
        C = ConstantSet(rng.sample(range(-3, 4), 2))
        for c in (1, 5):
            pos = TptlGamePosition(0, 0, nu, tuple(v + c for v in nu))
            assert winner(TptlGameConfig(w, w.shifted(c), C, 2, 2), pos) is Player.DUPLICATOR


def test_symmetry():
    rng = random.Random(37)
    for _ in range(100):
        w0, w1, C, n, k, pos = random_case(rng)
        a = winner(TptlGameConfig(w0, w1, C, n, k), pos)
        b = winner(TptlGameConfig(w1, w0, C, n, k), TptlGamePosition(0, 0, pos.nu1, pos.nu0))
        assert a == b


def test_zero_data_hierarchy_and_register_separation():
    fam = family("prop5.8-until-zero", FamilyParams(r=2, k=1))
    h = fam.claim.horizon
    C = ConstantSet([0])
    assert solve_tg(TptlGameConfig(fam.w0, fam.w1, C, 1, 1, h)).winner is Player.DUPLICATOR
    cfg = TptlGameConfig(fam.w0, fam.w1, C, 1, 2, h)
    assert solve_tg(cfg).winner is Player.SPOILER
    phi = extract_formula_tptl(cfg)
    assert eval_tptl(fam.w0, 0, None, phi) != eval_tptl(fam.w1, 0, None, phi)
    assert eval_tptl(fam.w0, 0, None, phi_until(2)) and not eval_tptl(fam.w1, 0, None, phi_until(2))

    fam = family("prop5.10", FamilyParams(r=2, k=1))
    psi = parse_tptl("x1.F(x1>0 & x2.F(x1>0 & x2<0))")
    assert eval_tptl(fam.w0, 0, None, psi) and not eval_tptl(fam.w1, 0, None, psi)
    cfg = TptlGameConfig(fam.w0, fam.w1, fam.claim.constants, 1, 1, fam.claim.horizon)
    assert solve_tg(cfg).winner is Player.DUPLICATOR
    two = TptlGameConfig(fam.w0, fam.w1, fam.claim.constants, 2, 2, fam.claim.horizon)
    assert solve_tg(two).winner is Player.SPOILER


def test_next_move_in_unary_game():
    # X distinguishes a one-point word from a longer one
    w0 = FiniteDataWord([("p", 0)], {"p"})
    w1 = FiniteDataWord([("p", 0), ("", 0)], {"p"})
    cfg = TptlGameConfig(w0, w1, ConstantSet(), 1, 1, fragment=FragmentSpec.parse("unary", 1))
    assert solve_tg(cfg).winner is Player.SPOILER
    phi = extract_formula_tptl(cfg)
    assert eval_tptl(w0, 0, None, phi) != eval_tptl(w1, 0, None, phi)


def test_errors():
    w = FiniteDataWord([("p", 0)])
    with pytest.raises(GameError):
        TptlGameConfig(w, w, ConstantSet(), 0, 1)
    with pytest.raises(GameError):
        solve_tg(TptlGameConfig(w, w, ConstantSet(), 2, 1), TptlGamePosition(0, 0, (0,), (0,)))
    with pytest.raises(GameError):
        extract_formula_tptl(TptlGameConfig(w, w, ConstantSet(), 1, 1))
