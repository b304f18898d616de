"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines live; they are
also collected into an "acceptance criteria" section at the end of every run.  Instance sets are drawn
from ``random.Random(SEED)`` (``TEMPO_EF_SEED``, default 0).
"""

from __future__ import annotations

import itertools
import random
import time

import numpy as np
import pytest

from tempo_ef import (
    ConstantSet,
    FamilyParams,
    MtlGameConfig,
    Player,
    TptlGameConfig,
    eval_mtl,
    eval_tptl,
    extract_formula,
    family,
    find_distinguisher,
    mtl_to_tptl1,
    parse_tptl,
    same_region,
    solve_mg,
    solve_tg,
    until_rank,
)
from tempo_ef.corpus import game_winner, phi_until
from tempo_ef.enumerate import EnumBudget
from tempo_ef.evaluate import lasso_horizon
from tempo_ef.games.tptl import TptlGamePosition
from tempo_ef.selfcheck import (
    check_region_oracle,
    random_lasso,
    random_mtl,
    random_tptl,
    random_word,
    random_pair_instances,
)

from conftest import ACCEPTANCE_LINES, SEED

RESULTS: dict[int, bool] = {}


class Outcome:
    """Collects failures for one criterion and reports them in a single line."""

    def __init__(self, number: int, title: str, limit: float | None = None):
        self.number, self.title, self.limit = number, title, limit
        self.cases = 0
        self.failures: list[str] = []
        self.start = time.perf_counter()

    def check(self, ok: bool, what: str):
        self.cases += 1
        if not ok:
            self.failures.append(what)

    def finish(self):
        elapsed = time.perf_counter() - self.start
        slow = self.limit is not None and elapsed >= self.limit
        ok = not self.failures and not slow
        RESULTS[self.number] = RESULTS.get(self.number, True) and ok
        note = f"{self.cases} checks, {len(self.failures)} failures, {elapsed:.2f}s"
        if self.limit is not None:
            note += f" (limit {self.limit:.0f}s)"
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {self.number}: {self.title}: {note}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert not self.failures, self.failures[:5]
        assert not slow, f"took {elapsed:.2f}s, limit {self.limit}s"


def mg(w0, w1, C, k, horizon=None):
    return solve_mg(MtlGameConfig(w0, w1, C, k, horizon)).winner


def tg(w0, w1, C, n, k, horizon=None, pos=None):
    return solve_tg(TptlGameConfig(w0, w1, C, n, k, horizon), pos).winner


C101 = ConstantSet([-1, 0, 1])


def test_criterion_01_region_oracle():
    out = Outcome(1, "region oracle, worked example and coarsening")
    example = ConstantSet([1, 3, 8])
    out.check(not same_region(1, 2, example), "1 and 2 must be split")
    out.check(same_region(4, 5, example), "4 and 5 must share a region")
    # exhaustive coarsening with the infinities counted in the set size
    res = check_region_oracle(max_constants=4, lo=-10, hi=10)
    out.cases += res.cases
    out.failures += res.failures
    # the same property for up to four finite constants: agreement on every
    # interval over the set is agreement of the comparison with each constant
    values = np.arange(-10, 11)
    for r in range(0, 5):
        for cs in itertools.combinations(range(-10, 11), r):
            C = ConstantSet(cs)
            same = np.array([[same_region(int(m), int(n), C) for n in values] for m in values])
            sig = np.sign(values[:, None] - np.array(cs, dtype=int)[None, :]) if cs else np.zeros((21, 0))
            agree = (sig[:, None, :] == sig[None, :, :]).all(axis=2)
            out.check(bool((same == agree).all()), f"constants {cs}")
    out.finish()


def test_criterion_02_xfff_pair():
    out = Outcome(2, "x1.FFF(x1=0) pair, r=2 s=4, k=1..3", limit=10)
    fam = family("prop4.2-xfff", FamilyParams(r=2, s=4, constants=C101))
    phi = parse_tptl("x1.FFF(x1=0)")
    out.check(eval_tptl(fam.w0, 0, None, phi), "w0 must satisfy the formula")
    out.check(not eval_tptl(fam.w1, 0, None, phi), "w1 must violate the formula")
    for k in (1, 2, 3):
        out.check(mg(fam.w0, fam.w1, C101, k, 12) is Player.DUPLICATOR, f"MG_{k}")
    out.finish()


def test_criterion_03_until_pair():
    out = Outcome(3, "x1.F(b & F(c & x1<=2)) pair, r=3 s=9, k=1,2", limit=10)
    fam = family("prop4.2-until", FamilyParams(r=3, s=9, constants=C101))
    phi = parse_tptl("x1.F(b & F(c & x1<=2))")
    out.check(eval_tptl(fam.w0, 0, None, phi), "w0 must satisfy the formula")
    out.check(not eval_tptl(fam.w1, 0, None, phi), "w1 must violate the formula")
    for k in (1, 2):
        out.check(mg(fam.w0, fam.w1, C101, k, 12) is Player.DUPLICATOR, f"MG_{k}")
    out.finish()


def test_criterion_04_game_formula_cross_check():
    out = Outcome(4, "200 pairs, extracted formulas separate, no size-7 distinguisher otherwise", limit=120)
    C = ConstantSet([0])
    tally = {Player.SPOILER: 0, Player.DUPLICATOR: 0}
    for w0, w1 in random_pair_instances(200, SEED):
        for k in (0, 1, 2):
            cfg = MtlGameConfig(w0, w1, C, k)
            win = solve_mg(cfg).winner
            tally[win] += 1
            if win is Player.SPOILER:
                phi = extract_formula(cfg)
                out.check(until_rank(phi) <= k and eval_mtl(w0, 0, phi) != eval_mtl(w1, 0, phi),
                          f"k={k} {w0} | {w1}: {phi}")
            else:
                phi = find_distinguisher(w0, 0, w1, 0, EnumBudget(k, C, 7, ("p",)))
                out.check(phi is None, f"k={k} {w0} | {w1}: {phi} separates")
    print(f"    winners: Spoiler {tally[Player.SPOILER]}, Duplicator {tally[Player.DUPLICATOR]}")
    out.finish()


@pytest.mark.parametrize("logic", ["mtl", "tptl"])
def test_criterion_05_until_hierarchy(logic):
    out = Outcome(5, f"until hierarchy ({logic}), k=1,2", limit=30)
    for k in (1, 2):
        if logic == "mtl":
            fam = family("prop4.8-until", FamilyParams(r=2, k=k))
            holds = [eval_mtl(w, 0, phi_until(k + 1)) for w in (fam.w0, fam.w1)]
            win_k = mg(fam.w0, fam.w1, fam.claim.constants, k, fam.claim.horizon)
            win_k1 = mg(fam.w0, fam.w1, fam.claim.constants, k + 1, fam.claim.horizon)
        else:
            fam = family("prop5.8-until-zero", FamilyParams(r=2, k=k))
            out.check(all(p.data == 0 for p in fam.w0.materialize(20).points), "data must be all zero")
            holds = [eval_tptl(w, 0, None, phi_until(k + 1)) for w in (fam.w0, fam.w1)]
            win_k = tg(fam.w0, fam.w1, fam.claim.constants, 1, k, fam.claim.horizon)
            win_k1 = tg(fam.w0, fam.w1, fam.claim.constants, 1, k + 1, fam.claim.horizon)
        out.check(holds == [True, False], f"k={k}: phi[k+1] gives {holds}")
        out.check(win_k is Player.DUPLICATOR, f"k={k}: Duplicator must win with k rounds")
        out.check(win_k1 is Player.SPOILER, f"k={k}: Spoiler must win with k+1 rounds")
    out.finish()


def test_criterion_06_two_registers_beat_one():
    out = Outcome(6, "one register cannot express the two-register formula, k=1,2", limit=30)
    phi = parse_tptl("x1.F(x1>0 & x2.F(x1>0 & x2<0))")
    for k in (1, 2):
        fam = family("prop5.10", FamilyParams(r=2, k=k, constants=C101))
        out.check(eval_tptl(fam.w0, 0, None, phi), f"k={k}: w0 must satisfy")
        out.check(not eval_tptl(fam.w1, 0, None, phi), f"k={k}: w1 must violate")
        out.check(tg(fam.w0, fam.w1, C101, 1, k, fam.claim.horizon) is Player.DUPLICATOR, f"TG_{k}")
    out.finish()


def test_criterion_07_shift_invariance():
    out = Outcome(7, "100 words against shifted copies, k<=3, both logics")
    rng = random.Random(SEED)
    for _ in range(100):
        w = random_word(rng)
        C = ConstantSet(rng.sample(range(-3, 4), rng.randint(0, 3)))
        nu = tuple(rng.randint(0, 4) for _ in range(2))
        for c in (1, 5):
            ws = w.shifted(c)
            for k in range(4):
                out.check(mg(w, ws, C, k) is Player.DUPLICATOR, f"MG_{k} {w} +{c} over {C}")
                pos = TptlGamePosition(0, 0, nu, tuple(v + c for v in nu))
                out.check(tg(w, ws, C, 2, k, pos=pos) is Player.DUPLICATOR, f"TG_{k} {w} +{c} from {nu}")
    out.finish()


def test_criterion_08_translation():
    out = Outcome(8, "100 (word, formula) pairs, MTL against its TPTL translation")
    rng = random.Random(SEED)
    for _ in range(100):
        w = random_word(rng, ("p", "q"), max_len=6, max_data=6)
        C = rng.sample(range(-3, 4), rng.randint(0, 3))
        phi = random_mtl(rng, rng.randint(0, 2), ("p", "q"), C)
        psi = mtl_to_tptl1(phi)
        for i in range(len(w)):
            out.check(eval_mtl(w, i, phi) == eval_tptl(w, i, None, psi), f"{phi} at {i} of {w}")
    out.finish()


def test_criterion_09_lasso_horizon():
    out = Outcome(9, "50 lassos, evaluation at H equals evaluation at 2H")
    rng = random.Random(SEED)
    for idx in range(50):
        w = random_lasso(rng)
        C = rng.sample(range(-3, 4), rng.randint(0, 3))
        if idx % 2 == 0:
            phi = random_mtl(rng, 2, ("p",), C)
            run = lambda h: eval_mtl(w, 0, phi, h)  # noqa: E731
        else:
            phi = random_tptl(rng, 2, ("p",), C)
            run = lambda h: eval_tptl(w, 0, None, phi, h)  # noqa: E731
        H = lasso_horizon(w, phi)
        at_h, at_2h, exact = run(H), run(2 * H), run(None)
        out.check(at_h == at_2h, f"{phi} on {w}: H={H} gives {at_h}, 2H gives {at_2h}")
        out.check(at_h == exact, f"{phi} on {w}: H={H} gives {at_h}, exact {exact}")
    out.finish()


def test_criterion_10_dropping_the_first_point():
    out = Outcome(10, "w0 against w0[1] for k<=3 and three suffix kinds")
    for k in range(4):
        for suffix in ("arith", "const", "random"):
            fam = family("lemma4.3", FamilyParams(r=2, k=k, extra=(("suffix", suffix), ("seed", SEED + k))))
            bound = (k + 2) * 2
            tail = fam.w0.materialize(fam.claim.horizon).points[k + 2:]
            out.check(all(p.data >= bound for p in tail), f"k={k} {suffix}: suffix below s+(k+2)r")
            out.check(game_winner(fam, k) is Player.DUPLICATOR, f"k={k} suffix {suffix}")
    out.finish()


def test_criterion_11_cross_logic():
    out = Outcome(11, "the criterion 4 pairs, no one-register Duplicator win beside an MTL Spoiler win")
    C = ConstantSet([0])
    for w0, w1 in random_pair_instances(200, SEED):
        for k in (0, 1, 2):
            both = tg(w0, w1, C, 1, k) is Player.DUPLICATOR and mg(w0, w1, C, k) is Player.SPOILER
            out.check(not both, f"k={k} {w0} | {w1}")
    out.finish()


def test_supplement_same_label_pairs():
    """Harder companion to criterion 4: both words share their label sequence, only data differ."""
    from tempo_ef import FiniteDataWord

    rng = random.Random(SEED + 1)
    C = ConstantSet([0])
    tally = {Player.SPOILER: 0, Player.DUPLICATOR: 0}
    failures = []
    for _ in range(150):
        w0 = random_word(rng, min_len=2)
        w1 = FiniteDataWord([(p.labels, rng.randint(0, 4)) for p in w0.points])
        for k in (1, 2):
            cfg = MtlGameConfig(w0, w1, C, k)
            win = solve_mg(cfg).winner
            tally[win] += 1
            if win is Player.SPOILER:
                phi = extract_formula(cfg)
                if eval_mtl(w0, 0, phi) == eval_mtl(w1, 0, phi):
                    failures.append((k, w0, w1, phi))
            elif find_distinguisher(w0, 0, w1, 0, EnumBudget(k, C, 7, ("p",))) is not None:
                failures.append((k, w0, w1))
    print(f"    supplementary winners: Spoiler {tally[Player.SPOILER]}, Duplicator {tally[Player.DUPLICATOR]}")
    assert tally[Player.DUPLICATOR] >= 30 and tally[Player.SPOILER] >= 30
    assert not failures, failures[:3]


def test_zz_summary():
    """Prints the overall tally; runs last by name."""
    print()
    for n in range(1, 12):
        state = {True: "PASS", False: "FAIL", None: "not run"}[RESULTS.get(n)]
        print(f"criterion {n:2d}: {state}")
    assert all(RESULTS.get(n) for n in range(1, 12))
