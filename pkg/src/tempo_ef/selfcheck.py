"""Seeded property checks shared by ``tempo-ef selfcheck`` and the acceptance tests.

Every check returns a :class:`CheckResult`.  Random instances come from
``random.Random(seed)`` so a failing run can be reproduced exactly by passing
the same seed (the CLI reads it from ``TEMPO_EF_SEED``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .corpus import FamilyParams, run_claim
from .enumerate import EnumBudget, default_seed, find_distinguisher
from .evaluate import eval_mtl, eval_tptl, lasso_horizon
from .formulas import (
    FALSE,
    TRUE,
    And,
    Constraint,
    Formula,
    Freeze,
    Not,
    Or,
    Prop,
    Until,
    mtl_to_tptl1,
    until_rank,
)
from .games.core import Player
from .games.mtl import MtlGameConfig, extract_formula, winner as mg_winner
from .games.tptl import TptlGameConfig, TptlGamePosition, winner as tg_winner
from .words import INF, ArithLassoWord, ConstantSet, FiniteDataWord, Interval, same_region


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, what: str):
        self.failures.append(what)

    def detail(self) -> str:
        if self.passed:
            return f"{self.cases} cases, 0 failures"
        return f"{self.cases} cases, {len(self.failures)} failures; first: {self.failures[0]}"


# random instances


def random_word(rng: random.Random, props: Sequence[str] = ("p",), max_len: int = 5,
                max_data: int = 4, min_len: int = 1) -> FiniteDataWord:
    n = rng.randint(min_len, max_len)
    return FiniteDataWord(
        [(frozenset(p for p in props if rng.random() < 0.5), rng.randint(0, max_data)) for _ in range(n)],
        props,
    )


def random_lasso(rng: random.Random, props: Sequence[str] = ("p",), max_data: int = 4) -> ArithLassoWord:
    pt = lambda: (frozenset(p for p in props if rng.random() < 0.5), rng.randint(0, max_data))
    prefix = [pt() for _ in range(rng.randint(0, 3))]
    loop = [pt() for _ in range(rng.randint(1, 3))]
    return ArithLassoWord(prefix, loop, rng.choice([0, 0, 1, 2]), props)


def random_interval(rng: random.Random, constants: Sequence[int]) -> Interval:
    """An interval whose finite endpoints come from ``constants``."""
    ends = [-INF, *sorted(constants), INF]
    while True:
        lo, hi = sorted(rng.choices(ends, k=2))
        try:
            return Interval(lo, hi, lo != -INF and rng.random() < 0.5, hi != INF and rng.random() < 0.5)
        except ValueError:
            continue


def random_mtl(rng: random.Random, rank: int, props: Sequence[str], constants: Sequence[int],
               depth: int = 3) -> Formula:
    """A random MTL formula of until rank at most ``rank``."""
    if depth <= 0:
        return rng.choice([TRUE, FALSE, *(Prop(p) for p in props)])
    choices = ["atom", "not", "and", "or"] + (["until"] * 3 if rank > 0 else [])
    kind = rng.choice(choices)
    sub = lambda r: random_mtl(rng, r, props, constants, depth - 1)
    if kind == "atom":
        return sub(0) if depth > 1 else rng.choice([TRUE, *(Prop(p) for p in props)])
    if kind == "not":
        return Not(sub(rank))
    if kind in ("and", "or"):
        return (And if kind == "and" else Or)(sub(rank), sub(rank))
    iv = random_interval(rng, constants)
    style = rng.choice(["U", "F", "X"])
    if style == "F":
        return Until(TRUE, sub(rank - 1), iv, "F")
    if style == "X":
        return Until(FALSE, sub(rank - 1), iv, "X")
    return Until(sub(rank - 1), sub(rank - 1), iv)


def random_tptl(rng: random.Random, rank: int, props: Sequence[str], constants: Sequence[int],
                registers: Sequence[str] = ("x1",), depth: int = 3) -> Formula:
    """A random TPTL formula over ``registers`` of until rank at most ``rank``."""
    sub = lambda r: random_tptl(rng, r, props, constants, registers, depth - 1)
    if depth <= 0:
        if rng.random() < 0.4:
            return Constraint(rng.choice(list(registers)), random_interval(rng, constants))
        return rng.choice([TRUE, *(Prop(p) for p in props)])
    kind = rng.choice(["atom", "not", "and", "or", "freeze"] + (["until"] * 3 if rank > 0 else []))
    if kind == "atom":
        return random_tptl(rng, rank, props, constants, registers, 0)
    if kind == "not":
        return Not(sub(rank))
    if kind in ("and", "or"):
        return (And if kind == "and" else Or)(sub(rank), sub(rank))
    if kind == "freeze":
        return Freeze(rng.choice(list(registers)), sub(rank))
    if rng.random() < 0.5:
        return Until(TRUE, sub(rank - 1), Interval(), "F")
    return Until(sub(rank - 1), sub(rank - 1), Interval())


# checks


def check_region_oracle(max_constants: int = 4, lo: int = -10, hi: int = 10) -> CheckResult:
    """The worked region example plus coarsening over all small constant sets.

    ``max_constants`` counts the two infinities, so 4 means up to two finite
    constants drawn from ``[lo, hi]``.
    """
    res = CheckResult("region oracle")
    example = ConstantSet([1, 3, 8])
    res.cases += 2
    if same_region(1, 2, example):
        res.fail("1 and 2 share a region of {-inf,1,3,8,+inf}")
    if not same_region(4, 5, example):
        res.fail("4 and 5 are split by {-inf,1,3,8,+inf}")
    values = range(lo, hi + 1)
    for r in range(0, max_constants - 1):
        for cs in itertools.combinations(values, r):
            C = ConstantSet(cs)
            ends = [-INF, *cs, INF]
            intervals = []
            for a, b in itertools.combinations_with_replacement(ends, 2):
                for lc, hc in itertools.product((False, True), repeat=2):
                    try:
                        intervals.append(Interval(a, b, lc and a != -INF, hc and b != INF))
                    except ValueError:
                        pass
            intervals = list(set(intervals))
            for m, n in itertools.product(values, repeat=2):
                if not same_region(m, n, C):
                    continue
                res.cases += 1
                for iv in intervals:
                    if iv.contains(m) != iv.contains(n):
                        res.fail(f"{m},{n} same region of {C} but {iv} separates them")
                        break
    return res


def random_pair_instances(count: int = 200, seed: Optional[int] = None):
    """The seeded random pair set used by the game/formula cross-checks."""
    rng = random.Random(default_seed() if seed is None else seed)
    return [(random_word(rng), random_word(rng)) for _ in range(count)]


def check_game_vs_formulas(count: int = 200, seed: Optional[int] = None, max_rank: int = 2,
                           constants: Iterable[int] = (0,), max_size: int = 7) -> CheckResult:
    """Spoiler wins imply the extracted formula separates; Duplicator wins imply no small distinguisher."""
    res = CheckResult("game solver vs formulas")
    C = ConstantSet(constants)
    for w0, w1 in random_pair_instances(count, seed):
        for k in range(max_rank + 1):
            res.cases += 1
            cfg = MtlGameConfig(w0, w1, C, k)
            if mg_winner(cfg) is Player.SPOILER:
                phi = extract_formula(cfg)
                if until_rank(phi) > k or eval_mtl(w0, 0, phi) == eval_mtl(w1, 0, phi):
                    res.fail(f"k={k} {w0} | {w1}: extracted {phi} does not separate")
            else:
                budget = EnumBudget(k, C, max_size, ("p",))
                phi = find_distinguisher(w0, 0, w1, 0, budget)
                if phi is not None:
                    res.fail(f"k={k} {w0} | {w1}: Duplicator wins but {phi} separates")
    return res


def check_cross_logic(count: int = 200, seed: Optional[int] = None, max_rank: int = 2,
                      constants: Iterable[int] = (0,)) -> CheckResult:
    """A one-register Duplicator win never coexists with an MTL Spoiler win."""
    res = CheckResult("cross-logic soundness")
    C = ConstantSet(constants)
    for w0, w1 in random_pair_instances(count, seed):
        for k in range(max_rank + 1):
            res.cases += 1
            tg = tg_winner(TptlGameConfig(w0, w1, C, 1, k))
            if tg is Player.DUPLICATOR and mg_winner(MtlGameConfig(w0, w1, C, k)) is Player.SPOILER:
                res.fail(f"k={k} {w0} | {w1}")
    return res


def check_shift_invariance(count: int = 100, seed: Optional[int] = None, shifts: Sequence[int] = (1, 5),
                           max_rank: int = 3, tptl: bool = True) -> CheckResult:
    """Duplicator wins on a word against its data-shifted copy, in both logics."""
    res = CheckResult("shift invariance")
    rng = random.Random(default_seed() if seed is None else seed)
    for _ in range(count):
        w = random_word(rng)
        C = ConstantSet(rng.sample(range(-3, 4), rng.randint(0, 3)))
        k = rng.randint(0, max_rank)
        for c in shifts:
            res.cases += 1
            if mg_winner(MtlGameConfig(w, w.shifted(c), C, k)) is not Player.DUPLICATOR:
                res.fail(f"MG_{k} {w} +{c} over {C}")
            if not tptl:
                continue
            res.cases += 1
            nu = tuple(rng.randint(0, 4) for _ in range(2))
            pos = TptlGamePosition(0, 0, nu, tuple(v + c for v in nu))
            kt = min(k, 2)
            if tg_winner(TptlGameConfig(w, w.shifted(c), C, 2, kt), pos) is not Player.DUPLICATOR:
                res.fail(f"TG_{kt} {w} +{c} over {C} from {nu}")
    return res


def check_translation(count: int = 100, seed: Optional[int] = None, max_rank: int = 2) -> CheckResult:
    """MTL evaluation agrees with evaluation of the one-register translation."""
    res = CheckResult("MTL to TPTL translation")
    rng = random.Random(default_seed() if seed is None else seed)
    for _ in range(count):
        w = random_word(rng, ("p", "q"), max_len=6, max_data=6)
        C = rng.sample(range(-3, 4), rng.randint(0, 3))
        phi = random_mtl(rng, rng.randint(0, max_rank), ("p", "q"), C)
        psi = mtl_to_tptl1(phi)
        for i in range(len(w)):
            res.cases += 1
            if eval_mtl(w, i, phi) != eval_tptl(w, i, None, psi):
                res.fail(f"{phi} at {i} of {w}")
    return res


def check_lasso_horizon(count: int = 50, seed: Optional[int] = None, max_const: int = 3) -> CheckResult:
    """Horizon-bounded evaluation on lassos is stable from the computed horizon on, and matches exact evaluation."""
    res = CheckResult("lasso horizon stability")
    rng = random.Random(default_seed() if seed is None else seed)
    for idx in range(count):
        w = random_lasso(rng)
        C = rng.sample(range(-max_const, max_const + 1), rng.randint(0, 3))
        if idx % 2 == 0:
            phi = random_mtl(rng, 2, ("p",), C)
            run = lambda h: eval_mtl(w, 0, phi, h)
        else:
            phi = random_tptl(rng, 2, ("p",), C)
            run = lambda h: eval_tptl(w, 0, None, phi, h)
        H = lasso_horizon(w, phi)
        res.cases += 1
        at_h, at_2h, exact = run(H), run(2 * H), run(None)
        if not at_h == at_2h == exact:
            res.fail(f"{phi} on {w}: H={H} gives {at_h}, 2H {at_2h}, exact {exact}")
    return res


def check_corpus(claims: Sequence[tuple[str, FamilyParams]]) -> CheckResult:
    res = CheckResult("corpus claims")
    for name, params in claims:
        res.cases += 1
        report = run_claim(name, params)
        if not report.passed:
            res.fail(f"{name} k={params.k}: {report.render()}")
    return res


def default_corpus_claims() -> list[tuple[str, FamilyParams]]:
    out = [("prop4.2-xfff", FamilyParams(r=2, s=4, k=k)) for k in (1, 2)]
    out += [("prop4.8-until", FamilyParams(r=2, k=k)) for k in (1, 2)]
    out += [("prop5.8-until-zero", FamilyParams(r=2, k=1))]
    out += [("lemma4.3", FamilyParams(r=2, k=2, extra=(("suffix", s),))) for s in ("arith", "const")]
    return out


def run_all(count: int = 20, seed: Optional[int] = None) -> list[tuple[str, bool, str]]:
    """A quick battery; ``count`` scales the random instance sets."""
    seed = default_seed() if seed is None else seed
    checks: list[Callable[[], CheckResult]] = [
        lambda: check_region_oracle(),
        lambda: check_game_vs_formulas(count, seed, max_size=5),
        lambda: check_cross_logic(count, seed),
        lambda: check_shift_invariance(count, seed, max_rank=2),
        lambda: check_translation(count, seed),
        lambda: check_lasso_horizon(count, seed),
        lambda: check_corpus(default_corpus_claims()),
    ]
    out = []
    for make in checks:
        r = make()
        out.append((r.name, r.passed, r.detail()))
    return out
