"""Word families and named formulas behind the separation results.

Each family turns a parameter set into two words, a formula that holds on the
first and fails on the second, and a game that Duplicator should win.
``run_claim`` checks all of it and reports each sub-claim separately.

Divergent tails such as ``s, s+r, s+2r, ...`` are lassos with a one-point loop
and ``delta = r``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .evaluate import eval_mtl, eval_tptl
from .formulas import And, Formula, FragmentSpec, Prop, X
from .games.core import GameError, Player
from .games.mtl import MtlGameConfig, MtlGamePosition, solve_mg, verify_duplicator_strategy
from .games.tptl import TptlGameConfig, solve_tg
from .parser import parse_mtl, parse_tptl
from .words import ArithLassoWord, ConstantSet, Word


class FamilyError(ValueError):
    """Parameters violate a family's side condition."""


@dataclass(frozen=True)
class FamilyParams:
    r: int = 2
    s: Optional[int] = None
    k: int = 1
    constants: Optional[ConstantSet] = None
    extra: tuple = ()  # (key, value) pairs, e.g. (("n", 2), ("suffix", "arith"))

    def get(self, key, default=None):
        return dict(self.extra).get(key, default)


@dataclass(frozen=True)
class Claim:
    """What a family asserts.

    The formula holds on ``w0`` and fails on ``w1``; Duplicator wins the named
    game with ``rounds`` rounds; and, when ``spoiler_rounds`` is set, Spoiler
    wins with that many rounds.
    """

    logic: str  # "mtl" or "tptl": which game
    rounds: int
    constants: ConstantSet
    registers: int = 1
    fragment: FragmentSpec = field(default_factory=FragmentSpec)
    horizon: int = 12
    spoiler_rounds: Optional[int] = None
    formula_logic: str = "tptl"
    finite_game: bool = False  # play on the words cut at the horizon, with w1 = w0[1] kept exact


@dataclass(frozen=True)
class Family:
    name: str
    w0: Word
    w1: Word
    formula: Optional[Formula]
    claim: Claim
    params: FamilyParams


def _check_constants(C: ConstantSet, r: int):
    bad = [c for c in C if not -r < c < r]
    if bad:
        raise FamilyError(f"all constants must lie in (-r, r) = ({-r}, {r}); offending: {bad}")


def _default_constants(r: int) -> ConstantSet:
    return ConstantSet(c for c in (-1, 0, 1) if -r < c < r)


def phi_until(k: int) -> Formula:
    """``p & X p`` for k = 1 and ``p & X phi[k-1]`` above."""
    f = And(Prop("p"), X(Prop("p")))
    for _ in range(k - 1):
        f = And(Prop("p"), X(f))
    return f


# family builders


def _prop42_xfff(p: FamilyParams) -> Family:
    r = p.r
    s = 2 * r if p.s is None else p.s
    C = _default_constants(r) if p.constants is None else p.constants
    _check_constants(C, r)
    if s < 2 * r:
        raise FamilyError(f"need s >= 2r, got s={s}, r={r}")
    w0 = ArithLassoWord([((), s), ((), s - 2 * r), ((), s - r)], [((), s)], r)
    w1 = ArithLassoWord([((), s), ((), s - r)], [((), s)], r)
    return Family("prop4.2-xfff", w0, w1, parse_tptl("x1.F F F (x1 = 0)"),
                  Claim("mtl", p.k, C, horizon=12), p)


def _prop42_until(p: FamilyParams) -> Family:
    r = p.r if p.r is not None else 3
    s = 3 * r if p.s is None else p.s
    C = _default_constants(r) if p.constants is None else p.constants
    _check_constants(C, r)
    if s < 3 * r:
        raise FamilyError(f"need s >= 3r, got s={s}, r={r}")
    if r <= 2:
        raise FamilyError(f"need r > 2 so that the constraint x1 <= 2 separates the words, got r={r}")
    w0 = ArithLassoWord(
        [((), s), ("c", s - 3 * r), ("b", s - 2 * r), ("c", s - r)],
        [("b", s + r), ("c", s + 2 * r)], 2 * r, props="bc",
    )
    w1 = ArithLassoWord(
        [((), s), ("c", s - 2 * r), ("b", s - r)],
        [("c", s + r), ("b", s + 2 * r)], 2 * r, props="bc",
    )
    return Family("prop4.2-until", w0, w1, parse_tptl("x1.F (b & F (c & x1 <= 2))"),
                  Claim("mtl", p.k, C, horizon=12), p)


def _lemma43(p: FamilyParams) -> Family:
    r, k = p.r, p.k
    s = 0 if p.s is None else p.s
    C = _default_constants(r) if p.constants is None else p.constants
    _check_constants(C, r)
    bound = s + (k + 2) * r
    run = [("p", s + j * r) for j in range(k + 2)]
    kind = p.get("suffix", "arith")
    if kind == "arith":
        prefix, loop, delta = run, [((), bound)], r
    elif kind == "const":
        prefix, loop, delta = run, [("q", bound + 3), ((), bound + 1)], 0
    elif kind == "random":
        rng = random.Random(p.get("seed", 0))
        tail = [(frozenset(x for x in "pq" if rng.random() < 0.5), bound + rng.randint(0, 3 * r)) for _ in range(6)]
        prefix, loop, delta = run + tail, [("q", bound + rng.randint(0, r))], rng.randint(0, r)
    else:
        raise FamilyError(f"unknown suffix kind {kind!r}; use arith, const or random")
    if min(d for _, d in prefix[k + 2:] + loop) < bound:
        raise FamilyError(f"suffix data must be at least s+(k+2)r = {bound}")
    w0 = ArithLassoWord(prefix, loop, delta, props="pq")
    w1 = ArithLassoWord(prefix[1:], loop, delta, props="pq")
    horizon = k + 2 + 10
    return Family("lemma4.3", w0, w1, None, Claim("mtl", k, C, horizon=horizon, finite_game=True), p)


def _prop48(p: FamilyParams) -> Family:
    r, k = p.r, p.k
    C = _default_constants(r) if p.constants is None else p.constants
    _check_constants(C, r)
    w0 = ArithLassoWord([("p", j * r) for j in range(k + 2)], [("q", (k + 2) * r)], r, props="pq")
    w1 = ArithLassoWord([("p", j * r) for j in range(1, k + 2)], [("q", (k + 2) * r)], r, props="pq")
    return Family("prop4.8-until", w0, w1, phi_until(k + 1),
                  Claim("mtl", k, C, horizon=k + 10, spoiler_rounds=k + 1, formula_logic="mtl"), p)


def _prop58(p: FamilyParams) -> Family:
    k = p.k
    C = ConstantSet([0]) if p.constants is None else p.constants
    w0 = ArithLassoWord([("p", 0)] * (k + 2), [("q", 0)], 0, props="pq")
    w1 = ArithLassoWord([("p", 0)] * (k + 1), [("q", 0)], 0, props="pq")
    n = p.get("n", 1)
    return Family("prop5.8-until-zero", w0, w1, phi_until(k + 1),
                  Claim("tptl", k, C, registers=n, horizon=k + 10, spoiler_rounds=k + 1), p)


def _prop510(p: FamilyParams) -> Family:
    r, k = p.r, p.k
    s = k * r if p.s is None else p.s
    C = _default_constants(r) if p.constants is None else p.constants
    _check_constants(C, r)
    if s - k * r < 0:
        raise FamilyError(f"need s - kr >= 0, got s={s}, k={k}, r={r}")
    head = [((), s), ((), s + 2 * r)] + [((), s - j * r) for j in range(k, 0, -1)]
    w0 = ArithLassoWord(head + [((), s + r)], [((), s + 3 * r)], r)
    w1 = ArithLassoWord(head, [((), s + 3 * r)], r)
    return Family("prop5.10", w0, w1, parse_tptl("x1.F ((x1 > 0) & x2.F ((x1 > 0) & x2 < 0))"),
                  Claim("tptl", k, C, registers=1, horizon=k + 12), p)


def _singleton_words(n: int, C2: ConstantSet):
    if n not in C2 and n + 1 not in C2:
        step = n + 1
    elif n - 1 not in C2 and n not in C2:
        step = n - 1
    else:
        raise FamilyError(f"the weaker constant set must miss n-1, n or n, n+1 (n={n}, set {C2})")
    s = abs(n) + 1
    w0 = ArithLassoWord([((), s)], [((), s + n)], 0)
    w1 = ArithLassoWord([((), s)], [((), s + step)], 0)
    return w0, w1


def _lemma45(p: FamilyParams) -> Family:
    n = p.get("n", 2)
    C2 = ConstantSet([0]) if p.constants is None else p.constants
    w0, w1 = _singleton_words(n, C2)
    return Family("lemma4.5", w0, w1, parse_mtl(f"F[{n},{n}] true"),
                  Claim("mtl", p.k, C2, horizon=6, formula_logic="mtl"), p)


def _lemma57(p: FamilyParams) -> Family:
    n = p.get("n", 2)
    C2 = ConstantSet([0]) if p.constants is None else p.constants
    w0, w1 = _singleton_words(n, C2)
    return Family("lemma5.7", w0, w1, parse_tptl(f"x1.F (x1 = {n})"),
                  Claim("tptl", p.k, C2, registers=1, horizon=6), p)


FAMILIES: dict[str, tuple[Callable[[FamilyParams], Family], str]] = {
    "prop4.2-xfff": (_prop42_xfff, "x1.FFF(x1=0) is not MTL-definable; r, s >= 2r"),
    "prop4.2-until": (_prop42_until, "x1.F(b & F(c & x1<=2)) is not MTL-definable; r > 2, s >= 3r"),
    "lemma4.3": (_lemma43, "w0 vs w0[1] after k+2 evenly spaced points; suffix=arith|const|random"),
    "prop4.8-until": (_prop48, "strict until hierarchy for MTL with phi[k+1]"),
    "prop5.8-until-zero": (_prop58, "strict until hierarchy for TPTL on all-zero data"),
    "prop5.10": (_prop510, "two registers beat one; s - kr >= 0"),
    "lemma4.5": (_lemma45, "F[n,n] true needs the constant n (extra n)"),
    "lemma5.7": (_lemma57, "x1.F(x1=n) needs the constant n (extra n)"),
}

DEFAULT_R = {"prop4.2-until": 3}


def family_names() -> list[str]:
    return list(FAMILIES)


def family(name: str, params: Optional[FamilyParams] = None) -> Family:
    if name not in FAMILIES:
        raise FamilyError(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")
    if params is None:
        params = FamilyParams(r=DEFAULT_R.get(name, 2))
    return FAMILIES[name][0](params)


# strategies for the x1.FFF(x1=0) pair


class ShiftedRunStrategy:
    """Duplicator strategy for words where ``w1`` from position ``j`` equals ``w0`` from ``j + 1``.

    On pairs ``(j + 1, j)`` the two suffixes coincide and Duplicator copies
    Spoiler at the same offset.  On diagonal pairs ``(a, a)`` it follows the
    evenly-spaced-run argument: a step of one is answered by a step of one,
    ``w0: a+i`` by ``w1: a+i-1`` and ``w1: a+i`` by ``w0: a+i+1`` for ``i >= 2``.
    For the x1.FFF(x1=0) pair this is exactly the tabulated first round
    followed by the same rules in later rounds.
    """

    def respond(self, i0, i1, k, side, position):
        if i0 == i1 + 1:
            return position - 1 if side == 0 else position + 1
        if i0 != i1:
            return None
        a = i0
        i = position - a
        if i == 1:
            return a + 1
        return a + i - 1 if side == 0 else a + i + 1

    def respond_between(self, i0, i1, k, side, a, b, m):
        if i0 == i1 + 1:
            return m + 1 if side == 0 else m - 1
        if i0 != i1:
            return None
        base = i0
        j = m - base
        if side == 0:  # Spoiler's in-between pick is in w1
            return base + j + 1
        return base + 1 if j == 1 else base + j - 1


# running claims


@dataclass
class ClaimReport:
    family: str
    params: FamilyParams
    entries: list = field(default_factory=list)  # (label, passed, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.entries)

    def add(self, label: str, ok: bool, detail: str = ""):
        self.entries.append((label, bool(ok), detail))

    def render(self) -> str:
        lines = [f"family {self.family}"]
        for label, ok, detail in self.entries:
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else ""))
        lines.append("result: " + ("pass" if self.passed else "fail"))
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "passed": self.passed,
            "claims": [{"claim": l, "passed": ok, "detail": d} for l, ok, d in self.entries],
        }


def _eval(fam: Family, w: Word) -> bool:
    if fam.claim.formula_logic == "mtl":
        return eval_mtl(w, 0, fam.formula)
    return eval_tptl(w, 0, None, fam.formula)


def _game_words(fam: Family, horizon: int):
    if fam.claim.finite_game:
        f0 = fam.w0.materialize(horizon)
        return f0, f0.suffix(1), None
    return fam.w0, fam.w1, horizon


def game_winner(fam: Family, rounds: int, horizon: Optional[int] = None) -> Player:
    c = fam.claim
    h = horizon or c.horizon
    g0, g1, gh = _game_words(fam, h)
    if c.logic == "mtl":
        return solve_mg(MtlGameConfig(g0, g1, c.constants, rounds, gh)).winner
    cfg = TptlGameConfig(g0, g1, c.constants, c.registers, rounds, gh, c.fragment)
    return solve_tg(cfg).winner


def run_claim(name: str, params: Optional[FamilyParams] = None, horizon: Optional[int] = None) -> ClaimReport:
    try:
        fam = family(name, params)
    except FamilyError as exc:
        report = ClaimReport(name, params or FamilyParams())
        report.add("side conditions", False, str(exc))
        return report
    c = fam.claim
    h = horizon or c.horizon
    report = ClaimReport(name, fam.params)
    if fam.formula is not None:
        report.add(f"w0 satisfies {fam.formula}", _eval(fam, fam.w0))
        report.add(f"w1 violates {fam.formula}", not _eval(fam, fam.w1))
    game = "MG" if c.logic == "mtl" else f"TG(n={c.registers})"
    win = game_winner(fam, c.rounds, h)
    report.add(f"Duplicator wins {game}_{c.rounds} over {c.constants}", win is Player.DUPLICATOR,
               f"horizon {h}" if not c.finite_game else f"words cut at {h}")
    if c.spoiler_rounds is not None:
        win = game_winner(fam, c.spoiler_rounds, h)
        report.add(f"Spoiler wins {game}_{c.spoiler_rounds} over {c.constants}", win is Player.SPOILER,
                   f"horizon {h}")
    if name == "prop4.2-xfff":
        cfg = MtlGameConfig(fam.w0, fam.w1, c.constants, c.rounds, h)
        try:
            ok = verify_duplicator_strategy(cfg, MtlGamePosition(), ShiftedRunStrategy())
            report.add("tabulated Duplicator strategy survives every Spoiler line", ok, f"horizon {h}")
        except GameError as exc:
            report.add("tabulated Duplicator strategy survives every Spoiler line", False, str(exc))
    return report
