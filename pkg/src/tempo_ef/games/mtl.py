"""The k-round MTL game with respect to a finite constant set.

Lasso words are cut at the configured horizon and the game is solved exactly
on the resulting finite words.  ``verify_duplicator_strategy`` is more lenient
about lassos: Spoiler is still limited to the horizon but Duplicator's answers
are checked against the infinite word, which is what hand-written strategies
like ``reply with i + 1`` need.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Protocol

import numpy as np

from ..formulas import FALSE, TRUE, Formula, Not, Prop, Until, conj, disj, neg
from ..words import ArithLassoWord, ConstantSet, FiniteDataWord, Word, as_finite
from .core import (
    GameError,
    MissingBranch,
    Move,
    Player,
    StrategyNode,
    StrategyTree,
    next_ok,
    round_table,
)


@dataclass(frozen=True)
class MtlGameConfig:
    word0: Word
    word1: Word
    constants: ConstantSet
    rounds: int
    horizon: Optional[int] = None

    def __post_init__(self):
        if self.rounds < 0:
            raise GameError("rounds must be non-negative")
        if self.horizon is not None and self.horizon < 1:
            raise GameError("horizon must be at least 1")
        for w in (self.word0, self.word1):
            if isinstance(w, ArithLassoWord) and self.horizon is None:
                raise GameError("lasso words need a horizon")


@dataclass(frozen=True)
class MtlGamePosition:
    i0: int = 0
    i1: int = 0

    def __str__(self):
        return f"({self.i0},{self.i1})"


def region_ids(constants: ConstantSet, diffs: np.ndarray) -> np.ndarray:
    c = np.asarray(constants.values, dtype=np.int64)
    p = np.searchsorted(c, diffs, side="left")
    hit = np.zeros(diffs.shape, dtype=bool)
    inside = p < len(c)
    hit[inside] = c[p[inside]] == diffs[inside]
    return 2 * p + hit


def label_codes(w0: FiniteDataWord, w1: FiniteDataWord) -> tuple[np.ndarray, np.ndarray]:
    table: dict = {}
    code = lambda lab: table.setdefault(lab, len(table))
    return (
        np.array([code(p.labels) for p in w0.points], dtype=np.int64),
        np.array([code(p.labels) for p in w1.points], dtype=np.int64),
    )


def prop_literal(labels_true: frozenset, labels_false: frozenset) -> Formula:
    """A literal true under the first label set and false under the second."""
    pos = sorted(labels_true - labels_false)
    if pos:
        return Prop(pos[0])
    return Not(Prop(sorted(labels_false - labels_true)[0]))


class MtlSolver:
    """Bottom-up solver: ``lost[k][i0, i1]`` is True when Spoiler wins k rounds from (i0, i1)."""

    def __init__(self, cfg: MtlGameConfig):
        self.cfg = cfg
        self.f0 = as_finite(cfg.word0, cfg.horizon)
        self.f1 = as_finite(cfg.word1, cfg.horizon)
        if cfg.horizon is not None:
            self.f0 = self.f0 if len(self.f0) <= cfg.horizon else FiniteDataWord(self.f0.points[: cfg.horizon], self.f0.props)
            self.f1 = self.f1 if len(self.f1) <= cfg.horizon else FiniteDataWord(self.f1.points[: cfg.horizon], self.f1.props)
        self.n0, self.n1 = len(self.f0), len(self.f1)
        self.d0 = np.array(self.f0.data, dtype=np.int64)
        self.d1 = np.array(self.f1.data, dtype=np.int64)
        c0, c1 = label_codes(self.f0, self.f1)
        self.agree = c0[:, None] == c1[None, :]
        self.reg0 = region_ids(cfg.constants, self.d0[None, :] - self.d0[:, None])
        self.reg1 = region_ids(cfg.constants, self.d1[None, :] - self.d1[:, None])
        self.lost = [~self.agree]
        self._tables: dict = {}
        for k in range(1, cfg.rounds + 1):
            self.lost.append(self._level(k))

    def _valid(self, i0: int, i1: int) -> np.ndarray:
        return self.agree & (self.reg0[i0][:, None] == self.reg1[i1][None, :])

    def _nxt(self, k: int):
        key = ("nxt", k)
        if key not in self._tables:
            ok = self.agree & ~self.lost[k - 1]
            self._tables[key] = (next_ok(ok), next_ok(ok.T))
        return self._tables[key]

    def table(self, i0: int, i1: int, k: int):
        key = (i0, i1, k)
        if key not in self._tables:
            nxt0, nxt1 = self._nxt(k)
            self._tables[key] = round_table(i0, i1, self._valid(i0, i1), self.lost[k - 1], nxt0, nxt1)
        return self._tables[key]

    def _level(self, k: int) -> np.ndarray:
        out = ~self.agree.copy()
        nxt0, nxt1 = self._nxt(k)
        prev = self.lost[k - 1]
        for i0 in range(self.n0):
            for i1 in range(self.n1):
                if out[i0, i1]:
                    continue
                t = round_table(i0, i1, self._valid(i0, i1), prev, nxt0, nxt1)
                out[i0, i1] = t.spoiler_wins()
        return out

    def spoiler_wins(self, i0: int, i1: int, k: int) -> bool:
        self._check(i0, i1)
        return bool(self.lost[k][i0, i1])

    def _check(self, i0, i1):
        if not (0 <= i0 < self.n0 and 0 <= i1 < self.n1):
            raise GameError(f"position ({i0},{i1}) outside the words (lengths {self.n0}, {self.n1})")

    def label(self, side: int, i: int) -> frozenset:
        return (self.f0 if side == 0 else self.f1).points[i].labels

    def data(self, side: int, i: int) -> int:
        return int((self.d0 if side == 0 else self.d1)[i])

    # Spoiler's choices, in tie-break order: nearest pick first, word 0 before word 1

    def spoiler_move(self, i0: int, i1: int, k: int) -> Move:
        t = self.table(i0, i1, k)
        best = None
        for l in (0, 1):
            picks = t.losing_picks(l)
            if picks:
                own = i0 if l == 0 else i1
                cand = (picks[0] - own, l, picks[0])
                best = cand if best is None or cand < best else best
        if best is None:
            raise GameError("Spoiler has no winning move here")
        return Move(best[1], best[2])

    def between_move(self, i0: int, i1: int, k: int, l: int, a: int, b: int) -> Optional[int]:
        """Spoiler's in-between pick refuting Duplicator's answer ``b`` to ``a``, if any."""
        own, other = (i0, i1) if l == 0 else (i1, i0)
        nxt0, nxt1 = self._nxt(k)
        nxt = nxt0 if l == 0 else nxt1
        for m in range(other + 1, b):
            if nxt[own, m] >= a:
                return m
        return None

    def between_reply(self, i0: int, i1: int, k: int, l: int, a: int, m: int) -> Optional[int]:
        own = i0 if l == 0 else i1
        nxt0, nxt1 = self._nxt(k)
        h = int((nxt0 if l == 0 else nxt1)[own, m])
        return h if h < a else None

    def pair(self, l: int, a: int, b: int) -> tuple[int, int]:
        """Order a (word l, other word) pair as (w0 position, w1 position)."""
        return (a, b) if l == 0 else (b, a)


@lru_cache(maxsize=64)
def _solver(cfg: MtlGameConfig) -> MtlSolver:
    return MtlSolver(cfg)


def get_solver(cfg: MtlGameConfig, rounds: Optional[int] = None) -> MtlSolver:
    return _solver(cfg)


# strategy trees


def _spoiler_node(s: MtlSolver, i0: int, i1: int, k: int) -> StrategyNode:
    state = f"({i0},{i1}) k={k}"
    if not s.agree[i0, i1]:
        return StrategyNode(Player.SPOILER, state, note="propositions differ")
    move = s.spoiler_move(i0, i1, k)
    l, a = move.side, move.position
    own, other = (i0, i1) if l == 0 else (i1, i0)
    n_other = s.n1 if l == 0 else s.n0

    def expand():
        out = {}
        for b in range(other + 1, n_other):
            p0, p1 = s.pair(l, a, b)
            label = f"w{1 - l}:{b}"
            if not s._valid(i0, i1)[p0, p1]:
                why = "propositions differ" if not s.agree[p0, p1] else "region differs"
                out[label] = StrategyNode(Player.SPOILER, f"({p0},{p1})", note=why)
            elif s.lost[k - 1][p0, p1]:
                out[label] = _spoiler_node(s, p0, p1, k - 1)
            else:
                m = s.between_move(i0, i1, k, l, a, b)
                out[label] = _between_node(s, i0, i1, k, l, a, b, m)
        return out

    return StrategyNode(Player.SPOILER, state, move, _expand=expand)


def _between_node(s: MtlSolver, i0, i1, k, l, a, b, m) -> StrategyNode:
    own = i0 if l == 0 else i1
    state = f"{s.pair(l, a, b)} k={k}"

    def expand():
        out = {}
        for h in range(own + 1, a):
            p0, p1 = s.pair(l, h, m)
            if not s.agree[p0, p1]:
                out[f"w{l}:{h}"] = StrategyNode(Player.SPOILER, f"({p0},{p1})", note="propositions differ")
            else:
                out[f"w{l}:{h}"] = _spoiler_node(s, p0, p1, k - 1)
        return out

    return StrategyNode(Player.SPOILER, state, Move(1 - l, m, "between"), _expand=expand)


def _duplicator_node(s: MtlSolver, i0: int, i1: int, k: int) -> StrategyNode:
    state = f"({i0},{i1}) k={k}"
    if k == 0:
        return StrategyNode(Player.DUPLICATOR, state, note="no rounds left")

    def expand():
        t = s.table(i0, i1, k)
        out = {}
        for l in (0, 1):
            own, other = (i0, i1) if l == 0 else (i1, i0)
            n_own = s.n0 if l == 0 else s.n1
            for a in range(own + 1, n_own):
                b = t.replies(l, a)[0]
                p0, p1 = s.pair(l, a, b)
                node = StrategyNode(
                    Player.DUPLICATOR, f"({p0},{p1})", Move(1 - l, b, "reply"),
                    _expand=_dup_followups(s, i0, i1, k, l, a, b),
                )
                out[f"w{l}:{a}"] = node
        return out

    return StrategyNode(Player.DUPLICATOR, state, _expand=expand)


def _dup_followups(s: MtlSolver, i0, i1, k, l, a, b):
    def expand():
        other = i1 if l == 0 else i0
        p0, p1 = s.pair(l, a, b)
        out = {"continue": _duplicator_node(s, p0, p1, k - 1)}
        for m in range(other + 1, b):
            h = s.between_reply(i0, i1, k, l, a, m)
            q0, q1 = s.pair(l, h, m)
            out[f"between w{1 - l}:{m}"] = StrategyNode(
                Player.DUPLICATOR, f"({q0},{q1})", Move(l, h, "reply"),
                _expand=lambda q0=q0, q1=q1: {"continue": _duplicator_node(s, q0, q1, k - 1)},
            )
        return out

    return expand


def solve_mg(cfg: MtlGameConfig, pos: Optional[MtlGamePosition] = None) -> StrategyTree:
    pos = pos or MtlGamePosition()
    s = get_solver(cfg)
    s._check(pos.i0, pos.i1)
    k = cfg.rounds
    horizon = (s.n0, s.n1) if cfg.horizon is not None else None
    if s.lost[k][pos.i0, pos.i1]:
        return StrategyTree(Player.SPOILER, _spoiler_node(s, pos.i0, pos.i1, k), horizon, s)
    return StrategyTree(Player.DUPLICATOR, _duplicator_node(s, pos.i0, pos.i1, k), horizon, s)


def winner(cfg: MtlGameConfig, pos: Optional[MtlGamePosition] = None) -> Player:
    pos = pos or MtlGamePosition()
    s = get_solver(cfg)
    return Player.SPOILER if s.spoiler_wins(pos.i0, pos.i1, cfg.rounds) else Player.DUPLICATOR


# strategy verification


class DuplicatorStrategy(Protocol):
    def respond(self, i0: int, i1: int, k: int, side: int, position: int) -> Optional[int]:
        """Answer Spoiler's pick ``position`` in word ``side`` from (i0, i1) with k rounds left."""

    def respond_between(
        self, i0: int, i1: int, k: int, side: int, a: int, b: int, m: int
    ) -> Optional[int]:
        """Answer Spoiler's in-between pick ``m`` in word ``1 - side``; return a position in word ``side``."""


class IdentityStrategy:
    """Mirror every move at the same offset from the current positions."""

    def respond(self, i0, i1, k, side, position):
        own, other = (i0, i1) if side == 0 else (i1, i0)
        return other + (position - own)

    def respond_between(self, i0, i1, k, side, a, b, m):
        own, other = (i0, i1) if side == 0 else (i1, i0)
        return own + (m - other)


class SolvedStrategy:
    """Duplicator strategy read off the solver's tables."""

    def __init__(self, solver: MtlSolver):
        self.s = solver

    def respond(self, i0, i1, k, side, position):
        if max(i0, position if side == 0 else 0) >= self.s.n0 or max(i1, position if side == 1 else 0) >= self.s.n1:
            return None
        r = self.s.table(i0, i1, k).replies(side, position)
        return r[0] if r else None

    def respond_between(self, i0, i1, k, side, a, b, m):
        return self.s.between_reply(i0, i1, k, side, a, m)


class _Word:
    """Position access for verification: finite words end, lassos do not."""

    def __init__(self, w: Word, horizon: Optional[int]):
        self.w = w
        self.finite = isinstance(w, FiniteDataWord)
        self.spoiler_limit = len(w) if self.finite else horizon
        if self.finite and horizon is not None:
            self.spoiler_limit = min(len(w), horizon)

    def exists(self, j: int) -> bool:
        return j >= 0 and (not self.finite or j < len(self.w))

    def labels(self, j):
        return self.w.point_at(j).labels

    def data(self, j):
        return self.w.point_at(j).data


def refute_duplicator_strategy(
    cfg: MtlGameConfig, pos: MtlGamePosition, strategy: DuplicatorStrategy
) -> Optional[list[str]]:
    """A Spoiler line beating ``strategy``, or None if every line within the horizon fails.

    Raises MissingBranch when the strategy has no answer for a legal move.
    """
    w = (_Word(cfg.word0, cfg.horizon), _Word(cfg.word1, cfg.horizon))
    C = cfg.constants
    memo: dict = {}

    def run(i0: int, i1: int, k: int) -> Optional[list[str]]:
        key = (i0, i1, k)
        if key in memo:
            return memo[key]
        memo[key] = None
        res = play(i0, i1, k)
        memo[key] = res
        return res

    def play(i0, i1, k):
        if w[0].labels(i0) != w[1].labels(i1):
            return [f"({i0},{i1}): propositions differ"]
        if k == 0:
            return None
        cur = (i0, i1)
        for l in (0, 1):
            own, other = cur[l], cur[1 - l]
            for a in range(own + 1, w[l].spoiler_limit or 0):
                mv = f"w{l}:{a} from ({i0},{i1}) k={k}"
                b = strategy.respond(i0, i1, k, l, a)
                if b is None:
                    raise MissingBranch(mv)
                if b <= other or not w[1 - l].exists(b):
                    return [mv, f"illegal reply w{1 - l}:{b}"]
                if w[l].labels(a) != w[1 - l].labels(b):
                    return [mv, f"reply w{1 - l}:{b} disagrees in propositions"]
                da = w[l].data(a) - w[l].data(own)
                db = w[1 - l].data(b) - w[1 - l].data(other)
                if C.region(da) != C.region(db):
                    return [mv, f"reply w{1 - l}:{b}: differences {da} and {db} in different regions"]
                p = (a, b) if l == 0 else (b, a)
                sub = run(p[0], p[1], k - 1)
                if sub is not None:
                    return [mv, f"reply w{1 - l}:{b}", *sub]
                limit = b if w[1 - l].spoiler_limit is None else min(b, w[1 - l].spoiler_limit)
                for m in range(other + 1, limit):
                    bmv = f"between w{1 - l}:{m}"
                    h = strategy.respond_between(i0, i1, k, l, a, b, m)
                    if h is None:
                        raise MissingBranch(f"{mv}, reply w{1 - l}:{b}, {bmv}")
                    if not own < h < a:
                        return [mv, f"reply w{1 - l}:{b}", bmv, f"illegal answer w{l}:{h}"]
                    if w[l].labels(h) != w[1 - l].labels(m):
                        return [mv, f"reply w{1 - l}:{b}", bmv, f"answer w{l}:{h} disagrees in propositions"]
                    q = (h, m) if l == 0 else (m, h)
                    sub = run(q[0], q[1], k - 1)
                    if sub is not None:
                        return [mv, f"reply w{1 - l}:{b}", bmv, f"answer w{l}:{h}", *sub]
        return None

    return run(pos.i0, pos.i1, cfg.rounds)


def verify_duplicator_strategy(
    cfg: MtlGameConfig, pos: MtlGamePosition, strategy
) -> bool:
    if isinstance(strategy, StrategyTree):
        if strategy.winner is not Player.DUPLICATOR:
            raise GameError("strategy tree does not claim a Duplicator win")
        strategy = SolvedStrategy(strategy.solver)
    return refute_duplicator_strategy(cfg, pos, strategy) is None


# distinguishing formulas


class _Extractor:
    def __init__(self, s: MtlSolver):
        self.s = s
        self.memo: dict = {}

    def dist(self, i0: int, i1: int, k: int) -> Formula:
        """Formula of rank <= k true at (w0, i0) and false at (w1, i1)."""
        key = (i0, i1, k)
        if key not in self.memo:
            self.memo[key] = self._dist(i0, i1, k)
        return self.memo[key]

    def oriented(self, l: int, a: int, b: int, k: int) -> Formula:
        """True at position a of word l, false at position b of the other word."""
        return self.dist(a, b, k) if l == 0 else neg(self.dist(b, a, k))

    def _dist(self, i0, i1, k):
        s = self.s
        if not s.agree[i0, i1]:
            return prop_literal(s.label(0, i0), s.label(1, i1))
        move = s.spoiler_move(i0, i1, k)
        l, a = move.side, move.position
        own, other = (i0, i1) if l == 0 else (i1, i0)
        n_other = s.n1 if l == 0 else s.n0
        da = s.data(l, a) - s.data(l, own)
        region = s.cfg.constants.region(da)
        valid = s._valid(i0, i1)
        target, guard = [], []
        for b in range(other + 1, n_other):
            db = s.data(1 - l, b) - s.data(1 - l, other)
            if s.cfg.constants.region(db) != region:
                continue
            p0, p1 = s.pair(l, a, b)
            if not s.agree[p0, p1]:
                target.append(prop_literal(s.label(l, a), s.label(1 - l, b)))
            elif s.lost[k - 1][p0, p1]:
                target.append(self.oriented(l, a, b, k - 1))
            else:
                m = s.between_move(i0, i1, k, l, a, b)
                parts = []
                for h in range(own + 1, a):
                    q0, q1 = s.pair(l, h, m)
                    if not s.agree[q0, q1]:
                        parts.append(prop_literal(s.label(l, h), s.label(1 - l, m)))
                    else:
                        parts.append(self.oriented(l, h, m, k - 1))
                guard.append(disj(parts))
            assert valid[p0, p1] or not s.agree[p0, p1]
        left, right = conj(guard), conj(target)
        unary = "F" if left == TRUE else "X" if left == FALSE else None
        f = Until(left, right, s.cfg.constants.region_interval(region), unary)
        return f if l == 0 else neg(f)


def extract_formula(cfg: MtlGameConfig, pos: Optional[MtlGamePosition] = None) -> Formula:
    """A formula of rank at most ``cfg.rounds`` over ``cfg.constants`` separating the two positions.

    The formula holds at ``(word0, i0)`` and fails at ``(word1, i1)``.  For lasso
    words it separates the words as cut at the horizon.
    """
    pos = pos or MtlGamePosition()
    s = get_solver(cfg)
    if not s.spoiler_wins(pos.i0, pos.i1, cfg.rounds):
        raise GameError("Duplicator wins this game; no distinguishing formula exists")
    return _Extractor(s).dist(pos.i0, pos.i1, cfg.rounds)
