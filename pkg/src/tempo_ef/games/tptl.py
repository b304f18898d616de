"""The k-round TPTL game with n registers, plus its fragment variants.

A round starts with Spoiler freezing a set ``Y`` of registers in both words,
then continues like the MTL game, except that every check is atomic agreement
under the updated valuations: same propositions and, per register, the same
region for ``d - nu(x)``.

Two fragment variants are supported.  In the equality variant the register
check only asks whether ``d - nu(x)`` is zero on both sides or on neither.  The
unary variant has no in-between move, and it adds a *next* move that sends
both players to the immediate successors.

Valuations are tuples indexed by register (``x1`` first).  The solver keys its
tables on the region signature of each register value rather than the value
itself.  Two values with the same signature against every position of a word
are interchangeable, because the game only looks at registers through atomic
checks and a frozen register is overwritten, never compared to the old value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Optional

import numpy as np

from ..formulas import (
    EQ_ZERO,
    FALSE,
    TRUE,
    Constraint,
    FragmentSpec,
    Formula,
    Freeze,
    Not,
    Until,
    conj,
    disj,
    neg,
)
from ..words import ArithLassoWord, ConstantSet, FiniteDataWord, Word, as_finite
from .core import GameError, Move, Player, StrategyNode, StrategyTree, next_ok, round_table
from .mtl import label_codes, prop_literal, region_ids

Valuation = tuple


def register_names(n: int) -> list[str]:
    return [f"x{j + 1}" for j in range(n)]


def _normalize(nu, n: int, default: int) -> tuple[int, ...]:
    if nu is None:
        return (default,) * n
    if isinstance(nu, Mapping):
        try:
            return tuple(int(nu[x]) for x in register_names(n))
        except KeyError as exc:
            raise GameError(f"valuation has no value for register {exc.args[0]}") from None
    vals = tuple(int(v) for v in nu)
    if len(vals) != n:
        raise GameError(f"valuation needs {n} values, got {len(vals)}")
    return vals


@dataclass(frozen=True)
class TptlGameConfig:
    word0: Word
    word1: Word
    constants: ConstantSet
    registers: int = 1
    rounds: int = 1
    horizon: Optional[int] = None
    fragment: FragmentSpec = field(default_factory=FragmentSpec)

    def __post_init__(self):
        if self.registers < 1:
            raise GameError("the game needs at least one register")
        if self.rounds < 0:
            raise GameError("rounds must be non-negative")
        if self.horizon is not None and self.horizon < 1:
            raise GameError("horizon must be at least 1")
        for w in (self.word0, self.word1):
            if isinstance(w, ArithLassoWord) and self.horizon is None:
                raise GameError("lasso words need a horizon")


@dataclass(frozen=True)
class TptlGamePosition:
    """Start positions and valuations; ``None`` valuations mean every register holds the first data value."""

    i0: int = 0
    i1: int = 0
    nu0: Optional[tuple] = None
    nu1: Optional[tuple] = None

    def __post_init__(self):
        for name in ("nu0", "nu1"):
            v = getattr(self, name)
            if isinstance(v, Mapping):
                object.__setattr__(self, name, tuple(v[x] for x in sorted(v, key=lambda s: int(s[1:]))))
            elif v is not None:
                object.__setattr__(self, name, tuple(v))


def atomic_agree(
    w0: Word,
    i0: int,
    nu0,
    w1: Word,
    i1: int,
    nu1,
    n: int,
    constants: ConstantSet,
    fragment: FragmentSpec = FragmentSpec(),
) -> bool:
    """Whether the two configurations satisfy the same atomic formulas of the n-register logic."""
    p0, p1 = w0.point_at(i0), w1.point_at(i1)
    if p0.labels != p1.labels:
        return False
    v0 = _normalize(nu0, n, w0.point_at(0).data)
    v1 = _normalize(nu1, n, w1.point_at(0).data)
    for a, b in zip(v0, v1):
        m0, m1 = p0.data - a, p1.data - b
        if fragment.equality_only:
            if (m0 == 0) != (m1 == 0):
                return False
        elif constants.region(m0) != constants.region(m1):
            return False
    return True


class TptlSolver:
    """Lazily built tables ``lost(nu0, nu1, k)[i0, i1]``: Spoiler wins k rounds from there."""

    def __init__(self, cfg: TptlGameConfig, canonical: bool = True):
        self.cfg = cfg
        self.n = cfg.registers
        self.eq = cfg.fragment.equality_only
        self.unary = cfg.fragment.unary_only
        self.canonical = canonical
        f0, f1 = as_finite(cfg.word0, cfg.horizon), as_finite(cfg.word1, cfg.horizon)
        if cfg.horizon is not None:
            f0 = FiniteDataWord(f0.points[: cfg.horizon], f0.props)
            f1 = FiniteDataWord(f1.points[: cfg.horizon], f1.props)
        self.f0, self.f1 = f0, f1
        self.n0, self.n1 = len(f0), len(f1)
        self.d = (np.array(f0.data, dtype=np.int64), np.array(f1.data, dtype=np.int64))
        c0, c1 = label_codes(f0, f1)
        self.agree = c0[:, None] == c1[None, :]
        self.subsets = [c for size in range(self.n + 1) for c in combinations(range(self.n), size)]
        self._sig: dict = {}
        self._sig_ids: list[dict] = [{}, {}]
        self._atomic: dict = {}
        self._lost: dict = {}
        self._nxt: dict = {}
        self._tables: dict = {}

    # register abstraction

    def _regions(self, side: int, v: int) -> np.ndarray:
        diff = self.d[side] - v
        if self.eq:
            return (diff == 0).astype(np.int64)
        return region_ids(self.cfg.constants, diff)

    def sig(self, side: int, v: int) -> int:
        key = (side, v)
        if key not in self._sig:
            r = self._regions(side, v)
            ids = self._sig_ids[side]
            self._sig[key] = ids.setdefault(r.tobytes(), len(ids)) if self.canonical else v
        return self._sig[key]

    def key(self, nu0: tuple, nu1: tuple) -> tuple:
        return tuple(self.sig(0, a) for a in nu0), tuple(self.sig(1, b) for b in nu1)

    def atomic(self, nu0: tuple, nu1: tuple) -> np.ndarray:
        key = self.key(nu0, nu1)
        if key not in self._atomic:
            m = self.agree.copy()
            for a, b in zip(nu0, nu1):
                m &= self._regions(0, a)[:, None] == self._regions(1, b)[None, :]
            self._atomic[key] = m
        return self._atomic[key]

    def update(self, nu: tuple, ys: tuple, value: int) -> tuple:
        return tuple(value if j in ys else v for j, v in enumerate(nu))

    def frozen(self, i0, i1, nu0, nu1, ys) -> tuple[tuple, tuple]:
        return self.update(nu0, ys, int(self.d[0][i0])), self.update(nu1, ys, int(self.d[1][i1]))

    # game values

    def lost(self, nu0: tuple, nu1: tuple, k: int) -> np.ndarray:
        key = (self.key(nu0, nu1), k)
        hit = self._lost.get(key)
        if hit is not None:
            return hit
        out = ~self.atomic(nu0, nu1)
        if k > 0:
            for i0 in range(self.n0):
                for i1 in range(self.n1):
                    if not out[i0, i1]:
                        out[i0, i1] = self.winning_move(i0, i1, nu0, nu1, k) is not None
        self._lost[key] = out
        return out

    def nxt(self, nu0, nu1, k):
        key = (self.key(nu0, nu1), k)
        if key not in self._nxt:
            ok = ~self.lost(nu0, nu1, k - 1)
            self._nxt[key] = (next_ok(ok), next_ok(ok.T))
        return self._nxt[key]

    def table(self, i0, i1, nu0, nu1, k):
        """Round table after the freeze, i.e. ``nu0``/``nu1`` are the updated valuations."""
        key = (i0, i1, self.key(nu0, nu1), k)
        if key not in self._tables:
            valid = self.atomic(nu0, nu1)
            prev = self.lost(nu0, nu1, k - 1)
            nxt0, nxt1 = (None, None) if self.unary else self.nxt(nu0, nu1, k)
            self._tables[key] = round_table(i0, i1, valid, prev, nxt0, nxt1)
        return self._tables[key]

    def next_move_wins(self, i0, i1, nu0, nu1, k) -> Optional[int]:
        """For the unary variant: the side whose successor move wins, if any."""
        has0, has1 = i0 + 1 < self.n0, i1 + 1 < self.n1
        if has0 != has1:
            return 0 if has0 else 1
        if has0 and self.lost(nu0, nu1, k - 1)[i0 + 1, i1 + 1]:
            return 0
        return None

    def winning_move(self, i0, i1, nu0, nu1, k) -> Optional[Move]:
        """Spoiler's preferred winning first move, or None if Duplicator survives the round."""
        for ys in self.subsets:
            m0, m1 = self.frozen(i0, i1, nu0, nu1, ys)
            t = self.table(i0, i1, m0, m1, k)
            best = None
            for l in (0, 1):
                picks = t.losing_picks(l)
                if picks:
                    own = i0 if l == 0 else i1
                    cand = (picks[0] - own, l, picks[0])
                    best = cand if best is None or cand < best else best
            names = tuple(register_names(self.n)[j] for j in ys)
            if best is not None:
                return Move(best[1], best[2], "forward", names)
            if self.unary:
                l = self.next_move_wins(i0, i1, m0, m1, k)
                if l is not None:
                    return Move(l, (i0, i1)[l] + 1, "next", names)
        return None

    def spoiler_wins(self, pos: TptlGamePosition, k: Optional[int] = None) -> bool:
        i0, i1, nu0, nu1 = self.start(pos)
        return bool(self.lost(nu0, nu1, self.cfg.rounds if k is None else k)[i0, i1])

    def start(self, pos: TptlGamePosition):
        if not (0 <= pos.i0 < self.n0 and 0 <= pos.i1 < self.n1):
            raise GameError(f"position ({pos.i0},{pos.i1}) outside the words (lengths {self.n0}, {self.n1})")
        nu0 = _normalize(pos.nu0, self.n, int(self.d[0][0]))
        nu1 = _normalize(pos.nu1, self.n, int(self.d[1][0]))
        return pos.i0, pos.i1, nu0, nu1

    def between_move(self, i0, i1, nu0, nu1, k, l, a, b) -> Optional[int]:
        own, other = (i0, i1) if l == 0 else (i1, i0)
        nxt = self.nxt(nu0, nu1, k)[l]
        for m in range(other + 1, b):
            if nxt[own, m] >= a:
                return m
        return None

    def between_reply(self, i0, i1, nu0, nu1, k, l, a, m) -> Optional[int]:
        own = i0 if l == 0 else i1
        h = int(self.nxt(nu0, nu1, k)[l][own, m])
        return h if h < a else None

    # literals

    def literal(self, l: int, a: int, b: int, nu_l: tuple, nu_o: tuple) -> Formula:
        """An atomic formula true at position a of word l and false at b of the other word."""
        wl, wo = (self.f0, self.f1) if l == 0 else (self.f1, self.f0)
        if wl.points[a].labels != wo.points[b].labels:
            return prop_literal(wl.points[a].labels, wo.points[b].labels)
        C = self.cfg.constants
        for x, va, vb in zip(register_names(self.n), nu_l, nu_o):
            ma, mb = wl.points[a].data - va, wo.points[b].data - vb
            if self.eq:
                if (ma == 0) != (mb == 0):
                    c = Constraint(x, EQ_ZERO)
                    return c if ma == 0 else Not(c)
            elif C.region(ma) != C.region(mb):
                return Constraint(x, C.region_interval(C.region(ma)))
        raise GameError("configurations agree on all atomic formulas")


@lru_cache(maxsize=64)
def get_solver(cfg: TptlGameConfig) -> TptlSolver:
    return TptlSolver(cfg)


def _pair(l, a, b):
    return (a, b) if l == 0 else (b, a)


# strategy trees


def _state(i0, i1, nu0, nu1, k):
    return f"({i0},{i1}) nu0={list(nu0)} nu1={list(nu1)} k={k}"


def _spoiler_node(s: TptlSolver, i0, i1, nu0, nu1, k) -> StrategyNode:
    state = _state(i0, i1, nu0, nu1, k)
    if not s.atomic(nu0, nu1)[i0, i1]:
        return StrategyNode(Player.SPOILER, state, note="atomic formulas differ")
    move = s.winning_move(i0, i1, nu0, nu1, k)
    ys = tuple(int(x[1:]) - 1 for x in move.freeze)
    m0, m1 = s.frozen(i0, i1, nu0, nu1, ys)
    l, a = move.side, move.position

    def expand():
        out = {}
        if move.kind == "next":
            if i0 + 1 < s.n0 and i1 + 1 < s.n1:
                out["forced"] = _spoiler_node(s, i0 + 1, i1 + 1, m0, m1, k - 1)
            return out
        other = i1 if l == 0 else i0
        n_other = s.n1 if l == 0 else s.n0
        valid = s.atomic(m0, m1)
        lost = s.lost(m0, m1, k - 1)
        for b in range(other + 1, n_other):
            p0, p1 = _pair(l, a, b)
            if not valid[p0, p1]:
                out[f"w{1 - l}:{b}"] = StrategyNode(Player.SPOILER, f"({p0},{p1})", note="atomic formulas differ")
            elif lost[p0, p1]:
                out[f"w{1 - l}:{b}"] = _spoiler_node(s, p0, p1, m0, m1, k - 1)
            else:
                m = s.between_move(i0, i1, m0, m1, k, l, a, b)
                out[f"w{1 - l}:{b}"] = StrategyNode(
                    Player.SPOILER, f"({p0},{p1})", Move(1 - l, m, "between"),
                    _expand=_between_children(s, i0, i1, m0, m1, k, l, a, m),
                )
        return out

    return StrategyNode(Player.SPOILER, state, move, _expand=expand)


def _between_children(s, i0, i1, m0, m1, k, l, a, m):
    def expand():
        own = i0 if l == 0 else i1
        out = {}
        for h in range(own + 1, a):
            q0, q1 = _pair(l, h, m)
            out[f"w{l}:{h}"] = _spoiler_node(s, q0, q1, m0, m1, k - 1)
        return out

    return expand


def _duplicator_node(s: TptlSolver, i0, i1, nu0, nu1, k) -> StrategyNode:
    state = _state(i0, i1, nu0, nu1, k)
    if k == 0:
        return StrategyNode(Player.DUPLICATOR, state, note="no rounds left")

    def expand():
        out = {}
        for ys in s.subsets:
            m0, m1 = s.frozen(i0, i1, nu0, nu1, ys)
            t = s.table(i0, i1, m0, m1, k)
            y = "{" + ",".join(register_names(s.n)[j] for j in ys) + "}"
            for l in (0, 1):
                own = i0 if l == 0 else i1
                n_own = s.n0 if l == 0 else s.n1
                for a in range(own + 1, n_own):
                    b = t.replies(l, a)[0]
                    p0, p1 = _pair(l, a, b)
                    out[f"freeze {y} w{l}:{a}"] = StrategyNode(
                        Player.DUPLICATOR, f"({p0},{p1})", Move(1 - l, b, "reply"),
                        _expand=_dup_followups(s, i0, i1, m0, m1, k, l, a, b),
                    )
            if s.unary and i0 + 1 < s.n0 and i1 + 1 < s.n1:
                out[f"freeze {y} next"] = _duplicator_node(s, i0 + 1, i1 + 1, m0, m1, k - 1)
        return out

    return StrategyNode(Player.DUPLICATOR, state, _expand=expand)


def _dup_followups(s, i0, i1, m0, m1, k, l, a, b):
    def expand():
        p0, p1 = _pair(l, a, b)
        out = {"continue": _duplicator_node(s, p0, p1, m0, m1, k - 1)}
        if s.unary:
            return out
        other = i1 if l == 0 else i0
        for m in range(other + 1, b):
            h = s.between_reply(i0, i1, m0, m1, k, l, a, m)
            q0, q1 = _pair(l, h, m)
            out[f"between w{1 - l}:{m}"] = _duplicator_node(s, q0, q1, m0, m1, k - 1)
        return out

    return expand


def solve_tg(cfg: TptlGameConfig, pos: Optional[TptlGamePosition] = None) -> StrategyTree:
    s = get_solver(cfg)
    i0, i1, nu0, nu1 = s.start(pos or TptlGamePosition())
    k = cfg.rounds
    horizon = (s.n0, s.n1) if cfg.horizon is not None else None
    if s.lost(nu0, nu1, k)[i0, i1]:
        return StrategyTree(Player.SPOILER, _spoiler_node(s, i0, i1, nu0, nu1, k), horizon, s)
    return StrategyTree(Player.DUPLICATOR, _duplicator_node(s, i0, i1, nu0, nu1, k), horizon, s)


def winner(cfg: TptlGameConfig, pos: Optional[TptlGamePosition] = None) -> Player:
    return Player.SPOILER if get_solver(cfg).spoiler_wins(pos or TptlGamePosition()) else Player.DUPLICATOR


# distinguishing formulas


class _Extractor:
    def __init__(self, s: TptlSolver):
        self.s = s
        self.memo: dict = {}

    def dist(self, i0, i1, nu0, nu1, k) -> Formula:
        key = (i0, i1, nu0, nu1, k)
        if key not in self.memo:
            self.memo[key] = self._dist(i0, i1, nu0, nu1, k)
        return self.memo[key]

    def oriented(self, l, a, b, nu0, nu1, k) -> Formula:
        p0, p1 = _pair(l, a, b)
        f = self.dist(p0, p1, nu0, nu1, k)
        return f if l == 0 else neg(f)

    def _dist(self, i0, i1, nu0, nu1, k):
        s = self.s
        if not s.atomic(nu0, nu1)[i0, i1]:
            return s.literal(0, i0, i1, nu0, nu1)
        move = s.winning_move(i0, i1, nu0, nu1, k)
        ys = tuple(int(x[1:]) - 1 for x in move.freeze)
        m0, m1 = s.frozen(i0, i1, nu0, nu1, ys)
        l, a = move.side, move.position
        if move.kind == "next":
            if i0 + 1 < s.n0 and i1 + 1 < s.n1:
                body = Until(FALSE, self.dist(i0 + 1, i1 + 1, m0, m1, k - 1), unary="X")
            else:
                body = Until(FALSE, TRUE, unary="X")
                body = body if l == 0 else neg(body)
        else:
            own, other = (i0, i1) if l == 0 else (i1, i0)
            n_other = s.n1 if l == 0 else s.n0
            nu_l, nu_o = (m0, m1) if l == 0 else (m1, m0)
            valid, lost = s.atomic(m0, m1), s.lost(m0, m1, k - 1)
            target, guard = [], []
            for b in range(other + 1, n_other):
                p0, p1 = _pair(l, a, b)
                if not valid[p0, p1]:
                    target.append(s.literal(l, a, b, nu_l, nu_o))
                elif lost[p0, p1]:
                    target.append(self.oriented(l, a, b, m0, m1, k - 1))
                else:
                    m = s.between_move(i0, i1, m0, m1, k, l, a, b)
                    parts = [self.oriented(l, h, m, m0, m1, k - 1) for h in range(own + 1, a)]
                    guard.append(disj(parts))
            left, right = conj(guard), conj(target)
            unary = "F" if left == TRUE else "X" if left == FALSE else None
            body = Until(left, right, unary=unary)
            body = body if l == 0 else neg(body)
        for x in reversed(move.freeze):
            body = Freeze(x, body)
        return body


def extract_formula_tptl(cfg: TptlGameConfig, pos: Optional[TptlGamePosition] = None) -> Formula:
    """A formula with rank at most ``cfg.rounds`` and registers x1..xn separating the two configurations.

    The formula holds at ``(word0, i0, nu0)`` and fails at ``(word1, i1, nu1)``.
    """
    s = get_solver(cfg)
    i0, i1, nu0, nu1 = s.start(pos or TptlGamePosition())
    if not s.lost(nu0, nu1, cfg.rounds)[i0, i1]:
        raise GameError("Duplicator wins this game; no distinguishing formula exists")
    return _Extractor(s).dist(i0, i1, nu0, nu1, cfg.rounds)
