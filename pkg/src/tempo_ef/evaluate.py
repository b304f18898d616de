"""Satisfaction checking for MTL and TPTL on finite and arithmetic-lasso words.

Until is strict on both logics: ``a U b`` holds at ``i`` when some ``j > i``
satisfies ``b`` and every ``k`` with ``i < k < j`` satisfies ``a``.  For TPTL
the in-between positions are checked against the *left* operand, as in the
MTL clause.  On finite words the quantifiers range over existing positions
only, so ``X`` and ``F`` are false at the last position.

Lasso words are evaluated exactly.  Two observations keep the state space
finite: a loop position ``j`` and ``j + len(loop)`` see the same future up to
a data shift of ``delta``, and once a difference ``d_j - v`` exceeds every
constant by more than the data range of the word it can never come back.
Passing ``horizon`` instead bounds every Until scan to that many positions,
which is what the horizon-stability checks compare against.
"""

from __future__ import annotations

from typing import Mapping, Optional

from .formulas import (
    And,
    Constraint,
    FalseF,
    Formula,
    Freeze,
    Not,
    Or,
    Prop,
    TrueF,
    Until,
    constants_of,
    free_registers,
    registers_of,
    subformulas,
    until_rank,
)
from .words import ArithLassoWord, FiniteDataWord, Word, WordError

Valuation = Mapping[str, int]


class UnboundRegister(KeyError):
    pass


def _check_position(w: Word, i: int) -> None:
    if i < 0 or (isinstance(w, FiniteDataWord) and i >= len(w)):
        raise WordError(f"position {i} out of range")


def _settle_threshold(w: Word, constants_abs: int) -> int:
    """Differences above this value behave like +infinity for every later position."""
    if isinstance(w, FiniteDataWord):
        vals = w.data
        return constants_abs + max(vals) - min(vals) + 1
    return constants_abs + w.data_range() + 1


# MTL: one truth vector per subformula, indexed by position (finite) or lasso state


def _mtl_vectors(w: Word, phi: Formula, horizon: Optional[int]) -> dict[int, list[bool]]:
    if isinstance(w, FiniteDataWord):
        n = len(w)
        norm = lambda j: j
    else:
        n = w.stem
        norm = lambda j: w.state_of(j)[0]
    data = [w.point_at(j).data for j in range(n)]
    labels = [w.point_at(j).labels for j in range(n)]
    vec: dict[int, list[bool]] = {}
    for g in subformulas(phi):
        if id(g) in vec:
            continue
        if isinstance(g, TrueF):
            v = [True] * n
        elif isinstance(g, FalseF):
            v = [False] * n
        elif isinstance(g, Prop):
            v = [g.name in lab for lab in labels]
        elif isinstance(g, Not):
            v = [not b for b in vec[id(g.operand)]]
        elif isinstance(g, And):
            v = [a and b for a, b in zip(vec[id(g.left)], vec[id(g.right)])]
        elif isinstance(g, Or):
            v = [a or b for a, b in zip(vec[id(g.left)], vec[id(g.right)])]
        elif isinstance(g, Until):
            left, right = vec[id(g.left)], vec[id(g.right)]
            thr = _settle_threshold(w, max((abs(e) for e in g.interval.finite_endpoints()), default=0))
            v = []
            for s in range(n):
                base = data[s]
                seen = set()
                found = False
                j = s + 1
                while True:
                    if isinstance(w, FiniteDataWord):
                        if j >= n:
                            break
                        st, dj = j, data[j]
                    else:
                        if horizon is not None and j > s + horizon:
                            break
                        st = norm(j)
                        dj = w.point_at(j).data
                    diff = dj - base
                    if right[st] and g.interval.contains(diff):
                        found = True
                        break
                    if not left[st]:
                        break
                    if horizon is None and isinstance(w, ArithLassoWord):
                        key = (st, min(diff, thr))
                        if key in seen:
                            break
                        seen.add(key)
                    j += 1
                v.append(found)
        else:
            raise TypeError(f"not an MTL formula node: {g!r}")
        vec[id(g)] = v
    return vec


def eval_mtl(w: Word, i: int, phi: Formula, horizon: Optional[int] = None) -> bool:
    _check_position(w, i)
    if registers_of(phi):
        raise TypeError("MTL formulas cannot contain registers")
    vec = _mtl_vectors(w, phi, horizon)
    idx = i if isinstance(w, FiniteDataWord) else w.state_of(i)[0]
    return vec[id(phi)][idx]


# TPTL: memoised recursion on (node, position, values of free registers)


class _TptlEval:
    def __init__(self, w: Word, phi: Formula, horizon: Optional[int]):
        self.w = w
        self.horizon = horizon
        self.lasso = isinstance(w, ArithLassoWord)
        self.thr = _settle_threshold(w, constants_of(phi).max_abs())
        self.free = {id(g): tuple(sorted(free_registers(g))) for g in subformulas(phi)}
        self.memo: dict = {}

    def canon(self, g: Formula, j: int, nu: Valuation) -> tuple[int, tuple[int, ...]]:
        """Canonical (position, clamped register differences) for the free registers of ``g``."""
        w = self.w
        shift = 0
        if self.lasso and j >= w.stem:
            state, q = w.state_of(j)
            shift, j = q * w.delta, state
        dj = w.point_at(j).data
        diffs = []
        for x in self.free[id(g)]:
            try:
                diffs.append(min(dj - (nu[x] - shift), self.thr))
            except KeyError:
                raise UnboundRegister(f"register {x} has no value") from None
        return j, tuple(diffs)

    def holds(self, g: Formula, j: int, nu: Valuation) -> bool:
        j, diffs = self.canon(g, j, nu)
        key = (id(g), j, diffs)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        dj = self.w.point_at(j).data
        nu = {x: dj - d for x, d in zip(self.free[id(g)], diffs)}
        val = self._compute(g, j, nu)
        self.memo[key] = val
        return val

    def _compute(self, g: Formula, j: int, nu: dict) -> bool:
        w = self.w
        if isinstance(g, TrueF):
            return True
        if isinstance(g, FalseF):
            return False
        if isinstance(g, Prop):
            return g.name in w.point_at(j).labels
        if isinstance(g, Constraint):
            return g.interval.contains(w.point_at(j).data - nu[g.register])
        if isinstance(g, Not):
            return not self.holds(g.operand, j, nu)
        if isinstance(g, And):
            return self.holds(g.left, j, nu) and self.holds(g.right, j, nu)
        if isinstance(g, Or):
            return self.holds(g.left, j, nu) or self.holds(g.right, j, nu)
        if isinstance(g, Freeze):
            inner = dict(nu)
            inner[g.register] = w.point_at(j).data
            return self.holds(g.body, j, inner)
        if isinstance(g, Until):
            if not g.interval.is_everything:
                raise TypeError("TPTL Until carries no interval; translate MTL with mtl_to_tptl1")
            seen = set()
            k = j + 1
            while True:
                if isinstance(w, FiniteDataWord) and k >= len(w):
                    return False
                if self.lasso and self.horizon is not None and k > j + self.horizon:
                    return False
                if self.holds(g.right, k, nu):
                    return True
                if not self.holds(g.left, k, nu):
                    return False
                if self.lasso and self.horizon is None:
                    key = self.canon(g, k, nu)
                    if key in seen:
                        return False
                    seen.add(key)
                k += 1
        raise TypeError(f"not a TPTL formula node: {g!r}")


def initial_valuation(w: Word, phi: Formula) -> dict[str, int]:
    """The valuation mapping every register of ``phi`` to the first data value."""
    d0 = w.point_at(0).data
    return {x: d0 for x in registers_of(phi)}


def eval_tptl(
    w: Word,
    i: int,
    nu: Optional[Valuation],
    phi: Formula,
    horizon: Optional[int] = None,
) -> bool:
    """``(w, i, nu) |= phi``; ``nu=None`` stands for the initial valuation."""
    _check_position(w, i)
    if nu is None:
        nu = initial_valuation(w, phi)
    missing = free_registers(phi) - set(nu)
    if missing:
        raise UnboundRegister(f"valuation has no value for {sorted(missing)}")
    return _TptlEval(w, phi, horizon).holds(phi, i, nu)


def satisfies(w: Word, phi: Formula, logic: str = "tptl", horizon: Optional[int] = None) -> bool:
    if logic == "mtl":
        return eval_mtl(w, 0, phi, horizon)
    return eval_tptl(w, 0, None, phi, horizon)


def lasso_horizon(w: ArithLassoWord, phi: Formula) -> int:
    """A scan length after which every Until on ``w`` has settled.

    Deliberately loose; the stability checks compare it against twice its value.
    """
    depth = until_rank(phi)
    if w.delta == 0:
        return len(w.prefix) + 2 * len(w.loop) * (depth + 1)
    span = constants_of(phi).max_abs() + 2 * w.data_range()
    return len(w.prefix) + len(w.loop) * (span + depth + 2)


def until_witness(w: Word, i: int, phi: Formula, logic: str = "mtl") -> Optional[int]:
    """For a top-level Until (possibly under freezes), the first witness position."""
    nu = None
    body = phi
    if logic == "tptl":
        nu = initial_valuation(w, phi) if i == 0 else {x: w.point_at(0).data for x in registers_of(phi)}
        while isinstance(body, Freeze):
            nu = dict(nu)
            nu[body.register] = w.point_at(i).data
            body = body.body
    if not isinstance(body, Until):
        return None
    limit = len(w) if isinstance(w, FiniteDataWord) else i + 1 + lasso_horizon(w, phi)
    di = w.point_at(i).data
    for j in range(i + 1, limit):
        if logic == "mtl":
            ok_right = eval_mtl(w, j, body.right) and body.interval.contains(w.point_at(j).data - di)
            ok_left = eval_mtl(w, j, body.left)
        else:
            ok_right = eval_tptl(w, j, nu, body.right)
            ok_left = eval_tptl(w, j, nu, body.left)
        if ok_right:
            return j
        if not ok_left:
            return None
    return None
