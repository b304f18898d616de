"""Shared machinery for the MTL and TPTL Ehrenfeucht-Fraisse games.

Both games have the same round skeleton once the atomic checks are fixed:

1. Spoiler picks a word ``l`` and a position ``a`` after the current one.
2. Duplicator answers with ``b`` in the other word; the pair must be *valid*
   (atomic agreement, plus the region check in the MTL game).
3. Spoiler either continues from ``(a, b)`` with one round fewer, or
4. picks ``m`` strictly between the old position and ``b`` in the other word,
   and Duplicator must answer ``h`` strictly between in word ``l`` such that
   ``(h, m)`` is *ok* (atomically agreeing and not lost with one round fewer).

Everything here works on boolean matrices indexed ``[position in w0,
position in w1]`` so one call settles a whole round from a fixed start pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np


class Player(str, enum.Enum):
    SPOILER = "Spoiler"
    DUPLICATOR = "Duplicator"

    def __str__(self):
        return self.value


class GameError(ValueError):
    pass


class MissingBranch(GameError):
    """A Duplicator strategy has no answer for some legal Spoiler move."""

    def __init__(self, move: str):
        super().__init__(f"strategy does not cover Spoiler move {move}")
        self.move = move


def next_ok(ok: np.ndarray) -> np.ndarray:
    """``out[i, m]`` = smallest ``h > i`` with ``ok[h, m]``, or ``len(ok)`` if none."""
    n0, n1 = ok.shape
    out = np.full((n0, n1), n0, dtype=np.int64)
    for i in range(n0 - 2, -1, -1):
        out[i] = np.where(ok[i + 1], i + 1, out[i + 1])
    return out


@dataclass
class RoundTable:
    """Outcome of every Spoiler move from one start pair ``(i0, i1)``.

    ``good[l][a', b']`` says Duplicator survives Spoiler's pick ``a = i_l+1+a'`` in
    word ``l`` by answering ``b = i_{1-l}+1+b'``; ``between[l]`` marks the replies
    Spoiler refutes with an in-between move.
    """

    i0: int
    i1: int
    valid: list  # per side, sub-matrices [a', b']
    recurse: list
    between: list
    good: list

    def offsets(self, l: int) -> tuple[int, int]:
        return (self.i0, self.i1) if l == 0 else (self.i1, self.i0)

    def losing_picks(self, l: int) -> list[int]:
        """Spoiler's picks in word ``l`` that Duplicator cannot answer, as absolute positions."""
        g = self.good[l]
        if g.shape[0] == 0:
            return []
        start = self.offsets(l)[0] + 1
        return [start + int(a) for a in np.flatnonzero(~g.any(axis=1))]

    def replies(self, l: int, a: int) -> list[int]:
        own, other = self.offsets(l)
        row = self.good[l][a - own - 1]
        return [other + 1 + int(b) for b in np.flatnonzero(row)]

    def spoiler_wins(self) -> bool:
        return bool(self.losing_picks(0) or self.losing_picks(1))


def round_table(
    i0: int,
    i1: int,
    valid: np.ndarray,
    lost_next: np.ndarray,
    nxt0: Optional[np.ndarray],
    nxt1: Optional[np.ndarray],
) -> RoundTable:
    """Evaluate one round from ``(i0, i1)``.

    ``valid`` and ``lost_next`` are full ``[n0, n1]`` matrices: which answer pairs
    pass the step-2 check, and which pairs Spoiler wins with one round fewer.
    ``nxt0 = next_ok(ok)`` and ``nxt1 = next_ok(ok.T)`` drive the in-between
    move; pass ``None`` for games without it.
    """
    valids, recs, betweens, goods = [], [], [], []
    for l in (0, 1):
        if l == 0:
            own, other = i0, i1
            v = valid[i0 + 1 :, i1 + 1 :]
            r = lost_next[i0 + 1 :, i1 + 1 :]
            nxt = nxt0
        else:
            own, other = i1, i0
            v = valid.T[i1 + 1 :, i0 + 1 :]
            r = lost_next.T[i1 + 1 :, i0 + 1 :]
            nxt = nxt1
        if nxt is None or v.size == 0:
            bw = np.zeros_like(v)
        else:
            # Spoiler's in-between pick m ranges over (other, b); Duplicator's
            # earliest answer in word l is nxt[own, m] and must stay below a.
            row = nxt[own, other + 1 :]
            reach = np.concatenate(([-1], np.maximum.accumulate(row)[:-1]))
            a_abs = np.arange(own + 1, own + 1 + v.shape[0])
            bw = reach[None, :] >= a_abs[:, None]
        valids.append(v)
        recs.append(r)
        betweens.append(bw)
        goods.append(v & ~r & ~bw)
    return RoundTable(i0, i1, valids, recs, betweens, goods)


@dataclass
class Move:
    """A Spoiler move: word ``side``, target ``position``; ``kind`` is forward, next or between."""

    side: int
    position: int
    kind: str = "forward"
    freeze: tuple = ()

    def __str__(self):
        y = f" freeze {{{','.join(self.freeze)}}}" if self.freeze else ""
        return f"{self.kind}{y} w{self.side}:{self.position}"


@dataclass
class StrategyNode:
    """One node of a solved game tree; children are expanded on first access."""

    player: Player  # who acts at this node
    state: Any
    move: Optional[Move] = None
    note: str = ""
    _expand: Optional[Callable[[], dict]] = field(default=None, repr=False)
    _children: Optional[dict] = field(default=None, repr=False)

    @property
    def children(self) -> dict:
        if self._children is None:
            self._children = self._expand() if self._expand else {}
        return self._children

    def render(self, depth: int = 3, indent: int = 0) -> list[str]:
        pad = "  " * indent
        head = f"{pad}{self.player}"
        if self.move is not None:
            head += f" {self.move}"
        head += f" @ {self.state}"
        if self.note:
            head += f" [{self.note}]"
        lines = [head]
        if depth <= 0:
            if self.children:
                lines.append(pad + "  ...")
            return lines
        for key, child in self.children.items():
            lines.append(f"{pad}  on {key}:")
            lines.extend(child.render(depth - 1, indent + 2))
        return lines


@dataclass
class StrategyTree:
    winner: Player
    root: StrategyNode
    horizon: Optional[tuple] = None
    solver: Any = field(default=None, repr=False)

    def render(self, depth: int = 3) -> str:
        lines = [f"winner: {self.winner}"]
        if self.horizon:
            lines.append(f"horizon: {self.horizon[0]} / {self.horizon[1]}")
        lines.extend(self.root.render(depth))
        return "\n".join(lines)
