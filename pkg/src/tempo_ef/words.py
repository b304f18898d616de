"""Data words, integer intervals, constant sets and regions.

A data word is a sequence of ``(labels, data)`` pairs where ``labels`` is a
subset of a finite proposition universe and ``data`` is a natural number.
Finite words are stored explicitly; infinite words are stored as arithmetic
lassos (a prefix followed by a loop whose data grows by ``delta`` on every
pass).
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

INF = math.inf

Bound = Union[int, float]


class WordError(ValueError):
    """Raised for malformed words or out-of-range positions."""


@dataclass(frozen=True)
class Interval:
    """An interval over the integers with possibly infinite endpoints."""

    lower: Bound = -INF
    upper: Bound = INF
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        if self.lower == INF or self.upper == -INF:
            raise ValueError(f"bad interval endpoints {self.lower}, {self.upper}")
        if math.isinf(self.lower) and self.lower_closed:
            raise ValueError("infinite lower endpoint cannot be closed")
        if math.isinf(self.upper) and self.upper_closed:
            raise ValueError("infinite upper endpoint cannot be closed")
        if self.lower > self.upper or (
            self.lower == self.upper and not (self.lower_closed and self.upper_closed)
        ):
            raise ValueError(f"empty interval {self}")
        for end in (self.lower, self.upper):
            if not math.isinf(end) and int(end) != end:
                raise ValueError(f"non-integer endpoint {end}")

    @classmethod
    def closed(cls, a: int, b: int) -> Interval:
        return cls(a, b, True, True)

    @classmethod
    def point(cls, a: int) -> Interval:
        return cls(a, a, True, True)

    @classmethod
    def everything(cls) -> Interval:
        return cls()

    @property
    def is_everything(self) -> bool:
        return math.isinf(self.lower) and math.isinf(self.upper)

    def contains(self, m: int) -> bool:
        if self.lower_closed:
            if m < self.lower:
                return False
        elif m <= self.lower:
            return False
        if self.upper_closed:
            return m <= self.upper
        return m < self.upper

    def finite_endpoints(self) -> set[int]:
        return {int(e) for e in (self.lower, self.upper) if not math.isinf(e)}

    def __str__(self) -> str:
        lo = "-inf" if math.isinf(self.lower) else str(int(self.lower))
        hi = "inf" if math.isinf(self.upper) else str(int(self.upper))
        return f"{'[' if self.lower_closed else '('}{lo},{hi}{']' if self.upper_closed else ')'}"


def interval_contains(interval: Interval, m: int) -> bool:
    return interval.contains(m)


class ConstantSet:
    """A finite set of integer constants, implicitly joined with -inf and +inf.

    Regions are numbered left to right: ``2*p`` is the open gap with exactly
    ``p`` constants below it and ``2*p + 1`` is the singleton of the p-th
    constant.
    """

    __slots__ = ("values",)

    def __init__(self, values: Iterable[int] = ()):
        self.values: tuple[int, ...] = tuple(sorted({int(v) for v in values}))

    @classmethod
    def parse(cls, text: str) -> ConstantSet:
        text = text.strip().strip("{}")
        parts = [p.strip() for p in text.split(",") if p.strip()]
        return cls(int(p) for p in parts if p not in ("-inf", "inf", "+inf"))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __contains__(self, m) -> bool:
        return m in self.values

    def __eq__(self, other) -> bool:
        return isinstance(other, ConstantSet) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __le__(self, other: ConstantSet) -> bool:
        return set(self.values) <= set(other.values)

    def __or__(self, other: ConstantSet) -> ConstantSet:
        return ConstantSet(self.values + other.values)

    def __repr__(self):
        return f"ConstantSet({list(self.values)})"

    def __str__(self):
        return "{" + ", ".join(["-inf", *map(str, self.values), "+inf"]) + "}"

    def region(self, m: int) -> int:
        p = bisect.bisect_left(self.values, m)
        if p < len(self.values) and self.values[p] == m:
            return 2 * p + 1
        return 2 * p

    def region_interval(self, region: int) -> Interval:
        p, hit = divmod(region, 2)
        if hit:
            return Interval.point(self.values[p])
        lo = self.values[p - 1] if p > 0 else -INF
        hi = self.values[p] if p < len(self.values) else INF
        return Interval(lo, hi, False, False)

    def num_regions(self) -> int:
        return 2 * len(self.values) + 1

    def region_intervals(self) -> list[Interval]:
        """Singletons and open gaps that contain at least one integer."""
        out = []
        for r in range(self.num_regions()):
            iv = self.region_interval(r)
            if r % 2 == 0 and not (iv.upper - iv.lower > 1):
                continue
            out.append(iv)
        return out

    def max_abs(self) -> int:
        return max((abs(v) for v in self.values), default=0)


def same_region(m: int, n: int, constants: ConstantSet) -> bool:
    return constants.region(m) == constants.region(n)


@dataclass(frozen=True)
class DataPoint:
    labels: frozenset = field(default_factory=frozenset)
    data: int = 0

    def __post_init__(self):
        object.__setattr__(self, "labels", frozenset(self.labels))
        if int(self.data) != self.data or self.data < 0:
            raise WordError(f"data values must be natural numbers, got {self.data!r}")


def _points(points) -> tuple[DataPoint, ...]:
    out = []
    for p in points:
        if isinstance(p, DataPoint):
            out.append(p)
        else:
            labels, data = p
            if isinstance(labels, str):
                labels = {labels} if labels else set()
            out.append(DataPoint(frozenset(labels), int(data)))
    return tuple(out)


def _check_labels(props: frozenset, points: Sequence[DataPoint]):
    for p in points:
        extra = p.labels - props
        if extra:
            raise WordError(f"labels {sorted(extra)} not in proposition universe {sorted(props)}")


@dataclass(frozen=True)
class FiniteDataWord:
    props: frozenset
    points: tuple

    def __init__(self, points, props: Iterable[str] | None = None):
        pts = _points(points)
        if not pts:
            raise WordError("a finite data word needs at least one point")
        universe = frozenset(props) if props is not None else frozenset().union(*(p.labels for p in pts))
        _check_labels(universe, pts)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "props", universe)

    def __len__(self):
        return len(self.points)

    def point_at(self, j: int) -> DataPoint:
        if not 0 <= j < len(self.points):
            raise WordError(f"position {j} out of range for a word of length {len(self.points)}")
        return self.points[j]

    @property
    def data(self) -> list[int]:
        return [p.data for p in self.points]

    @property
    def labels(self) -> list[frozenset]:
        return [p.labels for p in self.points]

    def shifted(self, c: int) -> FiniteDataWord:
        return FiniteDataWord([(p.labels, p.data + c) for p in self.points], self.props)

    def suffix(self, i: int) -> FiniteDataWord:
        return FiniteDataWord(self.points[i:], self.props)

    def __str__(self):
        return " ".join(f"({','.join(sorted(p.labels)) or '-'},{p.data})" for p in self.points)


@dataclass(frozen=True)
class ArithLassoWord:
    """``prefix . loop^omega`` where pass ``q`` of the loop adds ``q*delta`` to the data."""

    props: frozenset
    prefix: tuple
    loop: tuple
    delta: int

    def __init__(self, prefix, loop, delta: int = 0, props: Iterable[str] | None = None):
        pre, lp = _points(prefix), _points(loop)
        if not lp:
            raise WordError("lasso loop must be non-empty")
        if delta < 0:
            raise WordError("lasso delta must be a natural number")
        universe = (
            frozenset(props)
            if props is not None
            else frozenset().union(*(p.labels for p in pre + lp))
        )
        _check_labels(universe, pre + lp)
        object.__setattr__(self, "prefix", pre)
        object.__setattr__(self, "loop", lp)
        object.__setattr__(self, "delta", int(delta))
        object.__setattr__(self, "props", universe)

    @property
    def stem(self) -> int:
        """Number of distinct lasso states, ``len(prefix) + len(loop)``."""
        return len(self.prefix) + len(self.loop)

    def point_at(self, j: int) -> DataPoint:
        if j < 0:
            raise WordError(f"negative position {j}")
        if j < len(self.prefix):
            return self.prefix[j]
        q, r = divmod(j - len(self.prefix), len(self.loop))
        base = self.loop[r]
        return DataPoint(base.labels, base.data + q * self.delta)

    def state_of(self, j: int) -> tuple[int, int]:
        """Map position ``j`` to ``(state, passes)`` with ``j = state + passes*len(loop)``."""
        if j < self.stem:
            return j, 0
        q = (j - len(self.prefix)) // len(self.loop)
        return j - q * len(self.loop), q

    def materialize(self, horizon: int) -> FiniteDataWord:
        if horizon < 1:
            raise WordError("horizon must be at least 1")
        return FiniteDataWord([self.point_at(j) for j in range(horizon)], self.props)

    def data_range(self) -> int:
        vals = [p.data for p in self.prefix + self.loop]
        return max(vals) - min(vals)

    def shifted(self, c: int) -> ArithLassoWord:
        return ArithLassoWord(
            [(p.labels, p.data + c) for p in self.prefix],
            [(p.labels, p.data + c) for p in self.loop],
            self.delta,
            self.props,
        )

    def __str__(self):
        fmt = lambda pts: " ".join(f"({','.join(sorted(p.labels)) or '-'},{p.data})" for p in pts)
        return f"{fmt(self.prefix)} [{fmt(self.loop)}]^w +{self.delta}"


Word = Union[FiniteDataWord, ArithLassoWord]


def point_at(w: Word, j: int) -> DataPoint:
    return w.point_at(j)


def materialize(w: Word, horizon: int) -> FiniteDataWord:
    if isinstance(w, FiniteDataWord):
        return FiniteDataWord(w.points[:horizon], w.props)
    return w.materialize(horizon)


def agree_propositions(w0: Word, i0: int, w1: Word, i1: int) -> bool:
    return w0.point_at(i0).labels == w1.point_at(i1).labels


def as_finite(w: Word, horizon: int | None) -> FiniteDataWord:
    """Finite view of ``w``: finite words pass through, lassos are cut at ``horizon``."""
    if isinstance(w, FiniteDataWord):
        return w
    if horizon is None:
        raise WordError("a horizon is required for lasso words")
    return w.materialize(horizon)


# JSON word files

def _point_json(p: DataPoint) -> dict:
    return {"labels": sorted(p.labels), "data": p.data}


def word_to_json(w: Word) -> dict:
    if isinstance(w, FiniteDataWord):
        return {"props": sorted(w.props), "kind": "finite", "prefix": [_point_json(p) for p in w.points]}
    return {
        "props": sorted(w.props),
        "kind": "lasso",
        "prefix": [_point_json(p) for p in w.prefix],
        "loop": [_point_json(p) for p in w.loop],
        "delta": w.delta,
    }


def word_from_json(obj: dict) -> Word:
    try:
        props = obj.get("props")
        kind = obj.get("kind", "finite")
        prefix = [(pt.get("labels", []), pt["data"]) for pt in obj.get("prefix", [])]
        if kind == "finite":
            return FiniteDataWord(prefix, props)
        if kind == "lasso":
            loop = [(pt.get("labels", []), pt["data"]) for pt in obj["loop"]]
            return ArithLassoWord(prefix, loop, obj.get("delta", 0), props)
    except (KeyError, TypeError) as exc:
        raise WordError(f"malformed word file: {exc}") from exc
    raise WordError(f"unknown word kind {kind!r}")


def load_word(path) -> Word:
    with open(path) as fh:
        return word_from_json(json.load(fh))


def save_word(w: Word, path) -> None:
    Path(path).write_text(json.dumps(word_to_json(w), indent=2) + "\n")
