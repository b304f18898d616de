"""Formula syntax trees for MTL and TPTL.

Both logics share one family of immutable nodes.  MTL formulas carry an
interval on every ``Until``; TPTL formulas leave those intervals at the full
integer line and use ``Constraint``/``Freeze`` instead.  ``F`` and ``X`` are
stored as ``Until`` with a ``True``/``False`` left operand, tagged with
``unary`` so that syntactic fragments can tell them apart from a hand-written
``true U phi``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional

from .words import INF, ConstantSet, Interval

Z = Interval.everything()


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        from .parser import to_text

        return to_text(self)

    # operator sugar for building formulas in code
    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)


@dataclass(frozen=True, repr=False)
class TrueF(Formula):
    def __repr__(self):
        return "TrueF()"


@dataclass(frozen=True, repr=False)
class FalseF(Formula):
    def __repr__(self):
        return "FalseF()"


TRUE = TrueF()
FALSE = FalseF()


@dataclass(frozen=True)
class Prop(Formula):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("proposition names must be non-empty")


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula
    interval: Interval = Z
    unary: Optional[str] = None  # "F", "X" or None

    def __post_init__(self):
        if self.unary == "F" and self.left != TRUE:
            raise ValueError("F must have a true left operand")
        if self.unary == "X" and self.left != FALSE:
            raise ValueError("X must have a false left operand")
        if self.unary not in (None, "F", "X"):
            raise ValueError(f"unknown unary marker {self.unary!r}")


@dataclass(frozen=True)
class Constraint(Formula):
    register: str
    interval: Interval


@dataclass(frozen=True)
class Freeze(Formula):
    register: str
    body: Formula


_REG = re.compile(r"x[1-9][0-9]*$")


def check_register(name: str) -> str:
    if not _REG.match(name):
        raise ValueError(f"register names are x1, x2, ...; got {name!r}")
    return name


def F(body: Formula, interval: Interval = Z) -> Until:
    return Until(TRUE, body, interval, "F")


def X(body: Formula, interval: Interval = Z) -> Until:
    return Until(FALSE, body, interval, "X")


def G(body: Formula, interval: Interval = Z) -> Formula:
    return Not(F(Not(body), interval))


def U(left: Formula, right: Formula, interval: Interval = Z) -> Until:
    return Until(left, right, interval)


def conj(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction with duplicates and ``true`` removed."""
    seen: list[Formula] = []
    for f in items:
        if f == FALSE:
            return FALSE
        if f != TRUE and f not in seen:
            seen.append(f)
    if not seen:
        return TRUE
    return reduce(lambda acc, f: And(f, acc), reversed(seen[:-1]), seen[-1])


def disj(items: Iterable[Formula]) -> Formula:
    seen: list[Formula] = []
    for f in items:
        if f == TRUE:
            return TRUE
        if f != FALSE and f not in seen:
            seen.append(f)
    if not seen:
        return FALSE
    return reduce(lambda acc, f: Or(f, acc), reversed(seen[:-1]), seen[-1])


def neg(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.operand
    if f == TRUE:
        return FALSE
    if f == FALSE:
        return TRUE
    return Not(f)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Not):
        return (f.operand,)
    if isinstance(f, (And, Or, Until)):
        return (f.left, f.right)
    if isinstance(f, Freeze):
        return (f.body,)
    return ()


def subformulas(f: Formula):
    """Post-order traversal (children before parents)."""
    for c in children(f):
        yield from subformulas(c)
    yield f


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def until_rank(f: Formula) -> int:
    if isinstance(f, Until):
        return 1 + max(until_rank(f.left), until_rank(f.right))
    return max((until_rank(c) for c in children(f)), default=0)


def constants_of(f: Formula) -> ConstantSet:
    consts: set[int] = set()
    for g in subformulas(f):
        if isinstance(g, (Until, Constraint)):
            consts |= g.interval.finite_endpoints()
    return ConstantSet(consts)


def props_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def registers_of(f: Formula) -> set[str]:
    return {g.register for g in subformulas(f) if isinstance(g, (Constraint, Freeze))}


def free_registers(f: Formula) -> frozenset:
    if isinstance(f, Constraint):
        return frozenset({f.register})
    if isinstance(f, Freeze):
        return free_registers(f.body) - {f.register}
    return frozenset().union(*(free_registers(c) for c in children(f)))


def is_mtl(f: Formula) -> bool:
    return not registers_of(f)


def is_tptl(f: Formula) -> bool:
    return all(g.interval.is_everything for g in subformulas(f) if isinstance(g, Until))


@dataclass(frozen=True)
class FragmentSpec:
    """Syntactic TPTL fragment: register bound, unary temporal operators, equality checks."""

    max_registers: Optional[int] = None
    unary_only: bool = False
    equality_only: bool = False

    @classmethod
    def parse(cls, text: str | None, max_registers: Optional[int] = None) -> FragmentSpec:
        parts = {p for p in (text or "").replace(",", "+").split("+") if p}
        unknown = parts - {"eq", "unary"}
        if unknown:
            raise ValueError(f"unknown fragment {sorted(unknown)}; use eq, unary or eq+unary")
        return cls(max_registers, "unary" in parts, "eq" in parts)


EQ_ZERO = Interval.point(0)


def fragment_check(f: Formula, spec: FragmentSpec) -> bool:
    if spec.max_registers is not None and len(registers_of(f)) > spec.max_registers:
        return False
    for g in subformulas(f):
        if spec.unary_only and isinstance(g, Until) and g.unary is None:
            return False
        if spec.equality_only and isinstance(g, Constraint) and g.interval != EQ_ZERO:
            return False
    return True


def mtl_to_tptl1(f: Formula, register: str = "x1") -> Formula:
    """Translate MTL into one-register TPTL: ``a U_I b`` becomes ``x.(a U (x in I & b))``."""
    if isinstance(f, (TrueF, FalseF, Prop)):
        return f
    if isinstance(f, Not):
        return Not(mtl_to_tptl1(f.operand, register))
    if isinstance(f, And):
        return And(mtl_to_tptl1(f.left, register), mtl_to_tptl1(f.right, register))
    if isinstance(f, Or):
        return Or(mtl_to_tptl1(f.left, register), mtl_to_tptl1(f.right, register))
    if isinstance(f, Until):
        right = mtl_to_tptl1(f.right, register)
        if not f.interval.is_everything:
            right = And(Constraint(register, f.interval), right)
        return Freeze(register, Until(mtl_to_tptl1(f.left, register), right, Z, f.unary))
    raise TypeError(f"not an MTL formula: {f!r}")


__all__ = [
    "Formula", "TrueF", "FalseF", "TRUE", "FALSE", "Prop", "Not", "And", "Or",
    "Until", "Constraint", "Freeze", "F", "X", "G", "U", "Z", "conj", "disj", "neg",
    "size", "until_rank", "constants_of", "props_of", "registers_of", "free_registers",
    "subformulas", "children", "is_mtl", "is_tptl", "FragmentSpec", "fragment_check",
    "mtl_to_tptl1", "INF",
]
