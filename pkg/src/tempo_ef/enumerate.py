"""Bounded enumeration of MTL and TPTL formulas up to equivalence on probe words.

Formulas are generated bottom-up by size (node count, so ``F true`` has size 3)
and kept only if their *fingerprint* is new: the truth value at every position
of every probe word, and for TPTL under every valuation drawn from the probe
word's data values.  Because fingerprints cover whole words and all reachable
valuations, two formulas with the same fingerprint stay interchangeable inside
any larger formula when evaluated on those probes.  So when the probes include
the words under test, a distinguisher of bounded size and rank exists if and
only if the enumeration finds one.

Interval annotations and register constraints range over the region intervals
of the constant set.  Any interval with endpoints in the set is a finite union
of regions and ``a U_(I1 u I2) b`` is equivalent to ``(a U_I1 b) | (a U_I2 b)``,
so nothing is lost beyond the size bound.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .evaluate import eval_mtl, eval_tptl
from .formulas import (
    EQ_ZERO,
    FALSE,
    TRUE,
    And,
    Constraint,
    FalseF,
    Formula,
    FragmentSpec,
    Freeze,
    Not,
    Or,
    Prop,
    TrueF,
    Until,
    Z,
    props_of,
)
from .words import ConstantSet, FiniteDataWord, Interval, Word, as_finite


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, ceiling: int):
        super().__init__(f"enumeration would build about {estimate} candidates, above the ceiling of {ceiling}")
        self.estimate = estimate
        self.ceiling = ceiling


def default_seed() -> int:
    return int(os.environ.get("TEMPO_EF_SEED", "0"))


def random_probe_words(props: Sequence[str], count: int = 8, seed: Optional[int] = None,
                       max_len: int = 5, max_data: int = 4) -> list[FiniteDataWord]:
    rng = random.Random(default_seed() if seed is None else seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_len)
        pts = [
            (frozenset(p for p in props if rng.random() < 0.5), rng.randint(0, max_data))
            for _ in range(n)
        ]
        out.append(FiniteDataWord(pts, props))
    return out


@dataclass(frozen=True)
class EnumBudget:
    """Bounds for enumeration.

    ``registers = 0`` enumerates MTL; ``registers >= 1`` enumerates TPTL with
    registers x1..xn.  ``probe_words`` are ``(word, position)`` pairs; the whole
    word enters the fingerprint and the position marks the configuration of
    interest.  With no probes, eight seeded random words are used.
    """

    max_rank: int
    constants: ConstantSet = field(default_factory=ConstantSet)
    max_size: int = 5
    props: tuple = ()
    registers: int = 0
    fragment: FragmentSpec = field(default_factory=FragmentSpec)
    probe_words: tuple = ()
    ceiling: int = 2_000_000

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        if self.max_rank < 0:
            raise ValueError("max_rank must be non-negative")
        object.__setattr__(self, "props", tuple(sorted(set(self.props))))
        object.__setattr__(self, "probe_words", tuple(self.probe_words))

    @property
    def logic(self) -> str:
        return "mtl" if self.registers == 0 else "tptl"

    def probes(self) -> list[FiniteDataWord]:
        if self.probe_words:
            return [p[0] if isinstance(p, tuple) else p for p in self.probe_words]
        return random_probe_words(self.props)


@dataclass
class Entry:
    formula: Formula
    size: int
    rank: int
    vec: tuple


# truth vectors on probe words


class _MtlSemantics:
    """Vectors are tuples of Python ints, one bitmask of positions per probe word."""

    def __init__(self, words: list[FiniteDataWord], intervals: list[Interval]):
        self.words = words
        self.lens = [len(w) for w in words]
        self.full = tuple((1 << n) - 1 for n in self.lens)
        self.in_iv = {}
        for iv in intervals:
            per_word = []
            for w in words:
                d = w.data
                per_word.append([
                    sum(1 << j for j in range(i + 1, len(d)) if iv.contains(d[j] - d[i]))
                    for i in range(len(d))
                ])
            self.in_iv[iv] = per_word

    def true(self):
        return self.full

    def false(self):
        return tuple(0 for _ in self.words)

    def prop(self, name):
        return tuple(sum(1 << i for i, p in enumerate(w.points) if name in p.labels) for w in self.words)

    def neg(self, v):
        return tuple(f ^ x for f, x in zip(self.full, v))

    def conj(self, u, v):
        return tuple(a & b for a, b in zip(u, v))

    def disj(self, u, v):
        return tuple(a | b for a, b in zip(u, v))

    def until(self, a, b, iv):
        out = []
        for n, av, bv, inw in zip(self.lens, a, b, self.in_iv[iv]):
            res = 0
            for i in range(n - 1):
                # positions after i up to and including the first one where a fails
                rest = (~av >> (i + 1)) & ((1 << (n - i - 1)) - 1)
                stop = (rest & -rest).bit_length() + i if rest else n - 1
                window = ((1 << (stop + 1)) - 1) ^ ((1 << (i + 1)) - 1)
                if bv & inw[i] & window:
                    res |= 1 << i
            out.append(res)
        return tuple(out)

    def key(self, v):
        return v

    def at(self, v, word: int, i: int) -> bool:
        return bool(v[word] >> i & 1)


class _TptlSemantics:
    """Vectors are tuples of bool arrays ``[position, valuation index]`` per probe word.

    Valuation indices enumerate ``V^n`` where ``V`` is the sorted set of data
    values of the word (plus any extra start values).
    """

    def __init__(self, words, n: int, extra_values: Sequence[Sequence[int]] = ()):
        self.words = words
        self.n = n
        self.values = []
        self.freeze_idx = []
        for w_idx, w in enumerate(words):
            extra = extra_values[w_idx] if w_idx < len(extra_values) else ()
            vals = sorted(set(w.data) | set(extra))
            self.values.append(vals)
            m = len(vals)
            combos = np.array(list(itertools.product(range(m), repeat=n)), dtype=np.int64).reshape(-1, n)
            weights = m ** np.arange(n - 1, -1, -1)
            pos_idx = np.array([vals.index(d) for d in w.data])
            per_reg = []
            for r in range(n):
                base = combos.copy()
                rows = []
                for i in range(len(w)):
                    base[:, r] = pos_idx[i]
                    rows.append(base @ weights)
                per_reg.append(np.array(rows))
            self.freeze_idx.append(per_reg)
        self.combos = [
            np.array(list(itertools.product(vals, repeat=n)), dtype=np.int64).reshape(-1, n) for vals in self.values
        ]

    def _shape(self, k):
        return (len(self.words[k]), len(self.combos[k]))

    def true(self):
        return tuple(np.ones(self._shape(k), dtype=bool) for k in range(len(self.words)))

    def false(self):
        return tuple(np.zeros(self._shape(k), dtype=bool) for k in range(len(self.words)))

    def prop(self, name):
        return tuple(
            np.repeat(np.array([name in p.labels for p in w.points])[:, None], len(self.combos[k]), axis=1)
            for k, w in enumerate(self.words)
        )

    def constraint(self, r: int, iv: Interval):
        out = []
        for k, w in enumerate(self.words):
            d = np.array(w.data)[:, None] - self.combos[k][None, :, r]
            out.append(np.vectorize(iv.contains, otypes=[bool])(d) if d.size else np.zeros(d.shape, bool))
        return tuple(out)

    def neg(self, v):
        return tuple(~x for x in v)

    def conj(self, u, v):
        return tuple(a & b for a, b in zip(u, v))

    def disj(self, u, v):
        return tuple(a | b for a, b in zip(u, v))

    def until(self, a, b, iv=None):
        out = []
        for av, bv in zip(a, b):
            res = np.zeros_like(av)
            for i in range(len(av) - 2, -1, -1):
                res[i] = bv[i + 1] | (av[i + 1] & res[i + 1])
            out.append(res)
        return tuple(out)

    def freeze(self, r: int, v):
        return tuple(
            x[np.arange(x.shape[0])[:, None], self.freeze_idx[k][r]] for k, x in enumerate(v)
        )

    def key(self, v):
        return b"|".join(np.packbits(x).tobytes() + bytes([x.shape[0]]) for x in v)

    def index_of(self, k: int, nu: Sequence[int]) -> int:
        vals = self.values[k]
        m = len(vals)
        idx = 0
        for v in nu:
            idx = idx * m + vals.index(v)
        return idx

    def at(self, v, word: int, i: int, nu: Sequence[int]) -> bool:
        return bool(v[word][i, self.index_of(word, nu)])


def _intervals(constants: ConstantSet) -> list[Interval]:
    return constants.region_intervals()


class Enumerator:
    """Incremental bottom-up enumeration; ``run`` yields each new class as it is found."""

    def __init__(self, budget: EnumBudget, probes: Optional[list[FiniteDataWord]] = None,
                 extra_values: Sequence[Sequence[int]] = (), dedupe: bool = True):
        self.b = budget
        self.dedupe = dedupe
        self.words = probes if probes is not None else budget.probes()
        props = set(budget.props)
        for w in self.words:
            props |= set(w.props)
        self.props = sorted(props)
        self.intervals = _intervals(budget.constants)
        if budget.logic == "mtl":
            self.sem = _MtlSemantics(self.words, self.intervals)
        else:
            self.sem = _TptlSemantics(self.words, budget.registers, extra_values)
        self.by_size: dict[int, list[Entry]] = {}
        self.best_rank: dict = {}
        self.estimate = 0

    def _admit(self, f: Formula, size: int, rank: int, vec) -> Optional[Entry]:
        key = self.sem.key(vec)
        seen = self.best_rank.get(key)
        if self.dedupe and seen is not None and seen <= rank:
            return None
        self.best_rank[key] = rank
        e = Entry(f, size, rank, vec)
        self.by_size.setdefault(size, []).append(e)
        return e

    def _atoms(self) -> Iterator[tuple[Formula, object]]:
        s = self.sem
        yield TRUE, s.true()
        yield FALSE, s.false()
        for p in self.props:
            yield Prop(p), s.prop(p)
        if self.b.logic == "tptl":
            ivs = [EQ_ZERO] if self.b.fragment.equality_only else self.intervals
            for r in range(self.b.registers):
                for iv in ivs:
                    yield Constraint(f"x{r + 1}", iv), s.constraint(r, iv)

    def _estimate(self, size: int) -> int:
        tl = self.b.logic == "tptl"
        unary = len(self.by_size.get(size - 1, ())) * (1 + (self.b.registers if tl else 0))
        ops = 2 + (1 if tl else len(self.intervals))
        binary = sum(
            len(self.by_size.get(s1, ())) * len(self.by_size.get(size - 1 - s1, ()))
            for s1 in range(1, size - 1)
        )
        return unary + ops * binary

    def run(self) -> Iterator[Entry]:
        b, s = self.b, self.sem
        for f, v in self._atoms():
            e = self._admit(f, 1, 0, v)
            if e:
                yield e
        for size in range(2, b.max_size + 1):
            self.estimate += self._estimate(size)
            if self.estimate > b.ceiling:
                raise BudgetExceeded(self.estimate, b.ceiling)
            for e in list(self.by_size.get(size - 1, ())):
                new = self._admit(Not(e.formula), size, e.rank, s.neg(e.vec))
                if new:
                    yield new
                if b.logic == "tptl":
                    for r in range(b.registers):
                        new = self._admit(Freeze(f"x{r + 1}", e.formula), size, e.rank, s.freeze(r, e.vec))
                        if new:
                            yield new
            for s1 in range(1, size - 1):
                s2 = size - 1 - s1
                left = list(self.by_size.get(s1, ()))
                right = list(self.by_size.get(s2, ()))
                for xi, x in enumerate(left):
                    for yi, y in enumerate(right):
                        if s1 < s2 or (s1 == s2 and xi <= yi):
                            yield from self._boolean(x, y, size)
                        rank = 1 + max(x.rank, y.rank)
                        if rank > b.max_rank:
                            continue
                        if b.fragment.unary_only and not isinstance(x.formula, (TrueF, FalseF)):
                            continue
                        unary = "F" if isinstance(x.formula, TrueF) else "X" if isinstance(x.formula, FalseF) else None
                        for iv in (self.intervals if b.logic == "mtl" else [Z]):
                            f = Until(x.formula, y.formula, iv, unary)
                            new = self._admit(f, size, rank, s.until(x.vec, y.vec, iv))
                            if new:
                                yield new

    def _boolean(self, x: Entry, y: Entry, size: int):
        s = self.sem
        rank = max(x.rank, y.rank)
        for ctor, op in ((And, s.conj), (Or, s.disj)):
            new = self._admit(ctor(x.formula, y.formula), size, rank, op(x.vec, y.vec))
            if new:
                yield new

    def entries(self) -> list[Entry]:
        return [e for size in sorted(self.by_size) for e in self.by_size[size]]


def enumerate_formulas(budget: EnumBudget, dedupe: bool = True) -> list[Formula]:
    """One representative per fingerprint class, sorted by size then printed form.

    With ``dedupe=False`` every syntactic candidate is returned, which is only
    practical for tiny budgets.
    """
    en = Enumerator(budget, dedupe=dedupe)
    entries = list(en.run())
    entries.sort(key=lambda e: (e.size, str(e.formula)))
    return [e.formula for e in entries]


def find_distinguisher(
    w0: Word,
    i0: int,
    w1: Word,
    i1: int,
    budget: EnumBudget,
    nu0: Optional[Sequence[int]] = None,
    nu1: Optional[Sequence[int]] = None,
    horizon: Optional[int] = None,
) -> Optional[Formula]:
    """The first enumerated formula separating the two configurations, or None within the budget.

    For TPTL the valuations default to the first data value of each word.
    """
    f0, f1 = as_finite(w0, horizon), as_finite(w1, horizon)
    extra_probes = [p[0] if isinstance(p, tuple) else p for p in budget.probe_words]
    words = [f0, f1, *extra_probes]
    n = budget.registers
    extra = ()
    if n:
        nu0 = tuple(nu0) if nu0 is not None else (f0.data[0],) * n
        nu1 = tuple(nu1) if nu1 is not None else (f1.data[0],) * n
        extra = (nu0, nu1)
    en = Enumerator(budget, words, extra)
    for e in en.run():
        if n:
            a, b = en.sem.at(e.vec, 0, i0, nu0), en.sem.at(e.vec, 1, i1, nu1)
        else:
            a, b = en.sem.at(e.vec, 0, i0), en.sem.at(e.vec, 1, i1)
        if a != b:
            return e.formula
    return None


# witness search for non-definability


@dataclass(frozen=True)
class SearchBudget:
    max_len: int = 3
    max_data: int = 2
    rounds: int = 1
    constants: ConstantSet = field(default_factory=lambda: ConstantSet([0]))
    registers: int = 1
    max_pairs: int = 20000


def _words(props: Sequence[str], max_len: int, max_data: int) -> Iterator[FiniteDataWord]:
    label_sets = [frozenset(c) for r in range(len(props) + 1) for c in itertools.combinations(props, r)]
    for n in range(1, max_len + 1):
        for labels in itertools.product(label_sets, repeat=n):
            for data in itertools.product(range(max_data + 1), repeat=n):
                yield FiniteDataWord(list(zip(labels, data)), props)


def search_witness_pair(
    phi: Formula,
    target: str | FragmentSpec = "mtl",
    budget: SearchBudget = SearchBudget(),
    logic: str = "mtl",
) -> Optional[tuple[FiniteDataWord, FiniteDataWord]]:
    """Find small words ``w0 |= phi``, ``w1 |/= phi`` that the target game cannot tell apart.

    ``target`` is ``"mtl"`` for the MTL game, or a fragment spec (or its text
    form such as ``"eq"``) for the TPTL game with ``budget.registers`` registers.
    """
    from .games.mtl import MtlGameConfig, solve_mg
    from .games.tptl import TptlGameConfig, solve_tg
    from .games.core import Player

    props = sorted(props_of(phi))
    yes, no = [], []
    for w in _words(props, budget.max_len, budget.max_data):
        val = eval_mtl(w, 0, phi) if logic == "mtl" else eval_tptl(w, 0, None, phi)
        (yes if val else no).append(w)
    tried = 0
    for w0, w1 in itertools.product(yes, no):
        tried += 1
        if tried > budget.max_pairs:
            return None
        if target == "mtl":
            tree = solve_mg(MtlGameConfig(w0, w1, budget.constants, budget.rounds))
        else:
            spec = target if isinstance(target, FragmentSpec) else FragmentSpec.parse(target)
            cfg = TptlGameConfig(w0, w1, budget.constants, budget.registers, budget.rounds, None, spec)
            tree = solve_tg(cfg)
        if tree.winner is Player.DUPLICATOR:
            return w0, w1
    return None
