"""Interactive play against the solver.

The human takes one side; the engine plays the other from the solved tables,
optimally when it can win and otherwise with the first legal move.  Every
human move is checked against the game rules and a rejected move names the
violated condition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .games.core import GameError, Player
from .games.mtl import MtlGameConfig, MtlGamePosition, get_solver as mtl_solver
from .games.tptl import TptlGameConfig, TptlGamePosition, get_solver as tptl_solver, register_names


@dataclass
class State:
    i0: int
    i1: int
    nu0: tuple
    nu1: tuple
    k: int


class _MtlRules:
    def __init__(self, cfg: MtlGameConfig, pos: MtlGamePosition):
        self.s = mtl_solver(cfg)
        self.s._check(pos.i0, pos.i1)
        self.n = 0
        self.unary = False
        self.start = State(pos.i0, pos.i1, (), (), cfg.rounds)
        self.words = (self.s.f0, self.s.f1)

    def start_violation(self, st: State) -> Optional[str]:
        return None if self.s.agree[st.i0, st.i1] else "propositions differ"

    def lost(self, st: State) -> bool:
        return bool(self.s.lost[st.k][st.i0, st.i1])

    def freeze(self, st, ys):
        return (), ()

    def forward_violation(self, st, nu, l, a, b) -> Optional[str]:
        p0, p1 = (a, b) if l == 0 else (b, a)
        if not self.s.agree[p0, p1]:
            return "propositions differ"
        da = self.s.data(l, a) - self.s.data(l, (st.i0, st.i1)[l])
        db = self.s.data(1 - l, b) - self.s.data(1 - l, (st.i0, st.i1)[1 - l])
        if self.s.cfg.constants.region(da) != self.s.cfg.constants.region(db):
            return f"data differences {da} and {db} lie in different regions"
        return None

    def between_violation(self, st, nu, l, h, m) -> Optional[str]:
        p0, p1 = (h, m) if l == 0 else (m, h)
        return None if self.s.agree[p0, p1] else "propositions differ"

    def lost_after(self, nu, p0, p1, k) -> bool:
        return bool(self.s.lost[k][p0, p1])

    def engine_spoiler(self, st):
        if self.lost(st):
            mv = self.s.spoiler_move(st.i0, st.i1, st.k)
            return (), mv.side, mv.position, "forward"
        return None

    def engine_replies(self, st, nu, l, a):
        return self.s.table(st.i0, st.i1, st.k).replies(l, a)

    def engine_branch(self, st, nu, l, a, b):
        p0, p1 = (a, b) if l == 0 else (b, a)
        if self.s.lost[st.k - 1][p0, p1]:
            return None
        return self.s.between_move(st.i0, st.i1, st.k, l, a, b)



class _TptlRules:
    def __init__(self, cfg: TptlGameConfig, pos: TptlGamePosition):
        self.s = tptl_solver(cfg)
        i0, i1, nu0, nu1 = self.s.start(pos)
        self.n = cfg.registers
        self.unary = cfg.fragment.unary_only
        self.start = State(i0, i1, nu0, nu1, cfg.rounds)
        self.words = (self.s.f0, self.s.f1)

    def start_violation(self, st):
        return None if self.s.atomic(st.nu0, st.nu1)[st.i0, st.i1] else "atomic formulas differ"

    def lost(self, st):
        return bool(self.s.lost(st.nu0, st.nu1, st.k)[st.i0, st.i1])

    def freeze(self, st, ys):
        return self.s.frozen(st.i0, st.i1, st.nu0, st.nu1, ys)

    def _atomic_violation(self, nu, p0, p1):
        if self.s.atomic(*nu)[p0, p1]:
            return None
        if not self.s.agree[p0, p1]:
            return "propositions differ"
        return "register constraints differ"

    def forward_violation(self, st, nu, l, a, b):
        p0, p1 = (a, b) if l == 0 else (b, a)
        return self._atomic_violation(nu, p0, p1)

    def between_violation(self, st, nu, l, h, m):
        p0, p1 = (h, m) if l == 0 else (m, h)
        return self._atomic_violation(nu, p0, p1)

    def lost_after(self, nu, p0, p1, k):
        return bool(self.s.lost(nu[0], nu[1], k)[p0, p1])

    def engine_spoiler(self, st):
        if not self.lost(st):
            return None
        mv = self.s.winning_move(st.i0, st.i1, st.nu0, st.nu1, st.k)
        ys = tuple(int(x[1:]) - 1 for x in mv.freeze)
        return ys, mv.side, mv.position, mv.kind

    def engine_replies(self, st, nu, l, a):
        return self.s.table(st.i0, st.i1, nu[0], nu[1], st.k).replies(l, a)

    def engine_branch(self, st, nu, l, a, b):
        p0, p1 = (a, b) if l == 0 else (b, a)
        if self.unary or self.s.lost(nu[0], nu[1], st.k - 1)[p0, p1]:
            return None
        return self.s.between_move(st.i0, st.i1, nu[0], nu[1], st.k, l, a, b)



@dataclass
class SessionState:
    rules: object
    human: Player
    state: State
    history: list = field(default_factory=list)  # (actor, text)
    inputs: list = field(default_factory=list)  # raw human answers, replayable
    phase: str = "start"  # start, duplicator-reply, spoiler-branch, between-reply
    winner: Optional[Player] = None
    complete: bool = False

    def log(self, actor: Player, text: str):
        self.history.append((str(actor), text))


def word_table(words, i0: int, i1: int) -> str:
    """Aligned label/data table with the current positions bracketed."""
    lines = []
    n = max(len(w) for w in words)
    head = "     " + "".join(f"{j:>8}" for j in range(n))
    lines.append(head)
    for side, (w, cur) in enumerate(zip(words, (i0, i1))):
        cells = []
        for j, p in enumerate(w.points):
            cell = f"{','.join(sorted(p.labels)) or '-'}:{p.data}"
            cells.append(f"{('[' + cell + ']') if j == cur else cell:>8}")
        lines.append(f"w{side}   " + "".join(cells))
    return "\n".join(lines)


class _Abort(Exception):
    pass


class Session:
    def __init__(self, rules, human: Player, ask: Callable[[str], str], say: Callable[[str], None]):
        self.r = rules
        self.st = SessionState(rules, human, rules.start)
        self.ask = ask
        self.say = say

    def _prompt(self, text: str) -> str:
        try:
            ans = self.ask(text).strip()
        except (EOFError, KeyboardInterrupt):
            raise _Abort()
        self.st.inputs.append(ans)
        if ans in ("quit", "exit"):
            raise _Abort()
        return ans

    def _human_is(self, p: Player) -> bool:
        return self.st.human is p

    def _exists(self, word: int, j: int) -> bool:
        return 0 <= j < len(self.r.words[word])

    # human input parsers

    def _ask_freeze(self, st) -> tuple:
        names = register_names(self.r.n)
        while True:
            ans = self._prompt("freeze which registers? (e.g. 'x1', 'x1,x2', or empty) ")
            parts = [p.strip() for p in ans.replace(" ", ",").split(",") if p.strip()]
            bad = [p for p in parts if p not in names]
            if bad:
                self.say(f"rejected: unknown register {bad[0]}; registers are {', '.join(names)}")
                continue
            return tuple(sorted(names.index(p) for p in set(parts)))

    def _ask_spoiler_move(self, st):
        while True:
            extra = ", or 'next'" if self.r.unary else ""
            ans = self._prompt(f"Spoiler: pick 'w0 <pos>' or 'w1 <pos>'{extra} ")
            if self.r.unary and ans == "next":
                return None, None, "next"
            try:
                w, pos = ans.split()
                l, a = {"w0": 0, "w1": 1}[w], int(pos)
            except (ValueError, KeyError):
                self.say("rejected: expected a word name and a position, like 'w0 3'")
                continue
            cur = (st.i0, st.i1)[l]
            if a <= cur:
                self.say(f"rejected: the position must be after the current position {cur}")
            elif not self._exists(l, a):
                self.say(f"rejected: w{l} has no position {a} (length {len(self.r.words[l])})")
            else:
                return l, a, "forward"

    def _ask_position(self, text, word, lo, hi, check):
        while True:
            ans = self._prompt(text)
            try:
                b = int(ans)
            except ValueError:
                self.say("rejected: expected a position number")
                continue
            if not lo < b < hi:
                self.say(f"rejected: the position must lie strictly between {lo} and {hi}")
                continue
            if not self._exists(word, b):
                self.say(f"rejected: w{word} has no position {b}")
                continue
            why = check(b)
            if why:
                self.say(f"rejected: {why}")
                continue
            return b

    def _ask_branch(self, other_word, lo, hi):
        while True:
            ans = self._prompt(f"Spoiler: 'continue' or 'between <pos>' in w{other_word} ")
            if ans == "continue":
                return None
            parts = ans.split()
            if len(parts) == 2 and parts[0] == "between":
                try:
                    m = int(parts[1])
                except ValueError:
                    self.say("rejected: expected a position number")
                    continue
                if lo < m < hi:
                    return m
                self.say(f"rejected: the position must lie strictly between {lo} and {hi}")
                continue
            self.say("rejected: expected 'continue' or 'between <pos>'")

    # one round

    def play(self) -> SessionState:
        try:
            while self.st.winner is None:
                self._round()
            self.st.complete = True
        except _Abort:
            self.st.log(self.st.human, "session abandoned")
            self.say("session abandoned; transcript marked incomplete")
        return self.st

    def _finish(self, winner: Player, why: str):
        self.st.winner = winner
        self.st.log(winner, f"wins: {why}")
        self.say(f"{winner} wins: {why}")

    def _round(self):
        st = self.st.state
        r = self.r
        self.say(word_table(r.words, st.i0, st.i1))
        self.say(f"rounds left: {st.k}" + (f"  nu0={list(st.nu0)} nu1={list(st.nu1)}" if r.n else ""))
        why = r.start_violation(st)
        if why:
            return self._finish(Player.SPOILER, why)
        if st.k == 0:
            return self._finish(Player.DUPLICATOR, "no rounds left")
        self.st.phase = "start"
        # Spoiler's move
        if self._human_is(Player.SPOILER):
            stuck = not (self._exists(0, st.i0 + 1) or self._exists(1, st.i1 + 1))
            if stuck:
                return self._finish(Player.DUPLICATOR, "Spoiler has no move")
            ys = self._ask_freeze(st) if r.n else ()
            l, a, kind = self._ask_spoiler_move(st)
        else:
            mv = r.engine_spoiler(st)
            if mv is None:
                mv = self._fallback_spoiler(st)
                if mv is None:
                    return self._finish(Player.DUPLICATOR, "Spoiler has no move")
            ys, l, a, kind = mv
        nu = r.freeze(st, ys)
        if ys:
            self.st.log(Player.SPOILER, "freeze " + ",".join(register_names(r.n)[j] for j in ys))
        if kind == "next":
            return self._next_move(st, nu, l)
        self.st.log(Player.SPOILER, f"w{l}:{a}")
        self.say(f"Spoiler picks w{l}:{a}")
        # Duplicator's reply
        self.st.phase = "duplicator-reply"
        other = (st.i0, st.i1)[1 - l]
        n_other = len(r.words[1 - l])
        legal = [b for b in range(other + 1, n_other) if r.forward_violation(st, nu, l, a, b) is None]
        if not legal:
            return self._finish(Player.SPOILER, f"no position in w{1 - l} answers w{l}:{a}")
        if self._human_is(Player.DUPLICATOR):
            b = self._ask_position(f"Duplicator: answer in w{1 - l} ", 1 - l, other, n_other,
                                   lambda b: r.forward_violation(st, nu, l, a, b))
        else:
            own = (st.i0, st.i1)[l]
            b = self._closest(r.engine_replies(st, nu, l, a), other, a - own)
            if b is None:
                b = self._best_effort(legal, lambda b: not r.lost_after(nu, *((a, b) if l == 0 else (b, a)), st.k - 1))
        self.st.log(Player.DUPLICATOR, f"w{1 - l}:{b}")
        self.say(f"Duplicator answers w{1 - l}:{b}")
        # Spoiler's branch
        self.st.phase = "spoiler-branch"
        if r.unary:
            m = None
        elif self._human_is(Player.SPOILER):
            m = self._ask_branch(1 - l, other, b)
        else:
            m = r.engine_branch(st, nu, l, a, b)
        p0, p1 = (a, b) if l == 0 else (b, a)
        if m is None:
            self.st.log(Player.SPOILER, "continue")
            self.st.state = State(p0, p1, nu[0], nu[1], st.k - 1)
            return
        self.st.log(Player.SPOILER, f"between w{1 - l}:{m}")
        self.say(f"Spoiler picks w{1 - l}:{m} in between")
        self.st.phase = "between-reply"
        own = (st.i0, st.i1)[l]
        legal = [h for h in range(own + 1, a) if r.between_violation(st, nu, l, h, m) is None]
        if not legal:
            return self._finish(Player.SPOILER, f"no position of w{l} between {own} and {a} answers w{1 - l}:{m}")
        if self._human_is(Player.DUPLICATOR):
            h = self._ask_position(f"Duplicator: answer in w{l} ", l, own, a,
                                   lambda h: r.between_violation(st, nu, l, h, m))
        else:
            safe = [h for h in legal if not r.lost_after(nu, *((h, m) if l == 0 else (m, h)), st.k - 1)]
            h = self._closest(safe, own, m - other)
            if h is None:
                h = self._best_effort(legal, lambda h: not r.lost_after(nu, *((h, m) if l == 0 else (m, h)), st.k - 1))
        self.st.log(Player.DUPLICATOR, f"w{l}:{h}")
        self.say(f"Duplicator answers w{l}:{h}")
        q0, q1 = (h, m) if l == 0 else (m, h)
        self.st.state = State(q0, q1, nu[0], nu[1], st.k - 1)

    def _next_move(self, st, nu, l):
        self.st.log(Player.SPOILER, "next")
        has = (st.i0 + 1 < len(self.r.words[0]), st.i1 + 1 < len(self.r.words[1]))
        if not all(has):
            if any(has):
                return self._finish(Player.SPOILER, "only one word has a next position")
            return self._finish(Player.DUPLICATOR, "neither word has a next position")
        self.say("both players move to the next position")
        self.st.state = State(st.i0 + 1, st.i1 + 1, nu[0], nu[1], st.k - 1)

    def _fallback_spoiler(self, st):
        for l in (0, 1):
            cur = (st.i0, st.i1)[l]
            if self._exists(l, cur + 1):
                return (), l, cur + 1, "forward"
        return None

    @staticmethod
    def _closest(cands, base, offset):
        """The candidate whose step from ``base`` is nearest ``offset``; mirrors Spoiler when possible."""
        if not cands:
            return None
        return min(cands, key=lambda c: (abs(c - base - offset), c))

    @staticmethod
    def _best_effort(legal, good):
        for x in legal:
            if good(x):
                return x
        return legal[0]


def make_rules(cfg, pos=None):
    if isinstance(cfg, MtlGameConfig):
        return _MtlRules(cfg, pos or MtlGamePosition())
    if isinstance(cfg, TptlGameConfig):
        return _TptlRules(cfg, pos or TptlGamePosition())
    raise GameError(f"not a game configuration: {cfg!r}")


def play(cfg, human: Player, ask: Callable[[str], str] | None = None, say: Callable[[str], None] = print,
         pos=None) -> SessionState:
    """Run one interactive game and return the final session state with its transcript."""
    if ask is None:
        ask = lambda prompt: input(prompt)  # noqa: E731  resolved late so callers may patch input
    return Session(make_rules(cfg, pos), human, ask, say).play()


def replay(cfg, human: Player, answers: list[str], pos=None) -> SessionState:
    """Feed recorded human answers through a fresh session; output is discarded."""
    it = iter(answers)

    def ask(_prompt):
        try:
            return next(it)
        except StopIteration:
            raise EOFError from None

    return Session(make_rules(cfg, pos), human, ask, lambda _: None).play()
