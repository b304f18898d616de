"""Deliberately naive reference implementations, written straight from the definitions.

They share nothing with the package beyond the data types, recompute everything
recursively and are only fit for tiny instances.  Tests compare the optimized
engines against them.
"""

from __future__ import annotations

from functools import lru_cache

from tempo_ef.formulas import And, Constraint, FalseF, Freeze, Not, Or, Prop, TrueF, Until


def naive_region(m: int, constants) -> tuple:
    """Region as (kind, index): an exact constant, or the number of constants strictly below m."""
    cs = sorted(constants)
    if m in cs:
        return ("hit", cs.index(m))
    return ("gap", sum(1 for c in cs if c < m))


def in_interval(iv, m: int) -> bool:
    lo_ok = m >= iv.lower if iv.lower_closed else m > iv.lower
    hi_ok = m <= iv.upper if iv.upper_closed else m < iv.upper
    return lo_ok and hi_ok


def naive_mtl(w, i: int, phi) -> bool:
    """Finite-word MTL semantics with the strict until."""
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, Prop):
        return phi.name in w.points[i].labels
    if isinstance(phi, Not):
        return not naive_mtl(w, i, phi.operand)
    if isinstance(phi, And):
        return naive_mtl(w, i, phi.left) and naive_mtl(w, i, phi.right)
    if isinstance(phi, Or):
        return naive_mtl(w, i, phi.left) or naive_mtl(w, i, phi.right)
    if isinstance(phi, Until):
        d = w.points[i].data
        return any(
            in_interval(phi.interval, w.points[j].data - d)
            and naive_mtl(w, j, phi.right)
            and all(naive_mtl(w, h, phi.left) for h in range(i + 1, j))
            for j in range(i + 1, len(w))
        )
    raise TypeError(phi)


def naive_tptl(w, i: int, nu: dict, phi) -> bool:
    """Finite-word TPTL semantics; in-between positions are checked against the left operand."""
    if isinstance(phi, TrueF):
        return True
    if isinstance(phi, FalseF):
        return False
    if isinstance(phi, Prop):
        return phi.name in w.points[i].labels
    if isinstance(phi, Constraint):
        return in_interval(phi.interval, w.points[i].data - nu[phi.register])
    if isinstance(phi, Not):
        return not naive_tptl(w, i, nu, phi.operand)
    if isinstance(phi, And):
        return naive_tptl(w, i, nu, phi.left) and naive_tptl(w, i, nu, phi.right)
    if isinstance(phi, Or):
        return naive_tptl(w, i, nu, phi.left) or naive_tptl(w, i, nu, phi.right)
    if isinstance(phi, Freeze):
        return naive_tptl(w, i, {**nu, phi.register: w.points[i].data}, phi.body)
    if isinstance(phi, Until):
        return any(
            naive_tptl(w, j, nu, phi.right) and all(naive_tptl(w, h, nu, phi.left) for h in range(i + 1, j))
            for j in range(i + 1, len(w))
        )
    raise TypeError(phi)


def naive_mg(w0, w1, constants, k: int, i0: int = 0, i1: int = 0) -> str:
    """Winner of the MTL game by exhaustive search over the round rules."""
    W = (w0, w1)

    def lab(side, j):
        return W[side].points[j].labels

    def dat(side, j):
        return W[side].points[j].data

    @lru_cache(maxsize=None)
    def spoiler(i0, i1, k) -> bool:
        pos = (i0, i1)
        if lab(0, i0) != lab(1, i1):
            return True
        if k == 0:
            return False
        for l in (0, 1):
            o = 1 - l
            for a in range(pos[l] + 1, len(W[l])):
                region_a = naive_region(dat(l, a) - dat(l, pos[l]), constants)

                def duplicator_survives(b) -> bool:
                    if lab(o, b) != lab(l, a) or naive_region(dat(o, b) - dat(o, pos[o]), constants) != region_a:
                        return False
                    pair = {l: a, o: b}
                    if spoiler(pair[0], pair[1], k - 1):
                        return False
                    for m in range(pos[o] + 1, b):
                        answers = [h for h in range(pos[l] + 1, a) if lab(l, h) == lab(o, m)]
                        pairs = [{l: h, o: m} for h in answers]
                        if not any(not spoiler(p[0], p[1], k - 1) for p in pairs):
                            return False
                    return True

                if not any(duplicator_survives(b) for b in range(pos[o] + 1, len(W[o]))):
                    return True
        return False

    return "Spoiler" if spoiler(i0, i1, k) else "Duplicator"


def naive_tg(w0, w1, constants, n: int, k: int, i0: int = 0, i1: int = 0, nu0=None, nu1=None,
             equality: bool = False) -> str:
    """Winner of the n-register TPTL game by exhaustive search."""
    W = (w0, w1)
    nu0 = tuple(nu0) if nu0 is not None else (w0.points[0].data,) * n
    nu1 = tuple(nu1) if nu1 is not None else (w1.points[0].data,) * n

    def atoms(side, j, nu):
        p = W[side].points[j]
        if equality:
            regs = tuple(p.data - v == 0 for v in nu)
        else:
            regs = tuple(naive_region(p.data - v, constants) for v in nu)
        return p.labels, regs

    @lru_cache(maxsize=None)
    def spoiler(i0, i1, nu0, nu1, k) -> bool:
        pos, nus = (i0, i1), (nu0, nu1)
        if atoms(0, i0, nu0) != atoms(1, i1, nu1):
            return True
        if k == 0:
            return False
        for mask in range(2 ** n):
            new = tuple(
                tuple(W[s].points[pos[s]].data if mask >> r & 1 else nus[s][r] for r in range(n)) for s in (0, 1)
            )
            for l in (0, 1):
                o = 1 - l
                for a in range(pos[l] + 1, len(W[l])):
                    def duplicator_survives(b) -> bool:
                        if atoms(l, a, new[l]) != atoms(o, b, new[o]):
                            return False
                        pair = {l: a, o: b}
                        if spoiler(pair[0], pair[1], new[0], new[1], k - 1):
                            return False
                        for m in range(pos[o] + 1, b):
                            ok = False
                            for h in range(pos[l] + 1, a):
                                if atoms(l, h, new[l]) != atoms(o, m, new[o]):
                                    continue
                                p = {l: h, o: m}
                                if not spoiler(p[0], p[1], new[0], new[1], k - 1):
                                    ok = True
                                    break
                            if not ok:
                                return False
                        return True

                    if not any(duplicator_survives(b) for b in range(pos[o] + 1, len(W[o]))):
                        return True
        return False

    return "Spoiler" if spoiler(i0, i1, nu0, nu1, k) else "Duplicator"
