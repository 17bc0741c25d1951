"""Fourier-Motzkin elimination on integer constraint rows.

A constraint is a pair ``(kind, row)``.  ``row`` holds integer coefficients
for the variables followed by the constant term, and the constraint reads
``row . (v, 1)  <kind>  0`` with ``kind`` one of ``EQ`` (= 0), ``GT`` (> 0)
or ``GE`` (>= 0).  Over the rationals, elimination is exact: lower and upper
bounds are combined pairwise and the result is strict when either input is.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

EQ, GT, GE = 0, 1, 2

Con = tuple  # (kind, row)


def normalize(kind: int, row: Sequence[int]):
    """Canonical form of one constraint.

    Returns the constraint, or ``True``/``False`` when it has no variables.
    """
    g = 0
    for v in row[:-1]:
        g = gcd(g, v)
    if g == 0:
        c = row[-1]
        if kind == EQ:
            return c == 0
        return c > 0 if kind == GT else c >= 0
    g = gcd(g, row[-1])
    if g != 1:
        row = tuple(v // g for v in row)
    else:
        row = tuple(row)
    if kind == EQ:
        for v in row:
            if v:
                if v < 0:
                    row = tuple(-w for w in row)
                break
    return (kind, row)


def negate(con: Con) -> list[Con]:
    """Constraints whose disjunction is the negation of ``con``."""
    kind, row = con
    neg = tuple(-v for v in row)
    if kind == GT:
        return [normalize(GE, neg)]
    if kind == GE:
        return [normalize(GT, neg)]
    return [normalize(GT, row), normalize(GT, neg)]


def holds(con: Con, point: Sequence) -> bool:
    kind, row = con
    val = sum(c * p for c, p in zip(row, point)) + row[-1]
    if kind == EQ:
        return val == 0
    return val > 0 if kind == GT else val >= 0


def _direction(row):
    g = 0
    for v in row[:-1]:
        g = gcd(g, v)
    return tuple(v // g for v in row[:-1]), Fraction(row[-1], g)


def tighten(cons: Iterable[Con]) -> Optional[list[Con]]:
    """Drop dominated parallel bounds and detect direct contradictions.

    Returns ``None`` when two parallel constraints are already inconsistent.
    Opposite weak bounds that pinch to a single value become an equation.
    """
    eqs: dict = {}
    best: dict = {}
    for con in cons:
        kind, row = con
        d, c = _direction(row)
        if kind == EQ:
            dd = d
            cc = c
            for v in d:
                if v:
                    if v < 0:
                        dd = tuple(-w for w in d)
                        cc = -c
                    break
            old = eqs.get(dd)
            if old is not None and old != cc:
                return None
            eqs[dd] = cc
            continue
        old = best.get(d)
        strict = kind == GT
        if old is None or c < old[0] or (c == old[0] and strict and not old[1]):
            best[d] = (c, strict)
    out_eq = dict(eqs)
    out_ineq = {}
    for d, (c, strict) in best.items():
        neg = tuple(-v for v in d)
        if neg in best:
            c2, s2 = best[neg]
            # -c <= d.v <= c2  (strictness per side)
            tot = c + c2
            if tot < 0 or (tot == 0 and (strict or s2)):
                return None
            if tot == 0:
                dd, cc = (d, c) if _first_positive(d) else (neg, c2)
                if out_eq.get(dd, cc) != cc:
                    return None
                out_eq[dd] = cc
                continue
        # check against an equation on the same line
        dd, sign = (d, 1) if _first_positive(d) else (neg, -1)
        if dd in eqs:
            # d.v = -sign*eqs[dd]*... ; value of d.v + c at the line
            val = c - sign * eqs[dd]
            if val < 0 or (val == 0 and strict):
                return None
            continue
        out_ineq[d] = (c, strict)
    result = []
    for d, c in out_eq.items():
        result.append(normalize(EQ, _scale(d, c)))
    for d, (c, strict) in out_ineq.items():
        result.append(normalize(GT if strict else GE, _scale(d, c)))
    return result


def _first_positive(d):
    for v in d:
        if v:
            return v > 0
    return True


def _scale(d, c: Fraction):
    den = c.denominator
    return tuple(v * den for v in d) + (c.numerator,)


def _combine(lo: Con, up: Con, j: int):
    """Eliminate column ``j`` from a lower bound (coef > 0) and an upper bound."""
    (k1, r1), (k2, r2) = lo, up
    a, b = r1[j], -r2[j]
    row = tuple(b * x + a * y for x, y in zip(r1, r2))
    kind = GT if (k1 == GT or k2 == GT) else GE
    return normalize(kind, row)


def eliminate(cons: Sequence[Con], j: int) -> Optional[list[Con]]:
    """Project out variable ``j``.  ``None`` signals infeasibility."""
    eq = None
    for con in cons:
        if con[0] == EQ and con[1][j] != 0:
            if eq is None or abs(con[1][j]) < abs(eq[1][j]):
                eq = con
    out = []
    if eq is not None:
        erow = eq[1]
        a = erow[j]
        if a < 0:
            erow = tuple(-v for v in erow)
            a = -a
        for con in cons:
            if con is eq:
                continue
            kind, row = con
            b = row[j]
            if b == 0:
                out.append(con)
                continue
            new = normalize(kind, tuple(a * x - b * y for x, y in zip(row, erow)))
            if new is False:
                return None
            if new is not True:
                out.append(new)
        return tighten(out)
    lows, ups = [], []
    for con in cons:
        c = con[1][j]
        if c == 0:
            out.append(con)
        elif c > 0:
            lows.append(con)
        else:
            ups.append(con)
    for lo in lows:
        for up in ups:
            new = _combine(lo, up, j)
            if new is False:
                return None
            if new is not True:
                out.append(new)
    return tighten(out)


def _pick(cons: Sequence[Con], live: Iterable[int]) -> int:
    best, score = None, None
    for j in live:
        if any(k == EQ and r[j] for k, r in cons):
            return j
        p = sum(1 for _, r in cons if r[j] > 0)
        n = sum(1 for _, r in cons if r[j] < 0)
        s = p * n - p - n
        if score is None or s < score:
            best, score = j, s
    return best


def _live(cons: Sequence[Con]) -> list[int]:
    if not cons:
        return []
    n = len(cons[0][1]) - 1
    return [j for j in range(n) if any(r[j] for _, r in cons)]


def feasible(cons: Sequence[Con]) -> bool:
    """Decide whether the conjunction has a rational solution."""
    cur = tighten(cons)
    if cur is None:
        return False
    live = _live(cur)
    while live:
        j = _pick(cur, live)
        cur = eliminate(cur, j)
        if cur is None:
            return False
        live = _live(cur)
    return True


def _choose(lo, lo_strict, hi, hi_strict) -> Fraction:
    """A simple rational in the interval described by the bounds."""
    def ok(v):
        if lo is not None and (v < lo or (v == lo and lo_strict)):
            return False
        if hi is not None and (v > hi or (v == hi and hi_strict)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if lo is not None and hi is not None:
        if lo == hi:
            return lo
        cands = [Fraction(lo.__floor__() + 1), Fraction(hi.__ceil__() - 1),
                 Fraction(lo.__ceil__()), Fraction(hi.__floor__())]
        good = [v for v in cands if ok(v)]
        if good:
            return min(good, key=lambda v: (abs(v), v))
        return (lo + hi) / 2
    if lo is not None:
        v = Fraction(lo.__ceil__())
        return v if ok(v) else v + 1
    v = Fraction(hi.__floor__())
    return v if ok(v) else v - 1


def solve(cons: Sequence[Con], n: int) -> Optional[list[Fraction]]:
    """Return a rational point satisfying every constraint, or ``None``.

    Variables not mentioned get the value 0.  Strict constraints are met
    strictly; weak ones are met strictly whenever the bound interval allows.
    """
    cur = tighten(cons)
    if cur is None:
        return None
    stages = []
    live = _live(cur)
    while live:
        j = _pick(cur, live)
        stages.append((j, cur))
        cur = eliminate(cur, j)
        if cur is None:
            return None
        live = _live(cur)
    point = [Fraction(0)] * n
    done = set(range(n)) - {j for j, _ in stages}
    for j, system in reversed(stages):
        lo = hi = None
        lo_s = hi_s = False
        fixed = None
        for kind, row in system:
            a = row[j]
            if a == 0:
                continue
            # only j is still unassigned among variables in this row
            rest = row[-1] + sum(row[i] * point[i] for i in range(n) if i != j)
            bound = Fraction(-rest, a)
            if kind == EQ:
                fixed = bound
                break
            strict = kind == GT
            if a > 0:
                if lo is None or bound > lo or (bound == lo and strict):
                    lo, lo_s = bound, strict
            else:
                if hi is None or bound < hi or (bound == hi and strict):
                    hi, hi_s = bound, strict
        point[j] = fixed if fixed is not None else _choose(lo, lo_s, hi, hi_s)
        done.add(j)
    return point
