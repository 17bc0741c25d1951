"""Small exact linear algebra over the rationals.

Matrices are lists of rows; entries are ``int`` or ``Fraction``.  Nothing
here is clever: the systems are a handful of rows over at most a dozen
columns.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Vector = Sequence[Fraction]


def rref(rows: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.  Only the
    first ``ncols`` columns are used as pivot candidates, which lets callers
    append a constant column that never becomes a pivot.
    """
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return [], []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    out = [row for row in m[:r]]
    # rows below r are zero on the pivot block but may carry a constant
    out.extend(row for row in m[r:] if any(row))
    return out, pivots


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    return len(rref(rows, ncols)[1])


def solve_left(rows: Sequence[Sequence], target: Sequence) -> Optional[list]:
    """Find ``lam`` with ``sum(lam[i] * rows[i]) == target``, or ``None``."""
    if not rows:
        return [] if all(v == 0 for v in target) else None
    n = len(rows)
    # augmented transpose: columns are the rows of the input
    aug = [[Fraction(rows[i][c]) for i in range(n)] + [Fraction(target[c])]
           for c in range(len(target))]
    red, piv = rref(aug, n)
    lam = [Fraction(0)] * n
    for row in red:
        lead = next((c for c in range(n) if row[c] != 0), None)
        if lead is None:
            if row[n] != 0:
                return None
            continue
        lam[lead] = row[n]
    return lam


def kernel(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{u : rows @ u == 0}`` (over the first ``ncols`` columns)."""
    red, piv = rref([list(r[:ncols]) for r in rows], ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        u = [Fraction(0)] * ncols
        u[f] = Fraction(1)
        for row, p in zip(red, piv):
            u[p] = -row[f]
        basis.append(u)
    return basis


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def integerize(vec: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to coprime integers."""
    fr = [Fraction(v) for v in vec]
    den = 1
    for v in fr:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in fr]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)


def canonical_sign(vec: tuple[int, ...], upto: Optional[int] = None) -> tuple[int, ...]:
    """Flip sign so the first nonzero entry among the first ``upto`` is positive."""
    upto = len(vec) if upto is None else upto
    for v in vec[:upto]:
        if v:
            return vec if v > 0 else tuple(-w for w in vec)
    return vec
