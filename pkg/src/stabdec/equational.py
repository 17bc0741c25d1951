"""Equational topology: closed sets defined by equations only.

For DOAG an irreducible closed set is an affine subspace with rational
equations; for DLO it is cut out by equalities ``x_i = x_j`` and pins
``x_i = c``.  Both are stored as :class:`AffineSubspace` (DLO rows keep
coefficients in {-1, 0, 1}); :func:`dlo_classes` recovers the class/pin view.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _linalg
from ._fm import GT
from .formula import DLO, Partition
from .polyhedra import (
    AffineSubspace, Cell, Hyperplane, SemilinearSet, affine_hull, complement_cells,
)

IrreducibleClosed = AffineSubspace

PURE_X = "PureX"
PURE_Y = "PureY"
NON_SPLIT = "NonSplit"


class DegenerateHyperplane(ValueError):
    """The hyperplane contains (or misses) the whole component."""


@dataclass(frozen=True)
class EquationalClosedSet:
    """Irredundant finite union of irreducible closed sets."""
    vars: tuple[str, ...]
    components: tuple[AffineSubspace, ...] = ()

    @classmethod
    def from_subspaces(cls, vars: Sequence[str], subs) -> "EquationalClosedSet":
        return cls(tuple(vars), tuple(maximal(subs)))

    @classmethod
    def empty(cls, vars) -> "EquationalClosedSet":
        return cls(tuple(vars), ())

    @property
    def dim(self) -> int:
        return max((c.dim for c in self.components), default=-1)

    def as_set(self) -> SemilinearSet:
        return SemilinearSet.make(self.vars, [c.as_cell() for c in self.components])

    def complement_cells(self) -> list[Cell]:
        return complement_cells([c.as_cell() for c in self.components], self.vars)

    def __str__(self):
        return str(self.as_set())


def maximal(subs) -> list[AffineSubspace]:
    """Drop duplicates and subspaces contained in another one (order kept)."""
    subs = list(dict.fromkeys(subs))
    keep = []
    for i, s in enumerate(subs):
        if any(o.contains(s) for j, o in enumerate(subs) if j != i and (o != s)):
            continue
        keep.append(s)
    return keep


def _dlo_closure_rows(cell: Cell, constants: Sequence[Fraction]) -> list[tuple]:
    n = cell.n
    rows = []

    def entailed(row):
        neg = tuple(-v for v in row)
        return cell.add([(GT, row)]).empty and cell.add([(GT, neg)]).empty

    for i in range(n):
        for j in range(i + 1, n):
            row = [0] * (n + 1)
            row[i], row[j] = 1, -1
            if entailed(tuple(row)):
                rows.append(tuple(row))
        for c in constants:
            row = [0] * (n + 1)
            row[i] = c.denominator
            row[n] = -c.numerator
            if entailed(tuple(row)):
                rows.append((0,) * i + (1,) + (0,) * (n - i - 1) + (-c,))
    return rows


def is_dlo_row(row) -> bool:
    """``x_i - x_j`` or a multiple of ``x_i - c``."""
    nz = [v for v in row[:-1] if v]
    if len(nz) == 1:
        return True
    return len(nz) == 2 and nz[0] == -nz[1] and row[-1] == 0


def cell_constants(cell: Cell) -> list[Fraction]:
    """Constants ``c`` of one-variable atoms ``v ~ c`` in a cell."""
    out = set()
    for _, row in cell.cons:
        nz = [i for i, v in enumerate(row[:-1]) if v]
        if len(nz) == 1:
            out.add(Fraction(-row[-1], row[nz[0]]))
    return sorted(out)


def equational_closure(s: SemilinearSet, theory: str) -> EquationalClosedSet:
    """Closure of ``s`` in the equational topology."""
    subs = []
    for cell in s.cells:
        if cell.empty:
            continue
        if theory == DLO:
            rows = _dlo_closure_rows(cell, cell_constants(cell))
            sub = AffineSubspace.from_rows(s.vars, rows)
            if sub is not None and not all(is_dlo_row(r) for r in sub.rows):
                raise AssertionError("DLO closure produced a non-DLO equation")
        else:
            sub = affine_hull(cell)
        subs.append(sub)
    return EquationalClosedSet.from_subspaces(s.vars, subs)


def irreducible_components(z: EquationalClosedSet) -> list[AffineSubspace]:
    comps = list(z.components)
    for i, a in enumerate(comps):
        for j, b in enumerate(comps):
            if i != j and b.contains(a):
                raise AssertionError("closed set is not irredundant")
    return comps


def dlo_classes(v: AffineSubspace) -> tuple[list[list[str]], dict[str, Fraction]]:
    """Equality classes and constant pins of a DLO irreducible closed set."""
    parent = {x: x for x in v.vars}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pins: dict[str, Fraction] = {}
    for r in v.rows:
        nz = [i for i, c in enumerate(r[:-1]) if c]
        if len(nz) == 2:
            a, b = find(v.vars[nz[0]]), find(v.vars[nz[1]])
            parent[a] = b
        elif len(nz) == 1:
            pins[v.vars[nz[0]]] = Fraction(-r[-1], r[nz[0]])
        else:
            raise ValueError("not a DLO closed set")
    groups: dict[str, list[str]] = {}
    for x in v.vars:
        groups.setdefault(find(x), []).append(x)
    classes = [g for g in groups.values() if len(g) > 1 or g[0] in pins]
    class_pins = {}
    for g in classes:
        for x in g:
            if x in pins:
                class_pins[g[0]] = pins[x]
    return classes, class_pins


# --------------------------------------------------------------------------
# split modulo a component


@dataclass(frozen=True)
class SplitResult:
    tag: str
    rewritten: Optional[Hyperplane] = None
    u: Optional[tuple] = None
    v: Optional[tuple] = None

    @property
    def is_split(self) -> bool:
        return self.tag != NON_SPLIT


def _block(rows, idx):
    return [[r[i] for i in idx] for r in rows]


def _pure_part(v: AffineSubspace, keep_idx, other_idx) -> list[list[Fraction]]:
    """Rows of span(V) whose ``other_idx`` block vanishes, restricted to ``keep_idx`` + constant."""
    rows = [list(r) for r in v.rows]
    if not rows:
        return []
    other = _block(rows, other_idx)
    # mu with mu . other == 0  <=>  mu in kernel of other^T
    m = len(rows)
    ot = [[other[i][c] for i in range(m)] for c in range(len(other_idx))]
    mus = _linalg.kernel(ot, m) if ot else [[Fraction(int(i == j)) for i in range(m)] for j in range(m)]
    out = []
    for mu in mus:
        comb = [sum(mu[i] * rows[i][c] for i in range(m)) for c in range(len(rows[0]))]
        out.append([comb[i] for i in keep_idx] + [comb[-1]])
    return out


def _rewrite(h_row, v: AffineSubspace, lam, keep_idx, other_idx) -> list[Fraction]:
    new = [Fraction(x) for x in h_row]
    for l, r in zip(lam, v.rows):
        if l:
            new = [a - l * b for a, b in zip(new, r)]
    assert all(new[i] == 0 for i in other_idx)
    red = [new[i] for i in keep_idx] + [new[-1]]
    pure = _pure_part(v, keep_idx, other_idx)
    if pure:
        prows, piv = _linalg.rref(pure, len(keep_idx))
        for pr, p in zip(prows, piv):
            if red[p]:
                f = red[p] / pr[p]
                red = [a - f * b for a, b in zip(red, pr)]
    return red


def split_modulo(h: Hyperplane, v: AffineSubspace, partition: Partition) -> SplitResult:
    """Decide whether ``h`` restricted to ``v`` is a pure-x or pure-y hyperplane.

    With ``v`` given by ``E_x x + E_y y = e`` and ``h`` by ``k x + l y = c``:
    pure-x when ``l`` lies in the row space of ``E_y``, pure-y when ``k`` lies
    in the row space of ``E_x``, otherwise directions ``u`` in ker ``E_x`` and
    ``v`` in ker ``E_y`` with ``k.u != 0`` and ``l.v != 0`` exist.
    """
    if h.vars != v.vars:
        raise ValueError("hyperplane and component over different ambients")
    if v.vanishes_on(h.row) or not any(v.reduce(h.row)[:-1]):
        raise DegenerateHyperplane(f"{h} does not cut {v} in codimension one")
    pos = {name: i for i, name in enumerate(v.vars)}
    xi = [pos[n] for n in partition.x_vars]
    yi = [pos[n] for n in partition.y_vars]
    rows = [list(r) for r in v.rows]
    k = [h.row[i] for i in xi]
    l = [h.row[i] for i in yi]
    ex, ey = _block(rows, xi), _block(rows, yi)

    lam = _linalg.solve_left(ey, l)
    if lam is not None:
        red = _rewrite(h.row, v, lam, xi, yi)
        if any(red[:-1]):
            return SplitResult(PURE_X, Hyperplane.make(partition.x_vars, red))
    mu = _linalg.solve_left(ex, k)
    if mu is not None:
        red = _rewrite(h.row, v, mu, yi, xi)
        if any(red[:-1]):
            return SplitResult(PURE_Y, Hyperplane.make(partition.y_vars, red))
    u = next((b for b in _linalg.kernel(ex, len(xi)) if _linalg.dot(k, b) != 0), None)
    w = next((b for b in _linalg.kernel(ey, len(yi)) if _linalg.dot(l, b) != 0), None)
    assert u is not None and w is not None
    return SplitResult(NON_SPLIT, u=tuple(u), v=tuple(w))
