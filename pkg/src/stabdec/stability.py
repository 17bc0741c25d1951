"""Stability classification for DLO/DOAG relations.

:func:`analyze` either decomposes ``D`` into special stable pieces
``(V \\ W) ∩ (X × Y)`` or returns a facet on which ``D`` has a "slope" across
the variable split, from which :func:`make_ladder` builds half-graphs of any
length.

The recursion runs on dimension.  ``R`` is the part of ``D`` not yet covered.
For every top-dimensional component ``V`` of the equational closure of ``R``
the full set ``D ∩ V`` (not just ``R ∩ V``) is examined, so any ladder found
is a ladder for ``D`` itself:

* hyperplanes of the cells of ``D ∩ V`` are arranged inside ``V``;
* a facet whose two sides differ in membership is essential;
* an essential hyperplane that cannot be rewritten modulo ``V`` as a pure-x
  or pure-y constraint yields instability;
* otherwise the rewritten pure hyperplanes form a grid whose full cells
  ``X_i × Y_j`` are filled by ``D`` up to a lower-dimensional error, which is
  carved out with the equational closure ``W``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ._fm import EQ
from .equational import (
    NON_SPLIT, PURE_X, EquationalClosedSet, SplitResult, equational_closure,
    split_modulo,
)
from .formula import Partition, Problem
from .polyhedra import (
    AffineSubspace, Cell, Hyperplane, SemilinearSet, arrangement_signed, combine,
    dimension, interior_vec, intersect_cells,
)
from . import _linalg
from .qe import eliminate_quantifiers

STABLE = "stable"
UNSTABLE = "unstable"


class GridContractViolation(AssertionError):
    """A grid step left a remainder of full dimension."""


@dataclass(frozen=True)
class FacetAnalysis:
    hyperplane: Hyperplane
    in_side: int            # +1: D lies where the hyperplane term is positive
    cells: tuple            # codimension-one arrangement cells on the hyperplane
    split: Optional[SplitResult]
    arrangement_rows: tuple  # every hyperplane of the refining arrangement

    @property
    def facet(self) -> Cell:
        return self.cells[0]


@dataclass(frozen=True)
class SpecialStablePiece:
    """``(V \\ W) ∩ (X × Y)``."""
    V: AffineSubspace
    W: EquationalClosedSet
    X: SemilinearSet
    Y: SemilinearSet

    def to_set(self) -> SemilinearSet:
        vars = self.V.vars
        base = intersect_cells([self.V.as_cell()], self.W.complement_cells())
        base = intersect_cells(base, self.X.embed(vars).cells)
        base = intersect_cells(base, self.Y.embed(vars).cells)
        return SemilinearSet.make(vars, base)

    def as_json(self) -> dict:
        return {"Z": str(self.V), "W": str(self.W), "X": str(self.X), "Y": str(self.Y)}


@dataclass(frozen=True)
class LadderWitness:
    """``(a_i, b_j)`` in ``D`` exactly when ``i <= j``."""
    x_vars: tuple
    y_vars: tuple
    a: tuple
    b: tuple

    @property
    def k(self) -> int:
        return len(self.a)

    def point(self, i: int, j: int) -> dict:
        """Assignment for the pair (a_i, b_j), zero-based."""
        return {**dict(zip(self.x_vars, self.a[i])), **dict(zip(self.y_vars, self.b[j]))}

    def restrict(self, k: int) -> "LadderWitness":
        return LadderWitness(self.x_vars, self.y_vars, self.a[:k], self.b[:k])


@dataclass(frozen=True)
class GridRecord:
    component_dim: int
    remainder_dim: int
    pieces: int


@dataclass
class StabilityVerdict:
    tag: str
    partition: Partition
    theory: str
    D: SemilinearSet
    pieces: list = field(default_factory=list)
    culprit: Optional[FacetAnalysis] = None
    component: Optional[AffineSubspace] = None
    trace: list = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return self.tag == STABLE

    def witness(self, k: int) -> LadderWitness:
        if self.culprit is None:
            raise ValueError("stable verdicts carry no witness")
        return make_ladder(self.culprit, self.component, k, self.partition)

    def union(self) -> SemilinearSet:
        cells = []
        for p in self.pieces:
            cells.extend(p.to_set().cells)
        return SemilinearSet.make(self.D.vars, cells)


# --------------------------------------------------------------------------
# essential boundary


def _arrangement_rows(d_v: SemilinearSet, v: AffineSubspace, extra=()) -> list[tuple]:
    rows = []
    for cell in d_v.cells:
        low = cell.dim < v.dim
        for kind, row in cell.cons:
            if kind != EQ or low:
                rows.append(row)
    rows.extend(extra)
    out = set()
    for row in rows:
        r = v.reduce(row)
        if any(r[:-1]):
            out.add(_linalg.canonical_sign(r, len(r) - 1))
    return sorted(out)


def essential_boundary(d_v: SemilinearSet, v: AffineSubspace,
                       partition: Optional[Partition] = None,
                       region: Optional[Cell] = None) -> list[FacetAnalysis]:
    """Hyperplanes of ``v`` across which membership in ``d_v`` changes.

    With ``region`` (a cell inside ``v``) the ambient of the boundary is
    ``v ∩ region`` instead of ``v``: only facets with both sides in the
    region count.  Facets are merged per (hyperplane, side) and returned in
    lexicographic order of the canonical hyperplane rows.
    """
    carrier = v.as_cell()
    extra = ()
    if region is not None:
        carrier = carrier.conj(region)
        extra = tuple(row for kind, row in region.cons if kind != EQ)
    target = carrier.dim
    if dimension(d_v) != target:
        raise ValueError(f"dimension mismatch: set has {dimension(d_v)}, carrier {target}")
    rows = _arrangement_rows(d_v, v, extra)
    cells = arrangement_signed(rows, carrier)
    member = {}
    for signs, c in cells:
        if 0 not in signs:
            member[signs] = d_v.holds(dict(zip(c.vars, interior_vec(c))))
    groups: dict = {}
    for signs, c in cells:
        if signs.count(0) != 1:
            continue
        z = signs.index(0)
        up = signs[:z] + (1,) + signs[z + 1:]
        down = signs[:z] + (-1,) + signs[z + 1:]
        if up not in member or down not in member or member[up] == member[down]:
            continue
        side = 1 if member[up] else -1
        groups.setdefault((rows[z], side), []).append(c)
    out = []
    for (row, side) in sorted(groups):
        h = Hyperplane(v.vars, row)
        split = split_modulo(h, v, partition) if partition is not None else None
        out.append(FacetAnalysis(h, side, tuple(groups[(row, side)]), split, tuple(rows)))
    return out


# --------------------------------------------------------------------------
# grid decomposition


def _lift(s: SemilinearSet, vars) -> list[Cell]:
    return list(s.embed(vars).cells)


def _side_cells(hyperplanes: Sequence[Hyperplane], names) -> list[Cell]:
    rows = sorted({h.row for h in hyperplanes})
    return [c for signs, c in arrangement_signed(rows, Cell.full(names)) if 0 not in signs]


def grid_decompose(d_v: SemilinearSet, v: AffineSubspace, facets: Sequence[FacetAnalysis],
                   partition: Partition, theory: str):
    """Special stable pieces covering ``d_v`` up to a lower-dimensional remainder.

    Returns ``(pieces, remainder)``.  Raises :class:`GridContractViolation`
    if the remainder is not of lower dimension than ``v``.
    """
    if any(f.split is None or f.split.tag == NON_SPLIT for f in facets):
        raise ValueError("grid_decompose needs every facet to split")
    vars = v.vars
    hx = [f.split.rewritten for f in facets if f.split.tag == PURE_X]
    hy = [f.split.rewritten for f in facets if f.split.tag != PURE_X]
    xcells = _side_cells(hx, partition.x_vars)
    ycells = _side_cells(hy, partition.y_vars)
    vcell = v.as_cell()
    pieces = []
    for xc in xcells:
        xs = SemilinearSet.make(partition.x_vars, [xc])
        for yc in ycells:
            ys = SemilinearSet.make(partition.y_vars, [yc])
            g = vcell.conj(xs.embed(vars).cells[0]).conj(ys.embed(vars).cells[0])
            if g.empty or g.dim < v.dim:
                continue
            gs = SemilinearSet.make(vars, [g])
            if dimension(combine("intersect", gs, d_v)) < v.dim:
                continue
            w = equational_closure(combine("difference", gs, d_v), theory)
            pieces.append(SpecialStablePiece(v, w, xs, ys))
    covered = SemilinearSet.make(vars, [c for p in pieces for c in p.to_set().cells])
    remainder = combine("difference", d_v, covered)
    if dimension(remainder) >= v.dim:
        raise GridContractViolation(
            f"remainder of dimension {dimension(remainder)} inside a component of dimension {v.dim}")
    return pieces, remainder


# --------------------------------------------------------------------------
# ladders


def make_ladder(facet: FacetAnalysis, v: AffineSubspace, k: int,
                partition: Partition) -> LadderWitness:
    """Half-graph of length ``k`` near a facet whose hyperplane does not split."""
    if k < 1:
        raise ValueError("ladder length must be positive")
    if facet.split is None or facet.split.tag != NON_SPLIT:
        raise ValueError("make_ladder needs a NonSplit facet")
    vars = v.vars
    pos = {n: i for i, n in enumerate(vars)}
    xi = [pos[n] for n in partition.x_vars]
    yi = [pos[n] for n in partition.y_vars]
    h = facet.hyperplane.row
    p = interior_vec(facet.facet)

    rho = None
    for g in facet.arrangement_rows:
        if g == h:
            continue
        val = abs(_linalg.dot(g[:-1], p) + g[-1])
        norm = sum(abs(c) for c in g[:-1])
        assert val > 0
        r = Fraction(val, 1) / norm
        rho = r if rho is None else min(rho, r)
    if rho is None:
        rho = Fraction(1)

    u = [Fraction(c) for c in facet.split.u]
    w = [Fraction(c) for c in facet.split.v]
    ku = _linalg.dot([h[i] for i in xi], u)
    lw = _linalg.dot([h[i] for i in yi], w)
    u = [c / ku for c in u]
    w = [c / lw for c in w]
    big = max(max(abs(c) for c in u), max(abs(c) for c in w))
    eps = rho / (2 * big * (k + 1))
    sigma = facet.in_side
    # h(a_i, b_j) = s_i + t_j; sigma * (s_i + t_j) = eps * (j + 1/2 - i)
    a, b = [], []
    for i in range(1, k + 1):
        s = -sigma * eps * i
        a.append(tuple(p[xi[c]] + s * u[c] for c in range(len(xi))))
    for j in range(1, k + 1):
        t = sigma * eps * (Fraction(2 * j + 1, 2))
        b.append(tuple(p[yi[c]] + t * w[c] for c in range(len(yi))))
    return LadderWitness(partition.x_vars, partition.y_vars, tuple(a), tuple(b))


# --------------------------------------------------------------------------
# main entry


def analyze_set(d: SemilinearSet, partition: Partition, theory: str) -> StabilityVerdict:
    """Classify a quantifier-free set over ``partition.vars``."""
    if d.vars != partition.vars:
        d = d.embed(partition.vars)
    verdict = StabilityVerdict(STABLE, partition, theory, d)
    remaining = d
    while not remaining.is_empty():
        top = dimension(remaining)
        closure = equational_closure(remaining, theory)
        new = []
        for v in closure.components:
            if v.dim != top:
                continue
            d_v = combine("intersect", d, v.as_set())
            facets = essential_boundary(d_v, v, partition)
            bad = next((f for f in facets if f.split.tag == NON_SPLIT), None)
            if bad is not None:
                verdict.tag = UNSTABLE
                verdict.culprit = bad
                verdict.component = v
                verdict.pieces = []
                return verdict
            pieces, rem = grid_decompose(d_v, v, facets, partition, theory)
            verdict.trace.append(GridRecord(v.dim, dimension(rem), len(pieces)))
            new.extend(pieces)
        covered = SemilinearSet.make(d.vars, [c for p in new for c in p.to_set().cells])
        nxt = combine("difference", remaining, covered)
        if dimension(nxt) >= top:
            raise GridContractViolation("recursion measure did not decrease")
        verdict.pieces.extend(new)
        remaining = nxt
    return verdict


def analyze(problem: Problem) -> StabilityVerdict:
    d = eliminate_quantifiers(problem)
    return analyze_set(d, problem.partition, problem.theory)


def complement_pieces(piece: SpecialStablePiece) -> list[SpecialStablePiece]:
    """Special stable pieces whose union is the complement of ``piece``.

    Uses ``D^c = (Z^c ∩ X×Y) ∪ (X^c×Y^c) ∪ (X^c×Y) ∪ (X×Y^c)`` with
    ``Z^c = V^c ∪ W``.
    """
    vars = piece.V.vars
    full_v = AffineSubspace.full(vars)
    none = EquationalClosedSet.empty(vars)
    xc, yc = piece.X.complement(), piece.Y.complement()
    out = []
    if piece.V.rows:
        out.append(SpecialStablePiece(full_v, EquationalClosedSet(vars, (piece.V,)), piece.X, piece.Y))
    for comp in piece.W.components:
        out.append(SpecialStablePiece(comp, none, piece.X, piece.Y))
    out.append(SpecialStablePiece(full_v, none, xc, yc))
    out.append(SpecialStablePiece(full_v, none, xc, piece.Y))
    out.append(SpecialStablePiece(full_v, none, piece.X, yc))
    return [p for p in out if not p.X.is_empty() and not p.Y.is_empty()]
