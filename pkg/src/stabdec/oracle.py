"""Brute-force checks that do not rely on the decision procedure.

``ladder_exists`` searches for a half-graph of a fixed length by choosing a
cell of ``D`` (for ``i <= j``) or of its complement (for ``i > j``) for each
pair and testing joint feasibility of the renamed constraints.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import _fm
from .formula import DLO, Partition
from .equational import is_dlo_row
from .polyhedra import SemilinearSet, combine, complement_cells
from .stability import LadderWitness, SpecialStablePiece

DEFAULT_BUDGET = 200_000


class ResourceLimit(RuntimeError):
    """The search exceeded its node budget without an answer."""


def _pair_order(k: int) -> list[tuple[int, int]]:
    return sorted(((i, j) for i in range(k) for j in range(k)),
                  key=lambda p: (max(p), p[0] != p[1], p))


def ladder_exists(d: SemilinearSet, partition: Partition, k: int,
                  budget: int = DEFAULT_BUDGET) -> Optional[LadderWitness]:
    """A half-graph of length ``k`` in ``d``, or None if there is none."""
    if k < 1:
        raise ValueError("ladder length must be positive")
    if d.vars != partition.vars:
        d = d.embed(partition.vars)
    nx, ny = len(partition.x_vars), len(partition.y_vars)
    pos = {n: i for i, n in enumerate(d.vars)}
    n = k * (nx + ny)

    def index_map(i, j):
        m = [0] * len(d.vars)
        for c, name in enumerate(partition.x_vars):
            m[pos[name]] = i * nx + c
        for c, name in enumerate(partition.y_vars):
            m[pos[name]] = k * nx + j * ny + c
        return m

    inside = [c for c in d.cells if not c.empty]
    outside = [c for c in complement_cells(inside, d.vars) if not c.empty]
    names = tuple(f"_{i}" for i in range(n))
    pairs = _pair_order(k)
    options = []
    for i, j in pairs:
        src = inside if i <= j else outside
        m = index_map(i, j)
        options.append([c.remap(names, m).cons for c in src])

    nodes = 0
    found = None

    def search(depth, cons):
        nonlocal nodes, found
        if depth == len(options):
            found = cons
            return True
        for extra in options[depth]:
            nodes += 1
            if nodes > budget:
                raise ResourceLimit(f"ladder search for k={k} exceeded {budget} nodes")
            new = _fm.tighten(list(cons) + list(extra))
            if new is None or not _fm.feasible(new):
                continue
            if search(depth + 1, tuple(new)):
                return True
        return False

    if not search(0, ()):
        return None
    vec = _fm.solve(list(found), n)
    a = tuple(tuple(vec[i * nx + c] for c in range(nx)) for i in range(k))
    b = tuple(tuple(vec[k * nx + j * ny + c] for c in range(ny)) for j in range(k))
    w = LadderWitness(partition.x_vars, partition.y_vars, a, b)
    assert verify_ladder(d, w)
    return w


def verify_ladder(d: SemilinearSet, w: LadderWitness) -> bool:
    """Every pair (a_i, b_j) is in ``d`` exactly when ``i <= j``."""
    return all(d.holds(w.point(i, j)) == (i <= j)
               for i in range(w.k) for j in range(w.k))


@dataclass(frozen=True)
class DecompositionReport:
    equivalent: bool
    well_formed: bool
    inside: bool

    @property
    def ok(self) -> bool:
        return self.equivalent and self.well_formed and self.inside


def _piece_well_formed(p: SpecialStablePiece, partition: Partition, theory: Optional[str]) -> bool:
    vars = partition.vars
    if p.V.vars != vars or p.W.vars != vars:
        return False
    if p.X.vars != partition.x_vars or p.Y.vars != partition.y_vars:
        return False
    subs = (p.V,) + tuple(p.W.components)
    if any(w.vars != vars or not p.V.contains(w) or w == p.V for w in p.W.components):
        return False
    if theory == DLO:
        if not all(is_dlo_row(r) for s in subs for r in s.rows):
            return False
        for s in (p.X, p.Y):
            if not all(is_dlo_row(r) for c in s.cells for _, r in c.cons):
                return False
    return True


def verify_decomposition(d: SemilinearSet, pieces: Sequence[SpecialStablePiece],
                         partition: Partition, theory: Optional[str] = None) -> DecompositionReport:
    """Check that the pieces are well formed, lie inside ``d`` and have union ``d``."""
    if d.vars != partition.vars:
        d = d.embed(partition.vars)
    sets = [p.to_set() for p in pieces]
    union = SemilinearSet.make(d.vars, [c for s in sets for c in s.cells])
    inside = all(combine("difference", s, d).is_empty() for s in sets)
    same = inside and combine("difference", d, union).is_empty()
    formed = all(_piece_well_formed(p, partition, theory) for p in pieces)
    return DecompositionReport(same, formed, inside)
