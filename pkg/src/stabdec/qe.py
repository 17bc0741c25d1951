"""Quantifier elimination for DLO and DOAG.

Formulas are pushed into disjunctive normal form over linear constraints and
existential blocks are projected cell by cell: an equation mentioning the
bound variable is solved and substituted, otherwise lower and upper bounds
are combined pairwise.  Universal blocks go through double negation.  DLO is
the special case with unit coefficients; the projection keeps DLO atoms
DLO-shaped.
"""
from __future__ import annotations

from typing import Sequence

from . import _fm
from .formula import (
    And, Atom, Exists, Forall, Formula, FormulaError, Not, Or, Problem, Truth,
    bound_vars, free_vars,
)
from .polyhedra import (
    Cell, SemilinearSet, complement_cell, complement_cells, con_from_atom,
    intersect_cells,
)

__all__ = ["Cell", "SemilinearSet", "to_cells", "eliminate_quantifiers", "project", "simplify"]


def _atom_cells(atom: Atom, vars, negated: bool) -> list[Cell]:
    con = con_from_atom(atom, vars)
    if isinstance(con, bool):
        return [Cell.full(vars)] if con != negated else []
    options = _fm.negate(con) if negated else [con]
    out = []
    for o in options:
        if o is True:
            out.append(Cell.full(vars))
        elif o is not False:
            c = Cell.make(vars, [o])
            if not c.empty:
                out.append(c)
    return out


def _dnf(f: Formula, vars: tuple, negated: bool) -> list[Cell]:
    if isinstance(f, Atom):
        return _atom_cells(f, vars, negated)
    if isinstance(f, Truth):
        return [Cell.full(vars)] if f.value != negated else []
    if isinstance(f, Not):
        return _dnf(f.arg, vars, not negated)
    if isinstance(f, (And, Or)):
        conjunctive = isinstance(f, And) != negated
        if conjunctive:
            acc = [Cell.full(vars)]
            for a in f.args:
                acc = intersect_cells(acc, _dnf(a, vars, negated))
                if not acc:
                    break
            return acc
        out: list[Cell] = []
        for a in f.args:
            out.extend(_dnf(a, vars, negated))
        return list(dict.fromkeys(out))
    if isinstance(f, (Exists, Forall)):
        universal = isinstance(f, Forall)
        cells = _dnf(f.body, vars, universal)
        for v in f.vars:
            cells = project(cells, vars.index(v))
        # for a universal block `cells` now describes the negation
        if universal != negated:
            return complement_cells(cells, vars)
        return cells
    raise FormulaError(f"not a formula: {f!r}")


def project(cells: Sequence[Cell], j: int) -> list[Cell]:
    """Existentially project column ``j`` out of every cell (column stays, zeroed)."""
    out = []
    for c in cells:
        if c.empty:
            continue
        cons = _fm.eliminate(list(c.cons), j)
        if cons is None:
            continue
        d = Cell.make(c.vars, cons)
        if not d.empty:
            out.append(d)
    return list(dict.fromkeys(out))


def to_cells(formula: Formula, vars: Sequence[str]) -> SemilinearSet:
    """Disjunctive normal form of a quantifier-free formula, empty cells removed."""
    if bound_vars(formula):
        raise FormulaError("to_cells expects a quantifier-free formula")
    vars = tuple(vars)
    return SemilinearSet.make(vars, _dnf(formula, vars, False))


def _drop_redundant(cell: Cell) -> Cell:
    cons = list(cell.cons)
    i = 0
    while i < len(cons):
        rest = cons[:i] + cons[i + 1:]
        base = Cell.make(cell.vars, rest)
        implied = all(
            base.add([neg]).empty
            for neg in _fm.negate(cons[i]) if neg is not True and neg is not False
        )
        if implied:
            cons = rest
        else:
            i += 1
    return Cell.make(cell.vars, cons)


def _contained(c: Cell, d: Cell) -> bool:
    return not intersect_cells([c], complement_cell(d))


def simplify(s: SemilinearSet) -> SemilinearSet:
    """Remove implied constraints and cells contained in other cells."""
    cells = list(dict.fromkeys(_drop_redundant(c) for c in s.cells if not c.empty))
    keep: list[Cell] = []
    for i, c in enumerate(cells):
        if any(_contained(c, d) for d in keep + cells[i + 1:]):
            continue
        keep.append(c)
    return SemilinearSet.make(s.vars, keep)


def eliminate_quantifiers(problem: Problem) -> SemilinearSet:
    """Quantifier-free cell union over the partition variables defining the same set."""
    target = problem.partition.vars
    extra = sorted(bound_vars(problem.formula) - set(target))
    work = tuple(target) + tuple(extra)
    cells = _dnf(problem.formula, work, False)
    s = SemilinearSet.make(work, cells)
    if extra:
        s = s.restrict(target)
    return simplify(s)


def eliminate_formula(formula: Formula, vars: Sequence[str]) -> SemilinearSet:
    """Like :func:`eliminate_quantifiers` for a bare formula over ``vars``."""
    vars = tuple(vars)
    missing = free_vars(formula) - set(vars)
    if missing:
        raise FormulaError(f"free variables outside the ambient: {sorted(missing)}")
    extra = sorted(bound_vars(formula) - set(vars))
    work = vars + tuple(extra)
    s = SemilinearSet.make(work, _dnf(formula, work, False))
    if extra:
        s = s.restrict(vars)
    return simplify(s)
