"""Exact geometry of semilinear sets.

A :class:`Cell` is a conjunction of linear constraints over a fixed ordered
tuple of variables; a :class:`SemilinearSet` is a finite union of cells.
Everything is computed with integers and ``Fraction``; emptiness is decided
by Fourier-Motzkin elimination honouring strictness.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence

from . import _fm, _linalg
from ._fm import EQ, GE, GT
from .formula import (
    FALSE, TRUE, And, Atom, Formula, LinearTerm, Or, format_rational, to_sexpr,
)

__all__ = [
    "Cell", "SemilinearSet", "AffineSubspace", "Hyperplane", "is_empty",
    "affine_hull", "dimension", "local_dimension", "combine", "equivalent",
    "sample_interior", "arrangement", "AmbientMismatch", "EmptyCellError",
]


class AmbientMismatch(ValueError):
    pass


class EmptyCellError(ValueError):
    pass


@lru_cache(maxsize=1 << 18)
def _feasible(cons: tuple) -> bool:
    return _fm.feasible(cons)


def _row_from_term(term: LinearTerm, index: Mapping[str, int], n: int) -> tuple:
    den = 1
    for _, c in term.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    den = den * term.const.denominator // gcd(den, term.const.denominator)
    row = [0] * (n + 1)
    for v, c in term.coeffs:
        if v not in index:
            raise AmbientMismatch(f"variable {v!r} is not in the ambient space")
        row[index[v]] = int(c * den)
    row[n] = int(term.const * den)
    return tuple(row)


def _term_from_row(row: Sequence[int], vars: Sequence[str]) -> LinearTerm:
    return LinearTerm.make({v: Fraction(c) for v, c in zip(vars, row) if c}, row[-1])


def con_from_atom(atom: Atom, vars: Sequence[str]):
    index = {v: i for i, v in enumerate(vars)}
    row = _row_from_term(atom.term, index, len(vars))
    if atom.rel == "=":
        return _fm.normalize(EQ, row)
    neg = tuple(-v for v in row)
    return _fm.normalize(GT if atom.rel == "<" else GE, neg)


def atom_from_con(con, vars: Sequence[str]) -> Atom:
    kind, row = con
    if kind == EQ:
        return Atom.make(_term_from_row(row, vars), "=")
    neg = tuple(-v for v in row)
    return Atom.make(_term_from_row(neg, vars), "<" if kind == GT else "<=")


# --------------------------------------------------------------------------
# cells


@dataclass(frozen=True)
class Cell:
    """Conjunction of constraints; ``cons`` is canonical and sorted."""
    vars: tuple[str, ...]
    cons: tuple = ()

    @classmethod
    def make(cls, vars: Sequence[str], cons: Iterable) -> "Cell":
        """Normalize and tighten.  Directly contradictory input gives the false cell."""
        vars = tuple(vars)
        norm = []
        for con in cons:
            c = _fm.normalize(*con)
            if c is False:
                return cls.false(vars)
            if c is not True:
                norm.append(c)
        t = _fm.tighten(norm)
        if t is None:
            return cls.false(vars)
        return cls(vars, tuple(sorted(set(t))))

    @classmethod
    def false(cls, vars: Sequence[str]) -> "Cell":
        vars = tuple(vars)
        return cls(vars, ((GT, (0,) * (len(vars) + 1)),))

    @property
    def is_false(self) -> bool:
        return len(self.cons) == 1 and not any(self.cons[0][1])

    @classmethod
    def full(cls, vars: Sequence[str]) -> "Cell":
        return cls(tuple(vars), ())

    @classmethod
    def from_atoms(cls, vars: Sequence[str], atoms: Iterable[Atom]) -> "Cell":
        return cls.make(vars, [con_from_atom(a, vars) for a in atoms])

    @property
    def n(self) -> int:
        return len(self.vars)

    def atoms(self) -> list[Atom]:
        return [atom_from_con(c, self.vars) for c in self.cons]

    @property
    def equations(self) -> list[Atom]:
        return [atom_from_con(c, self.vars) for c in self.cons if c[0] == EQ]

    @property
    def strict_ineqs(self) -> list[Atom]:
        return [atom_from_con(c, self.vars) for c in self.cons if c[0] == GT]

    @property
    def weak_ineqs(self) -> list[Atom]:
        return [atom_from_con(c, self.vars) for c in self.cons if c[0] == GE]

    def to_formula(self) -> Formula:
        if self.is_false:
            return FALSE
        atoms = self.atoms()
        if not atoms:
            return TRUE
        if len(atoms) == 1:
            return atoms[0]
        return And(tuple(atoms))

    def __str__(self) -> str:
        return to_sexpr(self.to_formula())

    def conj(self, other: "Cell") -> "Cell":
        if other.vars != self.vars:
            raise AmbientMismatch(f"{self.vars} vs {other.vars}")
        return Cell.make(self.vars, self.cons + other.cons)

    def add(self, cons: Iterable) -> "Cell":
        return Cell.make(self.vars, self.cons + tuple(cons))

    @cached_property
    def empty(self) -> bool:
        return self.is_false or not _feasible(self.cons)

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        vec = [Fraction(point[v]) for v in self.vars]
        return all(_fm.holds(c, vec) for c in self.cons)

    def holds_vec(self, vec: Sequence[Fraction]) -> bool:
        return all(_fm.holds(c, vec) for c in self.cons)

    def closure_holds_vec(self, vec: Sequence[Fraction]) -> bool:
        for kind, row in self.cons:
            if not _fm.holds((GE if kind == GT else kind, row), vec):
                return False
        return True

    @cached_property
    def implicit_equalities(self) -> tuple:
        """Rows of weak inequalities that hold with equality on the whole cell."""
        out = []
        for kind, row in self.cons:
            if kind == GE and not _feasible(tuple(sorted(set(self.cons + ((GT, row),))))):
                out.append(row)
        return tuple(out)

    @cached_property
    def hull_rows(self) -> tuple:
        return tuple(r for k, r in self.cons if k == EQ) + self.implicit_equalities

    @cached_property
    def dim(self) -> int:
        if self.empty:
            return -1
        return self.n - _linalg.rank(self.hull_rows, self.n)

    def support(self) -> set[str]:
        return {self.vars[i] for _, row in self.cons for i in range(self.n) if row[i]}

    def remap(self, new_vars: Sequence[str], index_map: Sequence[int]) -> "Cell":
        """Re-express over ``new_vars``; column ``i`` moves to ``index_map[i]``."""
        m = len(new_vars)
        cons = []
        for kind, row in self.cons:
            new = [0] * (m + 1)
            for i, c in enumerate(row[:-1]):
                if c:
                    new[index_map[i]] += c
            new[m] = row[-1]
            cons.append((kind, tuple(new)))
        return Cell.make(new_vars, cons)


def _cell_from_rows(vars, cons) -> Optional[Cell]:
    c = Cell.make(vars, cons)
    return None if c.empty else c


# --------------------------------------------------------------------------
# semilinear sets


@dataclass(frozen=True)
class SemilinearSet:
    """Finite union of cells over a common ordered ambient."""
    vars: tuple[str, ...]
    cells: tuple[Cell, ...] = ()

    @classmethod
    def make(cls, vars: Sequence[str], cells: Iterable[Optional[Cell]]) -> "SemilinearSet":
        vars = tuple(vars)
        keep = []
        for c in cells:
            if c is None:
                continue
            if c.vars != vars:
                raise AmbientMismatch(f"cell over {c.vars}, set over {vars}")
            if not c.empty:
                keep.append(c)
        return cls(vars, tuple(dict.fromkeys(keep)))

    @classmethod
    def empty_set(cls, vars: Sequence[str]) -> "SemilinearSet":
        return cls(tuple(vars), ())

    @classmethod
    def full(cls, vars: Sequence[str]) -> "SemilinearSet":
        return cls(tuple(vars), (Cell.full(vars),))

    @classmethod
    def from_atoms(cls, vars, atoms) -> "SemilinearSet":
        return cls.make(vars, [Cell.from_atoms(vars, atoms)])

    def is_empty(self) -> bool:
        return all(c.empty for c in self.cells)

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        vec = [Fraction(point[v]) for v in self.vars]
        return any(c.holds_vec(vec) for c in self.cells)

    def to_formula(self) -> Formula:
        if not self.cells:
            return FALSE
        if len(self.cells) == 1:
            return self.cells[0].to_formula()
        return Or(tuple(c.to_formula() for c in self.cells))

    def __str__(self) -> str:
        return to_sexpr(self.to_formula())

    def dimension(self) -> int:
        return dimension(self)

    def __or__(self, other):
        return combine("union", self, other)

    def __and__(self, other):
        return combine("intersect", self, other)

    def __sub__(self, other):
        return combine("difference", self, other)

    def __xor__(self, other):
        return combine("symdiff", self, other)

    def complement(self) -> "SemilinearSet":
        return SemilinearSet.make(self.vars, complement_cells(self.cells, self.vars))

    def restrict(self, vars: Sequence[str]) -> "SemilinearSet":
        """Drop ambient variables that no constraint mentions."""
        vars = tuple(vars)
        idx = [self.vars.index(v) for v in vars]
        out = []
        for c in self.cells:
            for _, row in c.cons:
                for i, v in enumerate(self.vars):
                    if row[i] and v not in vars:
                        raise AmbientMismatch(f"cell mentions {v!r}")
            cons = [(k, tuple(row[i] for i in idx) + (row[-1],)) for k, row in c.cons]
            out.append(Cell.make(vars, cons))
        return SemilinearSet.make(vars, out)

    def embed(self, vars: Sequence[str]) -> "SemilinearSet":
        """Re-express over a larger (or reordered) ambient by variable name."""
        vars = tuple(vars)
        pos = {v: i for i, v in enumerate(vars)}
        imap = [pos[v] for v in self.vars]
        return SemilinearSet.make(vars, [c.remap(vars, imap) for c in self.cells])


def intersect_cells(a: Sequence[Cell], b: Sequence[Cell]) -> list[Cell]:
    out = []
    for c in a:
        for d in b:
            e = c.conj(d)
            if not e.empty:
                out.append(e)
    return list(dict.fromkeys(out))


def complement_cell(cell: Cell) -> list[Cell]:
    """Disjoint cells covering the complement of one cell."""
    out = []
    prefix: list = []
    for con in cell.cons:
        for neg in _fm.negate(con):
            if neg is False:
                continue
            cons = list(prefix) + ([] if neg is True else [neg])
            c = _cell_from_rows(cell.vars, cons)
            if c is not None:
                out.append(c)
        prefix.append(con)
    return out


def complement_cells(cells: Sequence[Cell], vars: Sequence[str]) -> list[Cell]:
    acc = [Cell.full(vars)]
    for c in cells:
        acc = intersect_cells(acc, complement_cell(c))
        if not acc:
            break
    return acc


# --------------------------------------------------------------------------
# affine subspaces and hyperplanes


def _canon_rows(rows: Sequence[Sequence], n: int) -> Optional[tuple]:
    """RREF with integer rows; ``None`` if inconsistent."""
    if not rows:
        return ()
    red, piv = _linalg.rref(rows, n)
    if len(red) > len(piv):
        return None
    return tuple(_linalg.integerize(r) for r in red)


@dataclass(frozen=True)
class AffineSubspace:
    """``{p : row . (p, 1) == 0 for every row}``; rows in canonical echelon form."""
    vars: tuple[str, ...]
    rows: tuple = ()

    @classmethod
    def from_rows(cls, vars: Sequence[str], rows: Iterable[Sequence]) -> Optional["AffineSubspace"]:
        vars = tuple(vars)
        canon = _canon_rows(list(rows), len(vars))
        return None if canon is None else cls(vars, canon)

    @classmethod
    def full(cls, vars):
        return cls(tuple(vars), ())

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def dim(self) -> int:
        return self.n - len(self.rows)

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, v in enumerate(r) if v) for r in self.rows]

    def as_cell(self) -> Cell:
        return Cell.make(self.vars, [(EQ, r) for r in self.rows])

    def as_set(self) -> SemilinearSet:
        return SemilinearSet.make(self.vars, [self.as_cell()])

    @property
    def equations(self) -> list[Atom]:
        return [atom_from_con((EQ, r), self.vars) for r in self.rows]

    def to_formula(self) -> Formula:
        return self.as_cell().to_formula()

    def __str__(self):
        return to_sexpr(self.to_formula())

    def contains_vec(self, vec) -> bool:
        return all(_linalg.dot(r[:-1], vec) + r[-1] == 0 for r in self.rows)

    def contains(self, other: "AffineSubspace") -> bool:
        """``other`` is a subset of ``self`` (``other`` assumed non-empty)."""
        if not self.rows:
            return True
        base = list(other.rows)
        r0 = _linalg.rank(base, None) if base else 0
        for r in self.rows:
            if _linalg.rank(base + [list(r)], None) != r0:
                return False
        return True

    def reduce(self, row: Sequence) -> tuple:
        """Canonical representative of ``row`` modulo the equations (pivots eliminated)."""
        r = [Fraction(v) for v in row]
        for er, p in zip(self.rows, self.pivots):
            if r[p]:
                f = r[p] / er[p]
                r = [a - f * b for a, b in zip(r, er)]
        return _linalg.integerize(r)

    def vanishes_on(self, row: Sequence) -> bool:
        """The hyperplane ``row = 0`` contains this subspace."""
        return not any(self.reduce(row)[:-1]) and self.reduce(row)[-1] == 0


@dataclass(frozen=True)
class Hyperplane:
    """``row . (p, 1) == 0``; canonical: coprime integers, first coefficient positive."""
    vars: tuple[str, ...]
    row: tuple

    @classmethod
    def make(cls, vars, row) -> "Hyperplane":
        r = _linalg.canonical_sign(_linalg.integerize(row), len(vars))
        if not any(r[:-1]):
            raise ValueError("hyperplane needs a nonzero normal")
        return cls(tuple(vars), r)

    def normal(self, names: Sequence[str]) -> tuple[int, ...]:
        pos = {v: i for i, v in enumerate(self.vars)}
        return tuple(self.row[pos[v]] for v in names)

    @property
    def offset(self) -> Fraction:
        """``c`` in ``k.x + l.y = c``."""
        return Fraction(-self.row[-1])

    def value(self, vec) -> Fraction:
        return _linalg.dot(self.row[:-1], vec) + self.row[-1]

    def to_atom(self) -> Atom:
        return atom_from_con((EQ, self.row), self.vars)

    def __str__(self):
        return to_sexpr(self.to_atom())


# --------------------------------------------------------------------------
# operations


def is_empty(cell: Cell) -> bool:
    """No rational point satisfies the cell."""
    return cell.empty


def affine_hull(cell: Cell) -> AffineSubspace:
    """Smallest affine subspace containing a non-empty cell."""
    if cell.empty:
        raise EmptyCellError(f"empty cell {cell}")
    return AffineSubspace.from_rows(cell.vars, cell.hull_rows)


def dimension(s: SemilinearSet) -> int:
    """Max dimension of the non-empty cells; -1 for the empty set."""
    return max((c.dim for c in s.cells), default=-1)


def local_dimension(s: SemilinearSet, point: Mapping[str, Fraction]) -> int:
    """Max dimension over cells whose topological closure contains ``point``."""
    vec = [Fraction(point[v]) for v in s.vars]
    best = -1
    for c in s.cells:
        if not c.empty and c.closure_holds_vec(vec):
            best = max(best, c.dim)
    return best


def combine(op: str, a: SemilinearSet, b: SemilinearSet) -> SemilinearSet:
    if a.vars != b.vars:
        raise AmbientMismatch(f"{a.vars} vs {b.vars}")
    if op == "union":
        return SemilinearSet.make(a.vars, a.cells + b.cells)
    if op == "intersect":
        return SemilinearSet.make(a.vars, intersect_cells(a.cells, b.cells))
    if op == "difference":
        acc = list(a.cells)
        for c in b.cells:
            if not acc:
                break
            acc = intersect_cells(acc, complement_cell(c))
        return SemilinearSet.make(a.vars, acc)
    if op == "symdiff":
        return combine("union", combine("difference", a, b), combine("difference", b, a))
    raise ValueError(f"unknown operation {op!r}")


def subset(a: SemilinearSet, b: SemilinearSet) -> bool:
    return combine("difference", a, b).is_empty()


def equivalent(a: SemilinearSet, b: SemilinearSet) -> bool:
    if a.vars != b.vars:
        raise AmbientMismatch(f"{a.vars} vs {b.vars}")
    return subset(a, b) and subset(b, a)


def interior_vec(cell: Cell) -> list[Fraction]:
    if cell.empty:
        raise EmptyCellError(f"empty cell {cell}")
    implicit = set(cell.implicit_equalities)
    cons = []
    for kind, row in cell.cons:
        if kind == GE:
            cons.append((EQ if row in implicit else GT, row))
        else:
            cons.append((kind, row))
    pt = _fm.solve(cons, cell.n)
    assert pt is not None
    return pt


def sample_interior(cell: Cell) -> dict[str, Fraction]:
    """A point of the relative interior of a non-empty cell."""
    return dict(zip(cell.vars, interior_vec(cell)))


def _split(cells: list, row: tuple) -> list:
    out = []
    neg = tuple(-v for v in row)
    for signs, cell in cells:
        for s, con in ((-1, (GT, neg)), (0, (EQ, row)), (1, (GT, row))):
            c = cell.add([con])
            if not c.empty:
                out.append((signs + (s,), c))
    return out


def arrangement_signed(rows: Sequence[tuple], carrier: Cell) -> list[tuple[tuple, Cell]]:
    """Non-empty sign-condition cells of ``rows`` inside ``carrier``, with sign vectors."""
    cells = [((), carrier)] if not carrier.empty else []
    for row in rows:
        cells = _split(cells, tuple(row))
    return cells


def arrangement(hyperplanes: Sequence[Hyperplane], carrier) -> list[Cell]:
    """Cells of the hyperplane arrangement restricted to ``carrier``.

    ``carrier`` may be an :class:`AffineSubspace` or a :class:`Cell`.  The
    returned cells are pairwise disjoint and cover the carrier.
    """
    if isinstance(carrier, AffineSubspace):
        carrier = carrier.as_cell()
    for h in hyperplanes:
        if h.vars != carrier.vars:
            raise AmbientMismatch(f"{h.vars} vs {carrier.vars}")
    return [c for _, c in arrangement_signed([h.row for h in hyperplanes], carrier)]


def format_point(point: Mapping[str, Fraction]) -> str:
    return "(" + ", ".join(f"{k}={format_rational(v)}" for k, v in point.items()) + ")"
