from fractions import Fraction

import pytest

from stabdec.equational import (
    NON_SPLIT, PURE_X, PURE_Y, DegenerateHyperplane, dlo_classes, equational_closure,
    irreducible_components, split_modulo,
)
from stabdec.formula import DLO, DOAG, Partition
from stabdec.polyhedra import AffineSubspace, Hyperplane, SemilinearSet

from conftest import qf

XY = ("x1", "y1")
XXY = ("x1", "x2", "y1")


def test_closure_examples():
    assert equational_closure(qf("(< y1 x1)"), DOAG).components == (AffineSubspace.full(XY),)
    z = equational_closure(qf("(and (= x1 y1) (< 0 x1))"), DOAG)
    assert [str(c) for c in z.components] == ["(= x1 y1)"]
    z = equational_closure(qf("(and (<= x1 y1) (<= y1 x1))", theory="dlo"), DLO)
    assert [str(c) for c in z.components] == ["(= x1 y1)"]


def test_components():
    z = equational_closure(qf("(or (= x1 0) (= y1 0))"), DOAG)
    assert len(irreducible_components(z)) == 2
    z = equational_closure(qf("(or (and (= x1 0) (= y1 0)) (= x1 0))"), DOAG)
    assert [str(c) for c in irreducible_components(z)] == ["(= x1 0)"]
    full = equational_closure(SemilinearSet.full(XY), DOAG)
    assert [c.rows for c in irreducible_components(full)] == [()]


def test_dlo_closure_stays_dlo():
    # (0,1) x {1/2}: the pin is an entailed DLO equation, the strict bounds are not
    z = equational_closure(qf("(and (< 0 x1) (< x1 1) (= (* 2 y1) 1))", theory="doag"), DLO)
    (v,) = z.components
    assert dlo_classes(v) == ([["y1"]], {"y1": Fraction(1, 2)})


def test_dlo_closure_misses_doag_equation():
    # x1 + y1 = 0 is not expressible in DLO: closure of the segment is the plane
    s = qf("(and (= (+ x1 y1) 0) (< 0 x1))")
    assert equational_closure(s, DLO).components == (AffineSubspace.full(XY),)
    assert equational_closure(s, DOAG).dim == 1


def test_split_plane_nonsplit():
    r = split_modulo(Hyperplane.make(XY, (1, -1, 0)), AffineSubspace.full(XY), Partition(("x1",), ("y1",)))
    assert r.tag == NON_SPLIT and r.u == (1,) and r.v == (1,)


def test_split_pure_x_rewrite():
    v = AffineSubspace.from_rows(XXY, [(-1, 1, -1, 0)])
    r = split_modulo(Hyperplane.make(XXY, (1, 0, -1, 0)), v, Partition(("x1", "x2"), ("y1",)))
    assert r.tag == PURE_X
    # on V: y1 < x1  <=>  x2 < 2 x1
    assert r.rewritten.row == (2, -1, 0) and r.rewritten.offset == 0


def test_split_tied_nonsplit():
    v = AffineSubspace.from_rows(XXY, [(1, -1, 0, 0)])
    r = split_modulo(Hyperplane.make(XXY, (-1, 0, 1, 0)), v, Partition(("x1", "x2"), ("y1",)))
    assert r.tag == NON_SPLIT
    assert r.u[0] == r.u[1] != 0 and r.v != (0,)


def test_split_pure_y():
    vars = ("x1", "y1", "y2")
    v = AffineSubspace.from_rows(vars, [(1, -1, -1, 0)])
    r = split_modulo(Hyperplane.make(vars, (1, -1, 0, 0)), v, Partition(("x1",), ("y1", "y2")))
    assert r.tag == PURE_Y and r.rewritten.row == (0, 1, 0)  # x1 - y1 = y2 on V


def test_split_degenerate():
    v = AffineSubspace.from_rows(XY, [(1, -1, 0)])
    with pytest.raises(DegenerateHyperplane):
        split_modulo(Hyperplane.make(XY, (1, -1, 0)), v, Partition(("x1",), ("y1",)))
