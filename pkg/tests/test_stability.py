import pytest
from hypothesis import given, settings, strategies as st

from stabdec.equational import NON_SPLIT, equational_closure, is_dlo_row
from stabdec.formula import DLO, DOAG, Partition
from stabdec.oracle import ladder_exists, verify_decomposition, verify_ladder
from stabdec.polyhedra import AffineSubspace, Cell, SemilinearSet, dimension, equivalent
from stabdec.stability import (
    UNSTABLE, analyze, analyze_set, complement_pieces, essential_boundary,
    grid_decompose, make_ladder,
)

from conftest import problem, qf

XY = ("x1", "y1")
P11 = Partition(("x1",), ("y1",))
PLANE = AffineSubspace.full(XY)


def test_boundary_half_plane():
    (f,) = essential_boundary(qf("(< y1 x1)"), PLANE, P11)
    assert f.hyperplane.row == (1, -1, 0)
    assert f.in_side == 1  # D lies where x1 - y1 > 0
    assert f.split.tag == NON_SPLIT


def test_boundary_ignores_removed_line():
    assert essential_boundary(qf("(not (= x1 y1))"), PLANE, P11) == []


def test_boundary_box():
    facets = essential_boundary(qf("(and (< 0 x1) (< x1 1) (< 0 y1) (< y1 1))"), PLANE, P11)
    assert len(facets) == 4
    assert all(f.split.is_split for f in facets)


def test_boundary_dimension_mismatch():
    with pytest.raises(ValueError):
        essential_boundary(qf("(= x1 y1)"), PLANE, P11)


def test_grid_two_boxes():
    d = qf("(or (and (< 0 x1) (< x1 2) (< 0 y1) (< y1 1)) (and (< 0 x1) (< x1 1) (< 1 y1) (< y1 2)))")
    facets = essential_boundary(d, PLANE, P11)
    pieces, rem = grid_decompose(d, PLANE, facets, P11, DOAG)
    want = [
        ("(and (< 0 x1) (< x1 1))", "(and (< 0 y1) (< y1 1))"),
        ("(and (< 0 x1) (< x1 1))", "(and (< 1 y1) (< y1 2))"),
        ("(and (< 1 x1) (< x1 2))", "(and (< 0 y1) (< y1 1))"),
    ]
    assert len(pieces) == 3
    for xs, ys in want:
        assert sum(equivalent(p.X, qf(xs, ("x1",))) and equivalent(p.Y, qf(ys, ("y1",)))
                   for p in pieces) == 1
    assert all(p.W.components == () for p in pieces)
    assert equivalent(rem, qf("(and (= x1 1) (< 0 y1) (< y1 1))"))
    assert dimension(rem) == 1


def test_grid_punctured_plane():
    d = qf("(not (= x1 y1))")
    (piece,), rem = grid_decompose(d, PLANE, [], P11, DOAG)
    assert [str(c) for c in piece.W.components] == ["(= x1 y1)"]
    assert str(piece.X) == str(piece.Y) == "true"
    assert rem.is_empty()


def test_grid_quadrant():
    d = qf("(and (< 0 x1) (< 0 y1))")
    (piece,), rem = grid_decompose(d, PLANE, essential_boundary(d, PLANE, P11), P11, DOAG)
    assert piece.W.components == () and rem.is_empty()


def test_grid_rejects_nonsplit():
    d = qf("(< y1 x1)")
    with pytest.raises(ValueError):
        grid_decompose(d, PLANE, essential_boundary(d, PLANE, P11), P11, DOAG)


@pytest.mark.parametrize("body, k", [("(< y1 x1)", 3), ("(< 0 (+ x1 y1))", 2), ("(< 0 (+ x1 y1))", 1)])
def test_make_ladder(body, k):
    d = qf(body)
    (f,) = essential_boundary(d, PLANE, P11)
    w = make_ladder(f, PLANE, k, P11)
    assert w.k == k and verify_ladder(d, w)


def test_make_ladder_needs_nonsplit():
    d = qf("(< 0 x1)")
    (f,) = essential_boundary(d, PLANE, P11)
    with pytest.raises(ValueError):
        make_ladder(f, PLANE, 3, P11)


def test_analyze_order_unstable():
    v = analyze(problem("doag", "x1", "y1", "(< y1 x1)"))
    assert v.tag == UNSTABLE
    for k in (1, 5, 10, 25):
        assert verify_ladder(v.D, v.witness(k))


def test_analyze_pure_x_rewrite():
    p = problem("doag", "x1 x2", "y1", "(and (= x2 (+ x1 y1)) (< y1 x1))")
    v = analyze(p)
    assert v.stable
    (piece,) = v.pieces
    assert str(piece.V) == "(= (+ x1 y1) x2)"
    assert str(piece.X) == "(< x2 (* 2 x1))"
    assert str(piece.Y) == "true"
    assert verify_decomposition(v.D, v.pieces, p.partition, p.theory).ok
    assert ladder_exists(v.D, p.partition, 3) is None


def test_analyze_staircase():
    p = problem("dlo", "x1", "y1", "(or (= x1 y1) (and (< x1 0) (< 0 y1)))")
    v = analyze(p)
    assert v.stable and len(v.pieces) == 2
    assert verify_decomposition(v.D, v.pieces, p.partition, DLO).ok
    # stable yet with a short half-graph: the oracle's k <= 3 cutoff is only a heuristic
    assert ladder_exists(v.D, p.partition, 3) is not None
    assert ladder_exists(v.D, p.partition, 4) is None


def test_analyze_points():
    p = problem("doag", "x1", "y1", "(or (and (= x1 0) (= y1 1)) (and (= x1 2) (= y1 2)))")
    v = analyze(p)
    assert v.stable and len(v.pieces) == 2
    assert all(piece.V.dim == 0 for piece in v.pieces)


def test_analyze_empty():
    v = analyze_set(SemilinearSet.empty_set(XY), P11, DOAG)
    assert v.stable and v.pieces == []


def test_unstable_found_in_lower_component():
    # stable open part plus an unstable piece living on the line x1 = 0 in (x1, x2; y1)
    p = problem("doag", "x1 x2", "y1", "(or (and (< 0 x1) (< 0 y1)) (and (= x1 0) (< y1 x2)))")
    v = analyze(p)
    assert not v.stable and v.component.dim == 2
    assert verify_ladder(v.D, v.witness(6))


def test_grid_trace_contract():
    v = analyze(problem("dlo", "x1", "y1", "(or (= x1 y1) (and (< x1 0) (< 0 y1)))"))
    assert v.trace and all(r.remainder_dim < r.component_dim for r in v.trace)


def test_complement_pieces():
    v = analyze(problem("doag", "x1 x2", "y1", "(and (= x2 (+ x1 y1)) (< y1 x1))"))
    (piece,) = v.pieces
    parts = complement_pieces(piece)
    union = SemilinearSet.make(v.D.vars, [c for q in parts for c in q.to_set().cells])
    assert equivalent(union, piece.to_set().complement())


def test_complement_of_stable_is_stable():
    d = qf("(or (and (< x1 0) (< y1 0)) (= x1 y1))")
    assert analyze_set(d, P11, DOAG).stable
    assert analyze_set(d.complement(), P11, DOAG).stable
    assert not analyze_set(qf("(<= y1 x1)").complement(), P11, DOAG).stable


def test_closure_of_w():
    v = analyze(problem("dlo", "x1", "y1", "(not (= x1 y1))"))
    (piece,) = v.pieces
    assert piece.W == equational_closure(qf("(= x1 y1)"), DLO)


coef = st.integers(-2, 2)


@st.composite
def sets_3d(draw):
    vars = ("x1", "x2", "y1")
    cells = []
    for _ in range(draw(st.integers(1, 3))):
        cons = [(draw(st.sampled_from([0, 1, 2])), tuple(draw(coef) for _ in range(4)))
                for _ in range(draw(st.integers(1, 3)))]
        cells.append(Cell.make(vars, cons))
    return SemilinearSet.make(vars, cells)


@settings(max_examples=40, deadline=None)
@given(sets_3d(), st.sampled_from([DLO, DOAG]))
def test_verdicts_are_certified(d, theory):
    part = Partition(("x1", "x2"), ("y1",))
    if theory == DLO:
        # keep only DLO-shaped rows so the DLO closure applies
        cells = [c for c in d.cells if all(is_dlo_row(r) for _, r in c.cons)]
        d = SemilinearSet.make(d.vars, cells)
    v = analyze_set(d, part, theory)
    if v.stable:
        assert verify_decomposition(v.D, v.pieces, part, theory).ok
    else:
        assert verify_ladder(v.D, v.witness(7))
