import itertools

import pytest

from orbispace import battery as B
from orbispace import perm as P
from orbispace.groups.permgroup import PermGroup
from orbispace.scwol import (Cell, CellComplex, ComplexError, SimplicialAction,
                             barycentric_subdivision, build_complex, composable_pairs,
                             euler_characteristic, fixed_subcomplex, regularize_action,
                             simplicial_complex)


def brute_edges(X):
    return {(s, t) for s in X.ids for t in X.closure[s] if t != s}


def test_point_has_no_edges():
    X = B.point()
    assert len(X) == 1 and X.edges == ()


def test_segment_counts():
    X = B.path(1)
    assert len(X) == 3 and len(X.edges) == 2


def test_triangle_edges_by_dimension():
    X = B.simplex(2)
    assert len(X) == 7
    assert set(X.edges) == brute_edges(X)
    kinds = sorted((X.dim_of(s), X.dim_of(t)) for s, t in X.edges)
    assert kinds.count((2, 1)) == 3 and kinds.count((2, 0)) == 3 and kinds.count((1, 0)) == 6


def test_composable_pairs_small():
    assert composable_pairs(B.point()) == []
    assert composable_pairs(B.path(1)) == []
    two = simplicial_complex([(0, 1), (2, 3)])
    assert composable_pairs(two) == []
    pairs = composable_pairs(B.simplex(2))
    assert len(pairs) == 6
    for a, b, ab in pairs:
        assert b[1] == a[0] and ab == (b[0], a[1])


def test_subdivision_counts():
    assert B.path(1).counts() == [2, 1]
    assert barycentric_subdivision(B.path(1)).counts() == [3, 2]
    bd = barycentric_subdivision(B.simplex_boundary(2))
    assert bd.counts() == [6, 6] and euler_characteristic(bd) == 0
    sd = barycentric_subdivision(B.simplex(2))
    assert sd.counts() == [7, 12, 6] and euler_characteristic(sd) == 1


def test_euler_characteristic():
    assert euler_characteristic(B.point()) == 1
    assert euler_characteristic(B.cycle(4)) == 0
    assert euler_characteristic(B.simplex_boundary(3)) == 2


def test_bad_complexes_rejected():
    with pytest.raises(ComplexError):
        build_complex([("e", 1, ("a", "b"))])
    with pytest.raises(ComplexError):
        build_complex([("a", 0, ()), ("a", 0, ())])
    with pytest.raises(ComplexError):
        build_complex([("a", 0, ()), ("e", 2, ("a",))])


def test_segment_flip_is_regularized():
    X = B.path(1)
    G = B.cyclic(2)
    act = B.vertex_action(X, G)
    assert not act.is_without_inversion()
    Y, act2 = regularize_action(X, act)
    assert Y.counts() == [3, 2]
    assert act2.is_regular()
    g = G.generators[0]
    fixed = [c for c in Y.vertices if act2.image(c, g) == c]
    assert len(fixed) == 1


def test_regularize_leaves_good_actions_alone():
    X = B.simplex(2)
    triv = B.trivial_action(X, B.cyclic(3))
    assert regularize_action(X, triv)[0] == X
    H = B.cycle(6)
    refl = B.vertex_action(H, PermGroup.from_cycles(6, "(2 6)(3 5)"))
    Y, act = regularize_action(H, refl)
    assert Y == H and act.is_regular()


def test_fixed_subcomplexes_of_hexagon():
    H = B.cycle(6)
    refl = PermGroup.from_cycles(6, "(2 6)(3 5)")
    act = B.vertex_action(H, refl)
    fx = fixed_subcomplex(H, act, refl.generators[0])
    assert set(fx.ids) == {"0", "3"} and euler_characteristic(fx) == 2
    assert fixed_subcomplex(H, act, P.identity(6)) == H
    rot = B.cyclic(6)
    ract = B.vertex_action(H, rot)
    fr = fixed_subcomplex(H, ract, rot.generators[0])
    assert len(fr) == 0 and euler_characteristic(fr) == 0


def test_action_must_respect_faces():
    X = B.path(2)
    G = B.cyclic(2)
    bad = {"0": "1", "1": "0"}
    with pytest.raises((ComplexError, ValueError)):
        SimplicialAction.from_cell_maps(X, G, [bad])


def test_orbits_cover_all_cells():
    Y, act = B.platonic("tetrahedron")
    cells = list(itertools.chain.from_iterable(act.orbits()))
    assert sorted(cells) == sorted(Y.ids)
    assert act.is_faithful()


def test_cell_dataclass_roundtrip():
    c = Cell("x", 0, ())
    X = CellComplex((c,))
    assert X.cell("x") == c
