import pytest

from orbispace import battery as B
from orbispace import perm as P
from orbispace.cog import ComplexOfGroups
from orbispace.groups.coset import todd_coxeter
from orbispace.groups.homs import Budget, hom_search
from orbispace.groups.snf import AbelianInvariants, abelianization
from orbispace.groups.words import Presentation, simplify
from orbispace.pi1 import (DecoratedLoop, DisconnectedBase, evaluate_loop, loop_rewrites,
                           pi1_presentation, svk_pushout)
from orbispace.scwol import simplicial_complex


def order(pres, cap=10**5):
    t = todd_coxeter(simplify(pres).presentation, (), cap)
    return t.cosets if t else None


def test_simplex_is_simply_connected():
    pp = pi1_presentation(ComplexOfGroups.trivial(B.simplex(2)))
    assert order(pp.presentation) == 1


def test_segment_z2_z3():
    C = B.segment_of_groups(B.cyclic(2), B.cyclic(3))
    pp = pi1_presentation(C)
    assert abelianization(pp.presentation) == AbelianInvariants((6,))
    cons = [pp.local_words(c) for c in ("0", "1")]
    h = hom_search(pp.presentation, cons, 6)
    assert h and h.image_group().order == 6
    assert order(pp.presentation) is None  # the free product is infinite


def test_mapping_torus_semidirect():
    Z3 = B.cyclic(3)
    inv = [P.inv(Z3.generators[0])]
    ab = abelianization(pi1_presentation(B.mapping_torus(Z3, inv)).presentation)
    assert ab == AbelianInvariants((), 1)
    ab = abelianization(pi1_presentation(B.mapping_torus(Z3, Z3.generators)).presentation)
    assert ab == AbelianInvariants((3,), 1)


def test_disconnected_base_rejected():
    X = simplicial_complex([(0, 1), (2, 3)])
    with pytest.raises(DisconnectedBase):
        pi1_presentation(ComplexOfGroups.trivial(X))


def test_large_local_group_uses_generators():
    S4 = B.symmetric(4)
    C = ComplexOfGroups(B.point(), {"p": S4}, {})
    pp = pi1_presentation(C)
    assert {d[0] for d in pp.dictionary} == {"generator"}
    assert order(pp.presentation) == 24
    small = pi1_presentation(ComplexOfGroups(B.point(), {"p": B.symmetric(3)}, {}))
    assert {d[0] for d in small.dictionary} == {"element"}
    assert order(small.presentation) == 6


def test_evaluate_trivial_loops():
    C = B.segment_of_groups(B.cyclic(2), B.cyclic(3))
    pp = pi1_presentation(C, "0")
    assert evaluate_loop(pp, DecoratedLoop("0", P.identity(2))) == ()
    g = B.cyclic(2).generators[0]
    assert evaluate_loop(pp, DecoratedLoop("0", g)) == pp.element_word("0", g)


def test_rewrites_keep_value():
    C = B.triangle_orbifold_cog(3)
    pp = pi1_presentation(C)
    bp = pp.basepoint
    X = C.base
    # out along an edge and back, with group elements along the way
    a = next(e for e in X.edges if e[1] == bp)
    g = C.group(a[0]).elements[-1]
    h = C.psi_apply(a, g)
    loop = DecoratedLoop(bp, C.identity(bp), (((a, -1), g), ((a, 1), P.inv(h))))
    homs = [hom_search(pp.presentation, [pp.local_words(c) for c in X.ids], 6)]
    assert homs[0]
    base = [hm(evaluate_loop(pp, loop)) for hm in homs]
    for new in loop_rewrites(C, loop):
        assert [hm(evaluate_loop(pp, new)) for hm in homs] == base


def test_svk_free_product():
    P1 = Presentation.from_text("generators a\na^2")
    P2 = Presentation.from_text("generators b\nb^3")
    P0 = Presentation(())
    G = svk_pushout(P1, P2, P0, [], [])
    assert abelianization(G) == AbelianInvariants((6,))


def test_svk_absorbs_identity_side():
    P1 = Presentation.from_text("generators a b\na^4\nb^2")
    P0 = Presentation.from_text("generators c\nc^2")
    G = svk_pushout(P1, P0, P0, [(2,)], [(1,)])
    assert abelianization(G) == abelianization(P1)


def test_svk_triangle_presentation():
    P1 = Presentation.from_text("generators l1 l2\nl1^2\nl2^3")
    P2 = Presentation.from_text("generators l3\nl3^3")
    P0 = Presentation(("c",))
    G = svk_pushout(P1, P2, P0, [(1, 2)], [(-1,)])
    assert G.generators == ("l1", "l2", "l3")
    assert order(G) == 12


def test_svk_rejects_bad_maps_and_warns_when_unsure():
    P1 = Presentation.from_text("generators a\na^2")
    P0 = Presentation.from_text("generators c\nc^3")
    with pytest.raises(ValueError):
        svk_pushout(P1, P1, P0, [(1,)], [(1,)])
    # the commutator is nontrivial, but too small a budget cannot show it
    T = Presentation.from_text("generators a b\na^2\nb^3\n(a b)^5")
    Q = Presentation.from_text("generators c\nc")
    tiny = Budget(hom_degree=1, verdict_cosets=1)
    with pytest.warns(UserWarning):
        svk_pushout(T, T, Q, [(1, 2, -1, -2)], [()], tiny)
