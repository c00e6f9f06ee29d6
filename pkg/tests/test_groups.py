import pytest

from orbispace import battery as B
from orbispace import perm as P
from orbispace.groups.coset import CosetTable, Overflow, todd_coxeter
from orbispace.groups.homs import (Budget, Homomorphism, Nontrivial, NotFound, Trivial,
                                   count_homs, hom_search, word_verdict)
from orbispace.groups.permgroup import CapExceeded, PermGroup, close_group, conjugacy_data
from orbispace.groups.snf import (AbelianInvariants, abelianization, check_abelian_exact,
                                  smith_normal_form)
from orbispace.groups.words import Presentation, simplify


def pres(text):
    return Presentation.from_text(text)


def brute_closure(gens, n):
    seen = {P.identity(n)}
    frontier = list(seen)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = P.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return seen


# -- permutation groups ------------------------------------------------------

def test_close_group_examples():
    G = PermGroup.from_cycles(3, "(1 2)", "(1 2 3)")
    assert close_group(G)[1] == 6
    assert close_group(PermGroup(1))[1] == 1
    assert close_group(PermGroup.from_cycles(4, "(1 2 3 4)"))[1] == 4


def test_closure_matches_brute_force():
    for name, G in B.battery_groups(24).items():
        assert set(G.elements) == brute_closure(G.generators, G.degree), name


def test_closure_cap():
    G = PermGroup(5, B.symmetric(5).generators, cap=50)
    with pytest.raises(CapExceeded):
        G.order


def test_conjugacy_examples():
    classes, cents = conjugacy_data(B.symmetric(3))
    assert sorted(len(c) for c in classes) == [1, 2, 3]
    A = B.cyclic(6)
    classes, cents = conjugacy_data(A)
    assert len(classes) == 6 and all(c.order == 6 for c in cents)
    assert len(conjugacy_data(PermGroup(1))[0]) == 1


def test_conjugacy_sums():
    for name, G in B.battery_groups(24).items():
        classes, cents = conjugacy_data(G)
        assert sum(map(len, classes)) == G.order, name
        assert all(G.order % c.order == 0 for c in cents), name
        # class size times centralizer order is the group order
        assert all(len(k) * c.order == G.order for k, c in zip(classes, cents)), name


# -- words and coset enumeration --------------------------------------------

def test_parse_and_format():
    p = Presentation(("a", "b"))
    w = p.parse_word("a b^-1 (a b)^2")
    assert w == (1, -2, 1, 2, 1, 2)
    assert p.parse_word(p.format_word(w)) == w
    assert p.parse_word("1") == ()
    with pytest.raises(ValueError):
        p.parse_word("c")


def test_todd_coxeter_examples():
    t = todd_coxeter(pres("generators a\na^5"))
    assert isinstance(t, CosetTable) and t.cosets == 5
    t = todd_coxeter(pres("generators x y\nx^2\ny^3\n(x y)^3"))
    assert t.cosets == 12
    model = PermGroup.from_cycles(4, "(1 2)(3 4)", "(1 2 3)")
    assert model.order == 12
    assert isinstance(todd_coxeter(pres("generators x y"), cap=10**5), Overflow)


def test_coset_table_valid_and_subgroup_index():
    p = pres("generators x y\nx^2\ny^3\n(x y)^5")
    t = todd_coxeter(p)
    assert t.cosets == 60 and t.is_valid()
    h = todd_coxeter(p, [p.parse_word("y")])
    assert h.cosets == 20


def test_simplify_keeps_group():
    p = pres("generators a b c\na^2\nb^3\nc^5\na b c")
    s = simplify(p)
    assert todd_coxeter(s.presentation).cosets == 60
    assert abelianization(s.presentation) == abelianization(p)


# -- abelian invariants ------------------------------------------------------

def test_abelianization_examples():
    assert abelianization(pres("generators a\na^6")) == AbelianInvariants((6,), 0)
    tri = pres("generators l1 l2 l3\nl1^2\nl2^3\nl3^5\nl1 l2 l3")
    assert abelianization(tri).is_trivial()
    assert abelianization(pres("generators x y")).free_rank == 2


def test_snf_examples():
    inv, U, V = smith_normal_form([[2, 0], [0, 3]])
    assert tuple(inv) == (1, 6)
    assert tuple(smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])[0]) == (1, 1, 1)
    assert tuple(smith_normal_form([[0, 0], [0, 0]])[0]) == ()


def test_lens_sequence_4_3():
    assert check_abelian_exact([(0,), (0,), (4,), (2,)], [[[2]], [[2]], [[1]]])
    rep = check_abelian_exact([(0,), (0,), (4,)], [[[2]], [[1]]])
    assert not rep and rep.failure == 1


def test_identity_sequence_exact():
    A = (2, 0, 6)
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert check_abelian_exact([A, A], [eye])


# -- verdicts and homomorphism search --------------------------------------

def test_word_verdicts():
    p = pres("generators a\na^2")
    v = word_verdict(p, (1,))
    assert isinstance(v, Nontrivial) and v.replay(p)
    v = word_verdict(p, (1, 1))
    assert isinstance(v, Trivial) and v.replay(p)
    f2 = pres("generators x y")
    v = word_verdict(f2, (1, 2, -1, -2))
    assert isinstance(v, Nontrivial) and not v.abelian and v.replay(f2)


def test_hom_search_examples():
    p = pres("generators a\na^2")
    h = hom_search(p, [[(), (1,)]])
    assert isinstance(h, Homomorphism) and h.degree == 2 and h.images == ((1, 0),)
    tri = pres("generators l1 l2 l3\nl1^2\nl2^3\nl3^5\nl1 l2 l3")
    cons = [[(k + 1,) * e for e in range(n)] for k, n in enumerate((2, 3, 5))]
    h = hom_search(tri, cons, 8)
    assert h.degree == 5
    assert [P.order(x) for x in h.images] == [2, 3, 5]
    assert h.image_group().order == 60
    assert isinstance(hom_search(pres("generators a\na"), [[(), (1,)]], 6), NotFound)


def test_count_homs_cyclic():
    # homs Z/3 -> S_3: elements of order dividing 3
    assert count_homs(pres("generators a\na^3"), 3) == 3
    # free group of rank 1 into S_3: every element
    assert count_homs(pres("generators a"), 3) == 6


def test_budget_rejects_nonpositive():
    with pytest.raises(ValueError):
        Budget(cap_cosets=0)


def test_permutation_model_orders():
    for n, solid_order in ((3, 12), (4, 24), (5, 60)):
        p = pres(f"generators x y\nx^2\ny^3\n(x y)^{n}")
        cons = [[(), (1,)], [(), (2,), (2, 2)], [(1, 2) * k for k in range(n)]]
        h = hom_search(p, cons, 8)
        assert h.satisfies(p)
        assert todd_coxeter(p).cosets == h.image_group().order == solid_order
