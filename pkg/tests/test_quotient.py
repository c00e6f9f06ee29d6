from fractions import Fraction

import pytest

from orbispace import battery as B
from orbispace.cog import OK, validate_cog
from orbispace.groups.coset import todd_coxeter
from orbispace.groups.permgroup import PermGroup, conjugacy_data
from orbispace.groups.snf import AbelianInvariants, abelianization
from orbispace.pi1 import pi1_presentation
from orbispace.quotient import (InversionError, chi_orb, quotient_cog, recover_group_check,
                                twisted_sectors)
from orbispace.results import Failed, Unknown, Verified
from orbispace.scwol import euler_characteristic, regularize_action


def hexagon_reflection():
    H = B.cycle(6)
    return H, B.vertex_action(H, PermGroup.from_cycles(6, "(2 6)(3 5)"))


def test_trivial_group_quotient_is_the_complex():
    X = B.disk(4)
    q = quotient_cog(X, B.trivial_action(X, PermGroup(1)))
    assert q.cog.base == X and q.cog.is_trivial()


def test_segment_swap_quotient():
    Y, act = regularize_action(B.path(1), B.vertex_action(B.path(1), B.cyclic(2)))
    q = quotient_cog(Y, act)
    orders = sorted(q.cog.group(c).order for c in q.cog.base.ids)
    assert q.cog.base.counts() == [2, 1] and orders == [1, 1, 2]
    assert todd_coxeter(pi1_presentation(q.cog).presentation).cosets == 2


def test_hexagon_quotient():
    q = quotient_cog(*hexagon_reflection())
    C = q.cog
    assert validate_cog(C) == OK
    ends = [c for c in C.base.vertices if C.group(c).order == 2]
    assert ends == ["0", "3"]
    ab = abelianization(pi1_presentation(C).presentation)
    assert ab == AbelianInvariants((2, 2))


def test_inversions_need_regularizing():
    X = B.path(1)
    with pytest.raises(InversionError):
        quotient_cog(X, B.vertex_action(X, B.cyclic(2)))


def test_chi_orb_examples():
    X = B.disk(5)
    c = chi_orb(X, B.trivial_action(X, PermGroup(1)))
    assert c.by_pairs == c.by_sectors == euler_characteristic(X)
    c = chi_orb(B.point(), B.trivial_action(B.point(), B.symmetric(3)))
    assert c.by_pairs == c.by_sectors == 3
    c = chi_orb(*hexagon_reflection())
    assert c.by_pairs == Fraction(3) and c.by_sectors == 3 and c.equal


def test_sector_tables():
    X = B.simplex(2)
    t = twisted_sectors(X, B.trivial_action(X, PermGroup(1)))
    assert len(t.rows) == 1 and t.rows[0].complex.counts() == X.counts()
    G = B.dihedral(4)
    t = twisted_sectors(B.point(), B.trivial_action(B.point(), G))
    assert len(t.rows) == len(conjugacy_data(G)[0]) and all(r.chi == 1 for r in t.rows)
    t = twisted_sectors(*hexagon_reflection())
    assert [r.chi for r in t.rows] == [1, 2]
    assert t.rows[0].complex.counts() == [4, 3]
    assert t.rows[1].complex.counts() == [2]


def test_recover_group_examples():
    X = B.path(1)
    assert recover_group_check(X, B.vertex_action(X, B.cyclic(2))) == Verified(
        {"cosets": 2, "group_order": 2})
    S = B.simplex(2)
    r = recover_group_check(S, B.trivial_action(S, PermGroup(1)))
    assert isinstance(r, Verified) and r.details["cosets"] == 1
    H = B.cycle(6)
    with pytest.warns(UserWarning, match="simply connected"):
        r = recover_group_check(H, B.trivial_action(H, PermGroup(1)))
    assert isinstance(r, (Failed, Unknown))


def test_free_action_divides():
    H = B.cycle(6)
    act = B.vertex_action(H, B.cyclic(6))
    c = chi_orb(H, act)
    assert c.by_pairs == euler_characteristic(H) // 6 == 0
