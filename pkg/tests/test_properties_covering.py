import random
from fractions import Fraction

from hypothesis import given, settings

from orbispace import battery as B
from orbispace.cog import OK, ComplexOfGroups, validate_cog, validate_cog_hom
from orbispace.covering import (CoverData, Developable, deck_sequence_check,
                                developability_check, finite_cover, normalizer_quotient_order)
from orbispace.groups.coset import CosetTable, todd_coxeter
from orbispace.groups.homs import Budget
from orbispace.groups.words import simplify
from orbispace.pi1 import pi1_presentation
from orbispace.quotient import quotient_cog
from orbispace.results import Unknown, Verified
from orbispace.scwol import euler_characteristic, regularize_action

from strategies import actions, connected_complexes, quotient_cogs, seeds


def orbifold_chi(C):
    # weighted cell count, computed straight from the local groups
    X = C.base
    return sum(Fraction((-1) ** X.dim_of(c), C.group(c).order) for c in X.ids)


def random_words(ngens, rng, count):
    out = []
    if ngens == 0:
        return out
    for _ in range(count):
        w = tuple(rng.choice([1, -1]) * rng.randint(1, ngens)
                  for _ in range(rng.randint(1, 3)))
        out.append(w)
    return out


def some_cover(C, seed, cap=400):
    rng = random.Random(seed)
    pp = pi1_presentation(C)
    words = random_words(pp.presentation.ngens, rng, rng.randint(0, 3))
    cd = finite_cover(C, words, cap=cap, deck_cap=20000)
    return cd if isinstance(cd, CoverData) else None


@settings(max_examples=30)
@given(connected_complexes(max_vertices=5), seeds)
def test_trivial_group_covers_multiply_chi(X, seed):
    C = ComplexOfGroups.trivial(X)
    cd = some_cover(C, seed)
    if cd is None:
        return
    assert cd.cover.is_trivial()
    assert euler_characteristic(cd.cover.base) == cd.index * euler_characteristic(X)
    assert validate_cog(cd.cover) == OK
    assert validate_cog_hom(cd.projection, cd.cover, C) == OK
    # every cell of a trivial-group cover has a fibre of full size
    assert all(len(f) == cd.index for f in cd.fibers.values())
    r = deck_sequence_check(cd)
    if cd.deck_order is not None:
        assert isinstance(r, Verified)


@settings(max_examples=30)
@given(quotient_cogs(max_cells=30), seeds)
def test_covers_multiply_orbifold_chi(C, seed):
    cd = some_cover(C, seed)
    if cd is None:
        return
    assert validate_cog(cd.cover) == OK
    assert validate_cog_hom(cd.projection, cd.cover, C) == OK
    assert orbifold_chi(cd.cover) == cd.index * orbifold_chi(C)
    for c, fib in cd.fibers.items():
        assert sum(Fraction(1, cd.cover.group(x).order) for x in fib) == \
            Fraction(cd.index, C.group(c).order)


@settings(max_examples=30)
@given(quotient_cogs(max_cells=30), seeds)
def test_fibre_automorphisms_match_normalizer(C, seed):
    cd = some_cover(C, seed)
    if cd is None or cd.deck_order is None:
        return
    nh = normalizer_quotient_order(cd)
    assert cd.index % nh == 0
    assert nh == cd.deck_order


@settings(max_examples=25)
@given(quotient_cogs(max_cells=30))
def test_development_is_simply_connected_and_trivial(C):
    v = developability_check(C, Budget(hom_degree=6))
    if not isinstance(v, Developable):
        return
    cd = finite_cover(C, [], cap=2000)
    if not isinstance(cd, CoverData):
        return
    # the universal cover of a developable quotient has trivial local groups
    assert cd.cover.is_trivial()
    pp = pi1_presentation(cd.cover)
    t = todd_coxeter(simplify(pp.presentation).presentation, (), 5000)
    assert isinstance(t, CosetTable) and t.cosets == 1


@given(seeds)
def test_circle_covers_from_random_words(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    C = ComplexOfGroups.trivial(B.cycle(n))
    k = rng.randint(1, 6)
    pp = pi1_presentation(C)
    killed = {r[0] for r in pp.presentation.relators if len(r) == 1}
    e = next(j + 1 for j in range(pp.presentation.ngens) if j + 1 not in killed)
    cd = finite_cover(C, [(e,) * k])
    assert cd.index == k == cd.deck_order
    assert cd.cover.base.counts() == [n * k, n * k]
    assert isinstance(deck_sequence_check(cd), Verified)


@settings(max_examples=30)
@given(actions(max_cells=30, connected=True), seeds)
def test_deck_sequence_with_global_data(data, seed):
    Y, act = regularize_action(*data)
    C = quotient_cog(Y, act).cog
    cd = some_cover(C, seed)
    if cd is None or cd.deck_order is None:
        return
    r = deck_sequence_check(cd, (Y, act))
    assert isinstance(r, Verified), r
    plain = deck_sequence_check(cd)
    assert isinstance(plain, (Verified, Unknown))
