"""Acceptance checks.  Each test prints one PASS/FAIL line with its timing;
run ``pytest tests/test_acceptance.py`` or this file directly."""
import random
import sys
import time
from fractions import Fraction
from math import gcd
from pathlib import Path

import pytest

from orbispace import battery as B
from orbispace import perm as P
from orbispace.cli import lens_sequence
from orbispace.cog import OK, ComplexOfGroups, validate_cog
from orbispace.covering import (Developable, NotDevelopable, deck_sequence_check,
                                developability_check, finite_cover)
from orbispace.groups.coset import CosetTable, Overflow, todd_coxeter
from orbispace.groups.permgroup import PermGroup, conjugacy_data
from orbispace.groups.snf import abelianization, check_abelian_exact
from orbispace.groups.words import Presentation, evaluate, simplify
from orbispace.pi1 import pi1_presentation, svk_pushout
from orbispace.quotient import chi_orb, recover_group_check, twisted_sectors
from orbispace.results import Verified

ROOT = Path(__file__).resolve().parents[1]


def report(capsys, number, title, check):
    """Run ``check() -> (ok, detail)``, print its line past pytest's capture
    and assert it."""
    t0 = time.perf_counter()
    try:
        ok, detail = check()
    except Exception as exc:  # reported as a failure line, then re-raised
        with capsys.disabled():
            print(f"\nFAIL {number:>2} {title} [{time.perf_counter() - t0:.2f}s] "
                  f"{type(exc).__name__}: {exc}")
        raise
    line = (f"{'PASS' if ok else 'FAIL'} {number:>2} {title} "
            f"[{time.perf_counter() - t0:.2f}s] {detail}")
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


# -- 1: triangle orbifold orders -------------------------------------------

def triangle_pushout(n):
    P1 = Presentation(("l1", "l2"), ((1, 1), (2, 2, 2)))
    P2 = Presentation(("l3",), ((1,) * n,))
    P0 = Presentation(("c",), ())
    return svk_pushout(P1, P2, P0, [(1, 2)], [(-1,)])


def model_generators(G, n):
    """``(a, b)`` in ``G`` with orders 2 and 3, ``ab`` of order ``n``, generating ``G``."""
    els = G.elements
    order = {g: P.order(g) for g in els}
    for a in els:
        if order[a] != 2:
            continue
        for b in els:
            if order[b] == 3 and order[P.mul(a, b)] == n:
                if PermGroup(G.degree, (a, b)).order == G.order:
                    return a, b
    return None


def criterion_1():
    t0 = time.perf_counter()
    found = {}
    for n, solid in ((3, "tetrahedron"), (4, "octahedron"), (5, "icosahedron")):
        pres = triangle_pushout(n)
        t = todd_coxeter(simplify(pres).presentation, (), 10**5)
        if not isinstance(t, CosetTable):
            return False, f"(2,3,{n}) did not close"
        G = B.platonic(solid)[1].group
        a, b = model_generators(G, n)
        imgs = {"l1": a, "l2": b, "l3": P.inv(P.mul(a, b))}
        images = [imgs[g] for g in pres.generators]
        # the model satisfies every relator, so it is a quotient of the same order
        sat = all(P.is_identity(evaluate(r, images, G.degree)) for r in pres.relators)
        if not sat or t.cosets != G.order:
            return False, f"(2,3,{n}): cosets {t.cosets}, model order {G.order}, relators {sat}"
        found[n] = t.cosets
    t7 = todd_coxeter(simplify(triangle_pushout(7)).presentation, (), 10**5)
    elapsed = time.perf_counter() - t0
    ok = found == {3: 12, 4: 24, 5: 60} and isinstance(t7, Overflow) and elapsed < 5
    return ok, (f"orders {found[3]}, {found[4]}, {found[5]}; (2,3,7) "
                f"{'Overflow' if isinstance(t7, Overflow) else t7.cosets} at 1e5; "
                f"{elapsed:.2f}s < 5s")


def test_criterion_1_triangle_orders(capsys):
    report(capsys, 1, "triangle orbifold orders via pushout", criterion_1)


# -- 2: orbifold Euler characteristic two ways -----------------------------

def criterion_2(cases=60):
    t0 = time.perf_counter()
    groups = B.battery_groups(12)
    names = sorted(groups)
    bad = []
    biggest = 0
    for seed in range(cases):
        rng = random.Random(seed)
        name = names[seed % len(names)]
        Y, act = B.random_action(rng, groups[name], max_cells=100)
        biggest = max(biggest, len(Y))
        c = chi_orb(Y, act)
        if not (c.by_pairs == c.by_sectors and Fraction(c.by_pairs).denominator == 1):
            bad.append((seed, name))
    elapsed = time.perf_counter() - t0
    ok = not bad and biggest <= 100 and elapsed < 30
    return ok, (f"{cases} cases over {len(names)} groups, up to {biggest} cells, "
                f"mismatches {bad}; {elapsed:.2f}s < 30s")


def test_criterion_2_chi_orb_identity(capsys):
    report(capsys, 2, "chi_orb by pairs equals by sectors", criterion_2)


# -- 3: sectors of a point ---------------------------------------------------

def commuting_pairs(G):
    els = G.elements
    return sum(1 for g in els for h in els if P.mul(g, h) == P.mul(h, g))


def criterion_3():
    bad = []
    groups = B.battery_groups(24)
    for name, G in sorted(groups.items()):
        X = B.point()
        act = B.trivial_action(X, G)
        classes = Fraction(commuting_pairs(G), G.order)  # Burnside count
        c = chi_orb(X, act)
        rows = len(twisted_sectors(X, act).rows)
        if not (c.by_pairs == c.by_sectors == classes == rows == len(conjugacy_data(G)[0])):
            bad.append(name)
    return not bad, f"{len(groups)} groups of order <= 24, mismatches {bad}"


def test_criterion_3_point_sectors(capsys):
    report(capsys, 3, "point quotient sectors count classes", criterion_3)


# -- 4: mapping torus ---------------------------------------------------------

def criterion_4():
    Z3 = B.cyclic(3)
    g = Z3.generators[0]
    inv = abelianization(pi1_presentation(B.mapping_torus(Z3, [P.inv(g)])).presentation)
    ident = abelianization(pi1_presentation(B.mapping_torus(Z3, [g])).presentation)
    ok = (inv.torsion, inv.free_rank) == ((), 1) and (ident.torsion, ident.free_rank) == ((3,), 1)
    return ok, f"inversion {inv}, identity {ident}"


def test_criterion_4_mapping_torus(capsys):
    report(capsys, 4, "mapping torus abelianizations", criterion_4)


# -- 5: group recovery --------------------------------------------------------

def recovery_cases():
    hexagon_z3 = PermGroup.from_cycles(6, "(1 3 5)(2 4 6)")
    return [
        ("segment", B.path(1), B.cyclic(2)),
        ("triangle", B.simplex(2), B.cyclic(3)),
        ("triangle", B.simplex(2), B.symmetric(3)),
        ("tetrahedron", B.simplex(3), B.alternating(4)),
        ("tetrahedron", B.simplex(3), B.dihedral(4)),
        ("tetrahedron", B.simplex(3), B.cyclic(4)),
        ("tetrahedron", B.simplex(3), B.klein()),
        ("hexagonal disk", B.disk(6), B.dihedral(6)),
        ("hexagonal disk", B.disk(6), B.cyclic(6)),
        ("hexagonal disk", B.disk(6), hexagon_z3),
        ("square disk", B.disk(4), B.dihedral(4)),
        ("tripod", B.star(3), B.symmetric(3)),
        ("tripod", B.star(3), B.cyclic(3)),
        ("4-simplex", B.simplex(4), B.cyclic(5)),
        ("4-simplex", B.simplex(4), B.dihedral(5)),
    ]


def criterion_5():
    bad = []
    cases = recovery_cases()
    for label, X, G in cases:
        act = B.vertex_action(X, G)
        faithful = len(set(act.cell_images)) == len(act.cell_images) and all(
            any(act.image(c, g) != c for c in X.ids) for g in G.elements if not P.is_identity(g))
        r = recover_group_check(X, act)
        if not (faithful and isinstance(r, Verified) and r.details["cosets"] == G.order):
            bad.append((label, G.order, r))
    return not bad, f"{len(cases)} complexes with groups of order <= 12, failures {bad}"


def test_criterion_5_group_recovery(capsys):
    report(capsys, 5, "group recovered from simply connected quotients", criterion_5)


# -- 6: lens sequences --------------------------------------------------------

LENS = [(4, 3), (5, 2), (6, 5), (12, 5)]


def criterion_6():
    bad = []
    for p, q in LENS:
        groups, maps = lens_sequence(p, q)
        l = gcd(p, q - 1)
        if groups[2] != (p,) or maps[0] != [[l]] or not check_abelian_exact(groups, maps):
            bad.append((p, q, "not exact"))
        # multiplication by l + 1 has the wrong image in the middle Z
        wrong = [[[l + 1]]] + maps[1:]
        rep = check_abelian_exact(groups, wrong)
        if rep or rep.failure != 1:
            bad.append((p, q, "perturbed first map", rep.failure))
        # a zero last map has all of Z/p as kernel, larger than the image of Z
        if groups[3]:
            rep = check_abelian_exact(groups, maps[:2] + [[[0]]])
            if rep or rep.failure != 2:
                bad.append((p, q, "perturbed last map", rep.failure))
    return not bad, f"pairs {LENS} exact, perturbations located; problems {bad}"


def test_criterion_6_lens_sequences(capsys):
    report(capsys, 6, "lens exact sequences", criterion_6)


# -- 7: developability --------------------------------------------------------

def segment_cases():
    Z2, Z3, Z4 = B.cyclic(2), B.cyclic(3), B.cyclic(4)
    S3, D4 = B.symmetric(3), B.dihedral(4)
    swap = P.parse_cycles("(1 2)", 3)
    flip = P.parse_cycles("(2 4)", 4)
    half = P.mul(Z4.generators[0], Z4.generators[0])
    return [
        ("Z2 * Z3", B.segment_of_groups(Z2, Z3)),
        ("Z2 * Z2", B.segment_of_groups(Z2, Z2)),
        ("Z3 * Z3", B.segment_of_groups(Z3, Z3)),
        ("S3 *_Z2 Z4", B.segment_of_groups(S3, Z4, Z2, [swap], [half])),
        ("S3 *_Z2 D4", B.segment_of_groups(S3, D4, Z2, [swap], [flip])),
        ("Z4 *_Z2 Z4", B.segment_of_groups(Z4, Z4, Z2, [half], [half])),
        ("S3 *_Z3 S3", B.segment_of_groups(S3, S3, Z3, [P.parse_cycles("(1 2 3)", 3)],
                                          [P.parse_cycles("(1 3 2)", 3)])),
    ]


def criterion_7():
    t0 = time.perf_counter()
    cases = [(f"S2(2,3,{n})", B.triangle_orbifold_cog(n)) for n in (3, 4, 5)]
    cases += segment_cases()
    bad = []
    for label, C in cases:
        if validate_cog(C) != OK:
            bad.append((label, "invalid"))
            continue
        v = developability_check(C)
        if isinstance(v, NotDevelopable) or not (isinstance(v, Developable) and v.replay()):
            bad.append((label, type(v).__name__))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 10
    return ok, (f"{len(cases)} inputs Developable with replayed certificates, "
                f"problems {bad}; {elapsed:.2f}s < 10s")


def test_criterion_7_developability(capsys):
    report(capsys, 7, "triangle orbifolds and segments developable", criterion_7)


# -- 8: covers and deck groups ------------------------------------------------

def criterion_8():
    bad = []
    circle = ComplexOfGroups.trivial(B.cycle(3))
    pres = pi1_presentation(circle).presentation
    killed = {r[0] for r in pres.relators if len(r) == 1}
    loop = next(k + 1 for k in range(pres.ngens) if k + 1 not in killed)
    decks = []
    for n in range(1, 7):
        cd = finite_cover(circle, [(loop,) * n])
        r = deck_sequence_check(cd)
        decks.append(r.details.get("deck_order"))
        if not (cd.index == n and validate_cog(cd.cover) == OK and isinstance(r, Verified)
                and r.details["deck_order"] == n):
            bad.append(("circle", n, r))
    dihedral = B.segment_of_groups(B.cyclic(2), B.cyclic(2))
    cd = finite_cover(dihedral, [(1, 2)])
    r = deck_sequence_check(cd)
    if not (cd.index == 2 and validate_cog(cd.cover) == OK and isinstance(r, Verified)
            and r.details["deck_order"] == 2):
        bad.append(("Z2 * Z2", r))
    return not bad, (f"circle deck orders {decks}, Z2 * Z2 index-2 deck "
                     f"{r.details.get('deck_order')}; problems {bad}")


def test_criterion_8_covers(capsys):
    report(capsys, 8, "cyclic and dihedral covers satisfy the deck sequence", criterion_8)


# -- 9: property suites -------------------------------------------------------

def criterion_9():
    import test_properties_groups as G
    import test_properties_pi1 as Q
    import test_properties_quotient as R
    before = dict(Q.RUNS)
    R.test_quotients_validate()
    Q.test_basepoint_invariance()
    Q.test_spanning_tree_invariance()
    G.test_snf_invariant_under_unimodular()
    G.test_snf_is_diagonal_chain()
    Q.test_rewrites_preserve_images()
    runs = {k: Q.RUNS[k] - before.get(k, 0) for k in ("basepoint", "tree", "rewrites",
                                                       "witnesses")}
    ok = runs["basepoint"] >= 100 and runs["tree"] >= 100 and runs["witnesses"] > 0
    return ok, (f"zero failures; {runs['basepoint']} basepoint and {runs['tree']} "
                f"spanning-tree presentations, {runs['rewrites']} rewrite cases over "
                f"{runs['witnesses']} witnesses")


def test_criterion_9_property_suites(capsys):
    report(capsys, 9, "property suites", criterion_9)


# -- 10: scope ----------------------------------------------------------------

def criterion_10():
    # continuous-topology statements are out of reach; the README says so
    text = (ROOT / "README.md").read_text()
    ok = "## Scope" in text and "not reproduced" in text
    return ok, "continuous results not reproduced; documented under Scope in README.md"


def test_criterion_10_scope_documented(capsys):
    report(capsys, 10, "continuous-topology results documented as out of scope", criterion_10)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
