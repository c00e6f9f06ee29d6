"""Developability, finite-index covers and the deck-transformation sequence.

A cover for a subgroup ``H`` of the fundamental group is read off the coset
action: over a cell ``sigma`` the cover cells are the orbits of ``G_sigma``
on the cosets of ``H`` (the double cosets), each carrying the stabilizer of
its least coset as local group.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from orbispace import perm as P
from orbispace.cog import CogHomomorphism, ComplexOfGroups
from orbispace.groups.coset import CosetTable, Overflow, todd_coxeter
from orbispace.groups.homs import Budget, Homomorphism, Trivial, hom_search, word_verdict
from orbispace.groups.words import Presentation, Simplification, evaluate, simplify
from orbispace.pi1 import Pi1Presentation, pi1_presentation
from orbispace.results import Failed, Unknown, Verified
from orbispace.scwol import Cell, CellComplex, composable_pairs, regularize_action


# -- developability ----------------------------------------------------------

@dataclass(frozen=True)
class Developable:
    """``certificate`` is a permutation representation of ``presentation``
    that is injective on every local group."""

    certificate: Homomorphism
    presentation: Presentation
    pi1: Pi1Presentation = field(repr=False, compare=False)

    def __bool__(self):
        return True

    def replay(self) -> bool:
        h = self.certificate
        if not h.satisfies(self.presentation):
            return False
        C = self.pi1.complex
        for c in C.base.ids:
            imgs = [h(w) for w in self.pi1.local_words(c)]
            if len(set(imgs)) != len(imgs):
                return False
        return True


@dataclass(frozen=True)
class NotDevelopable:
    """``element`` of ``G_cell`` is trivial in the fundamental group;
    ``verdict`` certifies ``word = 1`` in ``presentation``."""

    cell: str
    element: tuple
    word: tuple
    verdict: Trivial
    presentation: Presentation

    def __bool__(self):
        return False

    def replay(self) -> bool:
        return (not P.is_identity(self.element) and self.verdict.word == self.word
                and self.verdict.replay(self.presentation))


def developability_check(C: ComplexOfGroups, budget: Budget | None = None, basepoint=None):
    """Decide whether every local group injects into the fundamental group.

    Order: faithful homomorphism search, then the regular representation
    when the group is finite, then per-element word verdicts.
    """
    budget = budget or Budget()
    pp = pi1_presentation(C, basepoint)
    pres = pp.presentation
    cells = [c for c in C.base.ids if not C.group(c).is_trivial()]
    if not cells:
        return Developable(Homomorphism(1, tuple((0,) for _ in pres.generators)), pres, pp)
    constraints = [pp.local_words(c) for c in cells]
    hom = hom_search(pres, constraints, budget.hom_degree, budget)
    if hom:
        return Developable(hom, pres, pp)
    simp = simplify(pres)
    small = simp.presentation
    table = todd_coxeter(small, (), min(budget.cap_cosets, budget.verdict_cosets), budget)
    if isinstance(table, CosetTable):
        n = table.cosets
        imgs = tuple(evaluate(w, table.permutations(), n) for w in simp.images)
        reg = Homomorphism(n, imgs)
        for c in cells:
            for g in C.group(c).elements[1:]:
                w = simp.map_word(pp.element_word(c, g))
                if all(table.trace(k, w) == k for k in range(n)):
                    return NotDevelopable(c, g, w, Trivial(w, (), table), small)
        return Developable(reg, pres, pp)
    for c in cells:
        for g in C.group(c).elements[1:]:
            w = simp.map_word(pp.element_word(c, g))
            v = word_verdict(small, w, budget)
            if isinstance(v, Trivial):
                return NotDevelopable(c, g, w, v, small)
    return Unknown("no faithful representation found and no local element shown trivial",
                   dict(budget.spent))


# -- finite covers -----------------------------------------------------------

@dataclass(frozen=True)
class CoverData:
    """Cover of ``base`` for ``H``.

    ``subgroup`` is the coset table of ``H`` over ``simplification``'s
    presentation; ``fibers[sigma]`` lists cover cells over ``sigma``;
    ``deck_order`` is None when the automorphism count was not finished.
    """

    base: ComplexOfGroups
    pi1: Pi1Presentation
    simplification: Simplification
    subgroup: CosetTable
    cover: ComplexOfGroups
    projection: CogHomomorphism
    fibers: dict
    deck_order: int | None
    local_actions: dict = field(default=None, repr=False, compare=False)

    @property
    def index(self) -> int:
        return self.subgroup.cosets


def cover_cell_id(cell, coset) -> str:
    return f"{cell}@{coset + 1}"


def finite_cover(C: ComplexOfGroups, H_words=(), cap: int = 10**5, basepoint=None,
                 budget=None, deck_cap: int = 10**5):
    """Cover associated with ``H = <H_words>`` (words over the generators of
    ``pi1_presentation(C, basepoint)``), or :class:`Overflow`."""
    pp = pi1_presentation(C, basepoint)
    simp = simplify(pp.presentation)
    hw = tuple(simp.map_word(pp.presentation.check_word(w)) for w in H_words)
    table = todd_coxeter(simp.presentation, hw, cap, budget)
    if isinstance(table, Overflow):
        return table
    n = table.cosets
    letters = [evaluate(w, table.permutations(), n) for w in simp.images]
    X = C.base

    def word_perm(w):
        return evaluate(w, letters, n)

    iota = {c: {g: word_perm(pp.element_word(c, g)) for g in C.group(c).elements}
            for c in X.ids}
    rep = {}
    fibers = {}
    for c in X.ids:
        r = {}
        for k in range(n):
            if k not in r:
                orb = {p[k] for p in iota[c].values()}
                m = min(orb)
                for x in orb:
                    r[x] = m
        rep[c] = r
        fibers[c] = sorted(set(r.values()))
    local = {}
    for c in X.ids:
        G = C.group(c)
        for r in fibers[c]:
            local[(c, r)] = G.subgroup(g for g in G.elements if iota[c][g][r] == r)
    # transporter k and target coset for each (edge, source coset)
    edge_data = {}
    for a in X.edges:
        p = word_perm((pp.edge_letter(a),))
        s, t = a
        for r in fibers[s]:
            x = p[r]
            d = rep[t][x]
            k = next(g for g in C.group(t).elements if iota[t][g][d] == x)
            edge_data[(a, r)] = (d, k)
    cells = []
    for c in X.cells:
        for r in fibers[c.id]:
            faces = tuple(cover_cell_id(f, edge_data[((c.id, f), r)][0]) for f in c.faces)
            cells.append(Cell(cover_cell_id(c.id, r), c.dim, faces))
    Xt = CellComplex(tuple(cells))
    origin = {cover_cell_id(c, r): (c, r) for c in X.ids for r in fibers[c]}
    groups = {cid: local[origin[cid]] for cid in Xt.ids}
    psi, corr, over = {}, {}, {}
    for e in Xt.edges:
        (s, r), (t, d) = origin[e[0]], origin[e[1]]
        a = (s, t)
        d2, k = edge_data[(a, r)]
        assert d2 == d
        over[e] = a
        corr[e] = k
        ki = P.inv(k)
        psi[e] = tuple(P.mul(P.mul(k, C.psi_apply(a, h)), ki) for h in groups[e[0]].generators)
    twists = {}
    for ea, eb, eab in composable_pairs(Xt):
        a, b = over[ea], over[eb]
        g = P.mul(P.mul(P.mul(corr[ea], C.psi_apply(a, corr[eb])), C.twist(a, b)),
                  P.inv(corr[eab]))
        if not P.is_identity(g):
            twists[(ea, eb)] = g
    cover = ComplexOfGroups(Xt, groups, psi, twists)
    proj = CogHomomorphism({cid: origin[cid][0] for cid in Xt.ids},
                           {cid: groups[cid].generators for cid in Xt.ids}, corr)
    fib = {c: [cover_cell_id(c, r) for r in fibers[c]] for c in X.ids}
    deck = count_deck_transformations(letters, n, step_cap=deck_cap)
    return CoverData(C, pp, simp, table, cover, proj, fib, deck, iota)


def count_deck_transformations(letters, n: int, step_cap: int = 10**5):
    """Number of bijections of the coset set ``0..n-1`` commuting with every
    permutation in ``letters`` (the deck transformations of the cover of
    complexes of groups); None past the cap.  Each is fixed by the image of
    coset 0, so the search tries every target and propagates."""
    moves = list(letters) + [P.inv(p) for p in letters]
    steps = 0
    count = 0
    for y in range(n):
        beta = {0: y}
        queue = deque([0])
        ok = True
        while queue and ok:
            x = queue.popleft()
            for p in moves:
                steps += 1
                if steps > step_cap:
                    return None
                u, v = p[x], p[beta[x]]
                if u not in beta:
                    beta[u] = v
                    queue.append(u)
                elif beta[u] != v:
                    ok = False
                    break
        if ok and len(set(beta.values())) == n:
            count += 1
    return count


# -- the deck sequence -------------------------------------------------------

def normalizer_quotient_order(cd: CoverData) -> int:
    """``|N(H)/H|``: cosets fixed by every generator of ``H``."""
    t = cd.subgroup
    return sum(1 for c in range(t.cosets)
               if all(t.trace(c, w) == c for w in t.subgroup_words))


def _core(G, sub_elements):
    els = set(sub_elements)
    return {x for x in els if all(P.conj(x, g) in els for g in G.elements)}


def link_kernels(C: ComplexOfGroups) -> dict:
    """Per cell, the elements acting trivially on the local development of
    its star: the intersection of the cores of ``psi_a(G_{i(a)})`` over
    edges ending at the cell (all of ``G_sigma`` for a maximal cell)."""
    X = C.base
    out = {}
    for c in X.ids:
        G = C.group(c)
        ker = set(G.elements)
        for a in X.edges:
            if a[1] == c:
                ker &= _core(G, C.psi_map(a).values())
        out[c] = ker
    return out


def star_kernels(Y: CellComplex, act, section: dict) -> dict:
    """Per quotient cell, the group elements fixing every cell of ``Y``
    whose closure contains the representative cell."""
    out = {}
    for c, rep in section.items():
        star = set(Y.cofaces[rep]) | {rep}
        out[c] = {g for g in act.group.elements if all(act.image(x, g) == x for x in star)}
    return out


def _kernel_families(cd: CoverData, kernels: dict) -> tuple[int, int, set]:
    """``(|K|, |C|, moved)``: compatible families of kernel elements over the
    cover, and the cosets to which their basepoint components carry coset 0
    (one per deck transformation of the cover of complexes of groups that
    the families make trivial)."""
    cover, proj = cd.cover, cd.projection
    Xt = cover.base
    theta = proj.theta
    ids = list(Xt.ids)
    x0 = cover_cell_id(cd.pi1.basepoint, 0)
    # spanning tree of the cover's barycentric graph from x0
    nbrs: dict = {cid: [] for cid in ids}
    for e in Xt.edges:
        nbrs[e[0]].append(e)
        nbrs[e[1]].append(e)
    base = cd.base
    K = C = 0
    moved = set()
    for g0 in sorted(kernels[theta[x0]]):
        fam = {x0: g0}
        q = deque([x0])
        ok = True
        while q and ok:
            x = q.popleft()
            for e in nbrs[x]:
                a = (theta[e[0]], theta[e[1]])
                k = proj.corrections.get(e) or base.identity(a[1])
                if e[0] == x and e[1] not in fam:
                    fam[e[1]] = P.mul(P.mul(k, base.psi_apply(a, fam[x])), P.inv(k))
                    q.append(e[1])
                elif e[1] == x and e[0] not in fam:
                    target = P.mul(P.mul(P.inv(k), fam[x]), k)
                    pre = next((h for h, v in base.psi_map(a).items() if v == target), None)
                    if pre is None:
                        ok = False
                        break
                    fam[e[0]] = pre
                    q.append(e[0])
        if not ok or len(fam) != len(ids):
            continue
        if not _family_valid(cd, fam, kernels):
            continue
        K += 1
        moved.add(cd.local_actions[theta[x0]][g0][0])
        if all(fam[x] in cover.group(x) for x in ids):
            C += 1
    return K, C, moved


def _family_valid(cd, fam, kernels) -> bool:
    cover, proj, base = cd.cover, cd.projection, cd.base
    theta = proj.theta
    for x, g in fam.items():
        if g not in kernels[theta[x]]:
            return False
        if any(P.mul(g, h) != P.mul(h, g) for h in cover.group(x).generators):
            return False
    for e in cover.base.edges:
        a = (theta[e[0]], theta[e[1]])
        k = proj.corrections.get(e) or base.identity(a[1])
        if fam[e[1]] != P.mul(P.mul(k, base.psi_apply(a, fam[e[0]])), P.inv(k)):
            return False
    return True


def deck_sequence_check(cd: CoverData, global_data=None):
    """Check ``|N(H)/H| = |K/C| * |Deck|``.

    ``K/C`` is computed from ``global_data = (Y, act)`` when given (``Y``
    and ``act`` must reproduce ``cd.base`` as their quotient); otherwise it
    is taken as trivial when every local group acts effectively on its
    link, and the check is Unknown if not.  ``Deck`` is the group of deck
    transformations of the cover as an orbispace: ``cd.deck_order`` counts
    them on the cover of complexes of groups, and those carried by a
    kernel family act trivially on every chart and are divided out.
    """
    nh = normalizer_quotient_order(cd)
    details = {"normalizer_quotient": nh, "cog_deck_order": cd.deck_order}
    if cd.deck_order is None:
        return Unknown("deck transformation count exceeded its cap", details)
    if global_data is not None:
        from orbispace.quotient import quotient_cog
        Y, act = global_data
        Y, act = regularize_action(Y, act)
        q = quotient_cog(Y, act)
        if q.cog != cd.base:
            return Unknown("global data does not reproduce the base complex of groups", details)
        kernels = star_kernels(Y, act, q.section)
        k, c, moved = _kernel_families(cd, kernels)
        details.update({"K": k, "C": c, "kc_source": "global"})
    else:
        kernels = link_kernels(cd.base)
        if any(len(v) > 1 for v in kernels.values()):
            return Unknown("a local group acts non-effectively on its link; "
                           "K/C needs global quotient data", details)
        k, c, moved = 1, 1, {0}
        details["kc_source"] = "effective links"
    kc = k // c
    details["kc_order"] = kc
    if cd.deck_order % len(moved):
        return Failed(f"{len(moved)} chart-trivial deck transformations do not divide "
                      f"{cd.deck_order}", details)
    deck = cd.deck_order // len(moved)
    details["deck_order"] = deck
    if k % c == 0 and nh == kc * deck:
        return Verified(details)
    return Failed(f"|N(H)/H| = {nh} but |K/C| * |Deck| = {k}/{c} * {deck}", details)
