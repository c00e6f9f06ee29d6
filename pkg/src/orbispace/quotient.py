"""Complexes of groups and orbifold Euler characteristics of finite actions.

Cells of ``Y`` are acted on from the right (``x^g``); orbits are
represented by their least cell in canonical order.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from orbispace import perm as P
from orbispace.cog import ComplexOfGroups
from orbispace.groups.coset import todd_coxeter
from orbispace.groups.permgroup import conjugacy_data
from orbispace.groups.snf import abelianization
from orbispace.groups.words import simplify
from orbispace.pi1 import pi1_presentation
from orbispace.results import Failed, Unknown, Verified
from orbispace.scwol import (Cell, CellComplex, ComplexError, SimplicialAction,
                             composable_pairs, euler_characteristic, regularize_action)


class InversionError(ComplexError):
    pass


@dataclass(frozen=True)
class QuotientResult:
    """``section[sigma]`` is the representative cell of ``Y`` over ``sigma``;
    ``transporters[a]`` carries the lift of ``t(a)`` inside the closure of
    ``section[i(a)]`` onto ``section[t(a)]``."""

    cog: ComplexOfGroups
    section: dict
    transporters: dict


def orbit_complex(act: SimplicialAction) -> tuple[CellComplex, dict]:
    """Cell-orbit complex of a regular action and the cell -> orbit-rep map."""
    if not act.is_regular():
        raise InversionError("orbit complex needs a regular action; regularize first")
    X = act.complex
    rep = {}
    for orb in act.orbits():
        for c in orb:
            rep[c] = orb[0]
    cells = [Cell(o[0], X.dim_of(o[0]), tuple(rep[f] for f in X.cell(o[0]).faces))
             for o in act.orbits()]
    return CellComplex(tuple(cells)), rep


def quotient_cog(Y: CellComplex, act: SimplicialAction) -> QuotientResult:
    """Associated complex of groups of a regular action.

    ``G_sigma`` is the stabilizer of the representative, ``psi_a(g) =
    h_a^-1 g h_a`` and ``g_{a,b} = (h_b h_a)^-1 h_ab`` with ``h_a`` the least
    group element carrying the lifted face to its representative.
    """
    if act.complex != Y:
        raise ComplexError("action is on a different complex")
    if not act.is_without_inversion():
        raise InversionError("action has inversions; regularize first")
    X, rep = orbit_complex(act)
    G = act.group
    stab = {c: G.subgroup(act.stabilizer(c)) for c in X.ids}
    # the face of the representative of i(a) lying over t(a)
    lift = {}
    for s, t in X.edges:
        lift[(s, t)] = next(f for f in Y.closure[s] if rep[f] == t)
    trans = {}
    for a, x in lift.items():
        trans[a] = next(g for g in G.elements if act.image(x, g) == a[1])
    psi = {}
    for a in X.edges:
        h = trans[a]
        hi = P.inv(h)
        psi[a] = tuple(P.mul(P.mul(hi, g), h) for g in stab[a[0]].generators)
    twists = {}
    for a, b, ab in composable_pairs(X):
        g = P.mul(P.inv(P.mul(trans[b], trans[a])), trans[ab])
        if not P.is_identity(g):
            twists[(a, b)] = g
    cog = ComplexOfGroups(X, stab, psi, twists)
    return QuotientResult(cog, {c: c for c in X.ids}, trans)


# -- Euler characteristics ---------------------------------------------------

@dataclass(frozen=True)
class ChiOrb:
    by_pairs: Fraction
    by_sectors: int

    @property
    def equal(self) -> bool:
        return self.by_pairs == self.by_sectors


@dataclass(frozen=True)
class SectorRow:
    representative: tuple
    class_size: int
    centralizer_order: int
    complex: CellComplex
    chi: int


@dataclass(frozen=True)
class TwistedSectorTable:
    group_order: int
    rows: tuple

    @property
    def total(self) -> int:
        return sum(r.chi for r in self.rows)


def _regular(Y, act):
    if act.complex != Y:
        raise ComplexError("action is on a different complex")
    return regularize_action(Y, act)


def _fixed_index_sets(act: SimplicialAction) -> dict:
    return {g: frozenset(i for i, j in enumerate(p) if i == j)
            for g, p in act._hom.items()}


def chi_orb(Y: CellComplex, act: SimplicialAction) -> ChiOrb:
    """Orbifold Euler characteristic by commuting pairs and by sectors.

    Computed on the regularized complex.  ``by_pairs`` must be an integer;
    anything else is an internal error.
    """
    Y, act = _regular(Y, act)
    sign = [(-1) ** c.dim for c in Y.cells]
    fixed = _fixed_index_sets(act)
    els = act.group.elements
    total = 0
    for g in els:
        for h in els:
            if P.mul(g, h) == P.mul(h, g):
                total += sum(sign[i] for i in fixed[g] & fixed[h])
    by_pairs = Fraction(total, len(els))
    if by_pairs.denominator != 1:
        raise ArithmeticError(f"commuting-pair sum {by_pairs} is not an integer")
    table = _sector_table(Y, act, fixed, sign)
    return ChiOrb(by_pairs, table.total)


def _orbit_chi(cells_idx, group_perms, sign) -> int:
    seen = set()
    chi = 0
    for i in sorted(cells_idx):
        if i in seen:
            continue
        orb = {p[i] for p in group_perms}
        seen |= orb
        chi += sign[i]
    return chi


def _sector_table(Y, act, fixed, sign) -> TwistedSectorTable:
    G = act.group
    classes, cents = conjugacy_data(G)
    rows = []
    for cls, Cg in zip(classes, cents):
        g = cls[0]
        perms = [act._hom[h] for h in Cg.elements]
        chi = _orbit_chi(fixed[g], perms, sign)
        rows.append(SectorRow(g, len(cls), Cg.order, None, chi))
    return TwistedSectorTable(G.order, tuple(rows))


def twisted_sectors(Y: CellComplex, act: SimplicialAction) -> TwistedSectorTable:
    """One row per conjugacy class ``(g)``: ``Y^g / C(g)`` and its Euler
    characteristic.  The identity row is ``Y/G``."""
    Y, act = _regular(Y, act)
    sign = [(-1) ** c.dim for c in Y.cells]
    fixed = _fixed_index_sets(act)
    base = _sector_table(Y, act, fixed, sign)
    G = act.group
    _, cents = conjugacy_data(G)
    rows = []
    for row, Cg in zip(base.rows, cents):
        sub = Y.subcomplex(Y.ids[i] for i in sorted(fixed[row.representative]))
        if len(sub) == 0:
            Q = sub
        else:
            index = {c: k for k, c in enumerate(sub.ids)}
            imgs = tuple(tuple(index[Y.ids[act._hom[h][Y.index[c]]]] for c in sub.ids)
                         for h in Cg.generators)
            ract = SimplicialAction(sub, Cg, imgs)
            sub, ract = regularize_action(sub, ract)
            Q, _ = orbit_complex(ract)
        if euler_characteristic(Q) != row.chi:
            raise ArithmeticError("sector Euler characteristic mismatch")
        rows.append(SectorRow(row.representative, row.class_size, row.centralizer_order,
                              Q, row.chi))
    return TwistedSectorTable(base.group_order, tuple(rows))


# -- group recovery ----------------------------------------------------------

def recover_group_check(Y: CellComplex, act: SimplicialAction, cap: int = 10**5,
                        budget=None):
    """Check that the fundamental group of the quotient complex of groups
    has order ``|G|`` (expected when ``Y`` is simply connected)."""
    if euler_characteristic(Y) != 1:
        warnings.warn(f"chi(Y) = {euler_characteristic(Y)} != 1; Y may not be simply connected",
                      stacklevel=2)
    Y2, act2 = _regular(Y, act)
    q = quotient_cog(Y2, act2)
    pres = simplify(pi1_presentation(q.cog).presentation).presentation
    table = todd_coxeter(pres, (), cap, budget)
    order = act.group.order
    if not table:
        ab = abelianization(pres)
        if ab.free_rank:
            return Failed(f"fundamental group is infinite (abelianization {ab})",
                          {"group_order": order})
        return Unknown(f"coset enumeration did not close within {cap} cosets",
                       {"group_order": order})
    details = {"cosets": table.cosets, "group_order": order}
    if table.cosets == order:
        return Verified(details)
    return Failed(f"fundamental group has order {table.cosets}, group has order {order}",
                  details)


def relabel_action(act: SimplicialAction, g) -> SimplicialAction:
    """The action transported along the cell relabeling ``x -> x^g``."""
    p = act.cell_perm(g)
    pinv = P.inv(p)
    return SimplicialAction(act.complex, act.group,
                            tuple(P.mul(P.mul(pinv, q), p) for q in act.cell_images))
