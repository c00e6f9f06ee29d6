"""Complexes of groups over a cell complex and homomorphisms between them.

Group elements are permutation tuples and products are read left to right
(``x y`` is :func:`orbispace.perm.mul` ``(x, y)``), matching the way words
are evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from orbispace import perm as P
from orbispace.groups.permgroup import PermGroup, extend_hom, is_injective
from orbispace.scwol import CellComplex, composable_pairs

COBOUNDARY_ORDER_CAP = 16


class Ok:
    def __bool__(self):
        return True

    def __repr__(self):
        return "Ok"


OK = Ok()


@dataclass(frozen=True)
class ViolationReport:
    """First failing condition, with the two elements that should agree."""

    condition: str
    where: tuple
    left: tuple | None = None
    right: tuple | None = None
    message: str = ""
    degenerate_edges: tuple = ()

    def __bool__(self):
        return False

    def __str__(self):
        s = f"{self.condition} fails at {self.where}"
        if self.left is not None:
            s += f": {P.format_cycles(self.left)} != {P.format_cycles(self.right)}"
        if self.message:
            s += f" ({self.message})"
        return s


def _prod(*xs):
    out = xs[0]
    for x in xs[1:]:
        out = P.mul(out, x)
    return out


@dataclass(frozen=True)
class ComplexOfGroups:
    """``(X, G_sigma, psi_a, g_{a,b})``.

    ``psi[a]`` lists the images of the generators of ``G_{i(a)}`` in
    ``G_{t(a)}``; ``twists`` maps composable pairs ``(a, b)`` to elements
    of ``G_{t(a)}`` and defaults to the identity.  Construction only checks
    shapes; use :func:`validate_cog` for the group-theoretic conditions.
    """

    base: CellComplex
    local_groups: dict
    psi: dict
    twists: dict = field(default_factory=dict)

    def __post_init__(self):
        X = self.base
        if set(self.local_groups) != set(X.ids):
            raise ValueError("need exactly one local group per cell")
        if set(self.psi) != set(X.edges):
            missing = set(X.edges) - set(self.psi)
            raise ValueError(f"psi missing or extra edges, e.g. {sorted(missing)[:1]}")
        psi = {}
        for a in X.edges:
            imgs = tuple(tuple(x) for x in self.psi[a])
            if len(imgs) != len(self.group(a[0]).generators):
                raise ValueError(f"psi{a}: need one image per generator of G_{a[0]}")
            psi[a] = imgs
        pairs = {(a, b) for a, b, _ in composable_pairs(X)}
        tw = {}
        for k, v in self.twists.items():
            if k not in pairs:
                raise ValueError(f"twist given for non-composable pair {k}")
            tw[k] = tuple(v)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "twists", tw)

    def group(self, cid) -> PermGroup:
        return self.local_groups[cid]

    def identity(self, cid):
        return self.group(cid).identity

    def twist(self, a, b):
        return self.twists.get((a, b)) or self.identity(a[1])

    @cached_property
    def _psi_maps(self) -> dict:
        return {}

    def psi_map(self, a) -> dict:
        """``psi_a`` on all elements (raises ``ValueError`` if not a homomorphism)."""
        m = self._psi_maps.get(a)
        if m is None:
            m = extend_hom(self.group(a[0]), self.psi[a], self.group(a[1]).degree)
            self._psi_maps[a] = m
        return m

    def psi_apply(self, a, h):
        return self.psi_map(a)[tuple(h)]

    @classmethod
    def trivial(cls, X: CellComplex) -> "ComplexOfGroups":
        return cls(X, {c: PermGroup(1) for c in X.ids}, {a: () for a in X.edges})

    def is_trivial(self) -> bool:
        return all(self.group(c).is_trivial() for c in self.base.ids)


def composable_triples(X: CellComplex) -> list:
    """``(a, b, c)`` with ``i(a)=t(b)``, ``i(b)=t(c)``, in canonical order."""
    out = []
    for c in X.edges:
        for b in X.edges:
            if b[0] != c[1]:
                continue
            for a in X.edges:
                if a[0] == b[1]:
                    out.append((a, b, c))
    return out


def _compose(a, b):
    return (b[0], a[1])


def validate_cog(C: ComplexOfGroups):
    """Check injectivity of every ``psi_a``, then compatibility, then the
    cocycle condition; return :data:`OK` or the first violation."""
    X = C.base
    for a in X.edges:
        try:
            m = C.psi_map(a)
        except ValueError as exc:
            return ViolationReport("homomorphism", (a,), message=str(exc))
        tgt = C.group(a[1])
        bad = next((x for x in C.psi[a] if x not in tgt), None)
        if bad is not None:
            return ViolationReport("membership", (a,), bad, None,
                                   f"psi image not in G_{a[1]}")
        if not is_injective(m):
            return ViolationReport("injectivity", (a,), message="psi has nontrivial kernel")
    for (a, b), g in sorted(C.twists.items()):
        if g not in C.group(a[1]):
            return ViolationReport("membership", (a, b), g, None, f"twist not in G_{a[1]}")
    for a, b, ab in composable_pairs(X):
        g = C.twist(a, b)
        gi = P.inv(g)
        for h in C.group(b[0]).generators:
            left = _prod(g, C.psi_apply(ab, h), gi)
            right = C.psi_apply(a, C.psi_apply(b, h))
            if left != right:
                return ViolationReport("compatibility", (a, b), left, right,
                                       f"generator {P.format_cycles(h)}")
    for a, b, c in composable_triples(X):
        left = P.mul(C.psi_apply(a, C.twist(b, c)), C.twist(a, _compose(b, c)))
        right = P.mul(C.twist(a, b), C.twist(_compose(a, b), c))
        if left != right:
            return ViolationReport("cocycle", (a, b, c), left, right)
    return OK


# -- coboundaries ------------------------------------------------------------

def apply_coboundary(C: ComplexOfGroups, elements: dict) -> ComplexOfGroups:
    """Twist by ``g_a in G_{t(a)}``: ``psi'_a = g_a psi_a g_a^-1`` and
    ``g'_{a,b} = g_a psi_a(g_b) g_{a,b} g_{ab}^-1``.  Missing edges use 1."""
    X = C.base

    def ga(a):
        return tuple(elements.get(a) or C.identity(a[1]))

    psi = {a: tuple(_prod(ga(a), x, P.inv(ga(a))) for x in C.psi[a]) for a in X.edges}
    tw = {}
    for a, b, ab in composable_pairs(X):
        t = _prod(ga(a), C.psi_apply(a, ga(b)), C.twist(a, b), P.inv(ga(ab)))
        if not P.is_identity(t):
            tw[(a, b)] = t
    return ComplexOfGroups(X, dict(C.local_groups), psi, tw)


@dataclass(frozen=True)
class Equivalent:
    elements: dict

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotEquivalent:
    def __bool__(self):
        return False


@dataclass(frozen=True)
class UnknownEquivalence:
    reason: str

    def __bool__(self):
        return False


def coboundary_equivalent(C1: ComplexOfGroups, C2: ComplexOfGroups,
                          order_cap: int = COBOUNDARY_ORDER_CAP, step_cap: int = 10**6):
    """Search for ``g_a`` with ``apply_coboundary(C1, g) == C2`` (same base
    and local groups).  Exhaustive while every ``|G_sigma| <= order_cap``."""
    X = C1.base
    if C2.base != X or any(C1.group(c) != C2.group(c) for c in X.ids):
        return NotEquivalent()
    if any(C1.group(c).order > order_cap for c in X.ids):
        return UnknownEquivalence(f"a local group exceeds order {order_cap}")
    edges = list(X.edges)
    cands = {}
    for a in edges:
        gens = C1.group(a[0]).generators
        cands[a] = [g for g in C1.group(a[1]).elements
                    if all(_prod(g, C1.psi_apply(a, h), P.inv(g)) == C2.psi_apply(a, h)
                           for h in gens)]
        if not cands[a]:
            return NotEquivalent()
    pairs = composable_pairs(X)
    pos = {a: i for i, a in enumerate(edges)}
    due = [[] for _ in edges]
    for a, b, ab in pairs:
        due[max(pos[a], pos[b], pos[ab])].append((a, b, ab))
    chosen: dict = {}
    steps = 0

    def rec(k):
        nonlocal steps
        if k == len(edges):
            return True
        a = edges[k]
        for g in cands[a]:
            steps += 1
            if steps > step_cap:
                raise _StepsExceeded
            chosen[a] = g
            if all(_prod(chosen[x], C1.psi_apply(x, chosen[y]), C1.twist(x, y),
                         P.inv(chosen[xy])) == C2.twist(x, y) for x, y, xy in due[k]):
                if rec(k + 1):
                    return True
        chosen.pop(a, None)
        return False

    try:
        found = rec(0)
    except _StepsExceeded:
        return UnknownEquivalence(f"search exceeded {step_cap} steps")
    return Equivalent(dict(chosen)) if found else NotEquivalent()


class _StepsExceeded(Exception):
    pass


# -- homomorphisms -----------------------------------------------------------

@dataclass(frozen=True)
class CogHomomorphism:
    """``Phi = (theta, phi_sigma, g'_a)`` from ``C`` to ``C'``.

    ``phi[sigma]`` lists images of the generators of ``G_sigma`` in
    ``G'_{theta(sigma)}``; ``corrections[a]`` is ``g'_a`` (default 1).
    """

    theta: dict
    phi: dict
    corrections: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "phi", {k: tuple(tuple(x) for x in v)
                                         for k, v in self.phi.items()})
        object.__setattr__(self, "corrections", {k: tuple(v)
                                                 for k, v in self.corrections.items()})

    def edge_image(self, a):
        return (self.theta[a[0]], self.theta[a[1]])

    @classmethod
    def identity(cls, C: ComplexOfGroups) -> "CogHomomorphism":
        return cls({c: c for c in C.base.ids},
                   {c: C.group(c).generators for c in C.base.ids})


def validate_cog_hom(F: CogHomomorphism, C: ComplexOfGroups, C2: ComplexOfGroups):
    """Check both homomorphism conditions for ``F: C -> C2``.

    Edges whose image collapses to a cell (``i(theta a) = t(theta a)``)
    use the identity for ``psi'`` and for twists involving them; they are
    listed in the report.  Raises ``ValueError`` when ``theta`` does not
    respect faces.
    """
    X, X2 = C.base, C2.base
    if set(F.theta) != set(X.ids) or any(v not in X2 for v in F.theta.values()):
        raise ValueError("theta must map every cell to a cell of the target base")
    degenerate = []
    for a in X.edges:
        s, t = F.edge_image(a)
        if s == t:
            degenerate.append(a)
        elif (s, t) not in X2.edge_set:
            raise ValueError(f"theta does not respect faces on edge {a}")
    degenerate = tuple(degenerate)

    def bad(cond, where, left=None, right=None, msg=""):
        return ViolationReport(cond, where, left, right, msg, degenerate)

    phis = {}
    for c in X.ids:
        tgt = C2.group(F.theta[c])
        try:
            phis[c] = extend_hom(C.group(c), F.phi.get(c, ()), tgt.degree)
        except ValueError as exc:
            return bad("homomorphism", (c,), msg=str(exc))
        x = next((x for x in phis[c].values() if x not in tgt), None)
        if x is not None:
            return bad("membership", (c,), x, None, "phi image outside target group")

    def corr(a):
        return F.corrections.get(a) or C2.identity(F.theta[a[1]])

    def psi2(e, h):
        return h if e[0] == e[1] else C2.psi_apply(e, h)

    def twist2(e, f):
        if e[0] == e[1] or f[0] == f[1]:
            return C2.identity(e[1])
        return C2.twist(e, f)

    for a in X.edges:
        g = corr(a)
        if g not in C2.group(F.theta[a[1]]):
            return bad("membership", (a,), g, None, "correction outside target group")
        for h in C.group(a[0]).generators:
            left = _prod(g, psi2(F.edge_image(a), phis[a[0]][h]), P.inv(g))
            right = phis[a[1]][C.psi_apply(a, h)]
            if left != right:
                return bad("edge condition", (a,), left, right,
                           f"generator {P.format_cycles(h)}")
    for a, b, ab in composable_pairs(X):
        left = P.mul(phis[a[1]][C.twist(a, b)], corr(ab))
        right = _prod(corr(a), psi2(F.edge_image(a), corr(b)),
                      twist2(F.edge_image(a), F.edge_image(b)))
        if left != right:
            return bad("pair condition", (a, b), left, right)
    return OK
