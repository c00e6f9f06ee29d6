"""Fundamental group presentations of complexes of groups.

The presentation is that of the path group: one letter per local-group
element (or per generator, for large groups) and one per barycentric edge,
with the edge letters along a breadth-first spanning tree set to 1.  A
letter for the edge ``a`` is read as a path from ``i(a)`` to ``t(a)``, so a
word is a path read left to right.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from orbispace import perm as P
from orbispace.cog import ComplexOfGroups
from orbispace.groups.homs import Nontrivial, Unknown, word_verdict
from orbispace.groups.permgroup import PermGroup
from orbispace.groups.words import Presentation, free_reduce, invert, substitute
from orbispace.scwol import composable_pairs

SMALL_GROUP_ORDER = 16


class DisconnectedBase(ValueError):
    pass


@dataclass(frozen=True)
class Pi1Presentation:
    """``dictionary[k]`` describes generator ``k``: ``("element", cell, g)``,
    ``("generator", cell, g)`` or ``("edge", a)``."""

    presentation: Presentation
    dictionary: tuple
    spanning_tree: tuple
    basepoint: str
    complex: ComplexOfGroups = field(repr=False, compare=False)
    twist_inverse: bool = False

    def edge_letter(self, a) -> int:
        return self._edge_index[tuple(a)] + 1

    def element_word(self, cell, g) -> tuple:
        """Word for ``g in G_cell``."""
        g = tuple(g)
        G = self.complex.group(cell)
        if g not in G:
            raise ValueError(f"{P.format_cycles(g)} is not in G_{cell}")
        if P.is_identity(g):
            return ()
        small = self._element_index.get(cell)
        if small is not None:
            return (small[g] + 1,)
        gens = self._generator_index[cell]
        return tuple(gens[G.generators[abs(x) - 1]] + 1 if x > 0
                     else -(gens[G.generators[abs(x) - 1]] + 1) for x in G.word_for(g))

    @cached_property
    def _edge_index(self) -> dict:
        return {d[1]: k for k, d in enumerate(self.dictionary) if d[0] == "edge"}

    @cached_property
    def _element_index(self) -> dict:
        out: dict = {}
        for k, d in enumerate(self.dictionary):
            if d[0] == "element":
                out.setdefault(d[1], {})[d[2]] = k
        return out

    @cached_property
    def _generator_index(self) -> dict:
        out: dict = {}
        for k, d in enumerate(self.dictionary):
            if d[0] == "generator":
                out.setdefault(d[1], {})[d[2]] = k
        return out

    def local_words(self, cell) -> list:
        """Words of all elements of ``G_cell`` in closure order."""
        return [self.element_word(cell, g) for g in self.complex.group(cell).elements]


def spanning_tree(C: ComplexOfGroups, basepoint) -> tuple:
    """Breadth-first tree of the barycentric graph, neighbours in canonical order."""
    X = C.base
    adj: dict = {c: [] for c in X.ids}
    for a in X.edges:
        adj[a[0]].append((a[1], a))
        adj[a[1]].append((a[0], a))
    for c in adj:
        adj[c].sort(key=lambda t: (X.index[t[0]], X.index[t[1][0]], X.index[t[1][1]]))
    seen = {basepoint}
    tree = []
    q = deque([basepoint])
    while q:
        x = q.popleft()
        for y, a in adj[x]:
            if y not in seen:
                seen.add(y)
                tree.append(a)
                q.append(y)
    if len(seen) != len(X):
        raise DisconnectedBase("base complex is not connected")
    return tuple(tree)


def _cayley_relators(G: PermGroup, letter) -> list:
    """Relators ``w(x) s w(xs)^-1`` over a BFS word tree: a presentation of G."""
    words = {G.identity: ()}
    order = [G.identity]
    for x in order:
        for k, s in enumerate(G.generators):
            y = P.mul(x, s)
            if y not in words:
                words[y] = words[x] + (k + 1,)
                order.append(y)
    rels = []
    for x in order:
        for k, s in enumerate(G.generators):
            r = free_reduce(words[x] + (k + 1,) + invert(words[P.mul(x, s)]))
            if r:
                rels.append(tuple(letter(abs(t) - 1) * (1 if t > 0 else -1) for t in r))
    return rels


def pi1_presentation(C: ComplexOfGroups, basepoint=None, *, twist_inverse: bool = False,
                     small_order: int = SMALL_GROUP_ORDER, tree=None) -> Pi1Presentation:
    """Presentation of the fundamental group based at ``basepoint``.

    Relators: the multiplication of each local group, ``a^-1 g a = psi_a(g)``
    for generators ``g`` of ``G_{i(a)}``, ``[ab] = b a g_{a,b}`` for composable
    pairs (``g_{a,b}^-1`` with ``twist_inverse``), and ``a = 1`` along the
    spanning tree.  ``tree`` overrides the breadth-first tree; it must be a
    spanning tree of the barycentric graph.
    """
    X = C.base
    basepoint = X.cells[0].id if basepoint is None else basepoint
    if basepoint not in X:
        raise ValueError(f"unknown basepoint {basepoint!r}")
    tree = spanning_tree(C, basepoint) if tree is None else tuple(tuple(a) for a in tree)
    if len(tree) != len(X) - 1 or not set(tree) <= X.edge_set:
        raise ValueError("tree must be a spanning tree of the barycentric graph")
    names, dictionary, rels = [], [], []
    elem_letter: dict = {}
    for ci, c in enumerate(X.cells):
        G = C.group(c.id)
        if G.order <= small_order:
            idx = {}
            for k, g in enumerate(G.elements[1:], start=1):
                idx[g] = len(names)
                names.append(f"g{ci}_{k}")
                dictionary.append(("element", c.id, g))
            elem_letter[c.id] = ("small", idx)
        else:
            base = len(names)
            for k, g in enumerate(G.generators):
                names.append(f"s{ci}_{k + 1}")
                dictionary.append(("generator", c.id, g))
            elem_letter[c.id] = ("large", base)
    for k, a in enumerate(X.edges):
        names.append(f"e{k + 1}")
        dictionary.append(("edge", a))
    pres0 = Pi1Presentation(Presentation(tuple(names)), tuple(dictionary), tree,
                            basepoint, C, twist_inverse)

    def ew(cell, g):
        return pres0.element_word(cell, g)

    for c in X.cells:
        G = C.group(c.id)
        kind, data = elem_letter[c.id]
        if kind == "small":
            for g in G.elements[1:]:
                for h in G.elements[1:]:
                    rels.append(ew(c.id, g) + ew(c.id, h) + invert(ew(c.id, P.mul(g, h))))
        else:
            rels.extend(_cayley_relators(G, lambda k, base=data: base + k + 1))
    for a in X.edges:
        e = pres0.edge_letter(a)
        for h in C.group(a[0]).generators:
            rels.append((-e,) + ew(a[0], h) + (e,) + invert(ew(a[1], C.psi_apply(a, h))))
    for a, b, ab in composable_pairs(X):
        g = C.twist(a, b)
        if twist_inverse:
            g = P.inv(g)
        rels.append((-pres0.edge_letter(ab), pres0.edge_letter(b), pres0.edge_letter(a))
                    + ew(a[1], g))
    for a in tree:
        rels.append((pres0.edge_letter(a),))
    pres = Presentation(tuple(names), tuple(rels))
    return Pi1Presentation(pres, tuple(dictionary), tree, basepoint, C, twist_inverse)


# -- decorated loops ---------------------------------------------------------

@dataclass(frozen=True)
class DecoratedLoop:
    """``g0 e1 g1 ... en gn`` with ``steps = ((e1, g1), ..., (en, gn))``.

    Each ``e`` is ``(a, +1)`` or ``(a, -1)`` for a barycentric edge ``a``.
    """

    basepoint: str
    g0: tuple
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "g0", tuple(self.g0))
        object.__setattr__(self, "steps", tuple(((tuple(a), int(s)), tuple(g))
                                                for (a, s), g in self.steps))


def _ends(e):
    a, s = e
    return (a[0], a[1]) if s > 0 else (a[1], a[0])


def check_loop(C: ComplexOfGroups, loop: DecoratedLoop) -> None:
    X = C.base
    if loop.g0 not in C.group(loop.basepoint):
        raise ValueError("g0 is not in the basepoint group")
    here = loop.basepoint
    for k, (e, g) in enumerate(loop.steps):
        if e[0] not in X.edge_set or e[1] not in (1, -1):
            raise ValueError(f"step {k}: {e!r} is not an oriented barycentric edge")
        s, t = _ends(e)
        if s != here:
            raise ValueError(f"step {k}: path breaks at {here} -> {s}")
        if g not in C.group(t):
            raise ValueError(f"step {k}: element not in G_{t}")
        here = t
    if here != loop.basepoint:
        raise ValueError("loop does not return to the basepoint")


def evaluate_loop(P1: Pi1Presentation, loop: DecoratedLoop) -> tuple:
    """Word of the loop in ``P1``'s generators, freely reduced."""
    C = P1.complex
    if loop.basepoint != P1.basepoint:
        raise ValueError("loop and presentation have different basepoints")
    check_loop(C, loop)
    w = list(P1.element_word(loop.basepoint, loop.g0))
    for e, g in loop.steps:
        w.append(P1.edge_letter(e[0]) * e[1])
        w.extend(P1.element_word(_ends(e)[1], g))
    return free_reduce(w)


def loop_rewrites(C: ComplexOfGroups, loop: DecoratedLoop, twist_inverse=False) -> list:
    """All loops obtained by one application of a defining relation.

    Moves an element across an edge (``g a = a psi_a(g)`` and its inverse
    form) or merges two consecutive edges ``b, a`` into ``ab``.
    """
    out = []
    elems = [loop.g0] + [g for _, g in loop.steps]
    edges = [e for e, _ in loop.steps]

    def make(new_elems, new_edges):
        return DecoratedLoop(loop.basepoint, new_elems[0],
                             tuple(zip(new_edges, new_elems[1:])))

    for k, (a, s) in enumerate(edges):
        g = elems[k]
        if s > 0:
            # g a = a psi_a(g)
            ne = list(elems)
            ne[k] = C.identity(a[0])
            ne[k + 1] = P.mul(C.psi_apply(a, g), elems[k + 1])
            if ne != elems:
                out.append(make(ne, edges))
        else:
            # psi_a(h) a^-1 = a^-1 h
            inv_map = {v: h for h, v in C.psi_map(a).items()}
            h = inv_map.get(g)
            if h is not None and not P.is_identity(g):
                ne = list(elems)
                ne[k] = C.identity(a[1])
                ne[k + 1] = P.mul(h, elems[k + 1])
                out.append(make(ne, edges))
    pairs = {(a, b): ab for a, b, ab in composable_pairs(C.base)}
    for k in range(len(edges) - 1):
        (b, sb), (a, sa) = edges[k], edges[k + 1]
        if sb > 0 and sa > 0 and (a, b) in pairs and P.is_identity(elems[k + 1]):
            g = C.twist(a, b)
            if not twist_inverse:
                g = P.inv(g)
            ne = elems[:k + 1] + [P.mul(g, elems[k + 2])] + elems[k + 3:]
            out.append(make(ne, edges[:k] + [(pairs[(a, b)], 1)] + edges[k + 2:]))
    return out


# -- Seifert-Van Kampen ------------------------------------------------------

def svk_pushout(P1: Presentation, P2: Presentation, P0: Presentation, j1, j2,
                budget=None) -> Presentation:
    """Universal group for ``j1: P0 -> P1`` and ``j2: P0 -> P2``.

    ``j1[k]``, ``j2[k]`` are words for generator ``k`` of ``P0``.  Each image
    of a relator of ``P0`` is checked trivial; an undecided check only
    warns, a disproved one raises ``ValueError``.
    """
    j1 = [P1.check_word(w) for w in j1]
    j2 = [P2.check_word(w) for w in j2]
    if len(j1) != P0.ngens or len(j2) != P0.ngens:
        raise ValueError("need one image word per generator of P0")
    for Pi, j, label in ((P1, j1, "j1"), (P2, j2, "j2")):
        for r in P0.relators:
            v = word_verdict(Pi, substitute(r, j), budget)
            if isinstance(v, Nontrivial):
                raise ValueError(f"{label} does not kill relator {P0.format_word(r)}")
            if isinstance(v, Unknown):
                warnings.warn(f"{label}: could not decide whether relator "
                              f"{P0.format_word(r)} maps to 1", stacklevel=2)
    n1 = P1.ngens
    names1 = list(P1.generators)
    names2 = []
    taken = set(names1)
    for g in P2.generators:
        name = g
        while name in taken:
            name += "'"
        taken.add(name)
        names2.append(name)

    def shift(w):
        return tuple(x + n1 if x > 0 else x - n1 for x in w)

    rels = list(P1.relators) + [shift(r) for r in P2.relators]
    for k in range(P0.ngens):
        rels.append(j1[k] + invert(shift(j2[k])))
    return Presentation(tuple(names1 + names2), tuple(rels))
