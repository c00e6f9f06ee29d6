"""Standard complexes, groups and actions used by tests and examples."""
from __future__ import annotations

import itertools
import random

import numpy as np

from orbispace import perm as P
from orbispace.cog import ComplexOfGroups
from orbispace.groups.permgroup import PermGroup, small_generating_set
from orbispace.scwol import (CellComplex, SimplicialAction, build_complex,
                             simplicial_complex)

# -- complexes ---------------------------------------------------------------


def point() -> CellComplex:
    return build_complex([("p", 0, ())])


def simplex(k: int) -> CellComplex:
    return simplicial_complex([tuple(range(k + 1))])


def simplex_boundary(k: int) -> CellComplex:
    return simplicial_complex(itertools.combinations(range(k + 1), k))


def path(n: int) -> CellComplex:
    """Segment subdivided into ``n`` edges."""
    return simplicial_complex([(i, i + 1) for i in range(n)])


def cycle(n: int) -> CellComplex:
    """Polygonal circle with ``n`` vertices (``n >= 3``)."""
    return simplicial_complex([(i, (i + 1) % n) for i in range(n)])


def cone(facets, apex="c"):
    """Facets of the cone over the simplicial complex with the given facets."""
    return [tuple(f) + (apex,) for f in facets]


def disk(n: int) -> CellComplex:
    """Cone over an ``n``-gon: a triangulated disk with apex ``c``."""
    return simplicial_complex(cone([(i, (i + 1) % n) for i in range(n)]))


def star(n: int) -> CellComplex:
    """Cone over ``n`` points: a tree with ``n`` leaves."""
    return simplicial_complex(cone([(i,) for i in range(n)]))


# -- groups ------------------------------------------------------------------


def trivial_group() -> PermGroup:
    return PermGroup(1)


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return trivial_group()
    return PermGroup(n, (tuple((i + 1) % n for i in range(n)),))


def dihedral(n: int) -> PermGroup:
    """Symmetries of an ``n``-gon (order ``2n``), acting on its vertices."""
    if n == 2:
        return klein()
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return PermGroup(n, (rot, ref))


def klein() -> PermGroup:
    return PermGroup.from_cycles(4, "(1 2)(3 4)", "(1 3)(2 4)")


def symmetric(n: int) -> PermGroup:
    if n == 1:
        return trivial_group()
    return PermGroup(n, (tuple([1, 0] + list(range(2, n))),
                         tuple((i + 1) % n for i in range(n))))


def alternating(n: int) -> PermGroup:
    gens = [P.from_cycles([[0, 1, k]], n) for k in range(2, n)]
    return PermGroup(n, tuple(gens)) if gens else trivial_group()


def quaternion() -> PermGroup:
    return regular(PermGroup.from_cycles(8, "(1 2 3 4)(5 6 7 8)", "(1 5 3 7)(2 8 4 6)"))


def direct_product(A: PermGroup, B: PermGroup) -> PermGroup:
    n, m = A.degree, B.degree
    gens = [tuple(g) + tuple(range(n, n + m)) for g in A.generators]
    gens += [tuple(range(n)) + tuple(n + x for x in h) for h in B.generators]
    return PermGroup(n + m, tuple(gens))


def regular(G: PermGroup) -> PermGroup:
    """Right regular representation of ``G`` on its own elements."""
    els = G.elements
    idx = {g: i for i, g in enumerate(els)}
    return PermGroup(len(els), tuple(tuple(idx[P.mul(x, s)] for x in els)
                                     for s in G.generators))


def dicyclic3() -> PermGroup:
    """Order-12 dicyclic group ``Z3 x| Z4`` (the generator of order 4 inverts)."""
    return PermGroup.from_cycles(7, "(1 2 3)", "(2 3)(4 5 6 7)")


def battery_groups(max_order: int = 24) -> dict:
    """Named groups of order at most ``max_order``."""
    gs = {"1": trivial_group()}
    for n in range(2, 13):
        gs[f"Z{n}"] = cyclic(n)
    gs["V4"] = klein()
    for n in range(3, 13):
        gs[f"D{n}"] = dihedral(n)
    gs["Q8"] = quaternion()
    gs["A4"] = alternating(4)
    gs["S4"] = symmetric(4)
    gs["Z2^3"] = direct_product(klein(), cyclic(2))
    gs["Z2xZ4"] = direct_product(cyclic(2), cyclic(4))
    gs["Z3xS3"] = direct_product(cyclic(3), symmetric(3))
    gs["Dic3"] = dicyclic3()
    gs["Z2xA4"] = direct_product(cyclic(2), alternating(4))
    return {k: g for k, g in gs.items() if g.order <= max_order}


# -- actions -----------------------------------------------------------------


def vertex_action(X: CellComplex, G: PermGroup, labels=None) -> SimplicialAction:
    """Action of ``G`` on a simplicial complex through its vertex labels.

    ``labels[i]`` is the vertex id moved by point ``i`` of ``G``'s degree;
    vertices outside ``labels`` are fixed.
    """
    labels = [str(i) for i in range(G.degree)] if labels is None else [str(x) for x in labels]
    maps = []
    for g in G.generators:
        vmap = {labels[i]: labels[g[i]] for i in range(len(labels))}
        m = {}
        for cid in X.ids:
            vs = cid.split(",")
            m[cid] = ",".join(sorted(vmap.get(v, v) for v in vs))
        maps.append(m)
    return SimplicialAction.from_cell_maps(X, G, maps)


def _rotation_group(coords) -> tuple:
    """Rotations of a convex polytope, as vertex permutations."""
    V = np.array(coords, dtype=float)
    d = np.linalg.norm(V[:, None, :] - V[None, :, :], axis=2)
    edge = d[d > 1e-9].min()
    adj = np.isclose(d, edge)
    v0 = 0
    v1 = int(np.flatnonzero(adj[0])[0])
    B = np.column_stack([V[v0], V[v1], np.cross(V[v0], V[v1])])
    perms = set()
    for w0 in range(len(V)):
        for w1 in np.flatnonzero(adj[w0]):
            W = np.column_stack([V[w0], V[w1], np.cross(V[w0], V[w1])])
            R = W @ np.linalg.inv(B)
            img = V @ R.T
            match = np.linalg.norm(img[:, None, :] - V[None, :, :], axis=2) < 1e-6
            if (match.sum(axis=1) == 1).all() and np.isclose(np.linalg.det(R), 1):
                perms.add(tuple(int(np.flatnonzero(r)[0]) for r in match))
    return tuple(sorted(perms)), adj


def _triangles(adj) -> list:
    n = len(adj)
    return [t for t in itertools.combinations(range(n), 3)
            if adj[t[0], t[1]] and adj[t[1], t[2]] and adj[t[0], t[2]]]


def platonic(name: str):
    """``(Y, act)``: a triangulated Platonic sphere with its rotation group.

    ``tetrahedron`` (order 12), ``octahedron`` (24), ``icosahedron`` (60).
    """
    phi = (1 + 5 ** 0.5) / 2
    if name == "tetrahedron":
        coords = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif name == "octahedron":
        coords = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    elif name == "icosahedron":
        coords = []
        for s1 in (1, -1):
            for s2 in (phi, -phi):
                coords += [(0, s1, s2), (s1, s2, 0), (s2, 0, s1)]
    else:
        raise ValueError(f"unknown solid {name!r}")
    perms, adj = _rotation_group(coords)
    G = PermGroup(len(coords), small_generating_set(len(coords), perms))
    if G.order != len(perms):
        raise AssertionError("rotation set is not a group")
    Y = simplicial_complex(_triangles(adj))
    return Y, vertex_action(Y, G)


TRIANGLE_SOLIDS = {(2, 3, 3): "tetrahedron", (2, 3, 4): "octahedron", (2, 3, 5): "icosahedron"}


def triangle_orbifold_cog(n: int):
    """Quotient complex of groups of the rotation action giving S^2(2,3,n)."""
    from orbispace.quotient import quotient_cog
    from orbispace.scwol import regularize_action
    Y, act = platonic(TRIANGLE_SOLIDS[(2, 3, n)])
    Y, act = regularize_action(Y, act)
    return quotient_cog(Y, act).cog


# -- complexes of groups -----------------------------------------------------


def segment_of_groups(A: PermGroup, B: PermGroup, E: PermGroup | None = None,
                      psi_a=None, psi_b=None) -> ComplexOfGroups:
    """One edge ``0,1`` with vertex groups ``A`` at ``0`` and ``B`` at ``1``.

    ``psi_a``/``psi_b`` give images of ``E``'s generators; default trivial
    edge group.
    """
    X = path(1)
    E = E or trivial_group()
    psi = {("0,1", "0"): tuple(psi_a or ()), ("0,1", "1"): tuple(psi_b or ())}
    return ComplexOfGroups(X, {"0": A, "1": B, "0,1": E}, psi)


def mapping_torus(G: PermGroup, tau_images) -> ComplexOfGroups:
    """Constant group ``G`` over a triangle circle; one edge carries the
    automorphism given by ``tau_images`` (images of ``G``'s generators)."""
    X = cycle(3)
    psi = {a: G.generators for a in X.edges}
    psi[X.edges[0]] = tuple(tuple(x) for x in tau_images)
    return ComplexOfGroups(X, {c: G for c in X.ids}, psi)


def trivial_action(Y: CellComplex, G: PermGroup) -> SimplicialAction:
    n = len(Y)
    return SimplicialAction(Y, G, tuple(tuple(range(n)) for _ in G.generators))


# -- random actions ----------------------------------------------------------


def random_action(rng: random.Random, G: PermGroup, max_cells: int = 100,
                  max_dim: int = 2, copies: int | None = None, connected: bool = False):
    """Orbit closure of random simplices on ``copies`` disjoint copies of
    ``G``'s natural permutation set.  Returns ``(Y, act)`` with at most
    ``max_cells`` cells (at least one vertex orbit is always present).
    With ``connected`` the result is coned off at a fixed apex ``c``."""
    n = G.degree
    copies = copies or rng.randint(1, 2)
    labels = [f"{i}.{c}" for c in range(copies) for i in range(n)]
    big = PermGroup(n * copies, tuple(tuple(g[i] + c * n for c in range(copies)
                                            for i in range(n)) for g in G.generators))

    def build(fs):
        named = [tuple(labels[i] for i in f) for f in fs]
        return simplicial_complex(cone(named) if connected else named)

    facets: set = set()
    for _ in range(rng.randint(1, 6)):
        k = rng.randint(0, min(max_dim, len(labels) - 1))
        s = rng.sample(range(len(labels)), k + 1)
        orbit = {tuple(sorted(g[i] for i in s)) for g in big.elements}
        trial = facets | orbit
        if len(build(trial)) <= max_cells:
            facets = trial
    if not facets:
        facets = {(i,) for i in range(len(labels))}
    Y = build(facets)
    act = vertex_action(Y, big, labels)
    return Y, SimplicialAction(Y, G, act.cell_images)
