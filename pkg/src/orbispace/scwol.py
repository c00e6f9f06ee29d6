"""Finite simplicial cell complexes, their barycentric-edge categories and
finite group actions on them.

Cells list only their codimension-1 faces; closures are derived.  The
barycentric edges ``E(X)`` are all pairs ``(sigma, tau)`` with ``tau`` a
proper face of ``sigma`` (any codimension), oriented from the higher to the
lower dimensional barycenter.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from orbispace import perm as P
from orbispace.groups.permgroup import PermGroup, extend_hom


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    id: str
    dim: int
    faces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "id", str(self.id))
        object.__setattr__(self, "faces", tuple(str(f) for f in self.faces))
        if self.dim < 0:
            raise ComplexError(f"cell {self.id}: negative dimension")
        if self.dim == 0 and self.faces:
            raise ComplexError(f"cell {self.id}: a 0-cell has no faces")
        if len(set(self.faces)) != len(self.faces):
            raise ComplexError(f"cell {self.id}: repeated face")


@dataclass(frozen=True)
class CellComplex:
    """Validated complex; ``cells`` in canonical order (dim, then id)."""

    cells: tuple

    def __post_init__(self):
        cells = tuple(sorted(self.cells, key=lambda c: (c.dim, c.id)))
        ids = [c.id for c in cells]
        if len(set(ids)) != len(ids):
            raise ComplexError("cell ids must be unique")
        by_id = {c.id: c for c in cells}
        for c in cells:
            for f in c.faces:
                if f not in by_id:
                    raise ComplexError(f"cell {c.id}: dangling face id {f!r}")
                if by_id[f].dim != c.dim - 1:
                    raise ComplexError(
                        f"cell {c.id}: face {f} has dim {by_id[f].dim}, expected {c.dim - 1}")
        object.__setattr__(self, "cells", cells)

    # -- basic structure ------------------------------------------------
    @cached_property
    def index(self) -> dict:
        return {c.id: i for i, c in enumerate(self.cells)}

    @cached_property
    def ids(self) -> tuple:
        return tuple(c.id for c in self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cid) -> bool:
        return cid in self.index

    def cell(self, cid) -> Cell:
        return self.cells[self.index[cid]]

    def dim_of(self, cid) -> int:
        return self.cells[self.index[cid]].dim

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def counts(self) -> list:
        out = [0] * (self.dimension + 1)
        for c in self.cells:
            out[c.dim] += 1
        return out

    @cached_property
    def closure(self) -> dict:
        """Cell id -> frozenset of all proper faces (any codimension)."""
        clo: dict = {}
        for c in self.cells:  # canonical order: faces come first
            s = set(c.faces)
            for f in c.faces:
                s |= clo[f]
            clo[c.id] = frozenset(s)
        return clo

    @cached_property
    def cofaces(self) -> dict:
        """Cell id -> ids of cells having it as a proper face."""
        co: dict = {c.id: set() for c in self.cells}
        for c in self.cells:
            for f in self.closure[c.id]:
                co[f].add(c.id)
        return {k: frozenset(v) for k, v in co.items()}

    @property
    def vertices(self) -> tuple:
        """V(X): one barycenter per cell."""
        return self.ids

    @cached_property
    def edges(self) -> tuple:
        """E(X): pairs ``(i(a), t(a))`` in canonical order."""
        out = []
        for c in self.cells:
            for f in sorted(self.closure[c.id], key=self.index.__getitem__):
                out.append((c.id, f))
        return tuple(out)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def is_connected(self) -> bool:
        if not self.cells:
            return True
        adj: dict = {c.id: set() for c in self.cells}
        for s, t in self.edges:
            adj[s].add(t)
            adj[t].add(s)
        seen = {self.cells[0].id}
        stack = [self.cells[0].id]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.cells)

    def subcomplex(self, ids) -> "CellComplex":
        keep = set(ids)
        for cid in list(keep):
            if not self.closure[cid] <= keep:
                raise ComplexError(f"cell set not closed under faces at {cid}")
        return CellComplex(tuple(c for c in self.cells if c.id in keep))


def build_complex(cells) -> CellComplex:
    """Validate cells (``Cell`` objects or ``(id, dim, faces)`` triples)."""
    cs = tuple(c if isinstance(c, Cell) else Cell(*c) for c in cells)
    return CellComplex(cs)


def simplicial_complex(facets) -> CellComplex:
    """Complex of all faces of the given vertex sets.

    Vertex labels become ids; a simplex on ``a, b, c`` gets id ``"a,b,c"``
    with vertices sorted.
    """
    simplices = set()
    for f in facets:
        vs = tuple(sorted(str(v) for v in f))
        if len(set(vs)) != len(vs):
            raise ComplexError(f"repeated vertex in {f!r}")
        for k in range(1, len(vs) + 1):
            simplices.update(combinations(vs, k))
    cells = []
    for s in simplices:
        faces = tuple(",".join(s[:i] + s[i + 1:]) for i in range(len(s))) if len(s) > 1 else ()
        cells.append(Cell(",".join(s), len(s) - 1, faces))
    return CellComplex(tuple(cells))


def composable_pairs(X: CellComplex) -> list:
    """Triples ``(a, b, ab)`` with ``i(a) = t(b)``, ``ab = (i(b), t(a))``."""
    out = []
    for b in X.edges:
        mid = b[1]
        for tau in sorted(X.closure[mid], key=X.index.__getitem__):
            a = (mid, tau)
            out.append((a, b, (b[0], tau)))
    return out


def euler_characteristic(X: CellComplex) -> int:
    return sum((-1) ** c.dim for c in X.cells)


def chain_id(chain) -> str:
    return "[" + "|".join(chain) + "]"


def barycentric_subdivision(X: CellComplex) -> CellComplex:
    """Cells are strictly increasing face chains ``s0 < s1 < ... < sk``."""
    chains = _chains(X)
    cells = []
    for ch in chains:
        k = len(ch) - 1
        faces = tuple(chain_id(ch[:i] + ch[i + 1:]) for i in range(len(ch))) if k else ()
        cells.append(Cell(chain_id(ch), k, faces))
    return CellComplex(tuple(cells))


def _chains(X: CellComplex) -> list:
    """All chains, each listed from lowest to highest dimension."""
    out = []

    def extend(ch):
        out.append(tuple(ch))
        top = ch[-1]
        for c in X.cofaces[top]:
            extend(ch + [c])

    for c in X.cells:
        extend([c.id])
    return out


# -- actions -----------------------------------------------------------------

@dataclass(frozen=True)
class SimplicialAction:
    """Right action of a permutation group on the cells of a complex.

    ``cell_images[k]`` is the image tuple (over ``complex.cells`` order) of
    generator ``k``.  ``x^(gh) = (x^g)^h``.
    """

    complex: CellComplex
    group: PermGroup
    cell_images: tuple

    def __post_init__(self):
        X = self.complex
        imgs = tuple(tuple(p) for p in self.cell_images)
        if len(imgs) != len(self.group.generators):
            raise ComplexError("need one cell permutation per group generator")
        for p in imgs:
            if len(p) != len(X):
                raise ComplexError("cell permutation has wrong length")
            P.check_perm(p)
            for i, c in enumerate(X.cells):
                img = X.cells[p[i]]
                if img.dim != c.dim:
                    raise ComplexError(f"action does not preserve dimension at {c.id}")
                if {X.ids[p[X.index[f]]] for f in c.faces} != set(img.faces):
                    raise ComplexError(f"action does not preserve faces at {c.id}")
        object.__setattr__(self, "cell_images", imgs)
        try:
            self._hom
        except ValueError as exc:
            raise ComplexError(f"cell permutations do not define an action: {exc}") from None

    @classmethod
    def from_cell_maps(cls, X: CellComplex, group: PermGroup, maps) -> "SimplicialAction":
        """``maps[k]`` is a dict id -> id for generator ``k`` (missing ids fixed)."""
        imgs = []
        for m in maps:
            imgs.append(tuple(X.index[m.get(c, c)] for c in X.ids))
        return cls(X, group, tuple(imgs))

    @classmethod
    def trivial(cls, X: CellComplex) -> "SimplicialAction":
        return cls(X, PermGroup(1), ())

    @cached_property
    def _hom(self) -> dict:
        return extend_hom(self.group, self.cell_images, len(self.complex))

    def cell_perm(self, g) -> tuple:
        g = tuple(g)
        if g not in self._hom:
            raise ComplexError(f"element {P.format_cycles(g)} is not in the group")
        return self._hom[g]

    def image(self, cid, g) -> str:
        X = self.complex
        return X.ids[self.cell_perm(g)[X.index[cid]]]

    def stabilizer(self, cid) -> list:
        i = self.complex.index[cid]
        return [g for g in self.group.elements if self._hom[g][i] == i]

    def orbits(self) -> list:
        """Cell-id orbits, each sorted canonically, ordered by least member."""
        X = self.complex
        seen = set()
        out = []
        for i in range(len(X)):
            if i in seen:
                continue
            orb = sorted({p[i] for p in self._hom.values()})
            seen.update(orb)
            out.append([X.ids[j] for j in orb])
        return out

    def is_faithful(self) -> bool:
        return len(set(self._hom.values())) == len(self._hom)

    def inversions(self) -> list:
        """``(cell, g)`` pairs where ``g`` fixes the cell but moves a face."""
        X = self.complex
        bad = []
        for g, p in self._hom.items():
            for i, c in enumerate(X.cells):
                if p[i] == i and any(p[X.index[f]] != X.index[f] for f in X.closure[c.id]):
                    bad.append((c.id, g))
        return bad

    def is_without_inversion(self) -> bool:
        return not self.inversions()

    def is_regular(self) -> bool:
        """Without inversion and no two faces of a cell share an orbit.

        The second condition makes the cell-orbit quotient a complex whose
        barycentric edges are still determined by their endpoints.
        """
        if not self.is_without_inversion():
            return False
        orbit_of = {}
        for k, orb in enumerate(self.orbits()):
            for cid in orb:
                orbit_of[cid] = k
        for c in self.complex.cells:
            clo = list(self.complex.closure[c.id]) + [c.id]
            if len({orbit_of[f] for f in clo}) != len(clo):
                return False
        return True

    def restrict(self, subgroup: PermGroup) -> "SimplicialAction":
        return SimplicialAction(self.complex, subgroup,
                                tuple(self.cell_perm(g) for g in subgroup.generators))


def regularize_action(X: CellComplex, act: SimplicialAction):
    """Return ``(X, act)`` if already regular, else the induced action on
    the barycentric subdivision (which always is)."""
    if act.complex != X:
        raise ComplexError("action is on a different complex")
    if act.is_regular():
        return X, act
    Y = barycentric_subdivision(X)
    imgs = []
    for p in act.cell_images:
        def f(cid):
            return X.ids[p[X.index[cid]]]
        imgs.append(tuple(Y.index[chain_id(tuple(f(c) for c in _parse_chain(cid)))]
                          for cid in Y.ids))
    return Y, SimplicialAction(Y, act.group, tuple(imgs))


def _parse_chain(cid: str) -> tuple:
    """Inverse of :func:`chain_id`, respecting nested brackets."""
    body = cid[1:-1]
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "|" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return tuple(parts)


def fixed_cells(act: SimplicialAction, g) -> list:
    p = act.cell_perm(g)
    return [cid for i, cid in enumerate(act.complex.ids) if p[i] == i]


def fixed_subcomplex(X: CellComplex, act: SimplicialAction, g) -> CellComplex:
    """Subcomplex of cells fixed by ``g`` (requires an action without inversion)."""
    if act.complex != X:
        raise ComplexError("action is on a different complex")
    return X.subcomplex(fixed_cells(act, g))
