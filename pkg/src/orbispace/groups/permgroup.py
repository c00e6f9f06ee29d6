"""Finite permutation groups by brute-force closure."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from orbispace import perm as P

DEFAULT_CLOSURE_CAP = 10**6


class CapExceeded(RuntimeError):
    """A closure or enumeration grew past its configured cap."""


@dataclass(frozen=True)
class PermGroup:
    """Group generated by permutations of ``{0..degree-1}``.

    Elements are enumerated on demand; :attr:`elements` is sorted
    lexicographically on image tuples, so the identity always comes first.
    """

    degree: int
    generators: tuple = ()
    cap: int = field(default=DEFAULT_CLOSURE_CAP, compare=False, repr=False)

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be positive")
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if len(g) != self.degree:
                raise ValueError(f"generator {g!r} has wrong degree")
            P.check_perm(g)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_cycles(cls, degree: int, *gens: str) -> "PermGroup":
        return cls(degree, tuple(P.parse_cycles(g, degree) for g in gens))

    @cached_property
    def elements(self) -> tuple:
        e = P.identity(self.degree)
        seen = {e}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = P.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > self.cap:
                            raise CapExceeded(
                                f"group closure exceeds cap {self.cap}")
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def index(self) -> dict:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def identity(self):
        return P.identity(self.degree)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self.index

    def __len__(self) -> int:
        return self.order

    def is_trivial(self) -> bool:
        return all(P.is_identity(g) for g in self.generators)

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(P.mul(a, b) == P.mul(b, a) for a in gs for b in gs)

    def subgroup(self, elements) -> "PermGroup":
        """Subgroup generated by ``elements``, with a greedy small generating set."""
        return PermGroup(self.degree, small_generating_set(self.degree, elements),
                         cap=self.cap)

    def centralizer(self, g) -> "PermGroup":
        return self.subgroup(h for h in self.elements
                             if P.mul(g, h) == P.mul(h, g))

    def word_for(self, g) -> tuple:
        """Shortest word (signed 1-based generator indices) evaluating to ``g``."""
        return self._words[tuple(g)]

    @cached_property
    def _words(self) -> dict:
        e = self.identity
        words = {e: ()}
        frontier = [e]
        while frontier:
            nxt = []
            for x in frontier:
                for i, g in enumerate(self.generators):
                    for letter, s in ((i + 1, g), (-(i + 1), P.inv(g))):
                        y = P.mul(x, s)
                        if y not in words:
                            words[y] = words[x] + (letter,)
                            nxt.append(y)
            frontier = nxt
        return words


def small_generating_set(degree: int, elements) -> tuple:
    """Greedy generating set: keep an element only if it enlarges the closure."""
    gens: list = []
    current = {P.identity(degree)}
    for g in sorted(set(map(tuple, elements))):
        if g in current:
            continue
        gens.append(g)
        current = set(PermGroup(degree, tuple(gens)).elements)
    return tuple(gens)


def close_group(G: PermGroup, cap: int | None = None) -> tuple[list, int]:
    """Enumerate ``G``: deterministic lexicographic element list and order."""
    if cap is not None and cap != G.cap:
        G = PermGroup(G.degree, G.generators, cap=cap)
    els = list(G.elements)
    return els, len(els)


def conjugacy_data(G: PermGroup) -> tuple[list[list], list[PermGroup]]:
    """Conjugacy classes (ordered by least element) and centralizers of their
    least elements."""
    els = G.elements
    placed: set = set()
    classes = []
    for g in els:
        if g in placed:
            continue
        cls = sorted({P.conj(g, h) for h in els})
        placed.update(cls)
        classes.append(cls)
    centralizers = [G.centralizer(c[0]) for c in classes]
    return classes, centralizers


def extend_hom(src: PermGroup, images, target_degree: int) -> dict:
    """Extend generator images to a map on all of ``src``.

    Raises ``ValueError`` when the images do not define a homomorphism.
    """
    images = tuple(tuple(x) for x in images)
    if len(images) != len(src.generators):
        raise ValueError("need one image per generator")
    for x in images:
        if len(x) != target_degree:
            raise ValueError(f"image {x!r} has wrong degree")
        P.check_perm(x)
    e = src.identity
    hom = {e: P.identity(target_degree)}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(src.generators, images):
                y = P.mul(x, g)
                fy = P.mul(hom[x], img)
                if y in hom:
                    if hom[y] != fy:
                        raise ValueError("generator images do not define a homomorphism")
                else:
                    hom[y] = fy
                    nxt.append(y)
        frontier = nxt
    # the BFS checks consistency along right multiplication by generators,
    # which already forces multiplicativity on the whole group
    return hom


def is_injective(hom: dict) -> bool:
    return len(set(hom.values())) == len(hom)
