"""Homomorphism search into symmetric groups and word-problem verdicts.

Nontriviality is only ever claimed with an explicit witness (a permutation
representation or a nonzero abelianized image); triviality only with a
replayable rewriting trace or a closed coset table.
"""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from orbispace import perm as P
from orbispace.groups.coset import CosetTable, todd_coxeter
from orbispace.groups.snf import abelian_image_nonzero
from orbispace.groups.words import (Presentation, cyclic_conjugates, evaluate,
                                    free_reduce, invert, simplify)


class Cancelled(RuntimeError):
    pass


@dataclass
class Budget:
    """Search limits plus a cooperative cancellation flag.

    ``spent`` records what each search consumed, for reporting.
    """

    cap_cosets: int = 10**5
    cap_closure: int = 10**6
    hom_degree: int = 8
    verdict_cosets: int = 20000
    cancel: threading.Event = field(default_factory=threading.Event)
    spent: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("cap_cosets", "cap_closure", "hom_degree", "verdict_cosets"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def poll(self):
        if self.cancel.is_set():
            raise Cancelled("search cancelled")

    def note(self, key: str, amount: int = 1):
        self.spent[key] = self.spent.get(key, 0) + amount


@dataclass(frozen=True)
class Homomorphism:
    """Generator images in ``S_degree`` satisfying every relator."""

    degree: int
    images: tuple

    def __call__(self, w):
        return evaluate(w, self.images, self.degree)

    def image_group(self):
        from orbispace.groups.permgroup import PermGroup
        return PermGroup(self.degree, self.images)

    def satisfies(self, pres: Presentation) -> bool:
        return pres.is_relator_satisfied(self.images, self.degree)


class NotFound:
    """No homomorphism found within the degree cap (not a disproof)."""

    def __init__(self, degree_cap: int):
        self.degree_cap = degree_cap

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NotFound(degree_cap={self.degree_cap})"


def _class_reps(n: int) -> list:
    """One permutation per cycle type of ``S_n``."""
    reps = []
    for parts in _partitions(n):
        img = list(range(n))
        start = 0
        for k in parts:
            block = list(range(start, start + k))
            for a, b in zip(block, block[1:] + block[:1]):
                img[a] = b
            start += k
        reps.append(tuple(img))
    return sorted(reps)


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def _power_bounds(pres: Presentation) -> dict:
    """Generator index -> exponent ``k`` from relators of the form ``x^k``."""
    bounds: dict = {}
    for r in pres.relators:
        if len(set(map(abs, r))) == 1:
            g = abs(r[0]) - 1
            k = abs(sum(1 if x > 0 else -1 for x in r))
            if k:
                from math import gcd
                bounds[g] = gcd(bounds.get(g, 0), k)
    return bounds


def _search(pres: Presentation, constraints, degree: int, budget, count_only=False,
            symmetry=True):
    """Backtracking over generator images in ``S_degree``.

    Yields homomorphisms (as image tuples) in a deterministic order.  With
    ``symmetry`` the first generator is restricted to cycle-type
    representatives, which is harmless for existence questions.
    """
    n = pres.ngens
    all_perms = list(itertools.permutations(range(degree)))
    bounds = _power_bounds(pres)
    e = P.identity(degree)
    cands = []
    for g in range(n):
        k = bounds.get(g)
        if k is None:
            cands.append(all_perms)
        else:
            cands.append([p for p in all_perms if P.power(p, k) == e])
    # assignment order: most constrained generators first
    order = sorted(range(n), key=lambda g: (len(cands[g]), g))
    pos = {g: i for i, g in enumerate(order)}
    # relators and constraints become checkable once their last generator is set
    rel_at = [[] for _ in range(n)]
    for r in pres.relators:
        rel_at[max(pos[abs(x) - 1] for x in r)].append(r)
    con_at = [[] for _ in range(n + 1)]
    for words in constraints:
        gens = {abs(x) - 1 for w in words for x in w}
        lvl = max((pos[g] for g in gens), default=-1)
        con_at[lvl + 1 if lvl >= 0 else 0].append(words)
    images = [None] * n

    def ok_constraints(level):
        for words in con_at[level]:
            seen = set()
            for w in words:
                x = evaluate(w, images, degree)
                if x in seen:
                    return False
                seen.add(x)
        return True

    if not ok_constraints(0):
        return
    steps = 0

    def rec(level):
        nonlocal steps
        if level == n:
            yield tuple(images)
            return
        g = order[level]
        options = cands[g]
        if symmetry and level == 0:
            reps = set(_class_reps(degree))
            options = [p for p in options if p in reps]
        for p in options:
            steps += 1
            if budget is not None and steps % 2048 == 0:
                budget.poll()
            images[g] = p
            if all(evaluate(r, images, degree) == e for r in rel_at[level]) \
                    and ok_constraints(level + 1):
                yield from rec(level + 1)
        images[g] = None

    yield from rec(0)


def hom_search(pres: Presentation, constraints=(), degree_cap: int = 8, budget=None,
               min_degree: int = 1):
    """Find a homomorphism into ``S_n`` (smallest ``n`` first) that is injective
    on every constrained word list.

    ``constraints`` is a list of word lists; the images of the words in each
    list must be pairwise distinct.  Returns :class:`Homomorphism` or
    :class:`NotFound`.
    """
    simp = simplify(pres)
    small = simp.presentation
    cons = [[simp.map_word(pres.check_word(w)) for w in words] for words in constraints]
    for d in range(min_degree, degree_cap + 1):
        if budget is not None:
            budget.note("hom_degree_tried")
        for imgs in _search(small, cons, d, budget):
            full = tuple(evaluate(w, imgs, d) for w in simp.images)
            hom = Homomorphism(d, full)
            assert hom.satisfies(pres)
            return hom
    return NotFound(degree_cap)


def count_homs(pres: Presentation, degree: int, budget=None) -> int:
    """Number of homomorphisms from the presented group into ``S_degree``."""
    simp = simplify(pres)
    return sum(1 for _ in _search(simp.presentation, (), degree, budget, symmetry=False))


# -- word verdicts -----------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    """Replace ``word[start:stop]`` by ``replacement``.

    Valid when the removed piece times the inverse of the replacement is a
    cyclic conjugate of a relator or its inverse, or when the step is a
    free cancellation (``relator`` is None and the piece is ``x x^-1``).
    """

    start: int
    stop: int
    replacement: tuple
    relator: int | None


@dataclass(frozen=True)
class Trivial:
    word: tuple
    trace: tuple = ()           # RewriteSteps taking word to the empty word
    table: CosetTable | None = None

    def replay(self, pres: Presentation) -> bool:
        if self.table is not None:
            t = self.table
            return t.is_valid() and t.presentation == pres and all(
                t.trace(c, self.word) == c for c in range(t.cosets))
        return replay_trace(pres, self.word, self.trace)


@dataclass(frozen=True)
class Nontrivial:
    word: tuple
    witness: Homomorphism | None = None
    abelian: bool = False

    def replay(self, pres: Presentation) -> bool:
        if self.abelian:
            return abelian_image_nonzero(pres, self.word)
        h = self.witness
        return h is not None and h.satisfies(pres) and not P.is_identity(h(self.word))


@dataclass(frozen=True)
class Unknown:
    word: tuple
    spent: dict = field(default_factory=dict)


def replay_trace(pres: Presentation, word, trace) -> bool:
    w = tuple(word)
    for st in trace:
        piece = w[st.start:st.stop]
        rep = tuple(st.replacement)
        if st.relator is None:
            if not (len(piece) == 2 and piece[0] == -piece[1] and rep == ()):
                return False
        else:
            if not 0 <= st.relator < len(pres.relators):
                return False
            r = pres.relators[st.relator]
            target = free_reduce(piece + invert(rep))
            conj = cyclic_conjugates(r) + cyclic_conjugates(invert(r))
            if piece + invert(rep) not in conj and target not in conj:
                return False
        w = w[:st.start] + rep + w[st.stop:]
    return w == ()


def dehn_reduce(pres: Presentation, word, max_steps: int = 10000):
    """Greedy Dehn-style rewriting; returns (final word, steps)."""
    pieces = []
    for ri, r in enumerate(pres.relators):
        for c in cyclic_conjugates(r) + cyclic_conjugates(invert(r)):
            L = len(c)
            for k in range(L // 2 + 1, L + 1):
                # c = u v with |u| = k > |v|: replace u by v^-1
                pieces.append((c[:k], invert(c[k:]), ri))
    pieces.sort(key=lambda t: (-(len(t[0]) - len(t[1])), t[0]))
    w = tuple(word)
    steps: list = []
    while len(steps) < max_steps:
        i = next((i for i in range(len(w) - 1) if w[i] == -w[i + 1]), None)
        if i is not None:
            steps.append(RewriteStep(i, i + 2, (), None))
            w = w[:i] + w[i + 2:]
            continue
        hit = None
        for u, v, ri in pieces:
            k = _find(w, u)
            if k >= 0:
                hit = (k, u, v, ri)
                break
        if hit is None:
            break
        k, u, v, ri = hit
        steps.append(RewriteStep(k, k + len(u), v, ri))
        w = w[:k] + v + w[k + len(u):]
    return w, tuple(steps)


def _find(w, u) -> int:
    n = len(u)
    for i in range(len(w) - n + 1):
        if w[i:i + n] == u:
            return i
    return -1


def word_verdict(pres: Presentation, w, budget: Budget | None = None):
    """Decide whether ``w`` is trivial, with a certificate either way, or
    report :class:`Unknown`.

    Tries, in order: Dehn rewriting, coset enumeration of the trivial
    subgroup (regular representation), the abelianized image, and
    homomorphism search.  Coset-table certificates refer to ``pres`` itself,
    so callers with large presentations should pass a simplified one.
    """
    budget = budget or Budget()
    w = pres.check_word(w)
    if not w:
        return Trivial(w, ())
    reduced, steps = dehn_reduce(pres, w)
    if not reduced:
        return Trivial(w, steps)
    table = todd_coxeter(pres, (), min(budget.verdict_cosets, budget.cap_cosets), budget)
    budget.note("verdict_enumerations")
    if isinstance(table, CosetTable):
        if all(table.trace(c, w) == c for c in range(table.cosets)):
            return Trivial(w, (), table)
        hom = Homomorphism(table.cosets, tuple(table.permutations()))
        return Nontrivial(w, hom)
    if abelian_image_nonzero(pres, w):
        return Nontrivial(w, abelian=True)
    hom = hom_search(pres, [[(), w]], budget.hom_degree, budget)
    if hom:
        return Nontrivial(w, hom)
    return Unknown(w, dict(budget.spent))
