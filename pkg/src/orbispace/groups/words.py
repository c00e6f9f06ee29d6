"""Words and finitely presented groups.

A word is a tuple of nonzero ints: ``k`` is generator ``k-1`` and ``-k`` its
inverse.  The empty tuple is the identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from orbispace import perm as P

Word = tuple


def free_reduce(w) -> Word:
    out: list = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def invert(w) -> Word:
    return tuple(-x for x in reversed(w))


def power(w, k: int) -> Word:
    if k < 0:
        return invert(w) * (-k)
    return tuple(w) * k


def cyclic_conjugates(w) -> list:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def canonical_relator(w) -> Word:
    """Least cyclic conjugate of ``w`` or its inverse; identifies relators
    that define the same normal-subgroup generator."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    cands = cyclic_conjugates(w) + cyclic_conjugates(invert(w))
    return min(cands, key=lambda u: tuple((abs(x), x < 0) for x in u))


def exponent_sums(w, ngens: int) -> list:
    v = [0] * ngens
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def substitute(w, images) -> Word:
    """Replace generator ``k`` by the word ``images[k-1]``."""
    out: list = []
    for x in w:
        img = images[abs(x) - 1]
        out.extend(img if x > 0 else invert(img))
    return free_reduce(out)


def evaluate(w, images, degree: int):
    """Image of ``w`` under the homomorphism given by generator images."""
    invs: dict = {}
    result = P.identity(degree)
    for x in w:
        if x > 0:
            g = images[x - 1]
        else:
            g = invs.get(x)
            if g is None:
                g = invs[x] = P.inv(images[-x - 1])
        result = P.mul(result, g)
    return result


@dataclass(frozen=True)
class Presentation:
    """Finitely presented group ``< generators | relators >``.

    Relators are stored freely and cyclically reduced, empty relators dropped.
    """

    generators: tuple
    relators: tuple = ()

    def __post_init__(self):
        gens = tuple(str(g) for g in self.generators)
        if len(set(gens)) != len(gens):
            raise ValueError("duplicate generator names")
        n = len(gens)
        rels = []
        for r in self.relators:
            r = tuple(int(x) for x in r)
            if any(x == 0 or abs(x) > n for x in r):
                raise ValueError(f"relator {r!r} references an undeclared generator")
            r = cyclic_reduce(r)
            if r:
                rels.append(r)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @cached_property
    def _name_index(self) -> dict:
        return {g: i for i, g in enumerate(self.generators)}

    def check_word(self, w) -> Word:
        w = tuple(int(x) for x in w)
        if any(x == 0 or abs(x) > self.ngens for x in w):
            raise ValueError(f"word {w!r} references an undeclared generator")
        return free_reduce(w)

    def parse_word(self, text: str) -> Word:
        """Parse ``"a b^-1 (a b)^3"`` style text; ``1`` or empty is the identity."""
        return free_reduce(_parse_word(text.strip(), self._name_index))

    def format_word(self, w) -> str:
        if not w:
            return "1"
        parts = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            name = self.generators[abs(w[i]) - 1]
            k = (j - i) * (1 if w[i] > 0 else -1)
            parts.append(name if k == 1 else f"{name}^{k}")
            i = j
        return " ".join(parts)

    def to_text(self) -> str:
        """Plain-text export: a ``generators`` header then one relator per line."""
        lines = ["generators " + " ".join(self.generators)]
        lines += [self.format_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("generators"):
            raise ValueError("presentation text must start with a 'generators' line")
        gens = tuple(lines[0].split()[1:])
        index = {g: i for i, g in enumerate(gens)}
        rels = tuple(_parse_word(ln, index) for ln in lines[1:])
        return cls(gens, rels)

    def is_relator_satisfied(self, images, degree: int) -> bool:
        e = P.identity(degree)
        return all(evaluate(r, images, degree) == e for r in self.relators)


_TOKEN_RE = re.compile(r"\s*(\(|\)|\^-?\d+|[^\s()^]+)")


def _parse_word(text: str, index: dict) -> Word:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse word at column {pos + 1}: {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    out, k = _parse_seq(tokens, 0, index)
    if k != len(tokens):
        raise ValueError(f"unbalanced parentheses in {text!r}")
    return tuple(out)


def _parse_seq(tokens, k, index):
    out: list = []
    while k < len(tokens) and tokens[k] != ")":
        t = tokens[k]
        if t == "(":
            inner, k = _parse_seq(tokens, k + 1, index)
            if k >= len(tokens) or tokens[k] != ")":
                raise ValueError("unbalanced parentheses")
            unit = tuple(inner)
        elif t.startswith("^"):
            raise ValueError("exponent without base")
        elif t == "1":
            unit = ()
        else:
            if t not in index:
                raise ValueError(f"unknown generator {t!r}")
            unit = (index[t] + 1,)
        k += 1
        if k < len(tokens) and tokens[k].startswith("^"):
            unit = power(unit, int(tokens[k][1:]))
            k += 1
        out.extend(unit)
    return out, k


@dataclass
class Simplification:
    """Result of Tietze simplification.

    ``images[i]`` expresses original generator ``i`` as a word in the
    generators of ``presentation``; ``kept[j]`` is the original index of new
    generator ``j``.
    """

    presentation: Presentation
    images: list
    kept: list = field(default_factory=list)

    def map_word(self, w) -> Word:
        return substitute(w, self.images)


def _replace(w, g: int, expr) -> Word:
    inv = invert(expr)
    out = []
    for x in w:
        if x == g:
            out.extend(expr)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return free_reduce(out)


class _RelatorPool:
    """Canonical relators with an index from generators to relators."""

    def __init__(self, rels):
        self.rels: dict = {}
        self.canon: dict = {}
        self.where: dict = {}
        self.next_id = 0
        for r in rels:
            self.add(r)

    def add(self, r):
        c = canonical_relator(r)
        if not c or c in self.canon:
            return
        rid = self.next_id
        self.next_id += 1
        self.rels[rid] = c
        self.canon[c] = rid
        for x in c:
            self.where.setdefault(abs(x), set()).add(rid)

    def remove(self, rid):
        c = self.rels.pop(rid)
        del self.canon[c]
        for x in c:
            self.where[abs(x)].discard(rid)

    def eliminate(self, rid, g: int, expr):
        self.remove(rid)
        touched = sorted(self.where.get(g, ()))
        old = [self.rels[t] for t in touched]
        for t in touched:
            self.remove(t)
        for r in old:
            self.add(_replace(r, g, expr))

    def ordered(self) -> list:
        return [self.rels[k] for k in sorted(self.rels)]


def _solve(r, g):
    """``r = u x^e v`` with ``x = g`` once: return ``x`` as ``u^-1 v^-1`` (or its inverse)."""
    pos = next(i for i, x in enumerate(r) if abs(x) == g)
    expr = free_reduce(invert(r[:pos]) + invert(r[pos + 1:]))
    return expr if r[pos] > 0 else invert(expr)


def simplify(pres: Presentation, max_length: int = 4, growth: float = 1.5) -> Simplification:
    """Tietze-eliminate generators that occur exactly once in some relator.

    Relators of length one or two are used first.  After that, eliminations
    through relators of length <= ``max_length`` are always taken; longer
    ones only while total relator length stays within ``growth`` times its
    size at the previous step.
    """
    n = pres.ngens
    pool = _RelatorPool(pres.relators)
    alive = [True] * n
    steps = []  # (generator, expression over generators alive at that time)
    while True:
        short = None
        for rid in sorted(pool.rels):
            r = pool.rels[rid]
            if len(r) == 1 or (len(r) == 2 and abs(r[0]) != abs(r[1])):
                short = (rid, abs(r[-1]))
                break
        if short is not None:
            rid, g = short
        else:
            best = None
            total = sum(len(r) for r in pool.rels.values())
            for rid in sorted(pool.rels):
                r = pool.rels[rid]
                counts: dict = {}
                for x in r:
                    counts[abs(x)] = counts.get(abs(x), 0) + 1
                for g, c in counts.items():
                    if c != 1:
                        continue
                    occ = sum(pool.rels[t].count(g) + pool.rels[t].count(-g)
                              for t in pool.where[g]) - 1
                    key = (occ * (len(r) - 2), len(r), rid, g)
                    if best is None or key < best:
                        best = key
            if best is None:
                break
            cost, length, rid, g = best
            if length > max_length and total + cost > growth * max(total, 1):
                break
        expr = _solve(pool.rels[rid], g)
        pool.eliminate(rid, g, expr)
        steps.append((g, expr))
        alive[g - 1] = False
    # resolve images: an expression only uses generators eliminated later
    final = {}
    for g, expr in reversed(steps):
        out = []
        for x in expr:
            w = final.get(abs(x), (abs(x),))
            out.extend(w if x > 0 else invert(w))
        final[g] = free_reduce(out)
    subst = [final.get(i + 1, (i + 1,)) for i in range(n)]
    kept = [i for i in range(n) if alive[i]]
    renum = {old + 1: new + 1 for new, old in enumerate(kept)}

    def rn(w):
        return tuple(renum[x] if x > 0 else -renum[-x] for x in w)

    new = Presentation(tuple(pres.generators[i] for i in kept),
                       tuple(rn(r) for r in pool.ordered()))
    return Simplification(new, [rn(s) for s in subst], kept)


def _dedupe(rels) -> list:
    seen = set()
    out = []
    for r in rels:
        c = canonical_relator(r)
        if c and c not in seen:
            seen.add(c)
            out.append(c)
    return out
