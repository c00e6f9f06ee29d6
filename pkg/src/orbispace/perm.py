"""Permutations as tuples of images on ``0..n-1``.

Products follow the right-action convention: ``mul(p, q)`` applies ``p``
first, then ``q`` (so ``x^(pq) = (x^p)^q``).  Cycle notation is 1-based,
``(1 2 3)`` sending 1 to 2, 2 to 3 and 3 to 1.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

Perm = tuple  # tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_identity(p: Perm) -> bool:
    return all(i == x for i, x in enumerate(p))


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(q[x] for x in p)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = inv(p), -k
    result = identity(len(p))
    base = p
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def conj(p: Perm, g: Perm) -> Perm:
    """Return ``g^-1 p g``."""
    return mul(mul(inv(g), p), g)


def order(p: Perm) -> int:
    from math import lcm

    result = 1
    for c in cycles(p):
        result = lcm(result, len(c))
    return result


def cycles(p: Perm) -> list[tuple[int, ...]]:
    """Nontrivial cycles of ``p`` (0-based), each starting at its least point."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        c = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            c.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(c))
    return out


def cycle_type(p: Perm) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def check_perm(p: Sequence[int]) -> None:
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation: {tuple(p)!r}")


def from_cycles(cyc: Iterable[Iterable[int]], n: int) -> Perm:
    """Build a permutation of degree ``n`` from 0-based cycles."""
    img = list(range(n))
    seen = set()
    for c in cyc:
        c = list(c)
        for x in c:
            if not 0 <= x < n:
                raise ValueError(f"point {x + 1} outside degree {n}")
            if x in seen:
                raise ValueError(f"point {x + 1} repeated in cycle notation")
            seen.add(x)
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return tuple(img)


def split_cycles(text: str) -> list[list[str]]:
    """Split ``"(a b)(c d e)"`` into token lists; ``"()"`` gives ``[]``."""
    text = text.strip()
    if not text:
        raise ValueError("empty permutation")
    rest = _CYCLE_RE.sub("", text)
    if rest.strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    return [m.split() for m in _CYCLE_RE.findall(text) if m.split()]


def parse_cycles(text: str, n: int) -> Perm:
    """Parse 1-based disjoint-cycle notation such as ``(1 2)(3 4)``."""
    cyc = []
    for tokens in split_cycles(text):
        try:
            cyc.append([int(t) - 1 for t in tokens])
        except ValueError:
            raise ValueError(f"non-integer point in {text!r}") from None
    return from_cycles(cyc, n)


def format_cycles(p: Perm) -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(x + 1) for x in c) + ")" for c in cs)
