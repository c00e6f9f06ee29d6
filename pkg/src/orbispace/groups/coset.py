"""Todd-Coxeter coset enumeration (HLT with lookahead compaction)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from orbispace.groups.words import Presentation, free_reduce

DEFAULT_COSET_CAP = 10**5


@dataclass(frozen=True)
class CosetTable:
    """Closed coset table of ``H`` in ``G``.

    ``action[i][c]`` is the coset reached from coset ``c`` by generator
    ``i`` (right action).  Coset 0 is ``H`` itself; cosets are numbered by
    first appearance in a breadth-first scan, so tables are canonical.
    """

    presentation: Presentation
    subgroup_words: tuple
    action: tuple

    @property
    def cosets(self) -> int:
        return len(self.action[0]) if self.action else 1

    def trace(self, coset: int, w) -> int:
        inv = self.inverse_action
        for x in w:
            coset = self.action[x - 1][coset] if x > 0 else inv[-x - 1][coset]
        return coset

    @cached_property
    def inverse_action(self) -> tuple:
        inv = []
        for row in self.action:
            r = [0] * len(row)
            for c, d in enumerate(row):
                r[d] = c
            inv.append(tuple(r))
        return tuple(inv)

    def permutations(self) -> list:
        """Generator images as permutations of the cosets (a homomorphism
        under the right-action product convention)."""
        return [tuple(row) for row in self.action]

    def is_valid(self) -> bool:
        """Closed, every relator trivial at every coset, H fixes coset 0."""
        n = self.cosets
        for row in self.action:
            if sorted(row) != list(range(n)):
                return False
        for r in self.presentation.relators:
            if any(self.trace(c, r) != c for c in range(n)):
                return False
        return all(self.trace(0, w) == 0 for w in self.subgroup_words)


@dataclass(frozen=True)
class Overflow:
    """Enumeration did not close within the cap (index possibly infinite)."""

    cap: int
    defined: int

    def __bool__(self) -> bool:
        return False


def todd_coxeter(pres: Presentation, subgroup_words=(), cap: int = DEFAULT_COSET_CAP,
                 budget=None):
    """Enumerate the cosets of ``<subgroup_words>`` in ``pres``.

    Returns a :class:`CosetTable` or :class:`Overflow` when more than
    ``cap`` live cosets would be needed.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    hwords = tuple(pres.check_word(w) for w in subgroup_words)
    enum = _Enumerator(pres, hwords, cap, budget)
    if not enum.run():
        return Overflow(cap, enum.defined)
    return CosetTable(pres, hwords, enum.standardize())


class _Enumerator:
    def __init__(self, pres, hwords, cap, budget):
        self.ncols = 2 * pres.ngens
        self.rels = [self._cols(r) for r in pres.relators]
        self.hwords = [self._cols(w) for w in hwords if w]
        self.cap = cap
        self.budget = budget
        self.table = [[-1] * self.ncols]
        self.p = [0]
        self.live = 1
        self.defined = 1
        self.queue: list = []
        self.pos = 0

    @staticmethod
    def _cols(w):
        return [2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in w]

    # -- coset bookkeeping --------------------------------------------
    def rep(self, c):
        p = self.p
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def define(self, c, x):
        if self.live >= self.cap:
            raise _Full
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(d)
        self.live += 1
        self.defined += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        if self.budget is not None and self.defined % 4096 == 0:
            self.budget.poll()
        return d

    def merge(self, k, l):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        if k > l:
            k, l = l, k
        self.p[l] = k
        self.live -= 1
        self.queue.append(l)

    def coincidence(self, a, b):
        self.merge(a, b)
        q = self.queue
        i = 0
        table = self.table
        while i < len(q):
            g = q[i]
            i += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu = self.rep(g)
                nu = self.rep(d)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x])
                elif table[nu][x ^ 1] >= 0:
                    self.merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu
        q.clear()

    def scan(self, a, w, fill):
        """Trace ``w`` at coset ``a``; deduce, or define new cosets if ``fill``."""
        table = self.table
        n = len(w)
        while True:
            f, i = a, 0
            while i < n:
                nxt = table[f][w[i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            else:
                if f != a:
                    self.coincidence(f, a)
                return
            b, j = a, n - 1
            while j >= i:
                nxt = table[b][w[j] ^ 1]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])

    def lookahead(self):
        for c in range(len(self.table)):
            if self.p[c] != c:
                continue
            for w in self.rels:
                if self.p[c] != c:
                    break
                self.scan(c, w, fill=False)

    # -- main loop ----------------------------------------------------
    def run(self) -> bool:
        compacted = False
        while True:
            try:
                for w in self.hwords:
                    self.scan(self.rep(0), w, fill=True)
                self._hlt()
                return True
            except _Full:
                if compacted:
                    return False
                before = self.live
                self.lookahead()
                if before - self.live < self.cap // 10:
                    return False
                compacted = True

    def _hlt(self):
        while self.pos < len(self.table):
            a = self.pos
            if self.p[a] == a:
                for w in self.rels:
                    if self.p[a] != a:
                        break
                    self.scan(a, w, fill=True)
                if self.p[a] == a:
                    row = self.table[a]
                    for x in range(self.ncols):
                        if row[x] < 0:
                            self.define(a, x)
            self.pos += 1

    def standardize(self) -> tuple:
        """Renumber live cosets by breadth-first first appearance."""
        order = {self.rep(0): 0}
        seq = [self.rep(0)]
        i = 0
        while i < len(seq):
            c = seq[i]
            i += 1
            for x in range(0, self.ncols, 2):
                d = self.rep(self.table[c][x])
                if d not in order:
                    order[d] = len(seq)
                    seq.append(d)
            for x in range(1, self.ncols, 2):
                d = self.rep(self.table[c][x])
                if d not in order:
                    order[d] = len(seq)
                    seq.append(d)
        ngens = self.ncols // 2
        return tuple(tuple(order[self.rep(self.table[c][2 * g])] for c in seq)
                     for g in range(ngens))


class _Full(Exception):
    pass


def group_order(pres: Presentation, cap: int = DEFAULT_COSET_CAP, budget=None):
    """Order of the group by enumerating the trivial subgroup, or Overflow."""
    t = todd_coxeter(pres, (), cap, budget)
    return t.cosets if isinstance(t, CosetTable) else t


def word_acts_trivially(table: CosetTable, w) -> bool:
    w = free_reduce(w)
    return all(table.trace(c, w) == c for c in range(table.cosets))
