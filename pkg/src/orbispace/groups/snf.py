"""Exact integer Smith/Hermite normal forms and finitely generated abelian groups."""
from __future__ import annotations

from dataclasses import dataclass

from orbispace.groups.words import Presentation, exponent_sums


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(A, B):
    if not A:
        return []
    m = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(m)] for row in A]


def smith_normal_form(M):
    """Smith normal form of an integer matrix.

    Returns ``(invariants, U, V)`` with ``U @ M @ V`` diagonal, ``U`` and
    ``V`` unimodular, and ``invariants`` the positive diagonal entries in
    divisibility order.  Zero matrices give no invariants.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    if any(len(row) != n for row in A):
        raise ValueError("ragged matrix")
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col_dst += k * col_src
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    add_row(t, i, -q)
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    add_col(t, j, -q)
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the rest of the lower-right block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % A[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    invariants = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return invariants, U, V


def hermite_rows(rows, ncols: int):
    """Row-style Hermite normal form basis of the lattice spanned by ``rows``.

    Canonical: two row sets span the same lattice iff their forms agree.
    """
    A = [[int(x) for x in r] for r in rows if any(r)]
    basis: list = []
    for col in range(ncols):
        piv = None
        rest = []
        for r in A:
            if r[col] == 0:
                rest.append(r)
            elif piv is None:
                piv = r
            else:
                while r[col]:
                    q = piv[col] // r[col]
                    piv = [a - q * b for a, b in zip(piv, r)]
                    piv, r = r, piv
                if any(r):
                    rest.append(r)
        A = rest
        if piv is None:
            continue
        if piv[col] < 0:
            piv = [-x for x in piv]
        for k, b in enumerate(basis):
            q = b[col] // piv[col]
            if q:
                basis[k] = [x - q * y for x, y in zip(b, piv)]
        basis.append(piv)
    return [tuple(b) for b in basis]


def integer_kernel(M, ncols: int):
    """Basis of ``{x in Z^ncols : M x = 0}``."""
    if not M:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    inv, U, V = smith_normal_form(M)
    r = len(inv)
    return [tuple(V[i][j] for i in range(ncols)) for j in range(r, ncols)]


@dataclass(frozen=True)
class AbelianInvariants:
    """``Z^free_rank + Z/d1 + ... + Z/dk`` with ``d1 | d2 | ...`` and ``di >= 2``."""

    torsion: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t) or any(b % a for a, b in zip(t, t[1:])):
            raise ValueError(f"not an invariant-factor chain: {t}")
        object.__setattr__(self, "torsion", t)

    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def relation_matrix(pres: Presentation):
    return [exponent_sums(r, pres.ngens) for r in pres.relators]


def _eliminate_units(rows, ncols: int):
    """Drop generator/relator pairs whose coefficient is +-1.

    Each step is a unimodular change of basis followed by deleting a unit
    row and its column, so the cokernel is unchanged.  Returns the remaining
    rows as dense lists over the remaining columns.
    """
    live = [dict((j, x) for j, x in enumerate(r) if x) for r in rows]
    live = [r for r in live if r]
    cols = set(range(ncols))
    while True:
        best = None
        for k, r in enumerate(live):
            if best is not None and len(r) >= len(live[best[0]]):
                continue
            j = next((j for j, x in r.items() if abs(x) == 1), None)
            if j is not None:
                best = (k, j)
        if best is None:
            break
        k, j = best
        piv = live.pop(k)
        sign = piv[j]
        nxt = []
        for r in live:
            c = r.get(j)
            if c:
                f = c * sign  # sign is its own inverse
                for jj, x in piv.items():
                    v = r.get(jj, 0) - f * x
                    if v:
                        r[jj] = v
                    else:
                        r.pop(jj, None)
            if r:
                nxt.append(r)
        live = nxt
        cols.discard(j)
    order = sorted(cols)
    return [[r.get(j, 0) for j in order] for r in live], len(order)


def abelianization(pres: Presentation) -> AbelianInvariants:
    M, n = _eliminate_units(relation_matrix(pres), pres.ngens)
    inv, _, _ = smith_normal_form(M) if M else ([], None, None)
    return AbelianInvariants(tuple(d for d in inv if d > 1), n - len(inv))


def abelian_image_nonzero(pres: Presentation, w) -> bool:
    """True when ``w`` has nonzero image in the abelianization."""
    v = exponent_sums(w, pres.ngens)
    if not any(v):
        return False
    return not lattice_contains(relation_matrix(pres), v, pres.ngens)


def lattice_contains(rows, v, ncols: int) -> bool:
    basis = hermite_rows(rows, ncols)
    v = list(v)
    for b in basis:
        col = next(i for i, x in enumerate(b) if x)
        if v[col] % b[col]:
            return False
        q = v[col] // b[col]
        v = [a - q * c for a, c in zip(v, b)]
    return not any(v)


# -- exact sequences of finitely generated abelian groups ---------------------

@dataclass(frozen=True)
class AbelianGroup:
    """``Z/d1 + ... + Z/dn`` on the standard generators; ``di = 0`` means ``Z``."""

    orders: tuple = ()

    def __post_init__(self):
        o = tuple(int(d) for d in self.orders)
        if any(d < 0 for d in o):
            raise ValueError("orders must be non-negative")
        object.__setattr__(self, "orders", o)

    @property
    def rank(self) -> int:
        return len(self.orders)

    def relations(self):
        n = self.rank
        return [tuple(d if i == j else 0 for j in range(n)) for i, d in enumerate(self.orders) if d]


def _same_lattice(rows1, rows2, n) -> bool:
    return hermite_rows(rows1, n) == hermite_rows(rows2, n)


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    failure: int | None = None  # index of the first node where exactness fails
    reason: str = ""

    def __bool__(self) -> bool:
        return self.exact


def check_abelian_exact(groups, maps) -> ExactnessReport:
    """Check exactness of ``0 -> A0 -> A1 -> ... -> Ak -> 0``.

    ``maps[i]`` is an integer matrix of shape ``(rank A_{i+1}, rank A_i)``
    acting on column vectors.  Exactness is tested at every group ``A_i``:
    injectivity at ``A0``, surjectivity at ``Ak``, image = kernel between.
    """
    groups = [g if isinstance(g, AbelianGroup) else AbelianGroup(tuple(g)) for g in groups]
    if len(maps) != len(groups) - 1:
        raise ValueError("need exactly one map between consecutive groups")
    mats = []
    for i, M in enumerate(maps):
        M = [list(map(int, row)) for row in M]
        src, dst = groups[i].rank, groups[i + 1].rank
        if len(M) != dst or any(len(row) != src for row in M):
            raise ValueError(f"map {i} has shape mismatch: expected {dst}x{src}")
        mats.append(M)
    for i, M in enumerate(mats):
        if not _well_defined(M, groups[i], groups[i + 1]):
            return ExactnessReport(False, i, f"map {i} is not well defined on the quotient")
    for i, G in enumerate(groups):
        n = G.rank
        rel = list(G.relations())
        # kernel of outgoing map (everything if none)
        if i < len(mats):
            ker = _kernel(mats[i], G, groups[i + 1])
        else:
            ker = [tuple(int(a == b) for b in range(n)) for a in range(n)]
        # image of incoming map (zero if none)
        if i > 0:
            M = mats[i - 1]
            img = [tuple(M[r][c] for r in range(n)) for c in range(groups[i - 1].rank)]
        else:
            img = []
        if not _same_lattice(ker + rel, img + rel, n):
            return ExactnessReport(False, i, f"image != kernel at node {i}")
    return ExactnessReport(True)


def _well_defined(M, A: AbelianGroup, B: AbelianGroup) -> bool:
    relB = B.relations()
    for r in A.relations():
        img = [sum(M[k][j] * r[j] for j in range(A.rank)) for k in range(B.rank)]
        if any(img) and not lattice_contains(relB, img, B.rank):
            return False
    return True


def _kernel(M, A: AbelianGroup, B: AbelianGroup):
    """Lift to ``Z^rank A`` of the kernel of ``M`` modulo B's relations."""
    n, m = A.rank, B.rank
    if m == 0:
        return [tuple(int(a == b) for b in range(n)) for a in range(n)]
    relB = B.relations()
    # solve M x + D y = 0 over the integers
    big = [list(M[k]) + [rb[k] for rb in relB] for k in range(m)]
    sol = integer_kernel(big, n + len(relB))
    return [tuple(s[:n]) for s in sol]
