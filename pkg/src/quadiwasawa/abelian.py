"""Finitely generated abelian groups over exact integers.

Everything here works on plain Python ints, so there is no overflow at any
size.  A presentation is a matrix whose *rows* are relations among the
generators (``relations @ x = 0``); :func:`cokernel` follows the column
convention of the lattice it quotients by, and :func:`presented_group` is the
row-convention shortcut used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, prod
from typing import Callable, Hashable, Iterable, Sequence

from sympy import factorint


class MalformedHom(ValueError):
    """A homomorphism matrix does not respect the orders of the domain."""


@dataclass(frozen=True)
class IntMatrix:
    nrows: int
    ncols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.nrows * self.ncols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.nrows}x{self.ncols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
        rows = [list(map(int, r)) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(nrows, ncols, (0,) * (nrows * ncols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], nrows: int | None = None, ncols: int | None = None) -> IntMatrix:
        nrows = len(diag) if nrows is None else nrows
        ncols = len(diag) if ncols is None else ncols
        rows = [[0] * ncols for _ in range(nrows)]
        for i, d in enumerate(diag):
            rows[i][i] = int(d)
        return cls.from_rows(rows, ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.ncols + j]

    def rows(self) -> list[list[int]]:
        n = self.ncols
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(self.nrows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.nrows)] for j in range(self.ncols)], self.nrows
        )

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        a, b = self.rows(), other.rows()
        cols = list(zip(*b)) if b else [()] * other.ncols
        out = [[sum(x * y for x, y in zip(r, c)) for c in cols] for r in a]
        if not a:
            return IntMatrix.zeros(0, other.ncols)
        return IntMatrix.from_rows(out, other.ncols)

    def diagonal_entries(self) -> list[int]:
        return [self[i, i] for i in range(min(self.nrows, self.ncols))]

    def determinant(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        s, u, v = smith_normal_form(self)
        return prod(s.diagonal_entries()) * _unimodular_det(u) * _unimodular_det(v)


def _unimodular_det(m: IntMatrix) -> int:
    # Fraction-free Bareiss elimination; exact for any integer matrix.
    a = m.rows()
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(S, U, V)`` with ``U @ m @ V == S`` and ``U, V`` unimodular.

    The pivot is always the nonzero entry of least absolute value in the
    remaining block, which keeps entry growth in check.  The diagonal of
    ``S`` is nonnegative and each entry divides the next.
    """
    a = m.rows()
    nr, nc = m.nrows, m.ncols
    u = IntMatrix.identity(nr).rows()
    v = IntMatrix.identity(nc).rows()

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(nc):
            if rs[k]:
                ra[k] += q * rs[k]
        ua, us = u[dst], u[src]
        for k in range(nr):
            if us[k]:
                ua[k] += q * us[k]

    def add_col(dst: int, src: int, q: int) -> None:
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        for row in v:
            if row[src]:
                row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                row = a[i]
                for j in range(t, nc):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        add_row(i, t, -q)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        add_col(j, t, -q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            # Pivot row and column are clear; enforce divisibility of the block.
            bad = next(
                (i for i in range(t + 1, nr) if any(a[i][j] % p for j in range(t + 1, nc))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (
        IntMatrix.from_rows(a, nc),
        IntMatrix.from_rows(u, nr),
        IntMatrix.from_rows(v, nc),
    )


def elementary_divisors(rows: Sequence[Sequence[int]], ncols: int) -> list[int]:
    """Diagonal of the Smith form (length ``min(len(rows), ncols)``)."""
    if not rows or ncols == 0:
        return []
    s, _, _ = smith_normal_form(IntMatrix.from_rows(rows, ncols))
    return s.diagonal_entries()


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group ``Z/d_1 x ... x Z/d_k`` with ``d_1 | ... | d_k``.

    Any list of positive cyclic orders is accepted and normalized to
    invariant-factor form; two groups are equal iff their factor sequences
    are.  Labels survive only when the input was already normalized.
    """

    invariant_factors: tuple[int, ...] = ()
    generator_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        raw = tuple(int(d) for d in self.invariant_factors)
        if any(d <= 0 for d in raw):
            raise ValueError(f"cyclic orders must be positive, got {raw}")
        norm = _normalize_orders(raw)
        labels = self.generator_labels
        if norm != raw or (labels is not None and len(labels) != len(norm)):
            labels = None
        object.__setattr__(self, "invariant_factors", norm)
        object.__setattr__(self, "generator_labels", tuple(labels) if labels else None)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def p_rank(self, p: int) -> int:
        return sum(1 for d in self.invariant_factors if d % p == 0)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)

    def __iter__(self):
        return iter(self.invariant_factors)


def _normalize_orders(orders: Iterable[int]) -> tuple[int, ...]:
    by_prime: dict[int, list[int]] = {}
    for d in orders:
        for p, e in factorint(d).items():
            by_prime.setdefault(p, []).append(p**e)
    if not by_prime:
        return ()
    width = max(len(v) for v in by_prime.values())
    out = [1] * width
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            out[width - 1 - i] *= q
    return tuple(out)


def cokernel(m: IntMatrix) -> tuple[FinAbGroup, int]:
    """``Z^nrows / (column lattice of m)`` as (finite part, free rank)."""
    if m.ncols == 0 or m.nrows == 0:
        return FinAbGroup(), m.nrows
    diag = smith_normal_form(m)[0].diagonal_entries()
    nonzero = [d for d in diag if d]
    free = m.nrows - len(nonzero)
    return FinAbGroup(tuple(d for d in nonzero if d != 1)), free


def presented_group(relations: Sequence[Sequence[int]], ngens: int) -> tuple[FinAbGroup, int]:
    """Group on ``ngens`` generators subject to the given relation rows."""
    if ngens == 0:
        return FinAbGroup(), 0
    rows = [list(r) for r in relations if any(r)]
    if not rows:
        return FinAbGroup(), ngens
    return cokernel(IntMatrix.from_rows(rows, ngens).transpose())


def ell_sylow(g: FinAbGroup, ell: int) -> FinAbGroup:
    parts = []
    for d in g.invariant_factors:
        q = 1
        while d % ell == 0:
            d //= ell
            q *= ell
        if q > 1:
            parts.append(q)
    return FinAbGroup(tuple(parts))


def ell_valuations(g: FinAbGroup, ell: int) -> list[int]:
    """Exponents ``a_i`` with ``ell_sylow(g) = sum Z/ell^a_i``, ascending."""
    out = []
    for d in ell_sylow(g, ell).invariant_factors:
        a = 0
        while d > 1:
            d //= ell
            a += 1
        out.append(a)
    return out


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by where each domain generator goes.

    ``matrix`` has one row per codomain generator and one column per domain
    generator.  Entries are kept as given; :meth:`validate` reduces them.
    """

    domain: FinAbGroup
    codomain: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.matrix.nrows != self.codomain.rank or self.matrix.ncols != self.domain.rank:
            raise MalformedHom(
                f"matrix is {self.matrix.nrows}x{self.matrix.ncols}, expected "
                f"{self.codomain.rank}x{self.domain.rank}"
            )

    @classmethod
    def from_images(cls, domain: FinAbGroup, codomain: FinAbGroup, images: Sequence[Sequence[int]]) -> GroupHom:
        cols = [list(v) for v in images]
        rows = [[c[i] for c in cols] for i in range(codomain.rank)]
        return cls(domain, codomain, IntMatrix.from_rows(rows, domain.rank))

    def image_of(self, j: int) -> list[int]:
        return [self.matrix[i, j] % d for i, d in enumerate(self.codomain.invariant_factors)]

    def validate(self) -> GroupHom:
        for j, dj in enumerate(self.domain.invariant_factors):
            for i, di in enumerate(self.codomain.invariant_factors):
                if (dj * self.matrix[i, j]) % di:
                    raise MalformedHom(
                        f"generator {j} has order {dj} but its image has nonzero "
                        f"coordinate {self.matrix[i, j]} mod {di} after scaling"
                    )
        return self


@dataclass(frozen=True)
class AltSquare:
    group: FinAbGroup
    pairs: tuple[tuple[int, int], ...]

    def index(self, i: int, j: int) -> int:
        return self.pairs.index((i, j))


def alternating_square(g: FinAbGroup) -> AltSquare:
    """``G ^ G`` on the basis ``e_i ^ e_j`` (``i < j``).

    With ``d_1 | d_2 | ...`` the pair ``(i, j)`` has order ``gcd(d_i, d_j) = d_i``,
    and lexicographic pair order is already a divisibility chain.
    """
    d = g.invariant_factors
    pairs = tuple(combinations(range(len(d)), 2))
    orders = tuple(gcd(d[i], d[j]) for i, j in pairs)
    return AltSquare(FinAbGroup(orders, tuple(f"e{i}^e{j}" for i, j in pairs)), pairs)


def induced_alt_map(phi: GroupHom) -> GroupHom:
    phi.validate()
    src = alternating_square(phi.domain)
    dst = alternating_square(phi.codomain)
    cols = []
    for a, b in src.pairs:
        x, y = phi.image_of(a), phi.image_of(b)
        cols.append([
            (x[i] * y[j] - x[j] * y[i]) % order
            for (i, j), order in zip(dst.pairs, dst.group.invariant_factors)
        ])
    return GroupHom.from_images(src.group, dst.group, cols)


def knot_group(g: FinAbGroup, decomposition: Sequence[GroupHom]) -> FinAbGroup:
    """``(G ^ G) / sum_v phi_v(G_v ^ G_v)`` for decomposition maps ``phi_v``."""
    for phi in decomposition:
        if phi.codomain != g:
            raise MalformedHom(f"codomain {phi.codomain} is not {g}")
    alt = alternating_square(g)
    n = alt.group.rank
    if n == 0:
        return FinAbGroup()
    relations = [[d if k == i else 0 for k in range(n)] for i, d in enumerate(alt.group.invariant_factors)]
    for phi in decomposition:
        psi = induced_alt_map(phi)
        relations.extend(psi.image_of(j) for j in range(psi.domain.rank))
    return presented_group(relations, n)[0]


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite basis of the lattice spanned by ``rows``."""
    basis: list[list[int]] = []
    work = [list(r) for r in rows if any(r)]
    col = 0
    while work and col < ncols:
        active = [r for r in work if r[col]]
        rest = [r for r in work if not r[col]]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        if active:
            piv = active[0]
            if piv[col] < 0:
                piv = [-x for x in piv]
            for b in basis:
                q = b[col] // piv[col]
                if q:
                    b[:] = [x - q * y for x, y in zip(b, piv)]
            basis.append(piv)
        work = [r for r in rest if any(r)]
        col += 1
    return basis


def in_row_lattice(vec: Sequence[int], hermite: Sequence[Sequence[int]]) -> bool:
    v = list(vec)
    for b in hermite:
        c = next(k for k, x in enumerate(b) if x)
        if v[c] % b[c]:
            return False
        q = v[c] // b[c]
        v = [x - q * y for x, y in zip(v, b)]
    return not any(v)


@dataclass
class GeneratedGroup:
    """A finite abelian group enumerated from explicit generators.

    ``kept`` indexes the generators that enlarged the group; ``relations``
    is a triangular basis of the relation lattice among the kept ones;
    ``coords`` maps every element to its exponent vector.
    """

    kept: list[int]
    relations: list[list[int]]
    coords: dict[Hashable, tuple[int, ...]]

    @property
    def order(self) -> int:
        return len(self.coords)

    def structure(self) -> FinAbGroup:
        return presented_group(self.relations, len(self.kept))[0]


def generate_group(
    gens: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    identity: Hashable,
    target_order: int | None = None,
) -> GeneratedGroup:
    """Enumerate ``<gens>`` by extending the subgroup one generator at a time.

    For each new generator ``g`` the least ``k`` with ``g^k`` in the current
    subgroup ``H`` gives the relation ``k*e_g - coords(g^k)``; these relations
    form a basis of the full relation lattice.
    """
    coords: dict[Hashable, tuple[int, ...]] = {identity: ()}
    kept: list[int] = []
    relations: list[list[int]] = []
    for gi, g in enumerate(gens):
        if target_order is not None and len(coords) >= target_order:
            break
        if g in coords:
            continue
        n = len(kept)
        powers = [identity]
        x = g
        while x not in coords:
            powers.append(x)
            x = mul(x, g)
        k = len(powers)
        tail = coords[x]
        relations = [r + [0] for r in relations]
        relations.append([-c for c in tail] + [0] * (n - len(tail)) + [k])
        new: dict[Hashable, tuple[int, ...]] = {}
        for h, hc in coords.items():
            hc = hc + (0,) * (n - len(hc))
            new[h] = hc + (0,)
            y = h
            for e in range(1, k):
                y = mul(y, g)
                new[y] = hc + (e,)
        coords = new
        kept.append(gi)
    width = len(kept)
    coords = {h: c + (0,) * (width - len(c)) for h, c in coords.items()}
    return GeneratedGroup(kept, relations, coords)
