"""Fractional ideals, ideal reduction with tracked multipliers, and the
(wide) ideal class group with explicit principal generators.

An ideal is ``scale * [a, b + omega]``: the primitive part has Z-basis
``a, b + omega`` with ``0 <= b < a``.  Reduction follows the quadratic
form ``(a, B, C)`` attached to the primitive part, where
``b + omega = (-B + sqrt(disc)) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, prod
from typing import Iterable, Sequence

import mpmath
from sympy import primerange

from ..abelian import GeneratedGroup, generate_group, hermite_rows
from .field import QuadElem, ResourceError, fundamental_unit, kronecker
from .forms import generation_bound, is_reduced_indefinite, prime_form


class NotPrincipal(ValueError):
    pass


@dataclass(frozen=True)
class QuadIdeal:
    disc: int
    a: int
    b: int
    scale: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.a <= 0 or not 0 <= self.b < self.a:
            raise ValueError(f"bad HNF ({self.a}, {self.b})")
        if self.scale == 0:
            raise ValueError("zero ideal")
        if self.primitive_norm_of_b() % self.a:
            raise ValueError(f"[{self.a}, {self.b}+w] is not an ideal")

    def primitive_norm_of_b(self) -> int:
        # N(b + omega) = b^2 + b*disc + (disc^2 - disc)/4
        d = self.disc
        return self.b * self.b + self.b * d + (d * d - d) // 4

    @classmethod
    def unit(cls, disc: int) -> QuadIdeal:
        return cls(disc, 1, 0)

    @classmethod
    def from_form(cls, disc: int, a: int, B: int, scale=1) -> QuadIdeal:
        """Ideal ``scale * [|a|, (-B + sqrt(disc)) / 2]``."""
        a = abs(a)
        # (-B + sqrt d)/2 = omega - (d + B)/2
        return cls(disc, a, (-(disc + B) // 2) % a, Fraction(scale))

    @classmethod
    def from_generators(cls, disc: int, elems: Iterable[QuadElem]) -> QuadIdeal:
        elems = list(elems)
        den = 1
        for e in elems:
            den = den * e.a.denominator // gcd(den, e.a.denominator)
            den = den * e.b.denominator // gcd(den, e.b.denominator)
        vecs = [[int(e.b * den), int(e.a * den)] for e in elems]
        # close under multiplication by omega so the Z-span is an O-module
        w = QuadElem(disc, 0, 1)
        vecs += [[int((e * w).b * den), int((e * w).a * den)] for e in elems]
        h = hermite_rows(vecs, 2)
        if len(h) != 2:
            raise ValueError("generators do not span a full lattice")
        (c, bb), (_, aa) = h
        if aa % c or bb % c:
            raise AssertionError("lattice is not an ideal")
        return cls(disc, aa // c, (bb // c) % (aa // c), Fraction(c, den))

    @property
    def form(self) -> tuple[int, int, int]:
        B = -(2 * self.b + self.disc)
        return (self.a, B, (B * B - self.disc) // (4 * self.a))

    def norm(self) -> Fraction:
        return self.scale * self.scale * self.a

    def basis(self) -> tuple[QuadElem, QuadElem]:
        d = self.disc
        return (QuadElem(d, self.scale * self.a, 0), QuadElem(d, self.scale * self.b, self.scale))

    def primitive(self) -> QuadIdeal:
        return QuadIdeal(self.disc, self.a, self.b)

    def __mul__(self, other) -> QuadIdeal:
        if isinstance(other, QuadIdeal):
            x1, y1 = self.primitive().basis()
            x2, y2 = other.primitive().basis()
            p = QuadIdeal.from_generators(self.disc, [x1 * x2, x1 * y2, y1 * x2, y1 * y2])
            return p.rescale(self.scale * other.scale)
        if isinstance(other, QuadElem):
            return QuadIdeal.from_generators(self.disc, [x * other for x in self.basis()])
        return self.rescale(Fraction(other))

    __rmul__ = __mul__

    def rescale(self, f) -> QuadIdeal:
        f = Fraction(f)
        return QuadIdeal(self.disc, self.a, self.b, abs(self.scale * f))

    def conj(self) -> QuadIdeal:
        a, B, _ = self.form
        return QuadIdeal.from_form(self.disc, a, -B, self.scale)

    def __pow__(self, e: int) -> QuadIdeal:
        if e < 0:
            return (self.conj() * (1 / self.norm())) ** (-e)
        out = QuadIdeal.unit(self.disc)
        for _ in range(e):
            out = out * self
        return out

    def contains(self, x: QuadElem) -> bool:
        y = x * (1 / self.scale)
        if not y.is_integral():
            return False
        coef = y.b
        rest = y.a - coef * self.b
        return rest % self.a == 0

    def same_as(self, other: QuadIdeal) -> bool:
        return (self.a, self.b, self.scale) == (other.a, other.b, other.scale)

    def __repr__(self) -> str:
        s = "" if self.scale == 1 else f"{self.scale}*"
        return f"{s}[{self.a}, {self.b}+w]"


def _rho_form(disc: int, a: int, B: int, s: int) -> tuple[int, int, int]:
    """``(|C|, B', C)`` for one reduction step on ``[a, (-B + sqrt d)/2]``."""
    C = (B * B - disc) // (4 * a)
    ac = abs(C)
    r = -B
    if disc < 0 or ac > s:
        r = (r + ac) % (2 * ac) - ac
        if r == -ac:
            r = ac
    else:
        r = s - (s - r) % (2 * ac)
    return ac, r, C


def _rho_step(disc: int, a: int, B: int, s: int) -> tuple[int, int, QuadElem]:
    """One reduction step on the primitive ideal ``[a, (-B + sqrt d)/2]``.

    Returns ``(a', B', lam)`` with ``I = lam * I'``.
    """
    ac, r, C = _rho_form(disc, a, B, s)
    beta = QuadElem.from_sqrt(disc, Fraction(-B, 2), Fraction(1, 2))
    return ac, r, beta * Fraction(1, C)


def _normal_B(disc: int, a: int, B: int, s: int) -> int:
    # B is only defined mod 2a; pick the representative reduction expects
    if disc < 0 or a > s:
        B = (B + a) % (2 * a) - a
        return a if B == -a else B
    return s - (s - B) % (2 * a)


def reduce_ideal(I: QuadIdeal) -> tuple[QuadIdeal, QuadElem]:
    """``(J, lam)`` with ``I = lam * J`` and ``J`` primitive and reduced."""
    disc = I.disc
    lam = QuadElem.rational(disc, I.scale)
    a, B, C = I.form
    if disc < 0:
        while True:
            k = (a - B) // (2 * a)
            B += 2 * k * a
            C = (B * B - disc) // (4 * a)
            if a > C or (a == C and B < 0):
                a, B, step = _rho_step(disc, a, B, 0)
                lam = lam * step
                continue
            break
        return QuadIdeal.from_form(disc, a, B), lam
    s = isqrt(disc)
    B = _normal_B(disc, a, B, s)
    for _ in range(10_000):
        if is_reduced_indefinite((a, B, 0), disc):
            return QuadIdeal.from_form(disc, a, B), lam
        a, B, step = _rho_step(disc, a, B, s)
        lam = lam * step
    raise ResourceError("ideal reduction did not terminate")


def reduced_cycle(J: QuadIdeal) -> list[tuple[QuadIdeal, QuadElem]]:
    """Reduced ideals equivalent to the reduced real ``J``, with ``J = mu_i * J_i``."""
    disc = J.disc
    s = isqrt(disc)
    a, B, _ = J.form
    B = _normal_B(disc, a, B, s)
    out = [(J, QuadElem.rational(disc, 1))]
    mu = QuadElem.rational(disc, 1)
    while True:
        a, B, step = _rho_step(disc, a, B, s)
        mu = mu * step
        nxt = QuadIdeal.from_form(disc, a, B)
        if nxt.same_as(J):
            return out
        out.append((nxt, mu))
        if len(out) > 10 * s + 100:
            raise ResourceError(f"reduced cycle of {J} too long")


def class_key(I: QuadIdeal) -> tuple[int, int]:
    """Canonical (a, b) of the wide class of ``I``."""
    disc = I.disc
    if disc < 0:
        J, _ = reduce_ideal(I)
        return (J.a, J.b)
    # forms only: the cycle elements are not needed for the key
    s = isqrt(disc)
    a, B, _ = I.form
    B = _normal_B(disc, a, B, s)
    for _ in range(10_000):
        if is_reduced_indefinite((a, B, 0), disc):
            break
        a, B, _ = _rho_form(disc, a, B, s)
    else:
        raise ResourceError("ideal reduction did not terminate")
    start = (a, B)
    seen = []
    while True:
        seen.append((a, B))
        a, B, _ = _rho_form(disc, a, B, s)
        if (a, B) == start:
            break
        if len(seen) > 10 * s + 100:
            raise ResourceError(f"reduced cycle of {I} too long")
    return min((K.a, K.b) for K in (QuadIdeal.from_form(disc, a, B) for a, B in seen))


def _key_ideal(disc: int, key: tuple[int, int]) -> QuadIdeal:
    return QuadIdeal(disc, key[0], key[1])


def unit_rank(disc: int) -> int:
    return 1 if disc > 0 else 0


@lru_cache(maxsize=1024)
def _fundamental_unit(disc: int) -> QuadElem:
    return fundamental_unit(disc)


def reduce_by_units(gamma: QuadElem) -> QuadElem:
    """Multiply a real-field element by a power of eps to balance its two embeddings."""
    disc = gamma.disc
    if disc < 0:
        return gamma
    eps = _fundamental_unit(disc)
    u, v = gamma.to_sqrt()
    with mpmath.workdps(50):
        # the embedding where u and v*sqrt(d) share a sign is the large one;
        # recover the small one from the norm to avoid cancellation
        big = abs(mpmath.mpf(u.numerator) / u.denominator) + abs(
            mpmath.mpf(v.numerator) / v.denominator
        ) * mpmath.sqrt(disc)
        n = abs(gamma.norm())
        small = (mpmath.mpf(n.numerator) / n.denominator) / big
        ratio = big / small if (u >= 0) == (v >= 0) else small / big
        e1, _ = eps.approx()
        k = int(mpmath.nint(mpmath.log(ratio) / (2 * mpmath.log(e1))))
    return gamma * eps ** (-k) if k else gamma


def principal_generator(I: QuadIdeal) -> QuadElem:
    """A generator of the principal ideal ``I`` (raises :class:`NotPrincipal`).

    Reduction lands on a reduced ideal; a principal class contains the
    unit ideal among its reduced members (for real fields: in its finite
    reduced cycle), so the search terminates either way.
    """
    J, lam = reduce_ideal(I)
    if I.disc < 0:
        if J.a != 1:
            raise NotPrincipal(f"{I} is not principal")
        gamma = lam
    else:
        for K, mu in reduced_cycle(J):
            if K.a == 1:
                gamma = lam * mu
                break
        else:
            raise NotPrincipal(f"{I} is not principal")
        gamma = reduce_by_units(gamma)
    if abs(gamma.norm()) != I.norm():
        raise AssertionError("generator norm mismatch")
    return gamma


def prime_ideal(disc: int, p: int) -> QuadIdeal | None:
    f = prime_form(disc, p)
    if f is None:
        return None
    return QuadIdeal.from_form(disc, f[0], f[1])


def multiply_keys(disc: int, k1: tuple[int, int], k2: tuple[int, int]) -> tuple[int, int]:
    return class_key(_key_ideal(disc, k1) * _key_ideal(disc, k2))


@dataclass
class ClassGroupData:
    """Wide ideal class group with prime-ideal generators avoiding some primes.

    ``gens[i]`` are prime ideals whose classes generate the group;
    ``relations`` is a basis of the relation lattice among them, each paired
    with a generator of the corresponding principal ideal in ``generators``.
    """

    disc: int
    gens: list[QuadIdeal]
    group: GeneratedGroup
    relation_generators: list[QuadElem]

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def relations(self) -> list[list[int]]:
        return self.group.relations

    def structure(self):
        return self.group.structure()

    def coords(self, I: QuadIdeal) -> tuple[int, ...]:
        return self.group.coords[class_key(I)]


def ideal_product(disc: int, factors: Sequence[tuple[QuadIdeal, int]]) -> tuple[QuadIdeal, QuadElem]:
    """Reduced ``J`` and ``lam`` with ``prod I_i^e_i = lam * J``.

    Negative exponents go through the conjugate ideal so every intermediate
    product stays integral.
    """
    lam = QuadElem.rational(disc, 1)
    J = QuadIdeal.unit(disc)
    for I, e in factors:
        if e < 0:
            base = I.conj().primitive()
            lam = lam * Fraction(1, I.primitive().a) ** (-e)
            lam = lam * Fraction(I.scale) ** e
            e = -e
        else:
            base = I.primitive()
            lam = lam * Fraction(I.scale) ** e
        for _ in range(e):
            J, step = reduce_ideal(J * base)
            lam = lam * step
    return J, lam


def generator_of_product(disc: int, factors: Sequence[tuple[QuadIdeal, int]]) -> QuadElem:
    J, lam = ideal_product(disc, factors)
    gamma = reduce_by_units(lam * principal_generator(J))
    expected = prod((I.norm() ** e for I, e in factors), start=Fraction(1))
    if abs(gamma.norm()) != expected:
        raise AssertionError("principal generator has the wrong norm")
    return gamma


@lru_cache(maxsize=2048)
def class_group_data(disc: int, avoid: tuple[int, ...] = ()) -> ClassGroupData:
    """Class group generated by the smallest non-inert primes outside ``avoid``."""
    ident = class_key(QuadIdeal.unit(disc))
    mul = lambda x, y: multiply_keys(disc, x, y)  # noqa: E731
    full = [
        prime_ideal(disc, p) for p in primerange(2, generation_bound(disc) + 1)
    ]
    h = generate_group([class_key(I) for I in full if I is not None], mul, ident).order

    candidates: list[QuadIdeal] = []
    group = generate_group([], mul, ident)
    p = 1
    while group.order < h:
        # grow the candidate list until the avoided primes are compensated
        batch = []
        for q in primerange(p + 1, max(2 * p, 50) + 1):
            if q in avoid:
                continue
            I = prime_ideal(disc, q)
            if I is not None:
                batch.append(I)
        p = max(2 * p, 50)
        candidates.extend(batch)
        group = generate_group([class_key(I) for I in candidates], mul, ident, target_order=h)
        if p > 10**6:
            raise ResourceError("could not find generators of the class group")
    gens = [candidates[i] for i in group.kept]
    group.kept = list(range(len(gens)))
    rel_gens = [generator_of_product(disc, list(zip(gens, r))) for r in group.relations]
    return ClassGroupData(disc, gens, group, rel_gens)


def wide_class_group(disc: int):
    return class_group_data(disc).structure()
