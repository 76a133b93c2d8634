"""Binary quadratic forms ``(a, b, c)`` of fundamental discriminant.

Forms are plain int triples.  Classes under proper equivalence give the
(narrow) form class group; for ``disc < 0`` each class has one reduced
form, for ``disc > 0`` the reduced forms of a class make up one cycle of the
reduction operator and the least triple of the cycle is the class key.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, isqrt, pi, sqrt

from sympy import primerange

from ..abelian import FinAbGroup, GeneratedGroup, generate_group
from .field import ResourceError, kronecker

Form = tuple[int, int, int]

DISC_BOUND = 10**9


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, a


def discriminant(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def principal_form(disc: int) -> Form:
    b = disc % 2
    return (1, b, (b * b - disc) // 4)


def negative_principal_form(disc: int) -> Form:
    b = disc % 2
    return (-1, b, (disc - b * b) // 4)


def prime_form(disc: int, p: int) -> Form | None:
    """The form ``(p, b, c)`` with least ``b >= 0``, or ``None`` if ``p`` is inert."""
    if kronecker(disc, p) == -1:
        return None
    for b in range(disc % 2, 2 * p + 1, 2):
        if (b * b - disc) % (4 * p) == 0:
            return (p, b, (b * b - disc) // (4 * p))
    raise AssertionError(f"no prime form above {p} for disc {disc}")


def compose(f: Form, g: Form) -> Form:
    """Gauss/Dirichlet composition of two forms with positive leading coefficient."""
    a1, b1, c1 = f
    a2, b2, c2 = g
    if a1 <= 0 or a2 <= 0:
        raise ValueError("compose expects forms with a > 0")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        u, _, d = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        x2, y2, d1 = _xgcd(s, d)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (c2 * d1 + r * (b2 + v2 * r)) // v1
    return (a3, b3, c3)


def _rho(f: Form, disc: int, s: int) -> Form:
    a, b, c = f
    ac = abs(c)
    r = -b
    if ac > s:  # |c| > sqrt(disc): centre r in (-|c|, |c|]
        r = (r + ac) % (2 * ac) - ac
        if r == -ac:
            r = ac
    else:  # largest r = -b mod 2|c| below sqrt(disc)
        r = s - (s - r) % (2 * ac)
    return (c, r, (r * r - disc) // (4 * c))


def is_reduced_indefinite(f: Form, disc: int) -> bool:
    a, b, _ = f
    s = isqrt(disc)
    a2 = 2 * abs(a)
    return 0 < b <= s and (a2 + b) ** 2 > disc and (a2 - b <= 0 or (a2 - b) ** 2 < disc)


def reduce_definite(f: Form) -> Form:
    a, b, c = f
    if a < 0:
        raise ValueError("negative definite form")
    while True:
        # normalize b into (-a, a]
        k = (a - b) // (2 * a)
        b, c = b + 2 * k * a, a * k * k + b * k + c
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return (a, b, c)


def reduce_indefinite(f: Form) -> Form:
    disc = discriminant(f)
    s = isqrt(disc)
    for _ in range(10_000):
        if is_reduced_indefinite(f, disc):
            return f
        f = _rho(f, disc, s)
    raise ResourceError(f"indefinite reduction of {f} did not terminate")


def cycle(f: Form) -> list[Form]:
    """The reduction cycle through a reduced indefinite form."""
    disc = discriminant(f)
    s = isqrt(disc)
    out = [f]
    g = _rho(f, disc, s)
    while g != f:
        out.append(g)
        if len(out) > 10 * s + 100:
            raise ResourceError(f"cycle of {f} too long")
        g = _rho(g, disc, s)
    return out


def class_key(f: Form) -> Form:
    """Canonical representative of the proper equivalence class of ``f``."""
    if discriminant(f) < 0:
        return reduce_definite(f)
    return min(cycle(reduce_indefinite(f)))


def _positive_rep(key: Form) -> Form:
    if key[0] > 0:
        return key
    disc = discriminant(key)
    return _rho(key, disc, isqrt(disc))


def multiply(f: Form, g: Form) -> Form:
    return class_key(compose(_positive_rep(f), _positive_rep(g)))


def generation_bound(disc: int) -> int:
    """Minkowski bound: prime ideals of norm below it generate the class group."""
    if disc < 0:
        return int(2 / pi * sqrt(-disc)) + 1
    return int(sqrt(disc) / 2) + 1


@lru_cache(maxsize=4096)
def narrow_group(disc: int) -> GeneratedGroup:
    if abs(disc) > DISC_BOUND:
        raise ResourceError(f"|disc| = {abs(disc)} exceeds the configured bound {DISC_BOUND}")
    gens = []
    if disc > 0:
        gens.append(class_key(negative_principal_form(disc)))
    for p in primerange(2, generation_bound(disc) + 1):
        f = prime_form(disc, p)
        if f is not None:
            gens.append(class_key(f))
    return generate_group(gens, multiply, class_key(principal_form(disc)))


def class_group(disc: int) -> FinAbGroup:
    """Form class group: the narrow class group when ``disc > 0``."""
    return narrow_group(disc).structure()


def count_reduced_forms(disc: int) -> int:
    """Brute-force class number: reduced forms (disc < 0) or reduced cycles (disc > 0)."""
    if disc < 0:
        n = 0
        a = 1
        while 3 * a * a <= -disc:
            for b in range(-a + 1, a + 1):
                if (b * b - disc) % (4 * a):
                    continue
                c = (b * b - disc) // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                if gcd(gcd(a, b), c) == 1:
                    n += 1
            a += 1
        return n
    s = isqrt(disc)
    reduced = set()
    for b in range(1, s + 1):
        if (b - disc) % 2:
            continue
        m = (disc - b * b) // 4
        if (disc - b * b) % 4:
            continue
        for a in range(1, m + 1):
            if m % a:
                continue
            for sa in (a, -a):
                f = (sa, b, -m // sa)
                if gcd(gcd(abs(f[0]), b), abs(f[2])) == 1 and is_reduced_indefinite(f, disc):
                    reduced.add(f)
    cycles = 0
    seen: set[Form] = set()
    for f in sorted(reduced):
        if f in seen:
            continue
        cycles += 1
        seen.update(cycle(f))
    return cycles
