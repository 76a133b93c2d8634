from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import mpmath
from sympy import factorint

from ..padic import PadicInt, check_ell, hensel_lift_root, padic_val, split_rational


class ResourceError(RuntimeError):
    """A desk-scale bound (discriminant size, cycle length) was exceeded."""


def kronecker(d: int, p: int) -> int:
    """Kronecker symbol ``(d | p)`` for a prime ``p``."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


def is_fundamental(d: int) -> bool:
    if d in (0, 1):
        return False
    r = d % 4
    if r == 1:
        return _squarefree(d)
    if r == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    """Fundamental discriminants ``lo <= d <= hi``, ascending by ``|d|``.

    Ties (``-n`` and ``n``) put the negative one first.
    """
    ds = [d for d in range(lo, hi + 1) if is_fundamental(d)]
    return sorted(ds, key=lambda d: (abs(d), d > 0))


@dataclass(frozen=True)
class FieldDesc:
    disc: int

    def __post_init__(self) -> None:
        if not is_fundamental(self.disc):
            raise ValueError(f"{self.disc} is not a fundamental discriminant")

    @property
    def signature(self) -> tuple[int, int]:
        return (2, 0) if self.disc > 0 else (0, 1)

    @property
    def is_real(self) -> bool:
        return self.disc > 0

    @property
    def c(self) -> int:
        return self.signature[1]

    @property
    def omega_norm(self) -> int:
        d = self.disc
        return (d * d - d) // 4


def is_totally_ell_adic(disc: int, ell: int) -> bool:
    check_ell(ell)
    return kronecker(disc, ell) == 1


@dataclass(frozen=True)
class QuadElem:
    """``a + b*omega`` with ``omega = (disc + sqrt(disc)) / 2``."""

    disc: int
    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def rational(cls, disc: int, x) -> QuadElem:
        return cls(disc, Fraction(x), Fraction(0))

    @classmethod
    def from_sqrt(cls, disc: int, u, v) -> QuadElem:
        """``u + v*sqrt(disc)``."""
        v = Fraction(v)
        return cls(disc, Fraction(u) - v * disc, 2 * v)

    def to_sqrt(self) -> tuple[Fraction, Fraction]:
        """Coordinates ``(u, v)`` with ``self = u + v*sqrt(disc)``."""
        return self.a + self.b * self.disc / 2, self.b / 2

    def __add__(self, other: QuadElem) -> QuadElem:
        return QuadElem(self.disc, self.a + other.a, self.b + other.b)

    def __sub__(self, other: QuadElem) -> QuadElem:
        return QuadElem(self.disc, self.a - other.a, self.b - other.b)

    def __neg__(self) -> QuadElem:
        return QuadElem(self.disc, -self.a, -self.b)

    def __mul__(self, other) -> QuadElem:
        if not isinstance(other, QuadElem):
            f = Fraction(other)
            return QuadElem(self.disc, self.a * f, self.b * f)
        d = self.disc
        a, b, c, e = self.a, self.b, other.a, other.b
        # omega^2 = d*omega - (d^2 - d)/4
        n = (d * d - d) // 4
        return QuadElem(d, a * c - b * e * n, a * e + b * c + b * e * d)

    __rmul__ = __mul__

    def conj(self) -> QuadElem:
        return QuadElem(self.disc, self.a + self.b * self.disc, -self.b)

    def norm(self) -> Fraction:
        d = self.disc
        return self.a * self.a + self.a * self.b * d + self.b * self.b * ((d * d - d) // 4)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.disc

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero element")
        return self.conj() * (1 / n)

    def __truediv__(self, other) -> QuadElem:
        if isinstance(other, QuadElem):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    def __pow__(self, e: int) -> QuadElem:
        if e < 0:
            return self.inverse() ** (-e)
        out = QuadElem.rational(self.disc, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def embed(self, root: PadicInt) -> tuple[int, PadicInt]:
        """Image under ``sqrt(disc) -> root`` as ``(valuation, unit part)``.

        ``root`` must be a square root of ``disc``; the unit part is returned
        to the full precision of ``root`` minus the digits spent on the
        valuation, so callers ask for ``root`` with some headroom (see
        :func:`embed_to`).
        """
        ell = root.ell
        den = self.a.denominator * self.b.denominator
        x = int(self.a * den)
        y = int(self.b * den)
        # Valuation of an integral x + y*omega at one place is at most that of its norm.
        num = QuadElem(self.disc, x, y)
        nv = padic_val(num.norm(), ell)
        if nv > root.prec - 1:
            raise ValueError("root precision too small for this element")
        mod = root.modulus
        w = (self.disc + root.residue) * pow(2, -1, mod) % mod
        val = (x + y * w) % mod
        v = padic_val(val, ell) if val else root.prec
        if v > nv:
            raise AssertionError("valuation exceeds norm valuation")
        dv, dunit = split_rational(Fraction(den), ell, root.prec - v)
        unit = PadicInt(ell, root.prec - v, val // ell**v) * dunit.inverse()
        return v - dv, unit

    def embed_to(self, root_at: "RootProvider", prec: int, conj: bool = False) -> tuple[int, PadicInt]:
        """Embed with enough working digits that the unit part is exact mod ``ell^prec``."""
        den = self.a.denominator * self.b.denominator
        num = QuadElem(self.disc, int(self.a * den), int(self.b * den))
        need = prec + 1 + int(padic_val(num.norm(), root_at.ell))
        v, u = self.embed(root_at(need, conj))
        return v, u.reduce(prec)

    def approx(self, dps: int = 60):
        """Real embedding with ``sqrt(disc) > 0`` (real fields only)."""
        with mpmath.workdps(dps):
            u, v = self.to_sqrt()
            s = mpmath.sqrt(self.disc)
            return (
                mpmath.mpf(u.numerator) / u.denominator + mpmath.mpf(v.numerator) / v.denominator * s,
                mpmath.mpf(u.numerator) / u.denominator - mpmath.mpf(v.numerator) / v.denominator * s,
            )

    def __repr__(self) -> str:
        u, v = self.to_sqrt()
        return f"({u} + {v}*sqrt({self.disc}))"


class RootProvider:
    """Square roots of ``disc`` in ``Z_ell`` at any requested precision.

    The root is pinned by its residue mod ℓ, so all precisions agree.
    """

    def __init__(self, disc: int, ell: int, root_mod_ell: int):
        self.disc = disc
        self.ell = ell
        self.r0 = root_mod_ell % ell
        self._cache: PadicInt | None = None

    def __call__(self, prec: int, conj: bool = False) -> PadicInt:
        if self._cache is None or self._cache.prec < prec:
            self._cache = hensel_lift_root(self.disc, self.r0, self.ell, max(prec, 8))
        r = self._cache.reduce(prec)
        return -r if conj else r

    def swapped(self) -> RootProvider:
        return RootProvider(self.disc, self.ell, -self.r0)


def fundamental_unit(disc: int, max_period: int = 200_000) -> QuadElem:
    """Fundamental unit ``eps > 1`` of the real quadratic field.

    Expands the reduced quadratic irrational ``xi = (b0 + sqrt(disc)) / 2``
    (``b0`` the largest integer below ``sqrt(disc)`` with ``b0 = disc`` mod 2)
    as a purely periodic continued fraction.  With period ``k`` and
    convergent denominators ``B_i`` the unit is ``B_(k-1)*xi + B_(k-2)``.
    """
    if disc <= 0:
        raise ValueError("fundamental unit requires a real field")
    FieldDesc(disc)
    s = isqrt(disc)
    b0 = s if (s - disc) % 2 == 0 else s - 1
    p, q = b0, 2
    b_prev2, b_prev1 = 1, 0  # B_{-2}, B_{-1}
    for _ in range(max_period):
        a = (p + s) // q
        b_prev2, b_prev1 = b_prev1, a * b_prev1 + b_prev2
        p = a * q - p
        q = (disc - p * p) // q
        if p == b0 and q == 2:
            xi = QuadElem.from_sqrt(disc, Fraction(b0, 2), Fraction(1, 2))
            eps = xi * b_prev1 + QuadElem.rational(disc, b_prev2)
            return eps
    raise ResourceError(f"continued fraction period of disc={disc} exceeds {max_period}")


def unit_norm(eps: QuadElem) -> int:
    return int(eps.norm())
