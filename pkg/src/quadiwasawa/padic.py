"""Fixed-precision ℓ-adic integers and the Iwasawa logarithm.

Only odd primes are supported.  Every public result is exact modulo the
stated power of ℓ: series are evaluated with enough guard digits to absorb
the ℓ in the denominators ``1/k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import inf
from numbers import Rational

from sympy import isprime
from sympy.ntheory import sqrt_mod


class PrecisionError(ValueError):
    """Not enough ℓ-adic digits to certify a result."""


def check_ell(ell: int) -> int:
    ell = int(ell)
    if ell == 2:
        raise ValueError("ell must be an odd prime (2-adic theory is not supported)")
    if ell < 2 or not isprime(ell):
        raise ValueError(f"ell={ell} is not a prime")
    return ell


@dataclass(frozen=True)
class PadicInt:
    ell: int
    prec: int
    residue: int

    def __post_init__(self) -> None:
        if self.prec < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "residue", self.residue % self.ell**self.prec)

    @property
    def modulus(self) -> int:
        return self.ell**self.prec

    def _coerce(self, other) -> PadicInt:
        if isinstance(other, PadicInt):
            if other.ell != self.ell:
                raise ValueError(f"cannot mix {self.ell}-adic and {other.ell}-adic values")
            return other
        if isinstance(other, int):
            return PadicInt(self.ell, self.prec, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = min(self.prec, o.prec)
        return PadicInt(self.ell, p, self.residue + o.residue)

    __radd__ = __add__

    def __neg__(self) -> PadicInt:
        return PadicInt(self.ell, self.prec, -self.residue)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = min(self.prec, o.prec)
        return PadicInt(self.ell, p, self.residue * o.residue)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> PadicInt:
        if e < 0:
            return self.inverse() ** (-e)
        return PadicInt(self.ell, self.prec, pow(self.residue, e, self.modulus))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return (self.residue - other) % self.modulus == 0
        if isinstance(other, PadicInt):
            if other.ell != self.ell:
                return False
            p = min(self.prec, other.prec)
            return (self.residue - other.residue) % self.ell**p == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ell, self.prec, self.residue))

    def is_unit(self) -> bool:
        return self.residue % self.ell != 0

    def valuation(self) -> int | float:
        """Valuation of the residue; ``inf`` when it is zero at this precision."""
        if self.residue == 0:
            return inf
        return padic_val(self.residue, self.ell)

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not an {self.ell}-adic unit")
        return PadicInt(self.ell, self.prec, pow(self.residue, -1, self.modulus))

    def reduce(self, prec: int) -> PadicInt:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return PadicInt(self.ell, prec, self.residue)

    def __repr__(self) -> str:
        return f"PadicInt({self.residue} mod {self.ell}^{self.prec})"


@dataclass(frozen=True)
class PadicVal:
    """A value together with a certified lower bound on its valuation.

    ``value is None`` stands for an exact zero.  Division by a power of ℓ is
    only legal up to the certified valuation, and costs exactly that many
    digits of precision.
    """

    value: PadicInt | None
    declared_valuation: int | float

    def __post_init__(self) -> None:
        if self.value is None:
            object.__setattr__(self, "declared_valuation", inf)
            return
        v = self.declared_valuation
        if v > self.value.prec:
            raise PrecisionError(f"declared valuation {v} exceeds precision {self.value.prec}")
        if self.value.residue % self.value.ell**v:
            raise ValueError(f"{self.value} is not divisible by {self.value.ell}^{v}")

    def divide_by_ell(self, k: int) -> PadicVal:
        if self.value is None:
            return self
        if k > self.declared_valuation:
            raise PrecisionError(
                f"dividing by {self.value.ell}^{k} needs valuation certificate >= {k}, "
                f"have {self.declared_valuation}"
            )
        x = self.value
        return PadicVal(
            PadicInt(x.ell, x.prec - k, x.residue // x.ell**k), self.declared_valuation - k
        )


def padic_val(x, ell: int) -> int | float:
    """ℓ-adic valuation of a nonzero rational (``inf`` for zero)."""
    x = Fraction(x)
    if x == 0:
        return inf
    v = 0
    n, d = x.numerator, x.denominator
    while n % ell == 0:
        n //= ell
        v += 1
    while d % ell == 0:
        d //= ell
        v -= 1
    return v


def split_rational(x, ell: int, prec: int) -> tuple[int, PadicInt]:
    """Write ``x = ell^v * u`` with ``u`` a unit known mod ``ell^prec``."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no unit part")
    v = padic_val(x, ell)
    y = x / Fraction(ell) ** v
    mod = ell**prec
    return v, PadicInt(ell, prec, y.numerator * pow(y.denominator, -1, mod))


def _series_terms(ell: int, prec: int, tval: int) -> int:
    # Largest k whose term t^k/k can still matter mod ell^prec.
    k = 1
    last = 1
    while k < 10_000:
        if k * tval - _vint(k, ell) < prec:
            last = k
        elif k * tval - (len(_digits(k, ell)) - 1) >= prec + 1:
            break
        k += 1
    return last


def _digits(n: int, ell: int) -> list[int]:
    out = []
    while n:
        out.append(n % ell)
        n //= ell
    return out


def _vint(k: int, ell: int) -> int:
    v = 0
    while k % ell == 0:
        k //= ell
        v += 1
    return v


@lru_cache(maxsize=4096)
def _log_principal(residue: int, ell: int, prec: int) -> int:
    """``log(u)`` mod ``ell^prec`` for ``u = residue`` with ``u = 1 mod ell``."""
    work_mod = ell ** (prec + 1)
    t = (residue - 1) % work_mod
    if t == 0:
        return 0
    tval = _vint(t, ell) if t else prec
    kmax = _series_terms(ell, prec, max(tval, 1))
    pad = max(_vint(k, ell) for k in range(1, kmax + 1))
    wprec = prec + pad
    mod = ell**wprec
    t %= mod
    # The caller's residue is only known mod ell^prec; the terms beyond
    # those digits contribute only at valuation >= prec as well.
    total = 0
    tk = 1
    for k in range(1, kmax + 1):
        tk = tk * t % mod
        j = _vint(k, ell)
        kk = k // ell**j
        term = (tk // ell**j) * pow(kk, -1, mod)
        total += term if k % 2 else -term
    return total % ell**prec


def iwasawa_log(x, ell: int, prec: int) -> PadicInt:
    """Iwasawa logarithm ``Log`` mod ``ell^prec`` (``Log(ell) = 0``).

    ``x`` is a nonzero rational or a :class:`PadicInt` unit.  Roots of unity
    are killed by passing through ``u^(ell-1)``.
    """
    ell = check_ell(ell)
    if isinstance(x, PadicInt):
        if x.ell != ell:
            raise ValueError("prime mismatch")
        if not x.is_unit():
            raise ValueError(f"{x} is not a unit; strip the power of {ell} first")
        if x.prec < prec:
            raise PrecisionError(f"need {prec} digits, argument has {x.prec}")
        u = x.residue % ell**prec
    elif isinstance(x, (int, Rational)):
        if x == 0:
            raise ValueError("Log(0) is undefined")
        _, unit = split_rational(x, ell, prec)
        u = unit.residue
    else:
        raise TypeError(f"cannot take Log of {type(x).__name__}")
    # Log(u) = log(u^(ell-1)) / (ell-1); ell-1 is a unit.
    mod = ell**prec
    w = pow(u, ell - 1, mod)
    val = _log_principal(w, ell, prec)
    return PadicInt(ell, prec, val * pow(ell - 1, -1, mod))


def fermat_quotient(q: int, ell: int) -> int:
    """``((q^(ell-1) - 1) / ell) mod ell``."""
    if q % ell == 0:
        raise ValueError(f"{ell} divides {q}")
    return ((pow(q, ell - 1, ell * ell) - 1) // ell) % ell


def hensel_sqrt(a: int, ell: int, prec: int) -> PadicInt:
    """A square root of ``a`` mod ``ell^prec``; the other one is its negative.

    The root is the Hensel lift of the least square root of ``a`` mod ℓ.
    """
    ell = check_ell(ell)
    if a % ell == 0:
        raise ValueError(f"{ell} divides {a}")
    r = sqrt_mod(a % ell, ell)
    if r is None:
        raise ValueError(f"{a} is not a square mod {ell}")
    return hensel_lift_root(a, r, ell, prec)


def hensel_lift_root(a: int, r: int, ell: int, prec: int) -> PadicInt:
    """Lift ``r`` (with ``r^2 = a`` mod ℓ) to a root mod ``ell^prec``."""
    if (r * r - a) % ell:
        raise ValueError(f"{r} is not a square root of {a} mod {ell}")
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        mod = ell**k
        r = (r - (r * r - a) * pow(2 * r, -1, mod)) % mod
    return PadicInt(ell, prec, r)


def log_one_plus_ell(ell: int, prec: int) -> PadicInt:
    return iwasawa_log(1 + ell, ell, prec)


def principal_unit_dlog(u: PadicInt, prec: int | None = None) -> int:
    """Exponent ``e`` mod ``ell^(m-1)`` with ``(1+ell)^e = u`` mod ``ell^m``."""
    m = u.prec if prec is None else prec
    ell = u.ell
    if u.residue % ell != 1 % ell:
        raise ValueError(f"{u} is not a principal unit")
    if m == 1:
        return 0
    return unit_dlog(u.residue, ell, m)


def unit_dlog(residue: int, ell: int, m: int) -> int:
    """Coordinate of a unit mod ``ell^m`` in the ℓ-part ``Z/ell^(m-1)``.

    This is ``Log(u) / Log(1+ell)``; on principal units it is the discrete
    logarithm to base ``1+ell``.
    """
    if m <= 1:
        return 0
    lu = iwasawa_log(PadicInt(ell, m, residue), ell, m).residue
    lb = log_one_plus_ell(ell, m).residue
    mod = ell ** (m - 1)
    return (lu // ell) * pow(lb // ell, -1, mod) % mod
