"""ℓ-rationality by ray-class growth, Gras logarithms over Q, Chevalley's count."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import prod

from sympy import isprime

from .abelian import FinAbGroup, ell_valuations
from .padic import PadicInt, check_ell, fermat_quotient, iwasawa_log
from .quadfield.field import FieldDesc
from .quadfield.ray import primes_above_ell, ray_class_group_ellpart

WINDOW = 3
DEFAULT_M_MAX = 12


@dataclass(frozen=True)
class RationalityReport:
    rank: int
    torsion: FinAbGroup
    is_rational: bool
    window: tuple[int, ...]
    stabilized: bool

    def summary(self) -> str:
        if not self.stabilized:
            return "unstabilized"
        return f"rank={self.rank} torsion={self.torsion}"


def _padded(levels: list[list[int]]) -> list[list[int]]:
    width = max(len(a) for a in levels)
    return [[0] * (width - len(a)) + a for a in levels]


def _growth_split(levels: list[list[int]], r: int) -> list[int] | None:
    """Constant exponents if ``r`` of them grow by one per level and the rest stay put.

    Exponent lists are ascending; positions are matched after zero-padding
    to a common length, trying every choice of ``r`` growing slots.
    """
    levels = _padded(levels)
    width = len(levels[0])
    if width < r:
        return None
    for grow in combinations(range(width), r):
        ok = True
        for a, b in zip(levels, levels[1:]):
            for i in range(width):
                step = b[i] - a[i]
                if step != (1 if i in grow else 0):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return [levels[0][i] for i in range(width) if i not in grow]
    return None


def ell_rationality(disc: int, ell: int, m_max: int = DEFAULT_M_MAX) -> RationalityReport:
    """Read off ``Gal(M/K)`` from the ray class ℓ-parts ``R_m``, ``m = 1..m_max``.

    The first window of three consecutive levels where exactly ``c_K + 1``
    exponents increase by one per step and the rest are constant gives the
    free rank and the torsion ``T_K``.
    """
    primes_above_ell(disc, ell)
    if m_max < WINDOW:
        raise ValueError(f"m_max must be >= {WINDOW}")
    r = FieldDesc(disc).c + 1
    levels: list[list[int]] = []
    for m in range(1, m_max + 1):
        levels.append(ell_valuations(ray_class_group_ellpart(disc, ell, m).group, ell))
        if len(levels) < WINDOW:
            continue
        const = _growth_split(levels[-WINDOW:], r)
        if const is not None:
            torsion = FinAbGroup(tuple(ell**a for a in const if a))
            return RationalityReport(r, torsion, torsion.is_trivial(), tuple(range(m - WINDOW + 1, m + 1)), True)
    return RationalityReport(0, FinAbGroup(), False, tuple(range(max(1, m_max - WINDOW + 1), m_max + 1)), False)


def gras_log_Q(q: int, ell: int, m: int) -> PadicInt:
    """``Log(q) / ell`` mod ``ell^m`` for a prime ``q != ell``."""
    check_ell(ell)
    if not isprime(q):
        raise ValueError(f"{q} is not prime")
    if q == ell:
        raise ValueError("the Gras logarithm is taken at primes different from ell")
    lg = iwasawa_log(q, ell, m + 1)
    return PadicInt(ell, m, lg.residue // ell)


def is_primitively_ramified_over_Q(ramified_tame_primes: list[int], ell: int, m: int = 2) -> bool:
    """Over Q the target is rank one: some tame ramified prime must have unit Gras logarithm."""
    qs = list(ramified_tame_primes)
    if len(set(qs)) != len(qs):
        raise ValueError("ramified primes must be distinct")
    return any(gras_log_Q(q, ell, m).is_unit() for q in qs)


def fermat_unit(q: int, ell: int) -> bool:
    return fermat_quotient(q, ell) != 0


@dataclass(frozen=True)
class ChevalleyInput:
    h_K: int
    n: int
    ramification: tuple[int, ...] = ()
    unit_norm_index: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "ramification", tuple(self.ramification))
        vals = (self.h_K, self.n, self.unit_norm_index, *self.ramification)
        if any(int(v) != v or v < 1 for v in vals):
            raise ValueError(f"Chevalley data must be positive integers: {self}")


class InconsistentInput(ValueError):
    """The ambiguous class count is not a positive integer."""


def chevalley_ambiguous(data: ChevalleyInput) -> int:
    """``h_K * prod(e_v) / (n * [E_K : E_K ∩ N L^*])`` for a cyclic extension of degree ``n``."""
    value = Fraction(data.h_K * prod(data.ramification), data.n * data.unit_norm_index)
    if value.denominator != 1:
        raise InconsistentInput(f"ambiguous class number {value} is not an integer for {data}")
    return int(value)
