"""Logarithmic class group of a quadratic field in which ℓ splits.

Normalization.  At a place above ℓ the logarithmic valuation is
``vt(x) = Log(iota(x)) / Log(1 + ell)``, so ``vt(ell) = 0`` and
``vt(1 + ell) = 1``.  Divisors live on ``[l, l', p_1, ..., p_k]`` with
``deg(l) = deg(l') = 1`` and ``deg(p) = Log(N p) / Log(1 + ell)``; the
principal divisor of ``x`` is ``(vt_l(x), vt_l'(x), -v_p1(x), ...)``, which has
degree zero because ``Log(N x) = Log(iota_l x) + Log(iota_l' x)``.

The group is ``ker(deg) / principal divisors``, and the principal divisors
supported on the chosen places come from: ℓ itself (zero row), a generator
of ``l * prod p_j^(-t_j)`` where ``t`` are the coordinates of ``[l]``, the
generators of the class-group relations, and the fundamental unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .abelian import FinAbGroup, IntMatrix, ell_sylow, presented_group, smith_normal_form
from .padic import iwasawa_log, log_one_plus_ell
from .quadfield.field import QuadElem
from .quadfield.ideals import _fundamental_unit, class_group_data, generator_of_product
from .quadfield.ray import EllPlaces, primes_above_ell

DEFAULT_PRECISION = 8


def log_valuation(x, places: EllPlaces, m: int, conj: bool = False) -> int:
    """``Log(iota(x)) / Log(1 + ell)`` mod ``ell^m`` at ``l`` (or ``l'`` when ``conj``)."""
    if not isinstance(x, QuadElem):
        x = QuadElem.rational(places.disc, x)
    if x.is_zero():
        raise ValueError("log valuation of zero")
    ell = places.ell
    _, u = places.iota(x, m + 1, conj)
    lu = iwasawa_log(u, ell, m + 1).residue
    lb = log_one_plus_ell(ell, m + 1).residue
    mod = ell**m
    return (lu // ell) * pow(lb // ell, -1, mod) % mod


def log_degree(q: int, ell: int, m: int) -> int:
    """``Log(q) / Log(1 + ell)`` mod ``ell^m`` for a positive rational norm ``q``."""
    lq = iwasawa_log(q, ell, m + 1).residue
    lb = log_one_plus_ell(ell, m + 1).residue
    return (lq // ell) * pow(lb // ell, -1, ell**m) % ell**m


@dataclass(frozen=True)
class LogDivisor:
    support: tuple[str, ...]
    coefficients: tuple[int, ...]
    degrees: tuple[int, ...]
    ell: int
    m: int

    @property
    def degree(self) -> int:
        return sum(c * d for c, d in zip(self.coefficients, self.degrees)) % self.ell**self.m


@dataclass(frozen=True)
class LogClassGroup:
    group: FinAbGroup
    precision: int
    stabilized: bool
    normalization: str = "vt=Log/Log(1+ell); deg(l)=1"
    saturated: int = 0

    def is_trivial(self) -> bool:
        return self.group.is_trivial() and self.saturated == 0


@dataclass(frozen=True)
class LogPresentation:
    """Relation rows on ``[l, l', p_1..p_k]`` and their degrees, mod ``ell^m``."""

    ell: int
    m: int
    labels: tuple[str, ...]
    degrees: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def divisors(self) -> list[LogDivisor]:
        return [LogDivisor(self.labels, r, self.degrees, self.ell, self.m) for r in self.rows]


def log_presentation(
    disc: int,
    ell: int,
    m: int,
    *,
    swap: bool = False,
    alpha_twist: tuple[int, int] = (0, 0),
    degree_scale: int = 1,
) -> LogPresentation:
    """Build the degree vector and the principal-divisor rows.

    ``alpha_twist = (a, t)`` multiplies the generator attached to ``l`` by
    ``u^a * ell^t`` (``u`` the fundamental unit, or ``-1`` for imaginary
    fields); ``degree_scale`` sets ``deg(l) = deg(l') = c`` and rescales the
    logarithmic valuations by ``1/c`` to keep principal divisors of degree
    zero.  Both only exist to exercise invariance.
    """
    places = primes_above_ell(disc, ell, swap=swap)
    mod = ell**m
    if degree_scale % ell == 0:
        raise ValueError("degree scale must be an ell-adic unit")
    cinv = pow(degree_scale, -1, mod)
    cg = class_group_data(disc, (ell,))
    k = len(cg.gens)

    def vt(x: QuadElem) -> tuple[int, int]:
        return (
            log_valuation(x, places, m) * cinv % mod,
            log_valuation(x, places, m, conj=True) * cinv % mod,
        )

    rows = []
    t = cg.coords(places.l)
    beta = generator_of_product(disc, [(places.l, 1)] + [(p, -tj) for p, tj in zip(cg.gens, t)])
    a, e = alpha_twist
    unit = _fundamental_unit(disc) if disc > 0 else QuadElem.rational(disc, -1)
    beta = beta * unit**a * QuadElem.rational(disc, ell) ** e
    rows.append(vt(beta) + tuple(tj % mod for tj in t))
    for rel, gamma in zip(cg.relations, cg.relation_generators):
        rows.append(vt(gamma) + tuple(-r % mod for r in rel))
    if disc > 0:
        rows.append(vt(_fundamental_unit(disc)) + (0,) * k)
    degs = (degree_scale % mod, degree_scale % mod) + tuple(
        log_degree(p.norm().numerator, ell, m) for p in cg.gens
    )
    labels = ("l", "l'") + tuple(f"p{p.a}" for p in cg.gens)
    return LogPresentation(ell, m, labels, degs, tuple(rows))


def degree_zero_quotient(pres: LogPresentation) -> tuple[FinAbGroup, int]:
    """``ker(deg) / span(rows)`` mod ``ell^m`` as (group, saturated count).

    A generator of unit degree is eliminated: on the degree-zero part its
    coordinate is determined by the others.  Elementary divisors equal to
    ``ell^m`` are not resolved at this precision and are counted as
    saturated.
    """
    ell, m = pres.ell, pres.m
    mod = ell**m
    for div in pres.divisors():
        if div.degree:
            raise AssertionError(f"principal divisor of nonzero degree: {div}")
    pivot = next(i for i, d in enumerate(pres.degrees) if d % ell)
    n = len(pres.degrees) - 1
    if n == 0:
        return FinAbGroup(), 0
    rows = [[x for i, x in enumerate(r) if i != pivot] for r in pres.rows]
    rows += [[mod if i == j else 0 for j in range(n)] for i in range(n)]
    diag = smith_normal_form(IntMatrix.from_rows(rows, n))[0].diagonal_entries()
    saturated = sum(1 for d in diag if d % mod == 0)
    finite = [d for d in diag if d % mod]
    return ell_sylow(FinAbGroup(tuple(d for d in finite if d > 1)), ell), saturated


@lru_cache(maxsize=8192)
def _wcl_at(disc: int, ell: int, m: int, swap: bool, alpha_twist: tuple[int, int], degree_scale: int):
    pres = log_presentation(disc, ell, m, swap=swap, alpha_twist=alpha_twist, degree_scale=degree_scale)
    return degree_zero_quotient(pres)


def wcl(
    disc: int,
    ell: int,
    m: int = DEFAULT_PRECISION,
    *,
    swap: bool = False,
    alpha_twist: tuple[int, int] = (0, 0),
    degree_scale: int = 1,
) -> LogClassGroup:
    """Logarithmic ℓ-class group, trusted only if equal at ``m, m+1, m+2``."""
    if m < 2:
        raise ValueError("precision must be >= 2")
    levels = [_wcl_at(disc, ell, mm, swap, alpha_twist, degree_scale) for mm in (m, m + 1, m + 2)]
    group, saturated = levels[0]
    stable = saturated == 0 and all(lv == levels[0] for lv in levels)
    if saturated:
        group = FinAbGroup(group.invariant_factors + (ell**m,) * saturated)
    return LogClassGroup(group, m, stable, saturated=saturated)


def cl_prime(disc: int, ell: int) -> FinAbGroup:
    """ℓ-class group modulo the classes of the primes above ℓ."""
    places = primes_above_ell(disc, ell)
    cg = class_group_data(disc, (ell,))
    rows = list(cg.relations) + [list(cg.coords(places.l))]
    return ell_sylow(presented_group(rows, len(cg.gens))[0], ell)


def ell_class_group(disc: int, ell: int) -> FinAbGroup:
    return ell_sylow(class_group_data(disc).structure(), ell)
