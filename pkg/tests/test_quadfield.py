from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadiwasawa.abelian import FinAbGroup, ell_sylow
from quadiwasawa.padic import split_rational
from quadiwasawa.quadfield import forms
from quadiwasawa.quadfield.field import (
    FieldDesc,
    QuadElem,
    ResourceError,
    fundamental_discriminants,
    fundamental_unit,
    is_fundamental,
    is_totally_ell_adic,
    kronecker,
    unit_norm,
)
from quadiwasawa.quadfield.forms import class_group, count_reduced_forms, narrow_group, prime_form
from quadiwasawa.quadfield.ideals import (
    NotPrincipal,
    QuadIdeal,
    class_group_data,
    generator_of_product,
    prime_ideal,
    principal_generator,
    wide_class_group,
)
from quadiwasawa.quadfield.ray import NotSplit, primes_above_ell, ray_class_group_ellpart, residue_units

SMALL = fundamental_discriminants(-400, 400)


def test_fundamental_discriminants():
    assert fundamental_discriminants(-10, 10) == [-3, -4, 5, -7, -8, 8]
    assert is_fundamental(12) and not is_fundamental(20) and not is_fundamental(1)
    with pytest.raises(ValueError):
        FieldDesc(20)


def test_signature():
    assert FieldDesc(-4).signature == (0, 1)
    assert FieldDesc(5).signature == (2, 0)
    assert FieldDesc(-4).c == 1 and FieldDesc(5).c == 0


def test_totally_ell_adic_examples():
    assert is_totally_ell_adic(-4, 5)
    assert not is_totally_ell_adic(-4, 3)
    assert not is_totally_ell_adic(-15, 5)
    with pytest.raises(ValueError):
        is_totally_ell_adic(5, 2)


def test_kronecker_against_euler():
    for d in SMALL:
        for p in (3, 5, 7, 11):
            sq = {x * x % p for x in range(1, p)}
            expect = 0 if d % p == 0 else (1 if d % p in sq else -1)
            assert kronecker(d, p) == expect


def test_class_group_examples():
    assert class_group(-23) == FinAbGroup((3,))
    assert class_group(-4).is_trivial()
    assert class_group(40) == FinAbGroup((2,))
    assert class_group(-84) == FinAbGroup((2, 2))
    assert class_group(12) == FinAbGroup((2,))  # narrow; wide is trivial
    assert wide_class_group(12).is_trivial()


def test_reduced_forms_of_minus_23():
    assert prime_form(-23, 2) == (2, 1, 3)
    assert count_reduced_forms(-23) == 3


@pytest.mark.parametrize("d", SMALL)
def test_class_numbers_match_bruteforce(d):
    hn = narrow_group(d).order
    assert hn == count_reduced_forms(d)
    wide = class_group_data(d).order
    if d < 0 or unit_norm(fundamental_unit(d)) == -1:
        assert wide == hn
    else:
        assert 2 * wide == hn
    for ell in (3, 5, 7):
        assert ell_sylow(narrow_group(d).structure(), ell) == ell_sylow(class_group_data(d).structure(), ell)


def test_fundamental_unit_examples():
    e5 = fundamental_unit(5)
    assert e5.to_sqrt() == (Fraction(1, 2), Fraction(1, 2)) and unit_norm(e5) == -1
    e8 = fundamental_unit(8)
    assert e8.to_sqrt() == (1, Fraction(1, 2)) and unit_norm(e8) == -1  # sqrt(8) = 2 sqrt(2)
    e12 = fundamental_unit(12)
    assert e12.to_sqrt() == (2, Fraction(1, 2)) and unit_norm(e12) == 1
    with pytest.raises(ValueError):
        fundamental_unit(-4)


def _unit_root(eps: QuadElem, d: int, k: int) -> QuadElem | None:
    """A unit eta with eta^k = eps, found from its trace and norm, or None."""
    r = mpmath.root(eps.approx(60)[0], k)
    for s in (1, -1):
        t = int(mpmath.nint(r + s / r))
        disc = t * t - 4 * s
        if disc <= 0 or disc % d:
            continue
        f = isqrt(disc // d)
        if f * f == disc // d:
            eta = QuadElem.from_sqrt(d, Fraction(t, 2), Fraction(f, 2))
            if eta**k == eps:
                return eta
    return None


@pytest.mark.parametrize("d", [x for x in SMALL if x > 0])
def test_fundamental_unit_is_unit_and_not_a_power(d):
    eps = fundamental_unit(d)
    assert abs(eps.norm()) == 1 and eps.is_integral()
    assert eps.approx(60)[0] > 1
    for k in (2, 3, 5, 7):
        assert _unit_root(eps, d, k) is None
    assert _unit_root(eps**2, d, 2) == eps


def test_fundamental_unit_period_bound():
    with pytest.raises(ResourceError):
        fundamental_unit(94 * 4, max_period=2)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([x for x in SMALL]), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_element_arithmetic(d, a, b, c, e):
    x = QuadElem(d, a, b)
    y = QuadElem(d, c, e)
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x + y).trace() == x.trace() + y.trace()
    if not x.is_zero():
        assert x * x.inverse() == QuadElem.rational(d, 1)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(-4, 5), (5, 11), (-23, 3), (229, 3), (-47, 7), (40, 3)]), st.integers(-99, 99), st.integers(-99, 99))
def test_embeddings_multiply_to_norm(pair, a, b):
    d, ell = pair
    x = QuadElem(d, a, b)
    if x.is_zero():
        return
    P = primes_above_ell(d, ell)
    m = 6
    v1, u1 = P.iota(x, m)
    v2, u2 = P.iota(x, m, conj=True)
    vn, un = split_rational(x.norm(), ell, m)
    assert v1 + v2 == vn
    assert u1 * u2 == un


def test_places_above_ell():
    P = primes_above_ell(-4, 5)
    assert P.l.norm() == 5 and P.l_conj.norm() == 5
    assert (P.l * P.l_conj).same_as(QuadIdeal.from_generators(-4, [QuadElem.rational(-4, 5)]))
    # iota_l kills l: its HNF generators map to multiples of 5
    for g in P.l.basis():
        v, _ = P.iota(g, 3)
        assert v >= 1
    w = P.iota_omega(3)
    assert (w * w - (-4) * w + ((-4) ** 2 - (-4)) // 4) % 125 == 0
    S = P.swapped()
    assert S.l.same_as(P.l_conj)
    x = QuadElem(-4, 3, 7)
    assert S.iota(x, 4) == P.iota(x.conj(), 4)
    assert P.iota(x, 4, conj=True) == P.iota(x.conj(), 4)
    with pytest.raises(NotSplit):
        primes_above_ell(-4, 3)


def test_principal_generator_examples():
    d = -23
    p2 = prime_ideal(d, 2)
    g = generator_of_product(d, [(p2, 3)])
    assert abs(g.norm()) == 8
    assert QuadIdeal.from_generators(d, [g]).same_as(p2**3)
    five = QuadIdeal.from_generators(5, [QuadElem.rational(5, 11)])
    assert abs(principal_generator(five).norm()) == 121
    P = primes_above_ell(229, 3)
    gen = principal_generator(P.l * P.l_conj)
    assert abs(gen.norm()) == 9
    with pytest.raises(NotPrincipal):
        principal_generator(p2)


def test_residue_units():
    assert residue_units(-4, 5, 2).group == FinAbGroup((5, 5))
    assert residue_units(-4, 5, 1).group.is_trivial()
    R = residue_units(-4, 5, 4)
    assert R.dlog(QuadElem.rational(-4, 6)) == (1, 1)


def test_ray_class_examples():
    assert ray_class_group_ellpart(-4, 5, 1).group.is_trivial()
    assert ray_class_group_ellpart(-4, 5, 2).group == FinAbGroup((5, 5))
    assert ray_class_group_ellpart(-4, 5, 3).group == FinAbGroup((25, 25))
    assert ray_class_group_ellpart(5, 11, 2).group == FinAbGroup((11,))


@pytest.mark.parametrize("pair", [(-4, 5), (5, 11), (-23, 3), (229, 3), (37, 7), (-47, 7), (253, 3)])
def test_ray_growth_and_surjection(pair):
    d, ell = pair
    c = FieldDesc(d).c
    prev = ray_class_group_ellpart(d, ell, 1)
    for m in range(2, 9):
        cur = ray_class_group_ellpart(d, ell, m)
        ratio = cur.group.order // prev.group.order
        assert cur.group.order % prev.group.order == 0
        # residue units grow by ell^2 per level, so the ray group grows by at most that
        assert ratio in (1, ell, ell * ell)
        if m >= 6:
            assert ratio == ell ** (c + 1)
        assert cur.maps_onto(prev)
        prev = cur


def test_disc_bound_enforced():
    big = next(d for d in range(forms.DISC_BOUND + 1, forms.DISC_BOUND + 100) if is_fundamental(d))
    with pytest.raises(ResourceError):
        forms.narrow_group(big)


def test_ray_class_against_pari():
    cypari2 = pytest.importorskip("cypari2")
    pari = cypari2.Pari()
    cyc = pari("(b,M)->bnrinit(b,M).cyc")
    checked = 0
    for d in fundamental_discriminants(-150, 150):
        bnf = None
        for ell in (3, 5, 7):
            if not is_totally_ell_adic(d, ell):
                continue
            bnf = bnf or pari(f"bnfinit(quadpoly({d},y),1)")
            for m in (1, 2, 3):
                ref = ell_sylow(FinAbGroup(tuple(int(x) for x in cyc(bnf, ell**m))), ell)
                assert ray_class_group_ellpart(d, ell, m).group == ref, (d, ell, m)
                checked += 1
    assert checked > 100
