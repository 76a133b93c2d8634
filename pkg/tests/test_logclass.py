from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadiwasawa.abelian import FinAbGroup
from quadiwasawa.padic import padic_val
from quadiwasawa.quadfield.field import QuadElem, fundamental_discriminants, is_totally_ell_adic
from quadiwasawa.quadfield.ideals import _fundamental_unit, class_group_data, generator_of_product
from quadiwasawa.quadfield.ray import NotSplit, primes_above_ell
from quadiwasawa.logclass import (
    LogPresentation,
    cl_prime,
    degree_zero_quotient,
    ell_class_group,
    log_degree,
    log_presentation,
    log_valuation,
    wcl,
)
from quadiwasawa.verify import SWEEP_ELLS, WCL_PIN

PAIRS = [(-4, 5), (5, 11), (-23, 3), (229, 3), (37, 7), (-47, 7), (253, 3), (-35, 3), (40, 3), (-84, 5)]


@pytest.mark.parametrize("pair", [(-4, 5), (229, 3), (-47, 7)])
def test_log_valuation_normalization(pair):
    d, ell = pair
    P = primes_above_ell(d, ell)
    m = 6
    assert log_valuation(ell, P, m) == 0
    assert log_valuation(1 + ell, P, m) == 1
    assert log_valuation(1 + ell, P, m, conj=True) == 1
    for a in range(0, 12, 3):
        for b in range(3):
            assert log_valuation((1 + ell) ** a * ell**b, P, m) == a


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(-4, 5), (5, 11), (229, 3), (-47, 7)]), st.integers(-60, 60), st.integers(-60, 60),
       st.integers(-60, 60), st.integers(-60, 60), st.booleans())
def test_log_valuation_is_homomorphism(pair, a, b, c, e, conj):
    d, ell = pair
    x, y = QuadElem(d, a, b), QuadElem(d, c, e)
    if x.is_zero() or y.is_zero():
        return
    P = primes_above_ell(d, ell)
    m = 5
    lhs = log_valuation(x * y, P, m, conj)
    assert lhs == (log_valuation(x, P, m, conj) + log_valuation(y, P, m, conj)) % ell**m


def test_log_degree_of_one_plus_ell():
    assert log_degree(6, 5, 4) == 1
    assert log_degree(5, 5, 4) == 0


def test_wcl_trivial_example():
    g = wcl(-4, 5)
    assert g.is_trivial() and g.stabilized and g.precision == 8


def test_wcl_pin():
    d, ell, factors = WCL_PIN
    g = wcl(d, ell)
    assert g.stabilized and g.group == FinAbGroup(factors)


def test_pin_is_first_real_hit_in_scan_order():
    d0, ell0, _ = WCL_PIN
    for d in fundamental_discriminants(1, d0 - 1):
        for ell in SWEEP_ELLS:
            if is_totally_ell_adic(d, ell):
                assert wcl(d, ell).is_trivial(), (d, ell)
    assert not any(not wcl(d0, ell).is_trivial() for ell in SWEEP_ELLS if ell < ell0 and is_totally_ell_adic(d0, ell))


def test_wcl_rejects_bad_input():
    with pytest.raises(ValueError):
        wcl(-4, 5, 1)
    with pytest.raises(NotSplit):
        wcl(-4, 3)


def test_nonzero_degree_row_rejected():
    pres = LogPresentation(5, 3, ("l", "l'"), (1, 1), ((1, 0),))
    with pytest.raises(AssertionError):
        degree_zero_quotient(pres)


@pytest.mark.parametrize("pair", PAIRS)
def test_principal_divisors_have_degree_zero(pair):
    pres = log_presentation(*pair, 6)
    assert all(div.degree == 0 for div in pres.divisors())


def _content_oracle(d: int, ell: int, m: int = 8) -> bool:
    """Class number one: wCl = 1 iff vt(alpha) or vt(eps) is an ell-adic unit, (alpha) = l / l'."""
    P = primes_above_ell(d, ell)
    alpha = generator_of_product(d, [(P.l, 1), (P.l_conj, -1)])
    vals = [log_valuation(alpha, P, m)]
    if d > 0:
        vals.append(log_valuation(_fundamental_unit(d), P, m))
    return min(padic_val(v, ell) if v else m for v in vals) == 0


def test_class_number_one_matches_content_criterion():
    seen = 0
    for d in fundamental_discriminants(-300, 300):
        if class_group_data(d).order != 1:
            continue
        for ell in (3, 5, 7, 11):
            if not is_totally_ell_adic(d, ell):
                continue
            g = wcl(d, ell)
            assert g.stabilized
            assert g.is_trivial() == _content_oracle(d, ell), (d, ell)
            seen += 1
    assert seen > 40


@pytest.mark.parametrize("pair", PAIRS)
def test_wcl_invariance(pair):
    d, ell = pair
    base = wcl(d, ell)
    assert wcl(d, ell, swap=True).group == base.group
    for twist in ((1, 0), (0, 2), (-1, 1)):
        assert wcl(d, ell, alpha_twist=twist).group == base.group
    assert wcl(d, ell, degree_scale=2).group == base.group
    assert wcl(d, ell, 10).group == base.group


def test_degree_scale_must_be_unit():
    with pytest.raises(ValueError):
        log_presentation(-4, 5, 4, degree_scale=5)


def _norm_form_represents(d: int, n: int) -> bool:
    """Is n = N(x) for some x in the maximal order of Q(sqrt d), d < 0."""
    b = d % 2
    c = (b * b - d) // 4
    bound = int((4 * n * 4) ** 0.5) + 2
    return any(x * x + b * x * y + c * y * y == n for x in range(-bound, bound + 1) for y in range(-bound, bound + 1))


def test_cl_prime_examples():
    assert cl_prime(-4, 5).is_trivial()
    # [l] for Q(sqrt -23) at 3 is nontrivial because 3 is not a norm, so it generates Cl = Z/3
    assert not _norm_form_represents(-23, 3)
    assert ell_class_group(-23, 3) == FinAbGroup((3,))
    assert cl_prime(-23, 3).is_trivial()
    for d, ell in PAIRS:
        if ell_class_group(d, ell).is_trivial():
            assert cl_prime(d, ell).is_trivial()


@pytest.mark.parametrize("pair", PAIRS + [(-239, 3), (-599, 5), (-971, 3), (1129, 3), (-1691, 3)])
def test_wcl_surjects_onto_cl_prime(pair):
    d, ell = pair
    big = sorted(wcl(d, ell).group.invariant_factors, reverse=True)
    small = sorted(cl_prime(d, ell).invariant_factors, reverse=True)
    assert len(small) <= len(big)
    assert all(b % s == 0 for s, b in zip(small, big))
