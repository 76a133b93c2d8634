from __future__ import annotations

import pytest
from sympy import factorint, isprime, primerange

from quadiwasawa.abelian import FinAbGroup, ell_sylow
from quadiwasawa.invariants import (
    ChevalleyInput,
    InconsistentInput,
    chevalley_ambiguous,
    ell_rationality,
    fermat_unit,
    gras_log_Q,
    is_primitively_ramified_over_Q,
)
from quadiwasawa.logclass import ell_class_group
from quadiwasawa.padic import fermat_quotient
from quadiwasawa.quadfield.field import fundamental_discriminants, is_totally_ell_adic
from quadiwasawa.quadfield.forms import class_group
from quadiwasawa.quadfield.ray import NotSplit


def test_gaussian_field_at_five():
    r = ell_rationality(-4, 5)
    assert r.stabilized and r.rank == 2 and r.torsion.is_trivial() and r.is_rational
    assert len(r.window) == 3
    assert r.summary() == "rank=2 torsion=1"


@pytest.mark.parametrize("pair", [(5, 11), (229, 3), (37, 7), (253, 3), (40, 3), (41, 5)])
def test_real_fields_have_rank_one(pair):
    r = ell_rationality(*pair)
    assert r.stabilized and r.rank == 1


def test_ell_dividing_h_real_is_not_rational():
    assert ell_class_group(229, 3) == FinAbGroup((3,))
    r = ell_rationality(229, 3)
    assert not r.is_rational and r.torsion.order % 3 == 0


def test_real_fields_class_group_in_torsion():
    for d in fundamental_discriminants(1, 400):
        for ell in (3, 5):
            if is_totally_ell_adic(d, ell) and not ell_class_group(d, ell).is_trivial():
                r = ell_rationality(d, ell)
                assert r.stabilized and not r.is_rational, (d, ell)


def test_imaginary_class_group_need_not_sit_in_torsion():
    # a quotient of Z_3^2 can be Z/3 with no torsion at all
    assert class_group(-23) == FinAbGroup((3,))
    r = ell_rationality(-23, 3)
    assert r.stabilized and r.is_rational


@pytest.mark.parametrize("pair", [(-4, 5), (229, 3), (37, 7), (-23, 3)])
def test_rationality_monotone_in_m_max(pair):
    small = ell_rationality(*pair, m_max=6)
    big = ell_rationality(*pair, m_max=12)
    if small.stabilized:
        assert big.stabilized
        assert (big.rank, big.torsion, big.is_rational) == (small.rank, small.torsion, small.is_rational)


def test_unstabilized_is_explicit():
    r = ell_rationality(37, 7, m_max=3)
    if not r.stabilized:
        assert r.summary() == "unstabilized" and not r.is_rational
    with pytest.raises(ValueError):
        ell_rationality(-4, 5, m_max=2)
    with pytest.raises(NotSplit):
        ell_rationality(-4, 3)


def test_gras_log_examples():
    assert gras_log_Q(2, 1093, 1).residue == 0
    assert gras_log_Q(2, 5, 2).is_unit()
    with pytest.raises(ValueError):
        gras_log_Q(5, 5, 2)
    with pytest.raises(ValueError):
        gras_log_Q(9, 5, 2)


@pytest.mark.parametrize("ell", [3, 5, 7, 11])
def test_gras_log_search_oracle(ell):
    hits = [q for q in primerange(2, 5000) if q % (ell * ell) == 1][:5]
    assert hits
    for q in hits:
        assert not gras_log_Q(q, ell, 3).is_unit()


@pytest.mark.parametrize("ell", [3, 5, 7, 11, 13])
def test_gras_unit_iff_fermat_quotient_nonzero(ell):
    for q in primerange(2, 2000):
        if q != ell:
            assert gras_log_Q(q, ell, 2).is_unit() == (fermat_quotient(q, ell) != 0) == fermat_unit(q, ell)


def test_primitivity_examples():
    assert is_primitively_ramified_over_Q([2], 5)
    assert not is_primitively_ramified_over_Q([2], 1093)
    assert not is_primitively_ramified_over_Q([101], 5)  # 101 = 1 mod 25
    assert not is_primitively_ramified_over_Q([], 7)
    assert is_primitively_ramified_over_Q([101, 2], 5)
    with pytest.raises(ValueError):
        is_primitively_ramified_over_Q([2, 2], 5)


def test_chevalley_examples():
    assert chevalley_ambiguous(ChevalleyInput(3, 3)) == 1
    assert chevalley_ambiguous(ChevalleyInput(1, 2, (2, 2))) == 2
    assert chevalley_ambiguous(ChevalleyInput(1, 1)) == 1
    with pytest.raises(InconsistentInput):
        chevalley_ambiguous(ChevalleyInput(1, 3))
    with pytest.raises(ValueError):
        ChevalleyInput(0, 2)
    with pytest.raises(ValueError):
        ChevalleyInput(1, 2, (2, -1))


def test_chevalley_on_imaginary_quadratic_genus_data():
    # K/Q ramified at the t primes dividing d: ambiguous classes = 2-torsion of Cl = 2^(t-1)
    for d in fundamental_discriminants(-2000, -1):
        t = len(factorint(-d))
        amb = chevalley_ambiguous(ChevalleyInput(1, 2, (2,) * t, 1))
        two = ell_sylow(class_group(d), 2)
        assert amb == 2 ** len(two.invariant_factors), d
    assert isprime(1093)
