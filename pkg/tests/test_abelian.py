from __future__ import annotations

import random
from itertools import combinations
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadiwasawa.abelian import (
    FinAbGroup,
    GroupHom,
    IntMatrix,
    MalformedHom,
    alternating_square,
    cokernel,
    ell_sylow,
    generate_group,
    hermite_rows,
    in_row_lattice,
    induced_alt_map,
    knot_group,
    presented_group,
    smith_normal_form,
)
from quadiwasawa.verify import knot_group_bruteforce, random_hom, random_knot_instance

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_snf_example():
    s, _, _ = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert s.diagonal_entries() == [2, 4]


def test_snf_identity_and_zero():
    assert smith_normal_form(IntMatrix.identity(3))[0].diagonal_entries() == [1, 1, 1]
    assert smith_normal_form(IntMatrix.zeros(2, 2))[0].diagonal_entries() == [0, 0]


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_certificate(rows):
    m = IntMatrix.from_rows(rows)
    s, u, v = smith_normal_form(m)
    assert u @ m @ v == s
    assert abs(u.determinant()) == 1 and abs(v.determinant()) == 1
    diag = s.diagonal_entries()
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    for i in range(s.nrows):
        for j in range(s.ncols):
            if i != j:
                assert s[i, j] == 0


def test_snf_big_entries_exact():
    big = 10**40
    s, u, v = smith_normal_form(IntMatrix.from_rows([[big, 3 * big + 1], [7, 11]]))
    assert u @ IntMatrix.from_rows([[big, 3 * big + 1], [7, 11]]) @ v == s
    assert s.diagonal_entries()[0] == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_cokernel_order_is_abs_det(rows):
    m = IntMatrix.from_rows(rows)
    det = m.determinant()
    g, free = cokernel(m)
    if det == 0:
        assert free >= 1
    else:
        assert free == 0 and g.order == abs(det)


def test_cokernel_examples():
    assert cokernel(IntMatrix.diagonal([2, 4])) == (FinAbGroup((2, 4)), 0)
    assert cokernel(IntMatrix.from_rows([[3], [0]])) == (FinAbGroup((3,)), 1)
    assert cokernel(IntMatrix.zeros(2, 0)) == (FinAbGroup(), 2)


def test_group_normalization():
    assert FinAbGroup((2, 3)).invariant_factors == (6,)
    assert FinAbGroup((4, 2, 1)).invariant_factors == (2, 4)
    assert FinAbGroup((6, 4)).invariant_factors == (2, 12)
    assert FinAbGroup((1, 1)).is_trivial()
    assert str(FinAbGroup((9, 3))) == "Z/3 x Z/9"
    assert str(FinAbGroup()) == "1"
    with pytest.raises(ValueError):
        FinAbGroup((0,))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 200), max_size=5))
def test_normalization_preserves_order_and_chain(orders):
    g = FinAbGroup(tuple(orders))
    assert g.order == prod(orders)
    d = g.invariant_factors
    assert all(x >= 2 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_ell_sylow_examples():
    assert ell_sylow(FinAbGroup((6, 12)), 3) == FinAbGroup((3, 3))
    assert ell_sylow(FinAbGroup((4,)), 3).is_trivial()
    assert ell_sylow(FinAbGroup((9,)), 3) == FinAbGroup((9,))


def test_alternating_square_examples():
    assert alternating_square(FinAbGroup((7,))).group.is_trivial()
    assert alternating_square(FinAbGroup((3, 3))).group == FinAbGroup((3,))
    assert alternating_square(FinAbGroup((3, 9))).group == FinAbGroup((3,))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(2, 30), max_size=4))
def test_alternating_square_order(orders):
    g = FinAbGroup(tuple(orders))
    d = g.invariant_factors
    expect = prod(gcd(d[i], d[j]) for i, j in combinations(range(len(d)), 2))
    assert alternating_square(g).group.order == expect


def test_induced_alt_map_examples():
    g = FinAbGroup((3, 3))
    ident = GroupHom.from_images(g, g, [[1, 0], [0, 1]])
    assert induced_alt_map(ident).image_of(0) == [1]
    swap = GroupHom.from_images(g, g, [[0, 1], [1, 0]])
    assert induced_alt_map(swap).image_of(0) == [2]
    incl = GroupHom.from_images(FinAbGroup((3,)), g, [[1, 0]])
    psi = induced_alt_map(incl)
    assert psi.domain.is_trivial()


def test_malformed_hom_rejected():
    g = FinAbGroup((3, 9))
    with pytest.raises(MalformedHom):
        induced_alt_map(GroupHom.from_images(FinAbGroup((3,)), g, [[0, 1]]))
    with pytest.raises(MalformedHom):
        GroupHom(FinAbGroup((3,)), g, IntMatrix.from_rows([[1]]))


def test_knot_group_examples():
    g = FinAbGroup((3, 3))
    a = GroupHom.from_images(FinAbGroup((3,)), g, [[1, 0]])
    b = GroupHom.from_images(FinAbGroup((3,)), g, [[0, 1]])
    assert knot_group(g, [a, b]) == FinAbGroup((3,))
    full = GroupHom.from_images(g, g, [[1, 0], [0, 1]])
    assert knot_group(g, [full]).is_trivial()
    cyc = FinAbGroup((27,))
    assert knot_group(cyc, [GroupHom.from_images(FinAbGroup((27,)), cyc, [[1]])]).is_trivial()


def test_knot_group_codomain_checked():
    with pytest.raises(MalformedHom):
        knot_group(FinAbGroup((3, 3)), [GroupHom.from_images(FinAbGroup((3,)), FinAbGroup((3, 9)), [[1, 0]])])


@pytest.mark.parametrize("seed", range(40))
def test_knot_group_matches_bruteforce(seed):
    rng = random.Random(seed)
    g, homs = random_knot_instance(rng)
    assert knot_group(g, homs) == knot_group_bruteforce(g, homs)


@pytest.mark.parametrize("seed", range(20))
def test_cyclic_decomposition_group_changes_nothing(seed):
    rng = random.Random(1000 + seed)
    g, homs = random_knot_instance(rng)
    extra = random_hom(rng, FinAbGroup((rng.choice(g.invariant_factors),)), g)
    assert knot_group(g, homs + [extra]) == knot_group(g, homs)


def test_presented_group_rows():
    assert presented_group([[2, 0], [0, 4]], 2) == (FinAbGroup((2, 4)), 0)
    assert presented_group([[3, 0]], 2) == (FinAbGroup((3,)), 1)


def test_hermite_membership():
    h = hermite_rows([[2, 4], [6, 8]], 2)
    assert in_row_lattice([8, 12], h)
    assert not in_row_lattice([1, 0], h)


def test_generate_group_cyclic():
    # Z/12 generated by 8 and 6 (orders 3 and 2)
    gg = generate_group([8, 6], lambda a, b: (a + b) % 12, 0)
    assert gg.order == 6
    assert gg.structure() == FinAbGroup((6,))
