"""Places above a split ℓ, residue units mod ℓ^m and ℓ-parts of ray class groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..abelian import FinAbGroup, ell_sylow, hermite_rows, in_row_lattice, presented_group
from ..padic import check_ell, unit_dlog
from .field import QuadElem, RootProvider, is_totally_ell_adic
from .ideals import ClassGroupData, QuadIdeal, _fundamental_unit, class_group_data, prime_ideal


class NotSplit(ValueError):
    """ℓ does not split in the field (the field is not totally ℓ-adic)."""


@dataclass(frozen=True)
class EllPlaces:
    """The two primes above ℓ and the matching embeddings into Z_ℓ.

    ``l`` is the kernel of reduction under ``iota``: elements of ``l`` map
    to multiples of ℓ under ``root``, elements of ``l_conj`` under its
    negative.
    """

    disc: int
    ell: int
    l: QuadIdeal
    l_conj: QuadIdeal
    root: RootProvider

    def iota(self, x: QuadElem, prec: int, conj: bool = False):
        """``(valuation, unit part mod ell^prec)`` of ``x`` at ``l`` (or ``l_conj``)."""
        return x.embed_to(self.root, prec, conj)

    def iota_omega(self, prec: int, conj: bool = False) -> int:
        r = self.root(prec, conj)
        mod = self.ell**prec
        return (self.disc + r.residue) * pow(2, -1, mod) % mod

    def swapped(self) -> EllPlaces:
        return EllPlaces(self.disc, self.ell, self.l_conj, self.l, self.root.swapped())


def primes_above_ell(disc: int, ell: int, swap: bool = False) -> EllPlaces:
    check_ell(ell)
    if not is_totally_ell_adic(disc, ell):
        raise NotSplit(f"{ell} does not split in Q(sqrt({disc}))")
    l = prime_ideal(disc, ell)
    _, B, _ = l.form
    places = EllPlaces(disc, ell, l, l.conj(), RootProvider(disc, ell, B))
    return places.swapped() if swap else places


def unit_coords(places: EllPlaces, x: QuadElem, m: int) -> tuple[int, int]:
    """Coordinates of ``x`` (prime to ℓ) in the ℓ-part ``(Z/ell^(m-1))^2`` of ``(O/ell^m)^*``."""
    out = []
    for conj in (False, True):
        v, u = places.iota(x, m, conj)
        if v != 0:
            raise ValueError(f"{x} is not prime to {places.ell}")
        out.append(unit_dlog(u.residue, places.ell, m))
    return out[0], out[1]


@dataclass(frozen=True)
class ResidueUnits:
    group: FinAbGroup
    places: EllPlaces
    m: int

    def dlog(self, x: QuadElem) -> tuple[int, int]:
        return unit_coords(self.places, x, self.m)


def residue_units(disc: int, ell: int, m: int) -> ResidueUnits:
    """ℓ-part of ``(O/ell^m)^*``, split along the two places by CRT."""
    places = primes_above_ell(disc, ell)
    q = ell ** (m - 1)
    return ResidueUnits(FinAbGroup((q, q) if m > 1 else ()), places, m)


def torsion_units(disc: int) -> int:
    return {-3: 6, -4: 4}.get(disc, 2)


@dataclass
class RayClassData:
    """ℓ-part of the ray class group mod ℓ^m.

    Generators are the class-group generator ideals followed by the two
    residue coordinates; ``relations`` are rows in those coordinates.
    """

    m: int
    group: FinAbGroup
    gens: list[QuadIdeal]
    relations: list[list[int]]
    ell: int = 0
    class_data: ClassGroupData | None = field(default=None, repr=False)

    def maps_onto(self, lower: RayClassData) -> bool:
        """Check the identity on generators induces ``R_m -> R_(m-1)``.

        Every level-``m`` relation, read at level ``m-1``, must lie in the
        lower relation lattice.
        """
        if lower.gens != self.gens or lower.m != self.m - 1:
            return False
        h = hermite_rows(lower.relations, len(self.gens) + 2)
        return all(in_row_lattice(r, h) for r in self.relations)


def _ray_relations(disc: int, ell: int, m: int, cg: ClassGroupData, places: EllPlaces) -> list[list[int]]:
    k = len(cg.gens)
    q = ell ** (m - 1)
    rows = []
    for rel, gamma in zip(cg.relations, cg.relation_generators):
        dl, dl2 = unit_coords(places, gamma, m) if m > 1 else (0, 0)
        rows.append(list(rel) + [-dl, -dl2])
    rows.append([0] * k + [q, 0])
    rows.append([0] * k + [0, q])
    if disc > 0:
        eps = _fundamental_unit(disc)
        dl, dl2 = unit_coords(places, eps, m) if m > 1 else (0, 0)
        rows.append([0] * k + [dl, dl2])
    # roots of unity have order prime to the odd split ell: trivial image
    assert torsion_units(disc) % ell
    return rows


@lru_cache(maxsize=8192)
def ray_class_group_ellpart(disc: int, ell: int, m: int) -> RayClassData:
    if m < 1:
        raise ValueError("modulus exponent must be >= 1")
    places = primes_above_ell(disc, ell)
    cg = class_group_data(disc, (ell,))
    rows = _ray_relations(disc, ell, m, cg, places)
    group = ell_sylow(presented_group(rows, len(cg.gens) + 2)[0], ell)
    return RayClassData(m, group, list(cg.gens), rows, ell, cg)
