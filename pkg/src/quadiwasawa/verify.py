"""Self-verification checks shared by ``quadiwasawa verify`` and the test suite."""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from itertools import combinations, product
from math import gcd, prod

from sympy import factorint

from .abelian import FinAbGroup, GroupHom, knot_group
from .invariants import ChevalleyInput, DEFAULT_M_MAX, chevalley_ambiguous, ell_rationality, gras_log_Q
from .logclass import ell_class_group, wcl
from .padic import PadicInt, fermat_quotient, hensel_sqrt, iwasawa_log
from .quadfield.field import fundamental_discriminants, is_totally_ell_adic, unit_norm
from .quadfield.forms import count_reduced_forms, narrow_group
from .quadfield.ideals import _fundamental_unit, class_group_data
from .verdicts import Reports, Status, verdict_C_infty, verdict_C_Z

SWEEP_ELLS = (3, 5, 7, 11, 13)
# first real quadratic pair with wCl != 1 in scan order (ascending disc, then ell)
WCL_PIN = (253, 3, (3,))


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def split_pairs(lo: int, hi: int, ells: Sequence[int] = SWEEP_ELLS) -> list[tuple[int, int]]:
    return [(d, ell) for d in fundamental_discriminants(lo, hi) for ell in ells if is_totally_ell_adic(d, ell)]


# -- criterion 1 and 8: real sweep ------------------------------------------------


@dataclass
class RealSweep:
    pairs: int
    stabilized: int
    rational: int
    disagreements: list
    wcl_hits: list
    d_max: int = 500


def real_sweep(d_max: int = 500, ells: Sequence[int] = SWEEP_ELLS, m_max: int = DEFAULT_M_MAX) -> RealSweep:
    n = stab = rat = 0
    bad, hits = [], []
    for d, ell in split_pairs(1, d_max - 1, ells):
        n += 1
        r = ell_rationality(d, ell, m_max)
        w = wcl(d, ell)
        if not w.group.is_trivial() and w.stabilized:
            hits.append((d, ell, w.group.invariant_factors))
        if not (r.stabilized and w.stabilized):
            continue
        stab += 1
        rat += r.is_rational
        route_iii = ell_class_group(d, ell).is_trivial() and w.is_trivial()
        if r.is_rational != route_iii:
            bad.append((d, ell, r.torsion.invariant_factors, ell_class_group(d, ell).invariant_factors, w.group.invariant_factors))
    return RealSweep(n, stab, rat, bad, hits, d_max)


def check_cross_route(sweep: RealSweep) -> CheckResult:
    bad = sweep.disagreements
    detail = f"{sweep.stabilized}/{sweep.pairs} stabilized real pairs, {len(bad)} disagreements"
    if bad:
        detail += "; first (disc, ell, T_K, Cl_ell, wCl): " + ", ".join(map(str, bad[:3]))
    return CheckResult(f"C1 T_K=1 <=> (Cl_ell=1 and wCl=1), real disc < {sweep.d_max}", not bad and sweep.stabilized > 0, detail, bad)


def check_heuristic(sweep: RealSweep) -> CheckResult:
    frac = sweep.rational / sweep.stabilized if sweep.stabilized else 0.0
    first = sweep.wcl_hits[0] if sweep.wcl_hits else None
    ok = frac > 0.5 and first == WCL_PIN
    return CheckResult(
        "C8 rational fraction > 0.5 and pinned real wCl != 1",
        ok,
        f"fraction rational {frac:.3f}; first real wCl != 1 at {first} (pin {WCL_PIN})",
    )


# -- criterion 2: imaginary verdicts -----------------------------------------------


def check_imaginary(d_min: int = -500, ells: Sequence[int] = SWEEP_ELLS, m_max: int = DEFAULT_M_MAX) -> CheckResult:
    bad = []
    n = 0
    for d, ell in split_pairs(d_min + 1, -1, ells):
        n += 1
        rep = Reports.compute(d, ell, m_max=m_max)
        vz = verdict_C_Z(d, ell, rep)
        vi = verdict_C_infty(d, ell, rep)
        expect = Status.TRIVIAL if rep.wcl.is_trivial() else Status.NONTRIVIAL
        if not rep.wcl.stabilized or vz.status != expect or vi.status != Status.NONTRIVIAL:
            bad.append((d, ell, vz.status.value, vi.status.value, str(rep.wcl.group)))
    return CheckResult("C2 imaginary C_Z <=> wCl=1, C_infty nontrivial", not bad and n > 0, f"{n} pairs, {len(bad)} failures", bad)


# -- criterion 3: knot groups ------------------------------------------------------


def _alt_coords(x: Sequence[int], y: Sequence[int], d: Sequence[int], pairs) -> tuple[int, ...]:
    return tuple((x[i] * y[j] - x[j] * y[i]) % d[i] for i, j in pairs)


def knot_group_bruteforce(g: FinAbGroup, decomposition: Sequence[GroupHom]) -> FinAbGroup:
    """Enumerate ``G ^ G``, close the images of all wedges ``phi(a) ^ phi(b)`` and count torsion.

    Only for small groups: the whole alternating square is materialized.
    """
    d = g.invariant_factors
    pairs = list(combinations(range(len(d)), 2))
    orders = [d[i] for i, _ in pairs]
    if not pairs:
        return FinAbGroup()
    gens = set()
    for phi in decomposition:
        dom = phi.domain.invariant_factors
        imgs = []
        for a in product(*(range(n) for n in dom)):
            v = [0] * len(d)
            for k, c in enumerate(a):
                img = phi.image_of(k)
                for i in range(len(d)):
                    v[i] += c * img[i]
            imgs.append(tuple(v[i] % d[i] for i in range(len(d))))
        for x, y in combinations(sorted(set(imgs)), 2):
            w = _alt_coords(x, y, d, pairs)
            if any(w):
                gens.add(w)

    def add(u, v):
        return tuple((a + b) % n for a, b, n in zip(u, v, orders))

    zero = tuple(0 for _ in orders)
    sub = {zero}
    for gvec in gens:
        if gvec in sub:
            continue
        # sub is a subgroup, so sub + <gvec> is the union of its translates
        grown = set(sub)
        step = gvec
        while step not in sub:
            grown.update(add(x, step) for x in sub)
            step = add(step, gvec)
        sub = grown
    total = prod(orders)
    q_order = total // len(sub)
    # |Q[p^k]| = #{x : p^k x in H} / |H|; factors of order >= p^k number log_p(|Q[p^k]| / |Q[p^(k-1)]|)
    elems = list(product(*(range(n) for n in orders)))
    factors: list[int] = []
    for p, e in factorint(q_order).items():
        sizes = [1]
        while sizes[-1] < p**e:
            pk = p ** len(sizes)
            killed = sum(1 for x in elems if tuple(pk * a % n for a, n in zip(x, orders)) in sub)
            sizes.append(killed // len(sub))
        at_least = [_logp(sizes[k] // sizes[k - 1], p) for k in range(1, len(sizes))] + [0]
        for k in range(len(at_least) - 1):
            factors += [p ** (k + 1)] * (at_least[k] - at_least[k + 1])
    return FinAbGroup(tuple(factors))


def _logp(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def random_knot_instance(rng: random.Random, max_order: int = 3**6, max_alt: int = 3**8):
    while True:
        primes = rng.choice([(3,), (3,), (2, 3), (5,), (3, 5)])
        factors = []
        for p in primes:
            for _ in range(rng.randint(1, 4)):
                factors.append(p ** rng.randint(1, 2))
        g = FinAbGroup(tuple(factors))
        alt_size = prod(g.invariant_factors[i] for i, _ in combinations(range(g.rank), 2))
        if 1 < g.order <= max_order and alt_size <= max_alt and g.rank >= 2:
            break
    homs = []
    for _ in range(rng.randint(0, 3)):
        dom = FinAbGroup(tuple(rng.choice(g.invariant_factors) for _ in range(rng.randint(1, 2))))
        homs.append(random_hom(rng, dom, g))
    return g, homs


def random_hom(rng: random.Random, dom: FinAbGroup, g: FinAbGroup) -> GroupHom:
    d = g.invariant_factors
    imgs = []
    for n in dom.invariant_factors:
        # an element killed by n: scale each coordinate by d_i / gcd(d_i, n)
        imgs.append([rng.randrange(di) * (di // gcd(di, n)) % di for di in d])
    return GroupHom.from_images(dom, g, imgs)


def check_knot(instances: int = 500, seed: int = 20240) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    for t in range(instances):
        g, homs = random_knot_instance(rng)
        fast = knot_group(g, homs)
        slow = knot_group_bruteforce(g, homs)
        n = rng.choice(g.invariant_factors)
        extra = random_hom(rng, FinAbGroup((n,)), g)
        padded = knot_group(g, homs + [extra])
        if fast != slow or padded != fast:
            bad.append((t, g.invariant_factors, str(fast), str(slow), str(padded)))
    return CheckResult("C3 knot group vs brute force, cyclic padding", not bad, f"{instances} instances, {len(bad)} mismatches", bad)


# -- criterion 4: Chevalley ----------------------------------------------------------


def check_chevalley() -> CheckResult:
    got = []
    ok = True
    for h, n in [(3, 3), (9, 3), (5, 5), (27, 9), (4, 2)]:
        v = chevalley_ambiguous(ChevalleyInput(h, n))
        got.append(v)
        ok &= v == h // n
    genus = chevalley_ambiguous(ChevalleyInput(1, 2, (2, 2), 1))
    # genus count for disc -20: 2^(t-1) with t = 2 ramified primes, and h(-20) = 2
    ok &= genus == 2 == 2 ** (2 - 1) == class_group_data(-20).order
    return CheckResult("C4 Chevalley pins", ok, f"unramified {got}; (h=1,n=2,e=(2,2)) -> {genus}")


# -- criterion 5: ell-adic core ------------------------------------------------------


def check_padic(pairs: int = 1000, seed: int = 7) -> CheckResult:
    rng = random.Random(seed)
    bad = []
    for ell in (3, 5, 7, 11, 13):
        for m in (4, 8, 12):
            mod = ell**m
            for _ in range(pairs // 5):
                x = rng.randrange(1, mod)
                y = rng.randrange(1, mod)
                if x % ell == 0 or y % ell == 0:
                    continue
                lx = iwasawa_log(PadicInt(ell, m, x), ell, m).residue
                ly = iwasawa_log(PadicInt(ell, m, y), ell, m).residue
                lxy = iwasawa_log(PadicInt(ell, m, x * y % mod), ell, m).residue
                if (lx + ly - lxy) % mod:
                    bad.append(("hom", ell, m, x, y))
        for q in range(2, 200):
            if q % ell == 0:
                continue
            lq = iwasawa_log(q ** (ell - 1), ell, 2).residue
            if lq % (ell * ell) != ell * fermat_quotient(q, ell) % (ell * ell):
                bad.append(("fermat", ell, q))
        for a in range(1, 60):
            if a % ell == 0:
                continue
            for prec in range(1, 16):
                try:
                    r = hensel_sqrt(a, ell, prec)
                except ValueError:
                    break
                if (r.residue**2 - a) % ell**prec:
                    bad.append(("hensel", ell, a, prec))
    wief = gras_log_Q(2, 1093, 1).residue
    if wief != 0:
        bad.append(("wieferich", wief))
    return CheckResult("C5 ell-adic core", not bad, f"{len(bad)} failures; gras_log_Q(2,1093) mod 1093 = {wief}", bad)


# -- criterion 6: wCl robustness -------------------------------------------------------


def check_wcl_robustness(samples: int = 50, seed: int = 11, pool: tuple[int, int] = (-500, 500)) -> CheckResult:
    rng = random.Random(seed)
    pairs = split_pairs(*pool)
    # keep the nontrivial pairs represented
    hits = [p for p in pairs if not wcl(*p).group.is_trivial()]
    chosen = rng.sample(hits, min(len(hits), samples // 5))
    chosen += rng.sample([p for p in pairs if p not in chosen], samples - len(chosen))
    bad = []
    for d, ell in chosen:
        base = wcl(d, ell)
        variants = {
            "swap": wcl(d, ell, swap=True),
            "alpha*unit": wcl(d, ell, alpha_twist=(1, 0)),
            "alpha*ell^2": wcl(d, ell, alpha_twist=(0, 2)),
            "alpha*unit^-1*ell": wcl(d, ell, alpha_twist=(-1, 1)),
            "deg scale": wcl(d, ell, degree_scale=2),
            "m+2": wcl(d, ell, base.precision + 2),
        }
        if not base.stabilized:
            bad.append((d, ell, "unstabilized"))
            continue
        for k, v in variants.items():
            if v.group != base.group:
                bad.append((d, ell, k, str(base.group), str(v.group)))
    return CheckResult("C6 wCl robustness", not bad, f"{len(chosen)} pairs ({len(hits)} nontrivial in pool), {len(bad)} failures", bad)


# -- criterion 7: class numbers -----------------------------------------------------------


def check_class_numbers(bound: int = 10_000, wide_bound: int = 2_000) -> CheckResult:
    """Narrow class numbers against reduced-form counts for every |d| <= bound.

    The wide group, which also builds relation generators, is compared with
    the narrow one up to ``wide_bound`` only.
    """
    bad = []
    ds = fundamental_discriminants(-bound, bound)
    for d in ds:
        hn = narrow_group(d).order
        if hn != count_reduced_forms(d):
            bad.append(("narrow", d))
        if abs(d) > wide_bound:
            continue
        wide = class_group_data(d).order
        expect = hn if d < 0 or unit_norm(_fundamental_unit(d)) == -1 else hn // 2
        if wide != expect:
            bad.append(("wide", d, wide, expect))
    pin = class_group_data(-23).order
    ok = not bad and pin == 3
    return CheckResult("C7 class numbers vs reduced forms", ok, f"{len(ds)} discriminants, {len(bad)} failures, h(-23) = {pin}", bad)


# -- criterion 9: optional external cross-check ------------------------------------------


C9_PAIRS = ((-4, 5), (5, 11), (-23, 3), (229, 3), (37, 7), (253, 3), (-971, 3), (-1691, 3), (1129, 3), (-599, 5))


def check_pari(pairs: Sequence[tuple[int, int]] = C9_PAIRS) -> CheckResult | None:
    try:
        import cypari2
    except ImportError:
        return None
    pari = cypari2.Pari()
    bad = []
    for d, ell in pairs:
        bnf = pari(f"bnfinit(quadpoly({d},y),1)")
        ref = FinAbGroup(tuple(int(x) for x in pari.bnflog(bnf, ell)[0]))
        if ref != wcl(d, ell).group:
            bad.append((d, ell, str(ref), str(wcl(d, ell).group)))
    return CheckResult("C9 wCl vs external bnflog (optional)", not bad, f"{len(pairs)} pairs, {len(bad)} mismatches", bad)


def run_all(quick: bool = False, log: Callable[[str], None] = print) -> list[CheckResult]:
    if quick:
        sweep = real_sweep(120)
        checks = [
            lambda: check_cross_route(sweep),
            lambda: check_imaginary(-120),
            lambda: check_knot(60),
            check_chevalley,
            lambda: check_padic(200),
            lambda: check_wcl_robustness(10, pool=(-200, 200)),
        ]
    else:
        sweep = real_sweep()
        checks = [
            lambda: check_cross_route(sweep),
            check_imaginary,
            check_knot,
            check_chevalley,
            check_padic,
            check_wcl_robustness,
        ]
    out = []
    for c in checks:
        res = c()
        log(res.line())
        out.append(res)
    return out
