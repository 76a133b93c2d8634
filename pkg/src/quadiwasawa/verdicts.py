"""Triviality verdicts for the Iwasawa modules C_infty, C_prime_infty and C_Z.

Each verdict is a pure function of finite invariants.  Theorem tags are
short descriptive names; the citation text states the equivalence that was
applied, in formula form.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from enum import Enum

from .abelian import FinAbGroup
from .invariants import RationalityReport, ell_rationality
from .logclass import LogClassGroup, ell_class_group, wcl
from .padic import check_ell
from .quadfield.field import FieldDesc, kronecker
from .quadfield.ray import NotSplit


class Status(str, Enum):
    TRIVIAL = "Trivial"
    NONTRIVIAL = "Nontrivial"
    UNDETERMINED = "Undetermined"


TARGETS = ("C_infty", "C_prime_infty", "C_Z")

TP1 = ("TP1", "C_infty = 1 <=> K is ell-rational and totally real")
SCHOLIE = ("LOG-PRINCIPAL", "C'_infty = 1 <=> wCl_K = 1")
REAL_T = ("REAL-QUAD/T_K", "K real quadratic: C_Z = 1 <=> T_K = 1")
REAL_CLW = ("REAL-QUAD/Cl+wCl", "K real quadratic: C_Z = 1 <=> (Cl_K = 1 and wCl_K = 1)")
IMAG_PROP = ("IMAG-QUAD", "K imaginary quadratic: C_Z = 1 <=> wCl_K = 1")
TP2 = ("TP2", "K CM with C_Z = 1 => K ell-rational, [K+:Q] <= 3 and wCl_K = 1")
TAME = ("TAME-CD", "ell odd and K totally ell-adic: K_infty/K is tame at every place")


class HypothesisError(ValueError):
    """A standing hypothesis (odd ℓ, totally ℓ-adic field) fails."""


class ConsistencyError(RuntimeError):
    """Two equivalent routes to the same verdict disagree on stabilized data."""


@dataclass(frozen=True)
class Citation:
    tag: str
    statement: str
    values: dict

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Verdict:
    target: str
    status: Status
    justification: tuple[Citation, ...]
    preconditions_checked: tuple[str, ...]
    inputs: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target}")
        if self.status != Status.UNDETERMINED and not self.justification:
            raise ValueError("a decided verdict needs a theorem citation")
        for c in self.justification:
            for k, v in c.values.items():
                if self.inputs.get(k) != v:
                    raise ValueError(f"cited value {k}={v!r} missing from inputs")

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "status": self.status.value,
            "tags": [c.tag for c in self.justification],
            "justification": [c.to_dict() for c in self.justification],
            "preconditions": list(self.preconditions_checked),
            "inputs": dict(self.inputs),
        }


def check_hypotheses(disc: int, ell: int) -> tuple[str, ...]:
    FieldDesc(disc)
    try:
        check_ell(ell)
    except ValueError as exc:
        raise HypothesisError(str(exc)) from exc
    if kronecker(disc, ell) != 1:
        raise HypothesisError(
            f"K = Q(sqrt({disc})) is not totally {ell}-adic: {ell} does not split"
        )
    return ("ell odd prime", "K totally ell-adic", TAME[0])


@dataclass(frozen=True)
class Reports:
    """Finite invariants of one (disc, ell) pair feeding the verdicts."""

    disc: int
    ell: int
    rationality: RationalityReport
    wcl: LogClassGroup
    cl_ell: FinAbGroup

    @classmethod
    def compute(cls, disc: int, ell: int, m: int = 8, m_max: int = 12) -> Reports:
        try:
            check_hypotheses(disc, ell)
        except NotSplit as exc:
            raise HypothesisError(str(exc)) from exc
        return cls(disc, ell, ell_rationality(disc, ell, m_max), wcl(disc, ell, m), ell_class_group(disc, ell))

    def snapshot(self) -> dict:
        r = self.rationality
        return {
            "disc": self.disc,
            "ell": self.ell,
            "real": self.disc > 0,
            "rational": r.is_rational if r.stabilized else None,
            "T_K": str(r.torsion) if r.stabilized else None,
            "rationality_stabilized": r.stabilized,
            "wCl": str(self.wcl.group),
            "wCl_stabilized": self.wcl.stabilized,
            "Cl_ell": str(self.cl_ell),
        }


def _verdict(target: str, status: Status, cites: list[tuple[tuple[str, str], list[str]]], pre, inputs) -> Verdict:
    just = tuple(Citation(tag, text, {k: inputs[k] for k in keys}) for (tag, text), keys in cites)
    return Verdict(target, status, just, pre, inputs)


def verdict_C_infty(disc: int, ell: int, reports: Reports) -> Verdict:
    pre = check_hypotheses(disc, ell)
    inputs = reports.snapshot()
    if disc < 0:
        return _verdict("C_infty", Status.NONTRIVIAL, [(TP1, ["real"])], pre, inputs)
    if not reports.rationality.stabilized:
        return _verdict("C_infty", Status.UNDETERMINED, [], pre, inputs)
    status = Status.TRIVIAL if reports.rationality.is_rational else Status.NONTRIVIAL
    return _verdict("C_infty", status, [(TP1, ["real", "rational", "T_K"])], pre, inputs)


def verdict_C_prime_infty(disc: int, ell: int, log_group: LogClassGroup) -> Verdict:
    pre = check_hypotheses(disc, ell)
    inputs = {"disc": disc, "ell": ell, "wCl": str(log_group.group), "wCl_stabilized": log_group.stabilized}
    if not log_group.stabilized:
        return _verdict("C_prime_infty", Status.UNDETERMINED, [], pre, inputs)
    status = Status.TRIVIAL if log_group.is_trivial() else Status.NONTRIVIAL
    return _verdict("C_prime_infty", status, [(SCHOLIE, ["wCl"])], pre, inputs)


def verdict_C_Z(disc: int, ell: int, reports: Reports) -> Verdict:
    """Real fields are decided by both the T_K route and the (Cl, wCl) route.

    When both are stabilized and disagree a :class:`ConsistencyError` is
    raised; it is never resolved in favour of either route.
    """
    pre = check_hypotheses(disc, ell)
    inputs = reports.snapshot()
    w = reports.wcl
    if disc < 0:
        if not w.stabilized:
            return _verdict("C_Z", Status.UNDETERMINED, [], pre, inputs)
        status = Status.TRIVIAL if w.is_trivial() else Status.NONTRIVIAL
        return _verdict("C_Z", status, [(IMAG_PROP, ["wCl"])], pre, inputs)
    r = reports.rationality
    route_iii = None
    if not reports.cl_ell.is_trivial():
        route_iii = False
    elif w.stabilized:
        route_iii = w.is_trivial()
    route_ii = r.is_rational if r.stabilized else None
    if route_ii is not None and route_iii is not None and route_ii != route_iii:
        raise ConsistencyError(
            f"disc={disc} ell={ell}: T_K = {r.torsion} but Cl_ell = {reports.cl_ell}, wCl = {w.group}"
        )
    decided = route_ii if route_ii is not None else route_iii
    if decided is None:
        return _verdict("C_Z", Status.UNDETERMINED, [], pre, inputs)
    cites = []
    if route_ii is not None:
        cites.append((REAL_T, ["real", "rational", "T_K"]))
    if route_iii is not None:
        cites.append((REAL_CLW, ["Cl_ell", "wCl"]))
    return _verdict("C_Z", Status.TRIVIAL if decided else Status.NONTRIVIAL, cites, pre, inputs)


@dataclass(frozen=True)
class CMDescriptor:
    """A CM field described only by the data the necessary conditions need."""

    plus_degree: int
    ell_rational: bool | None
    wcl_trivial: bool | None


def verdict_C_Z_cm(desc: CMDescriptor) -> Verdict:
    """Necessary conditions only: a violation proves ``C_Z != 1``, nothing proves triviality."""
    inputs = {"plus_degree": desc.plus_degree, "ell_rational": desc.ell_rational, "wcl_trivial": desc.wcl_trivial}
    pre = ("K CM", "K totally ell-adic")
    violated = [
        k for k, bad in (
            ("plus_degree", desc.plus_degree > 3),
            ("ell_rational", desc.ell_rational is False),
            ("wcl_trivial", desc.wcl_trivial is False),
        ) if bad
    ]
    if violated:
        return _verdict("C_Z", Status.NONTRIVIAL, [(TP2, violated)], pre, inputs)
    return _verdict("C_Z", Status.UNDETERMINED, [], pre, inputs)


def all_verdicts(disc: int, ell: int, reports: Reports) -> dict[str, Verdict]:
    return {
        "C_infty": verdict_C_infty(disc, ell, reports),
        "C_prime_infty": verdict_C_prime_infty(disc, ell, reports.wcl),
        "C_Z": verdict_C_Z(disc, ell, reports),
    }
