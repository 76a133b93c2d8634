"""Finite arithmetic invariants of quadratic fields at an odd split prime and triviality verdicts."""

from .abelian import (
    FinAbGroup,
    GroupHom,
    IntMatrix,
    alternating_square,
    cokernel,
    ell_sylow,
    knot_group,
    presented_group,
    smith_normal_form,
)
from .invariants import (
    ChevalleyInput,
    RationalityReport,
    chevalley_ambiguous,
    ell_rationality,
    gras_log_Q,
    is_primitively_ramified_over_Q,
)
from .logclass import LogClassGroup, LogDivisor, cl_prime, log_valuation, wcl
from .padic import PadicInt, fermat_quotient, hensel_sqrt, iwasawa_log
from .quadfield import (
    FieldDesc,
    QuadElem,
    QuadIdeal,
    class_group,
    fundamental_discriminants,
    is_totally_ell_adic,
    kronecker,
    ray_class_group_ellpart,
)
from .verdicts import Reports, Status, Verdict, verdict_C_infty, verdict_C_prime_infty, verdict_C_Z

__all__ = [
    "ChevalleyInput", "FieldDesc", "FinAbGroup", "GroupHom", "IntMatrix", "LogClassGroup", "LogDivisor",
    "PadicInt", "QuadElem", "QuadIdeal", "RationalityReport", "Reports", "Status", "Verdict",
    "alternating_square", "chevalley_ambiguous", "cl_prime", "class_group", "cokernel", "ell_rationality",
    "ell_sylow", "fermat_quotient", "fundamental_discriminants", "gras_log_Q", "hensel_sqrt",
    "is_primitively_ramified_over_Q", "is_totally_ell_adic", "iwasawa_log", "knot_group", "kronecker",
    "log_valuation", "presented_group", "ray_class_group_ellpart", "smith_normal_form", "verdict_C_Z",
    "verdict_C_infty", "verdict_C_prime_infty", "wcl",
]
