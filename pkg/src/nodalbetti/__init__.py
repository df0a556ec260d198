"""Exact Betti numbers for the two-component fixed-determinant moduli space
of rank-2 sheaves on a reducible nodal curve, and the intersection Poincaré
polynomial of the full space.

The library has three layers: an exact arithmetic kernel (integer polynomials
and reduced rational functions), a symbolic layer that transcribes the
finite-field point-count formulas for the stratified moduli component, and an
assembly layer producing the closed-form Poincaré polynomials, Betti tables
and verification reports.  Everything is exact; nothing here ever touches a
float.
"""

from . import blocks, moduli, pointcount
from .blocks import (GenusPair, beta1_tilde, beta2_tilde, p_jacobian,
                     p_kummer_desing, p_moduli_fixed_det, p_projective)
from .exactpoly import (DivisionByZero, InexactDivision, IntPoly,
                        NotPolynomial, RatFunc, poly_gcd)
from .moduli import (BettiTable, Component, betti_table, intersection_poincare,
                     poincare, poincare_m12, poincare_m21, verify_component)
from .pointcount import NegativePowerResidue, normalize_tilde
from .report import CheckReport, CheckResult
from .weil import (UnknownAtom, kirwan_substitute, substitute_counts,
                   verify_decomposition, verify_kirwan_consistency)

__version__ = "0.1.0"


def clear_caches() -> None:
    """Drop every memoized block, builder and assembly value.

    Only fault-injection tests need this: after monkeypatching a formula they
    must force downstream consumers to recompute, and afterwards restore a
    pristine state.
    """
    cached = [
        blocks.p_moduli_fixed_det, blocks.p_jacobian, blocks.p_projective,
        blocks.p_kummer_desing, blocks.beta1_tilde, blocks.beta2_tilde,
        moduli.poincare_m12,
        pointcount.expr_nq_A, pointcount.expr_nq_k_minus_k0,
        pointcount.expr_nq_B, pointcount.expr_beta1, pointcount.expr_beta2,
        pointcount.expr_nq_m2_semistable, pointcount.expr_fiber_stable,
        pointcount.expr_fiber_A, pointcount.expr_fiber_B,
        pointcount.expr_fiber_K0, pointcount.expr_nq_N, pointcount.expr_nq_m12,
    ]
    for fn in cached:
        fn.cache_clear()

__all__ = [
    "BettiTable", "CheckReport", "CheckResult", "Component", "DivisionByZero",
    "GenusPair", "InexactDivision", "IntPoly", "NegativePowerResidue",
    "NotPolynomial", "RatFunc", "UnknownAtom", "beta1_tilde", "beta2_tilde",
    "betti_table", "intersection_poincare", "kirwan_substitute",
    "normalize_tilde", "p_jacobian", "p_kummer_desing", "p_moduli_fixed_det",
    "p_projective", "poincare", "poincare_m12", "poincare_m21", "poly_gcd",
    "substitute_counts", "verify_component", "verify_decomposition",
    "verify_kirwan_consistency", "clear_caches",
]
