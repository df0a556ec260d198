"""Substitution from normalized point counts to Poincaré polynomials.

The normalized count of each moduli component satisfies a rational-function
relation among the normalized counts of smooth auxiliary varieties, valid for
every field extension.  The substitution lemma turns such a relation into the
same relation among Poincaré polynomials by replacing x = 1/q with t^2 and
each normalized count with the Poincaré polynomial of the variety over the
complex numbers.  ``verify_kirwan_consistency`` drives the whole pipeline
(stratified count -> normalized form -> substitution) and compares the result
with the closed-form assembly, exactly.

Consistency failures produce structured witnesses (first mismatching
coefficient, residual rational function) rather than booleans: transcription
debugging is the expected failure mode.
"""

from __future__ import annotations

from fractions import Fraction
import random

from . import moduli
from .blocks import (GenusPair, beta1_tilde, beta2_tilde, p_jacobian,
                     p_kummer_desing, p_moduli_fixed_det, p_projective)
from .exactpoly import IntPoly, RatFunc
from .pointcount import (Atom, AtomKind, BETA1_FACTORED, BETA1_LITERAL, Expr,
                         IntConst, Power, Product, Quotient, Sum, TildeAtom,
                         VarQ, VarX, eval_fraction, expr_beta1, expr_beta2,
                         expr_fiber_A, expr_fiber_B, expr_fiber_K0,
                         expr_fiber_stable, expr_nq_N, expr_nq_m12,
                         JACOBIAN2, KUMMER_DESING, M1_STABLE, ML21, M2_MINUS1,
                         normalize_tilde, q_minus_one, qmul, qsum)
from .report import CheckReport


class UnknownAtom(LookupError):
    """An atom kind with no declared Poincaré-polynomial partner."""


T_SQUARED = IntPoly((0, 0, 1))


def weil_partner(kind: AtomKind, gp: GenusPair) -> IntPoly:
    """The declared Poincaré-polynomial partner of an atom."""
    if kind.tag == "jacobian2":
        return p_jacobian(gp.g2)
    if kind.tag == "kummer_desing":
        return p_kummer_desing(gp.g2)
    if kind.tag == "m1_stable":
        return p_moduli_fixed_det(gp.g1)
    if kind.tag == "ml21" or kind.tag == "m2_minus1":
        return p_moduli_fixed_det(gp.g2)
    if kind.tag == "projective":
        return p_projective(kind.n)
    raise UnknownAtom(f"no Poincaré partner declared for atom {kind}")


def _substitute(e: Expr, leaf) -> RatFunc:
    if isinstance(e, IntConst):
        return RatFunc(e.value)
    if isinstance(e, Sum):
        acc = RatFunc(0)
        for tm in e.terms:
            acc = acc + _substitute(tm, leaf)
        return acc
    if isinstance(e, Product):
        acc = RatFunc(1)
        for f in e.factors:
            acc = acc * _substitute(f, leaf)
        return acc
    if isinstance(e, Power):
        return _substitute(e.base, leaf) ** e.exponent
    if isinstance(e, Quotient):
        return _substitute(e.num, leaf) / _substitute(e.den, leaf)
    return leaf(e)


def kirwan_substitute(e: Expr, gp: GenusPair) -> RatFunc:
    """Substitute x -> t^2 and each tilde atom by its Poincaré partner.

    The expression must be in normalized x-and-tilde form (as produced by
    normalize_tilde); raw counts or the variable q are rejected.
    """

    def leaf(node: Expr) -> RatFunc:
        if isinstance(node, VarX):
            return RatFunc(T_SQUARED)
        if isinstance(node, TildeAtom):
            return RatFunc(weil_partner(node.kind, gp))
        if isinstance(node, (VarQ, Atom)):
            raise ValueError(
                f"{type(node).__name__} leaf in an expression that should be normalized")
        raise TypeError(f"cannot substitute node {type(node).__name__}")

    return _substitute(e, leaf)


def substitute_counts(e: Expr, gp: GenusPair) -> RatFunc:
    """Substitute q -> 1/t^2 and each count atom by its Poincaré partner.

    This is the plain homomorphic image of a raw (un-normalized) count
    expression in the field of rational functions of t; two count
    expressions agreeing here and on random numeric assignments are treated
    as equal.
    """

    def leaf(node: Expr) -> RatFunc:
        if isinstance(node, VarQ):
            return RatFunc(IntPoly.one(), T_SQUARED)
        if isinstance(node, Atom):
            return RatFunc(weil_partner(node.kind, gp))
        if isinstance(node, (VarX, TildeAtom)):
            raise ValueError(
                f"{type(node).__name__} leaf in an expression that should be un-normalized")
        raise TypeError(f"cannot substitute node {type(node).__name__}")

    return _substitute(e, leaf)


def _diff_witness(lhs: RatFunc, rhs: RatFunc) -> str:
    """Human-readable first point of disagreement between two values."""
    if lhs == rhs:
        return ""
    if lhs.den == IntPoly.one() and rhs.den == IntPoly.one():
        idx = next(i for i in range(max(lhs.num.degree, rhs.num.degree) + 1)
                   if lhs.num.coeff(i) != rhs.num.coeff(i))
        return (f"first differing coefficient at t^{idx}: "
                f"{lhs.num.coeff(idx)} vs {rhs.num.coeff(idx)}")
    return f"rational residual: {_clip(str(lhs - rhs))}"


def _clip(text: str, limit: int = 200) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def verify_kirwan_consistency(gp: GenusPair) -> CheckReport:
    """Check that the counting pipeline reproduces the closed form.

    Two substantive checks: the fully normalized and substituted total count
    must equal the closed-form Poincaré polynomial of the first component as
    a reduced rational function, and the transformed correction block
    (beta1 + beta2)(q - 1) q^(-(3 g2 - 3)) must equal the two closed-form
    correction terms.  An advisory entry records how the ambiguous binding in
    beta1's third summand was resolved.
    """
    report = CheckReport()
    g1, g2 = gp.g1, gp.g2

    pipeline = kirwan_substitute(normalize_tilde(expr_nq_m12(g1, g2), gp), gp)
    closed = RatFunc(moduli.poincare_m12(gp))
    report.add("count_pipeline_matches_closed_form", pipeline == closed,
               _diff_witness(pipeline, closed))

    target = beta1_tilde(g2) + beta2_tilde(g2)

    def beta_block(grouping: str) -> RatFunc:
        block = qmul(qsum(expr_beta1(g2, grouping), expr_beta2(g2)), q_minus_one())
        return kirwan_substitute(normalize_tilde(block, gp, dim=3 * g2 - 3), gp)

    factored = beta_block(BETA1_FACTORED)
    report.add("beta_block_matches_correction_terms", factored == target,
               _diff_witness(factored, target))

    literal = beta_block(BETA1_LITERAL)
    if factored == target and literal != target:
        witness = ("typeset binding (scale factor attached to the projective count) "
                   f"is inconsistent, residual {_clip(str(literal - target))}; "
                   "the factored binding is used")
        report.add("beta1_third_summand_grouping", True, witness, advisory=True)
    elif factored == target and literal == target:
        report.add("beta1_third_summand_grouping", True,
                   "both bindings are consistent; recording both", advisory=True)
    else:
        report.add("beta1_third_summand_grouping", False,
                   "factored binding failed; literal binding "
                   + ("passed" if literal == target else "also failed"),
                   advisory=True)
    return report


def _random_assignments(gp: GenusPair, count: int = 5, seed: int = 20240315):
    rng = random.Random(seed + 1000 * gp.g1 + gp.g2)
    curve_atoms = (JACOBIAN2, KUMMER_DESING, M1_STABLE, ML21, M2_MINUS1)
    for _ in range(count):
        q = Fraction(rng.randint(2, 97))
        atoms = {kind: Fraction(rng.randint(1, 10 ** 6)) for kind in curve_atoms}
        yield q, atoms


def verify_decomposition(gp: GenusPair) -> CheckReport:
    """Check that the printed total count equals the sum of the four stratum
    fiber counts, both as reduced rational functions after substitution and
    on random exact numeric assignments.  An advisory entry records that the
    alternative literal bracket nesting of the printed total (which would
    put the intersection-divisor count inside the Kummer-stratum bracket)
    fails this identity.
    """
    report = CheckReport()
    g1, g2 = gp.g1, gp.g2
    total = expr_nq_m12(g1, g2)
    four = qsum(expr_fiber_stable(g1, g2),
                qsum(expr_fiber_A(g1, g2), expr_fiber_B(g1, g2)),
                expr_fiber_K0(g1, g2),
                expr_nq_N(g1, g2))

    same_rf = substitute_counts(total, gp) == substitute_counts(four, gp)
    same_numeric = all(
        eval_fraction(total, q, atoms) == eval_fraction(four, q, atoms)
        for q, atoms in _random_assignments(gp))
    report.add("stratum_decomposition_identity", same_rf and same_numeric,
               "" if same_rf and same_numeric else _diff_witness(
                   substitute_counts(total, gp), substitute_counts(four, gp)))

    # literal trailing-bracket variant: the divisor count absorbed into the
    # Kummer-stratum bracket as a summand, doubling the stable-moduli factor
    stable, kummer_block, k0_block, divisor = total.terms
    m1_factor, kummer_sum = kummer_block.factors
    literal_variant = qsum(stable,
                           qmul(m1_factor, Sum(kummer_sum.terms + (divisor,))),
                           k0_block)
    literal_differs = any(
        eval_fraction(literal_variant, q, atoms) != eval_fraction(total, q, atoms)
        for q, atoms in _random_assignments(gp))
    report.add("total_count_bracket_grouping", literal_differs,
               "four-summand grouping used; the literal trailing-bracket "
               "nesting fails the decomposition identity" if literal_differs
               else "literal nesting unexpectedly agrees; recording both",
               advisory=True)
    return report
