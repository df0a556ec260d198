"""Expression-tree builders: structure, exact evaluation, normalization."""

from fractions import Fraction

import pytest

from nodalbetti.blocks import GenusPair, p_jacobian, p_kummer_desing, p_projective
from nodalbetti.exactpoly import IntPoly, RatFunc
from nodalbetti.pointcount import (Atom, BETA1_LITERAL, IntConst,
                                   JACOBIAN2, KUMMER_DESING, M1_STABLE,
                                   NegativePowerResidue, Power, Product,
                                   Quotient, Q, Sum, TildeAtom, VarX,
                                   atom_dimension, atom_leaves, collect_atoms,
                                   eval_fraction, expr_beta1, expr_beta2,
                                   expr_fiber_A, expr_fiber_B, expr_fiber_K0,
                                   expr_fiber_stable, expr_nq_A, expr_nq_B,
                                   expr_nq_N, expr_nq_k_minus_k0, expr_nq_m12,
                                   gl2_count, gl2_mod_torus_count, iter_nodes,
                                   normalize_tilde, pgl2_count, projective,
                                   qmul, qsum)
from nodalbetti.weil import substitute_counts

GP33 = GenusPair(3, 3)
GP22 = GenusPair(2, 2)


def rf(num, den=1):
    return RatFunc(num if isinstance(num, IntPoly) else IntPoly(num),
                   den if isinstance(den, IntPoly) else IntPoly([den] if isinstance(den, int) else den))


T2 = IntPoly((0, 0, 1))


# --------------------------------------------------------------------------
# split-locus count A

def test_nq_A_substitutes_to_jacobian_difference():
    for g2 in (2, 3, 5):
        gp = GenusPair(3, g2)
        expected = RatFunc(p_jacobian(g2) - (1 << (2 * g2)), IntPoly((2,)))
        assert substitute_counts(expr_nq_A(g2), gp) == expected


def test_nq_A_numeric_evaluation_stays_exact():
    value = eval_fraction(expr_nq_A(2), q=5, atoms={JACOBIAN2: 25})
    assert value == Fraction(9, 2)  # (25 - 16)/2, never 4.5


def test_nq_A_substituted_euler_value():
    for g2 in (2, 3, 4):
        substituted = substitute_counts(expr_nq_A(g2), GenusPair(3, g2))
        assert substituted.evaluate(-1) == Fraction(-(1 << (2 * g2)), 2)


# --------------------------------------------------------------------------
# Kummer-stratum counts

def test_nq_B_contains_exactly_one_kummer_atom():
    kinds = atom_leaves(expr_nq_B(3))
    assert kinds.count(KUMMER_DESING) == 1


def test_nq_B_substituted_form_genus2():
    gp = GenusPair(2, 2)
    expected = (rf([1, 0, 22, 0, 1]) - 16 * rf([1, 0, 1])
                - RatFunc((IntPoly((1, 1)) ** 4) - 16, IntPoly((2,))))
    assert substitute_counts(expr_nq_B(2), gp) == expected


def test_A_plus_B_telescopes_to_punctured_kummer():
    for g2 in (2, 3, 4):
        gp = GenusPair(3, g2)
        lhs = substitute_counts(qsum(expr_nq_A(g2), expr_nq_B(g2)), gp)
        rhs = substitute_counts(expr_nq_k_minus_k0(g2), gp)
        assert lhs == rhs


# --------------------------------------------------------------------------
# correction counts and group orders

def test_beta2_has_exactly_two_quotients():
    quotients = [n for n in iter_nodes(expr_beta2(3)) if isinstance(n, Quotient)]
    assert len(quotients) == 2


def test_group_orders_at_small_q():
    assert eval_fraction(gl2_count(), q=2) == 6       # (4-1)(4-2)
    assert eval_fraction(pgl2_count(), q=3) == 24     # 3(9-1)
    assert eval_fraction(gl2_mod_torus_count(), q=2) == 6  # 2*3


def test_group_order_identities_in_q_ring():
    # as exact polynomial divisions in Z[q]
    q_sq_m1 = IntPoly((-1, 0, 1))
    q_sq_mq = IntPoly((0, -1, 1))
    gl = q_sq_m1 * q_sq_mq
    assert gl.exact_div(q_sq_m1) == q_sq_mq
    assert gl.exact_div(IntPoly((1, -2, 1))) == IntPoly((0, 1, 1))  # (q-1)^2 -> q(q+1)
    pgl = IntPoly((0, -1, 0, 1))  # q(q^2-1)
    assert pgl == IntPoly((0, 1)) * q_sq_m1


def test_beta1_groupings_differ():
    g2 = 3
    gp = GenusPair(3, 3)
    factored = substitute_counts(expr_beta1(g2), gp)
    literal = substitute_counts(expr_beta1(g2, BETA1_LITERAL), gp)
    assert factored != literal


# --------------------------------------------------------------------------
# stratum fiber counts

def test_fiber_stable_contains_beta_subtrees():
    tree = expr_fiber_stable(3, 3)
    nodes = list(iter_nodes(tree))
    assert expr_beta1(3) in nodes
    assert expr_beta2(3) in nodes
    assert pgl2_count() in nodes


def test_pgl_factor_substitutes_to_inverse_powers():
    gp = GenusPair(3, 3)
    # q(q^2 - 1) |-> t^-2 (t^-4 - 1) = (1 - t^4)/t^6
    expected = RatFunc(IntPoly((1, 0, 0, 0, -1)), IntPoly.t_power(6))
    assert substitute_counts(pgl2_count(), gp) == expected


def test_fiber_B_group_factor_simplifies():
    # (q^2-1)(q^2-q)/(q^2-1) = q^2 - q, checked in the exact q-ring
    q_sq_m1 = IntPoly((-1, 0, 1))
    q_sq_mq = IntPoly((0, -1, 1))
    assert (q_sq_m1 * q_sq_mq).exact_div(q_sq_m1) == q_sq_mq


def test_fiber_K0_substituted_genus2():
    gp = GenusPair(2, 2)
    m1 = RatFunc(substitute_counts(Atom(M1_STABLE), gp).num)  # partner polynomial
    inv_t4 = RatFunc(IntPoly.one(), IntPoly.t_power(4))
    expected = m1 * 16 * (1 + (inv_t4 - 1) * rf([1, 0, 1]))
    assert substitute_counts(expr_fiber_K0(2, 2), gp) == expected


def test_fiber_A_case_i_count():
    assert eval_fraction(gl2_mod_torus_count(), q=2) == 6


def test_divisor_count_structure():
    tree = expr_nq_N(3, 3)
    assert len(atom_leaves(tree)) == 4
    assert eval_fraction(qmul(Atom(projective(1)), Atom(projective(1))), q=4) == 25
    # substitution gives partner(M1) * partner(M2(-1)) * (1+t^2)^2
    from nodalbetti.pointcount import M2_MINUS1
    gp = GenusPair(3, 4)
    direct = (substitute_counts(Atom(M1_STABLE), gp)
              * substitute_counts(Atom(M2_MINUS1), gp)
              * rf([1, 0, 1]) * rf([1, 0, 1]))
    assert substitute_counts(tree, gp) == direct


def test_total_count_structure():
    g2 = 3
    tree = expr_nq_m12(3, g2)
    assert isinstance(tree, Sum) and len(tree.terms) == 4
    # every top-level summand carries the stable-moduli factor of curve 1
    for term in tree.terms:
        assert M1_STABLE in atom_leaves(term)
    # the torsion cancellation block is present verbatim
    c = 1 << (2 * g2)
    q_sq_m1 = qsum(Power(Q, 2), IntConst(-1))
    q_sq_mq = qsum(Power(Q, 2), qmul(IntConst(-1), Q))
    cancel = qsum(Q,
                  qmul(Q, q_sq_m1, Atom(projective(g2 - 2))),
                  qmul(q_sq_mq, Atom(projective(g2 - 1))))
    wanted = qmul(IntConst(c), cancel)
    assert any(node == wanted for node in iter_nodes(tree))


def test_total_equals_four_lemma_sum_post_substitution():
    for pair in ((3, 3), (3, 4), (4, 3)):
        gp = GenusPair(*pair)
        total = substitute_counts(expr_nq_m12(*pair), gp)
        four = (substitute_counts(expr_fiber_stable(*pair), gp)
                + substitute_counts(expr_fiber_A(*pair), gp)
                + substitute_counts(expr_fiber_B(*pair), gp)
                + substitute_counts(expr_fiber_K0(*pair), gp)
                + substitute_counts(expr_nq_N(*pair), gp))
        assert total == four


def test_total_equals_four_lemma_sum_random_assignments():
    import random
    rng = random.Random(42)
    g1, g2 = 3, 4
    total = expr_nq_m12(g1, g2)
    four = qsum(expr_fiber_stable(g1, g2), expr_fiber_A(g1, g2),
                expr_fiber_B(g1, g2), expr_fiber_K0(g1, g2), expr_nq_N(g1, g2))
    curve_atoms = [JACOBIAN2, KUMMER_DESING, M1_STABLE]
    from nodalbetti.pointcount import ML21, M2_MINUS1
    curve_atoms += [ML21, M2_MINUS1]
    for _ in range(5):
        q = rng.randint(2, 60)
        atoms = {kind: Fraction(rng.randint(1, 10 ** 5)) for kind in curve_atoms}
        assert eval_fraction(total, q, atoms) == eval_fraction(four, q, atoms)


# --------------------------------------------------------------------------
# normalization

def test_normalize_projective_line():
    # normalizing N(P^1), i.e. scaling by q^-1, gives 1 + x
    normalized = normalize_tilde(Atom(projective(1)), GP33, dim=1)
    assert collect_atoms(normalized) == {(): RatFunc(IntPoly((1, 1)))}


def test_normalize_pgl_factor():
    # the group factor q(q^2 - 1), scaled by q^-3, normalizes to 1 - x^2
    normalized = normalize_tilde(pgl2_count(), GP33, dim=3)
    assert collect_atoms(normalized) == {(): RatFunc(IntPoly((1, 0, -1)))}


def test_normalize_single_atom_is_dimension_consistent():
    # N(Y) q^(-dim Y) normalizes to exactly the tilde atom
    for kind in (JACOBIAN2, KUMMER_DESING, M1_STABLE):
        d = atom_dimension(kind, GP33)
        normalized = normalize_tilde(Atom(kind), GP33, dim=d)
        collected = collect_atoms(normalized)
        key = next(iter(collected))
        assert collected[key] == RatFunc(1)
        assert len(collected) == 1 and len(key) == 1
        assert key[0][0] == "~"


def test_normalize_total_count_has_no_negative_powers():
    normalized = normalize_tilde(expr_nq_m12(3, 3), GP33)
    for coeff in collect_atoms(normalized).values():
        assert coeff.den.coeff(0) != 0


def test_normalize_detects_corrupted_dimension(monkeypatch):
    # overstating dim(M1) makes the leading stable-stratum coefficient
    # (x-valuation zero) pick up a surviving 1/x
    import nodalbetti.pointcount as pc

    def corrupted(kind, gp):
        d = atom_dimension(kind, gp)
        return d + 1 if kind == M1_STABLE else d

    monkeypatch.setattr(pc, "atom_dimension", corrupted)
    with pytest.raises(NegativePowerResidue):
        pc.normalize_tilde(expr_nq_m12(3, 3), GP33)


def test_normalize_underestimated_total_dimension():
    with pytest.raises(NegativePowerResidue):
        normalize_tilde(expr_nq_m12(3, 3), GP33, dim=GP33.dimension - 1)


def test_normalize_rejects_already_normalized_input():
    with pytest.raises(ValueError):
        normalize_tilde(TildeAtom(JACOBIAN2), GP33, dim=0)


def test_eval_rejects_normalized_nodes():
    with pytest.raises(TypeError):
        eval_fraction(Power(VarX(), 2), q=3)


def test_eval_requires_curve_atom_assignment():
    with pytest.raises(KeyError):
        eval_fraction(Atom(JACOBIAN2), q=3)
