"""Poincaré polynomials of both moduli components and their intersection form.

``poincare_m12`` assembles the closed-form Poincaré polynomial of the first
component in exact rational-function arithmetic and certifies, via the final
conversion to a polynomial, that all denominators cancel.  The second
component is the same space with the roles of the two curves exchanged, so
``poincare_m21`` evaluates the first assembly at the swapped genus pair.  The
intersection Poincaré polynomial (top perversity) is the coefficient-wise sum
of the two components, because the normalization of the full moduli space is
their disjoint union.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .blocks import (GenusPair, ONE_MINUS_T2, ONE_MINUS_T4, beta1_tilde,
                     beta2_tilde, p_jacobian, p_kummer_desing,
                     p_moduli_fixed_det, p_projective, two_pow)
from .exactpoly import IntPoly, RatFunc
from .report import CheckReport


class Component(str, Enum):
    """The two smooth components and the total space's intersection form."""

    M12 = "m12"
    M21 = "m21"
    INTERSECTION = "intersection"


#: Poincaré polynomial of (P^1)^2 over the intersection divisor: t^2 (1+t^2)^2
_DIVISOR_FIBER = IntPoly((0, 0, 1, 0, 2, 0, 1))


@lru_cache(maxsize=None)
def poincare_m12(gp: GenusPair) -> IntPoly:
    """Closed-form Poincaré polynomial of the first moduli component.

    Four top-level summands, each carrying the stable-moduli factor of the
    first curve: the stable stratum with its bracket of correction terms, the
    2-torsion stratum, the punctured Kummer stratum, and the intersection
    divisor.  The sum is assembled as a rational function and must reduce to
    a polynomial of degree 6(g1+g2)-6; anything else raises.
    """
    g1, g2 = gp.g1, gp.g2
    c = two_pow(g2)
    t = IntPoly.t_power
    m1 = RatFunc(p_moduli_fixed_det(g1))
    ml21 = RatFunc(p_moduli_fixed_det(g2))
    m2_minus1 = ml21  # same closed form at determinant degree -1
    j2 = RatFunc(p_jacobian(g2))
    kummer = RatFunc(p_kummer_desing(g2))
    p_hi = RatFunc(p_projective(g2 - 1))
    p_lo = RatFunc(p_projective(g2 - 2))
    one_minus_t2 = RatFunc(ONE_MINUS_T2)
    one_minus_t4 = RatFunc(ONE_MINUS_T4)

    stable = m1 * one_minus_t4 * (
        ml21
        + j2 * RatFunc(t(2 * g2), ONE_MINUS_T4)
        - (beta1_tilde(g2) + beta2_tilde(g2)))

    torsion = m1 * c * (RatFunc(t(6 * g2))
                        + RatFunc(t(4 * g2 - 2)) * one_minus_t4 * p_hi)

    punctured_kummer = m1 * (
        kummer * RatFunc(t(4 * g2 - 4)) * one_minus_t2
        + j2 * (RatFunc(t(4 * g2 - 2)) + RatFunc(t(2 * g2 - 2)) * one_minus_t4 * p_lo)
        - c * (RatFunc(t(6 * g2 - 2))
               + RatFunc(t(4 * g2 - 2)) * one_minus_t4 * p_lo
               + RatFunc(t(4 * g2 - 2)) * one_minus_t2 * p_hi))

    divisor = m1 * m2_minus1 * RatFunc(_DIVISOR_FIBER)

    poly = (stable + torsion + punctured_kummer + divisor).to_poly()
    assert poly.degree == 2 * gp.dimension, \
        f"assembled degree {poly.degree}, expected {2 * gp.dimension}"
    assert poly.coeff(0) == 1, f"assembled constant term {poly.coeff(0)}, expected 1"
    return poly


def poincare_m21(gp: GenusPair) -> IntPoly:
    """Poincaré polynomial of the second component: the first component's
    assembly with the two genus roles exchanged."""
    return poincare_m12(gp.swapped())


def intersection_poincare(gp: GenusPair) -> IntPoly:
    """Intersection Poincaré polynomial (top perversity) of the full moduli
    space: the coefficient-wise sum of the two components."""
    return poincare_m12(gp) + poincare_m21(gp)


def poincare(gp: GenusPair, component: Component) -> IntPoly:
    if component == Component.M12:
        return poincare_m12(gp)
    if component == Component.M21:
        return poincare_m21(gp)
    if component == Component.INTERSECTION:
        return intersection_poincare(gp)
    raise ValueError(f"unknown component {component!r}")


@dataclass(frozen=True)
class BettiTable:
    """Betti numbers of one component (or of the intersection form) together
    with the derived degree and Euler characteristic."""

    genus: GenusPair
    component: Component
    coeffs: tuple
    degree: int
    euler_char: int


def betti_table(gp: GenusPair, component: Component) -> BettiTable:
    """Wrap the polynomial of a component with its derived statistics,
    validating the structural invariants on the way."""
    poly = poincare(gp, component)
    degree = poly.degree
    expected_degree = 2 * gp.dimension
    assert degree == expected_degree, \
        f"degree {degree}, expected {expected_degree} for {component.value}"
    expected_b0 = 2 if component == Component.INTERSECTION else 1
    assert poly.coeff(0) == expected_b0, \
        f"constant term {poly.coeff(0)}, expected {expected_b0} for {component.value}"
    coeffs = tuple(poly.coeff(i) for i in range(degree + 1))
    euler = sum(c if i % 2 == 0 else -c for i, c in enumerate(coeffs))
    return BettiTable(genus=gp, component=component, coeffs=coeffs,
                      degree=degree, euler_char=euler)


def verify_component(gp: GenusPair, component: Component) -> CheckReport:
    """Structural checks for one component: correct degree, palindromy
    (duality), nonnegative coefficients, vanishing Euler characteristic, and
    the universal low-order Betti numbers.  The low-order values are only
    asserted inside the tabulated range (both genera at least 3); below it
    they are reported as informational.
    """
    report = CheckReport()
    table = betti_table(gp, component)
    poly = poincare(gp, component)
    d = 2 * gp.dimension
    intersection = component == Component.INTERSECTION

    report.add("degree", table.degree == d,
               f"degree {table.degree}, expected {d}" if table.degree != d else "")

    mism = next((i for i in range(d // 2 + 1)
                 if poly.coeff(i) != poly.coeff(d - i)), None)
    report.add("palindromic", mism is None,
               "" if mism is None else
               f"B_{mism} = {poly.coeff(mism)} but B_{d - mism} = {poly.coeff(d - mism)}")

    neg = next((i for i, c in enumerate(table.coeffs) if c < 0), None)
    report.add("nonnegative_coefficients", neg is None,
               "" if neg is None else f"B_{neg} = {table.coeffs[neg]} < 0")

    report.add("euler_characteristic_zero", table.euler_char == 0,
               "" if table.euler_char == 0 else f"chi = {table.euler_char}")

    in_range = min(gp.g1, gp.g2) >= 3
    if not in_range:
        report.add("genus_outside_tabulated_range", True,
                   "low-order Betti checks are informational below genus 3",
                   advisory=True)
    scale = 2 if intersection else 1
    expected_low = {0: scale, 1: 0, 2: 3 * scale,
                    3: 2 * scale * (gp.g1 + gp.g2), 4: 8 * scale}
    for i, expected in expected_low.items():
        got = poly.coeff(i)
        report.add(f"b{i}", got == expected,
                   "" if got == expected else f"B_{i} = {got}, expected {expected}",
                   advisory=not in_range)
    return report
