"""Building-block Poincaré polynomials for the closed-form assembly.

Each function constructs one named block of the closed-form Poincaré
polynomial of the moduli components: the fixed-determinant stable moduli of a
genus-g curve, the Jacobian, projective spaces, the desingularized Kummer
variety, and the two rational-function correction terms.  The bracket
structure of the source formulas is transcribed term by term, with no manual
algebraic simplification, so that any transcription slip surfaces as a
detectable consistency failure downstream rather than a silent "fix".

All blocks are deterministic pure functions of the genus and are cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .exactpoly import IntPoly, RatFunc


@dataclass(frozen=True)
class GenusPair:
    """Genera of the two smooth components of the nodal curve.

    The tabulated range starts at genus 3; genus 2 is mathematically
    well-formed for every block and is accepted, but verification reports
    flag it as outside the tabulated range.
    """

    g1: int
    g2: int

    def __post_init__(self):
        if self.g1 < 2 or self.g2 < 2:
            raise ValueError(f"both genera must be >= 2, got ({self.g1}, {self.g2})")

    def swapped(self) -> "GenusPair":
        return GenusPair(self.g2, self.g1)

    @property
    def dimension(self) -> int:
        """Complex dimension of either moduli component: 3(g1 + g2) - 3."""
        return 3 * (self.g1 + self.g2) - 3


def _t(k: int) -> IntPoly:
    return IntPoly.t_power(k)


ONE = IntPoly.one()
ONE_MINUS_T2 = IntPoly([1, 0, -1])
ONE_PLUS_T2 = IntPoly([1, 0, 1])
ONE_MINUS_T4 = IntPoly([1, 0, 0, 0, -1])


def two_pow(g2: int) -> int:
    """2^(2 g2), the number of square roots of the trivial line bundle."""
    return 1 << (2 * g2)


@lru_cache(maxsize=None)
def p_moduli_fixed_det(g: int) -> IntPoly:
    """Poincaré polynomial of the rank-2 fixed-determinant (odd degree)
    stable moduli over a smooth genus-g curve:

        [(1 + t^3)^(2g) - t^(2g) (1 + t)^(2g)] / [(1 - t^2)(1 - t^4)]

    The quotient is exact; degree 6g - 6.
    """
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    numerator = (ONE + _t(3)) ** (2 * g) - _t(2 * g) * (ONE + _t(1)) ** (2 * g)
    return numerator.exact_div(ONE_MINUS_T2 * ONE_MINUS_T4)


@lru_cache(maxsize=None)
def p_jacobian(g: int) -> IntPoly:
    """Poincaré polynomial (1 + t)^(2g) of a g-dimensional Jacobian."""
    if g < 0:
        raise ValueError(f"genus must be >= 0, got {g}")
    return (ONE + _t(1)) ** (2 * g)


@lru_cache(maxsize=None)
def p_projective(n: int) -> IntPoly:
    """Poincaré polynomial 1 + t^2 + ... + t^(2n) of projective n-space."""
    if n < 0:
        raise ValueError(f"projective dimension must be >= 0, got {n}")
    coeffs = [0] * (2 * n + 1)
    coeffs[0::2] = [1] * (n + 1)
    return IntPoly(coeffs)


@lru_cache(maxsize=None)
def p_kummer_desing(g: int) -> IntPoly:
    """Poincaré polynomial of the desingularized Kummer variety of a
    g-dimensional Jacobian: odd Betti numbers vanish, b_0 = b_2g = 1, and
    b_i = C(2g, i) + 2^(2g) for even 0 < i < 2g.
    """
    if g < 2:
        raise ValueError(f"genus must be >= 2, got {g}")
    coeffs = [0] * (2 * g + 1)
    coeffs[0] = 1
    coeffs[2 * g] = 1
    for i in range(2, 2 * g, 2):
        coeffs[i] = comb(2 * g, i) + two_pow(g)
    return IntPoly(coeffs)


@lru_cache(maxsize=None)
def beta1_tilde(g2: int) -> RatFunc:
    """First correction term of the stable-stratum bracket:

        P(K~) t^(4g2-4)/(1+t^2)
      + P(J2) [ t^(4g2-2)/(1-t^4) + P(P^(g2-2)) t^(2g2-2) ]
      - P(P^(g2-1)) 2^(2g2) t^(4g2-2)/(1+t^2)
      - 2^(2g2) [ t^(6g2-2)/(1-t^4) + P(P^(g2-2)) t^(4g2-2) ]

    Reduced; the denominator divides (1+t^2)(1-t^4).
    """
    if g2 < 2:
        raise ValueError(f"genus must be >= 2, got {g2}")
    c = two_pow(g2)
    kt = RatFunc(p_kummer_desing(g2))
    j2 = RatFunc(p_jacobian(g2))
    p_hi = RatFunc(p_projective(g2 - 1))
    p_lo = RatFunc(p_projective(g2 - 2))
    return (kt * RatFunc(_t(4 * g2 - 4), ONE_PLUS_T2)
            + j2 * (RatFunc(_t(4 * g2 - 2), ONE_MINUS_T4) + p_lo * _t(2 * g2 - 2))
            - p_hi * RatFunc(c * _t(4 * g2 - 2), ONE_PLUS_T2)
            - c * (RatFunc(_t(6 * g2 - 2), ONE_MINUS_T4) + p_lo * _t(4 * g2 - 2)))


@lru_cache(maxsize=None)
def beta2_tilde(g2: int) -> RatFunc:
    """Second correction term:

        2^(2g2) [ t^(6g2)/(1-t^4) + t^(4g2-2) P(P^(g2-1)) ]
    """
    if g2 < 2:
        raise ValueError(f"genus must be >= 2, got {g2}")
    c = two_pow(g2)
    return c * (RatFunc(_t(6 * g2), ONE_MINUS_T4)
                + RatFunc(_t(4 * g2 - 2)) * p_projective(g2 - 1))
