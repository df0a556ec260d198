"""Exact arithmetic kernel: integer polynomials and reduced rational functions.

A polynomial in the single variable t is stored densely as a tuple of
arbitrary-precision integer coefficients, ascending, so ``coeffs[i]`` is the
coefficient of t^i.  The zero polynomial is the empty tuple; otherwise the
leading coefficient is nonzero.  Betti numbers grow quickly with the genus
(six digits already in the tabulated range), so plain Python integers are the
right coefficient type and nothing here ever rounds.

``RatFunc`` is a quotient of two ``IntPoly`` kept in a canonical reduced form:
the polynomial GCD of numerator and denominator is constant, the integer
contents of numerator and denominator are coprime, and the denominator's
lowest-degree nonzero coefficient is positive (so denominators like 1 - t^4
keep the shape the formulas are written in).  Reduction uses a fraction-free
primitive-part Euclidean GCD, so no rational coefficients appear at any
intermediate step.  Canonical form makes equality a structural comparison.

Every value is immutable and every operation is a pure function, so values can
be shared freely between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Union


class InexactDivision(ArithmeticError):
    """Polynomial division left a remainder or a non-integer coefficient.

    Every division performed by the closed-form assemblies is mathematically
    exact, so this firing always means a transcription bug, never data.
    """


class DivisionByZero(ZeroDivisionError):
    """Division of a rational function by zero."""


class NotPolynomial(ArithmeticError):
    """A rational function expected to be polynomial has a nonconstant
    denominator after reduction."""


class IntPoly:
    """Dense univariate polynomial with integer coefficients.

    >>> IntPoly([1, 1]) * IntPoly([1, -1])
    IntPoly('1 - t^2')
    >>> IntPoly([1, 0, 0, 1]) ** 2
    IntPoly('1 + 2t^3 + t^6')
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "IntPoly":
        return cls(())

    @classmethod
    def one(cls) -> "IntPoly":
        return cls((1,))

    @classmethod
    def monomial(cls, coefficient: int, power: int) -> "IntPoly":
        """The polynomial ``coefficient * t**power``."""
        if power < 0:
            raise ValueError("monomial power must be nonnegative")
        return cls((0,) * power + (coefficient,))

    @classmethod
    def t_power(cls, power: int) -> "IntPoly":
        return cls.monomial(1, power)

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        """Coefficient of t^i, with absent coefficients read as 0."""
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def leading_coeff(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def trailing_coeff(self) -> int:
        """Lowest-degree nonzero coefficient (0 for the zero polynomial)."""
        for c in self.coeffs:
            if c:
                return c
        return 0

    def content(self) -> int:
        """Nonnegative gcd of all coefficients (0 for the zero polynomial)."""
        c = 0
        for a in self.coeffs:
            c = gcd(c, a)
            if c == 1:
                break
        return c

    def primitive_part(self) -> "IntPoly":
        """Divide out the content, keeping signs."""
        c = self.content()
        if c <= 1:
            return self
        return IntPoly(a // c for a in self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPoly((other,))
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- ring arithmetic ---------------------------------------------------

    def _coerce(self, other) -> "IntPoly":
        if isinstance(other, IntPoly):
            return other
        if isinstance(other, int):
            return IntPoly((other,))
        return NotImplemented

    def __add__(self, other) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "IntPoly":
        return (-self) + other

    def __mul__(self, other) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        if n < 0:
            raise ValueError("IntPoly power must be nonnegative")
        result = IntPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "IntPoly":
        """Multiply by t^k."""
        if self.is_zero():
            return self
        return IntPoly((0,) * k + self.coeffs)

    # -- division ----------------------------------------------------------

    def exact_div(self, d: "IntPoly") -> "IntPoly":
        """Exact quotient self / d in Z[t].

        Raises InexactDivision if the quotient does not exist with integer
        coefficients (nonzero remainder or fractional coefficient); never
        truncates.
        """
        d = self._coerce(d)
        if d.is_zero():
            raise DivisionByZero("division of polynomial by zero")
        if self.is_zero():
            return IntPoly()
        if self.degree < d.degree:
            raise InexactDivision(
                f"degree {self.degree} dividend cannot be a multiple of degree {d.degree} divisor")
        rem = list(self.coeffs)
        dc = d.coeffs
        lead = dc[-1]
        qlen = len(rem) - len(dc) + 1
        quot = [0] * qlen
        for k in range(qlen - 1, -1, -1):
            c = rem[k + len(dc) - 1]
            if c % lead:
                raise InexactDivision(
                    f"coefficient of t^{k} in the quotient is {c}/{lead}, not an integer")
            qc = c // lead
            quot[k] = qc
            if qc:
                for j, dj in enumerate(dc):
                    rem[k + j] -= qc * dj
        if any(rem):
            raise InexactDivision(
                f"nonzero remainder of degree {max(i for i, c in enumerate(rem) if c)}")
        return IntPoly(quot)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.exact_div(other)

    # -- queries used by the verification suites ---------------------------

    def evaluate(self, x: int) -> int:
        """Exact value at an integer point (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_fraction(self, x) -> Fraction:
        acc = Fraction(0)
        x = Fraction(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_palindromic(self, d: int) -> bool:
        """True iff coeff(i) == coeff(d - i) for 0 <= i <= d."""
        if d < 0:
            raise ValueError("palindromy degree must be nonnegative")
        return all(self.coeff(i) == self.coeff(d - i) for i in range(d // 2 + 1))

    # -- display -----------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            elif i == 1:
                body = "t" if mag == 1 else f"{mag}t"
            else:
                body = f"t^{i}" if mag == 1 else f"{mag}t^{i}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append((" + " if c > 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"IntPoly('{self}')"


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive GCD in Z[t] by the fraction-free primitive-part Euclidean
    algorithm (pseudo-remainders, each reduced to its primitive part).

    The result is primitive with positive leading coefficient; integer
    content of the inputs is deliberately not included.
    """
    a = a.primitive_part()
    b = b.primitive_part()
    while not b.is_zero():
        a, b = b, _pseudo_rem(a, b).primitive_part()
    if a.is_zero():
        return a
    if a.leading_coeff() < 0:
        a = -a
    return a


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder of a by b: remainder of lc(b)^(deg a - deg b + 1) * a."""
    if b.is_zero():
        raise DivisionByZero("pseudo-remainder by zero")
    if a.degree < b.degree:
        return a
    rem = list(a.coeffs)
    dc = b.coeffs
    lead = dc[-1]
    steps = a.degree - b.degree + 1
    for k in range(steps - 1, -1, -1):
        # multiply the running remainder by lc(b) once per elimination step
        if lead != 1:
            for i in range(k + len(dc) - 1):
                rem[i] *= lead
        c = rem[k + len(dc) - 1]
        rem[k + len(dc) - 1] = 0
        if c:
            for j in range(len(dc) - 1):
                rem[k + j] -= c * dc[j]
    return IntPoly(rem[: len(dc) - 1])


PolyLike = Union["RatFunc", IntPoly, int]


class RatFunc:
    """Reduced quotient of two integer polynomials.

    The canonical form (constant polynomial GCD, coprime integer contents,
    positive trailing denominator coefficient) is established on
    construction, so ``==`` is a structural comparison.

    >>> RatFunc(IntPoly([0, 0, 1]), IntPoly([1, 0, 0, 0, -1])) * 2
    RatFunc('(2t^2)/(1 - t^4)')
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Union[IntPoly, int], den: Union[IntPoly, int] = 1):
        if isinstance(num, int):
            num = IntPoly((num,))
        if isinstance(den, int):
            den = IntPoly((den,))
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            num, den = IntPoly(), IntPoly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            k = gcd(num.content(), den.content())
            if k > 1:
                num = IntPoly(c // k for c in num.coeffs)
                den = IntPoly(c // k for c in den.coeffs)
            if den.trailing_coeff() < 0:
                num, den = -num, -den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @classmethod
    def from_poly(cls, p: IntPoly) -> "RatFunc":
        return cls(p, IntPoly.one())

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num.coeffs, self.den.coeffs))

    # -- field arithmetic ----------------------------------------------------

    def __add__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den,
                       self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division of rational function by zero")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        other = _as_ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            if self.is_zero():
                raise DivisionByZero("negative power of zero")
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc(self.num ** n, self.den ** n)

    # -- conversions ---------------------------------------------------------

    def to_poly(self) -> IntPoly:
        """The underlying polynomial, when the reduced denominator is 1.

        Raises NotPolynomial otherwise; a nonconstant or non-unit constant
        denominator at this point signals an assembly error upstream.
        """
        if self.den == IntPoly.one():
            return self.num
        raise NotPolynomial(f"reduced denominator is {self.den}, not 1")

    def evaluate(self, x) -> Fraction:
        """Exact value at a rational point away from denominator roots."""
        d = self.den.evaluate_fraction(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return self.num.evaluate_fraction(x) / d

    def __str__(self):
        if self.den == IntPoly.one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RatFunc('{self}')"


def _as_ratfunc(value) -> RatFunc:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, IntPoly):
        return RatFunc(value)
    if isinstance(value, int):
        return RatFunc(IntPoly((value,)))
    return NotImplemented


#: zero and one as rational functions, shared since values are immutable
RF_ZERO = RatFunc(IntPoly())
RF_ONE = RatFunc(IntPoly.one())
