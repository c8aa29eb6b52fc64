# Copyright 2026 Canonical Ltd.
# See LICENSE file for licensing details.

"""Exact coefficient arithmetic in the formal parameter q.

Two value types live here:
 - LaurentPoly: integer Laurent polynomials in q (arbitrary-precision coefficients).
 - RatFunc:     reduced ratios of Laurent polynomials. The denominator is always stored as an
                ordinary polynomial in q with a nonzero constant term and a positive leading
                coefficient, which makes the representation canonical: two RatFunc values are
                equal iff their stored fields are identical.

Both types are immutable after construction. The module also provides the q-numbers,
q-factorials and q-binomials used throughout the engine, exact evaluation at a rational q, and
a reduced-row-echelon elimination over RatFunc.
"""

import fractions
import functools
import logging
import math
import re
import typing
from collections.abc import Callable, Hashable, Iterable, Mapping

import sympy
from sympy.polys.polyerrors import ExactQuotientFailed

logger = logging.getLogger(__name__)

_Q_SYMBOL = sympy.Symbol("q")
_TERM_RE = re.compile(r"^(-?\d+)\*q\^(-?\d+)$")

Rational = fractions.Fraction
K = typing.TypeVar("K", bound=Hashable)


class ZeroDenominatorError(ZeroDivisionError):
    """A denominator vanished (formally or at a specialization of q)."""


class LaurentPoly:
    """Integer-coefficient Laurent polynomial in q."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        """Construct from an exponent -> coefficient mapping; zero coefficients are dropped.

        Args:
            coeffs: Mapping from exponent of q to integer coefficient.
        """
        self._coeffs: dict[int, int] = {
            int(e): int(c) for e, c in (coeffs or {}).items() if c
        }

    @classmethod
    def constant(cls, value: int) -> "LaurentPoly":
        """Constant Laurent polynomial."""
        return cls({0: value})

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        """The monomial coeff * q^exponent."""
        return cls({exponent: coeff})

    @property
    def coeffs(self) -> Mapping[int, int]:
        """Read-only view of the stored (nonzero) coefficients."""
        return dict(self._coeffs)

    def coeff(self, exponent: int) -> int:
        """Coefficient of q^exponent."""
        return self._coeffs.get(exponent, 0)

    def terms(self) -> list[tuple[int, int]]:
        """(exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._coeffs.items())

    @property
    def is_zero(self) -> bool:
        """Whether this is the zero polynomial."""
        return not self._coeffs

    @property
    def min_exp(self) -> int:
        """Lowest exponent present (0 for the zero polynomial)."""
        return min(self._coeffs) if self._coeffs else 0

    @property
    def max_exp(self) -> int:
        """Highest exponent present (0 for the zero polynomial)."""
        return max(self._coeffs) if self._coeffs else 0

    @property
    def is_monomial(self) -> bool:
        """Whether exactly one term is present."""
        return len(self._coeffs) == 1

    @property
    def is_unit(self) -> bool:
        """Whether this is a unit of Z[q, 1/q], i.e. +-q^k."""
        return self.is_monomial and abs(next(iter(self._coeffs.values()))) == 1

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)."""
        return functools.reduce(math.gcd, (abs(c) for c in self._coeffs.values()), 0)

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q^k."""
        if k == 0:
            return self
        return LaurentPoly({e + k: c for e, c in self._coeffs.items()})

    def invert_q(self) -> "LaurentPoly":
        """Substitute q -> 1/q."""
        return LaurentPoly({-e: c for e, c in self._coeffs.items()})

    def divide_int(self, k: int) -> "LaurentPoly":
        """Exact division of every coefficient by the integer k.

        Raises:
            ValueError: If some coefficient is not divisible by k.
        """
        if any(c % k for c in self._coeffs.values()):
            raise ValueError(f"{self} is not divisible by {k}")
        return LaurentPoly({e: c // k for e, c in self._coeffs.items()})

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division in Z[q, 1/q].

        Args:
            other: The divisor.

        Returns:
            The quotient.

        Raises:
            ZeroDenominatorError: If other is zero.
            ValueError: If the division is not exact.
        """
        if other.is_zero:
            raise ZeroDenominatorError("division of a Laurent polynomial by zero")
        if self.is_zero:
            return self
        if other.is_monomial:
            (k, c), = other._coeffs.items()
            return self.divide_int(c).shift(-k)
        try:
            quotient = _to_poly(self.shift(-self.min_exp)).exquo(
                _to_poly(other.shift(-other.min_exp))
            )
        except ExactQuotientFailed:
            raise ValueError(f"{other} does not divide {self}")
        return _from_poly(quotient, self.min_exp - other.min_exp)

    def evaluate(self, q0: Rational | int) -> Rational:
        """Exact value at a nonzero rational q0."""
        q0 = Rational(q0)
        return sum((c * q0**e for e, c in self._coeffs.items()), Rational(0))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self._coeffs.items()})

    def __add__(self, other: object) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result = dict(self._coeffs)
        for e, c in other._coeffs.items():
            result[e] = result.get(e, 0) + c
        return LaurentPoly(result)

    __radd__ = __add__

    def __sub__(self, other: object) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: object) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(other) - self
        return NotImplemented

    def __mul__(self, other: object) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self._coeffs.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: dict[int, int] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                result[e1 + e2] = result.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(result)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_unit:
                raise ValueError(f"{self} is not invertible in Z[q, 1/q]")
            (e, c), = self._coeffs.items()
            return LaurentPoly.monomial(e * k, c ** (-k))
        result = LaurentPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if isinstance(other, LaurentPoly):
            return self._coeffs == other._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __str__(self) -> str:
        """Canonical text form, ascending exponents, e.g. ``-1*q^-1 + 1*q^3``."""
        if not self._coeffs:
            return "0"
        return " + ".join(f"{c}*q^{e}" for e, c in self.terms())

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse the canonical text form.

        Args:
            text: Text produced by ``str(LaurentPoly)``.

        Returns:
            The parsed Laurent polynomial.

        Raises:
            ValueError: If the text is not in canonical form.
        """
        text = text.strip()
        if text == "0":
            return cls()
        coeffs: dict[int, int] = {}
        for term in text.split(" + "):
            match = _TERM_RE.match(term.strip())
            if not match:
                raise ValueError(f"invalid Laurent polynomial term: '{term}'")
            coeffs[int(match.group(2))] = int(match.group(1))
        return cls(coeffs)


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
Q = LaurentPoly.monomial(1)
Q_INV = LaurentPoly.monomial(-1)
LAMBDA = Q - Q_INV


def qpow(k: int) -> LaurentPoly:
    """The monomial q^k."""
    return LaurentPoly.monomial(k)


def _to_poly(p: LaurentPoly) -> sympy.Poly:
    """Dense sympy polynomial over ZZ; p must not contain negative exponents."""
    return sympy.Poly(
        [p.coeff(e) for e in range(p.max_exp, -1, -1)] or [0], _Q_SYMBOL, domain=sympy.ZZ
    )


def _from_poly(poly: sympy.Poly, shift: int = 0) -> LaurentPoly:
    coeffs = poly.all_coeffs()
    top = len(coeffs) - 1
    return LaurentPoly({top - k + shift: int(c) for k, c in enumerate(coeffs) if c})


def _normalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Bring num/den into canonical form.

    Raises:
        ZeroDenominatorError: If den is zero.
    """
    if den.is_zero:
        raise ZeroDenominatorError(f"rational function {num} has a zero denominator")
    if num.is_zero:
        return ZERO, ONE
    low = den.min_exp
    num, den = num.shift(-low), den.shift(-low)
    if den.is_monomial:
        c = den.coeff(0)
        if c == 1:
            return num, ONE
        g = math.gcd(num.content(), c) * (1 if c > 0 else -1)
        return num.divide_int(g), LaurentPoly.constant(c // g)
    shift = num.min_exp
    num_poly, den_poly = _to_poly(num.shift(-shift)), _to_poly(den)
    g = num_poly.gcd(den_poly)
    num, den = _from_poly(num_poly.exquo(g), shift), _from_poly(den_poly.exquo(g))
    if den.coeff(den.max_exp) < 0:
        num, den = -num, -den
    return num, den


class RatFunc:
    """Reduced ratio of Laurent polynomials in q."""

    __slots__ = ("den", "num")

    def __init__(self, num: LaurentPoly | int, den: LaurentPoly | int = 1):
        """Construct and normalize num/den.

        Args:
            num: Numerator.
            den: Denominator.
        """
        self.num, self.den = _normalize(_as_laurent(num), _as_laurent(den))

    @classmethod
    def _trusted(cls, num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def coerce(cls, value: "RatFunc | LaurentPoly | int") -> "RatFunc":
        """Embed a LaurentPoly or integer losslessly.

        Raises:
            TypeError: If value is not a scalar.
        """
        result = _as_ratfunc(value)
        if result is None:
            raise TypeError(f"cannot interpret {value!r} as a rational function of q")
        return result

    @property
    def is_laurent(self) -> bool:
        """Whether the denominator is 1."""
        return self.den == ONE

    def as_laurent(self) -> LaurentPoly:
        """The numerator, provided the denominator is 1.

        Raises:
            ValueError: If the value is not a Laurent polynomial.
        """
        if not self.is_laurent:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def inverse(self) -> "RatFunc":
        """Multiplicative inverse."""
        return RatFunc(self.den, self.num)

    def invert_q(self) -> "RatFunc":
        """Substitute q -> 1/q."""
        return RatFunc(self.num.invert_q(), self.den.invert_q())

    def evaluate(self, q0: Rational | int) -> Rational:
        """Exact value at a nonzero rational q0.

        Raises:
            ZeroDenominatorError: If the denominator vanishes at q0.
        """
        den = self.den.evaluate(q0)
        if den == 0:
            raise ZeroDenominatorError(f"denominator {self.den} vanishes at q = {q0}")
        return self.num.evaluate(q0) / den

    def __bool__(self) -> bool:
        return bool(self.num)

    def __neg__(self) -> "RatFunc":
        return RatFunc._trusted(-self.num, self.den)

    def __add__(self, other: object) -> "RatFunc":
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            if self.den == ONE:
                return RatFunc._trusted(self.num + o.num, ONE)
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: object) -> "RatFunc":
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "RatFunc":
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other: object) -> "RatFunc":
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        if self.den == ONE and o.den == ONE:
            return RatFunc._trusted(self.num * o.num, ONE)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "RatFunc":
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        if o.is_laurent and o.num.is_unit and self.is_laurent:
            (e, c), = o.num.coeffs.items()
            return RatFunc._trusted(self.num.shift(-e) * c, ONE)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> "RatFunc":
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num**k, self.den**k)

    def __eq__(self, other: object) -> bool:
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        """Canonical text: the Laurent form when den = 1, else ``(num)/(den)``."""
        if self.is_laurent:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc('{self}')"

    @classmethod
    def parse(cls, text: str) -> "RatFunc":
        """Parse the canonical text form.

        Raises:
            ValueError: If the text is malformed.
        """
        text = text.strip()
        if text.startswith("(") and ")/(" in text and text.endswith(")"):
            num, den = text[1:-1].split(")/(", 1)
            return cls(LaurentPoly.parse(num), LaurentPoly.parse(den))
        return cls(LaurentPoly.parse(text))


def _as_laurent(value: LaurentPoly | int) -> LaurentPoly:
    if isinstance(value, LaurentPoly):
        return value
    if isinstance(value, int):
        return LaurentPoly.constant(value)
    raise TypeError(f"cannot interpret {value!r} as a Laurent polynomial")


def _as_ratfunc(value: object) -> RatFunc | None:
    if isinstance(value, RatFunc):
        return value
    if isinstance(value, LaurentPoly):
        return RatFunc._trusted(value, ONE)
    if isinstance(value, int):
        return RatFunc._trusted(LaurentPoly.constant(value), ONE)
    return None


Scalar = LaurentPoly | RatFunc


def qnum(p: int) -> LaurentPoly:
    """The q-number p_q = (q^p - q^-p) / (q - 1/q), computed by exact division."""
    return (qpow(p) - qpow(-p)).divide_exact(LAMBDA)


@functools.cache
def qfact(p: int) -> LaurentPoly:
    """The q-factorial p_q! = 1_q 2_q ... p_q; qfact(0) = 1.

    Raises:
        ValueError: If p is negative.
    """
    if p < 0:
        raise ValueError(f"q-factorial of a negative integer: {p}")
    result = ONE
    for k in range(1, p + 1):
        result = result * qnum(k)
    return result


def qbinom(n: int, k: int) -> RatFunc:
    """Symmetric q-binomial n_q! / (k_q! (n-k)_q!).

    Raises:
        ValueError: If k is outside 0..n.
        ArithmeticError: If the quotient fails to reduce to a Laurent polynomial.
    """
    if k < 0 or k > n:
        raise ValueError(f"q-binomial index out of range: n={n}, k={k}")
    result = RatFunc(qfact(n), qfact(k) * qfact(n - k))
    if not result.is_laurent:
        raise ArithmeticError(f"q-binomial ({n}, {k}) did not reduce: {result}")
    return result


def eval_at(f: RatFunc | LaurentPoly | int, q0: Rational | int) -> Rational:
    """Evaluate a scalar exactly at a rational q0.

    Args:
        f: The scalar to evaluate.
        q0: A nonzero rational.

    Returns:
        The exact rational value.

    Raises:
        ValueError: If q0 is zero.
        ZeroDenominatorError: If the denominator of f vanishes at q0.
    """
    if Rational(q0) == 0:
        raise ValueError("q cannot be specialized to 0")
    return RatFunc.coerce(f).evaluate(q0)


def row_reduce(
    rows: Iterable[Mapping[K, Scalar | int]], key: Callable[[K], typing.Any]
) -> dict[K, dict[K, RatFunc]]:
    """Reduced row echelon form over RatFunc.

    The pivot of each row is its greatest column under ``key``. Every returned row is monic in
    its pivot and contains no other pivot column.

    Args:
        rows: Sparse rows, column -> coefficient.
        key: Sort key defining the column order.

    Returns:
        Mapping pivot column -> reduced row.
    """
    basis: dict[K, dict[K, RatFunc]] = {}
    for raw in rows:
        row = {c: RatFunc.coerce(v) for c, v in raw.items() if v}
        for pivot in [c for c in row if c in basis]:
            factor = row.get(pivot)
            if factor:
                _axpy(row, -factor, basis[pivot])
        if not row:
            continue
        pivot = max(row, key=key)
        lead = row[pivot]
        row = {c: v / lead for c, v in row.items()}
        for other in basis.values():
            factor = other.get(pivot)
            if factor:
                _axpy(other, -factor, row)
        basis[pivot] = row
    logger.debug("row reduction finished with rank %d", len(basis))
    return basis


def _axpy(target: dict[K, RatFunc], factor: RatFunc, source: Mapping[K, RatFunc]) -> None:
    """target += factor * source, in place, dropping zeros."""
    for c, v in source.items():
        value = target.get(c, RatFunc._trusted(ZERO, ONE)) + factor * v
        if value:
            target[c] = value
        else:
            target.pop(c, None)
