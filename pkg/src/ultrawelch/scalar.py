"""Exact scalars and valuations for p-adic rationals and rational Laurent polynomials.

Two scalar domains are supported:

* ``Backend.padic(p)``: elements are :class:`fractions.Fraction`, with the
  p-adic valuation ``v_p(a/b) = v_p(a) - v_p(b)``.
* ``Backend.laurent()``: elements are :class:`Laurent` polynomials in one
  indeterminate ``t`` with rational coefficients and the t-adic valuation
  (least exponent carrying a nonzero coefficient).

Absolute values never become floats. They are carried as :class:`AbsValue`,
an extended-integer valuation where ``|x| = base ** (-valuation)``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

__all__ = [
    "INF",
    "AbsValue",
    "Backend",
    "FieldCondition",
    "Laurent",
    "ScalarParseError",
    "UnsupportedDivision",
    "binomial_valuation",
    "check_field_condition",
    "find_field_condition_counterexample",
    "format_scalar",
    "is_prime",
    "parse_rational",
    "parse_scalar",
    "valuation",
]

INF = math.inf

Rational = Union[int, Fraction]


class ScalarParseError(ValueError):
    """A text literal could not be read as a scalar."""


class UnsupportedDivision(ArithmeticError):
    """Division by a Laurent polynomial with more than one term."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _vp_int(a: int, p: int) -> int:
    # caller guarantees a != 0
    a = abs(a)
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


class Laurent:
    """Finite Laurent polynomial ``sum c_e * t**e`` with rational coefficients.

    Immutable. Zero coefficients are never stored, so equality is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Rational] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            if not isinstance(e, int):
                raise TypeError(f"exponent must be int, got {e!r}")
            c = Fraction(c)
            if c:
                clean[e] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Laurent":
        # trusted path: Fraction coefficients, possibly zero, any order
        obj = cls.__new__(cls)
        obj._terms = {e: terms[e] for e in sorted(terms) if terms[e]}
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, c: Rational) -> "Laurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, c: Rational, e: int) -> "Laurent":
        return cls({e: c})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def order(self) -> float:
        """Least exponent with a nonzero coefficient, ``inf`` for zero."""
        return next(iter(self._terms), INF)

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self._terms[next(iter(self._terms))]

    def is_constant(self) -> bool:
        return all(e == 0 for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get(0, Fraction(0))

    @staticmethod
    def _lift(other) -> "Laurent | None":
        if isinstance(other, Laurent):
            return other
        if isinstance(other, (int, Fraction)):
            return Laurent.constant(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        return Laurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Laurent._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return Laurent.constant(1) / self ** (-k)
        result = Laurent.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if len(other._terms) > 1:
            raise UnsupportedDivision(f"cannot divide by non-monomial {other}")
        (e, c), = other._terms.items()
        return Laurent({k - e: v / c for k, v in self._terms.items()})

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                # agree with hash(Fraction) so constants mix in sets/dicts
                self._hash = hash(self._terms.get(0, Fraction(0)))
            else:
                self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"Laurent({self._terms!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                parts.append(str(c))
            elif e == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{e}")
        return " + ".join(parts)


Scalar = Union[Fraction, Laurent]


@dataclass(frozen=True)
class Backend:
    """Scalar domain descriptor. ``prime=None`` selects the Laurent backend."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None:
            if isinstance(self.prime, bool) or not isinstance(self.prime, int):
                raise TypeError(f"prime must be an int, got {self.prime!r}")
            if not is_prime(self.prime):
                raise ValueError(f"{self.prime} is not prime")

    @classmethod
    def padic(cls, p: int) -> "Backend":
        return cls(p)

    @classmethod
    def laurent(cls) -> "Backend":
        return cls(None)

    @property
    def is_padic(self) -> bool:
        return self.prime is not None

    @property
    def is_laurent(self) -> bool:
        return self.prime is None

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    def coerce(self, x) -> Scalar:
        """Bring ``x`` into this backend's canonical element type."""
        if self.is_padic:
            if isinstance(x, Laurent):
                return x.constant_value()
            if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
                return Fraction(x)
            raise TypeError(f"cannot coerce {x!r} into Q_{self.prime}")
        if isinstance(x, Laurent):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return Laurent.constant(x)
        raise TypeError(f"cannot coerce {x!r} into Q[t, 1/t]")

    def to_json(self):
        return {"padic": self.prime} if self.is_padic else "laurent"

    @classmethod
    def from_json(cls, obj) -> "Backend":
        if obj == "laurent":
            return cls.laurent()
        if isinstance(obj, dict) and set(obj) == {"padic"}:
            return cls.padic(obj["padic"])
        raise ValueError(f"unrecognised backend {obj!r}")

    def __str__(self):
        return f"Q_{self.prime}" if self.is_padic else "Q((t))"


@dataclass(frozen=True)
class AbsValue:
    """Ultrametric absolute value stored as its valuation.

    ``|x| = base ** (-valuation)``; ``valuation == inf`` encodes ``|x| = 0``.
    Ordering follows the absolute value, so larger valuation compares smaller.
    """

    valuation: int | float
    base: int | None = None  # the prime, or None for the t-adic backend

    def __post_init__(self):
        v = self.valuation
        if v != INF and not isinstance(v, int):
            raise TypeError(f"valuation must be an int or inf, got {v!r}")

    @property
    def is_zero(self) -> bool:
        return self.valuation == INF

    def _check(self, other: "AbsValue"):
        if not isinstance(other, AbsValue):
            raise TypeError(f"expected AbsValue, got {type(other).__name__}")
        if other.base != self.base:
            raise ValueError("absolute values from different backends")

    def __mul__(self, other: "AbsValue") -> "AbsValue":
        self._check(other)
        return AbsValue(self.valuation + other.valuation, self.base)

    def __truediv__(self, other: "AbsValue") -> "AbsValue":
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the absolute value 0")
        return AbsValue(self.valuation - other.valuation, self.base)

    def __pow__(self, k: int) -> "AbsValue":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        if k == 0:
            return AbsValue(0, self.base)
        return AbsValue(self.valuation * k, self.base)

    def __lt__(self, other):
        self._check(other)
        return self.valuation > other.valuation

    def __le__(self, other):
        self._check(other)
        return self.valuation >= other.valuation

    def __gt__(self, other):
        self._check(other)
        return self.valuation < other.valuation

    def __ge__(self, other):
        self._check(other)
        return self.valuation <= other.valuation

    def to_json(self):
        return "inf" if self.is_zero else self.valuation

    def __str__(self):
        if self.is_zero:
            return "0"
        base = "t" if self.base is None else str(self.base)
        return f"{base}^{-self.valuation}"


def valuation(x: Scalar, backend: Backend) -> AbsValue:
    if backend.is_padic:
        x = Fraction(x)
        if x == 0:
            return AbsValue(INF, backend.prime)
        p = backend.prime
        return AbsValue(_vp_int(x.numerator, p) - _vp_int(x.denominator, p), p)
    x = backend.coerce(x)
    return AbsValue(x.order, None)


def _max_abs(values: Iterable[AbsValue], backend: Backend) -> AbsValue:
    return max(values, default=AbsValue(INF, backend.prime))


@dataclass(frozen=True)
class FieldCondition:
    holds: bool
    lhs: AbsValue
    rhs: AbsValue


def check_field_condition(lambdas, backend: Backend) -> FieldCondition:
    """Compare ``|sum x**2|`` against ``max |x|**2`` over the given scalars."""
    if not lambdas:
        raise ValueError("need at least one scalar")
    xs = [backend.coerce(x) for x in lambdas]
    lhs = valuation(sum((x * x for x in xs), backend.zero), backend)
    rhs = _max_abs((valuation(x, backend) ** 2 for x in xs), backend)
    return FieldCondition(lhs == rhs, lhs, rhs)


def find_field_condition_counterexample(backend: Backend, search_bound: int):
    """Smallest tuple of integers in ``[1, search_bound]`` violating the condition.

    Tuples are tried by length (2 to 4), then lexicographically. A single
    element never violates it, so length 1 is skipped.
    """
    if backend.is_laurent:
        raise ValueError("the Laurent backend satisfies the field condition")
    if search_bound < 1:
        raise ValueError("search_bound must be positive")
    for length in range(2, 5):
        for tup in itertools.product(range(1, search_bound + 1), repeat=length):
            if not check_field_condition(tup, backend).holds:
                return tup
    return None


def binomial_valuation(n: int, k: int, p: int) -> int:
    """``v_p(C(n, k))`` as the number of carries when adding ``k + (n-k)`` in base p."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    a, b = k, n - k
    carry = carries = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return carries


_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_rational(text) -> Fraction:
    """Read ``"a"`` or ``"a/b"``. JSON integers are accepted as well."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise ScalarParseError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ScalarParseError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(obj, backend: Backend) -> Scalar:
    if isinstance(obj, dict):
        if backend.is_padic:
            raise ScalarParseError("Laurent literal given for a p-adic backend")
        terms = {}
        for key, val in obj.items():
            if not re.fullmatch(r"[+-]?\d+", key):
                raise ScalarParseError(f"bad exponent key {key!r}")
            terms[int(key)] = parse_rational(val)
        return Laurent(terms)
    return backend.coerce(parse_rational(obj))


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar):
    if isinstance(x, Laurent):
        return {str(e): _format_rational(c) for e, c in x.terms.items()}
    return _format_rational(Fraction(x))
