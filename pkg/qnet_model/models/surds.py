"""Exact arithmetic in fields generated by square roots of rationals.

A `Surd` is a finite sum `c_1 sqrt(r_1) + ... + c_k sqrt(r_k)` with rational
coefficients and distinct square-free radicands. Sums of square roots of
distinct square-free integers are linearly independent over the rationals,
so a Surd is zero exactly when it has no terms and equality is structural.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cache, total_ordering
from numbers import Rational

import sympy

from qnet_model.models import sim_parameters as sp

logger = logging.getLogger(__name__)

Exact = int | Fraction


@cache
def square_free_split(n: int) -> tuple[int, int]:
  """Write a positive integer as `outer**2 * core` with `core` square-free.

  Arguments:
    n int:
      Positive integer.

  Returns:
    tuple[int, int]: (outer, core)
  """
  if n <= 0:
    raise ValueError(f'square_free_split expects a positive integer, got {n}')
  outer, core = 1, 1
  for prime, power in sympy.factorint(n).items():
    outer *= prime**(power // 2)
    if power % 2:
      core *= prime
  return outer, core


@cache
def _smallest_prime(n: int) -> int:
  return min(sympy.primefactors(n))


@total_ordering
@dataclass(frozen=True, eq=False)
class Surd:
  """Element of Q(sqrt(r_1), sqrt(r_2), ...).

  Attributes:
    terms tuple[tuple[int, Fraction], ...]:
      (radicand, coefficient) pairs sorted by radicand, radicand 1 being the
      rational part. Coefficients are never zero.
  """
  terms: tuple[tuple[int, Fraction], ...] = ()

  @classmethod
  def from_map(cls, terms: dict[int, Fraction]) -> Surd:
    return cls(tuple(sorted((r, c) for r, c in terms.items() if c != 0)))

  @classmethod
  def rational(cls, value: Exact) -> Surd:
    return cls.from_map({1: Fraction(value)})

  @classmethod
  def sqrt(cls, value: Exact) -> Surd:
    'Exact square root of a nonnegative rational'
    q = Fraction(value)
    if q < 0:
      raise ValueError(f'square root of negative rational {q}')
    if q == 0:
      return cls()
    outer, core = square_free_split(q.numerator * q.denominator)
    return cls.from_map({core: Fraction(outer, q.denominator)})

  @property
  def is_rational(self) -> bool:
    return all(r == 1 for r, _ in self.terms)

  @property
  def radicands(self) -> tuple[int, ...]:
    return tuple(r for r, _ in self.terms if r != 1)

  def to_fraction(self) -> Fraction:
    if not self.is_rational:
      raise ValueError(f'{self} is irrational')
    return self.terms[0][1] if self.terms else Fraction(0)

  def simplify(self) -> Fraction | Surd:
    'Collapse to a Fraction when no square roots remain'
    return self.to_fraction() if self.is_rational else self

  def _as_map(self) -> dict[int, Fraction]:
    return dict(self.terms)

  @staticmethod
  def coerce(value) -> Surd | None:
    if isinstance(value, Surd):
      return value
    if isinstance(value, Rational):
      return Surd.rational(Fraction(value))
    return None

  def __add__(self, other):
    if isinstance(other, float):
      return float(self) + other
    rhs = Surd.coerce(other)
    if rhs is None:
      return NotImplemented
    merged = self._as_map()
    for r, c in rhs.terms:
      merged[r] = merged.get(r, Fraction(0)) + c
    return Surd.from_map(merged)

  __radd__ = __add__

  def __neg__(self) -> Surd:
    return Surd(tuple((r, -c) for r, c in self.terms))

  def __pos__(self) -> Surd:
    return self

  def __sub__(self, other):
    if isinstance(other, float):
      return float(self) - other
    rhs = Surd.coerce(other)
    if rhs is None:
      return NotImplemented
    return self + (-rhs)

  def __rsub__(self, other):
    return (-self) + other

  def __mul__(self, other):
    if isinstance(other, float):
      return float(self) * other
    rhs = Surd.coerce(other)
    if rhs is None:
      return NotImplemented
    product: dict[int, Fraction] = {}
    for r1, c1 in self.terms:
      for r2, c2 in rhs.terms:
        g = math.gcd(r1, r2)
        radicand = (r1 // g) * (r2 // g)
        product[radicand] = product.get(radicand, Fraction(0)) + c1 * c2 * g
    return Surd.from_map(product)

  __rmul__ = __mul__

  def inverse(self) -> Surd:
    """Multiplicative inverse by repeated conjugation.

    Conjugating over the smallest prime p in any radicand flips the sign of
    every term whose radicand is divisible by p. The product with the
    conjugate no longer involves sqrt(p), so the recursion ends on a
    rational.
    """
    if not self.terms:
      raise ZeroDivisionError('Surd division by zero')
    if self.is_rational:
      return Surd.rational(1 / self.terms[0][1])
    p = min(_smallest_prime(r) for r in self.radicands)
    conjugate = Surd(tuple((r, -c if r % p == 0 else c) for r, c in self.terms))
    return conjugate * (self * conjugate).inverse()

  def __truediv__(self, other):
    if isinstance(other, float):
      return float(self) / other
    rhs = Surd.coerce(other)
    if rhs is None:
      return NotImplemented
    return self * rhs.inverse()

  def __rtruediv__(self, other):
    if isinstance(other, float):
      return other / float(self)
    lhs = Surd.coerce(other)
    if lhs is None:
      return NotImplemented
    return lhs * self.inverse()

  def __pow__(self, exponent: int) -> Surd:
    if not isinstance(exponent, int):
      return NotImplemented
    if exponent < 0:
      return self.inverse()**(-exponent)
    result, base = Surd.rational(1), self
    while exponent:
      if exponent & 1:
        result = result * base
      base = base * base
      exponent >>= 1
    return result

  def sign(self) -> int:
    'Exact sign for at most one irrational radicand, high precision otherwise'
    if not self.terms:
      return 0
    irrational = [(r, c) for r, c in self.terms if r != 1]
    a = self.terms[0][1] if self.terms[0][0] == 1 else Fraction(0)
    if not irrational:
      return (a > 0) - (a < 0)
    if len(irrational) == 1:
      r, b = irrational[0]
      sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
      if sa == 0 or sa == sb:
        return sb
      return sa if a * a > b * b * r else sb
    with localcontext() as ctx:
      ctx.prec = sp.SIGN_DIGITS
      value = sum(
          (Decimal(c.numerator) / Decimal(c.denominator)) * Decimal(r).sqrt()
          for r, c in self.terms)
    return (value > 0) - (value < 0)

  def __eq__(self, other) -> bool:
    if isinstance(other, float):
      return float(self) == other
    rhs = Surd.coerce(other)
    if rhs is None:
      return NotImplemented
    return self.terms == rhs.terms

  def __hash__(self) -> int:
    if self.is_rational:
      return hash(self.to_fraction())
    return hash(self.terms)

  def __lt__(self, other) -> bool:
    if isinstance(other, float):
      return float(self) < other
    rhs = Surd.coerce(other)
    if rhs is None:
      return NotImplemented
    return (self - rhs).sign() < 0

  def __abs__(self) -> Surd:
    return -self if self.sign() < 0 else self

  def __bool__(self) -> bool:
    return bool(self.terms)

  def __float__(self) -> float:
    return float(sum(float(c) * math.sqrt(r) for r, c in self.terms))

  def __str__(self) -> str:
    if not self.terms:
      return '0'
    parts = []
    for r, c in self.terms:
      parts.append(str(c) if r == 1 else f'{c}*sqrt({r})')
    return ' + '.join(parts).replace('+ -', '- ')

  def __repr__(self) -> str:
    return f'Surd({str(self)!r})'


Scalar = float | Fraction | Surd


def is_exact(value) -> bool:
  return isinstance(value, (Surd, Rational)) and not isinstance(value, bool)


def exact_sqrt(value: Exact) -> Fraction | Surd:
  'Square root of a nonnegative rational, as a Fraction when it is one'
  return Surd.sqrt(value).simplify()


def signed_sqrt(value: Exact) -> Fraction | Surd:
  'sign(q) * sqrt(|q|), handy for writing basis coefficients'
  q = Fraction(value)
  root = exact_sqrt(abs(q))
  return -root if q < 0 else root


def simplify(value: Scalar) -> Scalar:
  if isinstance(value, Surd):
    return value.simplify()
  if isinstance(value, int) and not isinstance(value, bool):
    return Fraction(value)
  return value


def sign(value: Scalar, tol: float = 0.0) -> int:
  """Sign of a scalar, treating |value| <= tol as zero.

  Exact values always use tol 0.
  """
  if isinstance(value, Surd):
    return value.sign()
  if isinstance(value, Rational):
    return (value > 0) - (value < 0)
  if value > tol:
    return 1
  if value < -tol:
    return -1
  return 0


def to_float(value: Scalar) -> float:
  return float(value)


def as_scalar(value, exact: bool) -> Scalar:
  """Bring an input number into the requested arithmetic mode.

  Floats are converted through their shortest decimal representation when
  exact mode is requested, so 0.9 becomes 9/10.
  """
  if not exact:
    return float(value)
  if isinstance(value, (Surd, Fraction)):
    return simplify(value)
  if isinstance(value, float):
    return Fraction(repr(value))
  if isinstance(value, str):
    return Fraction(value.strip())
  return Fraction(value)


def sqrt_scalar(value: Scalar) -> Scalar:
  """Square root that stays exact whenever the argument is rational.

  Irrational arguments fall back to floats with a warning.
  """
  if isinstance(value, Surd):
    if value.is_rational:
      return exact_sqrt(value.to_fraction())
    logger.warning('square root of irrational %s evaluated in floating point',
                   value)
    return math.sqrt(float(value))
  if isinstance(value, Rational):
    return exact_sqrt(value)
  return math.sqrt(value)
