"""Exact cyclotomic scalars and unit phases.

Every coefficient that appears in the algebras of this package is a finite
sum of roots of unity times square roots of non-negative rationals.  All of
those live in some cyclotomic field Q(zeta_n), so exact arithmetic only needs
polynomials in zeta_n reduced modulo the n-th cyclotomic polynomial.

Two scalar backends coexist:

* :class:`Cyclotomic` -- exact, used whenever every phase is a rational
  number of turns ("angle mode");
* Python ``complex`` -- floating mode, compared with :data:`FLOAT_TOL`.

Mixing the two degrades to ``complex``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

from sympy import Poly, Symbol, cyclotomic_poly, factorint
from sympy.functions.combinatorial.numbers import legendre_symbol, mobius, totient

FLOAT_TOL = 1e-12

_X = Symbol("x")


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    coeffs = Poly(cyclotomic_poly(n, _X), _X).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def _reduce(poly: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = _cyclotomic(n)
    deg = len(phi) - 1
    poly = list(poly)
    # Phi_n is monic, so plain long division stays in Q.
    for top in range(len(poly) - 1, deg - 1, -1):
        c = poly[top]
        if c:
            shift = top - deg
            for k, p in enumerate(phi):
                if p:
                    poly[shift + k] -= c * p
    out = poly[:deg] + [Fraction(0)] * (deg - len(poly))
    return tuple(out)


def _lift(terms: dict, n: int, m: int) -> dict:
    if n == m:
        return terms
    step = m // n
    return {k * step: c for k, c in terms.items()}


class Cyclotomic:
    """An element of the cyclotomic field Q(zeta_n), zeta_n = exp(2 pi i / n).

    Stored sparsely as ``{k: c}`` meaning ``sum c zeta_n^k`` with ``0 <= k < n``.
    The representation is not reduced modulo ``Phi_n`` (so products of roots
    of unity stay single terms); :attr:`coefficients` gives the reduced form
    and the zero test reduces when the value is not visibly non-zero.
    """

    __slots__ = ("_n", "_terms")

    def __init__(self, n: int, coeffs) -> None:
        self._n = n
        self._terms = {}
        for k, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                self._terms[k % n] = self._terms.get(k % n, 0) + c

    @classmethod
    def _raw(cls, n: int, terms: dict) -> Cyclotomic:
        obj = cls.__new__(cls)
        obj._n = n
        obj._terms = terms
        return obj

    @classmethod
    def rational(cls, q) -> Cyclotomic:
        q = Fraction(q)
        return cls._raw(1, {0: q} if q else {})

    @classmethod
    def root_of_unity(cls, turns) -> Cyclotomic:
        """exp(2 pi i * turns) for a rational number of turns."""
        t = Fraction(turns) % 1
        return cls._raw(t.denominator, {t.numerator: Fraction(1)})

    @classmethod
    def sqrt_rational(cls, q) -> Cyclotomic:
        """The non-negative square root of a non-negative rational, exactly.

        Square roots of primes come from quadratic Gauss sums, sqrt(2) from
        zeta_8 + zeta_8^-1.
        """
        q = Fraction(q)
        if q < 0:
            raise ValueError("square root of a negative rational")
        if q == 0:
            return cls.rational(0)
        num = q.numerator * q.denominator
        outer = Fraction(1, q.denominator)
        result = cls.rational(1)
        for p, e in sorted(factorint(num).items()):
            outer *= p ** (e // 2)
            if e % 2:
                result = result * _sqrt_prime(p)
        return result * outer

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Coefficients of the reduced representative, lowest power first."""
        n = self._n
        poly = [Fraction(0)] * n
        for k, c in self._terms.items():
            poly[k] += c
        return _reduce(poly, n)

    def _coerce(self, other) -> Cyclotomic | None:
        if isinstance(other, Cyclotomic):
            return other
        if isinstance(other, (int, Rational)):
            return Cyclotomic.rational(other)
        return None

    def _common(self, other: Cyclotomic):
        m = math.lcm(self._n, other._n)
        return m, _lift(self._terms, self._n, m), _lift(other._terms, other._n, m)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) + other
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        m, a, b = self._common(o)
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Cyclotomic._raw(m, out)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic._raw(self._n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) * other
            return NotImplemented
        m, a, b = self._common(o)
        out: dict = {}
        for i, x in a.items():
            for j, y in b.items():
                k = (i + j) % m
                v = out.get(k, 0) + x * y
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Cyclotomic._raw(m, out)

    __rmul__ = __mul__

    def conjugate(self) -> Cyclotomic:
        n = self._n
        return Cyclotomic._raw(n, {(-k) % n: c for k, c in self._terms.items()})

    def is_zero(self) -> bool:
        if not self._terms:
            return True
        # a value visibly away from zero is non-zero; otherwise decide exactly
        scale = sum(abs(float(c)) for c in self._terms.values())
        if abs(complex(self)) > 1e-9 * (1.0 + scale):
            return False
        return not any(self.coefficients)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return abs(complex(self) - other) <= FLOAT_TOL
            return NotImplemented
        return (self - o).is_zero()

    def __hash__(self) -> int:
        # consistent with __eq__ up to rounding of the complex approximation
        z = complex(self)
        return hash((round(z.real, 9), round(z.imag, 9)))

    def __complex__(self) -> complex:
        n = self._n
        return sum((float(c) * _unit(k, n) for k, c in self._terms.items()), 0j)

    def as_rational(self) -> Fraction | None:
        """The value as a Fraction when it is rational, else None."""
        # a rational element equals its normalised field trace
        n = self._n
        trace = sum((c * _ramanujan(k, n) for k, c in self._terms.items()), Fraction(0))
        q = trace / int(totient(n))
        return q if self == q else None

    def __repr__(self) -> str:
        terms = [f"{c}*z{self._n}^{k}" for k, c in enumerate(self.coefficients) if c]
        return "Cyclotomic(" + (" + ".join(terms) or "0") + ")"

    def __str__(self) -> str:
        q = self.as_rational()
        if q is not None:
            return str(q)
        z = complex(self)
        if self == self.conjugate():
            return f"{z.real:.12g}"
        return f"{z.real:.12g}{z.imag:+.12g}j"


@lru_cache(maxsize=4096)
def _unit(k: int, n: int) -> complex:
    return cmath.exp(2j * math.pi * k / n)


@lru_cache(maxsize=None)
def _ramanujan(k: int, n: int) -> int:
    """Trace of zeta_n^k over Q."""
    m = n // math.gcd(n, k)
    return int(mobius(m)) * int(totient(n)) // int(totient(m))


def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return Cyclotomic.root_of_unity(Fraction(1, 8)) + Cyclotomic.root_of_unity(Fraction(-1, 8))
    gauss = Cyclotomic.rational(0)
    for a in range(1, p):
        gauss = gauss + Cyclotomic.root_of_unity(Fraction(a, p)) * legendre_symbol(a, p)
    if p % 4 == 1:
        return gauss
    return gauss * Cyclotomic.root_of_unity(Fraction(3, 4))


Scalar = Union[Cyclotomic, complex, int, Fraction]


def conj(x: Scalar) -> Scalar:
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate()


def is_zero(x: Scalar, tol: float = FLOAT_TOL) -> bool:
    if isinstance(x, Cyclotomic):
        return x.is_zero()
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) <= tol


def scalars_equal(a: Scalar, b: Scalar, tol: float = FLOAT_TOL) -> bool:
    return is_zero(a - b, tol)


def to_exact(x) -> Scalar:
    """Promote ints and Fractions to Cyclotomic; leave floats as complex."""
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    return complex(x)


def sqrt_nonneg(x: Scalar) -> Scalar:
    """Square root of a non-negative real scalar, exact when possible."""
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.sqrt_rational(x)
    if isinstance(x, Cyclotomic):
        q = x.as_rational()
        if q is not None:
            return Cyclotomic.sqrt_rational(q)
        x = complex(x)
    z = complex(x)
    if abs(z.imag) > FLOAT_TOL or z.real < -FLOAT_TOL:
        raise ValueError(f"not a non-negative real: {x!r}")
    return complex(math.sqrt(max(z.real, 0.0)))


class Phase:
    """A unit complex number, exact when it carries a rational angle in turns.

    Exact angles are kept as a reduced pair ``(num, den)`` with
    ``0 <= num < den``; products are the hot path of twist arithmetic.
    """

    __slots__ = ("_num", "_den", "_value")

    def __init__(self, turns: Fraction | None = None, value: complex | None = None) -> None:
        if turns is not None:
            t = Fraction(turns)
            self._num, self._den = t.numerator % t.denominator, t.denominator
            self._value = None
        else:
            if value is None:
                raise ValueError("Phase needs turns or value")
            v = complex(value)
            if abs(abs(v) - 1.0) > FLOAT_TOL:
                raise ValueError(f"phase value {v!r} is not of modulus one")
            self._num = self._den = None
            self._value = v

    @classmethod
    def _pair(cls, num: int, den: int) -> Phase:
        g = math.gcd(num, den)
        out = object.__new__(cls)
        out._num, out._den, out._value = (num // g) % (den // g), den // g, None
        return out

    @classmethod
    def one(cls) -> Phase:
        return _ONE

    @classmethod
    def of(cls, x) -> Phase:
        """Coerce a Phase, rational turns, or a unit complex number."""
        if isinstance(x, Phase):
            return x
        if isinstance(x, (int, Fraction, str)):
            return cls(turns=Fraction(x))
        return cls(value=complex(x))

    @property
    def turns(self) -> Fraction | None:
        return None if self._den is None else Fraction(self._num, self._den)

    @property
    def exact(self) -> bool:
        return self._den is not None

    @property
    def value(self) -> complex:
        if self._den is not None:
            return cmath.exp(2j * math.pi * self._num / self._den)
        return self._value

    def scalar(self) -> Scalar:
        if self._den is not None:
            return Cyclotomic.root_of_unity(self.turns)
        return self._value

    def __mul__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        if self._den is not None and other._den is not None:
            if not other._num:
                return self
            if not self._num:
                return other
            if self._den == other._den:
                return Phase._pair(self._num + other._num, self._den)
            return Phase._pair(self._num * other._den + other._num * self._den, self._den * other._den)
        v = self.value * other.value
        return Phase(value=v / abs(v))

    def conjugate(self) -> Phase:
        if self._den is not None:
            return self if not self._num else Phase._pair(self._den - self._num, self._den)
        return Phase(value=self._value.conjugate())

    inverse = conjugate

    def __pow__(self, k: int) -> Phase:
        if self._den is not None:
            return Phase._pair(self._num * k, self._den)
        return Phase(value=self._value**k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        if self._den is not None and other._den is not None:
            return self._num == other._num and self._den == other._den
        return abs(self.value - other.value) <= FLOAT_TOL

    def __hash__(self) -> int:
        if self._den is not None:
            return hash((self._num, self._den))
        return hash(round(cmath.phase(self._value), 9))

    def is_one(self) -> bool:
        return self == _ONE

    def __repr__(self) -> str:
        if self._den is not None:
            return f"Phase({self.turns})"
        return f"Phase(value={self._value:.12g})"

    def __str__(self) -> str:
        if self._den is not None:
            return f"{self.turns}"
        return f"{self._value.real:.12g}{self._value.imag:+.12g}j"


_ONE = Phase(Fraction(0))
