"""Scalar arithmetic shared by the whole package.

Every formula in this package is polynomial or real-linear, so each operation
runs in one of two modes:

* float mode: ordinary ``complex`` / ``float`` values;
* exact mode: Gaussian rationals (:class:`GaussianRational`) with
  :class:`fractions.Fraction` parts, used as the oracle arithmetic in tests.

:class:`GaussianRational` implements the same small protocol as ``complex``
(``.real``, ``.imag``, ``.conjugate()``), which ``int``, ``float`` and
``Fraction`` also satisfy, so generic code never needs to branch on the mode.
Mixing an exact value with a float collapses to float mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def _as_fraction_pair(value):
    """Split a supported scalar into exact (re, im) Fractions, or None."""
    if isinstance(value, GaussianRational):
        return value.re, value.im
    if isinstance(value, Rational):
        return Fraction(value), Fraction(0)
    return None


@dataclass(frozen=True)
class GaussianRational:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        return GaussianRational(self.re + pair[0], self.im + pair[1])

    __radd__ = __add__

    def __sub__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return GaussianRational(self.re - pair[0], self.im - pair[1])

    def __rsub__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            if isinstance(other, (float, complex)):
                return other - complex(self)
            return NotImplemented
        return GaussianRational(pair[0] - self.re, pair[1] - self.im)

    def __mul__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        br, bi = pair
        return GaussianRational(self.re * br - self.im * bi,
                                self.re * bi + self.im * br)

    __rmul__ = __mul__

    def __truediv__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        br, bi = pair
        norm = br * br + bi * bi
        if not norm:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational((self.re * br + self.im * bi) / norm,
                                (self.im * br - self.re * bi) / norm)

    def __rtruediv__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return GaussianRational(pair[0], pair[1]) / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (GaussianRational(Fraction(1), Fraction(0)) / self) ** (-exponent)
        out = GaussianRational(Fraction(1), Fraction(0))
        base = self
        n = exponent
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        pair = _as_fraction_pair(other)
        if pair is None:
            return NotImplemented
        return self.re == pair[0] and self.im == pair[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!s}, {self.im!s})"


def exact_scalar(value) -> GaussianRational:
    """Convert to a Gaussian rational with no rounding.

    Floats convert through ``Fraction(float)``, which is exact: binary floats
    are dyadic rationals. Strings accept "p/q" and decimal forms.
    """
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, str):
        return GaussianRational(Fraction(value), Fraction(0))
    if isinstance(value, Rational):
        return GaussianRational(Fraction(value), Fraction(0))
    if isinstance(value, float):
        return GaussianRational(Fraction(value), Fraction(0))
    if isinstance(value, complex):
        return GaussianRational(Fraction(value.real), Fraction(value.imag))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact scalar")


def exact_real(value) -> Fraction:
    """Convert to an exact Fraction; complex inputs must have zero imag part."""
    g = exact_scalar(value)
    if g.im:
        raise ValueError("expected a real value")
    return g.re


def is_exact(value) -> bool:
    """True when the value carries exact (rational) arithmetic."""
    return isinstance(value, (GaussianRational, Rational))


def abs2(z):
    """|z|^2 without a square root, staying exact in exact mode."""
    return (z * z.conjugate()).real


def real_part(z):
    return z.real


def imag_part(z):
    return z.imag
