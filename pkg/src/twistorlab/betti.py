"""Betti-side residual data: monodromy eigenvalues and the swap groupoid.

Over lambda != 0 the additive residual coordinates (lambda, a, b) map to
monodromy eigenvalues (exp(2 pi i a/lambda), exp(2 pi i b/lambda)). The
lambda-divided exponent is the convention that makes integer lambda-shifts
invisible: a and a + lambda have the same image, so on the multiplicative
side the shift generators collapse and only the eigenvalue swap survives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .groupoid import NormalForm, ResidualPoint


@dataclass(frozen=True)
class BettiResidualPoint:
    """(lambda, m1, m2) with m1, m2 the two monodromy eigenvalues in C*."""

    lam: complex
    m1: complex
    m2: complex

    def __post_init__(self):
        if not self.lam:
            raise ValueError("Betti residual data live over lambda != 0")
        if not (self.m1 and self.m2):
            raise ValueError("monodromy eigenvalues must be nonzero")


@dataclass(frozen=True)
class BettiElement:
    """Swap (or not) the two monodromy eigenvalues; swapping needs m1 != m2."""

    swap: int

    def __post_init__(self):
        if self.swap not in (0, 1):
            raise ValueError("swap must be 0 or 1")


def rank1_rh(lam: complex, a: complex) -> complex:
    """Rank-1 Riemann-Hilbert value exp(2 pi i a / lambda); lambda != 0."""
    if not lam:
        raise ValueError("rank-1 Riemann-Hilbert map is undefined at lambda = 0")
    return cmath.exp(2j * math.pi * complex(a) / complex(lam))


def betti_map(pt: ResidualPoint) -> BettiResidualPoint:
    """Exponentiate both residual eigenvalues at pt.lam != 0."""
    return BettiResidualPoint(pt.lam, rank1_rh(pt.lam, pt.a), rank1_rh(pt.lam, pt.b))


def functor_on_element(nf: NormalForm) -> BettiElement:
    """Multiplicative shadow of a normal form: its net eigenvalue swap.

    Each h and each p swaps once, but the shift parts exponentiate away;
    the (hp)^k block contributes an even number of swaps, leaving
    (epsilon + m) mod 2.
    """
    return BettiElement((nf.epsilon + nf.m) % 2)


def apply_betti(e: BettiElement, pt: BettiResidualPoint) -> BettiResidualPoint | None:
    if e.swap == 0:
        return pt
    if pt.m1 == pt.m2:
        return None
    return BettiResidualPoint(pt.lam, pt.m2, pt.m1)


def connected_in_betti(p1: BettiResidualPoint, p2: BettiResidualPoint,
                       tol: float = 1e-9) -> bool:
    """Same groupoid orbit: eigenvalue pairs equal or swapped, over one lambda."""
    if p1.lam != p2.lam:
        raise ValueError("Betti points sit over different lambda values")

    def close(x, y):
        return abs(complex(x) - complex(y)) <= tol * (1 + abs(complex(x)))

    straight = close(p1.m1, p2.m1) and close(p1.m2, p2.m2)
    swapped = close(p1.m1, p2.m2) and close(p1.m2, p2.m1)
    return straight or swapped
