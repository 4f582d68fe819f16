"""Sigma-invariant sections of O(2): the rank-1 twistor family.

A section with coefficients (c0, c1, c2) in the zero chart is fixed by the
antipodal lift exactly when c1 is real and c2 = -conj(c0), a 3-real-parameter
family. Storing the pair (a, alpha) with (c0, c1, c2) = (alpha, -a, -conj(alpha))
makes the fixed-point property structural: the section's value at lambda is
then the eigenvalue flow of the KMS element (a, alpha), and the chart change
mu = -1/lambda acts through conjugate transport on that element.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bundles import LaurentMatrix
from .kms import (
    INFINITY_CHART,
    KmsElement,
    LambdaPoint,
    ZERO_CHART,
    conjugate_kms,
    parabolic_weight,
    recover_kms,
    residue_eigenvalue,
)
from .scalars import exact_scalar, is_exact


@dataclass(frozen=True)
class InvariantSection:
    """Carried by (a, alpha); evaluates to alpha - a*lambda - conj(alpha)*lambda^2."""

    a: object
    alpha: object

    def __post_init__(self):
        KmsElement(self.a, self.alpha)  # same finiteness/realness rules

    @property
    def coefficients(self) -> tuple:
        if is_exact(self.a) and is_exact(self.alpha):
            alpha = exact_scalar(self.alpha)
            return (alpha, -exact_scalar(self.a), -alpha.conjugate())
        alpha = complex(self.alpha)
        return (alpha, complex(-self.a), -alpha.conjugate())

    def as_kms(self) -> KmsElement:
        return KmsElement(self.a, self.alpha)


@dataclass(frozen=True)
class FiberSplit:
    """(weight coordinate, fiber value) presentation of a section at one fiber."""

    p: object
    value: object
    at: LambdaPoint


def section_from_kms(u: KmsElement) -> InvariantSection:
    return InvariantSection(u.a, u.alpha)


def from_coefficients(c0, c1, c2, tol: float = 1e-9) -> InvariantSection:
    """Validating constructor from raw (c0, c1, c2); rejects non-fixed triples."""
    if all(is_exact(c) for c in (c0, c1, c2)):
        c0, c1, c2 = (exact_scalar(c) for c in (c0, c1, c2))
        fixed = not c1.imag and c2 == -c0.conjugate()
    else:
        c0, c1, c2 = complex(c0), complex(c1), complex(c2)
        scale = 1 + max(abs(c0), abs(c1), abs(c2))
        fixed = (abs(c1.imag) <= tol * scale
                 and abs(c2 + c0.conjugate()) <= tol * scale)
    if not fixed:
        raise ValueError("coefficients are not fixed by the antipodal lift: "
                         "need c1 real and c2 = -conj(c0)")
    return InvariantSection(-c1.real, c0)


def _chart_element(s: InvariantSection, kappa: LambdaPoint) -> KmsElement:
    u = s.as_kms()
    return u if kappa.chart == ZERO_CHART else conjugate_kms(u)


def restrict(s: InvariantSection, kappa: LambdaPoint):
    """Value of the section at kappa, in kappa's own chart coordinate."""
    return residue_eigenvalue(_chart_element(s, kappa), kappa.coord)


def split_at(s: InvariantSection, kappa: LambdaPoint) -> FiberSplit:
    """Split the 3-parameter family over the fiber at kappa.

    The pair (weight, value) determines the section: recover_kms inverts it.
    Under the integer gauge shift the split moves by exactly (1, -lambda(kappa)).
    """
    u = _chart_element(s, kappa)
    return FiberSplit(parabolic_weight(u, kappa.coord),
                      residue_eigenvalue(u, kappa.coord), kappa)


def section_from_split(split: FiberSplit) -> InvariantSection:
    u = recover_kms(split.p, split.value, split.at.coord)
    if split.at.chart == INFINITY_CHART:
        u = conjugate_kms(u)
    return section_from_kms(u)


def kernel_of_restriction(kappa: LambdaPoint) -> InvariantSection:
    """The section vanishing at kappa (and its antipode), weight-normalized.

    Nonzero, unique up to real scale; normalized so its weight coordinate at
    kappa equals 1.
    """
    return section_from_split(FiberSplit(1, 0, kappa))


def glue_chart_point(lam, a_val) -> tuple:
    """Chart change on the total space of O(2): (lambda, a) -> (-1/lambda, a/lambda^2)."""
    if not lam:
        raise ValueError("the chart overlap excludes lambda = 0")
    if is_exact(lam) and is_exact(a_val):
        lam = exact_scalar(lam)
        return (-(exact_scalar(1) / lam), exact_scalar(a_val) / (lam * lam))
    lam = complex(lam)
    return (-1 / lam, complex(a_val) / (lam * lam))


def o2_transition() -> LaurentMatrix:
    """Transition matrix of O(2), the residual block of the rank-1 family."""
    return LaurentMatrix(1, {2: [[1]]})
