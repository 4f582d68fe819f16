"""The partial-map groupoid on residual eigenvalue data at a puncture.

Points are triples (lambda, a, b): the twistor parameter and the two residue
eigenvalues, on the flag line and on the quotient. Three generators act:

* ``h``      : (lambda, a, b) -> (lambda, b - lambda, a)       (elementary modification)
* ``h_inv``  : (lambda, a, b) -> (lambda, b, a + lambda)
* ``p``      : (lambda, a, b) -> (lambda, b, a), defined only where a != b

subject to h_inv*h = 1, p*p = 1, and p commuting with h*h. Every word reduces
to the normal form p^eps (h p)^k h^m with eps in {0,1}, k >= 0, m an integer.

Each word acts as an affine partial map: swap or not, then subtract integer
multiples of lambda from the two slots. That closed form is the
:class:`SemanticTriple`; domains are finite sets of integers c with the
meaning "defined where b - a != c*lambda". Words act rightmost letter first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .scalars import GaussianRational, is_exact

LETTER_H = "h"
LETTER_H_INV = "h_inv"
LETTER_P = "p"
ALPHABET = (LETTER_H, LETTER_H_INV, LETTER_P)


@dataclass(frozen=True)
class ResidualPoint:
    """(lambda, a, b) with a, b the eigenvalues on the flag line / quotient."""

    lam: complex | GaussianRational
    a: complex | GaussianRational
    b: complex | GaussianRational


@dataclass(frozen=True)
class NormalForm:
    """The canonical word p^epsilon (h p)^k h^m."""

    epsilon: int
    k: int
    m: int

    def __post_init__(self):
        if self.epsilon not in (0, 1):
            raise ValueError("epsilon must be 0 or 1")
        if self.k < 0:
            raise ValueError("k must be non-negative")


IDENTITY = NormalForm(0, 0, 0)


@dataclass(frozen=True)
class SemanticTriple:
    """Affine action (x, y) -> (x - i*lambda, y - j*lambda), swapping first if swap=1."""

    swap: int
    i: int
    j: int


@dataclass(frozen=True)
class Domain:
    """Defined where b - a != c*lambda for every excluded integer c."""

    excluded: frozenset[int]

    def admits(self, pt: ResidualPoint) -> bool:
        diff = pt.b - pt.a
        return all(diff != c * pt.lam for c in self.excluded)


EVERYWHERE = Domain(frozenset())


@dataclass(frozen=True)
class GroupoidElement:
    """A normal form together with its tracked domain of definition.

    Composition can shrink the domain below the canonical one; the larger
    excluded set is kept on purpose (the two readings agree pointwise).
    """

    form: NormalForm
    domain: Domain


# Closed-form action of the three generators.
_LETTER_TRIPLES = {
    LETTER_H: SemanticTriple(1, 1, 0),
    LETTER_H_INV: SemanticTriple(1, 0, -1),
    LETTER_P: SemanticTriple(1, 0, 0),
}

_IDENTITY_TRIPLE = SemanticTriple(0, 0, 0)


def compose_triples(t2: SemanticTriple, t1: SemanticTriple) -> SemanticTriple:
    """Triple of the composite "t2 after t1"."""
    i1, j1 = (t1.j, t1.i) if t2.swap else (t1.i, t1.j)
    return SemanticTriple(t1.swap ^ t2.swap, i1 + t2.i, j1 + t2.j)


def triple_of_form(nf: NormalForm) -> SemanticTriple:
    # h^m fills both slots evenly; an odd power leaves one extra on the first.
    if nf.m % 2 == 0:
        base = SemanticTriple(0, nf.m // 2, nf.m // 2)
    else:
        base = SemanticTriple(1, (nf.m + 1) // 2, (nf.m - 1) // 2)
    with_k = SemanticTriple(base.swap, base.i + nf.k, base.j)
    if nf.epsilon:
        return SemanticTriple(with_k.swap ^ 1, with_k.j, with_k.i)
    return with_k


def form_of_triple(t: SemanticTriple) -> NormalForm:
    if t.swap == 0:
        if t.i >= t.j:
            return NormalForm(0, t.i - t.j, 2 * t.j)
        return NormalForm(1, t.j - t.i - 1, 2 * t.i + 1)
    if t.i > t.j:
        return NormalForm(0, t.i - t.j - 1, 2 * t.j + 1)
    return NormalForm(1, t.j - t.i, 2 * t.i)


def _word_in_application_order(letters) -> list[str]:
    for letter in letters:
        if letter not in ALPHABET:
            raise ValueError(f"unknown generator {letter!r}")
    return list(reversed(list(letters)))


def normalize(letters) -> NormalForm:
    """Normal form of a word over {h, h_inv, p} (rightmost letter acts first)."""
    t = _IDENTITY_TRIPLE
    for letter in _word_in_application_order(letters):
        t = compose_triples(_LETTER_TRIPLES[letter], t)
    return form_of_triple(t)


def _canonical_letters(nf: NormalForm) -> list[str]:
    """Letters of p^eps (hp)^k h^m in application (first-to-last) order."""
    seq = [LETTER_H] * nf.m if nf.m >= 0 else [LETTER_H_INV] * (-nf.m)
    seq += [LETTER_P, LETTER_H] * nf.k
    seq += [LETTER_P] * nf.epsilon
    return seq


def _stagewise_conditions(letters_in_order) -> frozenset[int]:
    """Collect the p-step conditions of a word, as excluded integers.

    Before each p the running prefix (s, i, j) locates the current point at
    (a - i*lam, b - j*lam) possibly swapped; "first slot != second slot"
    becomes b - a != c*lam with c = j - i (unswapped) or i - j (swapped).
    """
    prefix = _IDENTITY_TRIPLE
    excluded = set()
    for letter in letters_in_order:
        if letter == LETTER_P:
            c = prefix.j - prefix.i if prefix.swap == 0 else prefix.i - prefix.j
            excluded.add(c)
        prefix = compose_triples(_LETTER_TRIPLES[letter], prefix)
    return frozenset(excluded)


def canonical_domain(nf: NormalForm) -> Domain:
    """Excluded set of the canonical word itself."""
    return Domain(_stagewise_conditions(_canonical_letters(nf)))


def canonical_element(nf: NormalForm) -> GroupoidElement:
    return GroupoidElement(nf, canonical_domain(nf))


def element_of_word(letters) -> GroupoidElement:
    """Normal form plus the word's own stagewise domain (may exceed canonical)."""
    in_order = _word_in_application_order(letters)
    t = _IDENTITY_TRIPLE
    for letter in in_order:
        t = compose_triples(_LETTER_TRIPLES[letter], t)
    return GroupoidElement(form_of_triple(t), Domain(_stagewise_conditions(in_order)))


def apply(element, pt: ResidualPoint) -> ResidualPoint | None:
    """Image of pt, or None where the element is undefined.

    Accepts a NormalForm (canonical domain) or a GroupoidElement (tracked
    domain). Works at lambda = 0 too, where every condition collapses to
    a != b.
    """
    if isinstance(element, NormalForm):
        element = canonical_element(element)
    if not element.domain.admits(pt):
        return None
    t = triple_of_form(element.form)
    x, y = (pt.b, pt.a) if t.swap else (pt.a, pt.b)
    return ResidualPoint(pt.lam, x - t.i * pt.lam, y - t.j * pt.lam)


def _pull_back_condition(c: int, through: SemanticTriple) -> int:
    # b' - a' equals (b - a) + (i - j)*lam unswapped, (i - j)*lam - (b - a) swapped.
    if through.swap == 0:
        return c - (through.i - through.j)
    return (through.i - through.j) - c


def compose(g2: GroupoidElement, g1: GroupoidElement) -> GroupoidElement:
    """The element "g2 after g1" with the composed excluded set."""
    t1 = triple_of_form(g1.form)
    t2 = triple_of_form(g2.form)
    form = form_of_triple(compose_triples(t2, t1))
    pulled = {_pull_back_condition(c, t1) for c in g2.domain.excluded}
    return GroupoidElement(form, Domain(g1.domain.excluded | pulled))


def invert(g: GroupoidElement) -> GroupoidElement:
    t = triple_of_form(g.form)
    t_inv = SemanticTriple(t.swap, -t.i, -t.j) if t.swap == 0 else SemanticTriple(t.swap, -t.j, -t.i)
    pulled = {_pull_back_condition(c, t_inv) for c in g.domain.excluded}
    return GroupoidElement(form_of_triple(t_inv), Domain(frozenset(pulled)))


def _random_generic_point(lam, rng: random.Random) -> ResidualPoint:
    if is_exact(lam):
        def draw():
            return GaussianRational(
                Fraction(rng.randint(-(1 << 20), 1 << 20), 1 << 10),
                Fraction(rng.randint(-(1 << 20), 1 << 20), 1 << 10),
            )
        return ResidualPoint(lam, draw(), draw())
    return ResidualPoint(
        lam,
        complex(rng.uniform(-4, 4), rng.uniform(-4, 4)),
        complex(rng.uniform(-4, 4), rng.uniform(-4, 4)),
    )


def graphs_disjoint(nfs, lam, samples: int, seed: int = 7) -> bool:
    """Check pairwise-disjoint graphs of distinct normal forms over lambda != 0.

    Samples generic points (avoiding every listed element's excluded locus,
    so all images are defined) and reports whether two distinct forms ever
    produce the same image from the same source.
    """
    if not lam:
        raise ValueError("graph disjointness is only claimed over lambda != 0")
    forms = list(nfs)
    domains = [canonical_domain(nf) for nf in forms]
    rng = random.Random(seed)
    for _ in range(samples):
        pt = _random_generic_point(lam, rng)
        while not all(dom.admits(pt) for dom in domains):
            pt = _random_generic_point(lam, rng)
        seen = {}
        for nf in forms:
            image = apply(nf, pt)
            key = (image.a, image.b)
            if key in seen and seen[key] != nf:
                return False
            seen[key] = nf
    return True


def _near_integer(ratio, tol: float) -> int | None:
    if is_exact(ratio):
        if ratio.imag or ratio.real.denominator != 1:
            return None
        return int(ratio.real)
    n = round(ratio.real)
    if abs(ratio - n) > tol:
        return None
    return int(n)


def connecting_element(source: ResidualPoint, target: ResidualPoint,
                       tol: float = 1e-9) -> NormalForm | None:
    """Normal form mapping source to target over one lambda != 0, if any exists.

    Shifts move each slot by integer multiples of lambda, so for either swap
    choice the candidate integers come from exact division of the coordinate
    differences; no enumeration is needed. (The divisions land automatically
    inside the window 2 + ceil(max |difference| / |lambda|).) The candidate
    counts only if the source lies in the form's canonical domain.
    """
    if source.lam != target.lam:
        raise ValueError("residual points sit over different lambda values")
    lam = source.lam
    if not lam:
        raise ValueError("no orbit search at lambda = 0")

    def close(p, q):
        if is_exact(p.a) and is_exact(q.a) and is_exact(p.b) and is_exact(q.b):
            return p.a == q.a and p.b == q.b
        return (abs(complex(p.a) - complex(q.a)) <= tol * (1 + abs(complex(q.a)))
                and abs(complex(p.b) - complex(q.b)) <= tol * (1 + abs(complex(q.b))))

    for swap in (0, 1):
        x, y = (source.b, source.a) if swap else (source.a, source.b)
        i = _near_integer((x - target.a) / lam, tol)
        j = _near_integer((y - target.b) / lam, tol)
        if i is None or j is None:
            continue
        nf = form_of_triple(SemanticTriple(swap, i, j))
        image = apply(nf, source)
        if image is not None and close(image, target):
            return nf
    return None


def multi_apply(elements: Mapping[str, GroupoidElement | NormalForm],
                points: Mapping[str, ResidualPoint]):
    """Componentwise application over punctures; None if any component is.

    Punctures without an entry in ``elements`` are left unchanged. All points
    must sit over one lambda.
    """
    lams = {pt.lam for pt in points.values()}
    if len(lams) > 1:
        raise ValueError("residual points sit over different lambda values")
    out = {}
    for name, pt in points.items():
        g = elements.get(name)
        if g is None:
            out[name] = pt
            continue
        image = apply(g, pt)
        if image is None:
            return None
        out[name] = image
    return out
