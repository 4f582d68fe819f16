import random
from fractions import Fraction

import pytest

from twistorlab.groupoid import (
    IDENTITY,
    LETTER_H,
    LETTER_H_INV,
    LETTER_P,
    NormalForm,
    ResidualPoint,
    SemanticTriple,
    apply,
    canonical_element,
    compose,
    compose_triples,
    connecting_element,
    element_of_word,
    form_of_triple,
    graphs_disjoint,
    invert,
    multi_apply,
    normalize,
    triple_of_form,
)
from twistorlab.scalars import GaussianRational

from .oracles import (
    all_words,
    random_exact_complex,
    search_connecting_form,
    stagewise_word_image,
)


def nf(eps, k, m):
    return NormalForm(eps, k, m)


def generic_point(rng, lam):
    # keep (a - b)/lam away from small integers so every form is defined
    while True:
        a = random_exact_complex(rng)
        b = random_exact_complex(rng)
        if a != b and all((a - b) != c * lam for c in range(-9, 9)):
            return ResidualPoint(lam, a, b)


def test_normal_form_validation():
    nf(0, 0, 0)
    nf(1, 3, -2)
    with pytest.raises(ValueError):
        nf(2, 0, 0)
    with pytest.raises(ValueError):
        nf(0, -1, 0)


def test_defining_relations():
    h, hi, p = LETTER_H, LETTER_H_INV, LETTER_P
    assert normalize([h, hi]) == IDENTITY
    assert normalize([hi, h]) == IDENTITY
    assert normalize([p, p]) == IDENTITY
    # p commutes with h^2 but not with h itself
    assert normalize([p, h, h]) == normalize([h, h, p])
    assert normalize([p, h]) != normalize([h, p])


def test_normalize_examples():
    assert normalize([]) == IDENTITY
    assert normalize(["h"]) == nf(0, 0, 1)
    assert normalize(["p"]) == nf(1, 0, 0)
    assert normalize(["h", "h", "p"]) == nf(1, 0, 2)
    # the swap commutes with the square of the shift letter
    assert normalize(["p", "h", "h"]) == normalize(["h", "h", "p"])
    with pytest.raises(ValueError):
        normalize(["q"])


def test_triple_form_round_trip():
    for eps in (0, 1):
        for k in range(0, 5):
            for m in range(-5, 6):
                form = nf(eps, k, m)
                assert form_of_triple(triple_of_form(form)) == form


def test_canonical_domains_frozen():
    # excluded shift sets, worked out by hand from the stagewise rule
    assert canonical_element(nf(1, 0, 0)).domain.excluded == frozenset({0})
    # one swap pair costs a single condition: realize it as shift-after-swap
    assert canonical_element(nf(0, 1, 0)).domain.excluded == frozenset({0})
    assert canonical_element(nf(0, 2, 0)).domain.excluded == frozenset({0, -1})
    assert canonical_element(nf(0, 0, 3)).domain.excluded == frozenset()
    assert canonical_element(nf(0, 0, -4)).domain.excluded == frozenset()
    assert canonical_element(nf(1, 2, -1)).domain.excluded
    assert canonical_element(IDENTITY).domain.excluded == frozenset()


def test_words_match_normal_forms_exact():
    # every word of length <= 4 acts exactly like its normalized element
    rng = random.Random(23)
    lams = [GaussianRational(Fraction(1), Fraction(0)),
            GaussianRational(Fraction(-1, 2), Fraction(1, 3))]
    points = [(random_exact_complex(rng), random_exact_complex(rng))
              for _ in range(6)]
    for word in all_words(4):
        element = element_of_word(word)
        for lam in lams:
            for a, b in points:
                expected = stagewise_word_image(word, lam, a, b)
                got = apply(element, ResidualPoint(lam, a, b))
                if expected is None:
                    assert got is None
                else:
                    assert got is not None
                    assert (got.a, got.b) == expected


def test_apply_accepts_bare_normal_form():
    pt = ResidualPoint(1 + 0j, 0.25 + 0j, 5.0 + 0j)
    via_form = apply(nf(1, 0, 2), pt)
    via_element = apply(canonical_element(nf(1, 0, 2)), pt)
    assert via_form == via_element


def test_apply_outside_domain_returns_none():
    lam = GaussianRational(Fraction(1), Fraction(0))
    a = random_exact_complex(random.Random(5))
    # b - a == 0 hits the swap condition of p
    assert apply(nf(1, 0, 0), ResidualPoint(lam, a, a)) is None
    assert apply(nf(1, 0, 0), ResidualPoint(lam, a, a + 2 * lam)) is not None


def test_apply_at_lambda_zero():
    # shifts vanish at lam = 0; swaps and the diagonal condition survive
    pt = ResidualPoint(0j, 1 + 0j, 2 + 0j)
    even = apply(nf(0, 0, 4), pt)
    assert (even.a, even.b) == (1 + 0j, 2 + 0j)
    odd = apply(nf(0, 0, 5), pt)
    assert (odd.a, odd.b) == (2 + 0j, 1 + 0j)
    assert apply(nf(1, 0, 0), ResidualPoint(0j, 1 + 0j, 1 + 0j)) is None


def test_compose_and_invert_on_forms():
    rng = random.Random(29)
    for _ in range(200):
        f, g, h = (canonical_element(nf(rng.randint(0, 1), rng.randint(0, 3),
                                        rng.randint(-3, 3)))
                   for _ in range(3))
        assert (compose(f, compose(g, h)).form
                == compose(compose(f, g), h).form)
        gi = invert(g)
        assert compose(gi, g).form == IDENTITY
        assert compose(g, gi).form == IDENTITY


def test_compose_matches_pointwise_action():
    rng = random.Random(31)
    lam = GaussianRational(Fraction(2), Fraction(1))
    for _ in range(100):
        g = canonical_element(nf(rng.randint(0, 1), rng.randint(0, 2),
                                 rng.randint(-2, 2)))
        h = canonical_element(nf(rng.randint(0, 1), rng.randint(0, 2),
                                 rng.randint(-2, 2)))
        pt = generic_point(rng, lam)
        inner = apply(h, pt)
        assert inner is not None
        expected = apply(g, inner)
        assert expected is not None
        got = apply(compose(g, h), pt)
        assert got is not None
        assert (got.a, got.b) == (expected.a, expected.b)


def test_composite_domain_is_pullback():
    # the composite is defined exactly where both stages are
    rng = random.Random(37)
    lam = GaussianRational(Fraction(1), Fraction(-1))
    for _ in range(60):
        g = canonical_element(nf(rng.randint(0, 1), rng.randint(0, 2),
                                 rng.randint(-2, 2)))
        h = canonical_element(nf(rng.randint(0, 1), rng.randint(0, 2),
                                 rng.randint(-2, 2)))
        gh = compose(g, h)
        for c in range(-4, 5):
            a = random_exact_complex(rng)
            pt = ResidualPoint(lam, a, a + c * lam)
            inner = apply(h, pt)
            both = inner is not None and apply(g, inner) is not None
            assert (apply(gh, pt) is not None) == both


def test_inverse_undoes_on_the_domain():
    rng = random.Random(43)
    lam = GaussianRational(Fraction(1), Fraction(2))
    for _ in range(60):
        g = canonical_element(nf(rng.randint(0, 1), rng.randint(0, 2),
                                 rng.randint(-2, 2)))
        pt = generic_point(rng, lam)
        image = apply(g, pt)
        assert image is not None
        back = apply(invert(g), image)
        assert back is not None
        assert (back.a, back.b) == (pt.a, pt.b)


def test_graphs_disjoint_separates_forms():
    forms = [IDENTITY, nf(0, 0, 1), nf(1, 0, 0), nf(0, 1, 0), nf(1, 2, -1)]
    assert graphs_disjoint(forms, 0.7 + 0.3j, samples=40, seed=7)
    with pytest.raises(ValueError):
        graphs_disjoint(forms, 0j, samples=1)


def test_connecting_element_matches_search():
    rng = random.Random(41)
    lam = GaussianRational(Fraction(1), Fraction(1))
    for _ in range(40):
        g = nf(rng.randint(0, 1), rng.randint(0, 3), rng.randint(-3, 3))
        pt = generic_point(rng, lam)
        image = apply(g, pt)
        assert image is not None
        found = connecting_element(pt, image)
        assert found == g
        brute = search_connecting_form(pt, image, window=8)
        assert brute is not None
        assert form_of_triple(SemanticTriple(*brute)) == g
    # a target off the shift lattice is unreachable
    base = generic_point(rng, lam)
    off = ResidualPoint(lam, base.a + GaussianRational(
        Fraction(1, 3), Fraction(0)) * lam, base.b)
    assert connecting_element(base, off) is None
    with pytest.raises(ValueError):
        connecting_element(base, ResidualPoint(2 * lam, base.a, base.b))


def test_multi_apply():
    lam = 1 + 0j
    pts = {"x": ResidualPoint(lam, 0.5 + 0j, 3.25 + 0j),
           "y": ResidualPoint(lam, 1.5 + 0j, -2.0 + 0j)}
    moved = multi_apply({"x": nf(0, 0, 2)}, pts)
    assert moved is not None
    assert moved["y"] == pts["y"]  # untouched punctures pass through
    assert (moved["x"].a, moved["x"].b) == (-0.5 + 0j, 2.25 + 0j)
    # an undefined factor makes the whole product undefined
    mixed = {"x": ResidualPoint(lam, 1 + 0j, 1 + 0j), "y": pts["y"]}
    assert multi_apply({"x": nf(1, 0, 0)}, mixed) is None
    with pytest.raises(ValueError):
        multi_apply({}, {"x": pts["x"],
                         "y": ResidualPoint(2j, 0j, 1 + 0j)})


def test_semantic_triple_composition_table():
    t_h = SemanticTriple(1, 1, 0)
    t_hi = SemanticTriple(1, 0, -1)
    t_p = SemanticTriple(1, 0, 0)
    assert compose_triples(t_h, t_hi) == SemanticTriple(0, 0, 0)
    assert compose_triples(t_p, t_p) == SemanticTriple(0, 0, 0)
    # compose_triples(t2, t1) is "t2 after t1"; words act rightmost first
    assert form_of_triple(compose_triples(t_h, t_p)) == normalize(["h", "p"])
    assert form_of_triple(compose_triples(t_p, t_h)) == normalize(["p", "h"])
