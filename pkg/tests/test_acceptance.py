"""Timed acceptance checks, one per headline guarantee.

Each criterion runs at its full advertised scale, asserts its stated
tolerance, and must finish inside a wall-clock budget.  Every test
prints a single PASS line with the measured runtime (visible under
``pytest -s``; under plain ``pytest -v`` the test name itself is the
pass/fail line).
"""

import cmath
import math
import random
import time
from fractions import Fraction

import pytest

from twistorlab.betti import (
    apply_betti,
    betti_map,
    connected_in_betti,
    functor_on_element,
)
from twistorlab.bundles import (
    FilteredBundle,
    LaurentMatrix,
    check_mixed_twistor,
    h0,
    splitting_type,
)
from twistorlab.groupoid import (
    NormalForm,
    ResidualPoint,
    apply,
    canonical_element,
    graphs_disjoint,
    normalize,
)
from twistorlab.kms import (
    KmsElement,
    KmsPair,
    LambdaPoint,
    ZERO_CHART,
    check_hypothesis3,
    hecke_shift,
    parabolic_weight,
    residue_eigenvalue,
)
from twistorlab.linalg import exact_rank
from twistorlab.rank1 import InvariantSection, o2_transition, section_from_kms, split_at
from twistorlab.scalars import GaussianRational, abs2
from twistorlab.sections import (
    SurfaceData,
    assemble,
    dichotomy_scan,
    verify_cocycle,
    weight_graded_dims,
)

from .oracles import (
    all_words,
    dyadic,
    hand_birkhoff_certificate,
    middle_graded_dimension,
    random_exact_complex,
    random_unimodular,
    stagewise_word_image,
    tangent_total_dimension,
)


def _report(name: str, start: float, limit: float) -> None:
    elapsed = time.perf_counter() - start
    verdict = "PASS" if elapsed < limit else "FAIL"
    print(f"{name}: {verdict} ({elapsed:.2f}s, budget {limit:.0f}s)")
    assert elapsed < limit, f"{name} exceeded its {limit:.0f}s budget"


def _small_exact(rng: random.Random) -> GaussianRational:
    # tiny numerators and denominators keep rational arithmetic fast
    return GaussianRational(
        Fraction(rng.randrange(-24, 25), rng.choice((1, 2, 3, 4))),
        Fraction(rng.randrange(-24, 25), rng.choice((1, 2, 3, 4))))


def test_criterion_01_flow_combination_identity():
    start = time.perf_counter()
    rng = random.Random(101)
    for _ in range(5000):
        u = KmsElement(dyadic(rng), random_exact_complex(rng))
        lam = random_exact_complex(rng)
        combo = residue_eigenvalue(u, lam) + lam * parabolic_weight(u, lam)
        assert combo == (1 + abs2(lam)) * u.alpha
    for _ in range(5000):
        u = KmsElement(rng.uniform(-2, 2),
                       complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
        lam = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        combo = residue_eigenvalue(u, lam) + lam * parabolic_weight(u, lam)
        target = (1 + abs(lam) ** 2) * u.alpha
        assert abs(combo - target) <= 1e-12 * max(1.0, abs(target))
    _report("criterion 01, flow combination identity x 10^4", start, 5.0)


def test_criterion_02_gauge_equivariance():
    start = time.perf_counter()
    rng = random.Random(102)
    for _ in range(10_000):
        u = KmsElement(dyadic(rng), random_exact_complex(rng))
        lam = random_exact_complex(rng)
        k = rng.randint(-5, 5)
        shifted = hecke_shift(u, k)
        assert parabolic_weight(shifted, lam) == parabolic_weight(u, lam) + k
        assert (residue_eigenvalue(shifted, lam)
                == residue_eigenvalue(u, lam) - k * lam)
    _report("criterion 02, gauge equivariance x 10^4", start, 5.0)


def _generic_exact_point(rng, lam):
    # reject (a, b) on any lattice line b - a = c*lam that a word of
    # length <= 6 can ever test, so every stage below is defined
    while True:
        a, b = _small_exact(rng), _small_exact(rng)
        gap = b - a
        if all(gap != c * lam for c in range(-12, 13)):
            return a, b


def test_criterion_03_words_match_normal_forms():
    start = time.perf_counter()
    rng = random.Random(103)
    lams = []
    while len(lams) < 5:
        lam = _small_exact(rng)
        if complex(lam) != 0:
            lams.append(lam)
    configs = [(lam,) + _generic_exact_point(rng, lam)
               for lam in lams for _ in range(100)]
    words = list(all_words(6))
    assert len(words) == 1093
    for word in words:
        element = canonical_element(normalize(word))
        for lam, a, b in configs:
            image = apply(element, ResidualPoint(lam, a, b))
            assert image is not None
            assert stagewise_word_image(word, lam, a, b) == (image.a, image.b)
    _report("criterion 03, all words of length <= 6 vs normal forms",
            start, 60.0)


def test_criterion_04_distinct_forms_have_disjoint_graphs():
    start = time.perf_counter()
    forms = [NormalForm(eps, k, m)
             for eps in (0, 1) for k in range(5) for m in range(-4, 5)]
    assert len(forms) == 90
    rng = random.Random(104)
    checked = 0
    while checked < 20:
        lam = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        if abs(lam) < 0.3:
            continue
        assert graphs_disjoint(forms, lam, samples=12, seed=104 + checked)
        checked += 1
    _report("criterion 04, 90 normal forms pairwise disjoint at 20 lambdas",
            start, 30.0)


def _bounded_point(rng):
    while True:
        lam = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(lam) >= 0.5:
            break
    return ResidualPoint(lam, complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                         complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))


def test_criterion_05_betti_functoriality_and_connectivity():
    start = time.perf_counter()
    rng = random.Random(105)
    checked = 0
    while checked < 1000:
        pt = _bounded_point(rng)
        g = NormalForm(rng.randint(0, 1), rng.randint(0, 3), rng.randint(-3, 3))
        image = apply(g, pt)
        if image is None:
            continue
        lhs = betti_map(image)
        rhs = apply_betti(functor_on_element(g), betti_map(pt))
        assert rhs is not None
        assert lhs.m1 == pytest.approx(rhs.m1, rel=1e-10)
        assert lhs.m2 == pytest.approx(rhs.m2, rel=1e-10)
        checked += 1
    positives = 0
    while positives < 200:
        pt = _bounded_point(rng)
        g = NormalForm(rng.randint(0, 1), rng.randint(0, 2), rng.randint(-2, 2))
        image = apply(g, pt)
        if image is None:
            continue
        assert connected_in_betti(betti_map(pt), betti_map(image), tol=1e-7)
        positives += 1
    negatives = 0
    while negatives < 200:
        p1 = betti_map(_bounded_point(rng))
        p2 = betti_map(ResidualPoint(
            p1.lam, complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
            complex(rng.uniform(-2, 2), rng.uniform(-2, 2))))
        margins = (abs(p1.m1 - p2.m1), abs(p1.m2 - p2.m2),
                   abs(p1.m1 - p2.m2), abs(p1.m2 - p2.m1))
        if min(margins) < 1e-6:
            continue
        assert not connected_in_betti(p1, p2)
        negatives += 1
    _report("criterion 05, exponentiation functor x 10^3 plus 200+200 "
            "connectivity", start, 30.0)


def test_criterion_06_fixed_sections_form_real_three_space():
    start = time.perf_counter()
    # antipodal-fixedness of (c0, c1, c2) in R^6 coordinates
    # (Re c0, Im c0, Re c1, Im c1, Re c2, Im c2)
    constraints = [[0, 0, 0, 1, 0, 0],
                   [1, 0, 0, 0, 1, 0],
                   [0, -1, 0, 0, 0, 1]]
    assert exact_rank(constraints) == 3
    basis = [InvariantSection(1, GaussianRational(0, 0)),
             InvariantSection(0, GaussianRational(1, 0)),
             InvariantSection(0, GaussianRational(0, 1))]
    vectors = []
    for section in basis:
        c0, c1, c2 = section.coefficients
        vector = [c0.real, c0.imag, c1.real, c1.imag, c2.real, c2.imag]
        vectors.append(vector)
        for row in constraints:
            assert sum(r * v for r, v in zip(row, vector)) == 0
    assert exact_rank(vectors) == 3

    grid = [GaussianRational(Fraction(x, 2), Fraction(y, 2))
            for x in range(-2, 3) for y in range(-2, 3)]
    assert len(grid) == 25
    for kappa in grid:
        at = LambdaPoint(ZERO_CHART, kappa)
        rows = []
        for section in basis:
            split = split_at(section, at)
            rows.append([split.p, split.value.real, split.value.imag])
        assert exact_rank(rows) == 3

    u = KmsElement(Fraction(1, 3),
                   GaussianRational(Fraction(1, 4), Fraction(-1, 5)))
    lifted = section_from_kms(u)
    shifted = section_from_kms(hecke_shift(u, 1))
    for kappa in grid:
        at = LambdaPoint(ZERO_CHART, kappa)
        base, moved = split_at(lifted, at), split_at(shifted, at)
        assert moved.p - base.p == 1
        assert moved.value - base.value == -kappa
    _report("criterion 06, fixed global sections: rank 3, 25 fibers "
            "surjective, gauge image (1, -lambda)", start, 5.0)


def _exact_diagonal(degrees):
    n = len(degrees)
    terms = {}
    for idx, d in enumerate(degrees):
        mat = terms.setdefault(d, [[GaussianRational(0, 0)] * n
                                   for _ in range(n)])
        row = list(mat[idx])
        row[idx] = GaussianRational(1, 0)
        mat[idx] = row
    return LaurentMatrix(n, terms)


def test_criterion_07_splitting_solver():
    start = time.perf_counter()
    o2 = o2_transition()
    assert tuple(splitting_type(o2).degrees) == (2,)
    assert h0(o2) == 3

    raw_t, raw_l, raw_r = hand_birkhoff_certificate()
    T = LaurentMatrix(2, raw_t)
    L = LaurentMatrix(2, raw_l)
    R = LaurentMatrix(2, raw_r)
    assert L @ R == T
    assert L.exponents[1] <= 0 and R.exponents[0] >= 0
    assert tuple(splitting_type(T).degrees) == (0, 0)

    rng = random.Random(77)
    plan = [1] * 2 + [2] * 8 + [3] * 6 + [4] * 4
    for n in plan:
        lo, hi = (-1, 1) if n == 4 else (-2, 2)
        degrees = sorted((rng.randint(lo, hi) for _ in range(n)), reverse=True)
        base = _exact_diagonal(degrees)
        limit = 2 if n == 4 else 3
        while True:
            U = LaurentMatrix(n, random_unimodular(n, rng, "infinity"))
            if max(U.terms) - min(U.terms) <= limit:
                break
        while True:
            V = LaurentMatrix(n, random_unimodular(n, rng, "zero"))
            if max(V.terms) - min(V.terms) <= limit:
                break
        got = splitting_type(U @ base @ V, mode="exact")
        assert list(got.degrees) == degrees
    _report("criterion 07, splitting solver: hand values plus 20 "
            "unimodular conjugations", start, 60.0)


def test_criterion_08_mixed_twistor_checker():
    start = time.perf_counter()
    zeros = [[0] * 4 for _ in range(4)]
    t0, t1, t2 = ([row[:] for row in zeros] for _ in range(3))
    t0[0][0] = t1[1][1] = t1[2][2] = t2[3][3] = 1
    model = FilteredBundle(LaurentMatrix(4, {0: t0, 1: t1, 2: t2}), (1, 2, 1))
    assert check_mixed_twistor(model, (0, 1, 2)).passed

    residual = FilteredBundle(o2_transition(), (1,))
    assert check_mixed_twistor(residual, (2,)).passed

    assert not check_mixed_twistor(model, (2, 1, 0)).passed
    _report("criterion 08, mixed twistor checker pass/pass/fail", start, 5.0)


def _hypothesis_pair(rng):
    base = KmsElement(rng.uniform(-1, 1),
                      complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)))
    gap = 0.15 * rng.random() * cmath.exp(2j * math.pi * rng.random())
    da = rng.randint(-1, 1) + rng.choice((-1, 1)) * rng.uniform(0.35, 0.65)
    u = KmsElement(base.a + da, base.alpha + gap)
    assert check_hypothesis3(u, base)
    return KmsPair(u, base)


def test_criterion_09_dichotomy_and_default_atlas():
    start = time.perf_counter()
    rng = random.Random(109)
    for _ in range(50):
        names = tuple(f"q{i}" for i in range(1 + rng.randrange(2)))
        data = SurfaceData(rng.randrange(3), names,
                           {name: _hypothesis_pair(rng) for name in names})
        for name in names:
            report = dichotomy_scan(data.kms[name])
            assert report.ok, report.witnesses
        atlas = assemble(data)
        assert len(atlas.disks) == 10
        check = verify_cocycle(atlas)
        assert check.ok, check.witnesses
    _report("criterion 09, dichotomy scans and default atlas on 50 "
            "random surfaces", start, 120.0)


def test_criterion_10_dimension_bookkeeping():
    start = time.perf_counter()
    assert weight_graded_dims(0, 4) == (3, 2, 7)
    assert middle_graded_dimension(0, 4) == 2
    for genus in range(7):
        for punctures in range(1, 9):
            w0, w1, w2 = weight_graded_dims(genus, punctures)
            assert w0 == 3
            assert w2 == 2 * punctures - 1
            assert w0 + w1 + w2 == tangent_total_dimension(genus, punctures)
            assert w1 == middle_graded_dimension(genus, punctures)
    _report("criterion 10, weight-graded dimension bookkeeping", start, 1.0)
