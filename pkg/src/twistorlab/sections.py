"""Disk-by-disk assembly of the rank-2 preferred section at the residual level.

Per puncture, a pair of weight/eigenvalue flows competes for the flag line.
On a small disk exactly one of two things happens: the weights stay distinct
mod Z on the whole disk and order the branches (case a), or they collide at
one integer offset k, and the eigenvalue branches, which then never meet on
the disk away from the k-resonance points, do the separating (case b). The
assembler classifies each disk, fixes an ordered branch pair, and emits the
groupoid element relating the choices on every overlap; the cocycle property
is verified by sampling, never assumed.

All cross-disk bookkeeping happens in zero-chart coordinates; infinity-chart
disks contribute through conjugate transport of their KMS data and the
Moebius image of their disk under lambda = -1/mu.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .groupoid import (
    GroupoidElement,
    ResidualPoint,
    SemanticTriple,
    apply,
    canonical_element,
    compose,
    form_of_triple,
    invert,
)
from .kms import (
    INFINITY_CHART,
    KmsElement,
    KmsPair,
    ZERO_CHART,
    conjugate_kms,
    parabolic_weight,
    residue_eigenvalue,
)
from .scalars import GaussianRational, exact_scalar, is_exact

DEFAULT_SEED = 7

CASE_A = "case-a"
CASE_B = "case-b"


class DiskTooLargeError(ValueError):
    """The dichotomy needs a smaller disk at this center."""


class AssembleError(RuntimeError):
    """Overlap bookkeeping failed; for valid inputs this signals a bug."""


@dataclass(frozen=True)
class SurfaceData:
    """Genus, punctures, and a validated KMS pair per puncture."""

    genus: int
    punctures: tuple[str, ...]
    kms: Mapping[str, KmsPair]

    def __post_init__(self):
        object.__setattr__(self, "punctures", tuple(self.punctures))
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.punctures:
            raise ValueError("the puncture divisor must be nonempty")
        if len(set(self.punctures)) != len(self.punctures):
            raise ValueError("puncture names must be distinct")
        if set(self.kms) != set(self.punctures):
            raise ValueError("need exactly one KMS pair per puncture")


@dataclass(frozen=True)
class ChartDisk:
    chart: str
    center: complex
    radius: float

    def __post_init__(self):
        if self.chart not in (ZERO_CHART, INFINITY_CHART):
            raise ValueError(f"unknown chart {self.chart!r}")
        if not self.radius > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class CaseTag:
    kind: str
    k: int | None = None

    def __post_init__(self):
        if self.kind not in (CASE_A, CASE_B):
            raise ValueError(f"unknown case {self.kind!r}")
        if (self.k is None) != (self.kind == CASE_A):
            raise ValueError("exactly the collision case carries an offset k")


@dataclass(frozen=True)
class BranchDescriptor:
    """One eigenvalue branch: flow of source (0 or 1) shifted by an integer.

    In its chart the branch's eigenvalue is e_source(z) - shift*z and its
    weight is p_source(z) + shift.
    """

    source: int
    shift: int


@dataclass(frozen=True)
class DiskChoice:
    """Ordered branch pair on one disk: (flag line, quotient)."""

    first: BranchDescriptor
    second: BranchDescriptor

    def __post_init__(self):
        if {self.first.source, self.second.source} != {0, 1}:
            raise ValueError("a choice uses each flow source exactly once")


@dataclass(frozen=True)
class CollisionLocus:
    """Solution set of 2*Re(lambda*normal) = offset; a line when normal != 0."""

    kind: str  # "line" | "empty" | "everywhere"
    normal: complex | None = None
    offset: float | None = None


def _pair_elements(pair) -> tuple[KmsElement, KmsElement]:
    if isinstance(pair, KmsPair):
        return pair.u, pair.u_prime
    u, u_prime = pair
    return u, u_prime


def collision_locus(pair, k: int) -> CollisionLocus:
    """Where the two weights differ by exactly k."""
    u, u_prime = _pair_elements(pair)
    normal = complex(u.alpha) - complex(u_prime.alpha)
    offset = float(u_prime.a) - float(u.a) + k
    if normal:
        return CollisionLocus("line", normal.conjugate(), offset)
    if offset:
        return CollisionLocus("empty")
    return CollisionLocus("everywhere")


def resonance_points(pair, k: int) -> list[complex]:
    """Roots of e(lambda) - e'(lambda) + k*lambda, low degree handled.

    For a validated pair the polynomial never vanishes identically: that
    would need alpha = alpha' and k = a - a', the excluded integer gap.
    Roots come back sorted by (real, imaginary).
    """
    u, u_prime = _pair_elements(pair)
    dalpha = complex(u.alpha) - complex(u_prime.alpha)
    da = float(u.a) - float(u_prime.a)
    quad = -dalpha.conjugate()
    lin = k - da
    if not dalpha:
        if not lin:
            raise ValueError("identically resonant: the offset k equals the "
                             "integer weight gap of a degenerate pair")
        return [0j]
    disc = complex(lin) ** 2 - 4 * quad * dalpha
    root = cmath.sqrt(disc)
    candidates = [(-lin + root) / (2 * quad), (-lin - root) / (2 * quad)]
    if abs(candidates[0] - candidates[1]) == 0:
        candidates = candidates[:1]
    return sorted(candidates, key=lambda z: (z.real, z.imag))


def _chart_pair(pair: KmsPair, chart: str) -> tuple[KmsElement, KmsElement]:
    if chart == ZERO_CHART:
        return pair.u, pair.u_prime
    return conjugate_kms(pair.u), conjugate_kms(pair.u_prime)


def classify_disk(pair: KmsPair, disk: ChartDisk) -> CaseTag:
    """The dichotomy on one disk, in the disk's own chart.

    Scans the integer offsets whose collision line can reach the disk; one
    hit plus resonance-free interior is the collision case, zero hits the
    generic case, anything else needs a smaller disk.
    """
    u, u_prime = _chart_pair(pair, disk.chart)
    dalpha = complex(u.alpha) - complex(u_prime.alpha)
    da = float(u.a) - float(u_prime.a)
    center = complex(disk.center)
    if not dalpha:
        # weight difference is constant and non-integer: no line, ever
        return CaseTag(CASE_A)
    projected = da + 2 * (center * dalpha.conjugate()).real
    reach = 2 * abs(dalpha) * disk.radius
    hits = [k for k in range(math.ceil(projected - reach),
                             math.floor(projected + reach) + 1)]
    if not hits:
        return CaseTag(CASE_A)
    if len(hits) > 1:
        raise DiskTooLargeError(
            f"disk too large: collision lines for offsets {hits} all meet it")
    k = hits[0]
    inside = [z for z in resonance_points((u, u_prime), k)
              if abs(z - center) <= disk.radius]
    if inside:
        raise DiskTooLargeError(
            f"disk too large: resonance points {inside} for offset {k} inside")
    return CaseTag(CASE_B, k)


def branch_eigenvalue(pair: KmsPair, desc: BranchDescriptor, z,
                      chart: str = ZERO_CHART):
    """Eigenvalue of one branch at a chart coordinate z."""
    u = _chart_pair(pair, chart)[desc.source]
    return residue_eigenvalue(u, z) - desc.shift * z


def branch_weight(pair: KmsPair, desc: BranchDescriptor, z,
                  chart: str = ZERO_CHART):
    u = _chart_pair(pair, chart)[desc.source]
    return parabolic_weight(u, z) + desc.shift


def _choose_branches(pair: KmsPair, tag: CaseTag, disk: ChartDisk) -> DiskChoice:
    """Ordered branch pair for one disk and puncture, in the disk's chart."""
    u, u_prime = _chart_pair(pair, disk.chart)
    center = complex(disk.center)
    p0 = float(parabolic_weight(u, center))
    p1 = float(parabolic_weight(u_prime, center))
    if tag.kind == CASE_B:
        shift = -math.floor(p0)
        return DiskChoice(BranchDescriptor(0, shift),
                          BranchDescriptor(1, tag.k + shift))
    d0 = BranchDescriptor(0, -math.floor(p0))
    d1 = BranchDescriptor(1, -math.floor(p1))
    # representatives in [0, 1) cannot tie: a tie at the center is a
    # collision line through it, which the classification excluded
    if p0 + d0.shift <= p1 + d1.shift:
        return DiskChoice(d0, d1)
    return DiskChoice(d1, d0)


def to_zero_chart(choice: DiskChoice, chart: str) -> DiskChoice:
    """Descriptor transport: an infinity-chart shift flips sign in lambda.

    lambda^2*(e_conj(mu) - n*mu) = e(lambda) + n*lambda at mu = -1/lambda,
    so the mu-side branch (source, n) is the lambda-side (source, -n).
    """
    if chart == ZERO_CHART:
        return choice
    return DiskChoice(BranchDescriptor(choice.first.source, -choice.first.shift),
                      BranchDescriptor(choice.second.source, -choice.second.shift))


def overlap_element(choice_i: DiskChoice, choice_j: DiskChoice) -> GroupoidElement:
    """Groupoid element sending choice_i's ordered pair to choice_j's.

    Both choices must already be in zero-chart descriptors. Matching is by
    flow source, so the element is determined by integer shift differences;
    no numeric search is involved.
    """
    a, b = choice_i.first, choice_i.second
    c, d = choice_j.first, choice_j.second
    if c.source == a.source:
        triple = SemanticTriple(0, c.shift - a.shift, d.shift - b.shift)
    else:
        triple = SemanticTriple(1, c.shift - b.shift, d.shift - a.shift)
    return canonical_element(form_of_triple(triple))


# -- disk geometry in zero-chart coordinates --------------------------------

@dataclass(frozen=True)
class _Region:
    """Open disk (inside=True) or open disk exterior (inside=False)."""

    inside: bool
    center: complex
    radius: float

    def contains(self, z) -> bool:
        d = abs(complex(z) - self.center)
        return d < self.radius if self.inside else d > self.radius


def zero_chart_region(disk: ChartDisk) -> _Region:
    if disk.chart == ZERO_CHART:
        return _Region(True, complex(disk.center), disk.radius)
    c = complex(disk.center)
    split = abs(c) ** 2 - disk.radius ** 2
    if split == 0:
        raise ValueError("unsupported disk: boundary passes through the "
                         "other chart's origin")
    image_center = -c.conjugate() / split
    image_radius = disk.radius / abs(split)
    return _Region(split > 0, image_center, image_radius)


def regions_overlap(r1: _Region, r2: _Region) -> bool:
    if r1.inside and r2.inside:
        return abs(r1.center - r2.center) < r1.radius + r2.radius
    if not r1.inside and not r2.inside:
        return True  # two disk exteriors always share far-out points
    disk, hole = (r1, r2) if r1.inside else (r2, r1)
    return abs(disk.center - hole.center) + disk.radius > hole.radius


def _sample_overlap(regions, rng: random.Random, exact: bool,
                    max_tries: int = 20000):
    """A zero-chart point interior to every region, by rejection."""
    bounded = [r for r in regions if r.inside]
    if bounded:
        pivot = min(bounded, key=lambda r: r.radius)
        box_center, box_radius = pivot.center, pivot.radius
    else:
        box_radius = 2 * max(abs(r.center) + r.radius for r in regions) + 4
        box_center = 0j
    for _ in range(max_tries):
        if exact:
            def dyadic():
                scale = Fraction(rng.randint(-(1 << 20), 1 << 20), 1 << 20)
                return scale * Fraction(box_radius)
            z = exact_scalar(box_center) + GaussianRational(dyadic(), dyadic())
        else:
            z = box_center + complex(rng.uniform(-box_radius, box_radius),
                                     rng.uniform(-box_radius, box_radius))
        if all(r.contains(z) for r in regions):
            return z
    raise AssembleError("could not sample a point in the region overlap")


# -- the atlas ---------------------------------------------------------------

@dataclass(frozen=True)
class SectionAtlas:
    data: SurfaceData
    disks: tuple[ChartDisk, ...]
    tags: tuple[Mapping[str, CaseTag], ...]
    choices: tuple[Mapping[str, DiskChoice], ...]
    cocycle: Mapping[tuple[int, int], Mapping[str, GroupoidElement]]

    def zero_choice(self, disk_index: int, puncture: str) -> DiskChoice:
        return to_zero_chart(self.choices[disk_index][puncture],
                             self.disks[disk_index].chart)

    def residual_point(self, disk_index: int, puncture: str, lam) -> ResidualPoint:
        """The disk's ordered eigenvalue pair at a zero-chart lambda."""
        choice = self.zero_choice(disk_index, puncture)
        pair = self.data.kms[puncture]
        return ResidualPoint(lam,
                             branch_eigenvalue(pair, choice.first, lam),
                             branch_eigenvalue(pair, choice.second, lam))

    def pair_element(self, i: int, j: int, puncture: str) -> GroupoidElement:
        if (i, j) in self.cocycle:
            return self.cocycle[(i, j)][puncture]
        return invert(self.cocycle[(j, i)][puncture])


def default_cover() -> list[ChartDisk]:
    """Two polar caps plus an eight-disk ring along the unit circle.

    Fixed, data-independent, and generously overlapping: the caps cover
    |lambda| <= 0.7 and |mu| <= 0.7, the ring covers the annulus between.
    """
    disks = [ChartDisk(ZERO_CHART, 0j, 0.7), ChartDisk(INFINITY_CHART, 0j, 0.7)]
    for step in range(8):
        angle = math.pi * step / 4
        disks.append(ChartDisk(ZERO_CHART, 1.05 * cmath.exp(1j * angle), 0.65))
    return disks


def _points_close(p: ResidualPoint, q: ResidualPoint, tol: float) -> bool:
    coords = (p.a, p.b, q.a, q.b)
    if all(is_exact(c) for c in coords):
        return p.a == q.a and p.b == q.b
    return (abs(complex(p.a) - complex(q.a)) <= tol * (1 + abs(complex(q.a)))
            and abs(complex(p.b) - complex(q.b)) <= tol * (1 + abs(complex(q.b))))


def assemble(data: SurfaceData, disks=None, seed: int = DEFAULT_SEED,
             tol: float = 1e-9) -> SectionAtlas:
    """Classify every disk, choose branches, and emit the overlap cocycle.

    Every emitted overlap element is sanity-checked at one sampled overlap
    point; a mismatch means inconsistent bookkeeping, not bad data, and
    raises AssembleError.
    """
    disks = tuple(default_cover() if disks is None else disks)
    regions = [zero_chart_region(d) for d in disks]
    tags = []
    choices = []
    for disk in disks:
        disk_tags = {}
        disk_choices = {}
        for name in data.punctures:
            pair = data.kms[name]
            tag = classify_disk(pair, disk)
            disk_tags[name] = tag
            disk_choices[name] = _choose_branches(pair, tag, disk)
        tags.append(disk_tags)
        choices.append(disk_choices)

    rng = random.Random(seed)
    exact = all(is_exact(p.u.a) and is_exact(p.u.alpha)
                and is_exact(p.u_prime.a) and is_exact(p.u_prime.alpha)
                for p in data.kms.values())
    atlas = SectionAtlas(data, disks, tuple(tags), tuple(choices), {})
    cocycle: dict[tuple[int, int], dict[str, GroupoidElement]] = {}
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if not regions_overlap(regions[i], regions[j]):
                continue
            entry = {}
            sample = _sample_overlap((regions[i], regions[j]), rng, exact)
            for name in data.punctures:
                g = overlap_element(
                    to_zero_chart(choices[i][name], disks[i].chart),
                    to_zero_chart(choices[j][name], disks[j].chart))
                source = atlas.residual_point(i, name, sample)
                target = atlas.residual_point(j, name, sample)
                image = apply(g, source)
                tries = 0
                while image is None and tries < 50:
                    # sampled the excluded locus of g; move the sample
                    sample = _sample_overlap((regions[i], regions[j]), rng, exact)
                    source = atlas.residual_point(i, name, sample)
                    target = atlas.residual_point(j, name, sample)
                    image = apply(g, source)
                    tries += 1
                if image is None or not _points_close(image, target, tol):
                    raise AssembleError(
                        f"inconsistent overlap between disks {i} and {j} "
                        f"at puncture {name!r}")
                entry[name] = g
            cocycle[(i, j)] = entry
    return SectionAtlas(data, disks, tuple(tags), tuple(choices), cocycle)


@dataclass(frozen=True)
class CocycleReport:
    ok: bool
    witnesses: tuple[str, ...]
    samples: int

    def __bool__(self):
        return self.ok


def verify_cocycle(atlas: SectionAtlas, samples: int = 3,
                   seed: int = DEFAULT_SEED, tol: float = 1e-9) -> CocycleReport:
    """Check every stored overlap and every sampled triple overlap.

    Pairwise: the stored element maps the i-choice to the j-choice at
    sampled overlap points. Triples: the composite around i -> j -> k
    equals the direct element, as normal forms (graphs are disjoint over
    lambda != 0, so form equality is map equality) and on sample values.
    """
    witnesses = []
    regions = [zero_chart_region(d) for d in atlas.disks]
    rng = random.Random(seed)
    exact = all(is_exact(p.u.a) and is_exact(p.u.alpha)
                and is_exact(p.u_prime.a) and is_exact(p.u_prime.alpha)
                for p in atlas.data.kms.values())

    def checked_pair(i, j, lam, name) -> bool:
        g = atlas.pair_element(i, j, name)
        source = atlas.residual_point(i, name, lam)
        target = atlas.residual_point(j, name, lam)
        image = apply(g, source)
        if image is None:
            return True  # excluded locus of this sample; not a violation
        return _points_close(image, target, tol)

    for (i, j) in sorted(atlas.cocycle):
        for _ in range(samples):
            lam = _sample_overlap((regions[i], regions[j]), rng, exact)
            for name in atlas.data.punctures:
                if not checked_pair(i, j, lam, name):
                    witnesses.append(
                        f"pair ({i},{j}) fails at puncture {name!r}, "
                        f"lambda={complex(lam):.6g}")

    pairs = set(atlas.cocycle)
    indices = sorted({i for ij in pairs for i in ij})
    for i in indices:
        for j in indices:
            for k in indices:
                if not (i < j < k):
                    continue
                if not ({(i, j), (j, k), (i, k)} <= pairs):
                    continue
                try:
                    # a few hundred tries suffice when the triple overlap is
                    # real; an empty one must stay cheap to skip
                    lam = _sample_overlap(
                        (regions[i], regions[j], regions[k]), rng, exact,
                        max_tries=400)
                except AssembleError:
                    continue  # no visible triple overlap; nothing to check
                for name in atlas.data.punctures:
                    g_ij = atlas.pair_element(i, j, name)
                    g_jk = atlas.pair_element(j, k, name)
                    g_ik = atlas.pair_element(i, k, name)
                    composite = compose(g_jk, g_ij)
                    if composite.form != g_ik.form:
                        witnesses.append(
                            f"triple ({i},{j},{k}) composes to "
                            f"{composite.form} but stores {g_ik.form} "
                            f"at puncture {name!r}")
                        continue
                    source = atlas.residual_point(i, name, lam)
                    target = atlas.residual_point(k, name, lam)
                    image = apply(composite, source)
                    if image is not None and not _points_close(image, target, tol):
                        witnesses.append(
                            f"triple ({i},{j},{k}) value mismatch at "
                            f"puncture {name!r}, lambda={complex(lam):.6g}")
    return CocycleReport(not witnesses, tuple(witnesses), samples)


def weight_graded_dims(genus: int, punctures: int) -> tuple[int, int, int]:
    """Dimensions of the three weight-graded pieces of the tangent fiber.

    The weight-0 piece is the framed endomorphism quotient (dimension 3 at
    rank 2), the weight-2 piece collects one residue line short of the
    puncture count (2k - 1), and the middle piece is what the total
    8g + 4k - 4 leaves over. The total presumes a nonempty smooth moduli
    space; for very small (g, k) the number is formal.
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    if punctures < 1:
        raise ValueError("the puncture divisor must be nonempty")
    total = 8 * genus + 4 * punctures - 4
    w0 = 3
    w2 = 2 * punctures - 1
    return (w0, total - w0 - w2, w2)


@dataclass(frozen=True)
class DichotomyReport:
    ok: bool
    witnesses: tuple[str, ...]
    grid: int
    extent: float
    tol: float

    def __bool__(self):
        return self.ok


def dichotomy_scan(pair: KmsPair, grid: int = 61, extent: float = 3.0,
                   tol: float = 1e-9) -> DichotomyReport:
    """Grid search for a simultaneous weight collision and k-resonance.

    For a pair with the integer-gap degeneracy excluded this must come back
    clean: at each lambda only the nearest integer to the weight difference
    can collide, and its eigenvalue offset is then checked directly.
    """
    witnesses = []
    for row in range(grid):
        for col in range(grid):
            lam = complex(-extent + 2 * extent * col / (grid - 1),
                          -extent + 2 * extent * row / (grid - 1))
            p_diff = float(parabolic_weight(pair.u, lam)
                           - parabolic_weight(pair.u_prime, lam))
            k = round(p_diff)
            if abs(p_diff - k) >= tol:
                continue
            e_diff = complex(residue_eigenvalue(pair.u, lam)
                             - residue_eigenvalue(pair.u_prime, lam))
            if abs(e_diff + k * lam) < tol:
                witnesses.append(f"lambda={lam:.6g}, k={k}")
    return DichotomyReport(not witnesses, tuple(witnesses), grid, extent, tol)
