"""Vector bundles on the projective line from Laurent transition matrices.

A bundle is presented by an invertible matrix T over C[lambda, 1/lambda]:
a global section is a pair of polynomial row vectors, f0 in lambda and f1
in mu = -1/lambda, with f0(lambda) = f1(-1/lambda) * T(lambda). Pairing on
the left makes the splitting degrees invariant under T -> A * T * B for A
unimodular in 1/lambda and B unimodular in lambda, so a factorization into
such factors exhibits the trivial type. The line bundle O(k) has transition
[[lambda^k]]; splitting types are computed from counting sections of
twists, never from an explicit factorization.

Arithmetic is exact Gaussian-rational by default up to rank 4 (float inputs
embed exactly); larger ranks fall back to numpy nullity with a rank-revealing
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .linalg import FLOAT_TOL, exact_nullity, float_nullity
from .scalars import GaussianRational, abs2, exact_scalar, is_exact

EXACT_RANK_LIMIT = 4

_Poly = dict  # int exponent -> GaussianRational coefficient


def _padd(p: _Poly, q: _Poly) -> _Poly:
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pmul(p: _Poly, q: _Poly) -> _Poly:
    out: _Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pneg(p: _Poly) -> _Poly:
    return {e: -c for e, c in p.items()}


class LaurentMatrix:
    """Square matrix of Laurent polynomials with unit determinant.

    ``terms`` maps an exponent to the n-by-n coefficient matrix of lambda^e.
    Construction validates the unit-determinant invariant det T = c*lambda^d
    (float inputs: coefficients below a relative 1e-9 of the largest are
    treated as noise); the winding d and unit c are cached.
    """

    __slots__ = ("n", "terms", "exact", "_det_exp", "_det_coeff")

    def __init__(self, n: int, terms: Mapping[int, Sequence[Sequence]],
                 exact: bool | None = None):
        if n < 1:
            raise ValueError("rank must be positive")
        self.n = n
        detected = True
        packed: dict[int, tuple] = {}
        for e, mat in terms.items():
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError(f"term at exponent {e} is not {n}x{n}")
            rows = []
            nonzero = False
            for row in mat:
                out_row = []
                for value in row:
                    detected = detected and is_exact(value)
                    scalar = exact_scalar(value)
                    nonzero = nonzero or bool(scalar)
                    out_row.append(scalar)
                rows.append(tuple(out_row))
            if nonzero:
                packed[int(e)] = tuple(rows)
        self.terms = packed
        # embedded floats are exact scalars, so derived matrices must pass
        # their provenance down explicitly
        self.exact = detected if exact is None else (detected and exact)
        self._det_exp, self._det_coeff = self._unit_determinant()

    # -- invariants ---------------------------------------------------------

    def _unit_determinant(self) -> tuple[int, GaussianRational]:
        det = _laurent_det(self._poly_matrix())
        if not det:
            raise ValueError("not a bundle transition: determinant is zero")
        if not self.exact:
            largest = max(float(abs2(c)) for c in det.values())
            det = {e: c for e, c in det.items()
                   if float(abs2(c)) > (FLOAT_TOL ** 2) * largest}
        if len(det) != 1:
            raise ValueError("not a bundle transition: determinant is not a "
                             "Laurent unit c*lambda^d")
        ((e, c),) = det.items()
        return e, c

    def _poly_matrix(self) -> list[list[_Poly]]:
        polys = [[{} for _ in range(self.n)] for _ in range(self.n)]
        for e, mat in self.terms.items():
            for u in range(self.n):
                for v in range(self.n):
                    if mat[u][v]:
                        polys[u][v][e] = mat[u][v]
        return polys

    # -- basic queries ------------------------------------------------------

    @property
    def exponents(self) -> tuple[int, int]:
        """(min, max) exponent over nonzero terms."""
        return min(self.terms), max(self.terms)

    def coefficient(self, e: int, u: int, v: int) -> GaussianRational:
        mat = self.terms.get(e)
        return mat[u][v] if mat is not None else exact_scalar(0)

    def __eq__(self, other):
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __repr__(self):
        return f"LaurentMatrix(n={self.n}, exponents={sorted(self.terms)})"

    # -- algebra ------------------------------------------------------------

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.n != other.n:
            raise ValueError("rank mismatch")
        out: dict[int, list[list[GaussianRational]]] = {}
        for e1, m1 in self.terms.items():
            for e2, m2 in other.terms.items():
                e = e1 + e2
                acc = out.setdefault(e, [[exact_scalar(0)] * self.n
                                         for _ in range(self.n)])
                for u in range(self.n):
                    row = m1[u]
                    for w in range(self.n):
                        if row[w]:
                            c = row[w]
                            target = acc[u]
                            m2w = m2[w]
                            for v in range(self.n):
                                if m2w[v]:
                                    target[v] = target[v] + c * m2w[v]
        return LaurentMatrix(self.n, out, exact=self.exact and other.exact)

    def twist(self, m: int) -> "LaurentMatrix":
        """lambda^m times self: every exponent shifts by m."""
        return LaurentMatrix(self.n, {e + m: mat for e, mat in self.terms.items()},
                             exact=self.exact)

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix(self.n, {
            e: tuple(tuple(mat[v][u] for v in range(self.n)) for u in range(self.n))
            for e, mat in self.terms.items()}, exact=self.exact)

    def inverse(self) -> "LaurentMatrix":
        """adj(T) / (c*lambda^d); stays a Laurent matrix because det is a unit."""
        polys = self._poly_matrix()
        unit_inv = exact_scalar(1) / self._det_coeff
        out: dict[int, list[list[GaussianRational]]] = {}
        for u in range(self.n):
            for v in range(self.n):
                cof = _cofactor(polys, u, v)
                for e, c in cof.items():
                    shifted = e - self._det_exp
                    acc = out.setdefault(shifted, [[exact_scalar(0)] * self.n
                                                   for _ in range(self.n)])
                    # adjugate transposes the cofactor grid
                    acc[v][u] = acc[v][u] + unit_inv * c
        return LaurentMatrix(self.n, out, exact=self.exact)


def _laurent_det(polys: list[list[_Poly]]) -> _Poly:
    """Determinant by column-subset dynamic programming (exact)."""
    n = len(polys)
    state = {(1 << n) - 1: {0: exact_scalar(1)}}
    for u in range(n):
        nxt: dict[int, _Poly] = {}
        for mask, acc in state.items():
            sign = 1
            for v in range(n):
                if not (mask >> v) & 1:
                    continue
                entry = polys[u][v]
                if entry:
                    contrib = _pmul(acc, entry) if sign > 0 else _pmul(_pneg(acc), entry)
                    key = mask & ~(1 << v)
                    nxt[key] = _padd(nxt.get(key, {}), contrib)
                sign = -sign
        state = nxt
    return state.get(0, {})


def _cofactor(polys: list[list[_Poly]], u: int, v: int) -> _Poly:
    n = len(polys)
    minor = [[polys[r][c] for c in range(n) if c != v]
             for r in range(n) if r != u]
    det = _laurent_det(minor) if minor else {0: exact_scalar(1)}
    return det if (u + v) % 2 == 0 else _pneg(det)


@dataclass(frozen=True)
class BundleOnP1:
    """A bundle presented by its transition matrix (section semantics above)."""

    transition: LaurentMatrix


@dataclass(frozen=True)
class SplittingType:
    """Weakly decreasing degrees of the direct-sum decomposition."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        if any(a < b for a, b in zip(self.degrees, self.degrees[1:])):
            raise ValueError("degrees must be weakly decreasing")

    def __iter__(self):
        return iter(self.degrees)

    @property
    def total(self) -> int:
        return sum(self.degrees)


def det_winding(T: LaurentMatrix) -> int:
    """The d in det T = c*lambda^d."""
    return T._det_exp


def _pick_exact(T: LaurentMatrix, mode: str) -> bool:
    if mode == "exact":
        return True
    if mode == "float":
        return False
    if mode != "auto":
        raise ValueError("mode must be auto, exact, or float")
    return T.exact and T.n <= EXACT_RANK_LIMIT


def _nullity_at(T: LaurentMatrix, bound: int, use_exact: bool) -> int:
    """Nullity of the no-negative-powers system on f1 of degree <= bound.

    Component u of the glued row vector is sum_v f1_v * T[v][u], so the
    coefficient read here is mat[v][u].
    """
    n = T.n
    e_min = min(T.terms)
    ncols = n * (bound + 1)
    rows = []
    for p in range(e_min - bound, 0):
        for u in range(n):
            row = [exact_scalar(0)] * ncols
            filled = False
            for j in range(bound + 1):
                mat = T.terms.get(p + j)
                if mat is None:
                    continue
                sign = -1 if j % 2 else 1
                for v in range(n):
                    c = mat[v][u]
                    if c:
                        row[j * n + v] = c if sign > 0 else -c
                        filled = True
            if filled:
                rows.append(tuple(row))
    if not rows:
        return ncols
    if use_exact:
        return exact_nullity(rows, ncols)
    m = np.array([[complex(c) for c in row] for row in rows], dtype=complex)
    return float_nullity(m, ncols)


def h0(T: LaurentMatrix, twist: int = 0, mode: str = "auto") -> int:
    """Dimension of global sections of the bundle twisted by O(twist).

    Degree bookkeeping: any section has deg f1 <= d - (n-1)*e_min + twist
    (invert the transition; the adjugate's lowest exponent is at least
    (n-1)*e_min), so that bound certifies the answer. Below it, the bound
    doubles from n*(exponent spread) until the count is stable twice.
    """
    use_exact = _pick_exact(T, mode)
    shifted = T.twist(twist) if twist else T
    e_min, e_max = shifted.exponents
    certified = det_winding(shifted) - (shifted.n - 1) * e_min
    if certified < 0:
        return 0
    bound = max(1, shifted.n * (e_max - e_min))
    previous = None
    while True:
        if bound >= certified:
            return _nullity_at(shifted, certified, use_exact)
        value = _nullity_at(shifted, bound, use_exact)
        if value == previous:
            return value
        previous = value
        bound *= 2


def splitting_type(T: LaurentMatrix, mode: str = "auto") -> SplittingType:
    """Degrees (k_1 >= ... >= k_n) with sum = det winding.

    #{i : k_i >= t} = h0(-t) - h0(-t-1), swept over the window that provably
    contains every degree: k_max <= e_max (compare top lambda-powers of a
    section equation) and k_min >= d - (n-1)*e_max (dual bundle, same bound).
    """
    d = det_winding(T)
    _, e_max = T.exponents
    lo = d - (T.n - 1) * e_max
    hi = e_max
    h0_at = {t: h0(T, -t, mode) for t in range(lo, hi + 2)}
    degrees = []
    for t in range(hi, lo - 1, -1):
        count_t = h0_at[t] - h0_at[t + 1]
        count_above = h0_at[t + 1] - h0_at[t + 2] if t + 2 in h0_at else 0
        degrees.extend([t] * (count_t - count_above))
    if len(degrees) != T.n or sum(degrees) != d:
        raise RuntimeError("splitting sweep inconsistent; widen the window")
    return SplittingType(tuple(degrees))


def is_pure_weight(T: LaurentMatrix, k: int, mode: str = "auto") -> bool:
    """O(k)^n exactly: semistable of slope k."""
    return splitting_type(T, mode).degrees == (k,) * T.n


@dataclass(frozen=True)
class FilteredBundle:
    """Block-upper-triangular transition with declared diagonal block ranks."""

    transition: LaurentMatrix
    block_ranks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "block_ranks", tuple(self.block_ranks))
        if not self.block_ranks or any(r < 1 for r in self.block_ranks):
            raise ValueError("block shape mismatch: ranks must be positive")
        if sum(self.block_ranks) != self.transition.n:
            raise ValueError("block shape mismatch: ranks must sum to the rank")
        starts = [0]
        for r in self.block_ranks:
            starts.append(starts[-1] + r)
        for e, mat in self.transition.terms.items():
            for bi in range(len(self.block_ranks)):
                for bj in range(bi):
                    for u in range(starts[bi], starts[bi + 1]):
                        for v in range(starts[bj], starts[bj + 1]):
                            if mat[u][v]:
                                raise ValueError(
                                    "block shape mismatch: nonzero entry below "
                                    f"the diagonal blocks at exponent {e}")


def graded_pieces(F: FilteredBundle) -> list[LaurentMatrix]:
    """Diagonal blocks in filtration order; each is validated as a transition."""
    start = 0
    blocks = []
    for r in F.block_ranks:
        terms = {}
        for e, mat in F.transition.terms.items():
            sub = tuple(tuple(mat[u][v] for v in range(start, start + r))
                        for u in range(start, start + r))
            if any(any(row) for row in sub):
                terms[e] = sub
        blocks.append(LaurentMatrix(r, terms, exact=F.transition.exact))
        start += r
    return blocks


@dataclass(frozen=True)
class BlockReport:
    splitting: SplittingType
    weight: int
    pure: bool


@dataclass(frozen=True)
class MixedTwistorReport:
    blocks: tuple[BlockReport, ...]

    @property
    def passed(self) -> bool:
        return all(b.pure for b in self.blocks)

    def __bool__(self):
        return self.passed


def check_mixed_twistor(F: FilteredBundle, weights: Sequence[int],
                        mode: str = "auto") -> MixedTwistorReport:
    """Every graded piece must be pure of its declared weight."""
    pieces = graded_pieces(F)
    if len(weights) != len(pieces):
        raise ValueError("one declared weight per diagonal block")
    blocks = []
    for piece, w in zip(pieces, weights):
        st = splitting_type(piece, mode)
        blocks.append(BlockReport(st, int(w), st.degrees == (int(w),) * piece.n))
    return MixedTwistorReport(tuple(blocks))


def sigma_fixed_check(T: LaurentMatrix, k: int, coeffs: Sequence,
                      tol: float = 1e-9) -> bool:
    """Fixed-point test for the antipodal lift on O(2) section coefficients.

    The involution sends s(lambda) to -lambda^2 * conj(s(-1/conj(lambda)));
    on coefficients (c0, c1, c2) the fixed-point equations are c1 real and
    c2 = -conj(c0). Only the line model T = [[lambda^k]] with k = 2 is
    supported.
    """
    if T.n != 1 or list(T.terms) != [k] or T.terms[k][0][0] != 1:
        raise ValueError("expected the line model [[lambda^k]]")
    if k != 2:
        raise ValueError("unsupported weight: only k = 2 is implemented")
    if len(coeffs) != 3:
        raise ValueError("three coefficients required for O(2)")
    c0, c1, c2 = coeffs
    if all(is_exact(c) for c in coeffs):
        c0, c1, c2 = (exact_scalar(c) for c in coeffs)
        return not c1.imag and c2 == -c0.conjugate()
    c0, c1, c2 = complex(c0), complex(c1), complex(c2)
    scale = 1 + max(abs(c0), abs(c1), abs(c2))
    return (abs(c1.imag) <= tol * scale
            and abs(c2 + c0.conjugate()) <= tol * scale)
