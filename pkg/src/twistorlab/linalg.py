"""Rank and nullity computations for the section solvers.

Two engines, matching the package's dual number mode:

* :func:`exact_rank` clears denominators and runs fraction-free (Bareiss)
  elimination over Gaussian integers, so the result is certified, not
  tolerance-based;
* :func:`float_rank` is a rank-revealing SVD with an absolute singular-value
  cutoff.

Rows may mix ints, Fractions, floats, complex and GaussianRational; floats
convert exactly (they are dyadic rationals), so "exact" never means "rounded
input".
"""

from __future__ import annotations

from math import gcd

from .scalars import exact_scalar

FLOAT_TOL = 1e-9


def _integerized(rows):
    """Scale each row to Gaussian-integer entries, stored as (re, im) ints."""
    out = []
    for row in rows:
        exact = [exact_scalar(x) for x in row]
        den = 1
        for g in exact:
            den = den * g.re.denominator // gcd(den, g.re.denominator)
            den = den * g.im.denominator // gcd(den, g.im.denominator)
        out.append([(int(g.re * den), int(g.im * den)) for g in exact])
    return out


def exact_rank(rows) -> int:
    """Rank over the Gaussian rationals, computed without rounding.

    Bareiss elimination: every update is
    a[i][j] <- (a[i][j]*pivot - a[i][c]*a[r][j]) / previous_pivot,
    where the division is exact in Z[i]. The full-row update (including
    columns with a zero multiplier) is what guarantees that exactness.
    """
    m = _integerized(rows)
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev_r, prev_i = 1, 0
    prev_norm = 1
    row = 0
    for col in range(ncols):
        pivot_at = None
        for i in range(row, len(m)):
            e = m[i][col]
            if e[0] or e[1]:
                pivot_at = i
                break
        if pivot_at is None:
            continue
        m[row], m[pivot_at] = m[pivot_at], m[row]
        pr, pi = m[row][col]
        for i in range(row + 1, len(m)):
            fr, fi = m[i][col]
            mi = m[i]
            mr = m[row]
            if fr or fi:
                for j in range(col + 1, ncols):
                    ar, ai = mi[j]
                    br, bi = mr[j]
                    nr = ar * pr - ai * pi - (fr * br - fi * bi)
                    ni = ar * pi + ai * pr - (fr * bi + fi * br)
                    # divide by prev pivot, exactly
                    tr = nr * prev_r + ni * prev_i
                    ti = ni * prev_r - nr * prev_i
                    mi[j] = (tr // prev_norm, ti // prev_norm)
            else:
                for j in range(col + 1, ncols):
                    ar, ai = mi[j]
                    nr = ar * pr - ai * pi
                    ni = ar * pi + ai * pr
                    tr = nr * prev_r + ni * prev_i
                    ti = ni * prev_r - nr * prev_i
                    mi[j] = (tr // prev_norm, ti // prev_norm)
            mi[col] = (0, 0)
        prev_r, prev_i = pr, pi
        prev_norm = pr * pr + pi * pi
        rank += 1
        row += 1
        if row == len(m):
            break
    return rank


def exact_nullity(rows, ncols: int) -> int:
    """Dimension of the solution space of the homogeneous system rows*x = 0."""
    if not rows:
        return ncols
    return ncols - exact_rank(rows)


def float_rank(matrix, tol: float = FLOAT_TOL) -> int:
    """Rank via singular values, cutting at an absolute 1e-9 scale."""
    import numpy as np

    a = np.asarray(matrix, dtype=complex)
    if a.size == 0:
        return 0
    sing = np.linalg.svd(a, compute_uv=False)
    if sing.size == 0:
        return 0
    cut = tol * max(1.0, float(sing[0]))
    return int((sing > cut).sum())


def float_nullity(matrix, ncols: int, tol: float = FLOAT_TOL) -> int:
    if len(matrix) == 0:
        return ncols
    return ncols - float_rank(matrix, tol=tol)
