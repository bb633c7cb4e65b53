"""Tiny exact linear algebra over a field of RatFunc-like elements.

Matrices are lists of rows; rows are lists of elements supporting
+, -, *, /, unary -, and truthiness (nonzero test). Systems here are
small (at most a few dozen rows/columns), so plain fraction-reducing
Gaussian elimination is the right tool.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


def _weight(x) -> int:
    """Complexity of an entry, used to pick pivots that limit blowup."""
    try:
        return len(x.num.terms) * len(x.den.terms)
    except AttributeError:
        return 1


def _rref(rows: List[list]) -> Tuple[List[list], List[int]]:
    """Reduced row echelon form (in place on a copy) and pivot column indices."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        best = None
        for i in range(r, len(m)):
            if m[i][c]:
                w = _weight(m[i][c])
                if best is None or w < best:
                    best, pr = w, i
                    if w <= 1:
                        break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def _poly_rows(rows: List[list]) -> Optional[List[list]]:
    """Numerator matrix when every entry is a denominator-free RatFunc."""
    out = []
    for row in rows:
        r = []
        for x in row:
            try:
                if not x.den.is_one():
                    return None
                r.append(x.num)
            except AttributeError:
                return None
        out.append(r)
    return out


def _rank_bareiss(mat: List[list]) -> int:
    """Fraction-free rank of a polynomial matrix; no gcds, exact divisions only.

    One-step Bareiss with row pivoting by sparsity; every intermediate entry
    is a minor of the input, so the division by the previous pivot is exact.
    Rows below the current one only keep the columns still in play.
    """
    from .field import exact_div

    if not mat:
        return 0
    ncols = len(mat[0])
    # active[i] holds columns c..ncols-1 of the i-th unfinished row
    active = [list(r) for r in mat]
    prev = None
    r = 0
    for c in range(ncols):
        if not active:
            break
        pr = None
        best = None
        for i, row in enumerate(active):
            if not row[0].is_zero():
                w = len(row[0].terms)
                if best is None or w < best:
                    best, pr = w, i
                    if w == 1:
                        break
        if pr is None:
            for row in active:
                del row[0]
            continue
        top = active.pop(pr)
        piv = top[0]
        width = len(top)
        nxt = []
        for row in active:
            ei = row[0]
            if ei.is_zero():
                new = [row[j] * piv for j in range(1, width)]
            else:
                new = [row[j] * piv - top[j] * ei for j in range(1, width)]
            if prev is not None:
                new = [exact_div(v, prev) for v in new]
            if any(not v.is_zero() for v in new):
                nxt.append(new)
        active = nxt
        prev = piv
        r += 1
    return r


def rank(rows: List[list]) -> int:
    poly = _poly_rows(rows)
    if poly is not None:
        return _rank_bareiss(poly)
    _, pivots = _rref(rows)
    return len(pivots)


def solve(rows: List[list], rhs: list, field) -> Optional[list]:
    """One solution x of rows @ x = rhs, or None when inconsistent.

    Free variables are set to zero. `field` supplies zero()/one().
    """
    if not rows:
        return []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _rref(aug)
    for i in range(len(red)):
        if not any(red[i][:ncols]) and red[i][ncols]:
            return None
    x = [field.zero() for _ in range(ncols)]
    for i, c in enumerate(pivots):
        if c == ncols:
            return None  # pivot in the rhs column: inconsistent
        x[c] = red[i][ncols]
    return x


def nullspace(rows: List[list], field) -> List[list]:
    """Basis of the right kernel of the matrix."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(v)
    return basis


def in_column_space(columns: List[list], target: list, field) -> Optional[list]:
    """Coefficients expressing target as a combination of the columns, or None."""
    if not columns:
        return [] if not any(target) else None
    rows = [[col[i] for col in columns] for i in range(len(target))]
    return solve(rows, target, field)


def columns_independent(columns: Sequence[list]) -> bool:
    if not columns:
        return True
    rows = [[col[i] for col in columns] for i in range(len(columns[0]))]
    return rank(rows) == len(columns)
