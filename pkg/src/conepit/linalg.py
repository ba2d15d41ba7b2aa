"""Exact linear algebra kernels: incremental row reduction, rank, nullspaces.

Everything here is deterministic and exact.  The incremental
:class:`RowReducer` is the workhorse for span/rank/membership queries; the
Bareiss routines handle integer matrices where fraction-free elimination
keeps intermediate entries at minor-determinant size.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .fields import Field, Scalar


class RowReducer:
    """Incremental Gaussian elimination over a field.

    Rows are inserted one by one; independent rows are kept in echelon form
    with pivot entries normalized to 1.  With ``track=True`` each stored row
    also remembers its expansion over the original inserted rows, which lets
    :meth:`reduce` report the combination expressing a vector in terms of
    the previously accepted originals.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.track = track
        self.rows: list[list[Scalar]] = []
        self.pivots: list[int] = []
        self.combos: list[list[Scalar]] = []  # expansion over accepted originals
        self.accepted = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Sequence[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
        F = self.field
        v = list(vec)
        combo = [F.zero()] * self.accepted if self.track else []
        for row, piv, rc in zip(self.rows, self.pivots, self.combos if self.track else [[]] * len(self.rows)):
            c = v[piv]
            if c == 0:
                continue
            for j in range(piv, len(v)):
                if row[j] != 0:
                    v[j] = F.sub(v[j], F.mul(c, row[j]))
            if self.track:
                for j, rj in enumerate(rc):
                    if rj != 0:
                        combo[j] = F.add(combo[j], F.mul(c, rj))
        return v, combo

    def reduce(self, vec: Sequence[Scalar]) -> tuple[list[Scalar], list[Scalar]]:
        """Residual of vec modulo the current span, plus (if tracking) the
        combination of accepted original rows that was subtracted."""
        return self._reduce(vec)

    def insert(self, vec: Sequence[Scalar]) -> bool:
        """Insert a row; returns True iff it was independent of the span."""
        F = self.field
        v, combo = self._reduce(vec)
        piv = next((j for j, x in enumerate(v) if x != 0), None)
        if piv is None:
            if self.track:
                self.accepted += 1
                for rc in self.combos:
                    rc.append(F.zero())
            return False
        inv = F.inv(v[piv])
        v = [F.mul(inv, x) for x in v]
        if self.track:
            # new stored row = inv * (original - sum combo_j * original_j)
            rc = [F.neg(F.mul(inv, c)) for c in combo]
            rc.append(inv)
            self.accepted += 1
            for old in self.combos:
                old.append(F.zero())
            self.combos.append(rc)
        self.rows.append(v)
        self.pivots.append(piv)
        return True


def matrix_rank(rows: Sequence[Sequence[Scalar]], field: Field) -> int:
    red = RowReducer(field)
    for r in rows:
        red.insert(r)
    return red.rank


def in_span(vec: Sequence[Scalar], basis: Sequence[Sequence[Scalar]], field: Field) -> tuple[bool, list[Scalar]]:
    """Is vec in the span of basis?  Returns (membership, combination).

    The combination lists one coefficient per basis vector, in order, such
    that vec = sum coeff_i * basis_i when membership holds.
    """
    red = RowReducer(field, track=True)
    for b in basis:
        red.insert(b)
    residual, combo = red.reduce(vec)
    return all(x == 0 for x in residual), combo


def nullspace_canonical(rows: Sequence[Sequence[Scalar]], field: Field, width: int) -> list[Scalar] | None:
    """Canonical kernel vector of a homogeneous system, or None if trivial.

    Reduced-echelon convention: among the non-pivot (free) columns, the
    first is set to 1 and the rest to 0; pivot variables are solved exactly.
    """
    F = field
    red = RowReducer(F)
    for r in rows:
        red.insert(r)
    pivot_cols = set(red.pivots)
    free = next((j for j in range(width) if j not in pivot_cols), None)
    if free is None:
        return None
    x = [F.zero()] * width
    x[free] = F.one()
    # Back-substitute through the echelon rows in reverse pivot order.
    order = sorted(range(len(red.rows)), key=lambda i: red.pivots[i], reverse=True)
    for i in order:
        row = red.rows[i]
        piv = red.pivots[i]
        s = F.zero()
        for j in range(piv + 1, width):
            if row[j] != 0 and x[j] != 0:
                s = F.add(s, F.mul(row[j], x[j]))
        x[piv] = F.neg(s)  # pivot entry is normalized to 1
    return x


# ----------------------------------------------------------------------
# Integer (fraction-free) elimination
# ----------------------------------------------------------------------


def _to_integer_rows(rows: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (kernel is unchanged)."""
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        lcm = 1
        for x in fr:
            d = x.denominator
            g = _gcd(lcm, d)
            lcm = lcm // g * d
        out.append([int(x * lcm) for x in fr])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def bareiss_echelon(rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix.

    Returns (echelon rows, pivot column per row).  Bareiss one-step
    elimination keeps every intermediate entry equal to a minor of the
    input, so bit growth is bounded by the determinant bound.
    """
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    piv_rows: list[list[int]] = []
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        piv_rows.append(a[r])
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    return piv_rows, piv_cols


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pr is None:
                return 0
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_nullspace_canonical(rows: Sequence[Sequence[Fraction | int]], width: int) -> list[int] | None:
    """Canonical integral kernel vector of a homogeneous rational system.

    Same free-variable convention as :func:`nullspace_canonical`; the result
    is scaled to integers with content 1.  Sign normalization is left to the
    caller.  Returns None when the kernel is trivial.
    """
    int_rows = _to_integer_rows(rows)
    if not int_rows:
        vec = [0] * width
        if width == 0:
            return None
        vec[0] = 1
        return vec
    ech, piv_cols = bareiss_echelon(int_rows)
    pivot_set = set(piv_cols)
    free = next((j for j in range(width) if j not in pivot_set), None)
    if free is None:
        return None
    x: list[Fraction] = [Fraction(0)] * width
    x[free] = Fraction(1)
    for row, piv in sorted(zip(ech, piv_cols), key=lambda t: t[1], reverse=True):
        s = Fraction(0)
        for j in range(piv + 1, width):
            if row[j] != 0 and x[j] != 0:
                s += Fraction(row[j]) * x[j]
        x[piv] = -s / row[piv]
    lcm = 1
    for v in x:
        d = v.denominator
        g = _gcd(lcm, d)
        lcm = lcm // g * d
    ints = [int(v * lcm) for v in x]
    content = 0
    for v in ints:
        content = _gcd(content, abs(v))
    if content > 1:
        ints = [v // content for v in ints]
    return ints
