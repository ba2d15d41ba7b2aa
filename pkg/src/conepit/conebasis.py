"""Weight assignments, least bases, cone-closed set isolation, and shifts.

A weight assignment w gives every monomial the weight <e, w>.  For a
vector-valued polynomial f, the greedy least basis scans the support in
increasing (weight, deg-lex) order and admits each monomial whose
coefficient vector is independent of the admitted ones.  A weight
assignment is basis isolating when the admitted weights are pairwise
distinct and every rejected coefficient already lies in the span of
strictly lighter admitted ones; in that case the greedy output is the
unique least basis.

``find_cone_closed`` turns any monomial set B into an equally large
cone-closed set A by recursing on the last coordinate's preimage
multiplicities; the binomial transfer matrix T[a][b] = prod C(b_i, a_i)
restricted to (A, B) is always invertible.  Shifting a polynomial by
x_i -> x_i + t^(w_i) re-expresses every shifted coefficient through that
transfer matrix, and when w is basis isolating, the A rows of the shifted
coefficient matrix keep full rank over F(t): the shifted polynomial has a
cone-closed coefficient basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, EmptyInput, NotIsolating, VerificationFailed, ZeroPolynomial
from .fields import DensePoly, Field, Scalar, rank_over_ft
from .linalg import RowReducer, in_span
from .polys import ExpVec, VectorPoly, coeff_rank, deglex_key, submonomials

Weights = tuple[int, ...]


def weight_of(w: Sequence[int], e: ExpVec) -> int:
    """Monomial weight <e, w>."""
    if len(w) != len(e):
        raise ArityMismatch(f"weight vector length {len(w)}, exponent arity {len(e)}")
    return sum(a * b for a, b in zip(e, w))


def kronecker_weights(n: int, d: int) -> Weights:
    """w_i = (d+1)^(i-1): injective on exponent vectors of degree <= d,
    hence basis isolating for every polynomial of degree <= d."""
    return tuple((d + 1) ** i for i in range(n))


def least_basis(f: VectorPoly, w: Sequence[int]) -> list[ExpVec]:
    """Greedy basis of the coefficient span of f, scanning the support in
    increasing weight with deg-lex tie-break.

    When w is basis isolating this is the unique least basis; otherwise it
    is the greedy-canonical basis for the induced order.
    """
    if f.is_zero:
        raise ZeroPolynomial("least_basis of the zero polynomial")
    order = sorted(f.terms, key=lambda e: (weight_of(w, e), deglex_key(e)))
    reducer = RowReducer(f.field)
    basis: list[ExpVec] = []
    for e in order:
        if reducer.insert(list(f.terms[e])):
            basis.append(e)
    return basis


@dataclass(frozen=True)
class BasisReport:
    """Least-basis analysis of (f, w).

    ``basis`` is ordered by admission (non-decreasing weight).  When
    ``isolating`` holds, ``certificate`` expresses each non-basis support
    monomial over strictly lighter basis monomials.
    """

    basis: tuple[ExpVec, ...]
    isolating: bool
    certificate: Mapping[ExpVec, tuple[tuple[ExpVec, Scalar], ...]] | None


def is_basis_isolating(f: VectorPoly, w: Sequence[int]) -> BasisReport:
    """Check the two isolation conditions for the greedy least basis:
    pairwise distinct basis weights, and every non-basis coefficient in the
    span of strictly lighter basis coefficients (solved exactly, with the
    combination recorded)."""
    basis = least_basis(f, w)
    weights = [weight_of(w, e) for e in basis]
    if len(set(weights)) != len(weights):
        return BasisReport(tuple(basis), False, None)
    certificate: dict[ExpVec, tuple[tuple[ExpVec, Scalar], ...]] = {}
    basis_set = set(basis)
    for e in f.support():
        if e in basis_set:
            continue
        we = weight_of(w, e)
        lighter = [b for b in basis if weight_of(w, b) < we]
        ok, combo = in_span(list(f.terms[e]), [list(f.terms[b]) for b in lighter], f.field)
        if not ok:
            return BasisReport(tuple(basis), False, None)
        certificate[e] = tuple((b, c) for b, c in zip(lighter, combo) if c != 0)
    return BasisReport(tuple(basis), True, certificate)


# ----------------------------------------------------------------------
# Cone-closed set construction
# ----------------------------------------------------------------------


def find_cone_closed(monomials: Iterable[ExpVec], n: int) -> list[ExpVec]:
    """Replace a monomial set B by an equally large cone-closed set.

    Recursion on the arity: with one variable, |B| exponents collapse to
    {0, ..., |B|-1}.  Otherwise project away the last coordinate, group the
    projections by preimage multiplicity (F_1 contains every projection,
    F_i those hit at least i times), recurse on each group, and lift group
    i to last coordinate i-1.  The output always satisfies |A| = |B|, is
    cone-closed, and the binomial transfer submatrix T[A, B] is invertible.
    """
    B = {tuple(e) for e in monomials}
    if not B:
        raise EmptyInput("find_cone_closed needs a nonempty set")
    for e in B:
        if len(e) != n:
            raise ArityMismatch(f"exponent {e} does not have arity {n}")
    return sorted(_fcc(B, n), key=deglex_key)


def _fcc(B: set[ExpVec], n: int) -> set[ExpVec]:
    if n == 1:
        return {(i,) for i in range(len(B))}
    counts: dict[ExpVec, int] = {}
    for e in B:
        counts[e[:-1]] = counts.get(e[:-1], 0) + 1
    max_mult = max(counts.values())
    A: set[ExpVec] = set()
    for i in range(1, max_mult + 1):
        F_i = {proj for proj, c in counts.items() if c >= i}
        for s in _fcc(F_i, n - 1):
            A.add(s + (i - 1,))
    return A


def transfer_submatrix(A: Iterable[ExpVec], B: Iterable[ExpVec]) -> list[list[int]]:
    """Integer matrix with rows indexed by A and columns by B (both in
    ascending deg-lex order); entry = prod_i C(b_i, a_i), which vanishes
    unless a is a submonomial of b."""
    rows = sorted({tuple(e) for e in A}, key=deglex_key)
    cols = sorted({tuple(e) for e in B}, key=deglex_key)
    arities = {len(e) for e in rows} | {len(e) for e in cols}
    if len(arities) > 1:
        raise ArityMismatch(f"mixed arities {sorted(arities)}")
    out = []
    for a in rows:
        row = []
        for b in cols:
            v = 1
            for ai, bi in zip(a, b):
                v *= comb(bi, ai)
                if v == 0:
                    break
            row.append(v)
        out.append(row)
    return out


# ----------------------------------------------------------------------
# Shifting by t^w
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedVectorPoly:
    """f(x + t^w): coefficients are vectors of polynomials in t."""

    field: Field
    arity: int
    dim: int
    terms: Mapping[ExpVec, tuple[DensePoly, ...]]

    def support(self) -> list[ExpVec]:
        return sorted(self.terms, key=deglex_key)

    def coefficient(self, e: ExpVec) -> tuple[DensePoly, ...]:
        zero = DensePoly.zero(self.field)
        return self.terms.get(tuple(e), (zero,) * self.dim)

    def rows(self, monomials: Sequence[ExpVec]) -> list[list[DensePoly]]:
        return [list(self.coefficient(e)) for e in monomials]


def shift_by_weight(f: VectorPoly, w: Sequence[int]) -> ShiftedVectorPoly:
    """Expand f(x_1 + t^(w_1), ..., x_n + t^(w_n)) by the binomial theorem:
    the new coefficient of x^a collects C(b, a) * t^(w(b) - w(a)) times the
    old coefficient of x^b over all supermonomials b in the support."""
    F = f.field
    acc: dict[ExpVec, list[dict[int, Scalar]]] = {}
    for b in f.terms:
        vec = f.terms[b]
        wb = weight_of(w, b)
        for a in submonomials(b):
            binom = 1
            for ai, bi in zip(a, b):
                binom *= comb(bi, ai)
            c = F.of(binom)
            if c == 0:
                continue
            power = wb - weight_of(w, a)
            slot = acc.setdefault(a, [dict() for _ in range(f.dim)])
            for t in range(f.dim):
                if vec[t] == 0:
                    continue
                cur = slot[t]
                v = F.add(cur.get(power, F.zero()), F.mul(c, vec[t]))
                if v == 0:
                    cur.pop(power, None)
                else:
                    cur[power] = v
    terms: dict[ExpVec, tuple[DensePoly, ...]] = {}
    for a, slots in acc.items():
        polys = []
        for cur in slots:
            if cur:
                size = max(cur) + 1
                coeffs = [cur.get(i, F.zero()) for i in range(size)]
                polys.append(DensePoly.make(F, coeffs))
            else:
                polys.append(DensePoly.zero(F))
        if any(not p.is_zero for p in polys):
            terms[a] = tuple(polys)
    return ShiftedVectorPoly(F, f.arity, f.dim, terms)


def cone_closed_basis_after_shift(f: VectorPoly, w: Sequence[int]) -> list[ExpVec]:
    """Cone-closed monomial set whose coefficients form a basis of the
    coefficient span of f(x + t^w) over F(t).

    Requires w to be basis isolating for f.  The set is obtained by running
    find_cone_closed on the least basis, and its validity is verified by
    comparing the rank of the corresponding shifted coefficient rows over
    F(t) against the coefficient rank of f.  Verification failure signals a
    bug or a violated precondition, never an expected outcome.
    """
    report = is_basis_isolating(f, w)
    if not report.isolating:
        raise NotIsolating("weight assignment is not basis isolating for this polynomial")
    A = find_cone_closed(report.basis, f.arity)
    shifted = shift_by_weight(f, w)
    expected = coeff_rank(f)
    got = rank_over_ft(shifted.rows(A))
    if got != expected:
        raise VerificationFailed(f"shifted rows of A have rank {got}, expected {expected}")
    return A
