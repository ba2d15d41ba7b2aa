"""Depth-3 diagonal circuits: sums of powers of affine forms.

A :class:`DiagonalCircuit` stores terms (c_i, affine form, d_i) and computes
sum c_i * (const_i + <coeffs_i, x>)^(d_i).  Its rank is the linear rank of
the non-constant parts; when that rank r is small the circuit can be
compressed to r variables by a coordinate-selection substitution that keeps
nonzeroness, which is what makes the low-cone identity test effective here:
the partial-derivative space of a k-term diagonal circuit has dimension at
most sum (d_i + 1).

JSON document format::

    {"field": "p:...", "arity": n,
     "terms": [{"c": "3", "const": "1", "coeffs": ["1", "0"], "d": 2}, ...]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import CircuitBuilder, Circuit, Oracle
from .errors import ParseError, RankZero, ValidationError
from .fastmod import kernel_for
from .fields import Field, Scalar
from .linalg import RowReducer
from .pit import NONZERO, ZERO, PitVerdict, low_cone_pit
from .polys import ExpVec, VectorPoly


@dataclass(frozen=True)
class DiagonalTerm:
    c: Scalar
    const: Scalar
    coeffs: tuple[Scalar, ...]
    d: int


@dataclass(frozen=True)
class DiagonalCircuit:
    field: Field
    arity: int
    terms: tuple[DiagonalTerm, ...]

    @staticmethod
    def make(field: Field, arity: int, terms: Sequence[tuple]) -> "DiagonalCircuit":
        rows = []
        for c, const, coeffs, d in terms:
            coeffs = tuple(field.of(x) for x in coeffs)
            if len(coeffs) != arity:
                raise ValidationError(f"affine form has {len(coeffs)} coefficients, arity is {arity}")
            if d < 0:
                raise ValidationError("exponent must be a natural number")
            rows.append(DiagonalTerm(field.of(c), field.of(const), coeffs, d))
        return DiagonalCircuit(field, arity, tuple(rows))

    @property
    def size(self) -> int:
        return sum(self.arity + 2 for _ in self.terms)

    def degree(self) -> int:
        return max((t.d for t in self.terms), default=0)

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        F = self.field
        acc = F.zero()
        for t in self.terms:
            v = t.const
            for a, x in zip(t.coeffs, point):
                if a != 0 and x != 0:
                    v = F.add(v, F.mul(a, x))
            acc = F.add(acc, F.mul(t.c, F.pow(v, t.d)))
        return acc

    def evaluate_many(self, points: Sequence[Sequence[Scalar]]) -> list[Scalar]:
        kern = kernel_for(self.field)
        if kern is None or not points:
            return [self.evaluate(pt) for pt in points]
        cols = [kern.array([pt[i] for pt in points]) for i in range(self.arity)]
        return [int(x) for x in self._evaluate_columns(kern, cols, len(points))]

    def _evaluate_columns(self, kern, cols, n_points: int) -> np.ndarray:
        acc = kern.full(n_points, 0)
        for t in self.terms:
            v = kern.full(n_points, t.const)
            for a, col in zip(t.coeffs, cols):
                if a != 0:
                    v = kern.add(v, kern.mul(np.uint64(a), col))
            acc = kern.add(acc, kern.mul(np.uint64(t.c), kern.pow(v, t.d)))
        return acc

    def as_oracle(self) -> "DiagonalOracle":
        return DiagonalOracle(self)

    def to_circuit(self) -> Circuit:
        """Equivalent gate-level circuit (weighted add -> pow -> weighted add)."""
        b = CircuitBuilder(self.field, self.arity)
        one = b.const(1)
        tops = []
        for t in self.terms:
            parts = [(t.const, one)] + [(a, b.input(i)) for i, a in enumerate(t.coeffs) if a != 0]
            form = b.add(parts)
            tops.append((t.c, b.pow(form, t.d)))
        out = b.add(tops) if tops else b.const(0)
        return b.build(out)


class DiagonalOracle(Oracle):
    def __init__(self, circuit: DiagonalCircuit):
        super().__init__(circuit.arity, circuit.degree(), circuit.field, circuit.evaluate)
        self.circuit = circuit

    def eval_many(self, points):
        self.calls += len(points)
        return self.circuit.evaluate_many(points)

    def eval_grid(self, nodes_per_var: int):
        kern = kernel_for(self.field)
        n = self.arity
        if kern is None:
            return super().eval_grid(nodes_per_var)
        count = nodes_per_var ** n
        self.calls += count
        idx = np.arange(count, dtype=np.uint64)
        m = np.uint64(nodes_per_var)
        cols = []
        for i in range(n):
            stride = np.uint64(nodes_per_var ** (n - 1 - i))
            cols.append((idx // stride) % m)
        return self.circuit._evaluate_columns(kern, cols, count)


# ----------------------------------------------------------------------
# Rank and arity reduction
# ----------------------------------------------------------------------


def rank_of_forms(circuit: DiagonalCircuit) -> tuple[int, tuple[int, ...]]:
    """Rank of the matrix of non-constant parts, plus the 1-based indices of
    the first-encountered independent rows (matching the f_1..f_k naming)."""
    red = RowReducer(circuit.field)
    basis_rows = []
    for i, t in enumerate(circuit.terms):
        if red.insert(list(t.coeffs)):
            basis_rows.append(i + 1)
    return red.rank, tuple(basis_rows)


@dataclass(frozen=True)
class PsiMap:
    """Coordinate-selection substitution: x_j -> y_(pos(j)) for j in the
    pivot column set, x_j -> 0 otherwise."""

    arity: int
    columns: tuple[int, ...]  # 0-based pivot columns, ascending

    @property
    def rank(self) -> int:
        return len(self.columns)

    def apply(self, circuit: DiagonalCircuit) -> DiagonalCircuit:
        """The r-variate circuit C(Psi(x)); constants are untouched."""
        sel = list(self.columns)
        terms = [
            DiagonalTerm(t.c, t.const, tuple(t.coeffs[j] for j in sel), t.d)
            for t in circuit.terms
        ]
        return DiagonalCircuit(circuit.field, len(sel), tuple(terms))


def build_psi(circuit: DiagonalCircuit) -> PsiMap:
    """Pivot-column selection: greedy elimination on the basis rows yields a
    column set J with the basis rows restricted to J invertible, so the
    images of the basis forms stay linearly independent."""
    red = RowReducer(circuit.field)
    for t in circuit.terms:
        red.insert(list(t.coeffs))
    if red.rank == 0:
        raise RankZero("all forms are constant")
    return PsiMap(circuit.arity, tuple(sorted(red.pivots)))


def pd_dim_bound(circuit: DiagonalCircuit) -> int:
    """sum (d_i + 1): the partial-derivative-space dimension bound for sums
    of powers of affine forms."""
    return sum(t.d + 1 for t in circuit.terms)


def diag_pit(circuit: DiagonalCircuit) -> PitVerdict:
    """Deterministic blackbox identity test for a diagonal circuit.

    Compresses the circuit to its rank via the coordinate selection (which
    preserves nonzeroness), then runs the low-cone test with the
    sum-of-(d_i + 1) promise on the reduced oracle.  A Nonzero witness is an
    exponent vector of the reduced, r-variate polynomial.
    """
    circuit.field.require_size_over(circuit.degree(), "diagonal identity test")
    red = RowReducer(circuit.field)
    for t in circuit.terms:
        red.insert(list(t.coeffs))
    if red.rank == 0:
        # Constant polynomial: evaluate once at the origin.
        v = circuit.evaluate([circuit.field.zero()] * circuit.arity)
        if v == 0:
            return PitVerdict(ZERO, None, None, 1, 1)
        return PitVerdict(NONZERO, (), v, 1, 1)
    psi = PsiMap(circuit.arity, tuple(sorted(red.pivots)))
    reduced = psi.apply(circuit)
    return low_cone_pit(reduced.as_oracle(), pd_dim_bound(circuit))


# ----------------------------------------------------------------------
# Componentwise powers of one affine form over F^k
# ----------------------------------------------------------------------


def diag_power_vectorpoly(field: Field, rows: Sequence[Sequence[Scalar]], d: int) -> VectorPoly:
    """The vector-valued polynomial (1 + a_t1 x_1 + ... + a_tn x_n)^d, one
    coordinate per row of ``rows``, with F^k multiplied componentwise: the
    coefficient of x^e has t-th entry multinomial(d; e) * prod_j a_tj^e_j.
    Requires characteristic 0 or > d."""
    field.require_size_over(d, "componentwise affine power")
    mat = [[field.of(x) for x in row] for row in rows]
    k = len(mat)
    n = len(mat[0]) if k else 0
    for row in mat:
        if len(row) != n:
            raise ValidationError("rows must share one length")

    from math import comb

    items: list[tuple[ExpVec, list[Scalar]]] = []

    def multinomial(e: ExpVec) -> int:
        out = 1
        left = d
        for x in e:
            out *= comb(left, x)
            left -= x
        return out

    def rec(i: int, remaining: int, prefix: list[int]) -> None:
        if i == n:
            e = tuple(prefix)
            m = field.of(multinomial(e))
            vec = []
            for t in range(k):
                v = m
                for j, x in enumerate(e):
                    if x:
                        v = field.mul(v, field.pow(mat[t][j], x))
                vec.append(v)
            items.append((e, vec))
            return
        for x in range(remaining + 1):
            prefix.append(x)
            rec(i + 1, remaining - x, prefix)
            prefix.pop()

    rec(0, d, [])
    return VectorPoly.make(field, n, k, items)


# ----------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------


def diagonal_to_json(circuit: DiagonalCircuit) -> str:
    doc = {
        "field": circuit.field.spec,
        "arity": circuit.arity,
        "terms": [
            {
                "c": circuit.field.render(t.c),
                "const": circuit.field.render(t.const),
                "coeffs": [circuit.field.render(a) for a in t.coeffs],
                "d": t.d,
            }
            for t in circuit.terms
        ],
    }
    return json.dumps(doc, separators=(", ", ": "))


def diagonal_from_json(text: str) -> DiagonalCircuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    try:
        field = Field.from_spec(doc["field"])
        arity = int(doc["arity"])
        terms = [(row["c"], row["const"], row["coeffs"], int(row["d"])) for row in doc["terms"]]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    return DiagonalCircuit.make(field, arity, terms)
