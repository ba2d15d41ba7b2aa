"""Arithmetic-circuit DAG, exact evaluation, substitution, and blackbox oracles.

A circuit is a list of gates in topological order (ids are the list
positions, strictly increasing, children always precede parents):

* ``input``: reads one of the n variables;
* ``const``: a field constant;
* ``add``: weighted sum of child gates (edge weights are field scalars);
* ``mul``: product of child gates;
* ``pow``: a child gate raised to a fixed natural exponent.

``pow`` is first-class so that sums of powers keep their size accounting
honest, and ``add`` carries edge weights so linear combinations stay one
gate.  Size is gate count plus edge count.

The JSON document format (UTF-8 text) is::

    {"field": "q" | "p:<prime>", "arity": n,
     "gates": [{"id": 0, "kind": "input", "var": 0},
               {"id": 1, "kind": "const", "value": "5"},
               {"id": 2, "kind": "add", "children": [0, 1], "weights": ["1", "2"]},
               {"id": 3, "kind": "pow", "children": [2], "exp": 3},
               {"id": 4, "kind": "mul", "children": [0, 3]}],
     "output": 4}

Scalars travel as decimal strings so rationals stay exact.  ``parse`` and
``serialize`` are mutually inverse on valid documents.

:class:`Oracle` is the evaluation-only view of a polynomial: arity, a degree
bound, and a point-evaluation capability.  :func:`dense_expand` recovers the
full sparse polynomial of an oracle by grid interpolation; it is the
brute-force ground truth the rest of the package is tested against.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    FieldMismatch,
    ParseError,
    TooLarge,
    ValidationError,
)
from .fastmod import kernel_for
from .fields import DensePoly, Field, Scalar
from .polys import ExpVec, MultiPoly

DENSE_EXPAND_GUARD = 10_000_000

GATE_KINDS = ("input", "const", "add", "mul", "pow")


@dataclass(frozen=True)
class Gate:
    id: int
    kind: str
    var: int | None = None
    value: Scalar | None = None
    children: tuple[int, ...] = ()
    weights: tuple[Scalar, ...] | None = None
    exp: int | None = None


@dataclass(frozen=True)
class Circuit:
    field: Field
    arity: int
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self) -> None:
        seen: set[int] = set()
        last = -1
        for g in self.gates:
            if g.kind not in GATE_KINDS:
                raise ValidationError(f"gate {g.id}: unknown kind {g.kind!r}")
            if g.id <= last:
                raise ValidationError(f"gate ids must be strictly increasing (saw {g.id} after {last})")
            last = g.id
            for c in g.children:
                if c not in seen:
                    raise ValidationError(f"gate {g.id}: child {c} does not precede it")
            if g.kind == "input":
                if g.var is None or not 0 <= g.var < self.arity:
                    raise ValidationError(f"gate {g.id}: variable index {g.var} out of range")
            elif g.kind == "const":
                if g.value is None:
                    raise ValidationError(f"gate {g.id}: const without value")
            elif g.kind in ("add", "mul"):
                if not g.children:
                    raise ValidationError(f"gate {g.id}: {g.kind} needs at least one child")
                if g.kind == "add" and g.weights is not None and len(g.weights) != len(g.children):
                    raise ValidationError(f"gate {g.id}: {len(g.weights)} weights for {len(g.children)} children")
            elif g.kind == "pow":
                if len(g.children) != 1 or g.exp is None or g.exp < 0:
                    raise ValidationError(f"gate {g.id}: pow needs one child and exp >= 0")
            seen.add(g.id)
        if self.output not in seen:
            raise ValidationError(f"output gate {self.output} does not exist")

    @property
    def size(self) -> int:
        """Gate count plus edge count."""
        return len(self.gates) + sum(len(g.children) for g in self.gates)

    # -- evaluation ----------------------------------------------------

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.arity:
            raise ArityMismatch(f"point has {len(point)} coordinates, arity is {self.arity}")
        F = self.field
        vals: dict[int, Scalar] = {}
        for g in self.gates:
            if g.kind == "input":
                v = point[g.var]
            elif g.kind == "const":
                v = g.value
            elif g.kind == "add":
                ws = g.weights or (F.one(),) * len(g.children)
                v = F.zero()
                for w, c in zip(ws, g.children):
                    v = F.add(v, F.mul(w, vals[c]))
            elif g.kind == "mul":
                v = F.one()
                for c in g.children:
                    v = F.mul(v, vals[c])
            else:  # pow
                v = F.pow(vals[g.children[0]], g.exp)
            vals[g.id] = v
        return vals[self.output]

    def evaluate_many(self, points: Sequence[Sequence[Scalar]]) -> list[Scalar]:
        kern = kernel_for(self.field)
        if kern is None or not points:
            return [self.evaluate(pt) for pt in points]
        cols = [kern.array([pt[i] for pt in points]) for i in range(self.arity)]
        out = self._evaluate_columns(kern, cols, len(points))
        return [int(x) for x in out]

    def _evaluate_columns(self, kern, cols: list[np.ndarray], n_points: int) -> np.ndarray:
        vals: dict[int, np.ndarray] = {}
        for g in self.gates:
            if g.kind == "input":
                v = cols[g.var]
            elif g.kind == "const":
                v = kern.full(n_points, g.value)
            elif g.kind == "add":
                ws = g.weights or (1,) * len(g.children)
                v = kern.full(n_points, 0)
                for w, c in zip(ws, g.children):
                    v = kern.add(v, kern.mul(np.uint64(w), vals[c]))
            elif g.kind == "mul":
                v = vals[g.children[0]]
                for c in g.children[1:]:
                    v = kern.mul(v, vals[c])
            else:
                v = kern.pow(vals[g.children[0]], g.exp)
            vals[g.id] = v
        return vals[self.output]

    # -- structure -----------------------------------------------------

    def syntactic_degree(self) -> int:
        """Bottom-up degree: input 1, const 0, add max, mul sum, pow child*exp."""
        deg: dict[int, int] = {}
        for g in self.gates:
            if g.kind == "input":
                deg[g.id] = 1
            elif g.kind == "const":
                deg[g.id] = 0
            elif g.kind == "add":
                deg[g.id] = max(deg[c] for c in g.children)
            elif g.kind == "mul":
                deg[g.id] = sum(deg[c] for c in g.children)
            else:
                deg[g.id] = deg[g.children[0]] * g.exp
        return deg[self.output]

    def substitute(self, sigma: Mapping[int, MultiPoly]) -> "Circuit":
        """Replace variable i by sigma[i]; variables not in sigma map to
        themselves inside the images' variable space.

        All images must share one field (the circuit's) and one arity m;
        the result is an arity-m circuit built by splicing one sub-DAG per
        substituted variable.
        """
        images = list(sigma.values())
        for img in images:
            if img.field != self.field:
                raise FieldMismatch(f"image over {img.field.spec}, circuit over {self.field.spec}")
        arities = {img.arity for img in images}
        if len(arities) > 1:
            raise ArityMismatch(f"images have mixed arities {sorted(arities)}")
        m = arities.pop() if arities else self.arity
        for i in range(self.arity):
            if i not in sigma and i >= m:
                raise ArityMismatch(f"variable {i} is not substituted and does not exist in arity {m}")

        builder = CircuitBuilder(self.field, m)
        var_entry: dict[int, int] = {}
        for i in sorted(sigma):
            var_entry[i] = builder.poly(sigma[i])

        remap: dict[int, int] = {}
        for g in self.gates:
            if g.kind == "input":
                remap[g.id] = var_entry[g.var] if g.var in var_entry else builder.input(g.var)
            elif g.kind == "const":
                remap[g.id] = builder.const(g.value)
            elif g.kind == "add":
                ws = g.weights or (self.field.one(),) * len(g.children)
                remap[g.id] = builder.add([(w, remap[c]) for w, c in zip(ws, g.children)])
            elif g.kind == "mul":
                remap[g.id] = builder.mul([remap[c] for c in g.children])
            else:
                remap[g.id] = builder.pow(remap[g.children[0]], g.exp)
        return builder.build(remap[self.output])

    def with_field(self, field: Field) -> "Circuit":
        """Reinterpret the circuit over another field (constants are coerced)."""
        if field == self.field:
            return self
        gates = []
        for g in self.gates:
            value = field.of(g.value) if g.value is not None else None
            weights = tuple(field.of(w) for w in g.weights) if g.weights is not None else None
            gates.append(Gate(g.id, g.kind, g.var, value, g.children, weights, g.exp))
        return Circuit(field, self.arity, tuple(gates), self.output)

    @staticmethod
    def from_multipoly(poly: MultiPoly) -> "Circuit":
        builder = CircuitBuilder(poly.field, poly.arity)
        return builder.build(builder.poly(poly))


class CircuitBuilder:
    """Append-only gate list with memoized input gates."""

    def __init__(self, field: Field, arity: int):
        self.field = field
        self.arity = arity
        self.gates: list[Gate] = []
        self._inputs: dict[int, int] = {}

    def _push(self, gate: Gate) -> int:
        self.gates.append(gate)
        return gate.id

    def input(self, var: int) -> int:
        if var not in self._inputs:
            self._inputs[var] = self._push(Gate(len(self.gates), "input", var=var))
        return self._inputs[var]

    def const(self, value: int | Fraction | str) -> int:
        return self._push(Gate(len(self.gates), "const", value=self.field.of(value)))

    def add(self, weighted_children: Sequence[tuple[Scalar, int]]) -> int:
        ws = tuple(self.field.of(w) for w, _ in weighted_children)
        cs = tuple(c for _, c in weighted_children)
        return self._push(Gate(len(self.gates), "add", children=cs, weights=ws))

    def mul(self, children: Sequence[int]) -> int:
        return self._push(Gate(len(self.gates), "mul", children=tuple(children)))

    def pow(self, child: int, exp: int) -> int:
        return self._push(Gate(len(self.gates), "pow", children=(child,), exp=exp))

    def poly(self, p: MultiPoly) -> int:
        """Splice gates computing a sparse polynomial; returns its gate id."""
        if p.arity != self.arity:
            raise ArityMismatch(f"polynomial arity {p.arity}, builder arity {self.arity}")
        if p.is_zero:
            return self.const(0)
        summands: list[tuple[Scalar, int]] = []
        for e in p.support():
            factors = []
            for i, x in enumerate(e):
                if x == 1:
                    factors.append(self.input(i))
                elif x > 1:
                    factors.append(self.pow(self.input(i), x))
            if not factors:
                gid = self.const(1)
            elif len(factors) == 1:
                gid = factors[0]
            else:
                gid = self.mul(factors)
            summands.append((p.terms[e], gid))
        if len(summands) == 1 and summands[0][0] == self.field.one():
            return summands[0][1]
        return self.add(summands)

    def build(self, output: int) -> Circuit:
        return Circuit(self.field, self.arity, tuple(self.gates), output)


# ----------------------------------------------------------------------
# Oracles
# ----------------------------------------------------------------------


class Oracle:
    """Evaluation-only view of a polynomial: arity n, degree bound d, field.

    ``calls`` counts every base evaluation ever requested, including batch
    and grid evaluations point by point.
    """

    def __init__(self, arity: int, degree: int, field: Field, fn: Callable[[Sequence[Scalar]], Scalar]):
        self.arity = arity
        self.degree = degree
        self.field = field
        self._fn = fn
        self.calls = 0

    @staticmethod
    def from_circuit(circuit: Circuit, degree: int | None = None) -> "CircuitOracle":
        return CircuitOracle(circuit, degree)

    @staticmethod
    def from_multipoly(poly: MultiPoly, degree: int | None = None) -> "Oracle":
        d = poly.degree() if degree is None else degree
        return Oracle(poly.arity, d, poly.field, poly.evaluate)

    @staticmethod
    def linear(a: Scalar, o1: "Oracle", b: Scalar, o2: "Oracle") -> "Oracle":
        """The oracle a*o1 + b*o2 (evaluations are combined pointwise)."""
        if o1.arity != o2.arity:
            raise ArityMismatch("oracles of different arity")
        F = o1.field
        return Oracle(
            o1.arity,
            max(o1.degree, o2.degree),
            F,
            lambda pt: F.add(F.mul(a, o1.eval_point(pt)), F.mul(b, o2.eval_point(pt))),
        )

    def eval_point(self, point: Sequence[Scalar]) -> Scalar:
        self.calls += 1
        return self._fn(point)

    def eval_many(self, points: Sequence[Sequence[Scalar]]) -> list[Scalar]:
        self.calls += len(points)
        return [self._fn(pt) for pt in points]

    def eval_grid(self, nodes_per_var: int) -> Sequence[Scalar]:
        """Values on the grid {0..m-1}^n in row-major order (x1 slowest)."""
        count = nodes_per_var ** self.arity
        self.calls += count
        nodes = [self.field.of(i) for i in range(nodes_per_var)]
        return [self._fn(pt) for pt in itertools.product(nodes, repeat=self.arity)]


class CircuitOracle(Oracle):
    def __init__(self, circuit: Circuit, degree: int | None = None):
        d = circuit.syntactic_degree() if degree is None else degree
        super().__init__(circuit.arity, d, circuit.field, circuit.evaluate)
        self.circuit = circuit

    def eval_many(self, points: Sequence[Sequence[Scalar]]) -> list[Scalar]:
        self.calls += len(points)
        return self.circuit.evaluate_many(points)

    def eval_grid(self, nodes_per_var: int) -> Sequence[Scalar]:
        kern = kernel_for(self.field)
        n = self.arity
        count = nodes_per_var ** n
        if kern is None:
            return super().eval_grid(nodes_per_var)
        self.calls += count
        idx = np.arange(count, dtype=np.uint64)
        m = np.uint64(nodes_per_var)
        cols = []
        for i in range(n):
            stride = np.uint64(nodes_per_var ** (n - 1 - i))
            cols.append((idx // stride) % m)
        return self.circuit._evaluate_columns(kern, cols, count)


# ----------------------------------------------------------------------
# Dense expansion (grid interpolation)
# ----------------------------------------------------------------------


def _lagrange_coefficient_rows(nodes: list[Scalar], field: Field) -> list[list[Scalar]]:
    """Row t holds, for each node j, the coefficient of x^t in the Lagrange
    basis polynomial through node j.  Multiplying values by these rows
    converts point values to polynomial coefficients."""
    m = len(nodes)
    rows = [[field.zero()] * m for _ in range(m)]
    for j in range(m):
        basis = DensePoly.const(field, 1)
        denom = field.one()
        for l, node in enumerate(nodes):
            if l == j:
                continue
            basis = basis.mul(DensePoly.make(field, [field.neg(node), field.one()]))
            denom = field.mul(denom, field.sub(nodes[j], node))
        inv = field.inv(denom)
        for t in range(m):
            rows[t][j] = field.mul(inv, basis.coefficient(t))
    return rows


def dense_expand(oracle: Oracle) -> MultiPoly:
    """The unique polynomial of individual degree <= d agreeing with the
    oracle on the grid {0..d}^n, by per-variable interpolation.  Exact.

    Requires (d+1)^n within the enumeration guard and a field with more
    than d elements.
    """
    n, d, F = oracle.arity, oracle.degree, oracle.field
    width = d + 1
    count = width ** n
    if count > DENSE_EXPAND_GUARD:
        raise TooLarge(f"dense expansion grid {width}^{n} exceeds {DENSE_EXPAND_GUARD}")
    F.require_size_over(d, "dense_expand interpolation grid")

    nodes = [F.of(i) for i in range(width)]
    coeff_rows = _lagrange_coefficient_rows(nodes, F)
    values = oracle.eval_grid(width)

    if isinstance(values, np.ndarray):
        kern = kernel_for(F)
        arr = values
        rows_u = [[int(x) for x in row] for row in coeff_rows]
        for axis in range(n):
            stride = width ** (n - 1 - axis)
            shaped = arr.reshape(-1, width, stride)
            out = np.zeros_like(shaped)
            for t in range(width):
                acc = out[:, t, :]
                for j in range(width):
                    w = rows_u[t][j]
                    if w == 0:
                        continue
                    acc = kern.add(acc, kern.mul(np.uint64(w), shaped[:, j, :]))
                out[:, t, :] = acc
            arr = out.reshape(-1)
        flat = arr
        nz = np.nonzero(flat)[0]
        terms: dict[ExpVec, Scalar] = {}
        for pos in nz:
            pos = int(pos)
            e = []
            for i in range(n):
                stride = width ** (n - 1 - i)
                e.append((pos // stride) % width)
            terms[tuple(e)] = int(flat[pos])
        return MultiPoly(F, n, terms)

    vals = list(values)
    for axis in range(n):
        stride = width ** (n - 1 - axis)
        out = [F.zero()] * count
        block = width * stride
        for base in range(0, count, block):
            for off in range(stride):
                line = [vals[base + off + j * stride] for j in range(width)]
                for t in range(width):
                    acc = F.zero()
                    for j in range(width):
                        w = coeff_rows[t][j]
                        if w != 0 and line[j] != 0:
                            acc = F.add(acc, F.mul(w, line[j]))
                    out[base + off + t * stride] = acc
        vals = out
    terms = {}
    for pos, c in enumerate(vals):
        if c == 0:
            continue
        e = []
        for i in range(n):
            stride = width ** (n - 1 - i)
            e.append((pos // stride) % width)
        terms[tuple(e)] = c
    return MultiPoly(F, n, terms)


# ----------------------------------------------------------------------
# JSON serialization
# ----------------------------------------------------------------------


def serialize(circuit: Circuit) -> str:
    gates = []
    for g in circuit.gates:
        row: dict = {"id": g.id, "kind": g.kind}
        if g.kind == "input":
            row["var"] = g.var
        elif g.kind == "const":
            row["value"] = circuit.field.render(g.value)
        elif g.kind == "add":
            row["children"] = list(g.children)
            if g.weights is not None:
                row["weights"] = [circuit.field.render(w) for w in g.weights]
        elif g.kind == "mul":
            row["children"] = list(g.children)
        else:
            row["children"] = list(g.children)
            row["exp"] = g.exp
        gates.append(row)
    doc = {"field": circuit.field.spec, "arity": circuit.arity, "gates": gates, "output": circuit.output}
    return json.dumps(doc, separators=(", ", ": "))


def parse(text: str) -> Circuit:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return circuit_from_document(doc)


def circuit_from_document(doc) -> Circuit:
    if not isinstance(doc, dict):
        raise ParseError("circuit document must be a JSON object")
    try:
        field = Field.from_spec(doc["field"])
        arity = int(doc["arity"])
        raw_gates = doc["gates"]
        output = int(doc["output"])
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    gates = []
    for row in raw_gates:
        try:
            kind = row["kind"]
            gid = int(row["id"])
        except KeyError as exc:
            raise ParseError(f"gate missing key {exc.args[0]!r}") from exc
        if kind not in GATE_KINDS:
            raise ParseError(f"gate {gid}: unknown kind {kind!r}")
        var = int(row["var"]) if "var" in row else None
        value = field.of(row["value"]) if "value" in row else None
        children = tuple(int(c) for c in row.get("children", ()))
        weights = tuple(field.of(w) for w in row["weights"]) if "weights" in row else None
        exp = int(row["exp"]) if "exp" in row else None
        gates.append(Gate(gid, kind, var, value, children, weights, exp))
    return Circuit(field, arity, tuple(gates), output)


def load_circuit(path: str) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def save_circuit(circuit: Circuit, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(circuit))
        fh.write("\n")
