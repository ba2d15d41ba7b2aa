"""Seeded random instance generators.

Instances are parameterized the way the restricted circuit classes are:
arity n, term count k, power cap a, sparse-factor degree cap b, individual
degree caps.  Every generator takes a ``random.Random`` so suites are
reproducible from a single seed.
"""

from __future__ import annotations

import random

from .circuits import Circuit, CircuitBuilder
from .diagonal import DiagonalCircuit
from .fields import DensePoly, Field
from .hsg import HsgTuple
from .polys import MultiPoly, VectorPoly


def random_exponent(rng: random.Random, arity: int, degree: int) -> tuple[int, ...]:
    e = [0] * arity
    for _ in range(rng.randint(0, degree)):
        e[rng.randrange(arity)] += 1
    return tuple(e)


def random_multipoly(rng: random.Random, field: Field, arity: int, degree: int, terms: int) -> MultiPoly:
    items = []
    for _ in range(terms):
        c = field.random(rng)
        if c == 0:
            continue
        items.append((random_exponent(rng, arity, degree), c))
    return MultiPoly.make(field, arity, items)


def random_vectorpoly(rng: random.Random, field: Field, arity: int, dim: int, degree: int, terms: int) -> VectorPoly:
    items = []
    for _ in range(terms):
        vec = [field.random(rng) for _ in range(dim)]
        items.append((random_exponent(rng, arity, degree), vec))
    return VectorPoly.make(field, arity, dim, items)


def random_diagonal(
    rng: random.Random,
    field: Field,
    arity: int,
    terms: int,
    max_power: int,
    force_zero: bool = False,
) -> DiagonalCircuit:
    """Random sum of powers of affine forms.  With ``force_zero`` the terms
    are paired with negated copies, producing an identically zero circuit of
    at most ``terms`` summands."""
    rows = []
    count = max(1, terms // 2) if force_zero else terms
    for _ in range(count):
        c = field.random(rng)
        const = field.random(rng)
        coeffs = [field.random(rng) for _ in range(arity)]
        d = rng.randint(1, max_power)
        rows.append((c, const, coeffs, d))
        if force_zero:
            rows.append((field.neg(c), const, list(coeffs), d))
    return DiagonalCircuit.make(field, arity, rows)


def random_diagonal_depth4(
    rng: random.Random,
    field: Field,
    arity: int,
    terms: int,
    max_power: int,
    factor_degree: int,
    factor_terms: int,
) -> Circuit:
    """Random sum-of-powers-of-sparse-polynomials circuit: ``terms`` summands
    c_i * f_i^(a_i) with a_i <= max_power and each f_i a sparse polynomial of
    degree <= factor_degree."""
    b = CircuitBuilder(field, arity)
    tops = []
    for _ in range(terms):
        f = random_multipoly(rng, field, arity, factor_degree, factor_terms)
        gid = b.poly(f)
        tops.append((field.random(rng), b.pow(gid, rng.randint(1, max_power))))
    return b.build(b.add(tops) if tops else b.const(0))


def random_circuit(rng: random.Random, field: Field, arity: int, gates: int, max_degree: int) -> Circuit:
    """Random DAG with syntactic degree kept within ``max_degree``."""
    b = CircuitBuilder(field, arity)
    degs: dict[int, int] = {}
    ids: list[int] = []
    for i in range(arity):
        gid = b.input(i)
        degs[gid] = 1
        ids.append(gid)
    gid = b.const(field.random(rng))
    degs[gid] = 0
    ids.append(gid)
    for _ in range(gates):
        kind = rng.choice(("add", "mul", "pow", "const"))
        if kind == "const":
            gid = b.const(field.random(rng))
            degs[gid] = 0
        elif kind == "add":
            picks = rng.sample(ids, min(len(ids), rng.randint(1, 3)))
            gid = b.add([(field.random(rng), c) for c in picks])
            degs[gid] = max(degs[c] for c in picks)
        elif kind == "mul":
            picks = [c for c in rng.sample(ids, min(len(ids), 2))]
            if sum(degs[c] for c in picks) > max_degree:
                continue
            gid = b.mul(picks)
            degs[gid] = sum(degs[c] for c in picks)
        else:
            child = rng.choice(ids)
            cap = max_degree // max(1, degs[child])
            if cap < 1:
                continue
            e = rng.randint(1, min(3, cap))
            gid = b.pow(child, e)
            degs[gid] = degs[child] * e
        ids.append(gid)
    return b.build(ids[-1])


def random_hsg(rng: random.Random, field: Field, arity: int, degree: int) -> HsgTuple:
    """Random tuple of nonzero univariates whose maximum degree is exactly
    ``degree`` (the first entry carries it)."""
    polys = []
    for i in range(arity):
        while True:
            deg = degree if i == 0 else rng.randint(0, degree)
            coeffs = [field.random(rng) for _ in range(deg)]
            lead = field.random(rng)
            while lead == 0:
                lead = field.random(rng)
            p = DensePoly.make(field, coeffs + [lead])
            if not p.is_zero:
                polys.append(p)
                break
    return HsgTuple.make(field, polys)
