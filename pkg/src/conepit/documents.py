"""JSON codecs for polynomial-valued CLI documents.

All scalars travel as decimal strings (``"3"``, ``"-3/4"``) so rational
values stay exact.  Formats:

* polynomial: ``{"field", "arity", "terms": [{"exp": [..], "coef": ".."}]}``
* vector polynomial: ``{"field", "arity", "dim",
  "terms": [{"exp": [..], "coef": ["..", ..]}]}``
* monomial set: ``{"arity", "vectors": [[..], ..]}``
* product terms (for the power rewriter): ``{"field", "arity",
  "terms": [[poly-terms, poly-terms, ..], ..]}`` where each inner entry is
  the term array of one factor.
"""

from __future__ import annotations

import json

from .errors import ParseError
from .fields import Field
from .polys import ExpVec, MultiPoly, VectorPoly


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def multipoly_to_obj(p: MultiPoly) -> dict:
    return {
        "field": p.field.spec,
        "arity": p.arity,
        "terms": [{"exp": list(e), "coef": p.field.render(p.terms[e])} for e in p.support()],
    }


def multipoly_to_json(p: MultiPoly) -> str:
    return json.dumps(multipoly_to_obj(p), separators=(", ", ": "))


def _poly_from_parts(field: Field, arity: int, rows) -> MultiPoly:
    items = []
    for row in rows:
        try:
            items.append((tuple(int(x) for x in row["exp"]), row["coef"]))
        except KeyError as exc:
            raise ParseError(f"term missing key {exc.args[0]!r}") from exc
    return MultiPoly.make(field, arity, items)


def multipoly_from_json(text: str) -> MultiPoly:
    doc = _load(text)
    try:
        return _poly_from_parts(Field.from_spec(doc["field"]), int(doc["arity"]), doc["terms"])
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc


def vectorpoly_to_json(f: VectorPoly) -> str:
    doc = {
        "field": f.field.spec,
        "arity": f.arity,
        "dim": f.dim,
        "terms": [
            {"exp": list(e), "coef": [f.field.render(x) for x in f.terms[e]]} for e in f.support()
        ],
    }
    return json.dumps(doc, separators=(", ", ": "))


def vectorpoly_from_json(text: str) -> VectorPoly:
    doc = _load(text)
    try:
        field = Field.from_spec(doc["field"])
        arity = int(doc["arity"])
        dim = int(doc["dim"])
        items = [(tuple(int(x) for x in row["exp"]), row["coef"]) for row in doc["terms"]]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    return VectorPoly.make(field, arity, dim, items)


def monomial_set_from_json(text: str) -> tuple[int, list[ExpVec]]:
    doc = _load(text)
    try:
        arity = int(doc["arity"])
        vectors = [tuple(int(x) for x in row) for row in doc["vectors"]]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    for v in vectors:
        if len(v) != arity:
            raise ParseError(f"vector {v} does not have arity {arity}")
    return arity, vectors


def product_terms_from_json(text: str) -> list[list[MultiPoly]]:
    doc = _load(text)
    try:
        field = Field.from_spec(doc["field"])
        arity = int(doc["arity"])
        groups = doc["terms"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    return [[_poly_from_parts(field, arity, factor) for factor in group] for group in groups]
