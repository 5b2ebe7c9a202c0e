"""JSON documents: parsing with schema validation and serialization.

Rationals are written as ``"p/q"`` strings (integers as plain strings).
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from . import linalg as la
from .euler import CF, nonzero_cells
from .geometry import GeometryError, try_cell
from .theta import ThetaComplex, ThetaError, ThetaGenerator
from .toric import CartierData, CartierError, ConditionCError, Fan, FanError, KlyachkoBundle, klyachko_validate

SCHEMA_VERSION = 1
KINDS = ("fan", "cartier", "klyachko", "function", "theta", "replay")
_SCHEMA_FILES = {"fan": "fan.json", "cartier": "cartier.json", "klyachko": "klyachko.json",
                 "function": "function.json", "theta": "theta.json", "replay": "witness.json"}


class InputError(ValueError):
    """Base for all input problems; carries a JSON pointer."""

    category = "input"

    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(message)

    def as_dict(self) -> dict:
        return {"error": self.category, "pointer": self.pointer, "message": str(self)}


class SchemaViolation(InputError):
    category = "schema"


class InvariantViolation(InputError):
    category = "invariant"


def _load_schemas():
    files = resources.files("toric_ccc") / "schemas"
    docs = {}
    for name in ["defs.json", *_SCHEMA_FILES.values()]:
        docs[name] = json.loads((files / name).read_text(encoding="utf-8"))
    registry = Registry().with_resources((name, Resource.from_contents(doc)) for name, doc in docs.items())
    return {kind: Draft202012Validator(docs[f], registry=registry) for kind, f in _SCHEMA_FILES.items()}


_VALIDATORS = None


def validators():
    global _VALIDATORS
    if _VALIDATORS is None:
        _VALIDATORS = _load_schemas()
    return _VALIDATORS


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


def validate_document(doc: Any, kind: str | None = None) -> str:
    if not isinstance(doc, dict):
        raise SchemaViolation("document must be a JSON object")
    kind = kind or doc.get("kind")
    if kind not in _SCHEMA_FILES:
        raise SchemaViolation(f"unknown document kind {kind!r}", "/kind")
    errors = sorted(validators()[kind].iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaViolation(e.message, _pointer(e.absolute_path))
    return kind


# -- rationals ----------------------------------------------------------------


def rat(x) -> Fraction:
    return la.frac(x)


def fmt(x) -> str:
    return la.fmt(la.frac(x))


# -- decoding ----------------------------------------------------------------


def _fan_from(doc, pointer: str) -> Fan:
    from .fixtures import fan as named

    if isinstance(doc, str):
        return named(doc)
    try:
        return Fan(doc["dim"], doc["rays"], doc["cones"], doc.get("name", ""))
    except FanError as exc:
        raise InvariantViolation(str(exc), pointer) from exc


def decode(doc: dict):
    kind = validate_document(doc)
    if kind == "fan":
        return _fan_from(doc, "")
    if kind == "cartier":
        fan = _fan_from(doc["fan"], "/fan")
        try:
            return CartierData(fan, {int(k): v for k, v in doc["m"].items()})
        except CartierError as exc:
            raise InvariantViolation(str(exc), "/m") from exc
    if kind == "klyachko":
        fan = _fan_from(doc["fan"], "/fan")
        filts = {}
        for k, steps in doc["filtrations"].items():
            filts[int(k)] = [(s["jump"], [[rat(x) for x in v] for v in s["basis"]]) for s in steps]
        try:
            b = KlyachkoBundle(fan, doc["rank"], filts)
        except ValueError as exc:
            raise InvariantViolation(str(exc), "/filtrations") from exc
        try:
            klyachko_validate(b)
        except ConditionCError as exc:
            raise InvariantViolation(str(exc), "/filtrations") from exc
        except FanError as exc:
            raise InvariantViolation(str(exc), "/fan") from exc
        return b
    if kind == "function":
        n = doc["dim"]
        terms = []
        for i, t in enumerate(doc["terms"]):
            rows = []
            for key in ("eq", "gt"):
                part = []
                for j, row in enumerate(t.get(key, [])):
                    if len(row) != n + 1:
                        raise SchemaViolation(f"row needs {n + 1} entries", f"/terms/{i}/{key}/{j}")
                    vals = [rat(x) for x in row]
                    part.append((tuple(vals[:n]), vals[n]))
                rows.append(part)
            cell = try_cell(n, rows[0], rows[1])
            if cell is None:
                raise InvariantViolation("empty cell", f"/terms/{i}")
            terms.append((cell, t["weight"]))
        return CF.from_terms(n, terms)
    if kind == "theta":
        fan = _fan_from(doc["fan"], "/fan")
        gens = []
        for i, g in enumerate(doc["generators"]):
            cone = tuple(sorted(g["cone"]))
            if not fan.is_face(cone):
                raise InvariantViolation(f"cone {list(cone)} is not in the fan", f"/generators/{i}/cone")
            if len(g["base"]) != fan.dim:
                raise SchemaViolation("base has the wrong length", f"/generators/{i}/base")
            gens.append(ThetaGenerator(cone, tuple(g["base"]), g["degree"], (g.get("tag", ""),)))
        entries = {}
        for i, e in enumerate(doc["differential"]):
            if e["source"] >= len(gens) or e["target"] >= len(gens):
                raise InvariantViolation("generator index out of range", f"/differential/{i}")
            entries[(e["target"], e["source"])] = rat(e["value"])
        try:
            return ThetaComplex(fan, gens, entries)
        except (ThetaError, AssertionError) as exc:
            raise InvariantViolation(str(exc), "/differential") from exc
    return doc  # replay documents are handled by the CLI


def parse_input(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON: {exc.msg}") from exc
    return decode(doc)


# -- encoding ----------------------------------------------------------------


def encode_fan(fan: Fan) -> dict:
    return {"kind": "fan", "schema_version": SCHEMA_VERSION, "name": fan.name, "dim": fan.dim,
            "rays": [list(r) for r in fan.rays], "cones": [list(c) for c in fan.maximal]}


def _fan_ref(fan: Fan):
    d = encode_fan(fan)
    del d["kind"], d["schema_version"]
    return d


def encode_cartier(L: CartierData) -> dict:
    return {"kind": "cartier", "schema_version": SCHEMA_VERSION, "fan": _fan_ref(L.fan),
            "m": {str(i): list(L.m[c]) for i, c in enumerate(L.fan.maximal)}}


def encode_klyachko(b: KlyachkoBundle) -> dict:
    return {
        "kind": "klyachko",
        "schema_version": SCHEMA_VERSION,
        "fan": _fan_ref(b.fan),
        "rank": b.rank,
        "filtrations": {
            str(i): [{"jump": k, "basis": [[fmt(x) for x in v] for v in sp]} for k, sp in f]
            for i, f in sorted(b.filtrations.items())
        },
    }


def _cell_rows(cell):
    eq = [[fmt(x) for x in a] + [fmt(b)] for a, b in cell.equalities]
    gt = [[fmt(x) for x in a] + [fmt(b)] for a, b in cell.inequalities]
    return eq, gt


def encode_function(f: CF, canonical: bool = False) -> dict:
    terms = []
    items = nonzero_cells(f) if canonical else list(f.terms)
    for cell, w in sorted(items, key=lambda t: (t[0].dim, repr(t[0]))):
        eq, gt = _cell_rows(cell)
        terms.append({"eq": eq, "gt": gt, "weight": int(w)})
    return {"kind": "function", "schema_version": SCHEMA_VERSION, "dim": f.ambient_dim, "terms": terms}


def encode_theta(F: ThetaComplex) -> dict:
    return {
        "kind": "theta",
        "schema_version": SCHEMA_VERSION,
        "fan": _fan_ref(F.fan),
        "generators": [
            {"cone": list(g.cone), "base": list(g.base), "degree": g.degree, "tag": ".".join(map(str, g.tag))}
            for g in F.gens
        ],
        "differential": [
            {"source": s, "target": t, "value": fmt(v)} for (t, s), v in sorted(F.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ],
    }


def encode(obj) -> dict:
    if isinstance(obj, Fan):
        return encode_fan(obj)
    if isinstance(obj, CartierData):
        return encode_cartier(obj)
    if isinstance(obj, KlyachkoBundle):
        return encode_klyachko(obj)
    if isinstance(obj, CF):
        return encode_function(obj)
    if isinstance(obj, ThetaComplex):
        return encode_theta(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dump_cells(f, path: str | None = None) -> dict:
    """Cells with H-descriptions, values and shading labels, for plotting.

    A function is written over disjoint refinement cells, so the document
    parses back to an equal function.  A microlocal sheaf is written as a
    per-cone summary of its stalk cohomology.
    """
    from .theta import MuSheaf

    if isinstance(f, MuSheaf):
        doc = {
            "kind": "mu_summary",
            "schema_version": SCHEMA_VERSION,
            "x": [fmt(v) for v in f.x],
            "stalks": [{"cone": list(face), "betti": {str(k): v for k, v in sorted(vc.betti().items())}}
                       for face, vc in sorted(f.stalks.items())],
        }
    else:
        if f.ambient_dim > 3:
            raise GeometryError("cell dumps are limited to dimension 3")
        doc = encode_function(f, canonical=True)
        for term in doc["terms"]:
            n = f.ambient_dim
            term["dimension"] = n - len(term["eq"])
            term["label"] = "positive" if term["weight"] > 0 else "negative"
    if path is not None:
        write_json(doc, path)
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(doc: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
