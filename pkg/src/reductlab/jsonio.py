"""Loading and dumping the UTF-8 JSON documents used at the command line.

Schemas:
  algebra   {"name": s, "size": n, "ops": [{"symbol": s, "arity": k,
             "table": [..]}], "tags": {"identity": i?, "zero": i?}}
  filter    {"index_size": n, "sets": [[i, ..], ..], "close": bool}
  hom       {"factors": [ref, ..], "codomain": ref, "table": [..]}
  relation  {"signature": ref | [[name, arity], ..], "lhs": s, "rhs": s,
             "z_arity": n, "name": s?}
  matrix    {"rows": m, "cols": m, "field": "rational" | p,
             "entries": ["a/b" | int, ..]}

File references inside hom and relation documents resolve relative to the
referring document's directory.  Tables are flat little-endian mixed radix.
"""

from __future__ import annotations

import json
import os

from .eklab import ExactMatrix, field_named
from .redprod import Factorization, ProductFamily
from .relcheck import FormalRelation
from .setfam import Filter, IndexSet, SubsetFamily, close_to_filter, is_filter
from .ualg import FiniteAlgebra, HomTable, Signature
from .util import InputError, PropertyViolation, mask_of


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"document not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise InputError(f"{where}: missing key {key!r}")
    return doc[key]


def algebra_from_doc(doc: dict, where: str = "algebra document") -> FiniteAlgebra:
    size = _need(doc, "size", where)
    ops = _need(doc, "ops", where)
    symbols = []
    tables = {}
    for op in ops:
        sym = _need(op, "symbol", where)
        arity = _need(op, "arity", where)
        table = _need(op, "table", where)
        if len(table) != size ** arity:
            raise InputError(
                f"{where}: table for {sym!r} has {len(table)} entries, expected {size ** arity}"
            )
        symbols.append((sym, arity))
        tables[sym] = table
    tags = doc.get("tags", {})
    try:
        return FiniteAlgebra(
            Signature.of(*symbols), size, tables,
            name=doc.get("name", ""),
            identity=tags.get("identity"), zero=tags.get("zero"),
        )
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from exc


def load_algebra(path: str) -> FiniteAlgebra:
    return algebra_from_doc(_load_json(path), where=path)


def algebra_to_doc(a: FiniteAlgebra) -> dict:
    tags = {}
    if a.identity is not None:
        tags["identity"] = a.identity
    if a.zero is not None:
        tags["zero"] = a.zero
    return {
        "name": a.name,
        "size": a.size,
        "ops": [
            {"symbol": sym, "arity": arity, "table": list(a.tables[sym])}
            for sym, arity in a.signature.symbols
        ],
        "tags": tags,
    }


def filter_from_doc(doc: dict, where: str = "filter document") -> Filter:
    size = _need(doc, "index_size", where)
    sets = _need(doc, "sets", where)
    parent = IndexSet(size)
    masks = []
    for s in sets:
        for i in s:
            if not 0 <= i < size:
                raise InputError(f"{where}: index {i} out of range")
        masks.append(mask_of(s))
    family = SubsetFamily.of(parent, masks)
    if doc.get("close", True):
        return close_to_filter(family)
    check = is_filter(family)
    if not check:
        raise InputError(f"{where}: sets do not form a filter ({check.describe()})")
    return Filter.from_members(family)


def load_filter(path: str) -> Filter:
    return filter_from_doc(_load_json(path), where=path)


def load_hom(path: str, check: bool = True) -> tuple[ProductFamily, HomTable]:
    """Load a homomorphism document; pass check=False to accept a plain set
    map (used by filter detection, which works at the set level)."""
    doc = _load_json(path)
    base = os.path.dirname(os.path.abspath(path))

    def resolve(ref: str) -> str:
        return ref if os.path.isabs(ref) else os.path.join(base, ref)

    factors = [load_algebra(resolve(r)) for r in _need(doc, "factors", path)]
    codomain = load_algebra(resolve(_need(doc, "codomain", path)))
    family = ProductFamily(factors)
    table = _need(doc, "table", path)
    try:
        hom = HomTable(family.product, codomain, table, check=check)
    except (InputError, PropertyViolation) as exc:
        # a table that fails the homomorphism law is a bad document here
        raise InputError(f"{path}: {exc}") from exc
    return family, hom


def load_relation(path: str) -> FormalRelation:
    doc = _load_json(path)
    sig_spec = _need(doc, "signature", path)
    if isinstance(sig_spec, str):
        base = os.path.dirname(os.path.abspath(path))
        ref = sig_spec if os.path.isabs(sig_spec) else os.path.join(base, sig_spec)
        signature = load_algebra(ref).signature
    else:
        signature = Signature.of(*[(s, a) for s, a in sig_spec])
    try:
        return FormalRelation.parse(
            doc.get("name", os.path.basename(path)),
            signature,
            _need(doc, "lhs", path),
            _need(doc, "rhs", path),
            z_arity=doc.get("z_arity", 0),
        )
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def matrix_from_doc(doc: dict, where: str = "matrix document") -> ExactMatrix:
    field = field_named(_need(doc, "field", where))
    rows = _need(doc, "rows", where)
    cols = _need(doc, "cols", where)
    entries = _need(doc, "entries", where)
    if len(entries) != rows * cols:
        raise InputError(f"{where}: expected {rows * cols} entries, got {len(entries)}")
    try:
        coerced = tuple(field.coerce(x) for x in entries)
    except (InputError, ValueError) as exc:
        raise InputError(f"{where}: bad entry ({exc})") from exc
    return ExactMatrix(field, rows, cols, coerced)


def load_matrix(path: str) -> ExactMatrix:
    return matrix_from_doc(_load_json(path), where=path)


def matrix_to_doc(m: ExactMatrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "field": m.field.name if m.field.name == "rational" else int(m.field.name),
        "entries": [m.field.format(x) for x in m.entries],
    }


def factorization_to_doc(fac: Factorization) -> dict:
    return {
        "filter_base": list(fac.filter.base.members()),
        "ultrafilter_points": [u.point for u in fac.ultrafilters],
        "bridge_table": list(fac.bridge.mapping),
    }
