"""Workspace documents: the declarative front door of the CLI.

One JSON schema covers both input and machine-readable output: a basis
declaration, a universe (plain atoms or a product of named variables), named
valuations, and optional named partitions and queries.  Everything is
validated at load time, every rational is parsed exactly, and a loaded
workspace serialises back to a document that reloads identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .errors import CalculusError, WorkspaceError
from .lattice import (
    Partition,
    ProductUniverse,
    Statement,
    Universe,
    product_universe,
)
from .valuation import PreProb
from .values import Basis, Enclosure, SemValue, parse_rational, format_rational

COMMANDS = (
    "eval",
    "frames",
    "split",
    "condition",
    "bayes",
    "total",
    "classify",
    "check",
    "demo",
)


@dataclass(frozen=True)
class Workspace:
    basis: Basis
    universe: Universe
    valuations: dict[str, PreProb] = field(default_factory=dict)
    partitions: dict[str, Partition] = field(default_factory=dict)
    queries: dict[str, dict] = field(default_factory=dict)

    def valuation(self, name: str) -> PreProb:
        try:
            return self.valuations[name]
        except KeyError:
            raise WorkspaceError(f"unknown valuation {name!r}") from None

    def partition(self, name: str) -> Partition:
        try:
            return self.partitions[name]
        except KeyError:
            raise WorkspaceError(f"unknown partition {name!r}") from None


def _rational(field_name: str, text: Any) -> Fraction:
    if not isinstance(text, str):
        raise WorkspaceError(f"{field_name}: rationals are written as strings")
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise WorkspaceError(f"{field_name}: {exc}") from None


def _interval(field_name: str, doc: Any) -> tuple[Fraction, Fraction]:
    if not (isinstance(doc, list) and len(doc) == 2):
        raise WorkspaceError(f"{field_name}: an interval is a [lo, hi] pair")
    lo = _rational(f"{field_name}[0]", doc[0])
    hi = _rational(f"{field_name}[1]", doc[1])
    if lo > hi:
        raise WorkspaceError(f"{field_name}: interval endpoints out of order")
    return lo, hi


def _load_basis(doc: Any) -> Basis:
    if not isinstance(doc, list) or not doc:
        raise WorkspaceError("basis: expected a non-empty list of symbol entries")
    symbols: list[str] = []
    enclosures: list[Enclosure | None] = []
    for k, entry in enumerate(doc):
        where = f"basis[{k}]"
        if not isinstance(entry, dict) or "symbol" not in entry:
            raise WorkspaceError(f"{where}: expected an object with a 'symbol'")
        symbols.append(entry["symbol"])
        if "enclosure_re" in entry:
            re_box = _interval(f"{where}.enclosure_re", entry["enclosure_re"])
            im_box = (
                _interval(f"{where}.enclosure_im", entry["enclosure_im"])
                if "enclosure_im" in entry
                else (Fraction(0), Fraction(0))
            )
            enclosures.append((re_box, im_box))
        else:
            enclosures.append(None)
    if enclosures[0] is None:
        enclosures[0] = ((Fraction(1), Fraction(1)), (Fraction(0), Fraction(0)))
    try:
        return Basis(tuple(symbols), tuple(enclosures))
    except ValueError as exc:
        raise WorkspaceError(f"basis: {exc}") from None


def _load_universe(doc: Any) -> Universe:
    if not isinstance(doc, dict):
        raise WorkspaceError("universe: expected an object")
    if "atoms" in doc:
        atoms = doc["atoms"]
        if not isinstance(atoms, list) or not all(isinstance(a, str) for a in atoms):
            raise WorkspaceError("universe.atoms: expected a list of labels")
        try:
            return Universe(tuple(atoms))
        except (ValueError, CalculusError) as exc:
            raise WorkspaceError(f"universe.atoms: {exc}") from None
    if "product" in doc:
        product = doc["product"]
        if not isinstance(product, dict) or "vars" not in product:
            raise WorkspaceError("universe.product: expected an object with 'vars'")
        names: list[str] = []
        sizes: list[int] = []
        for k, var in enumerate(product["vars"]):
            where = f"universe.product.vars[{k}]"
            if not isinstance(var, dict) or "name" not in var or "size" not in var:
                raise WorkspaceError(f"{where}: expected 'name' and 'size'")
            if not isinstance(var["size"], int):
                raise WorkspaceError(f"{where}.size: expected an integer")
            names.append(var["name"])
            sizes.append(var["size"])
        try:
            return product_universe(sizes, names)
        except (ValueError, CalculusError) as exc:
            raise WorkspaceError(f"universe.product: {exc}") from None
    raise WorkspaceError("universe: expected 'atoms' or 'product'")


def parse_statement(universe: Universe, spec: Any) -> Statement:
    """Resolve a statement written as a label list or a product-event string."""
    if isinstance(spec, list):
        if not all(isinstance(x, str) for x in spec):
            raise WorkspaceError("statement: label lists contain strings")
        try:
            return universe.statement_of_labels(spec)
        except ValueError as exc:
            raise WorkspaceError(f"statement: {exc}") from None
    if not isinstance(spec, str):
        raise WorkspaceError("statement: expected a label list or a string")
    text = spec.strip()
    if text.startswith("["):
        try:
            labels = json.loads(text)
        except json.JSONDecodeError:
            raise WorkspaceError(f"statement: cannot parse {spec!r}") from None
        return parse_statement(universe, labels)
    if isinstance(universe, ProductUniverse):
        try:
            return universe.event(text)
        except ValueError as exc:
            raise WorkspaceError(f"statement: {exc}") from None
    try:
        return universe.statement_of_labels(
            [part.strip() for part in text.split(",") if part.strip()]
        )
    except ValueError as exc:
        raise WorkspaceError(f"statement: {exc}") from None


def _load_valuation(
    name: str, doc: Any, universe: Universe, basis: Basis
) -> PreProb:
    where = f"valuations.{name}"
    if not isinstance(doc, dict):
        raise WorkspaceError(f"{where}: expected a mapping of atom labels")
    label_index = {label: i for i, label in enumerate(universe.atom_labels)}
    atomic = [basis.zero() for _ in range(universe.atom_count)]
    for label, value_doc in doc.items():
        if label not in label_index:
            raise WorkspaceError(f"{where}: unknown atom label {label!r}")
        if not isinstance(value_doc, dict):
            raise WorkspaceError(f"{where}.{label}: expected a symbol mapping")
        coeffs = [Fraction(0)] * basis.dimension
        for symbol, text in value_doc.items():
            if symbol not in basis.symbols:
                raise WorkspaceError(
                    f"{where}.{label}: unknown symbol {symbol!r}"
                )
            coeffs[basis.symbols.index(symbol)] = _rational(
                f"{where}.{label}.{symbol}", text
            )
        atomic[label_index[label]] = SemValue(basis, tuple(coeffs))
    return PreProb(universe, basis, tuple(atomic))


def _load_partition(name: str, doc: Any, universe: Universe) -> Partition:
    where = f"partitions.{name}"
    if not isinstance(doc, list) or not doc:
        raise WorkspaceError(f"{where}: expected a non-empty list of cells")
    cells = []
    for k, cell_doc in enumerate(doc):
        cells.append(parse_statement(universe, cell_doc))
    try:
        return Partition.of(universe, cells)
    except ValueError as exc:
        raise WorkspaceError(f"{where}: {exc}") from None


def _load_queries(doc: Any, valuations: dict, partitions: dict) -> dict[str, dict]:
    if not isinstance(doc, dict):
        raise WorkspaceError("queries: expected a mapping")
    for name, query in doc.items():
        where = f"queries.{name}"
        if not isinstance(query, dict) or "command" not in query:
            raise WorkspaceError(f"{where}: expected an object with 'command'")
        if query["command"] not in COMMANDS:
            raise WorkspaceError(f"{where}: unknown command {query['command']!r}")
        if "valuation" in query and query["valuation"] not in valuations:
            raise WorkspaceError(
                f"{where}: unknown valuation {query['valuation']!r}"
            )
        if "partition" in query and query["partition"] not in partitions:
            raise WorkspaceError(
                f"{where}: unknown partition {query['partition']!r}"
            )
    return dict(doc)


def loads(text: str) -> Workspace:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(
            f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise WorkspaceError("workspace: expected a JSON object")
    unknown = set(doc) - {"basis", "universe", "valuations", "partitions", "queries"}
    if unknown:
        raise WorkspaceError(f"workspace: unknown sections {sorted(unknown)}")
    if "basis" not in doc or "universe" not in doc:
        raise WorkspaceError("workspace: 'basis' and 'universe' are required")
    basis = _load_basis(doc["basis"])
    universe = _load_universe(doc["universe"])
    valuations = {}
    for name, val_doc in doc.get("valuations", {}).items():
        valuations[name] = _load_valuation(name, val_doc, universe, basis)
    partitions = {}
    for name, part_doc in doc.get("partitions", {}).items():
        partitions[name] = _load_partition(name, part_doc, universe)
    queries = _load_queries(doc.get("queries", {}), valuations, partitions)
    return Workspace(basis, universe, valuations, partitions, queries)


def load(path: str) -> Workspace:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise WorkspaceError(f"cannot read {path}: {exc}") from None
    return loads(text)


def to_document(ws: Workspace) -> dict:
    """The canonical document form; loading it back gives an equal workspace."""
    basis_doc = []
    for symbol, box in zip(ws.basis.symbols, ws.basis.enclosures):
        entry: dict[str, Any] = {"symbol": symbol}
        if box is not None:
            (re_lo, re_hi), (im_lo, im_hi) = box
            entry["enclosure_re"] = [format_rational(re_lo), format_rational(re_hi)]
            entry["enclosure_im"] = [format_rational(im_lo), format_rational(im_hi)]
        basis_doc.append(entry)
    if isinstance(ws.universe, ProductUniverse):
        universe_doc: dict[str, Any] = {
            "product": {
                "vars": [
                    {"name": n, "size": s}
                    for n, s in zip(ws.universe.var_names, ws.universe.var_sizes)
                ]
            }
        }
    else:
        universe_doc = {"atoms": list(ws.universe.atom_labels)}
    valuations_doc = {
        name: {
            label: value.to_mapping()
            for label, value in zip(ws.universe.atom_labels, pre.atomic)
            if not value.is_zero()
        }
        for name, pre in ws.valuations.items()
    }
    partitions_doc = {
        name: [ws.universe.labels_of(cell) for cell in part.cells]
        for name, part in ws.partitions.items()
    }
    doc: dict[str, Any] = {
        "basis": basis_doc,
        "universe": universe_doc,
        "valuations": valuations_doc,
        "partitions": partitions_doc,
    }
    if ws.queries:
        doc["queries"] = ws.queries
    return doc


def dumps(ws: Workspace) -> str:
    return json.dumps(to_document(ws), indent=2, sort_keys=True)
