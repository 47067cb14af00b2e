"""JSON document format for graphs, colourings and reports; DOT export.

One document may carry any of these sections::

    {"format": "strongprod", "version": 1,
     "graph": {"n": 3, "labels": [[0], [1], [2]], "edges": [[0, 1], [1, 2]]},
     "coloring": {"p": 2, "q": 1, "sets": [[0], [1], [0]],
                  "order": [[0], [1], [0]]},        # order: consistent only
     "partition": {"k": 1, "edges": [[0, 1, 0], [1, 2, 0]]},
     "report": {...}, "meta": {...}}

Text output is canonical: sorted keys, two-space indent, trailing newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema

from .coloring import (
    INFINITY,
    ConsistentColoring,
    DefectParameter,
    EdgePartition,
    FractionalColoring,
    VerificationReport,
)
from .errors import SchemaError, StrongProdError
from .graph import Graph

FORMAT = "strongprod"
VERSION = 1

_INT_LIST = {"type": "array", "items": {"type": "integer", "minimum": 0}}

SCHEMA: dict = {
    "type": "object",
    "required": ["format", "version"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": FORMAT},
        "version": {"const": VERSION},
        "graph": {
            "type": "object",
            "required": ["n", "edges"],
            "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 0},
                "labels": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                "edges": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
                },
            },
        },
        "coloring": {
            "type": "object",
            "required": ["p", "q", "sets"],
            "additionalProperties": False,
            "properties": {
                "p": {"type": "integer", "minimum": 1},
                "q": {"type": "integer", "minimum": 1},
                "sets": {"type": "array", "items": _INT_LIST},
                "order": {"type": "array", "items": _INT_LIST},
                "palette_shape": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
        },
        "partition": {
            "type": "object",
            "required": ["k", "edges"],
            "additionalProperties": False,
            "properties": {
                "k": {"type": "integer", "minimum": 1},
                "edges": {
                    "type": "array",
                    "items": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
                },
            },
        },
        "report": {
            "type": "object",
            "required": ["proper", "clustering", "defect", "witness", "eta"],
            "properties": {
                "proper": {"type": "boolean"},
                "clustering": {"type": "integer", "minimum": 0},
                "defect": {"type": "integer", "minimum": 0},
                "witness": {
                    "type": "object",
                    "required": ["colour", "vertices"],
                    "properties": {"colour": {"type": "integer"}, "vertices": _INT_LIST},
                },
                "eta": {"enum": [e.value for e in DefectParameter]},
                "consistent": {"type": ["boolean", "null"]},
                "p": {"type": "integer"},
                "q": {"type": "integer"},
            },
        },
        "meta": {"type": "object"},
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


@dataclass
class Document:
    graph: Graph | None = None
    coloring: FractionalColoring | ConsistentColoring | None = None
    partition: EdgePartition | None = None
    report: VerificationReport | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def fractional(self) -> FractionalColoring | None:
        """The colouring as a plain ``(p:q)``-colouring."""
        if isinstance(self.coloring, ConsistentColoring):
            return self.coloring.as_fractional()
        return self.coloring


# to plain data ----------------------------------------------------------------


def graph_to_data(g: Graph) -> dict:
    return {"n": g.n, "labels": [list(lab) for lab in g.labels], "edges": [list(e) for e in g.edges()]}


def coloring_to_data(f: FractionalColoring | ConsistentColoring) -> dict:
    if isinstance(f, ConsistentColoring):
        return {
            "p": f.p,
            "q": f.q,
            "sets": [sorted(t) for t in f.order],
            "order": [list(t) for t in f.order],
        }
    out = {"p": f.p, "q": f.q, "sets": [list(cs) for cs in f.assign]}
    if f.palette_shape is not None:
        out["palette_shape"] = list(f.palette_shape)
    return out


def partition_to_data(part: EdgePartition) -> dict:
    return {"k": part.k, "edges": [[u, v, c] for (u, v), c in sorted(part.class_of.items())]}


def report_to_data(r: VerificationReport) -> dict:
    value = r.eta_value
    return {
        "proper": r.proper,
        "clustering": r.clustering,
        "defect": r.defect,
        "witness": {"colour": r.witness[0], "vertices": list(r.witness[1])},
        "eta": r.eta.value,
        "eta_value": "inf" if value is INFINITY else value,
        "consistent": r.consistent,
        "p": r.p,
        "q": r.q,
    }


def document_to_data(doc: Document) -> dict:
    out: dict[str, Any] = {"format": FORMAT, "version": VERSION}
    if doc.graph is not None:
        out["graph"] = graph_to_data(doc.graph)
    if doc.coloring is not None:
        out["coloring"] = coloring_to_data(doc.coloring)
    if doc.partition is not None:
        out["partition"] = partition_to_data(doc.partition)
    if doc.report is not None:
        out["report"] = report_to_data(doc.report)
    if doc.meta:
        out["meta"] = doc.meta
    return out


def to_text(doc: Document) -> str:
    return json.dumps(document_to_data(doc), indent=2, sort_keys=True) + "\n"


def serialize(obj) -> str:
    """Canonical text for a graph, colouring, partition, report or document."""
    if isinstance(obj, Document):
        return to_text(obj)
    if isinstance(obj, Graph):
        return to_text(Document(graph=obj))
    if isinstance(obj, (FractionalColoring, ConsistentColoring)):
        return to_text(Document(coloring=obj))
    if isinstance(obj, EdgePartition):
        return to_text(Document(partition=obj))
    if isinstance(obj, VerificationReport):
        return to_text(Document(report=obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# from plain data ----------------------------------------------------------------


def _field(path) -> str:
    return ".".join(str(p) for p in path) or "<document>"


def _data_to_graph(data: dict) -> Graph:
    labels = data.get("labels")
    if labels is not None and len(labels) != data["n"]:
        raise SchemaError(f"graph.labels: expected {data['n']} labels, got {len(labels)}")
    for i, (u, v) in enumerate(data["edges"]):
        if u >= data["n"] or v >= data["n"]:
            raise SchemaError(f"graph.edges.{i}: vertex out of range({data['n']})")
    try:
        return Graph.from_edges(data["n"], [tuple(e) for e in data["edges"]], labels=None if labels is None else [tuple(x) for x in labels])
    except (ValueError, StrongProdError) as exc:
        raise SchemaError(f"graph: {exc}") from exc


def _data_to_coloring(data: dict):
    try:
        if "order" in data:
            c = ConsistentColoring(data["p"], data["q"], tuple(tuple(t) for t in data["order"]))
            if [sorted(t) for t in c.order] != data["sets"]:
                raise SchemaError("coloring.sets: does not match coloring.order")
            return c
        shape = data.get("palette_shape")
        return FractionalColoring(
            data["p"], data["q"], tuple(tuple(s) for s in data["sets"]), None if shape is None else tuple(shape)
        )
    except SchemaError:
        raise
    except (ValueError, StrongProdError) as exc:
        raise SchemaError(f"coloring: {exc}") from exc


def _data_to_report(data: dict) -> VerificationReport:
    return VerificationReport(
        proper=data["proper"],
        clustering=data["clustering"],
        defect=data["defect"],
        witness=(data["witness"]["colour"], tuple(data["witness"]["vertices"])),
        eta=DefectParameter(data["eta"]),
        consistent=data.get("consistent"),
        p=data.get("p", 0),
        q=data.get("q", 0),
    )


def data_to_document(data: Any) -> Document:
    errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise SchemaError(f"{_field(e.absolute_path)}: {e.message}")
    doc = Document(meta=data.get("meta", {}))
    if "graph" in data:
        doc.graph = _data_to_graph(data["graph"])
    if "coloring" in data:
        doc.coloring = _data_to_coloring(data["coloring"])
        if doc.graph is not None and doc.coloring.n != doc.graph.n:
            raise SchemaError(f"coloring.sets: {doc.coloring.n} vertices, graph has {doc.graph.n}")
    if "partition" in data:
        p = data["partition"]
        try:
            doc.partition = EdgePartition(p["k"], {(min(u, v), max(u, v)): c for u, v, c in p["edges"]})
        except (ValueError, StrongProdError) as exc:
            raise SchemaError(f"partition: {exc}") from exc
    if "report" in data:
        doc.report = _data_to_report(data["report"])
    return doc


def parse(text: str) -> Document:
    """Parse a document; errors name the offending line or field."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return data_to_document(data)


def read_document(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        try:
            return parse(fh.read())
        except SchemaError as exc:
            raise SchemaError(f"{path}: {exc}") from exc


def write_document(path, doc: Document) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_text(doc))


# DOT ------------------------------------------------------------------------------

DOT_PALETTE = (
    "tomato", "steelblue", "gold", "mediumseagreen", "orchid", "orange",
    "turquoise", "slategray", "salmon", "khaki", "plum", "lightblue",
)


def export_dot(graph: Graph, coloring: FractionalColoring | ConsistentColoring | None = None, name: str = "G") -> str:
    """Undirected DOT text; nodes are filled by their first colour id."""
    if isinstance(coloring, ConsistentColoring):
        coloring = coloring.as_fractional()
    if coloring is not None:
        coloring.check_graph(graph)
    lines = [f"graph {name} {{"]
    for v in range(graph.n):
        label = ",".join(str(x) for x in graph.labels[v])
        attrs = [f'label="{label}"']
        if coloring is not None:
            first = coloring.assign[v][0]
            attrs += ["style=filled", f'fillcolor="{DOT_PALETTE[first % len(DOT_PALETTE)]}"', f'tooltip="colour {first}"']
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in graph.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
