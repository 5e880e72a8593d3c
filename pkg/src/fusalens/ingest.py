"""Project file parsing (CSV and JSON bundle), validation, and serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from . import model
from .graph import ElementRecord, GraphSnapshot, LinkRecord, ProjectMeta
from .model import ParseError

NODES_HEADER = ["id", "name", "type", "asil", "severity", "exposure", "controllability"]
LINKS_HEADER = ["source", "target", "relation"]

# Validation issue codes. Errors block commit; warnings do not.
DUPLICATE_NODE_ID = "DUPLICATE_NODE_ID"
EMPTY_NODE_ID = "EMPTY_NODE_ID"
DANGLING_SOURCE = "DANGLING_SOURCE"
DANGLING_TARGET = "DANGLING_TARGET"
SELF_LOOP = "SELF_LOOP"
DUPLICATE_LINK = "DUPLICATE_LINK"
UNREGISTERED_TYPE = "UNREGISTERED_TYPE"
UNREGISTERED_RELATION = "UNREGISTERED_RELATION"
RELATION_TYPE_MISMATCH = "RELATION_TYPE_MISMATCH"


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    row: int  # 1-based position in the node or link record list


@dataclass
class ValidationReport:
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {
            "errors": [vars(i) for i in self.errors],
            "warnings": [vars(i) for i in self.warnings],
        }


def _decode(content: bytes | str) -> str:
    if isinstance(content, bytes):
        try:
            return content.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8 text: {exc}") from None
    return content.lstrip("﻿")


def _read_rows(text: str, expected_header: list[str], what: str):
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{what} file is empty; expected header {','.join(expected_header)}")
    normalized = [h.strip().lower() for h in header]
    if normalized != expected_header:
        raise ParseError(
            f"{what} header must be {','.join(expected_header)}, got {','.join(header)}"
        )
    for row_number, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue  # tolerate blank lines
        if len(row) != len(expected_header):
            raise ParseError(
                f"{what} row {row_number} has {len(row)} fields, expected {len(expected_header)}",
                row=row_number,
            )
        yield row_number, row


def parse_nodes_csv(content: bytes | str) -> list[ElementRecord]:
    """Parse a nodes file. Header: id,name,type,asil,severity,exposure,controllability."""
    records = []
    for row_number, row in _read_rows(_decode(content), NODES_HEADER, "nodes"):
        node_id, name, type_label, asil, sev, exp, con = (f.strip() for f in row)
        try:
            records.append(
                ElementRecord(
                    id=node_id,
                    name=name,
                    type=type_label,
                    asil=model.parse_asil(asil),
                    sec=model.parse_sec(sev, exp, con),
                )
            )
        except ParseError as exc:
            raise ParseError(f"nodes row {row_number}: {exc}", row=row_number) from None
    return records


def parse_links_csv(content: bytes | str) -> list[LinkRecord]:
    """Parse a links file. Header: source,target,relation. Relation aliases are canonicalized."""
    records = []
    for _, row in _read_rows(_decode(content), LINKS_HEADER, "links"):
        source, target, relation = (f.strip() for f in row)
        records.append(
            LinkRecord(source=source, target=target, relation=model.canonical_relation(relation))
        )
    return records


def parse_meta_json(content: bytes | str) -> ProjectMeta:
    try:
        document = json.loads(_decode(content))
    except json.JSONDecodeError as exc:
        raise ParseError(f"meta is not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ParseError("meta must be a JSON object")
    return meta_from_dict(document)


def meta_from_dict(document: dict) -> ProjectMeta:
    missing = [k for k in ("project_id", "name", "system") if not str(document.get(k, "")).strip()]
    if missing:
        raise ParseError(f"meta is missing required fields: {', '.join(missing)}")
    return ProjectMeta(
        project_id=str(document["project_id"]).strip(),
        name=str(document["name"]),
        system=str(document["system"]),
        department=str(document.get("department", "")),
        in_charge=str(document.get("in_charge", "")),
        location=str(document.get("location", "")),
    )


def parse_project_json(content: bytes | str) -> tuple[ProjectMeta, list[ElementRecord], list[LinkRecord]]:
    """Parse a JSON project bundle {meta, nodes, links} with CSV-equivalent semantics."""
    try:
        document = json.loads(_decode(content))
    except json.JSONDecodeError as exc:
        raise ParseError(f"project bundle is not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ParseError("project bundle must be a JSON object")
    meta = meta_from_dict(document.get("meta") or {})
    nodes = []
    for i, raw in enumerate(document.get("nodes") or [], start=1):
        try:
            nodes.append(
                ElementRecord(
                    id=str(raw["id"]),
                    name=str(raw.get("name", "")),
                    type=str(raw.get("type", "")),
                    asil=model.parse_asil(str(raw.get("asil", "-"))),
                    sec=model.parse_sec(
                        str(raw.get("severity", "-")),
                        str(raw.get("exposure", "-")),
                        str(raw.get("controllability", "-")),
                    ),
                )
            )
        except KeyError:
            raise ParseError(f"nodes entry {i}: missing id", row=i) from None
        except ParseError as exc:
            raise ParseError(f"nodes entry {i}: {exc}", row=i) from None
    links = []
    for i, raw in enumerate(document.get("links") or [], start=1):
        try:
            links.append(
                LinkRecord(
                    source=str(raw["source"]),
                    target=str(raw["target"]),
                    relation=model.canonical_relation(str(raw["relation"])),
                )
            )
        except KeyError as exc:
            raise ParseError(f"links entry {i}: missing {exc.args[0]}", row=i) from None
    return meta, nodes, links


def validate_project(nodes: list[ElementRecord], links: list[LinkRecord]) -> ValidationReport:
    """Check parsed records for structural problems.

    Errors: duplicate or empty node ids, dangling link endpoints, self-loops.
    Warnings: duplicate links (deduplicated at commit), unregistered type or
    relation labels, and links whose endpoint types contradict the registry.
    """
    report = ValidationReport()
    seen_ids: set[str] = set()
    for row, node in enumerate(nodes, start=1):
        if not node.id:
            report.errors.append(ValidationIssue(EMPTY_NODE_ID, "node id is empty", row))
        elif node.id in seen_ids:
            report.errors.append(
                ValidationIssue(DUPLICATE_NODE_ID, f"duplicate node id {node.id!r}", row)
            )
        seen_ids.add(node.id)
        if node.type and not model.is_registered_type(node.type):
            report.warnings.append(
                ValidationIssue(
                    UNREGISTERED_TYPE, f"node {node.id!r} has unregistered type {node.type!r}", row
                )
            )

    node_types = {n.id: n.type for n in nodes}
    seen_links: set[tuple[str, str, str]] = set()
    for row, link in enumerate(links, start=1):
        if link.source not in node_types:
            report.errors.append(
                ValidationIssue(
                    DANGLING_SOURCE,
                    f"link {link.source}->{link.target} has unknown source {link.source!r}",
                    row,
                )
            )
        if link.target not in node_types:
            report.errors.append(
                ValidationIssue(
                    DANGLING_TARGET,
                    f"link {link.source}->{link.target} has unknown target {link.target!r}",
                    row,
                )
            )
        if link.source == link.target:
            report.errors.append(
                ValidationIssue(SELF_LOOP, f"link on {link.source!r} is a self-loop", row)
            )
        if link.key in seen_links:
            report.warnings.append(
                ValidationIssue(
                    DUPLICATE_LINK,
                    f"duplicate link {link.source}->{link.target} ({link.relation}); one kept",
                    row,
                )
            )
        seen_links.add(link.key)
        registered = model.RELATION_TYPES.get(link.relation)
        if registered is None:
            report.warnings.append(
                ValidationIssue(
                    UNREGISTERED_RELATION,
                    f"link {link.source}->{link.target} has unregistered relation {link.relation!r}",
                    row,
                )
            )
        else:
            source_type = node_types.get(link.source)
            target_type = node_types.get(link.target)
            if (
                source_type is not None
                and target_type is not None
                and (source_type, target_type) != (registered.subject_type, registered.object_type)
            ):
                report.warnings.append(
                    ValidationIssue(
                        RELATION_TYPE_MISMATCH,
                        f"{link.relation} expects {registered.subject_type}->"
                        f"{registered.object_type}, got {source_type}->{target_type} "
                        f"({link.source}->{link.target})",
                        row,
                    )
                )
    return report


def dedupe_links(links: list[LinkRecord]) -> list[LinkRecord]:
    """Drop exact (source, target, relation) duplicates, keeping first occurrences."""
    seen: set[tuple[str, str, str]] = set()
    unique = []
    for link in links:
        if link.key not in seen:
            seen.add(link.key)
            unique.append(link)
    return unique


def node_to_dict(node: ElementRecord) -> dict:
    s, e, c = node.sec.render()
    return {
        "id": node.id,
        "name": node.name,
        "type": node.type,
        "asil": node.asil.render(),
        "severity": s,
        "exposure": e,
        "controllability": c,
    }


def link_to_dict(link: LinkRecord) -> dict:
    return {"source": link.source, "target": link.target, "relation": link.relation}


def meta_to_dict(meta: ProjectMeta) -> dict:
    return {
        "project_id": meta.project_id,
        "name": meta.name,
        "system": meta.system,
        "department": meta.department,
        "in_charge": meta.in_charge,
        "location": meta.location,
    }


def nodes_to_csv(nodes: list[ElementRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(NODES_HEADER)
    for node in nodes:
        d = node_to_dict(node)
        writer.writerow([d[h] for h in NODES_HEADER])
    return buffer.getvalue()


def links_to_csv(links: list[LinkRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(LINKS_HEADER)
    for link in links:
        writer.writerow([link.source, link.target, link.relation])
    return buffer.getvalue()


def export_selection_csv(snapshot: GraphSnapshot, node_ids: list[str]) -> str:
    """Render selected nodes as `type,asil,name,id` rows, preserving the
    requested order. Names are always quoted; rows end with CRLF."""
    missing = [node_id for node_id in node_ids if node_id not in snapshot.nodes]
    if missing:
        raise LookupError(
            f"project {snapshot.project_id!r} has no nodes: {', '.join(sorted(set(missing)))}"
        )
    lines = ["type,asil,name,id"]
    for node_id in node_ids:
        node = snapshot.nodes[node_id]
        quoted_name = '"' + node.name.replace('"', '""') + '"'
        lines.append(f"{node.type},{node.asil.render()},{quoted_name},{node.id}")
    return "\r\n".join(lines) + "\r\n"
