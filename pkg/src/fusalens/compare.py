"""Cross-project analysis: shared nodes and links by exact set intersection,
per-project attribute differences, and the shared subgraph."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

from .graph import GraphSnapshot, LinkRecord, ProjectMeta, build_snapshot
from .model import Asil, SecTriple


@dataclass(frozen=True)
class ProjectAttributes:
    """How one project sees a shared node."""

    type: str
    asil: Asil
    sec: SecTriple
    degree: int


@dataclass(frozen=True)
class SharedElement:
    """A node present, by id, in every compared project.

    asil_conflict is true iff two or more distinct assigned ASILs appear across
    the projects; unassigned values alone never raise a conflict.
    """

    id: str
    name: str
    per_project: dict[str, ProjectAttributes]
    asil_conflict: bool


@dataclass(frozen=True)
class SharedLink:
    source: str
    target: str
    relation: str
    present_in: tuple[str, ...]


@dataclass(frozen=True)
class NeighborInfo:
    neighbor_ids: tuple[str, ...]
    by_relation: dict[str, int]


@dataclass(frozen=True)
class CrossHighlight:
    """Per-project neighborhoods of one shared node, for linked highlighting."""

    node_id: str
    per_project: dict[str, NeighborInfo]


@dataclass(frozen=True)
class ComparisonResult:
    project_ids: tuple[str, ...]
    nodes: tuple[SharedElement, ...]
    links: tuple[SharedLink, ...]
    subgraph: GraphSnapshot


def _require_at_least_two(snapshots: Sequence[GraphSnapshot]) -> None:
    if len(snapshots) < 2:
        raise ValueError("comparison needs at least two snapshots")


def shared_nodes(snapshots: Sequence[GraphSnapshot]) -> list[SharedElement]:
    """Nodes whose id appears in every snapshot, with per-project attributes, sorted by id."""
    _require_at_least_two(snapshots)
    common = set(snapshots[0].nodes)
    for snapshot in snapshots[1:]:
        common &= set(snapshot.nodes)
    elements = []
    for node_id in sorted(common):
        per_project = {
            s.project_id: ProjectAttributes(
                type=s.nodes[node_id].type,
                asil=s.nodes[node_id].asil,
                sec=s.nodes[node_id].sec,
                degree=s.degree(node_id),
            )
            for s in snapshots
        }
        assigned = {a.asil for a in per_project.values() if a.asil.is_assigned}
        elements.append(
            SharedElement(
                id=node_id,
                name=snapshots[0].nodes[node_id].name,
                per_project=per_project,
                asil_conflict=len(assigned) >= 2,
            )
        )
    return elements


def shared_links(snapshots: Sequence[GraphSnapshot]) -> list[SharedLink]:
    """Link triples present in every snapshot, sorted by (source, target, relation)."""
    _require_at_least_two(snapshots)
    common = {l.key for l in snapshots[0].links}
    for snapshot in snapshots[1:]:
        common &= {l.key for l in snapshot.links}
    project_ids = tuple(s.project_id for s in snapshots)
    return [
        SharedLink(source=s, target=t, relation=r, present_in=project_ids)
        for s, t, r in sorted(common)
    ]


def shared_subgraph(snapshots: Sequence[GraphSnapshot]) -> GraphSnapshot:
    """Graph of the shared nodes plus the shared links joining them.

    Node attributes are taken from the first snapshot in argument order;
    per-project differences live in the SharedElement records instead.
    """
    _require_at_least_two(snapshots)
    elements = shared_nodes(snapshots)
    node_ids = {e.id for e in elements}
    links = [
        LinkRecord(l.source, l.target, l.relation)
        for l in shared_links(snapshots)
        if l.source in node_ids and l.target in node_ids
    ]
    meta = ProjectMeta(
        project_id="shared",
        name="Shared ({})".format(", ".join(s.project_id for s in snapshots)),
        system="shared",
    )
    first = snapshots[0]
    return build_snapshot(meta, [first.nodes[e.id] for e in elements], links, revision=1)


def cross_highlight(node_id: str, snapshots: Sequence[GraphSnapshot]) -> CrossHighlight:
    """Neighborhood of a shared node in each project, for hover highlighting."""
    _require_at_least_two(snapshots)
    missing = [s.project_id for s in snapshots if node_id not in s.nodes]
    if missing:
        raise ValueError(f"node {node_id!r} is not shared; absent from: {', '.join(missing)}")
    per_project = {}
    for snapshot in snapshots:
        by_relation: dict[str, int] = {}
        for link in snapshot.incident_links(node_id):
            by_relation[link.relation] = by_relation.get(link.relation, 0) + 1
        per_project[snapshot.project_id] = NeighborInfo(
            neighbor_ids=tuple(n.id for n in snapshot.neighbors(node_id)),
            by_relation=by_relation,
        )
    return CrossHighlight(node_id=node_id, per_project=per_project)


def compare_projects(snapshots: Sequence[GraphSnapshot]) -> ComparisonResult:
    """Shared nodes, shared links, and the shared subgraph in one pass."""
    _require_at_least_two(snapshots)
    return ComparisonResult(
        project_ids=tuple(s.project_id for s in snapshots),
        nodes=tuple(shared_nodes(snapshots)),
        links=tuple(shared_links(snapshots)),
        subgraph=shared_subgraph(snapshots),
    )


def shared_nodes_csv(result: ComparisonResult) -> str:
    """Shared nodes with one ASIL column per compared project."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["id", "name", *(f"asil_{p}" for p in result.project_ids)])
    for element in result.nodes:
        writer.writerow(
            [
                element.id,
                element.name,
                *(element.per_project[p].asil.render() for p in result.project_ids),
            ]
        )
    return buffer.getvalue()
