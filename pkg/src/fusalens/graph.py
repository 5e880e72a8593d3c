"""Element/link records, project metadata, and immutable indexed graph snapshots."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from .model import Asil, SecTriple, UNASSIGNED_SEC


@dataclass(frozen=True)
class ElementRecord:
    """One safety-network node: id, name, type label, ASIL, and the S-E-C components."""

    id: str
    name: str
    type: str
    asil: Asil = Asil.UNASSIGNED
    sec: SecTriple = UNASSIGNED_SEC


@dataclass(frozen=True)
class LinkRecord:
    source: str
    target: str
    relation: str

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.source, self.target, self.relation)


@dataclass(frozen=True)
class ProjectMeta:
    project_id: str
    name: str
    system: str
    department: str = ""
    in_charge: str = ""
    location: str = ""


@dataclass(frozen=True)
class GraphSnapshot:
    """Immutable, indexed view of one project's network.

    Every link endpoint resolves to a node (referential integrity), and the
    adjacency index agrees with a brute-force scan of the link list. Updates
    never mutate a snapshot; the store produces a new one with revision + 1.
    """

    meta: ProjectMeta
    nodes: Mapping[str, ElementRecord]
    links: tuple[LinkRecord, ...]
    adjacency: Mapping[str, tuple[int, ...]] = field(repr=False)
    revision: int = 1

    @property
    def project_id(self) -> str:
        return self.meta.project_id

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def link_count(self) -> int:
        return len(self.links)

    def node(self, node_id: str) -> ElementRecord:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(self.project_id, node_id) from None

    def incident_links(self, node_id: str) -> list[LinkRecord]:
        self.node(node_id)
        return [self.links[i] for i in self.adjacency.get(node_id, ())]

    def degree(self, node_id: str) -> int:
        """Number of incident links, direction ignored."""
        self.node(node_id)
        return len(self.adjacency.get(node_id, ()))

    def neighbors(self, node_id: str, relation: str | None = None) -> list[ElementRecord]:
        """Nodes sharing an incident link, optionally restricted to one relation.

        Sorted by id, no duplicates. Direction is ignored.
        """
        self.node(node_id)
        seen: set[str] = set()
        for link in self.incident_links(node_id):
            if relation is not None and link.relation != relation:
                continue
            other = link.target if link.source == node_id else link.source
            seen.add(other)
        return [self.nodes[n] for n in sorted(seen)]

    def search_nodes(self, query: str) -> list[ElementRecord]:
        """Case-insensitive substring match on node names; empty query matches nothing."""
        if not query:
            return []
        needle = query.lower()
        hits = [n for n in self.nodes.values() if needle in n.name.lower()]
        return sorted(hits, key=lambda n: n.id)


class UnknownNodeError(LookupError):
    def __init__(self, project_id: str, node_id: str):
        super().__init__(f"no node {node_id!r} in project {project_id!r}")
        self.project_id = project_id
        self.node_id = node_id


def build_snapshot(
    meta: ProjectMeta,
    nodes: Iterable[ElementRecord],
    links: Iterable[LinkRecord],
    revision: int = 1,
) -> GraphSnapshot:
    """Index validated records into a snapshot. Rejects duplicate node ids and
    links to unknown nodes."""
    node_map: dict[str, ElementRecord] = {}
    for node in nodes:
        if node.id in node_map:
            raise ValueError(f"duplicate node id {node.id!r}")
        node_map[node.id] = node
    link_tuple = tuple(links)
    adjacency: dict[str, list[int]] = {node_id: [] for node_id in node_map}
    for i, link in enumerate(link_tuple):
        if link.source not in node_map or link.target not in node_map:
            raise ValueError(
                f"link {link.source}->{link.target} references a node outside the snapshot"
            )
        if link.source == link.target:
            raise ValueError(f"self-loop on {link.source} is not a valid stored link")
        adjacency[link.source].append(i)
        adjacency[link.target].append(i)
    frozen = {node_id: tuple(indices) for node_id, indices in adjacency.items()}
    return GraphSnapshot(
        meta=meta,
        nodes=MappingProxyType(node_map),
        links=link_tuple,
        adjacency=MappingProxyType(frozen),
        revision=revision,
    )
