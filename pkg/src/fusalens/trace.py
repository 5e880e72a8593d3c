"""Path existence between node pairs, the linearized ASIL trace along a path,
and S-E-C consistency flagging."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .graph import GraphSnapshot, LinkRecord
from .model import Asil, SecTriple


class TraceMode(Enum):
    UNDIRECTED = "undirected"
    FORWARD = "forward"

    @classmethod
    def from_token(cls, token: str) -> "TraceMode":
        for mode in cls:
            if mode.value == token.strip().lower():
                return mode
        raise ValueError(f"unknown trace mode {token!r}; use undirected or forward")


@dataclass(frozen=True)
class PathQuery:
    source: str
    destination: str
    mode: TraceMode = TraceMode.UNDIRECTED


@dataclass(frozen=True)
class TracePath:
    """A simple path: ordered node ids plus the links joining consecutive nodes."""

    nodes: tuple[str, ...]
    links: tuple[LinkRecord, ...]

    @property
    def edge_count(self) -> int:
        return len(self.links)


@dataclass(frozen=True)
class TraceStep:
    id: str
    name: str
    type: str
    asil: Asil
    sec: SecTriple


@dataclass(frozen=True)
class SecMismatch:
    """A component that differs from the nearest preceding assigned value."""

    node_id: str
    component: str  # severity | exposure | controllability
    actual: str
    expected: str
    from_node: str


@dataclass(frozen=True)
class TraceResult:
    steps: tuple[TraceStep, ...]
    flags: tuple[SecMismatch, ...]


def _step_neighbors(snapshot: GraphSnapshot, node_id: str, mode: TraceMode, reverse: bool):
    """Traversable neighbor ids from node_id. In forward mode only source->target
    steps count (or target->source when walking in reverse)."""
    out = set()
    for link in snapshot.incident_links(node_id):
        if mode is TraceMode.UNDIRECTED:
            out.add(link.target if link.source == node_id else link.source)
        elif not reverse and link.source == node_id:
            out.add(link.target)
        elif reverse and link.target == node_id:
            out.add(link.source)
    return out


def _connecting_link(
    snapshot: GraphSnapshot, a: str, b: str, mode: TraceMode
) -> LinkRecord:
    candidates = []
    for link in snapshot.incident_links(a):
        forward = link.source == a and link.target == b
        backward = link.source == b and link.target == a
        if forward or (mode is TraceMode.UNDIRECTED and backward):
            candidates.append(link)
    return min(candidates, key=lambda l: l.key)


def find_path(snapshot: GraphSnapshot, query: PathQuery) -> TracePath | None:
    """Shortest path by edge count from source to destination, or None when
    unreachable. Ties break to the lexicographically smallest node id sequence.
    """
    source, destination, mode = query.source, query.destination, query.mode
    snapshot.node(source)
    snapshot.node(destination)
    if source == destination:
        return TracePath(nodes=(source,), links=())

    # Distances to the destination, walking links in reverse.
    distance = {destination: 0}
    frontier = deque([destination])
    while frontier:
        current = frontier.popleft()
        for neighbor in _step_neighbors(snapshot, current, mode, reverse=True):
            if neighbor not in distance:
                distance[neighbor] = distance[current] + 1
                frontier.append(neighbor)
    if source not in distance:
        return None

    # Greedy descent: always step to the smallest-id neighbor one hop closer.
    nodes = [source]
    links = []
    current = source
    while current != destination:
        remaining = distance[current]
        step = min(
            n
            for n in _step_neighbors(snapshot, current, mode, reverse=False)
            if distance.get(n) == remaining - 1
        )
        links.append(_connecting_link(snapshot, current, step, mode))
        nodes.append(step)
        current = step
    return TracePath(nodes=tuple(nodes), links=tuple(links))


_COMPONENTS = (
    ("severity", lambda sec: sec.severity),
    ("exposure", lambda sec: sec.exposure),
    ("controllability", lambda sec: sec.controllability),
)


def check_sec_consistency(steps: Sequence[TraceStep]) -> list[SecMismatch]:
    """Flag components that differ from the nearest preceding assigned value.

    Unassigned components are transparent: they neither compare nor reset the
    baseline carried from upstream.
    """
    if not steps:
        raise ValueError("trace has no steps")
    flags = []
    baseline: dict[str, tuple[str, str]] = {}  # component -> (value, node id)
    for step in steps:
        for component, getter in _COMPONENTS:
            level = getter(step.sec)
            if not level.is_assigned:
                continue
            previous = baseline.get(component)
            if previous is not None and previous[0] != level.value:
                flags.append(
                    SecMismatch(
                        node_id=step.id,
                        component=component,
                        actual=level.value,
                        expected=previous[0],
                        from_node=previous[1],
                    )
                )
            baseline[component] = (level.value, step.id)
    return flags


def trace_asils(snapshot: GraphSnapshot, path: TracePath) -> TraceResult:
    """Read off ASIL and S-E-C per path node and flag S-E-C inconsistencies."""
    _validate_path(snapshot, path)
    steps = tuple(
        TraceStep(id=n.id, name=n.name, type=n.type, asil=n.asil, sec=n.sec)
        for n in (snapshot.node(node_id) for node_id in path.nodes)
    )
    return TraceResult(steps=steps, flags=tuple(check_sec_consistency(steps)))


def _validate_path(snapshot: GraphSnapshot, path: TracePath) -> None:
    if not path.nodes:
        raise ValueError("path has no nodes")
    if len(path.links) != len(path.nodes) - 1:
        raise ValueError("path must have exactly one link fewer than nodes")
    if len(set(path.nodes)) != len(path.nodes):
        raise ValueError("path repeats a node")
    known = set(snapshot.links)
    for i, link in enumerate(path.links):
        if link not in known:
            raise ValueError(f"path link {link.source}->{link.target} is not in the snapshot")
        endpoints = {path.nodes[i], path.nodes[i + 1]}
        if {link.source, link.target} != endpoints:
            raise ValueError(f"path link {i} does not join its adjacent nodes")
    for node_id in path.nodes:
        snapshot.node(node_id)
