"""On-disk project repository serving immutable graph snapshots.

Layout: one directory per project under the data dir, holding meta.json and
graph.json (the canonical graph document). Indices are rebuilt on load.
Writes are serialized behind a lock and swapped in atomically; readers always
see a complete snapshot, old or new.
"""

from __future__ import annotations

import json
import os
import re
import threading
from dataclasses import dataclass
from pathlib import Path

from . import ingest
from .graph import ElementRecord, GraphSnapshot, LinkRecord, ProjectMeta, build_snapshot
from .ingest import ValidationReport

_PROJECT_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


class ProjectNotFoundError(LookupError):
    def __init__(self, project_id: str):
        super().__init__(f"no project {project_id!r}")
        self.project_id = project_id


class ProjectValidationError(ValueError):
    """Commit refused because validation produced errors."""

    def __init__(self, report: ValidationReport):
        messages = "; ".join(i.message for i in report.errors[:5])
        super().__init__(f"project has {len(report.errors)} validation error(s): {messages}")
        self.report = report


@dataclass(frozen=True)
class ProjectSummary:
    meta: ProjectMeta
    node_count: int
    link_count: int
    revision: int


class ProjectStore:
    def __init__(self, data_dir: str | Path):
        self._data_dir = Path(data_dir)
        self._data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._snapshots: dict[str, GraphSnapshot] = {}
        self._load_existing()

    @property
    def data_dir(self) -> Path:
        return self._data_dir

    def _load_existing(self) -> None:
        for entry in sorted(self._data_dir.iterdir()):
            meta_path = entry / "meta.json"
            graph_path = entry / "graph.json"
            if not (entry.is_dir() and meta_path.is_file() and graph_path.is_file()):
                continue
            meta = ingest.parse_meta_json(meta_path.read_bytes())
            document = json.loads(graph_path.read_text("utf-8"))
            _, nodes, links = ingest.parse_project_json(
                json.dumps({"meta": ingest.meta_to_dict(meta), **document})
            )
            self._snapshots[meta.project_id] = build_snapshot(
                meta, nodes, links, revision=int(document.get("revision", 1))
            )

    def commit_project(
        self,
        meta: ProjectMeta,
        nodes: list[ElementRecord],
        links: list[LinkRecord],
    ) -> str:
        """Validate, persist, and publish a project. Replaces any existing
        project with the same id atomically and bumps its revision."""
        if not _PROJECT_ID_RE.match(meta.project_id):
            raise ValueError(f"invalid project id {meta.project_id!r}")
        report = ingest.validate_project(nodes, links)
        if not report.ok:
            raise ProjectValidationError(report)
        clean_links = ingest.dedupe_links(links)
        with self._lock:
            previous = self._snapshots.get(meta.project_id)
            revision = previous.revision + 1 if previous else 1
            snapshot = build_snapshot(meta, nodes, clean_links, revision=revision)
            self._write(snapshot)
            self._snapshots[meta.project_id] = snapshot
        return meta.project_id

    def _write(self, snapshot: GraphSnapshot) -> None:
        project_dir = self._data_dir / snapshot.project_id
        project_dir.mkdir(parents=True, exist_ok=True)
        document = {
            "revision": snapshot.revision,
            "nodes": [ingest.node_to_dict(n) for n in snapshot.nodes.values()],
            "links": [ingest.link_to_dict(l) for l in snapshot.links],
        }
        _replace_file(project_dir / "meta.json", json.dumps(ingest.meta_to_dict(snapshot.meta), indent=2))
        _replace_file(project_dir / "graph.json", json.dumps(document, indent=2))

    def list_projects(self) -> list[ProjectSummary]:
        """All committed projects sorted by project id, with node/link counts."""
        snapshots = list(self._snapshots.values())
        return sorted(
            (
                ProjectSummary(
                    meta=s.meta,
                    node_count=s.node_count,
                    link_count=s.link_count,
                    revision=s.revision,
                )
                for s in snapshots
            ),
            key=lambda p: p.meta.project_id,
        )

    def project_ids(self) -> list[str]:
        return sorted(self._snapshots)

    def has_project(self, project_id: str) -> bool:
        return project_id in self._snapshots

    def get_graph(self, project_id: str) -> GraphSnapshot:
        try:
            return self._snapshots[project_id]
        except KeyError:
            raise ProjectNotFoundError(project_id) from None

    def get_graphs(self, project_ids: list[str]) -> list[GraphSnapshot]:
        return [self.get_graph(p) for p in project_ids]


def _replace_file(path: Path, content: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(content, "utf-8")
    os.replace(tmp, path)
