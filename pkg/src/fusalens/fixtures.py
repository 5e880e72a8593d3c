"""Bundled demo projects.

Three small projects with deliberate review findings: an orphan element,
hazards without safety goals, a weakened controllability on a derived goal,
an ASIL disagreement on an element shared across projects, and a requirement
that does not inherit its parent's ASIL.
"""

from __future__ import annotations

from importlib import resources

from .graph import ElementRecord, LinkRecord, ProjectMeta
from .ingest import parse_links_csv, parse_meta_json, parse_nodes_csv
from .store import ProjectStore

FIXTURE_IDS = ("F1", "F2", "F3")


def load_fixture(fixture_id: str) -> tuple[ProjectMeta, list[ElementRecord], list[LinkRecord]]:
    if fixture_id not in FIXTURE_IDS:
        raise ValueError(f"unknown fixture {fixture_id!r}; bundled fixtures: {', '.join(FIXTURE_IDS)}")
    root = resources.files(__package__) / "fixtures" / fixture_id
    meta = parse_meta_json((root / "meta.json").read_text(encoding="utf-8"))
    nodes = parse_nodes_csv((root / "nodes.csv").read_text(encoding="utf-8"))
    links = parse_links_csv((root / "links.csv").read_text(encoding="utf-8"))
    return meta, nodes, links


def seed_demo(store: ProjectStore) -> list[str]:
    """Commit any bundled project the store does not already have. Returns the
    ids that were committed; re-running against a seeded store is a no-op."""
    committed = []
    for fixture_id in FIXTURE_IDS:
        if store.has_project(fixture_id):
            continue
        meta, nodes, links = load_fixture(fixture_id)
        store.commit_project(meta, nodes, links)
        committed.append(fixture_id)
    return committed
