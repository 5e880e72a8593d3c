import pytest

from fusalens import model
from fusalens.fixtures import seed_demo
from fusalens.graph import ElementRecord, GraphSnapshot, LinkRecord, ProjectMeta, build_snapshot
from fusalens.store import ProjectStore


def make_node(
    node_id: str,
    type: str = "SB",
    name: str | None = None,
    asil: str = "-",
    s: str = "-",
    e: str = "-",
    c: str = "-",
) -> ElementRecord:
    return ElementRecord(
        id=node_id,
        name=name if name is not None else f"Node {node_id}",
        type=type,
        asil=model.parse_asil(asil),
        sec=model.parse_sec(s, e, c),
    )


def make_links(triples) -> list[LinkRecord]:
    return [LinkRecord(source=s, target=t, relation=r) for s, t, r in triples]


def make_snapshot(project_id: str, nodes, link_triples=(), revision: int = 1) -> GraphSnapshot:
    meta = ProjectMeta(project_id=project_id, name=f"Project {project_id}", system="Test system")
    return build_snapshot(meta, list(nodes), make_links(link_triples), revision=revision)


@pytest.fixture
def demo_store(tmp_path) -> ProjectStore:
    store = ProjectStore(tmp_path / "data")
    seed_demo(store)
    return store


@pytest.fixture
def f1(demo_store) -> GraphSnapshot:
    return demo_store.get_graph("F1")


@pytest.fixture
def f2(demo_store) -> GraphSnapshot:
    return demo_store.get_graph("F2")


@pytest.fixture
def f3(demo_store) -> GraphSnapshot:
    return demo_store.get_graph("F3")
