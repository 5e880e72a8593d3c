"""Seeded synthetic safety projects for demos and stress testing.

All randomness flows through a `random.Random(seed)` instance, so a given
(seed, size) pair always yields byte-identical projects.
"""

from __future__ import annotations

import random
from typing import Sequence

from .graph import ElementRecord, LinkRecord, ProjectMeta
from .model import (
    Asil,
    Controllability,
    Exposure,
    RiskTable,
    SecTriple,
    Severity,
    UNASSIGNED_SEC,
    default_risk_table,
)

_TYPE_SHARES = (("SB", 0.12), ("MB", 0.20), ("HzE", 0.20), ("SG", 0.14), ("FSR", 0.19), ("TSR", 0.15))

_NAME_POOLS = {
    "SB": (
        "Maintain set speed",
        "Hold target gap",
        "Provide assisted steering",
        "Report charge level",
        "Apply parking force",
        "Warn on lane departure",
    ),
    "MB": (
        "Unintended acceleration",
        "Loss of braking force",
        "Spurious steering torque",
        "Overstated charge level",
        "Delayed brake release",
        "Missing driver warning",
    ),
    "HzE": (
        "Collision with lead vehicle",
        "Rear-end collision",
        "Lane departure into traffic",
        "Vehicle rollaway on slope",
        "Stranding on highway",
        "Thermal event in charger bay",
    ),
    "SG": (
        "Limit acceleration",
        "Ensure braking availability",
        "Limit steering torque",
        "Prevent overcharge",
        "Hold vehicle at standstill",
        "Warn the driver in time",
    ),
    "FSR": (
        "Monitor torque request",
        "Detect pressure loss",
        "Cross-check steering command",
        "Validate cell voltage",
        "Supervise actuator state",
        "Check warning path",
    ),
    "TSR": (
        "Torque plausibility check",
        "Dual-channel pressure sensing",
        "Command range limiter",
        "Voltage comparison window",
        "Actuator watchdog",
        "Lamp driver diagnostic",
    ),
}

_ASSIGNED_ASILS = (Asil.QM, Asil.A, Asil.B, Asil.C, Asil.D)
_SEVERITIES = tuple(s for s in Severity if s.is_assigned)
_EXPOSURES = tuple(e for e in Exposure if e.is_assigned)
_CONTROLLABILITIES = tuple(c for c in Controllability if c.is_assigned)


def _type_counts(total: int) -> dict[str, int]:
    # One of each type is guaranteed; the rest follows the share table with
    # largest fractional remainders winning the leftover slots.
    counts = {t: 1 for t, _ in _TYPE_SHARES}
    remaining = total - len(counts)
    quotas = [(t, remaining * share) for t, share in _TYPE_SHARES]
    for t, quota in quotas:
        counts[t] += int(quota)
    leftover = total - sum(counts.values())
    for t, _ in sorted(quotas, key=lambda q: (int(q[1]) - q[1], q[0])):
        if leftover == 0:
            break
        counts[t] += 1
        leftover -= 1
    return counts


def _name(rng: random.Random, element_type: str, ordinal: int) -> str:
    return f"{rng.choice(_NAME_POOLS[element_type])} {ordinal:03d}"


def _hazard_attrs(rng: random.Random, table: RiskTable) -> tuple[Asil, SecTriple]:
    if rng.random() < 0.8:
        triple = SecTriple(
            severity=rng.choice(_SEVERITIES),
            exposure=rng.choice(_EXPOSURES),
            controllability=rng.choice(_CONTROLLABILITIES),
        )
        return table.lookup(triple), triple
    # Partially assessed hazard: no classification yet.
    triple = SecTriple(
        severity=rng.choice(_SEVERITIES) if rng.random() < 0.3 else Severity.UNASSIGNED,
        exposure=rng.choice(_EXPOSURES) if rng.random() < 0.3 else Exposure.UNASSIGNED,
        controllability=rng.choice(_CONTROLLABILITIES) if rng.random() < 0.3 else Controllability.UNASSIGNED,
    )
    return Asil.UNASSIGNED, triple


def _inherited_asil(rng: random.Random, parent: Asil) -> Asil:
    roll = rng.random()
    if roll < 0.8 and parent.is_assigned:
        return parent
    if roll < 0.9:
        return rng.choice(_ASSIGNED_ASILS)
    return Asil.UNASSIGNED


def _derived_sec(rng: random.Random, parent: SecTriple) -> SecTriple:
    if not parent.is_complete or rng.random() < 0.5:
        return UNASSIGNED_SEC
    triple = parent
    if rng.random() < 0.3:
        # Analyst wrote down a weaker controllability than the hazard's.
        index = parent.controllability.index
        if index is not None and index > 0:
            triple = SecTriple(
                severity=parent.severity,
                exposure=parent.exposure,
                controllability=Controllability(f"C{index - 1}"),
            )
    return triple


def generate_project(
    project_id: str,
    seed: int,
    node_count: int = 120,
    name: str | None = None,
    system: str | None = None,
) -> tuple[ProjectMeta, list[ElementRecord], list[LinkRecord]]:
    """Build a plausible project: SB->MB->HzE->SG->FSR->TSR chains with
    classification-coherent hazards, mostly-inherited ASILs, a few orphans."""
    if node_count < 6:
        raise ValueError("node_count must be at least 6 (one node per element type)")
    rng = random.Random(seed)
    table = default_risk_table()
    counts = _type_counts(node_count)

    ids: dict[str, list[str]] = {t: [] for t, _ in _TYPE_SHARES}
    nodes: list[ElementRecord] = []
    serial = 0
    for element_type, _ in _TYPE_SHARES:
        for _ in range(counts[element_type]):
            serial += 1
            ids[element_type].append(f"{project_id}-n{serial:04d}")

    parent_asil: dict[str, Asil] = {}
    parent_sec: dict[str, SecTriple] = {}
    links: list[LinkRecord] = []
    seen = set()

    def add_link(source: str, target: str, relation: str) -> bool:
        key = (source, target, relation)
        if source == target or key in seen:
            return False
        seen.add(key)
        links.append(LinkRecord(source=source, target=target, relation=relation))
        return True

    for ordinal, node_id in enumerate(ids["SB"], start=1):
        nodes.append(ElementRecord(id=node_id, name=_name(rng, "SB", ordinal), type="SB"))
    for ordinal, node_id in enumerate(ids["MB"], start=1):
        nodes.append(ElementRecord(id=node_id, name=_name(rng, "MB", ordinal), type="MB"))
        if ids["SB"] and rng.random() < 0.9:
            add_link(rng.choice(ids["SB"]), node_id, "relatedMB")
    for ordinal, node_id in enumerate(ids["HzE"], start=1):
        asil, sec = _hazard_attrs(rng, table)
        nodes.append(ElementRecord(id=node_id, name=_name(rng, "HzE", ordinal), type="HzE", asil=asil, sec=sec))
        parent_asil[node_id] = asil
        parent_sec[node_id] = sec
        if ids["MB"] and rng.random() < 0.9:
            for _ in range(rng.randint(1, 2)):
                add_link(rng.choice(ids["MB"]), node_id, "associatedHE")
    for ordinal, node_id in enumerate(ids["SG"], start=1):
        parent = rng.choice(ids["HzE"]) if ids["HzE"] and rng.random() < 0.9 else None
        asil = _inherited_asil(rng, parent_asil[parent]) if parent else rng.choice((Asil.UNASSIGNED,) + _ASSIGNED_ASILS)
        sec = _derived_sec(rng, parent_sec[parent]) if parent else UNASSIGNED_SEC
        nodes.append(ElementRecord(id=node_id, name=_name(rng, "SG", ordinal), type="SG", asil=asil, sec=sec))
        parent_asil[node_id] = asil
        if parent:
            add_link(parent, node_id, "associatedSG")
    for ordinal, node_id in enumerate(ids["FSR"], start=1):
        parent = rng.choice(ids["SG"]) if ids["SG"] and rng.random() < 0.9 else None
        asil = _inherited_asil(rng, parent_asil[parent]) if parent else Asil.UNASSIGNED
        nodes.append(ElementRecord(id=node_id, name=_name(rng, "FSR", ordinal), type="FSR", asil=asil))
        parent_asil[node_id] = asil
        if parent:
            add_link(parent, node_id, "associatedFSR")
    for ordinal, node_id in enumerate(ids["TSR"], start=1):
        parent = rng.choice(ids["FSR"]) if ids["FSR"] and rng.random() < 0.9 else None
        asil = _inherited_asil(rng, parent_asil[parent]) if parent else Asil.UNASSIGNED
        nodes.append(ElementRecord(id=node_id, name=_name(rng, "TSR", ordinal), type="TSR", asil=asil))
        if parent:
            add_link(parent, node_id, "associatedTSR")

    # A sprinkle of same-type refinement links.
    for pool, relation in ((ids["FSR"], "relatedFSR"), (ids["TSR"], "relatedTSR")):
        if len(pool) >= 2:
            for _ in range(max(1, len(pool) // 10)):
                add_link(*rng.sample(pool, 2), relation)

    meta = ProjectMeta(
        project_id=project_id,
        name=name or f"Synthetic project {project_id}",
        system=system or f"System {project_id}",
        department="Safety Engineering",
        in_charge="Generated",
        location="Simulation",
    )
    return meta, nodes, links


def _link_candidates(ids: dict[str, list[str]]) -> list[tuple[str, str, str]]:
    """Deterministic stream of extra valid links, used to top up a project to
    an exact link count."""
    candidates: list[tuple[str, str, str]] = []
    for pool, relation in ((ids["FSR"], "relatedFSR"), (ids["TSR"], "relatedTSR")):
        for i, a in enumerate(pool):
            for b in pool[i + 1 :]:
                candidates.append((a, b, relation))
    for mb in ids["MB"]:
        for hze in ids["HzE"]:
            candidates.append((mb, hze, "associatedHE"))
    for sg in ids["SG"]:
        for fsr in ids["FSR"]:
            candidates.append((sg, fsr, "associatedFSR"))
    return candidates


def set_exact_link_count(
    nodes: Sequence[ElementRecord], links: list[LinkRecord], target: int
) -> list[LinkRecord]:
    """Trim or extend a generated link list to exactly `target` links without
    breaking referential integrity."""
    if len(links) > target:
        return links[:target]
    ids: dict[str, list[str]] = {t: [] for t, _ in _TYPE_SHARES}
    for node in nodes:
        if node.type in ids:
            ids[node.type].append(node.id)
    existing = {link.key for link in links}
    extended = list(links)
    for source, target_id, relation in _link_candidates(ids):
        if len(extended) == target:
            break
        key = (source, target_id, relation)
        if key in existing:
            continue
        existing.add(key)
        extended.append(LinkRecord(source=source, target=target_id, relation=relation))
    if len(extended) != target:
        raise ValueError(f"cannot reach {target} links with only {len(extended)} available")
    return extended


_SHARED_TYPES = ("MB", "MB", "MB", "HzE", "HzE", "HzE", "SG", "SG", "SG", "FSR", "FSR", "FSR", "TSR", "TSR", "TSR")


def _shared_pool(rng: random.Random, table: RiskTable) -> list[ElementRecord]:
    shared = []
    for i, element_type in enumerate(_SHARED_TYPES):
        asil, sec = (Asil.UNASSIGNED, UNASSIGNED_SEC)
        if element_type == "HzE":
            asil, sec = _hazard_attrs(rng, table)
        elif element_type in ("SG", "FSR", "TSR"):
            asil = rng.choice(_ASSIGNED_ASILS)
        shared.append(
            ElementRecord(
                id=f"sh-{i:02d}",
                name=_name(rng, element_type, i + 1),
                type=element_type,
                asil=asil,
                sec=sec,
            )
        )
    return shared


def _reroll_shared_attrs(rng: random.Random, shared: Sequence[ElementRecord], table: RiskTable) -> list[ElementRecord]:
    """Same ids and types, independently rolled ASILs: cross-project conflicts
    on shared elements are part of the point of comparing."""
    rerolled = []
    for node in shared:
        asil, sec = node.asil, node.sec
        if node.type == "HzE":
            asil, sec = _hazard_attrs(rng, table)
        elif node.type in ("SG", "FSR", "TSR") and rng.random() < 0.4:
            asil = rng.choice(_ASSIGNED_ASILS)
        rerolled.append(ElementRecord(id=node.id, name=node.name, type=node.type, asil=asil, sec=sec))
    return rerolled


def _weave_in_shared(
    rng: random.Random,
    nodes: list[ElementRecord],
    links: list[LinkRecord],
    shared: Sequence[ElementRecord],
    link_shared_pairs: bool,
) -> None:
    """Attach each shared node to a couple of local nodes. Only the first
    project of a trio may link two shared nodes to each other, which keeps the
    three-way shared-link intersection empty by construction."""
    by_type: dict[str, list[str]] = {}
    for node in nodes:
        by_type.setdefault(node.type, []).append(node.id)
    seen = {link.key for link in links}

    def add(source: str, target: str, relation: str) -> None:
        key = (source, target, relation)
        if source != target and key not in seen:
            seen.add(key)
            links.append(LinkRecord(source=source, target=target, relation=relation))

    upstream = {"MB": ("SB", "relatedMB"), "HzE": ("MB", "associatedHE"), "SG": ("HzE", "associatedSG"),
                "FSR": ("SG", "associatedFSR"), "TSR": ("FSR", "associatedTSR")}
    downstream = {"MB": ("HzE", "associatedHE"), "HzE": ("SG", "associatedSG"), "SG": ("FSR", "associatedFSR"),
                  "FSR": ("TSR", "associatedTSR")}
    for node in shared:
        parent_type, parent_relation = upstream[node.type]
        parents = by_type.get(parent_type, [])
        if parents:
            add(rng.choice(parents), node.id, parent_relation)
        if node.type in downstream and rng.random() < 0.7:
            child_type, child_relation = downstream[node.type]
            children = by_type.get(child_type, [])
            if children:
                add(node.id, rng.choice(children), child_relation)
    if link_shared_pairs:
        hazards = [n.id for n in shared if n.type == "HzE"]
        goals = [n.id for n in shared if n.type == "SG"]
        for hze, sg in zip(hazards, goals):
            add(hze, sg, "associatedSG")
    nodes.extend(shared)


def generate_trio(
    seed: int = 0,
    first_node_count: int = 318,
    first_link_count: int = 675,
) -> list[tuple[ProjectMeta, list[ElementRecord], list[LinkRecord]]]:
    """Three related projects sharing exactly 15 element ids and no links.

    The first project lands on exactly `first_node_count` nodes and
    `first_link_count` links; the other two differ in size and re-roll the
    shared elements' classifications.
    """
    shared_count = len(_SHARED_TYPES)
    if first_node_count <= shared_count:
        raise ValueError(f"first project needs more than {shared_count} nodes")
    rng = random.Random(seed)
    table = default_risk_table()
    shared = _shared_pool(rng, table)

    trio = []
    sizes = (first_node_count - shared_count, 220, 264)
    for position, (project_id, local_count) in enumerate(zip(("PA", "PB", "PC"), sizes)):
        meta, nodes, links = generate_project(
            project_id,
            seed=rng.randrange(2**31),
            node_count=local_count,
            name=f"Variant {project_id}",
            system="Adaptive Cruise Control",
        )
        pool = shared if position == 0 else _reroll_shared_attrs(rng, shared, table)
        _weave_in_shared(rng, nodes, links, pool, link_shared_pairs=position == 0)
        if position == 0:
            links = set_exact_link_count(nodes, links, first_link_count)
        trio.append((meta, nodes, links))
    return trio
