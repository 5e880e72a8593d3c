"""Consistency checks and summary metrics: orphans, degree filters, unassigned
ASILs, missing-link rules, ASIL inheritance discrepancies, and the
multi-project summary table."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from . import model
from .graph import GraphSnapshot
from .model import Asil

if TYPE_CHECKING:
    from .compare import ComparisonResult


@dataclass(frozen=True)
class LinkRule:
    """Completeness rule: every subject_type node must have an incident link of
    the given relation (orientation ignored) to an object_type node."""

    subject_type: str
    relation: str
    object_type: str
    description: str = ""


DEFAULT_RULES: tuple[LinkRule, ...] = (
    LinkRule("MB", "associatedHE", "HzE", "every MB needs an identified HzE"),
    LinkRule("HzE", "associatedSG", "SG", "every HzE needs an assigned SG"),
    LinkRule("SG", "associatedFSR", "FSR", "every SG must define an FSR"),
    LinkRule("FSR", "associatedTSR", "TSR", "every FSR must define a TSR"),
)

# ASIL inheritance flows from the subject (parent) to the object (child) along
# these relations; MB->HzE is not an inheritance edge because MBs carry no ASIL.
DEFAULT_INHERITANCE_RULES: tuple[LinkRule, ...] = (
    LinkRule("HzE", "associatedSG", "SG", "SG inherits the HzE ASIL"),
    LinkRule("SG", "associatedFSR", "FSR", "FSR inherits the SG ASIL"),
    LinkRule("FSR", "associatedTSR", "TSR", "TSR inherits the FSR ASIL"),
)


def rules_from_json(text: str) -> tuple[LinkRule, ...]:
    """Load a rule set document: a JSON list of {subject_type, relation, object_type}."""
    document = json.loads(text)
    if not isinstance(document, list):
        raise ValueError("rule set document must be a JSON list")
    rules = []
    for i, raw in enumerate(document, start=1):
        try:
            rules.append(
                LinkRule(
                    subject_type=str(raw["subject_type"]),
                    relation=model.canonical_relation(str(raw["relation"])),
                    object_type=str(raw["object_type"]),
                    description=str(raw.get("description", "")),
                )
            )
        except (KeyError, TypeError):
            raise ValueError(f"rule {i} must carry subject_type, relation, object_type")
    return tuple(rules)


@dataclass(frozen=True)
class RuleFinding:
    rule: LinkRule
    violations: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.violations)


@dataclass(frozen=True)
class RuleViolationReport:
    findings: tuple[RuleFinding, ...]

    @property
    def total(self) -> int:
        return sum(f.count for f in self.findings)


@dataclass(frozen=True)
class InheritanceDiscrepancy:
    child_id: str
    parent_ids: tuple[str, ...]
    expected_asil: Asil
    actual_asil: Asil
    relation: str


def find_orphans(snapshot: GraphSnapshot) -> list[str]:
    """Ids of nodes with no incident links, sorted."""
    return [n for n in sorted(snapshot.nodes) if snapshot.degree(n) == 0]


def filter_by_degree(snapshot: GraphSnapshot, minimum: int, maximum: int) -> list[str]:
    """Ids of nodes with minimum <= degree <= maximum, sorted."""
    if minimum > maximum:
        raise ValueError(f"degree range is empty: min {minimum} > max {maximum}")
    return [n for n in sorted(snapshot.nodes) if minimum <= snapshot.degree(n) <= maximum]


def find_unassigned_asil(
    snapshot: GraphSnapshot, type_filter: Iterable[str] | None = None
) -> list[str]:
    """Ids of nodes without an assigned ASIL, optionally restricted to given types."""
    wanted = set(type_filter) if type_filter is not None else None
    return [
        n.id
        for n in sorted(snapshot.nodes.values(), key=lambda n: n.id)
        if not n.asil.is_assigned and (wanted is None or n.type in wanted)
    ]


def check_missing_links(
    snapshot: GraphSnapshot, rules: Sequence[LinkRule] = DEFAULT_RULES
) -> RuleViolationReport:
    """Per rule, the subject-typed nodes lacking any incident link of the rule's
    relation. Link orientation is ignored."""
    findings = []
    for rule in rules:
        violating = []
        for node_id in sorted(snapshot.nodes):
            node = snapshot.nodes[node_id]
            if node.type != rule.subject_type:
                continue
            if not any(l.relation == rule.relation for l in snapshot.incident_links(node_id)):
                violating.append(node_id)
        findings.append(RuleFinding(rule=rule, violations=tuple(violating)))
    return RuleViolationReport(findings=tuple(findings))


def check_asil_inheritance(
    snapshot: GraphSnapshot, rules: Sequence[LinkRule] | None = None
) -> list[InheritanceDiscrepancy]:
    """Children whose assigned ASIL differs from the max-rank assigned ASIL among
    their parents on an inheritance relation.

    Children or parents without an assigned ASIL are skipped; the unassigned
    check owns those findings. Discrepancies are informational, not errors.
    """
    if rules is None:
        rules = DEFAULT_INHERITANCE_RULES
    discrepancies = []
    for rule in rules:
        for child_id in sorted(snapshot.nodes):
            child = snapshot.nodes[child_id]
            if child.type != rule.object_type or not child.asil.is_assigned:
                continue
            parents = [
                p
                for p in snapshot.neighbors(child_id, relation=rule.relation)
                if p.type == rule.subject_type and p.asil.is_assigned
            ]
            if not parents:
                continue
            expected = max(parents, key=lambda p: p.asil.rank).asil
            if child.asil is not expected:
                discrepancies.append(
                    InheritanceDiscrepancy(
                        child_id=child_id,
                        parent_ids=tuple(p.id for p in parents),
                        expected_asil=expected,
                        actual_asil=child.asil,
                        relation=rule.relation,
                    )
                )
    return discrepancies


@dataclass(frozen=True)
class SummaryRow:
    label: str
    counts: dict[str, int]
    shared: int


@dataclass(frozen=True)
class SummaryTable:
    """Per-project count tables for node types, link relations, and ASILs, plus
    the shared-entity column "S"."""

    project_ids: tuple[str, ...]
    types: tuple[SummaryRow, ...]
    relations: tuple[SummaryRow, ...]
    asils: tuple[SummaryRow, ...]

    def column_total(self, rows: tuple[SummaryRow, ...], project_id: str) -> int:
        return sum(r.counts[project_id] for r in rows)

    def shared_total(self, rows: tuple[SummaryRow, ...]) -> int:
        return sum(r.shared for r in rows)

    def to_dict(self) -> dict:
        def rows(section):
            return [
                {"label": r.label, "counts": dict(r.counts), "shared": r.shared}
                for r in section
            ]

        return {
            "projects": list(self.project_ids),
            "types": rows(self.types),
            "relations": rows(self.relations),
            "asils": rows(self.asils),
        }


_ASIL_ROW_ORDER = [Asil.QM, Asil.A, Asil.B, Asil.C, Asil.D, Asil.UNASSIGNED]


def _row_labels(registered: Iterable[str], present: Iterable[str]) -> list[str]:
    labels = list(registered)
    labels.extend(sorted(set(present) - set(labels)))
    return labels


def summarize(
    snapshots: Sequence[GraphSnapshot], shared: "ComparisonResult | None" = None
) -> SummaryTable:
    """Build the summary table for one or more projects.

    With two or more snapshots the "S" column counts entities shared by all of
    them (computed here unless a precomputed comparison is passed); shared-node
    rows are attributed using the first snapshot's node attributes. A single
    project gets an all-zero "S" column.
    """
    if not snapshots:
        raise ValueError("summarize needs at least one snapshot")
    if shared is None and len(snapshots) >= 2:
        from .compare import compare_projects

        shared = compare_projects(snapshots)

    project_ids = tuple(s.project_id for s in snapshots)
    first_id = project_ids[0]

    shared_type_counts: dict[str, int] = {}
    shared_asil_counts: dict[str, int] = {}
    shared_relation_counts: dict[str, int] = {}
    if shared is not None:
        for element in shared.nodes:
            attrs = element.per_project[first_id]
            shared_type_counts[attrs.type] = shared_type_counts.get(attrs.type, 0) + 1
            asil_label = attrs.asil.render()
            shared_asil_counts[asil_label] = shared_asil_counts.get(asil_label, 0) + 1
        for link in shared.links:
            shared_relation_counts[link.relation] = (
                shared_relation_counts.get(link.relation, 0) + 1
            )

    type_labels = _row_labels(
        model.ELEMENT_TYPES, (n.type for s in snapshots for n in s.nodes.values())
    )
    relation_labels = _row_labels(
        model.RELATION_TYPES, (l.relation for s in snapshots for l in s.links)
    )

    type_rows = []
    for label in type_labels:
        counts = {
            s.project_id: sum(1 for n in s.nodes.values() if n.type == label)
            for s in snapshots
        }
        type_rows.append(SummaryRow(label, counts, shared_type_counts.get(label, 0)))

    relation_rows = []
    for label in relation_labels:
        counts = {
            s.project_id: sum(1 for l in s.links if l.relation == label) for s in snapshots
        }
        relation_rows.append(SummaryRow(label, counts, shared_relation_counts.get(label, 0)))

    asil_rows = []
    for asil in _ASIL_ROW_ORDER:
        label = asil.render()
        counts = {
            s.project_id: sum(1 for n in s.nodes.values() if n.asil is asil)
            for s in snapshots
        }
        asil_rows.append(SummaryRow(label, counts, shared_asil_counts.get(label, 0)))

    return SummaryTable(
        project_ids=project_ids,
        types=tuple(type_rows),
        relations=tuple(relation_rows),
        asils=tuple(asil_rows),
    )


@dataclass(frozen=True)
class Finding:
    check: str
    project: str
    node_id: str
    details: str


def collect_findings(
    snapshot: GraphSnapshot,
    rules: Sequence[LinkRule] = DEFAULT_RULES,
    inheritance_rules: Sequence[LinkRule] | None = None,
) -> list[Finding]:
    """Run all checks on one project and flatten the results into report rows."""
    pid = snapshot.project_id
    findings = [Finding("ORPHAN", pid, n, "node has no links") for n in find_orphans(snapshot)]
    findings.extend(
        Finding("UNASSIGNED_ASIL", pid, n, "node has no assigned ASIL")
        for n in find_unassigned_asil(snapshot)
    )
    for rule_finding in check_missing_links(snapshot, rules).findings:
        rule = rule_finding.rule
        findings.extend(
            Finding(
                "MISSING_LINK",
                pid,
                n,
                f"{rule.subject_type} without {rule.relation} to {rule.object_type}",
            )
            for n in rule_finding.violations
        )
    findings.extend(
        Finding(
            "ASIL_INHERITANCE",
            pid,
            d.child_id,
            f"expected {d.expected_asil.render()} from {','.join(d.parent_ids)} "
            f"via {d.relation}, actual {d.actual_asil.render()}",
        )
        for d in check_asil_inheritance(snapshot, inheritance_rules)
    )
    return findings


def findings_csv(findings: Iterable[Finding]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["check", "project", "node", "details"])
    for f in findings:
        writer.writerow([f.check, f.project, f.node_id, f.details])
    return buffer.getvalue()
