"""Domain vocabulary: ASIL algebra, S-E-C values, type registries, risk table."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum


class ParseError(ValueError):
    """Raised when a token cannot be parsed into a domain value."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class Asil(Enum):
    """Automotive Safety Integrity Level. QM is the lowest assigned level, D the highest."""

    UNASSIGNED = "-"
    QM = "QM"
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def is_assigned(self) -> bool:
        return self is not Asil.UNASSIGNED

    @property
    def rank(self) -> int | None:
        """Ordinal rank QM=0 .. D=4; None for UNASSIGNED."""
        return _ASIL_RANK.get(self)

    def render(self) -> str:
        return self.value


_ASIL_RANK = {Asil.QM: 0, Asil.A: 1, Asil.B: 2, Asil.C: 3, Asil.D: 4}


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    UNORDERED = "unordered"


def parse_asil(token: str) -> Asil:
    """Parse an ASIL token (case-insensitive, trimmed). "-" or empty means unassigned."""
    text = token.strip()
    if text in ("", "-"):
        return Asil.UNASSIGNED
    upper = text.upper()
    for value in (Asil.QM, Asil.A, Asil.B, Asil.C, Asil.D):
        if upper == value.value:
            return value
    raise ParseError(f"not an ASIL token: {token!r}")


def render_asil(asil: Asil) -> str:
    return asil.render()


def compare_asil(a: Asil, b: Asil) -> Ordering:
    """Order two ASILs by rank; UNORDERED if either side is unassigned."""
    if not a.is_assigned or not b.is_assigned:
        return Ordering.UNORDERED
    if a.rank < b.rank:
        return Ordering.LESS
    if a.rank > b.rank:
        return Ordering.GREATER
    return Ordering.EQUAL


class SecLevel(Enum):
    """Base for the three S-E-C component scales."""

    @property
    def is_assigned(self) -> bool:
        return self.value != "-"

    @property
    def index(self) -> int | None:
        """Numeric level within the component's scale; None when unassigned."""
        return None if self.value == "-" else int(self.value[1:])

    def render(self) -> str:
        return self.value


class Severity(SecLevel):
    UNASSIGNED = "-"
    S0 = "S0"
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"


class Exposure(SecLevel):
    UNASSIGNED = "-"
    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    E4 = "E4"


class Controllability(SecLevel):
    UNASSIGNED = "-"
    C0 = "C0"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"


def _parse_level(cls, component: str, token: str):
    text = token.strip()
    if text in ("", "-"):
        return cls.UNASSIGNED
    upper = text.upper()
    for member in cls:
        if member.value == upper:
            return member
    raise ParseError(f"not a {component} token: {token!r}")


def parse_severity(token: str) -> Severity:
    return _parse_level(Severity, "severity", token)


def parse_exposure(token: str) -> Exposure:
    return _parse_level(Exposure, "exposure", token)


def parse_controllability(token: str) -> Controllability:
    return _parse_level(Controllability, "controllability", token)


@dataclass(frozen=True)
class SecTriple:
    """Severity-Exposure-Controllability decomposition of an ASIL. Components are independently optional."""

    severity: Severity = Severity.UNASSIGNED
    exposure: Exposure = Exposure.UNASSIGNED
    controllability: Controllability = Controllability.UNASSIGNED

    @property
    def is_complete(self) -> bool:
        return (
            self.severity.is_assigned
            and self.exposure.is_assigned
            and self.controllability.is_assigned
        )

    def render(self) -> tuple[str, str, str]:
        return (self.severity.value, self.exposure.value, self.controllability.value)


UNASSIGNED_SEC = SecTriple()


def parse_sec(s_token: str, e_token: str, c_token: str) -> SecTriple:
    return SecTriple(
        severity=parse_severity(s_token),
        exposure=parse_exposure(e_token),
        controllability=parse_controllability(c_token),
    )


@dataclass(frozen=True)
class ElementType:
    label: str
    description: str = ""


@dataclass(frozen=True)
class RelationType:
    label: str
    subject_type: str
    object_type: str


# Registered element types, in canonical display order. The registry is open:
# unknown labels are admitted by parsers and flagged by validation.
ELEMENT_TYPES: dict[str, ElementType] = {
    t.label: t
    for t in (
        ElementType("SB", "System Behavior"),
        ElementType("MB", "Malfunctioning Behavior"),
        ElementType("HzE", "Hazardous Event"),
        ElementType("SG", "Safety Goal"),
        ElementType("FSR", "Functional Safety Requirement"),
        ElementType("TSR", "Technical Safety Requirement"),
    )
}

RELATION_TYPES: dict[str, RelationType] = {
    r.label: r
    for r in (
        RelationType("relatedMB", "SB", "MB"),
        RelationType("associatedHE", "MB", "HzE"),
        RelationType("associatedSG", "HzE", "SG"),
        RelationType("associatedFSR", "SG", "FSR"),
        RelationType("associatedTSR", "FSR", "TSR"),
        RelationType("relatedFSR", "FSR", "FSR"),
        RelationType("relatedTSR", "TSR", "TSR"),
    )
}

# Accepted spelling variants, resolved at parse time; stored form is canonical.
RELATION_ALIASES: dict[str, str] = {
    "associatedSafetyGoal": "associatedSG",
}


def canonical_relation(label: str) -> str:
    return RELATION_ALIASES.get(label, label)


def is_registered_type(label: str) -> bool:
    return label in ELEMENT_TYPES


def is_registered_relation(label: str) -> bool:
    return canonical_relation(label) in RELATION_TYPES


_SEVERITY_LEVELS = 4
_EXPOSURE_LEVELS = 5
_CONTROLLABILITY_LEVELS = 4


class RiskTable:
    """Total mapping from complete S-E-C triples to ASILs.

    The default table is an additive shorthand: any component at level 0 yields
    QM; otherwise the level sum k maps 10->D, 9->C, 8->B, 7->A, and k<=6->QM.
    Deployments can load a replacement table; it must cover all 80 complete
    triples with assigned ASILs and be monotone in every component.
    """

    def __init__(self, entries: dict[tuple[int, int, int], Asil]):
        self._validate(entries)
        self._entries = dict(entries)

    @staticmethod
    def _validate(entries: dict[tuple[int, int, int], Asil]) -> None:
        expected = {
            (s, e, c)
            for s in range(_SEVERITY_LEVELS)
            for e in range(_EXPOSURE_LEVELS)
            for c in range(_CONTROLLABILITY_LEVELS)
        }
        missing = expected - set(entries)
        extra = set(entries) - expected
        if missing or extra:
            def names(keys):
                return ", ".join(f"S{s}E{e}C{c}" for s, e, c in sorted(keys)[:5])

            detail = []
            if missing:
                detail.append(f"missing {names(missing)}")
            if extra:
                detail.append(f"unknown {names(extra)}")
            raise ValueError(
                f"risk table must cover exactly the 80 complete triples: {'; '.join(detail)}"
            )
        for key, value in entries.items():
            if not value.is_assigned:
                raise ValueError(f"risk table entry {key} has no assigned ASIL")
        for (s, e, c), value in entries.items():
            for ds, de, dc in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                neighbor = (s + ds, e + de, c + dc)
                if neighbor in entries and entries[neighbor].rank < value.rank:
                    raise ValueError(
                        f"risk table not monotone: {neighbor} ranks below {(s, e, c)}"
                    )

    @classmethod
    def default(cls) -> "RiskTable":
        entries = {}
        for s in range(_SEVERITY_LEVELS):
            for e in range(_EXPOSURE_LEVELS):
                for c in range(_CONTROLLABILITY_LEVELS):
                    entries[(s, e, c)] = cls._default_asil(s, e, c)
        return cls(entries)

    @staticmethod
    def _default_asil(s: int, e: int, c: int) -> Asil:
        if s == 0 or e == 0 or c == 0:
            return Asil.QM
        total = s + e + c
        if total >= 10:
            return Asil.D
        if total == 9:
            return Asil.C
        if total == 8:
            return Asil.B
        if total == 7:
            return Asil.A
        return Asil.QM

    @classmethod
    def from_mapping(cls, mapping: dict[str, str]) -> "RiskTable":
        """Build from a {"S{s}E{e}C{c}": asil_token} document covering all 80 triples."""
        entries = {}
        for key, token in mapping.items():
            try:
                triple = parse_sec(key[0:2], key[2:4], key[4:6])
            except (ParseError, IndexError):
                raise ValueError(f"malformed risk table key: {key!r}")
            if len(key) != 6 or not triple.is_complete:
                raise ValueError(f"malformed risk table key: {key!r}")
            entries[
                (triple.severity.index, triple.exposure.index, triple.controllability.index)
            ] = parse_asil(token)
        return cls(entries)

    @classmethod
    def from_json(cls, text: str) -> "RiskTable":
        document = json.loads(text)
        if not isinstance(document, dict):
            raise ValueError("risk table document must be a JSON object")
        return cls.from_mapping(document)

    def lookup(self, triple: SecTriple) -> Asil:
        if not triple.is_complete:
            raise ValueError("incomplete S-E-C: all three components must be assigned")
        return self._entries[
            (triple.severity.index, triple.exposure.index, triple.controllability.index)
        ]


_DEFAULT_RISK_TABLE: RiskTable | None = None


def default_risk_table() -> RiskTable:
    global _DEFAULT_RISK_TABLE
    if _DEFAULT_RISK_TABLE is None:
        _DEFAULT_RISK_TABLE = RiskTable.default()
    return _DEFAULT_RISK_TABLE


def asil_from_sec(triple: SecTriple, table: RiskTable | None = None) -> Asil:
    """Classify a complete S-E-C triple through the risk table."""
    return (table or default_risk_table()).lookup(triple)
