"""Workbench for functional-safety networks: multi-project graph store,
consistency and traceability analyses, deterministic layout, HTTP service."""

__version__ = "0.1.0"

from .graph import ElementRecord, GraphSnapshot, LinkRecord, ProjectMeta, build_snapshot
from .model import Asil, RiskTable, SecTriple, default_risk_table
from .store import ProjectStore

__all__ = [
    "Asil",
    "ElementRecord",
    "GraphSnapshot",
    "LinkRecord",
    "ProjectMeta",
    "ProjectStore",
    "RiskTable",
    "SecTriple",
    "build_snapshot",
    "default_risk_table",
    "__version__",
]
