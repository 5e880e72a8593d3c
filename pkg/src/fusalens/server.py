"""HTTP service over the project store and analyses.

Error contract: 400 names the offending parameter, 404 names the missing
project or node, 422 carries the full validation report of a rejected upload.
"""

from __future__ import annotations

import json
import logging
import time
from importlib import resources

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from . import analytics, compare, ingest, trace
from .layout import LayoutConfig, SizeBy, layout_project
from .model import ParseError, canonical_relation
from .store import ProjectStore, ProjectValidationError

logger = logging.getLogger("fusalens.api")

CHECK_NAMES = ("orphans", "unassigned", "missing", "inheritance")


class BadRequestError(ValueError):
    """Raised by handlers for malformed parameters; message names the parameter."""


def load_interface_document() -> dict:
    text = (resources.files(__package__) / "schemas" / "api.json").read_text(encoding="utf-8")
    return json.loads(text)


def _error_body(code: str, message: str, report: dict | None = None) -> dict:
    body: dict = {"error": {"code": code, "message": message}}
    if report is not None:
        body["report"] = report
    return body


def _report_dict(report: ingest.ValidationReport) -> dict:
    return {"ok": report.ok, **report.to_dict()}


def _node_dict(node) -> dict:
    return ingest.node_to_dict(node)


def _step_dict(step: trace.TraceStep) -> dict:
    s, e, c = step.sec.render()
    return {
        "id": step.id,
        "name": step.name,
        "type": step.type,
        "asil": step.asil.render(),
        "severity": s,
        "exposure": e,
        "controllability": c,
    }


def _graph_dict(snapshot) -> dict:
    return {
        "meta": ingest.meta_to_dict(snapshot.meta),
        "revision": snapshot.revision,
        "nodes": [_node_dict(n) for n in snapshot.nodes.values()],
        "links": [ingest.link_to_dict(l) for l in snapshot.links],
    }


def _split_csv_param(raw: str, parameter: str) -> list[str]:
    values = [item.strip() for item in raw.split(",") if item.strip()]
    if not values:
        raise BadRequestError(f"parameter {parameter!r} must list at least one value")
    return values


def _parse_pinned(raw: str) -> dict[str, tuple[float, float]]:
    pinned: dict[str, tuple[float, float]] = {}
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise BadRequestError(
                f"parameter 'pinned' entry {chunk!r} is not of the form key:x:y"
            )
        key, x, y = parts
        try:
            pinned[key] = (float(x), float(y))
        except ValueError:
            raise BadRequestError(
                f"parameter 'pinned' entry {chunk!r} has non-numeric coordinates"
            ) from None
    return pinned


async def _read_json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise BadRequestError("request body is not valid JSON") from None
    if not isinstance(body, dict):
        raise BadRequestError("request body must be a JSON object")
    return body


def _require_str(body: dict, field: str) -> str:
    value = body.get(field)
    if not isinstance(value, str) or not value:
        raise BadRequestError(f"body field {field!r} must be a non-empty string")
    return value


def create_app(store: ProjectStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="fusalens", docs_url=None, redoc_url=None, openapi_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        logger.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - started) * 1000,
        )
        return response

    @app.exception_handler(LookupError)
    async def not_found(request: Request, exc: LookupError):
        return JSONResponse(status_code=404, content=_error_body("NOT_FOUND", str(exc)))

    @app.exception_handler(ProjectValidationError)
    async def rejected(request: Request, exc: ProjectValidationError):
        return JSONResponse(
            status_code=422,
            content=_error_body(
                "VALIDATION_FAILED", "project rejected", _report_dict(exc.report)
            ),
        )

    @app.exception_handler(ValueError)
    async def bad_request(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content=_error_body("BAD_REQUEST", str(exc)))

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        names = sorted({str(error["loc"][-1]) for error in exc.errors()})
        return JSONResponse(
            status_code=400,
            content=_error_body("BAD_REQUEST", f"malformed parameter(s): {', '.join(names)}"),
        )

    @app.get("/api/schema")
    async def get_schema():
        return load_interface_document()

    @app.get("/api/projects")
    async def list_projects():
        return {
            "projects": [
                {
                    "meta": ingest.meta_to_dict(p.meta),
                    "nodes": p.node_count,
                    "links": p.link_count,
                    "revision": p.revision,
                }
                for p in store.list_projects()
            ]
        }

    @app.post("/api/projects", status_code=201)
    async def upload_project(request: Request):
        content_type = request.headers.get("content-type", "")
        try:
            if content_type.startswith("multipart/form-data"):
                form = await request.form()
                missing = [part for part in ("meta", "nodes") if part not in form]
                if missing:
                    raise BadRequestError(f"missing upload part(s): {', '.join(missing)}")

                async def part_bytes(name: str) -> bytes:
                    value = form[name]
                    if isinstance(value, str):
                        return value.encode("utf-8")
                    return await value.read()

                meta = ingest.parse_meta_json(await part_bytes("meta"))
                nodes = ingest.parse_nodes_csv(await part_bytes("nodes"))
                links = (
                    ingest.parse_links_csv(await part_bytes("links")) if "links" in form else []
                )
            else:
                body = await request.body()
                meta, nodes, links = ingest.parse_project_json(body)
        except ParseError as exc:
            report = ingest.ValidationReport(
                errors=[
                    ingest.ValidationIssue(
                        code="PARSE_ERROR", message=str(exc), row=exc.row or 0
                    )
                ]
            )
            return JSONResponse(
                status_code=422,
                content=_error_body("VALIDATION_FAILED", str(exc), _report_dict(report)),
            )
        report = ingest.validate_project(nodes, links)
        store.commit_project(meta, nodes, links)  # raises 422 path when report has errors
        snapshot = store.get_graph(meta.project_id)
        return {
            "project": ingest.meta_to_dict(snapshot.meta),
            "nodes": snapshot.node_count,
            "links": snapshot.link_count,
            "revision": snapshot.revision,
            "report": _report_dict(report),
        }

    @app.get("/api/projects/{project}/graph")
    async def get_graph(project: str):
        return _graph_dict(store.get_graph(project))

    @app.get("/api/projects/{project}/layout")
    async def get_layout(
        project: str,
        groupBy: str = "type",
        sizeBy: str = "constant",
        colorBy: str = "type",
        seed: int = 0,
        pinned: str = "",
    ):
        snapshot = store.get_graph(project)
        config = LayoutConfig(
            group_by=groupBy, size_by=SizeBy.from_token(sizeBy), color_by=colorBy, seed=seed
        )
        result = layout_project(snapshot, config, _parse_pinned(pinned))
        return {
            "groupBy": groupBy,
            "sizeBy": config.size_by.value,
            "colorBy": colorBy,
            "seed": seed,
            **result.to_dict(),
        }

    @app.get("/api/projects/{project}/nodes/search")
    async def search_nodes(project: str, q: str = ""):
        snapshot = store.get_graph(project)
        return {
            "project": project,
            "query": q,
            "matches": [_node_dict(n) for n in snapshot.search_nodes(q)],
        }

    @app.get("/api/projects/{project}/nodes/{node_id}/neighbors")
    async def get_neighbors(project: str, node_id: str, relation: str = ""):
        snapshot = store.get_graph(project)
        node = snapshot.node(node_id)
        wanted = canonical_relation(relation) if relation else None
        neighbors = snapshot.neighbors(node_id, relation=wanted)
        links = [
            l
            for l in snapshot.incident_links(node_id)
            if wanted is None or l.relation == wanted
        ]
        return {
            "project": project,
            "node": _node_dict(node),
            "neighbors": [_node_dict(n) for n in neighbors],
            "links": [ingest.link_to_dict(l) for l in links],
        }

    @app.get("/api/projects/{project}/checks")
    async def run_checks(
        project: str,
        checks: str = ",".join(CHECK_NAMES),
        types: str = "",
        degreeMin: int | None = None,
        degreeMax: int | None = None,
    ):
        snapshot = store.get_graph(project)
        requested = _split_csv_param(checks, "checks")
        unknown = [c for c in requested if c not in CHECK_NAMES]
        if unknown:
            raise BadRequestError(
                f"parameter 'checks' has unknown value(s): {', '.join(unknown)};"
                f" known checks: {', '.join(CHECK_NAMES)}"
            )
        type_filter = set(_split_csv_param(types, "types")) if types else None

        def keep(node_ids: list[str]) -> list[str]:
            if type_filter is None:
                return node_ids
            return [i for i in node_ids if snapshot.nodes[i].type in type_filter]

        results: dict = {}
        if "orphans" in requested:
            results["orphans"] = keep(analytics.find_orphans(snapshot))
        if "unassigned" in requested:
            results["unassigned"] = analytics.find_unassigned_asil(snapshot, type_filter)
        if "missing" in requested:
            report = analytics.check_missing_links(snapshot)
            results["missing"] = {
                "rules": [
                    {
                        "subject_type": f.rule.subject_type,
                        "relation": f.rule.relation,
                        "object_type": f.rule.object_type,
                        "description": f.rule.description,
                        "violations": list(f.violations),
                        "count": f.count,
                    }
                    for f in report.findings
                ],
                "total": report.total,
            }
        if "inheritance" in requested:
            results["inheritance"] = [
                {
                    "child_id": d.child_id,
                    "parent_ids": list(d.parent_ids),
                    "expected_asil": d.expected_asil.render(),
                    "actual_asil": d.actual_asil.render(),
                    "relation": d.relation,
                }
                for d in analytics.check_asil_inheritance(snapshot)
            ]
        if degreeMin is not None or degreeMax is not None:
            low = degreeMin if degreeMin is not None else 0
            high = degreeMax if degreeMax is not None else max(
                (snapshot.degree(n) for n in snapshot.nodes), default=0
            )
            results["degree"] = keep(analytics.filter_by_degree(snapshot, low, high))
        return {"project": project, "revision": snapshot.revision, "results": results}

    @app.post("/api/projects/{project}/trace")
    async def run_trace(project: str, request: Request):
        snapshot = store.get_graph(project)
        body = await _read_json_body(request)
        source = _require_str(body, "source")
        destination = _require_str(body, "destination")
        mode = trace.TraceMode.from_token(str(body.get("mode", "undirected")))
        path = trace.find_path(
            snapshot, trace.PathQuery(source=source, destination=destination, mode=mode)
        )
        if path is None:
            return {
                "project": project,
                "mode": mode.value,
                "found": False,
                "path": None,
                "steps": [],
                "asils": [],
                "flags": [],
            }
        result = trace.trace_asils(snapshot, path)
        return {
            "project": project,
            "mode": mode.value,
            "found": True,
            "path": {
                "nodes": list(path.nodes),
                "links": [ingest.link_to_dict(l) for l in path.links],
            },
            "steps": [_step_dict(s) for s in result.steps],
            "asils": [s.asil.render() for s in result.steps],
            "flags": [
                {
                    "node_id": f.node_id,
                    "component": f.component,
                    "actual": f.actual,
                    "expected": f.expected,
                    "from_node": f.from_node,
                }
                for f in result.flags
            ],
        }

    @app.get("/api/summary")
    async def get_summary(projects: str = ""):
        ids = _split_csv_param(projects, "projects")
        snapshots = store.get_graphs(ids)
        return analytics.summarize(snapshots).to_dict()

    @app.get("/api/compare/shared")
    async def get_shared(projects: str = ""):
        ids = _split_csv_param(projects, "projects")
        if len(ids) < 2:
            raise BadRequestError("parameter 'projects' must list at least two projects")
        snapshots = store.get_graphs(ids)
        result = compare.compare_projects(snapshots)
        nodes = []
        for element in result.nodes:
            highlight = compare.cross_highlight(element.id, snapshots)
            per_project = {}
            for project_id, attrs in element.per_project.items():
                s, e, c = attrs.sec.render()
                info = highlight.per_project[project_id]
                per_project[project_id] = {
                    "type": attrs.type,
                    "asil": attrs.asil.render(),
                    "severity": s,
                    "exposure": e,
                    "controllability": c,
                    "degree": attrs.degree,
                    "neighbor_ids": list(info.neighbor_ids),
                    "by_relation": dict(info.by_relation),
                }
            nodes.append(
                {
                    "id": element.id,
                    "name": element.name,
                    "asil_conflict": element.asil_conflict,
                    "per_project": per_project,
                }
            )
        return {
            "projects": ids,
            "nodes": nodes,
            "links": [
                {"source": l.source, "target": l.target, "relation": l.relation}
                for l in result.links
            ],
            "subgraph": _graph_dict(result.subgraph),
            "layout": layout_project(result.subgraph).to_dict(),
        }

    @app.post("/api/export/csv")
    async def export_csv(request: Request):
        body = await _read_json_body(request)
        project = _require_str(body, "project")
        node_ids = body.get("nodeIds")
        if not isinstance(node_ids, list) or not all(isinstance(i, str) for i in node_ids):
            raise BadRequestError("body field 'nodeIds' must be a list of node ids")
        snapshot = store.get_graph(project)
        csv_text = ingest.export_selection_csv(snapshot, node_ids)
        return PlainTextResponse(
            csv_text,
            media_type="text/csv",
            headers={"Content-Disposition": f'attachment; filename="{project}-selection.csv"'},
        )

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
