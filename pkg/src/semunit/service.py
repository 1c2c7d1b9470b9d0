"""HTTP JSON API over a workspace; the explorer UI's only dependency.

Thin adapters: every endpoint delegates to the module functions, so a
sequence of API calls equals the same sequence of direct calls. Writes
take the workspace write lock; reads serve consistent snapshots.
"""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Optional
from urllib.parse import unquote

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from . import compound, explore, interop, partition, questions, vocab
from .errors import NotFoundError, SemUnitError, UnitTypeError, ValidationError
from .schemas import render_mindmap
from .terms import Iri, Literal, Term
from .units import UnitKind, default_metadata
from .workspace import Workspace

STATUS_BY_CODE = {
    "not_found": 404,
    "validation": 422,
    "conflict": 409,
    "format": 400,
    "type_error": 422,
    "integrity": 409,
}

PAGE_SIZE = 100


def _page(items: list, cursor: Optional[str], limit: int) -> dict:
    offset = int(cursor) if cursor else 0
    window = items[offset : offset + limit]
    next_cursor = str(offset + limit) if offset + limit < len(items) else None
    return {"items": window, "next_cursor": next_cursor, "total": len(items)}


def _slot_terms(ws: Workspace, schema, payload: dict) -> dict[str, list[Term]]:
    values: dict[str, list[Term]] = {}
    for name, raw in (payload or {}).items():
        slot = schema.slot(name)
        entries = raw if isinstance(raw, list) else [raw]
        terms: list[Term] = []
        for entry in entries:
            if slot.value_kind == "resource":
                terms.append(Iri(str(entry)))
            else:
                datatype = slot.datatype or Iri("http://www.w3.org/2001/XMLSchema#string")
                terms.append(Literal(str(entry), datatype))
        values[name] = terms
    return values


def _unit_view(ws: Workspace, gupri: Iri) -> dict:
    from .schemas import display_label, walk_instance

    unit = ws.registry.get(gupri)
    view = unit.to_dict()
    view["label"] = explore.unit_label(ws.registry, ws.store, ws.schemas, gupri)
    if unit.subject is not None:
        view["subject_label"] = display_label(ws.store, unit.subject)
    if unit.kind == UnitKind.STATEMENT:
        schema = ws.schemas.maybe(unit.unit_class)
        if schema is not None:
            view["mindmap"] = render_mindmap(schema, unit, ws.store).to_dict()
            walk = walk_instance(
                schema, unit.subject, ws.store.graph_triples(unit.data_graph)
            )
            view["slot_values"] = {
                slot.name: [questions._term_json(v) for v in walk.bindings[slot.name]]
                for slot in schema.slots
            }
        view["data_graph_triples"] = [
            {
                "subject": str(t.subject),
                "predicate": str(t.predicate),
                "object": questions._term_json(t.object),
            }
            for t in sorted(
                ws.store.graph_triples(unit.data_graph), key=lambda t: t.sort_key()
            )
        ]
    view["containing"] = {
        kind.value: [str(g) for g in gupris]
        for kind, gupris in ws.registry.units_containing(gupri).items()
    }
    view["containers"] = [
        {
            "gupri": str(g),
            "kind": ws.registry.get(g).kind.value,
            "label": explore.unit_label(ws.registry, ws.store, ws.schemas, g),
        }
        for g in ws.registry.containers_of(gupri)
    ]
    view["revised_by"] = [str(g) for g in ws.registry.revisions_of(gupri)]
    return view


def create_app(ws: Workspace, frontend_dir=None) -> FastAPI:
    app = FastAPI(title="semantic units service", version="0.1.0")

    if frontend_dir is not None:
        from pathlib import Path

        from fastapi.staticfiles import StaticFiles

        frontend = Path(frontend_dir)
        if (frontend / "index.html").exists():
            if (frontend / "dist").exists():
                app.mount(
                    "/dist", StaticFiles(directory=frontend / "dist"), name="dist"
                )

            @app.get("/", include_in_schema=False)
            def index():
                from fastapi.responses import FileResponse

                return FileResponse(frontend / "index.html")

            @app.get("/styles.css", include_in_schema=False)
            def styles():
                from fastapi.responses import FileResponse

                return FileResponse(frontend / "styles.css")

    @app.exception_handler(SemUnitError)
    async def semunit_error(_req: Request, exc: SemUnitError):
        return JSONResponse(
            status_code=STATUS_BY_CODE.get(exc.code, 400),
            content={
                "code": exc.code,
                "message": str(exc),
                "details": exc.details,
            },
        )

    def iri(raw: str) -> Iri:
        return Iri(unquote(raw))

    # -- read side -------------------------------------------------------

    @app.get("/profile")
    def get_profile():
        summary = explore.profile(ws.store, ws.registry, ws.schemas)
        return summary.to_dict()

    @app.get("/classes")
    def get_classes(cursor: Optional[str] = None, limit: int = PAGE_SIZE):
        summary = explore.profile(ws.store, ws.registry, ws.schemas)
        items = [
            {"iri": str(cls), "instances": count}
            for cls, count in sorted(summary.class_instance_counts.items())
        ]
        return _page(items, cursor, limit)

    @app.get("/unit-classes")
    def get_unit_classes(cursor: Optional[str] = None, limit: int = PAGE_SIZE):
        listed = set(ws.registry.unit_classes())
        listed.update(s.unit_class for s in ws.schemas.all_schemas())
        items = []
        for cls in sorted(listed):
            units = ws.registry.by_class(cls)
            schema = ws.schemas.maybe(cls)
            items.append(
                {
                    "iri": str(cls),
                    "count": len(units),
                    "kind": units[0].kind.value if units else ("statement" if schema else None),
                    "description": schema.description if schema else None,
                    "slots": (
                        [
                            {
                                "name": s.name,
                                "kind": s.value_kind,
                                "datatype": str(s.datatype) if s.datatype else None,
                                "display": s.display,
                            }
                            for s in schema.slots
                        ]
                        if schema
                        else None
                    ),
                    "negatable": schema.negatable if schema else False,
                }
            )
        return _page(items, cursor, limit)

    @app.get("/units/{gupri:path}/label")
    def get_label(gupri: str):
        return {"label": explore.unit_label(ws.registry, ws.store, ws.schemas, iri(gupri))}

    @app.get("/units/{gupri:path}/mindmap")
    def get_mindmap(gupri: str):
        unit = ws.registry.get(iri(gupri))
        schema = ws.schemas.maybe(unit.unit_class)
        if unit.kind != UnitKind.STATEMENT or schema is None:
            raise UnitTypeError(f"{gupri} has no schema-driven mind-map")
        return render_mindmap(schema, unit, ws.store).to_dict()

    @app.get("/units/{gupri:path}/containing")
    def get_containing(gupri: str):
        return {
            kind.value: [str(g) for g in gupris]
            for kind, gupris in ws.registry.units_containing(iri(gupri)).items()
        }

    @app.get("/units/{gupri:path}")
    def get_unit(gupri: str):
        return _unit_view(ws, iri(gupri))

    @app.get("/navtree/{gupri:path}")
    def get_navtree(
        gupri: str,
        link_filter: Optional[str] = Query(default=None),
        statements: bool = Query(default=False),
    ):
        filters = (
            {Iri(unquote(part)) for part in link_filter.split(",") if part}
            if link_filter
            else None
        )
        tree = explore.navigation_tree(
            ws.registry,
            ws.store,
            ws.schemas,
            iri(gupri),
            link_filter=filters,
            include_statements=statements,
        )
        return tree.to_dict()

    @app.get("/zoom/{gupri:path}")
    def get_zoom(gupri: str, level: str = Query(...)):
        try:
            target = explore.ZoomLevel(level)
        except ValueError:
            raise ValidationError(
                f"unknown zoom level {level!r}; use "
                f"{[l.value for l in explore.ZoomLevel]}"
            ) from None
        result = explore.zoom(ws.registry, ws.store, iri(gupri), target)
        if target == explore.ZoomLevel.TRIPLES:
            return {
                "level": level,
                "triples": [
                    {
                        "subject": str(t.subject),
                        "predicate": str(t.predicate),
                        "object": questions._term_json(t.object),
                    }
                    for t in result
                ],
            }
        return {"level": level, "units": [str(g) for g in result]}

    @app.get("/hotspots")
    def get_hotspots(window: str = "all"):
        ranked = explore.hotspots(ws.registry, ws.store, window=window)
        return {
            "window": window,
            "classes": [{"iri": str(cls), "count": count} for cls, count in ranked],
        }

    @app.post("/facets")
    def post_facets(body: dict):
        units = [iri(g) for g in body.get("units", [])]
        filters = [
            explore.FacetFilter(
                facet=f["facet"], value=f.get("value"), slot_key=f.get("slot_key")
            )
            for f in body.get("filters", [])
        ]
        filtered = explore.apply_facets(
            ws.registry, ws.store, ws.schemas, units, filters
        )
        summary = explore.facet_options(ws.registry, ws.store, ws.schemas, filtered)
        return {"units": [str(g) for g in filtered], "facets": summary.to_dict()}

    @app.post("/table")
    def post_table(body: dict):
        units = [iri(g) for g in body.get("units", [])]
        mode = body.get("mode", "statement")
        if mode == "statement":
            table = explore.tabulate_statements(ws.registry, ws.store, ws.schemas, units)
        elif mode == "item":
            table = explore.tabulate_items(ws.registry, ws.store, ws.schemas, units)
        else:
            raise ValidationError(f"table mode must be statement or item, got {mode!r}")
        if body.get("format") == "csv":
            return Response(content=table.to_csv(), media_type="text/csv")
        return table.to_dict()

    @app.get("/export/{gupri:path}")
    def get_export(gupri: str, format: str = "trig"):
        target = iri(gupri)
        if format == "trig":
            text = interop.export_nanopub(ws.registry, ws.store, ws.schemas, target)
            return Response(content=text, media_type="application/trig")
        if format == "archive":
            payload = interop.export_container(ws.registry, ws.store, ws.schemas, target)
            return Response(content=payload, media_type="application/zip")
        raise ValidationError(f"export format must be trig or archive, got {format!r}")

    # -- write side ------------------------------------------------------

    @app.post("/statements", status_code=201)
    def post_statement(body: dict):
        with ws.write_lock:
            schema = ws.schemas.get(Iri(str(body["schema"])))
            bindings = partition.SlotBindings(
                subject=Iri(str(body["subject"])),
                values=_slot_terms(ws, schema, body.get("slots", {})),
            )
            revises = Iri(str(body["revises"])) if body.get("revises") else None
            unit = partition.mint_statement_unit(
                ws.store,
                ws.registry,
                schema,
                bindings,
                negated=bool(body.get("negated")),
                revises=revises,
            )
            return _unit_view(ws, unit.gupri)

    @app.post("/statements/{gupri:path}/negate", status_code=201)
    def post_negate(gupri: str):
        with ws.write_lock:
            unit = ws.registry.get(iri(gupri))
            if unit.kind != UnitKind.STATEMENT:
                raise UnitTypeError(f"{gupri} is not a statement unit")
            schema = ws.schemas.maybe(unit.unit_class)
            if schema is None:
                raise UnitTypeError(f"{gupri} has no schema; cannot negate")
            from .schemas import walk_instance

            walk = walk_instance(
                schema, unit.subject, ws.store.graph_triples(unit.data_graph)
            )
            bindings = partition.SlotBindings(
                subject=unit.subject,
                values={k: v for k, v in walk.bindings.items() if v},
            )
            negated = partition.mint_statement_unit(
                ws.store, ws.registry, schema, bindings, negated=not unit.negated
            )
            return _unit_view(ws, negated.gupri)

    @app.post("/about/{gupri:path}", status_code=201)
    def post_about(gupri: str, body: dict):
        with ws.write_lock:
            schema = ws.schemas.get(Iri(str(body["schema"])))
            unit = partition.statement_about_unit(
                ws.store,
                ws.registry,
                schema,
                iri(gupri),
                _slot_terms(ws, schema, body.get("slots", {})),
                negated=bool(body.get("negated")),
            )
            return _unit_view(ws, unit.gupri)

    @app.post("/questions", status_code=201)
    def post_question(body: dict):
        with ws.write_lock:
            sources = questions.sources_from_spec(body, ws.schemas)
            question = questions.register_question(ws.registry, sources)
            plan = questions.compile_question(question, ws.schemas)
            return {
                "gupri": str(question.gupri),
                "boolean_mode": question.boolean_mode,
                "join_vars": question.join_vars(),
                "select_vars": plan.select_vars,
            }

    @app.post("/questions/{gupri:path}/execute")
    def post_execute(gupri: str, cursor: Optional[str] = None, limit: int = PAGE_SIZE):
        unit = ws.registry.get(iri(gupri))
        question = questions.QuestionUnit.from_unit(unit)
        plan = questions.compile_question(question, ws.schemas)
        result = questions.execute(plan, ws.store, ws.registry, ws.schemas)
        if result.ask:
            return {"boolean": result.boolean}
        payload = result.to_dict()["rows"]
        return _page(payload, cursor, limit)

    @app.get("/questions/{gupri:path}/sparql")
    def get_sparql(gupri: str):
        unit = ws.registry.get(iri(gupri))
        question = questions.QuestionUnit.from_unit(unit)
        plan = questions.compile_question(question, ws.schemas)
        return Response(
            content=questions.emit_query_text(plan),
            media_type="application/sparql-query",
        )

    @app.post("/ingest")
    def post_ingest(body: dict):
        with ws.write_lock:
            if "text" in body:
                import tempfile

                with tempfile.NamedTemporaryFile(
                    "w", suffix=".ttl", delete=False, encoding="utf-8"
                ) as fh:
                    fh.write(body["text"])
                    path = fh.name
            elif "path" in body:
                path = body["path"]
            else:
                raise ValidationError("ingest body needs 'text' or 'path'")
            report = interop.ingest_rdf(path, ws.store, ws.registry, ws.schemas)
            return report.to_dict()

    return app
