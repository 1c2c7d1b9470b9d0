"""su: command-line front end.

Subcommands: ingest, partition, build, query, export, import, profile,
mindmap, serve. The store directory comes from --store or SU_STORE;
--seed fixes GUPRI minting so runs are reproducible.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import compound, explore, interop, questions, vocab
from .errors import SemUnitError
from .rdfio import parse_turtle
from .partition import partition_graph
from .schemas import render_mindmap
from .terms import Iri
from .units import UnitKind
from .workspace import Workspace, builtin_schema_dir


def _open_workspace(args) -> Workspace:
    store_path = args.store or os.environ.get("SU_STORE") or "./su-store"
    schema_paths = [Path(p) for p in (args.schemas or [])]
    if not schema_paths:
        schema_paths = [builtin_schema_dir()]
    return Workspace.open(
        store_path,
        schema_paths=schema_paths,
        seed=args.seed,
        prefix=args.prefix,
    )


def cmd_ingest(args) -> int:
    ws = _open_workspace(args)
    report = interop.ingest_rdf(args.file, ws.store, ws.registry, ws.schemas)
    print(report.to_text())
    ws.close()
    return 0


def cmd_partition(args) -> int:
    ws = _open_workspace(args)
    triples = [
        t
        for t in parse_turtle(Path(args.file).read_text(encoding="utf-8"))
        if t.predicate != vocab.RESOURCE_KIND
    ]
    _, report = partition_graph(triples, ws.schemas)
    if args.report:
        print(report.to_text())
    else:
        print(json.dumps(report.to_dict(), indent=2))
    ws.close()
    return 0


def cmd_build(args) -> int:
    ws = _open_workspace(args)
    reg = ws.registry
    items = compound.build_item_units(reg)
    groups = compound.build_item_group_units(reg)
    trees = []
    diagnostics = []
    for perspective in ws.schemas.perspectives.values():
        result = compound.build_granularity_tree_units(reg, perspective)
        trees.extend(result.units)
        diagnostics.extend(result.diagnostics)
    granular = [
        compound.build_granular_item_group(reg, tree.gupri).unit for tree in trees
    ]
    contexts = compound.build_context_units(reg, ws.schemas)
    print(
        f"items: {len(items)}  groups: {len(groups)}  trees: {len(trees)}  "
        f"granular groups: {len(granular)}  contexts: {len(contexts)}"
    )
    for diag in diagnostics:
        print(f"skipped ({diag.reason}): {', '.join(str(u) for u in diag.units)}")
    ws.close()
    return 0


def cmd_query(args) -> int:
    ws = _open_workspace(args)
    sources = questions.load_question_file(args.file, ws.schemas)
    question = questions.register_question(ws.registry, sources)
    plan = questions.compile_question(question, ws.schemas)
    if args.sparql:
        print(questions.emit_query_text(plan), end="")
        ws.close()
        return 0
    result = questions.execute(plan, ws.store, ws.registry, ws.schemas)
    if result.ask:
        print("true" if result.boolean else "false")
    else:
        for row in result.rows:
            cells = []
            for name in plan.select_vars:
                term = row.bindings.get(name)
                if term is None:
                    cells.append(f"{name}=")
                elif hasattr(term, "lexical"):
                    cells.append(f"{name}={term.lexical}")
                else:
                    cells.append(f"{name}={term}")
            print("  ".join(cells) + f"  [{len(row.units)} unit(s)]")
        print(f"{len(result.rows)} row(s)")
    ws.close()
    return 0


def cmd_export(args) -> int:
    ws = _open_workspace(args)
    gupri = Iri(args.unit)
    if args.format == "trig":
        payload = interop.export_nanopub(ws.registry, ws.store, ws.schemas, gupri)
        if args.out:
            Path(args.out).write_text(payload, encoding="utf-8")
        else:
            print(payload, end="")
    elif args.format == "archive":
        blob = interop.export_container(ws.registry, ws.store, ws.schemas, gupri)
        out = args.out or "container.zip"
        Path(out).write_bytes(blob)
        print(f"wrote {out}")
    elif args.format == "nquads":
        payload = ws.store.snapshot_nquads()
        if args.out:
            Path(args.out).write_text(payload, encoding="utf-8")
        else:
            print(payload, end="")
    else:
        print(f"unknown export format: {args.format}", file=sys.stderr)
        return 2
    ws.close()
    return 0


def cmd_import(args) -> int:
    ws = _open_workspace(args)
    path = Path(args.file)
    if path.suffix == ".zip":
        unit = interop.import_container(
            ws.store, ws.registry, ws.schemas, path.read_bytes()
        )
    else:
        unit = interop.import_nanopub(
            ws.store, ws.registry, ws.schemas, path.read_text(encoding="utf-8")
        )
    print(f"imported {unit.gupri}")
    ws.close()
    return 0


def cmd_profile(args) -> int:
    ws = _open_workspace(args)
    summary = explore.profile(ws.store, ws.registry, ws.schemas)
    data = summary.to_dict()
    print("unit classes:")
    for cls, count in data["unit_classes"].items():
        print(f"  {cls}: {count}")
    print("ontology classes:")
    for cls, count in data["class_instances"].items():
        print(f"  {cls}: {count} instance(s)")
    for key, dist in data["slots"].items():
        print(f"slot {key}: {dist}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        _write_csv(
            outdir / "unit_classes.csv",
            ["unit_class", "count"],
            sorted(data["unit_classes"].items()),
        )
        _write_csv(
            outdir / "class_instances.csv",
            ["ontology_class", "instances"],
            sorted(data["class_instances"].items()),
        )
        slot_rows = []
        for key, dist in sorted(data["slots"].items()):
            slot_rows.append([key, json.dumps(dist, sort_keys=True)])
        _write_csv(outdir / "slot_distributions.csv", ["slot", "distribution"], slot_rows)
        from .figures import profile_figures

        written = profile_figures(summary, outdir)
        print(f"wrote {outdir}/unit_classes.csv and {len(written)} figure(s)")
    ws.close()
    return 0


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_mindmap(args) -> int:
    ws = _open_workspace(args)
    unit = ws.registry.get(Iri(args.unit))
    schema = ws.schemas.maybe(unit.unit_class)
    if unit.kind != UnitKind.STATEMENT or schema is None:
        print(f"{args.unit} has no schema-driven mind-map", file=sys.stderr)
        ws.close()
        return 1
    graph = render_mindmap(schema, unit, ws.store)
    from .figures import mindmap_figure

    path = mindmap_figure(graph, args.out)
    print(f"wrote {path}")
    ws.close()
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    ws = _open_workspace(args)
    frontend = args.frontend
    if frontend is None:
        candidate = Path(__file__).resolve().parent.parent.parent / "frontend"
        if (candidate / "index.html").exists():
            frontend = candidate
    app = create_app(ws, frontend_dir=frontend)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    # the common flags parse both before and after the subcommand; SUPPRESS
    # keeps an unset sub-level flag from clobbering a main-level value
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument(
        "--store", help="store directory (default: $SU_STORE or ./su-store)"
    )
    common.add_argument(
        "--schemas",
        action="append",
        help="schema file or directory (repeatable; default: built-in schemas)",
    )
    common.add_argument(
        "--seed", type=int, help="seed GUPRI minting for reproducible runs"
    )
    common.add_argument("--prefix", help="GUPRI prefix")

    parser = argparse.ArgumentParser(
        prog="su",
        description="semantic-unit knowledge graph engine",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def sub_parser(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, help=help_text, parents=[common])

    p = sub_parser("ingest", "parse, partition, and register an RDF file")
    p.add_argument("file")
    p.set_defaults(func=cmd_ingest)

    p = sub_parser("partition", "dry-run partition of an RDF file")
    p.add_argument("file")
    p.add_argument("--report", action="store_true", help="print the text report")
    p.set_defaults(func=cmd_partition)

    p = sub_parser("build", "derive item, group, tree, and context units")
    p.set_defaults(func=cmd_build)

    p = sub_parser("query", "run a .question file")
    p.add_argument("file")
    p.add_argument("--sparql", action="store_true", help="print the SPARQL text instead")
    p.set_defaults(func=cmd_query)

    p = sub_parser("export", "export a unit or the whole store")
    p.add_argument("--unit", help="unit GUPRI (trig and archive formats)")
    p.add_argument("--format", default="trig", choices=["trig", "archive", "nquads"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub_parser("import", "import a nanopub (.trig) or archive (.zip)")
    p.add_argument("file")
    p.set_defaults(func=cmd_import)

    p = sub_parser("profile", "summarize store contents")
    p.add_argument("--out", help="also write CSV tables and figures to this directory")
    p.set_defaults(func=cmd_profile)

    p = sub_parser("mindmap", "render a unit's mind-map to a PNG")
    p.add_argument("--unit", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mindmap)

    p = sub_parser("serve", "run the HTTP JSON API (and the explorer, if built)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--frontend", help="explorer directory (default: repo frontend/)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # common flags use SUPPRESS so either position wins; fill the gaps here
    for name, fallback in (
        ("store", None),
        ("schemas", None),
        ("seed", None),
        ("prefix", "urn:uuid:"),
    ):
        if not hasattr(args, name):
            setattr(args, name, fallback)
    try:
        return args.func(args)
    except SemUnitError as exc:
        print(f"error ({exc.code}): {exc}", file=sys.stderr)
        for detail in exc.details:
            print(f"  - {detail}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
