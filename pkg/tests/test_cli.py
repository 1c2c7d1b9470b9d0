"""CLI subcommands end to end against a temp store directory."""

from __future__ import annotations

from pathlib import Path

import pytest

from semunit.cli import main
from semunit.rdfio import parse_trig
from semunit.workspace import Workspace

from .conftest import FIXTURES, WEIGHT_CLASS


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


@pytest.fixture()
def store_dir(tmp_path):
    return str(tmp_path / "store")


class TestIngestProfile:
    def test_ingest_then_profile_counts(self, capsys, store_dir):
        code, out = run(
            capsys, "--store", store_dir, "--seed", "7",
            "ingest", str(FIXTURES / "orchard.ttl"),
        )
        assert code == 0
        assert "19/19 claimed" in out

        code, out = run(capsys, "--store", store_dir, "profile")
        assert code == 0
        assert f"{WEIGHT_CLASS}: 3" in out
        assert "http://example.org/orchard#Apple: 3 instance(s)" in out

    def test_profile_out_writes_csv_and_figures(self, capsys, store_dir, tmp_path):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        outdir = tmp_path / "report"
        code, out = run(capsys, "--store", store_dir, "profile", "--out", str(outdir))
        assert code == 0
        assert (outdir / "unit_classes.csv").exists()
        assert (outdir / "class_instances.csv").exists()
        assert (outdir / "unit_classes.png").stat().st_size > 0
        csv_text = (outdir / "unit_classes.csv").read_text()
        assert str(WEIGHT_CLASS) + ",3" in csv_text


class TestPartitionReport:
    def test_dry_run_report(self, capsys, store_dir):
        code, out = run(
            capsys, "--store", store_dir,
            "partition", str(FIXTURES / "orchard.ttl"), "--report",
        )
        assert code == 0
        assert "19/19 claimed" in out
        # dry run leaves the store empty
        ws = Workspace.open(store_dir)
        assert len(ws.registry) == 0
        ws.close()


class TestQuery:
    def test_fig6_question_file_one_row(self, capsys, store_dir):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        code, out = run(
            capsys, "--store", store_dir, "query", str(FIXTURES / "fig6.question")
        )
        assert code == 0
        assert "apple=http://example.org/orchard#appleX" in out
        assert "1 row(s)" in out

    def test_sparql_flag_prints_query_text(self, capsys, store_dir):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        code, out = run(
            capsys, "--store", store_dir, "query", str(FIXTURES / "fig6.question"), "--sparql"
        )
        assert code == 0
        assert out.startswith("SELECT DISTINCT")


class TestExportImport:
    def test_export_trig_is_wellformed(self, capsys, store_dir):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        ws = Workspace.open(store_dir)
        unit = ws.registry.by_class(WEIGHT_CLASS)[0]
        ws.close()
        code, out = run(
            capsys, "--store", store_dir, "export", "--unit", str(unit.gupri), "--format", "trig"
        )
        assert code == 0
        assert len(parse_trig(out)) == 4

    def test_import_into_second_store(self, capsys, store_dir, tmp_path):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        ws = Workspace.open(store_dir)
        unit = ws.registry.by_class(WEIGHT_CLASS)[0]
        ws.close()
        trig_path = tmp_path / "unit.trig"
        run(
            capsys, "--store", store_dir, "export",
            "--unit", str(unit.gupri), "--out", str(trig_path),
        )
        other = str(tmp_path / "other-store")
        code, out = run(capsys, "--store", other, "import", str(trig_path))
        assert code == 0
        assert str(unit.gupri) in out

    def test_seeded_runs_are_reproducible(self, capsys, tmp_path):
        outputs = []
        for name in ("a", "b"):
            store = str(tmp_path / name)
            run(capsys, "--store", store, "--seed", "99", "ingest", str(FIXTURES / "orchard.ttl"))
            ws = Workspace.open(store)
            outputs.append(sorted(str(u.gupri) for u in ws.registry.all_units()))
            ws.close()
        assert outputs[0] == outputs[1]


class TestBuildAndMindmap:
    def test_build_derives_compounds(self, capsys, store_dir):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        code, out = run(capsys, "--store", store_dir, "build")
        assert code == 0
        assert "items: " in out
        ws = Workspace.open(store_dir)
        from semunit.units import UnitKind

        assert len(ws.registry.by_kind(UnitKind.ITEM)) > 0
        assert len(ws.registry.by_kind(UnitKind.CONTEXT)) == 1
        ws.close()

    def test_mindmap_figure_written(self, capsys, store_dir, tmp_path):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        ws = Workspace.open(store_dir)
        unit = ws.registry.by_class(WEIGHT_CLASS)[0]
        ws.close()
        png = tmp_path / "weight.png"
        code, out = run(
            capsys, "--store", store_dir, "mindmap", "--unit", str(unit.gupri), "--out", str(png)
        )
        assert code == 0
        assert png.stat().st_size > 0


class TestFlagPlacement:
    def test_common_flags_accepted_after_subcommand(self, capsys, tmp_path):
        store = str(tmp_path / "after")
        code, out = run(
            capsys, "ingest", str(FIXTURES / "orchard.ttl"), "--store", store, "--seed", "3"
        )
        assert code == 0
        ws = Workspace.open(store)
        assert len(ws.registry.by_class(WEIGHT_CLASS)) == 3
        ws.close()

    def test_flags_before_subcommand_are_not_clobbered(self, capsys, tmp_path):
        store = str(tmp_path / "before")
        code, _ = run(capsys, "--store", store, "--seed", "3", "ingest", str(FIXTURES / "orchard.ttl"))
        assert code == 0
        ws = Workspace.open(store)
        assert len(ws.registry.by_class(WEIGHT_CLASS)) == 3
        ws.close()


class TestErrors:
    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["--bogus-flag", "profile"])
        assert err.value.code == 2

    def test_missing_unit_reports_error(self, capsys, store_dir):
        run(capsys, "--store", store_dir, "--seed", "7", "ingest", str(FIXTURES / "orchard.ttl"))
        code = main(["--store", store_dir, "export", "--unit", "urn:missing:x"])
        captured = capsys.readouterr()
        assert code == 1
        assert "not_found" in captured.err
