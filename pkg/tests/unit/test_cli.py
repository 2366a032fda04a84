"""Unit tests for the command-line driver.

The full pipeline is exercised in the integration tests; here rows come
from stored records or a patched ``compute_row``.
"""

import json

import pytest

from bianchi.arithmetic.field import FieldCtx
from bianchi.cli import main as cli
from bianchi.core.models import AbelianGroup, RunConfig
from bianchi.storage.database import Database
from bianchi.utils.exceptions import (
    DatabaseError,
    ExcludedFieldError,
    GeometryError,
    InvariantViolationError,
    NotSquareFreeError,
    UnmatchedCellError,
)
from tests.fixtures import row_for, synthetic_result


def fake_compute_row(failing: dict[int, Exception]):
    """compute_row stand-in that fails for the given fields."""

    def compute_row(m, db_path, prune_rule, use_cache, update_index=True):
        if m in failing:
            raise failing[m]
        return row_for(m, AbelianGroup(), AbelianGroup(), AbelianGroup(0, (2,)))

    return compute_row


class TestParser:
    """Tests for argument parsing."""

    def test_table_arguments(self, tmp_path):
        args = cli.parse_args(["table", "--dmax", "24", "--jobs", "2", "--json", "--db", str(tmp_path)])
        assert args.command == "table"
        assert (args.dmax, args.jobs, args.json) == (24, 2, True)
        assert args.db == tmp_path
        assert args.prune_rule == "three-vertex"
        assert not args.no_cache

    def test_homology_arguments(self):
        args = cli.parse_args(["homology", "--m", "5", "--prune-rule", "nonempty", "--no-cache", "-vv"])
        assert (args.m, args.prune_rule, args.no_cache, args.verbose) == (5, "nonempty", True, 2)

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            cli.parse_args([])

    def test_unknown_prune_rule(self):
        with pytest.raises(SystemExit):
            cli.parse_args(["polyhedron", "--m", "7", "--prune-rule", "lowest"])


class TestConfigFromArgs:
    """Tests for building the run configuration."""

    def test_table_fields(self, tmp_path):
        config = cli.config_from_args(cli.parse_args(["table", "--dmax", "24", "--db", str(tmp_path)]))
        assert config.m_values == (7, 2, 11, 15, 19, 5, 23, 6)
        assert config.output_format == "text"

    def test_negative_dmax(self):
        with pytest.raises(ValueError, match="nonnegative"):
            cli.config_from_args(cli.parse_args(["table", "--dmax", "-1"]))

    def test_db_from_environment(self, monkeypatch, tmp_path):
        monkeypatch.setenv("BIANCHI_DB", str(tmp_path))
        config = cli.config_from_args(cli.parse_args(["homology", "--m", "7", "--json"]))
        assert config.db_path == tmp_path
        assert config.output_format == "json"


class TestExitCodeFor:
    """Tests for mapping errors to exit codes."""

    @pytest.mark.parametrize(
        "error, code",
        [
            (ExcludedFieldError("m=3"), 2),
            (NotSquareFreeError("m=12"), 2),
            (ValueError("jobs"), 2),
            (GeometryError("tangent"), 3),
            (UnmatchedCellError("edge"), 3),
            (InvariantViolationError("rank H2"), 3),
            (DatabaseError("disk full"), 1),
            (KeyError("x"), 1),
        ],
    )
    def test_codes(self, error, code):
        assert cli.exit_code_for(error) == code


class TestMain:
    """Tests for whole CLI runs."""

    @pytest.mark.parametrize("argv", [["homology", "--m", "1"], ["homology", "--m", "12"], ["polyhedron", "--m", "3"]])
    def test_invalid_field(self, argv, tmp_path, capsys):
        assert cli.main([*argv, "--db", str(tmp_path), "-q"]) == cli.EXIT_INVALID_INPUT
        assert capsys.readouterr().out == ""

    def test_negative_dmax(self, tmp_path):
        assert cli.main(["table", "--dmax", "-5", "--db", str(tmp_path), "-q"]) == cli.EXIT_INVALID_INPUT

    def test_empty_table(self, tmp_path, capsys):
        assert cli.main(["table", "--dmax", "0", "--db", str(tmp_path), "-q"]) == cli.EXIT_OK
        output = capsys.readouterr().out
        assert "Farrell supplement" in output
        assert "FAILED" not in output

    def test_cached_homology(self, tmp_path, capsys):
        Database(tmp_path).store_result(synthetic_result(7))
        assert cli.main(["homology", "--m", "7", "--db", str(tmp_path), "-q"]) == cli.EXIT_OK
        output = capsys.readouterr().out
        assert "-7" in output
        assert "Z/2" in output

    def test_cached_homology_json(self, tmp_path, capsys):
        Database(tmp_path).store_result(synthetic_result(7))
        assert cli.main(["homology", "--m", "7", "--db", str(tmp_path), "--json", "-q"]) == cli.EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["rows"][0]["rendered"]["farrell_supplement"] == "Z/2"

    def test_table_reports_failures(self, monkeypatch, tmp_path, capsys):
        monkeypatch.setattr(cli, "compute_row", fake_compute_row({2: GeometryError("tangent hemispheres")}))
        code = cli.main(["table", "--dmax", "8", "--db", str(tmp_path), "-q"])
        assert code == cli.EXIT_INTERNAL_ASSERTION
        output = capsys.readouterr().out
        assert "-7" in output
        assert "m=2: FAILED (GeometryError: tangent hemispheres)" in output


class TestCmdTable:
    """Tests for the batch driver."""

    def test_failures_do_not_stop_the_batch(self, monkeypatch, tmp_path):
        monkeypatch.setattr(
            cli,
            "compute_row",
            fake_compute_row({11: InvariantViolationError("rank H2 below 1"), 19: ValueError("bad")}),
        )
        config = RunConfig(m_values=(7, 2, 11, 19), db_path=tmp_path)
        rows, failures, worst = cli.cmd_table(config, show_progress=False)
        assert [row.m for row in rows] == [7, 2]
        assert failures == {11: "InvariantViolationError: rank H2 below 1", 19: "ValueError: bad"}
        assert worst == cli.EXIT_INTERNAL_ASSERTION

    def test_index_written_by_the_driver(self, monkeypatch, tmp_path):
        monkeypatch.setattr(cli, "compute_row", fake_compute_row({}))
        config = RunConfig(m_values=(7, 2), db_path=tmp_path)
        cli.cmd_table(config, show_progress=False)
        assert Database(tmp_path).indexed_fields() == [2, 7]

    def test_all_good(self, monkeypatch, tmp_path):
        monkeypatch.setattr(cli, "compute_row", fake_compute_row({}))
        rows, failures, worst = cli.cmd_table(RunConfig(m_values=(5,), db_path=tmp_path), show_progress=False)
        assert len(rows) == 1
        assert failures == {}
        assert worst == cli.EXIT_OK


class TestPolyhedronReuse:
    """A stored polyhedron is reused only when it matches its record."""

    @pytest.fixture
    def recompute(self, monkeypatch):
        fresh = synthetic_result(7).polyhedron
        calls = []

        def compute_polyhedron(ctx, prune_rule):
            calls.append(ctx.m)
            return fresh

        monkeypatch.setattr(cli, "compute_polyhedron", compute_polyhedron)
        return fresh, calls

    def test_intact_polyhedron_is_reused(self, tmp_path, recompute):
        _, calls = recompute
        db = Database(tmp_path)
        db.store_result(synthetic_result(7))
        stored = cli._load_or_compute_polyhedron(db, FieldCtx(7), "three-vertex", use_cache=True)
        assert calls == []
        assert stored.horizon == synthetic_result(7).polyhedron.horizon

    def test_corrupted_polyhedron_is_recomputed(self, tmp_path, recompute):
        fresh, calls = recompute
        db = Database(tmp_path)
        db.store_result(synthetic_result(7))
        path = tmp_path / "m7" / "polyhedron.json"
        document = json.loads(path.read_bytes())
        document["horizon"] = "999"
        path.write_text(json.dumps(document))
        assert cli._load_or_compute_polyhedron(db, FieldCtx(7), "three-vertex", use_cache=True) is fresh
        assert calls == [7]

    def test_polyhedron_without_record_is_recomputed(self, tmp_path, recompute):
        fresh, calls = recompute
        db = Database(tmp_path)
        db.store_polyhedron(synthetic_result(7).polyhedron)
        assert cli._load_or_compute_polyhedron(db, FieldCtx(7), "three-vertex", use_cache=True) is fresh
        assert calls == [7]

    def test_no_cache_always_recomputes(self, tmp_path, recompute):
        fresh, calls = recompute
        db = Database(tmp_path)
        db.store_result(synthetic_result(7))
        assert cli._load_or_compute_polyhedron(db, FieldCtx(7), "three-vertex", use_cache=False) is fresh
        assert calls == [7]
