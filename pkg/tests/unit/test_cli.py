"""Unit tests for the command line."""
import orjson
import pytest

from sdnnf_lab.cli import build_parser, main
from sdnnf_lab.errors import UsageError


def run(capsys, *argv: str) -> tuple[int, dict | None, str]:
    code = main(["--log-level", "WARNING", *argv])
    captured = capsys.readouterr()
    payload = orjson.loads(captured.out) if captured.out.strip() else None
    return code, payload, captured.err


@pytest.fixture
def grid2(tmp_path, capsys) -> str:
    prefix = str(tmp_path / "g2")
    code, _, _ = run(capsys, "gen", "grid", "2", "2", "--charges", "target-unsat", "--out", prefix)
    assert code == 0
    return prefix


class TestParser:
    """Test argument parsing."""

    def test_bad_arguments_raise(self):
        """GIVEN an unknown partition mode
        WHEN parsing
        THEN UsageError is raised instead of exiting."""
        with pytest.raises(UsageError):
            build_parser().parse_args(["partition", "g.graph", "--mode", "quartering"])

    def test_dashes_accepted_in_choices(self):
        """GIVEN a dashed charge option
        WHEN parsing
        THEN it maps onto the enum value."""
        args = build_parser().parse_args(["gen", "cycle", "5", "--charges", "single-one"])

        assert args.charges == "single_one"


class TestGen:
    """Test the gen command."""

    def test_grid_counts(self, tmp_path, capsys):
        """GIVEN a 3x3 grid with an odd total charge
        WHEN generating
        THEN one clause per odd-parity assignment of each vertex is written."""
        # Given
        prefix = tmp_path / "grid"

        # When
        code, out, _ = run(
            capsys, "gen", "grid", "3", "3", "--charges", "target-unsat", "--out", str(prefix)
        )

        # Then
        assert code == 0
        assert out["vertices"] == 9
        assert out["edges"] == 12
        assert out["clauses"] == 4 * 2 + 4 * 4 + 8
        assert out["satisfiable"] is False
        assert (tmp_path / "grid.cnf").read_text().count("\n") > 32
        assert (tmp_path / "grid.graph").exists()

    def test_square_grid_from_one_parameter(self, tmp_path, capsys):
        """GIVEN one grid parameter
        WHEN generating
        THEN a square grid is built."""
        code, out, _ = run(capsys, "gen", "grid", "2", "--out", str(tmp_path / "sq"))

        assert code == 0
        assert out["vertices"] == 4
        assert out["clauses"] == 8
        assert out["satisfiable"] is True

    def test_random_charges_need_seed(self, tmp_path, capsys):
        """GIVEN random charges without a seed
        WHEN generating
        THEN the usage exit code is returned."""
        code, _, err = run(capsys, "gen", "cycle", "5", "--charges", "random",
                           "--out", str(tmp_path / "c"))

        assert code == 1
        assert "--seed" in err

    def test_unknown_family(self, tmp_path, capsys):
        """GIVEN an unknown family
        WHEN generating
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "gen", "torus", "3", "--out", str(tmp_path / "t"))

        assert code == 1


class TestCompile:
    """Test the compile command."""

    def test_refutation_with_trace(self, tmp_path, capsys, grid2):
        """GIVEN an unsatisfiable grid formula
        WHEN compiling with a trace and validation
        THEN a refutation is reported and the trace files exist."""
        # When
        code, out, _ = run(
            capsys, "compile", f"{grid2}.cnf", "--trace-out", str(tmp_path / "run"), "--validate"
        )

        # Then
        assert code == 0
        assert out["refutation"] is True
        assert out["final_size"] == 0
        assert out["validation"]["ok"] is True
        assert out["strategy"] == "balanced/input/sequential"
        assert (tmp_path / "run.trace").exists()

    def test_edge_ceiling(self, capsys, grid2):
        """GIVEN an edge ceiling of one
        WHEN compiling
        THEN the run aborts with exit code 2."""
        code, _, _ = run(capsys, "--limit", "1", "compile", f"{grid2}.cnf")

        assert code == 2

    def test_non_positive_limit(self, capsys, grid2):
        """GIVEN a zero edge ceiling
        WHEN compiling
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "--limit", "0", "compile", f"{grid2}.cnf")

        assert code == 1

    def test_record_written(self, tmp_path, capsys, grid2):
        """GIVEN --record
        WHEN compiling
        THEN the run configuration and outcome are saved."""
        record = tmp_path / "run.json"

        code, _, _ = run(capsys, "--record", str(record), "compile", f"{grid2}.cnf")

        saved = orjson.loads(record.read_text())
        assert code == 0
        assert saved["command"] == "compile"
        assert saved["exit_code"] == 0
        assert saved["inputs"] == {"cnf": f"{grid2}.cnf"}


class TestCheck:
    """Test the check command."""

    def test_trace_and_final_circuit(self, tmp_path, capsys, grid2):
        """GIVEN a saved refutation trace
        WHEN checking the trace and the final circuit against the formula
        THEN both pass."""
        # Given
        run(capsys, "compile", f"{grid2}.cnf", "--trace-out", str(tmp_path / "run"))
        last = max(
            tmp_path.glob("run.step*.nnf"), key=lambda p: int(p.name.split(".")[1][4:])
        )

        # When
        trace_code, trace_out, _ = run(capsys, "check", "--trace", str(tmp_path / "run.trace"))
        nnf_code, nnf_out, _ = run(capsys, "check", f"{grid2}.cnf", str(last))

        # Then
        assert trace_code == 0
        assert trace_out["ok"] is True
        assert nnf_code == 0
        assert nnf_out["equal"] is True

    def test_missing_trace(self, tmp_path, capsys):
        """GIVEN a trace path that does not exist
        WHEN checking
        THEN the usage exit code is returned."""
        code, _, err = run(capsys, "check", "--trace", str(tmp_path / "none.trace"))

        assert code == 1
        assert "error:" in err

    def test_nothing_to_check(self, capsys):
        """GIVEN neither files nor a trace
        WHEN checking
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "check")

        assert code == 1


class TestPartition:
    """Test the partition command."""

    def test_seed_required(self, capsys, grid2):
        """GIVEN no seed
        WHEN partitioning
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "partition", f"{grid2}.graph")

        assert code == 1

    def test_side_bound_needs_relaxed(self, capsys, grid2):
        """GIVEN --side-bound without --relaxed
        WHEN partitioning
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "partition", f"{grid2}.graph", "--seed", "1",
                         "--side-bound", "2")

        assert code == 1


class TestBench:
    """Test the bench command."""

    def test_empty_strategy_list(self, tmp_path, capsys):
        """GIVEN an empty strategy list
        WHEN benchmarking
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "bench", "cycle", "3", "4", "--strategies", "",
                         "--csv", str(tmp_path / "b.csv"))

        assert code == 1

    def test_csv_and_plot(self, tmp_path, capsys):
        """GIVEN a small cycle range and one strategy
        WHEN benchmarking
        THEN the CSV holds one row per size and the plot is written."""
        # Given
        csv_path = tmp_path / "b.csv"
        svg_path = tmp_path / "b.svg"

        # When
        code, out, _ = run(
            capsys, "bench", "cycle", "3", "5", "--strategies", "linear/input/sequential",
            "--csv", str(csv_path), "--svg", str(svg_path),
        )

        # Then
        assert code == 0
        assert out["runs"] == 3
        assert out["aborted"] == 0
        assert out["plotted"] == "max_intermediate"
        assert set(out["minimum"]) == {"3", "4", "5"}
        assert len(csv_path.read_text().splitlines()) == 4
        assert "<svg" in svg_path.read_text()

    def test_reversed_range(self, tmp_path, capsys):
        """GIVEN low above high
        WHEN benchmarking
        THEN the usage exit code is returned."""
        code, _, _ = run(capsys, "bench", "cycle", "5", "3", "--csv", str(tmp_path / "b.csv"))

        assert code == 1
