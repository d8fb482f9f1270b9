"""Command-line pipeline tests.

Each stage is run through ``CliRunner`` and checked against the library
call it wraps; the report stage is additionally compared byte for byte
against live service responses, which is the contract that makes batch
output and the interactive view interchangeable.
"""

import json

import numpy as np
import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from gnnscope.analysis import PLANES
from gnnscope.cli import REPORT_AXES, main
from gnnscope.graph_store import load_dataset
from gnnscope.metrics import compute_table
from gnnscope.models import load_bundle
from gnnscope.service import build_snapshot, create_app

from conftest import SIX_NODE_DOC


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fixture_path(tmp_path):
    path = tmp_path / "six.json"
    path.write_text(json.dumps(SIX_NODE_DOC))
    return path


def combined_output(result):
    try:
        return result.output + result.stderr
    except (AttributeError, ValueError):
        return result.output


def train_fixture(runner, fixture_path, tmp_path, name="bundle.txt", epochs="50"):
    out = tmp_path / name
    result = runner.invoke(
        main,
        [
            "train",
            "--dataset", str(fixture_path),
            "--epochs", epochs,
            "--hidden", "8",
            "--out", str(out),
        ],
    )
    assert result.exit_code == 0, combined_output(result)
    return out, result


class TestSynthAndIngest:
    def test_synth_writes_loadable_dataset(self, runner, tmp_path):
        out = tmp_path / "ds.json"
        result = runner.invoke(
            main,
            ["synth", "--n-per-class", "10", "--classes", "2", "--dim", "4",
             "--out", str(out)],
        )
        assert result.exit_code == 0, combined_output(result)
        ds = load_dataset(out)
        assert ds.node_count == 20
        assert "20 nodes" in result.output

    def test_synth_is_deterministic_per_seed(self, runner, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
        for out, seed in ((a, "3"), (b, "3"), (c, "4")):
            result = runner.invoke(
                main,
                ["synth", "--n-per-class", "8", "--classes", "2",
                 "--seed", seed, "--out", str(out)],
            )
            assert result.exit_code == 0
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_ingest_canonicalizes_idempotently(self, runner, tmp_path):
        # Start from a non-canonical rendering (indented, keys unsorted by
        # virtue of dict order); one pass must reach the fixed point.
        raw = tmp_path / "raw.json"
        raw.write_text(json.dumps(SIX_NODE_DOC, indent=3))
        first = tmp_path / "first.json"
        second = tmp_path / "second.json"
        result = runner.invoke(main, ["ingest", str(raw), "--out", str(first)])
        assert result.exit_code == 0, combined_output(result)
        assert "6 nodes" in result.output
        result = runner.invoke(main, ["ingest", str(first), "--out", str(second)])
        assert result.exit_code == 0
        assert first.read_bytes() == second.read_bytes()
        assert first.read_bytes() != raw.read_bytes()

    def test_ingest_missing_file_exits_4(self, runner, tmp_path):
        result = runner.invoke(main, ["ingest", str(tmp_path / "nope.json")])
        assert result.exit_code == 4

    def test_ingest_unparseable_file_exits_3(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{не json")
        result = runner.invoke(main, ["ingest", str(bad)])
        assert result.exit_code == 3

    def test_ingest_wrong_format_tag_exits_3(self, runner, tmp_path):
        doc = json.loads(json.dumps(SIX_NODE_DOC))
        doc["format"] = "something-else/9"
        bad = tmp_path / "tagged.json"
        bad.write_text(json.dumps(doc))
        result = runner.invoke(main, ["ingest", str(bad)])
        assert result.exit_code == 3


class TestTrain:
    def test_trains_all_roles_and_saves(self, runner, fixture_path, tmp_path):
        out, result = train_fixture(runner, fixture_path, tmp_path)
        assert out.exists()
        for role in ("feature", "gnn", "structure"):
            assert f"{role}: train " in result.output
        ds = load_dataset(fixture_path)
        bundle = load_bundle(out, ds)
        assert sorted(bundle) == ["feature", "gnn", "structure"]

    def test_rerun_is_byte_identical(self, runner, fixture_path, tmp_path):
        a, _ = train_fixture(runner, fixture_path, tmp_path, name="a.txt")
        b, _ = train_fixture(runner, fixture_path, tmp_path, name="b.txt")
        assert a.read_bytes() == b.read_bytes()

    def test_divergence_exits_5(self, runner, fixture_path, tmp_path):
        result = runner.invoke(
            main,
            ["train", "--dataset", str(fixture_path), "--epochs", "5",
             "--lr", "1e200", "--out", str(tmp_path / "b.txt")],
        )
        assert result.exit_code == 5
        assert "diverged" in combined_output(result)

    def test_missing_dataset_exits_4(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["train", "--dataset", str(tmp_path / "nope.json"),
             "--out", str(tmp_path / "b.txt")],
        )
        assert result.exit_code == 4


class TestMetricsCommand:
    def test_csv_matches_library_route(self, runner, fixture_path, tmp_path):
        bundle_path, _ = train_fixture(runner, fixture_path, tmp_path)
        out = tmp_path / "metrics.csv"
        result = runner.invoke(
            main,
            ["metrics", "--dataset", str(fixture_path),
             "--bundle", str(bundle_path), "--k", "2", "--out", str(out)],
        )
        assert result.exit_code == 0, combined_output(result)
        assert "6 rows" in result.output

        ds = load_dataset(fixture_path)
        bundle = load_bundle(bundle_path, ds)
        table = compute_table(
            ds, {r: m.predictions for r, m in bundle.items()}, k=2
        )
        expected = tmp_path / "expected.csv"
        table.to_csv(expected)
        assert out.read_bytes() == expected.read_bytes()

    def test_missing_bundle_exits_4(self, runner, fixture_path, tmp_path):
        result = runner.invoke(
            main,
            ["metrics", "--dataset", str(fixture_path),
             "--bundle", str(tmp_path / "nope.txt"),
             "--out", str(tmp_path / "m.csv")],
        )
        assert result.exit_code == 4

    def test_corrupt_bundle_exits_3(self, runner, fixture_path, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text('{"format": "wrong"}')
        result = runner.invoke(
            main,
            ["metrics", "--dataset", str(fixture_path),
             "--bundle", str(bad), "--out", str(tmp_path / "m.csv")],
        )
        assert result.exit_code == 3


class TestReport:
    def test_report_files_and_service_agree(self, runner, fixture_path, tmp_path):
        bundle_path, _ = train_fixture(runner, fixture_path, tmp_path)
        out_dir = tmp_path / "report"
        result = runner.invoke(
            main,
            ["report", "--dataset", str(fixture_path),
             "--bundle", str(bundle_path), "--seed", "7", "--k", "2",
             "--out-dir", str(out_dir)],
        )
        assert result.exit_code == 0, combined_output(result)

        expected_files = (
            ["parallel_sets.json", "layout.json"]
            + [f"projection_{p}.json" for p in PLANES]
        )
        for name in expected_files:
            assert (out_dir / name).exists(), name

        ds = load_dataset(fixture_path)
        bundle = load_bundle(bundle_path, ds)
        snapshot = build_snapshot(ds, bundle, k=2, seed=7)
        client = TestClient(create_app(snapshot))

        r = client.get(
            "/api/parallel-sets", params={"axes": ",".join(REPORT_AXES)}
        )
        assert r.content == (out_dir / "parallel_sets.json").read_bytes()

        for plane in PLANES:
            r = client.get("/api/projection", params={"plane": plane})
            assert (
                r.content == (out_dir / f"projection_{plane}.json").read_bytes()
            ), plane

        r = client.get("/api/layout")
        assert r.content == (out_dir / "layout.json").read_bytes()

    def test_rerun_is_byte_identical(self, runner, fixture_path, tmp_path):
        bundle_path, _ = train_fixture(runner, fixture_path, tmp_path)
        dirs = [tmp_path / "r1", tmp_path / "r2"]
        for d in dirs:
            result = runner.invoke(
                main,
                ["report", "--dataset", str(fixture_path),
                 "--bundle", str(bundle_path), "--out-dir", str(d)],
            )
            assert result.exit_code == 0, combined_output(result)
        for name in ["parallel_sets.json", "layout.json"] + [
            f"projection_{p}.json" for p in PLANES
        ]:
            assert (dirs[0] / name).read_bytes() == (dirs[1] / name).read_bytes()


class TestServeCommand:
    def test_missing_snapshot_dir_exits_4(self, runner, tmp_path):
        result = runner.invoke(
            main, ["serve", "--snapshot", str(tmp_path / "empty")]
        )
        assert result.exit_code == 4

    def test_bad_bind_exits_3(self, runner, fixture_path, tmp_path):
        bundle_path, _ = train_fixture(
            runner, fixture_path, tmp_path, epochs="5"
        )
        snap = tmp_path / "snap"
        snap.mkdir()
        (snap / "dataset.json").write_bytes(fixture_path.read_bytes())
        (snap / "bundle.txt").write_bytes(bundle_path.read_bytes())
        result = runner.invoke(
            main, ["serve", "--snapshot", str(snap), "--bind", "nowhere"]
        )
        assert result.exit_code == 3


class TestUsage:
    def test_version(self, runner):
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "gnnscope" in result.output

    def test_unknown_command_exits_2(self, runner):
        result = runner.invoke(main, ["transmogrify"])
        assert result.exit_code == 2

    def test_missing_required_option_exits_2(self, runner):
        result = runner.invoke(main, ["metrics"])
        assert result.exit_code == 2

    def test_help_lists_exit_codes(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        assert "Exit codes" in result.output
