import json

import pytest

from l0landscape.cli import main


@pytest.fixture
def saddle_file(tmp_path):
    path = tmp_path / "saddle.json"
    path.write_text(json.dumps({
        "m": 2, "n": 2, "s": 1,
        "A": [[1.0, 0.0], [0.0, 1.0]],
        "b": [1.0, 1.0],
    }))
    return str(path)


@pytest.fixture
def instability_file(tmp_path):
    path = tmp_path / "instability.json"
    path.write_text(json.dumps({
        "m": 2, "n": 2, "s": 1,
        "A": [[1.0, 0.0], [0.0, 1.0]],
        "b": [0.0, 0.0],
    }))
    return str(path)


def run_cli(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


class TestAnalyze:
    def test_saddle_landscape(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["analyze", "--instance", saddle_file])
        assert rc == 0
        payload = json.loads(out)
        assert payload["r"] == 2
        assert payload["r1"] == 1
        assert payload["morse_holds"]
        assert payload["morse_lhs"] == payload["morse_rhs"] == 1

    def test_degenerate_landscape_flags_morse_not_applicable(self, capsys, instability_file):
        rc, out, _ = run_cli(capsys, ["analyze", "--instance", instability_file])
        assert rc == 0
        payload = json.loads(out)
        assert payload["degenerate"] == 1
        assert len(payload["points"]) == 1
        assert payload["hypothesis_violated"]
        assert not payload["morse_applicable"]

    def test_s_zero_instance(self, capsys, tmp_path):
        path = tmp_path / "szero.json"
        path.write_text(json.dumps({
            "m": 2, "n": 2, "s": 0,
            "A": [[1.0, 0.0], [0.0, 1.0]],
            "b": [0.0, 0.0],
        }))
        rc, out, _ = run_cli(capsys, ["analyze", "--instance", str(path)])
        assert rc == 0
        payload = json.loads(out)
        assert len(payload["points"]) == 1
        assert payload["points"][0]["x"] == [0.0, 0.0]
        assert payload["points"][0]["kind"] == "LocalMinimizer"

    def test_byte_identical_reruns(self, capsys, saddle_file):
        _, first, _ = run_cli(capsys, ["analyze", "--instance", saddle_file])
        _, second, _ = run_cli(capsys, ["analyze", "--instance", saddle_file])
        assert first == second

    def test_csv_table(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["analyze", "--instance", saddle_file, "--csv"])
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "index,value,kind,support,nd1,nd2,x1,x2"
        assert len(lines) == 4

    def test_out_file(self, capsys, tmp_path, saddle_file):
        target = tmp_path / "report.json"
        rc, out, _ = run_cli(capsys, ["analyze", "--instance", saddle_file,
                                      "--out", str(target)])
        assert rc == 0
        assert out == ""
        assert json.loads(target.read_text())["r"] == 2

    def test_timestamp_flag_adds_field(self, capsys, saddle_file):
        _, out, _ = run_cli(capsys, ["analyze", "--instance", saddle_file, "--timestamp"])
        assert "timestamp" in json.loads(out)

    def test_tolerance_override_flag(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["analyze", "--instance", saddle_file,
                                      "--stat-tol", "1e-6"])
        assert rc == 0


class TestErrorPaths:
    def test_missing_file_exits_2(self, capsys, tmp_path):
        rc, _, err = run_cli(capsys, ["analyze", "--instance", str(tmp_path / "nope.json")])
        assert rc == 2
        assert "error" in err

    def test_malformed_json_is_line_precise(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"m": 2,\n "n": oops}')
        rc, out, err = run_cli(capsys, ["analyze", "--instance", str(path)])
        assert rc == 2
        assert out == ""  # no partial output
        assert "line 2" in err

    def test_invalid_sparsity_exits_2(self, capsys, tmp_path):
        path = tmp_path / "bad_s.json"
        path.write_text(json.dumps({
            "m": 2, "n": 2, "s": 2,
            "A": [[1.0, 0.0], [0.0, 1.0]],
            "b": [0.0, 0.0],
        }))
        rc, _, err = run_cli(capsys, ["analyze", "--instance", str(path)])
        assert rc == 2

    def test_generic_requires_seed(self, saddle_file):
        with pytest.raises(SystemExit) as exc:
            main(["generic", "--m", "2", "--n", "2", "--s", "1", "--trials", "5"])
        assert exc.value.code == 2

    def test_probe_requires_seed(self, saddle_file):
        with pytest.raises(SystemExit) as exc:
            main(["probe", "--instance", saddle_file])
        assert exc.value.code == 2

    def test_probe_point_index_out_of_range(self, capsys, saddle_file):
        rc, _, err = run_cli(capsys, ["probe", "--instance", saddle_file,
                                      "--seed", "1", "--point", "9"])
        assert rc == 2
        assert "out of range" in err

    def test_internal_error_exits_1(self, capsys, saddle_file, monkeypatch):
        import l0landscape.cli as cli_mod

        def boom(*args, **kwargs):
            raise RuntimeError("synthetic crash")

        monkeypatch.setattr(cli_mod, "enumerate_stationary", boom)
        rc, out, err = run_cli(capsys, ["analyze", "--instance", saddle_file])
        assert rc == 1
        assert out == ""
        assert "internal error" in err


class TestOtherCommands:
    def test_regularity(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["regularity", "--instance", saddle_file])
        assert rc == 0
        assert json.loads(out) == {"s_regular": True, "witness": None}

    def test_regularity_witness(self, capsys, tmp_path):
        path = tmp_path / "singular.json"
        path.write_text(json.dumps({
            "m": 2, "n": 2, "s": 1,
            "A": [[1.0, 0.0], [0.0, 0.0]],
            "b": [1.0, 0.0],
        }))
        rc, out, _ = run_cli(capsys, ["regularity", "--instance", str(path)])
        assert rc == 0
        assert json.loads(out) == {"s_regular": False, "witness": [2]}

    def test_sweep_json(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["sweep", "--instance", saddle_file])
        assert rc == 0
        payload = json.loads(out)
        assert [entry["q"] for entry in payload["intervals"]] == [0, 2, 1]
        assert payload["applicable"]
        assert [t["delta"] for t in payload["transitions"]] == [2, -1]
        assert all(t["admissible"] for t in payload["transitions"])

    def test_sweep_csv(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["sweep", "--instance", saddle_file, "--csv"])
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "lo,hi,q"
        assert len(lines) == 4

    def test_generic(self, capsys):
        rc, out, _ = run_cli(capsys, ["generic", "--m", "2", "--n", "2", "--s", "1",
                                      "--trials", "20", "--seed", "42"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["trials"] == 20
        assert payload["seed"] == 42
        assert payload["all_nondegenerate_fraction"] == 1.0
        assert payload["s_regular_fraction"] == 1.0

    def test_probe_degenerate_point(self, capsys, instability_file):
        rc, out, _ = run_cli(capsys, ["probe", "--instance", instability_file,
                                      "--seed", "3", "--trials", "10"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["verdict"] == "UnstableEvidence"
        assert payload["agreement"] is True
        assert payload["point"]["kind"] == "DegeneratePoint"

    def test_probe_paper_mode(self, capsys, instability_file):
        rc, out, _ = run_cli(capsys, ["probe", "--instance", instability_file,
                                      "--seed", "3", "--trials", "5", "--paper-mode"])
        assert rc == 0
        payload = json.loads(out)
        assert payload["verdict"] == "UnstableEvidence"

    def test_iht(self, capsys, saddle_file):
        rc, out, _ = run_cli(capsys, ["iht", "--instance", saddle_file])
        assert rc == 0
        payload = json.loads(out)
        assert payload["converged"]
        assert payload["is_m_stationary"]
        assert payload["support"] in ([1], [2])

    def test_threads_flag_preserves_output(self, capsys, saddle_file):
        _, single, _ = run_cli(capsys, ["analyze", "--instance", saddle_file])
        _, multi, _ = run_cli(capsys, ["analyze", "--instance", saddle_file,
                                       "--threads", "4"])
        assert single == multi
