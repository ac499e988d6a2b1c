import json

import pytest

from domrecon.cli import main
from domrecon.graphio import read_graph, write_graph, write_vertex_set
from domrecon.reconfig import load_sequence
from domrecon.septree import load_tree


@pytest.fixture
def inst_file(tmp_path):
    path = tmp_path / "inst.json"
    assert main(["torus", "gen", "--k", "4", "--out", str(path)]) == 0
    return path


@pytest.fixture
def c5_file(tmp_path, c5):
    path = tmp_path / "c5.json"
    write_graph(c5, path)
    return path


def _write_set(tmp_path, name, members):
    path = tmp_path / name
    write_vertex_set(members, path)
    return path


class TestTorusCommands:
    def test_gen_writes_full_instance(self, inst_file):
        obj = json.loads(inst_file.read_text())
        assert obj["n"] == 80 and obj["k"] == 4
        assert len(obj["d_box"]) == len(obj["d_circ"]) == 16
        assert len(obj["pairs"]) == 16
        assert len(obj["labels"]) == 80
        # the instance file doubles as a plain graph file
        assert read_graph(inst_file).n == 80

    def test_diagnose(self, tmp_path, inst_file, capsys):
        obj = json.loads(inst_file.read_text())
        set_path = _write_set(tmp_path, "dbox.json", obj["d_box"])
        assert main(["torus", "diagnose", "--inst", str(inst_file),
                     "--set", str(set_path)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["type_counts"] == {"left": 16, "right": 0, "zero": 0, "two": 0}
        assert out["p_star"] == 16 and out["p_prime_left"] == 0
        assert out["inefficient"] == 0 and out["is_dominating"]

    def test_gen_rejects_bad_k(self, tmp_path):
        assert main(["torus", "gen", "--k", "1",
                     "--out", str(tmp_path / "x.json")]) == 1


class TestDomsetSolve:
    def test_exact_on_cycle(self, c5_file, capsys):
        assert main(["domset", "solve", "--input", str(c5_file)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["size"] == 2 and out["certified"]

    def test_exact_on_torus_with_guard_override(self, inst_file, capsys):
        assert main(["domset", "solve", "--input", str(inst_file),
                     "--max-n", "80"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["size"] == 16 and out["certified"]

    def test_exact_on_torus_k8(self, tmp_path, capsys):
        inst = tmp_path / "inst8.json"
        assert main(["torus", "gen", "--k", "8", "--out", str(inst)]) == 0
        capsys.readouterr()
        assert main(["domset", "solve", "--input", str(inst),
                     "--max-n", "320"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["size"] == 64 and out["certified"]

    def test_greedy_mode(self, c5_file, capsys):
        assert main(["domset", "solve", "--input", str(c5_file),
                     "--mode", "greedy"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert not out["certified"] and out["size"] <= 3

    def test_budget_exhaustion_exit_code(self, inst_file):
        assert main(["domset", "solve", "--input", str(inst_file),
                     "--max-n", "80", "--budget", "10"]) == 3


class TestPipelines:
    def test_torus_reconfig_end_to_end(self, tmp_path, inst_file, capsys):
        obj = json.loads(inst_file.read_text())
        tree_path = tmp_path / "tree.json"
        assert main(["septree", "build", "--input", str(inst_file),
                     "--strategy", "grid-cut", "--out", str(tree_path)]) == 0
        d0 = _write_set(tmp_path, "d0.json", obj["d_box"])
        d1 = _write_set(tmp_path, "d1.json", obj["d_circ"])
        seq_path = tmp_path / "seq.json"
        assert main(["reconfig", "run", "--input", str(inst_file),
                     "--from", str(d0), "--to", str(d1),
                     "--tree", str(tree_path), "--out", str(seq_path)]) == 0
        assert "certified bound" in capsys.readouterr().out
        seq = load_sequence(seq_path)
        assert seq.guarantee is not None and seq.guarantee.d_prime_minimum
        assert main(["reconfig", "verify", "--input", str(inst_file),
                     "--seq", str(seq_path)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["valid"] and report["width"] == seq.width

    def test_verify_flags_broken_sequence(self, tmp_path, c5_file, capsys):
        seq_path = tmp_path / "bad.json"
        seq_path.write_text(json.dumps({
            "start": [0, 2],
            "moves": [{"op": "remove", "v": 0}],
            "checkpoints": [], "width": 2, "guarantee": "none",
        }))
        assert main(["reconfig", "verify", "--input", str(c5_file),
                     "--seq", str(seq_path)]) == 1
        report = json.loads(capsys.readouterr().out)
        assert not report["valid"]
        assert report["first_violation"]["index"] == 1

    def test_reconfig_contract_error(self, tmp_path, c5_file):
        tree_path = tmp_path / "tree.json"
        assert main(["septree", "build", "--input", str(c5_file),
                     "--out", str(tree_path)]) == 0
        bad = _write_set(tmp_path, "bad.json", {0})
        good = _write_set(tmp_path, "good.json", {0, 2})
        assert main(["reconfig", "run", "--input", str(c5_file),
                     "--from", str(bad), "--to", str(good),
                     "--tree", str(tree_path),
                     "--out", str(tmp_path / "s.json")]) == 1

    def test_route_via_minimum_flag(self, tmp_path, c5_file):
        tree_path = tmp_path / "tree.json"
        main(["septree", "build", "--input", str(c5_file), "--out", str(tree_path)])
        d0 = _write_set(tmp_path, "d0.json", {0, 2})
        d1 = _write_set(tmp_path, "d1.json", {1, 4})
        seq_path = tmp_path / "seq.json"
        assert main(["reconfig", "run", "--input", str(c5_file),
                     "--from", str(d0), "--to", str(d1),
                     "--tree", str(tree_path), "--route-via-minimum",
                     "--out", str(seq_path)]) == 0
        assert load_sequence(seq_path).end == {1, 4}

    def test_exactgap_cli(self, tmp_path, c5_file, capsys):
        d0 = _write_set(tmp_path, "d0.json", {0, 2})
        d1 = _write_set(tmp_path, "d1.json", {1, 3})
        assert main(["exactgap", "--input", str(c5_file),
                     "--from", str(d0), "--to", str(d1)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["gap"] == 1 and out["k_star"] == 3
        assert out["witness"]["start"] == [0, 2]

    def test_tree_artifact_round_trips(self, tmp_path, c5_file):
        tree_path = tmp_path / "tree.json"
        main(["septree", "build", "--input", str(c5_file), "--out", str(tree_path)])
        tree = load_tree(tree_path)
        assert tree.to_json() == json.loads(tree_path.read_text())


class TestBenchAndExport:
    def test_bench_artifacts(self, tmp_path):
        out_dir = tmp_path / "bench"
        assert main(["bench", "--out-dir", str(out_dir), "--k", "4",
                     "--count", "2", "--seed", "1"]) == 0
        csv_text = (out_dir / "bench.csv").read_text()
        assert csv_text.startswith("instance,n,d_size,d_prime_size,W,width,"
                                   "width_minus_max,exact_gap,seconds")
        assert "torus-k4" in csv_text and "random-0" in csv_text
        assert (out_dir / "bench.md").exists()
        assert (out_dir / "width_trend.png").exists()

    def test_export_graph_dot_and_svg(self, tmp_path, c5_file):
        d0 = _write_set(tmp_path, "d0.json", {0, 2})
        dot = tmp_path / "g.dot"
        assert main(["export", "graph", "--input", str(c5_file),
                     "--set", str(d0), "--out", str(dot)]) == 0
        assert "style=filled" in dot.read_text()
        svg = tmp_path / "g.svg"
        assert main(["export", "graph", "--input", str(c5_file),
                     "--out", str(svg)]) == 0
        assert svg.stat().st_size > 0

    def test_export_tree_and_sequence(self, tmp_path, c5_file):
        tree_path = tmp_path / "tree.json"
        main(["septree", "build", "--input", str(c5_file), "--out", str(tree_path)])
        tree_svg = tmp_path / "tree.svg"
        assert main(["export", "tree", "--tree", str(tree_path),
                     "--out", str(tree_svg)]) == 0
        tree_dot = tmp_path / "tree.dot"
        assert main(["export", "tree", "--tree", str(tree_path),
                     "--out", str(tree_dot)]) == 0
        assert "label=\"0\"" in tree_dot.read_text()
        d0 = _write_set(tmp_path, "d0.json", {0, 2})
        d1 = _write_set(tmp_path, "d1.json", {1, 3})
        seq_path = tmp_path / "seq.json"
        main(["reconfig", "run", "--input", str(c5_file), "--from", str(d0),
              "--to", str(d1), "--tree", str(tree_path), "--out", str(seq_path)])
        png = tmp_path / "width.png"
        assert main(["export", "sequence", "--input", str(c5_file),
                     "--seq", str(seq_path), "--out", str(png)]) == 0
        assert png.stat().st_size > 0


class TestUsageAndConfig:
    def test_unknown_flag_exits_two(self):
        with pytest.raises(SystemExit) as err:
            main(["torus", "gen", "--nope", "4"])
        assert err.value.code == 2

    def test_unknown_subcommand_exits_two(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_config_defaults_flags_win(self, tmp_path, c5_file, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"mode": "greedy"}))
        assert main(["--config", str(config), "domset", "solve",
                     "--input", str(c5_file)]) == 0
        assert not json.loads(capsys.readouterr().out)["certified"]
        # explicit flag beats the config value
        assert main(["--config", str(config), "domset", "solve",
                     "--input", str(c5_file), "--mode", "exact"]) == 0
        assert json.loads(capsys.readouterr().out)["certified"]

    def test_parse_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert main(["domset", "solve", "--input", str(bad)]) == 1

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["domset", "solve",
                     "--input", str(tmp_path / "nothere.json")]) == 1

    def test_log_env_var(self, c5_file, monkeypatch, caplog):
        monkeypatch.setenv("DOMRECON_LOG", "debug")
        assert main(["domset", "solve", "--input", str(c5_file),
                     "--out", str(c5_file.parent / "out.json")]) == 0
