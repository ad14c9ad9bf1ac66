import csv
import json
import subprocess
import sys

import pytest

from matchlab import cli, save_graph, complete_bipartite, random_regular_bipartite, RandomStream


def run_cli(argv):
    return cli.main(argv)


class TestGen:
    def test_writes_edge_list(self, tmp_path):
        out = tmp_path / "g.txt"
        assert run_cli(["gen", "--spec", "knn:n=4", "--out", str(out)]) == 0
        lines = [
            l for l in out.read_text().splitlines() if l and not l.startswith("#")
        ]
        assert lines[0] == "bipartite 4 4 16"
        assert len(lines) == 17
        manifest = json.loads((tmp_path / "g.txt.manifest.json").read_text())
        assert manifest["command"] == "gen"

    def test_stdout(self, capsys):
        assert run_cli(["gen", "--spec", "knn:n=2"]) == 0
        out = capsys.readouterr().out
        assert "bipartite 2 2 4" in out

    def test_bad_spec_exits_2(self, capsys):
        assert run_cli(["gen", "--spec", "wat:n=1"]) == 2
        assert "error" in capsys.readouterr().err


class TestProcess:
    def test_csv_output_and_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["process", "--spec", "knn:n=5", "--trials", "20", "--seed", "9"]
        assert run_cli(argv + ["--out", str(a)]) == 0
        assert run_cli(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        rows = list(csv.DictReader(a.open()))
        assert len(rows) == 20
        assert set(rows[0]) == {"trial", "seed", "tau_I", "tau_M", "equal"}

    def test_jobs_bit_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["process", "--spec", "rrb:n=8,k=3,seed=2", "--trials", "16", "--seed", "3"]
        assert run_cli(argv + ["--jobs", "1", "--out", str(a)]) == 0
        assert run_cli(argv + ["--jobs", "2", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        am = (tmp_path / "a.csv.manifest.json").read_bytes()
        bm = (tmp_path / "b.csv.manifest.json").read_bytes()
        assert am == bm

    def test_json_trace_schema(self, capsys):
        assert (
            run_cli(
                ["process", "--spec", "knn:n=3", "--trials", "2", "--seed", "1", "--json"]
            )
            == 0
        )
        doc = json.loads(capsys.readouterr().out)
        trial = doc["trials"][0]
        assert {"n", "k", "tau_I", "tau_M", "equal", "seed"} <= set(trial)
        assert trial["n"] == 3 and trial["k"] == 3
        assert doc["estimate"]["trials"] == 2

    def test_dump_order_flag(self, capsys):
        argv = ["process", "--spec", "knn:n=2", "--trials", "1", "--seed", "1", "--json"]
        assert run_cli(argv + ["--dump-order"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert sorted(doc["trials"][0]["order"]) == [0, 1, 2, 3]


class TestSweep:
    def test_csv_schema(self, tmp_path):
        out = tmp_path / "s.csv"
        assert (
            run_cli(
                [
                    "sweep",
                    "--spec",
                    "knn:n=4",
                    "--trials",
                    "50",
                    "--seed",
                    "5",
                    "--event",
                    "pm",
                    "--p",
                    "0.1,0.5,0.9",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        rows = list(csv.DictReader(out.open()))
        assert [r["p"] for r in rows] == ["0.1", "0.5", "0.9"]
        assert list(rows[0]) == [
            "p",
            "event",
            "successes",
            "trials",
            "point",
            "ci_low",
            "ci_high",
            "seed",
        ]

    def test_hallcut_event_requires_cut(self, capsys):
        argv = [
            "sweep", "--spec", "knn:n=3", "--trials", "5", "--seed", "1",
            "--event", "hallcut", "--p", "0.5",
        ]
        assert run_cli(argv) == 2
        assert run_cli(argv + ["--cut", "0x3,0x1"]) == 0


class TestCounterexample:
    def test_serres_passes(self, tmp_path):
        out = tmp_path / "c.csv"
        code = run_cli(
            [
                "counterexample", "--family", "serres", "--k", "8",
                "--series", "2", "--ell", "2", "--r", "4",
                "--p", "0.2,0.4", "--trials", "400", "--seed", "6",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert all(r["ok"] == "1" for r in rows)
        assert all(r["implication_violations"] == "0" for r in rows)

    def test_parres_passes(self, capsys):
        code = run_cli(
            [
                "counterexample", "--family", "parres", "--k", "6",
                "--p", "0.2", "--trials", "300", "--seed", "6",
            ]
        )
        assert code == 0


class TestCutCensus:
    def test_row_count(self, tmp_path):
        g = random_regular_bipartite(3, 2, RandomStream(4))
        gfile = tmp_path / "g.txt"
        save_graph(g, gfile)
        out = tmp_path / "census.csv"
        assert run_cli(["cut-census", "--graph", str(gfile), "--out", str(out)]) == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 2**6

    def test_cap_enforced(self, tmp_path, capsys):
        g = complete_bipartite(7)
        gfile = tmp_path / "big.txt"
        save_graph(g, gfile)
        assert (
            run_cli(["cut-census", "--graph", str(gfile), "--max-vertices", "12"]) == 2
        )


class TestAtoms:
    def test_json_report(self, tmp_path, capsys):
        g = complete_bipartite(2)
        gfile = tmp_path / "g.txt"
        save_graph(g, gfile)
        assert run_cli(["atoms", "--graph", str(gfile), "--seed", "3", "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert {"internal_classes", "start", "atom", "steps", "n", "k"} <= set(doc)
        assert doc["atom"]["trivial"] is False

    def test_explicit_start(self, tmp_path, capsys):
        g = complete_bipartite(2)
        gfile = tmp_path / "g.txt"
        save_graph(g, gfile)
        code = run_cli(
            ["atoms", "--graph", str(gfile), "--seed", "3", "--start", "0x3,0x1", "--json"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["start"]["s_mask"] == 3 and doc["start"]["t_mask"] == 1


class TestVerify:
    def test_all_pass(self, capsys):
        assert run_cli(["verify", "--seed", "12"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 4 and "FAIL" not in out


class TestUsage:
    def test_unknown_verb(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_required_seed(self):
        with pytest.raises(SystemExit) as exc:
            run_cli(["process", "--spec", "knn:n=2", "--trials", "5"])
        assert exc.value.code == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "matchlab", "--version"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0 and "matchlab" in proc.stdout
