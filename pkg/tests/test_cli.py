"""End-to-end checks of the command-line surface.

Runs main() in process and asserts on captured bytes: census rows against
the small frozen tables, exit codes for refusal and usage errors, and the
reproducibility contract (same argv and seed means same output bytes, and
the data payload never depends on the thread count).
"""
import argparse
import csv
import hashlib
import json
import math
import subprocess
import sys

import pytest

from mapface.bounds import asymptotic_upper, logsq_upper
from mapface.cli import load_graph_file, main, parse_graph_specifier


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(out: str):
    lines = [l for l in out.splitlines() if not l.startswith("#")]
    parsed = list(csv.reader(lines))
    return parsed[0], parsed[1:]


def manifest_line(out: str) -> str:
    tail = [l for l in out.splitlines() if l.startswith("# manifest ")]
    assert len(tail) == 1
    return tail[0]


# ---------------------------------------------------------------------------
# graph specifier grammar


def test_specifier_forms():
    assert parse_graph_specifier("kn:5") == ("kn", 5)
    assert parse_graph_specifier("gnp:10:0.25") == ("gnp", (10, 0.25))
    assert parse_graph_specifier("file:/tmp/g.txt") == ("file", "/tmp/g.txt")
    assert parse_graph_specifier("degrees:3,3,4") == ("degrees", (3, 3, 4))


@pytest.mark.parametrize("bad", [
    "kn", "kn:", "kn:x", "kn:0", "gnp:10", "gnp:10:1.5", "gnp:10:0",
    "degrees:3,a", "mesh:4", "k5",
])
def test_specifier_rejects(bad):
    with pytest.raises(argparse.ArgumentTypeError):
        parse_graph_specifier(bad)


def test_graph_file_formats(tmp_path):
    txt = tmp_path / "k4.txt"
    txt.write_text("1 2\n2 3\n1 3\n# comment\n1 4\n2 4\n3 4\n")
    g = load_graph_file(str(txt))
    assert g.n == 4 and len(g.edges) == 6
    doc = tmp_path / "k4.json"
    doc.write_text(json.dumps(
        {"n": 4, "edges": [[1, 2], [2, 3], [1, 3], [1, 4], [2, 4], [3, 4]]}))
    h = load_graph_file(str(doc))
    assert sorted(h.edges) == sorted(g.edges)


# ---------------------------------------------------------------------------
# enumerate


def test_enumerate_k5_census(capsys):
    code, out, _ = run_cli(["enumerate", "--graph", "kn:5"], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert header == ["faces", "embeddings"]
    assert rows == [["1", "2340"], ["3", "4974"], ["5", "462"]]


def test_enumerate_genus_view(capsys):
    code, out, _ = run_cli(["enumerate", "--graph", "kn:4", "--by", "genus"],
                           capsys)
    assert code == 0
    _, rows = csv_rows(out)
    assert rows == [["0", "2"], ["1", "14"]]


def test_enumerate_file_graph_matches_kn(tmp_path, capsys):
    txt = tmp_path / "k4.txt"
    txt.write_text("1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
    code, out, _ = run_cli(["enumerate", "--graph", f"file:{txt}"], capsys)
    assert code == 0
    _, rows = csv_rows(out)
    assert rows == [["2", "14"], ["4", "2"]]


def test_enumerate_shards_sum_to_full(capsys):
    total: dict[str, int] = {}
    for i in range(3):
        code, out, _ = run_cli(
            ["enumerate", "--graph", "kn:5", "--shard", f"{i}/3"], capsys)
        assert code == 0
        for faces, count in csv_rows(out)[1]:
            total[faces] = total.get(faces, 0) + int(count)
    assert total == {"1": 2340, "3": 4974, "5": 462}


def test_enumerate_budget_refusal(capsys, monkeypatch):
    monkeypatch.setenv("MAPFACE_BUDGET", "100")
    code, out, err = run_cli(["enumerate", "--graph", "kn:5"], capsys)
    assert code == 1
    assert out == ""
    assert "budget" in err.lower()


def test_enumerate_degrees_routed_to_configmodel(capsys):
    code, _, err = run_cli(["enumerate", "--graph", "degrees:3,3,4"], capsys)
    assert code == 1
    assert "configmodel" in err


# ---------------------------------------------------------------------------
# exit codes and manifest


def test_usage_errors_exit_2(capsys):
    assert main(["enumerate", "--graph", "mesh:4"]) == 2
    assert main(["unknown-subcommand"]) == 2
    assert main(["sample", "--graph", "kn:5"]) == 2  # --trials required
    capsys.readouterr()


def test_manifest_on_every_subcommand(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for argv in (["enumerate", "--graph", "kn:4"],
                 ["sample", "--graph", "kn:4", "--trials", "10", "--seed", "1"],
                 ["bounds", "--mode", "logsq", "--n-max", "10"],
                 ["configmodel", "exact", "--degrees", "3,3,4"],
                 ["gnp", "--n", "6", "--p", "0.5", "--trials", "10",
                  "--seed", "1"]):
        code, out, _ = run_cli(argv, capsys)
        assert code == 0
        line = manifest_line(out)
        assert f"subcommand={argv[0]}" in line
        assert "digest=sha256:" in line
        assert out.splitlines()[-1] == line

        payload = "".join(l + "\n" for l in out.splitlines()
                          if not l.startswith("#"))
        want = hashlib.sha256(payload.encode()).hexdigest()
        assert f"digest=sha256:{want}" in line


def test_byte_reproducibility_same_argv(capsys):
    argv = ["sample", "--graph", "kn:5", "--trials", "2000", "--seed", "11"]
    _, out1, _ = run_cli(argv, capsys)
    _, out2, _ = run_cli(argv, capsys)
    assert out1 == out2


def test_payload_independent_of_threads(capsys):
    base = ["sample", "--graph", "kn:6", "--trials", "4000", "--seed", "9"]
    _, out1, _ = run_cli(base + ["--threads", "1"], capsys)
    _, out4, _ = run_cli(base + ["--threads", "4"], capsys)
    strip = lambda o: [l for l in o.splitlines() if not l.startswith("#")]
    assert strip(out1) == strip(out4)
    digest = lambda o: [f for f in manifest_line(o).split()
                        if f.startswith("digest=")]
    assert digest(out1) == digest(out4)


def test_enumerate_payload_independent_of_threads(capsys):
    base = ["enumerate", "--graph", "kn:5"]
    _, out1, _ = run_cli(base + ["--threads", "1"], capsys)
    _, out3, _ = run_cli(base + ["--threads", "3"], capsys)
    strip = lambda o: [l for l in o.splitlines() if not l.startswith("#")]
    assert strip(out1) == strip(out3)


def test_wall_time_on_stderr_not_stdout(capsys):
    _, out, err = run_cli(["enumerate", "--graph", "kn:4"], capsys)
    assert "wall-time" in err
    assert "wall-time" not in out


# ---------------------------------------------------------------------------
# sample


def test_sample_summary_row(capsys):
    code, out, _ = run_cli(
        ["sample", "--graph", "kn:7", "--trials", "4000", "--seed", "42"],
        capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert header[:5] == ["graph", "process", "statistic", "trials", "seed"]
    row = dict(zip(header, rows[0]))
    assert row["graph"] == "kn:7" and row["trials"] == "4000"
    mean, stderr = float(row["mean"]), float(row["stderr"])
    assert abs(mean - 3.1265) < 6 * stderr
    assert math.isclose(float(row["ci95_lo"]), mean - 1.96 * stderr,
                        rel_tol=1e-12)


def test_sample_per_trial_rows(capsys):
    code, out, _ = run_cli(
        ["sample", "--graph", "kn:4", "--trials", "25", "--seed", "5",
         "--per-trial"], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert header == ["trial", "faces", "genus"]
    assert len(rows) == 25
    for t, row in enumerate(rows):
        assert int(row[0]) == t
        faces, genus = int(row[1]), int(row[2])
        assert faces + 2 * genus == 4  # Euler relation on K_4
        assert faces in (2, 4)


def test_sample_process_b_runs(capsys):
    code, out, _ = run_cli(
        ["sample", "--graph", "kn:5", "--trials", "300", "--seed", "2",
         "--process", "b"], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    row = dict(zip(header, rows[0]))
    assert row["process"] == "b"
    assert 1.0 <= float(row["mean"]) <= 5.0


def test_sample_process_needs_complete_graph(capsys):
    code, _, err = run_cli(
        ["sample", "--graph", "gnp:6:0.5", "--trials", "10", "--seed", "1",
         "--process", "a"], capsys)
    assert code == 1
    assert "kn:" in err


def test_sample_genus_statistic(capsys):
    code, out, _ = run_cli(
        ["sample", "--graph", "kn:5", "--trials", "2000", "--seed", "13",
         "--statistic", "genus"], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    row = dict(zip(header, rows[0]))
    # exact E[genus] of K_5 is 2.24
    assert abs(float(row["mean"]) - 2.24) < 6 * float(row["stderr"])


# ---------------------------------------------------------------------------
# bounds


def test_bounds_logsq_rows(capsys):
    code, out, _ = run_cli(["bounds", "--mode", "logsq", "--n-max", "40"],
                           capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert header[:3] == ["n", "bound", "mode"]
    assert [r[0] for r in rows] == [str(n) for n in range(4, 41)]
    for r in rows:
        n = int(r[0])
        assert float(r[1]) == logsq_upper(n)
        assert float(r[5]) == 5.0 * math.log(n)


def test_bounds_beta_csv_and_artifact(tmp_path, capsys):
    art = tmp_path / "bt.json"
    code, out, _ = run_cli(
        ["bounds", "--mode", "beta", "--n-max", "30",
         "--beta-json", str(art)], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert [r[0] for r in rows] == [str(n) for n in range(3, 31)]
    by_n = {int(r[0]): r for r in rows}
    assert float(by_n[4][1]) == 2.25
    assert by_n[4][2] == "exact"
    assert by_n[10][2] == "log-squared"
    doc = json.loads(art.read_text())
    assert doc["n_max"] == 30
    assert doc["entries"]["7"]["beta"] == 3.1265
    assert set(doc["entries"]) == {str(n) for n in range(3, 31)}


def test_bounds_envelope_refuses_small(capsys):
    code, _, err = run_cli(["bounds", "--mode", "envelope", "--n-max", "100"],
                           capsys)
    assert code == 1
    assert "4158" in err


def test_bounds_envelope_rows(capsys):
    code, out, _ = run_cli(
        ["bounds", "--mode", "envelope", "--n-max", "4160"], capsys)
    assert code == 0
    _, rows = csv_rows(out)
    assert [r[0] for r in rows] == ["4158", "4159", "4160"]
    for r in rows:
        n = int(r[0])
        assert float(r[1]) == asymptotic_upper(n)
        # this end of the range sits in the widest constant regime
        assert float(r[1]) == pytest.approx(23.0 * math.log(n))


def test_bounds_lower_rows(capsys):
    code, out, _ = run_cli(["bounds", "--mode", "lower", "--n-max", "10"],
                           capsys)
    assert code == 0
    _, rows = csv_rows(out)
    for r in rows:
        n = int(r[0])
        assert float(r[1]) == pytest.approx(0.5 * math.log(n) - 2.0)


# ---------------------------------------------------------------------------
# configmodel


def test_configmodel_exact_row(capsys):
    code, out, _ = run_cli(["configmodel", "exact", "--degrees", "3,3,4"],
                           capsys)
    assert code == 0
    header, rows = csv_rows(out)
    row = rows[0]
    assert row[1] == "exact"
    assert row[2] == "962/315"
    assert float(row[3]) == pytest.approx(962 / 315)


def test_configmodel_formula_matches_exact(capsys):
    _, out_e, _ = run_cli(["configmodel", "exact", "--degrees", "2,2,3,3"],
                          capsys)
    _, out_f, _ = run_cli(["configmodel", "formula", "--degrees", "2,2,3,3"],
                          capsys)
    assert csv_rows(out_e)[1][0][2] == csv_rows(out_f)[1][0][2]


def test_configmodel_sample_rows(capsys):
    code, out, _ = run_cli(
        ["configmodel", "sample", "--degrees", "3,3,4", "--trials", "30",
         "--seed", "4"], capsys)
    assert code == 0
    header, rows = csv_rows(out)
    assert header == ["trial", "face_orbits", "simple"]
    assert len(rows) == 30
    assert all(int(r[1]) >= 1 for r in rows)
    # three vertices cannot carry degrees above two in a simple graph
    assert all(r[2] == "0" for r in rows)


def test_configmodel_sample_simple_only(capsys):
    code, out, _ = run_cli(
        ["configmodel", "sample", "--degrees", "3,3,3,3", "--trials", "20",
         "--seed", "4", "--simple"], capsys)
    assert code == 0
    _, rows = csv_rows(out)
    assert len(rows) == 20
    assert all(r[2] == "1" for r in rows)


def test_configmodel_simple_impossible_refused(capsys):
    code, _, err = run_cli(
        ["configmodel", "sample", "--degrees", "3,3,4", "--trials", "5",
         "--seed", "4", "--simple"], capsys)
    assert code == 1
    assert "simple" in err


def test_configmodel_bad_degrees(capsys):
    code, _, err = run_cli(["configmodel", "exact", "--degrees", "3,4"],
                           capsys)
    assert code == 1  # odd degree sum


# ---------------------------------------------------------------------------
# gnp and json output


def test_gnp_row(capsys):
    code, out, _ = run_cli(
        ["gnp", "--n", "12", "--p", "0.5", "--trials", "150", "--seed", "7"],
        capsys)
    assert code == 0
    header, rows = csv_rows(out)
    row = dict(zip(header, rows[0]))
    assert row["n"] == "12" and row["connected_only"] == "0"
    ref = float(row["ref_log_pn2"])
    assert ref == pytest.approx(math.log(0.5 * 144))
    assert float(row["ratio"]) == pytest.approx(float(row["mean"]) / ref)


def test_json_output_document(capsys):
    code, out, _ = run_cli(["enumerate", "--graph", "kn:4", "--out", "json"],
                           capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["data"]["header"] == ["faces", "embeddings"]
    assert doc["data"]["rows"] == [["2", "14"], ["4", "2"]]
    canonical = json.dumps(doc["data"], sort_keys=True,
                           separators=(",", ":"))
    want = "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()
    assert doc["manifest"]["digest"] == want
    assert doc["manifest"]["subcommand"] == "enumerate"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mapface", "enumerate", "--graph", "kn:4"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "2,14" in proc.stdout
    assert "# manifest" in proc.stdout
