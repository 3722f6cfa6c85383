import io
import json
import subprocess
from contextlib import redirect_stdout
from pathlib import Path

from cototient.cli import main
from cototient.equation import goldbach_count, sweep_solutions
from cototient.geometry import Configuration, save_configuration

GOLDEN = Path(__file__).parent / "golden"


def run_cli(args):
    buf = io.StringIO()
    with redirect_stdout(buf):
        rc = main(args)
    return rc, buf.getvalue()


def test_solve_golden():
    rc, out = run_cli(["solve", "--c", "8"])
    assert rc == 0
    assert out == (GOLDEN / "solve_c8.txt").read_text() == "12 14 16\n"
    rc, out = run_cli(["solve", "--c", "30"])
    assert rc == 0
    assert out == (GOLDEN / "solve_c30.txt").read_text()
    assert out.split() == [str(n) for n in sweep_solutions(30)[30]]


def test_goldbach_golden():
    rc, out = run_cli(["goldbach", "--k", "10"])
    assert rc == 0
    assert out == (GOLDEN / "goldbach_k10.txt").read_text() == "2\n"
    assert int(out) == goldbach_count(10)


def test_classify_golden():
    rc, out = run_cli(["classify", "--c", "8"])
    assert rc == 0
    assert out == (GOLDEN / "classify_c8.txt").read_text()
    assert "histogram: 1:1,2:2" in out
    assert "squarefree_histogram: 2:1" in out


def test_scan_golden_and_semantics():
    rc, out = run_cli(["scan", "--from", "2", "--to", "50"])
    assert rc == 0
    assert out == (GOLDEN / "scan_2_50.txt").read_text()
    sw = sweep_solutions(50)
    lines = out.strip().split("\n")
    assert lines[0].startswith("#")
    for line in lines[1:]:
        c, t, g, residual, hist = line.split("\t")
        assert int(t) == len(sw[int(c)])
        assert int(g) == goldbach_count(int(c) + 1)
        assert int(residual) == int(t) - int(g)
        total = 0 if hist == "-" else sum(int(kv.split(":")[1]) for kv in hist.split(","))
        assert total == int(t)


def test_scan_files_and_determinism(tmp_path):
    out1 = tmp_path / "a.tsv"
    out2 = tmp_path / "b.tsv"
    summary = tmp_path / "summary.json"
    sols = tmp_path / "sols.tsv"
    rc, _ = run_cli(
        ["scan", "--from", "2", "--to", "400", "--out", str(out1),
         "--summary", str(summary), "--solutions", str(sols)]
    )
    assert rc == 0
    rc, _ = run_cli(
        ["scan", "--from", "2", "--to", "400", "--workers", "3",
         "--block-size", "64", "--out", str(out2)]
    )
    assert rc == 0
    assert out1.read_bytes() == out2.read_bytes()

    doc = json.loads(summary.read_text())
    assert doc["c_from"] == 2 and doc["c_to"] == 400
    assert doc["dyadic_blocks"][0]["lo"] == 2

    sw = sweep_solutions(400)
    seen = {c: [] for c in sw}
    for line in sols.read_text().strip().split("\n"):
        c, n = map(int, line.split("\t"))
        seen[c].append(n)
    assert seen == sw


def test_scan_cap():
    rc, _ = run_cli(["scan", "--from", "2", "--to", "200000"])
    assert rc == 2  # needs --allow-large


def test_config_forest_and_cycle(tmp_path):
    prime = tmp_path / "prime.json"
    save_configuration(Configuration(8, [(3, 1)], [(5, 7)]), prime)
    rc, out = run_cli(["config", "--file", str(prime)])
    assert rc == 0
    assert "cycle: none" in out and "prime: True" in out

    witness = tmp_path / "witness.json"
    save_configuration(
        Configuration(4, [(24, 28), (13, 15), (1, 1)], [(27, 23), (13, 11), (28, 24)]),
        witness,
    )
    rc, out = run_cli(["config", "--file", str(witness)])
    assert rc == 0  # reporting a cycle is not a failure by itself
    assert "cycle: " in out and "none" not in out.split("cycle:")[1]
    rc, _ = run_cli(["config", "--file", str(witness), "--assert-forest"])
    assert rc == 1

    rc, out = run_cli(["config", "--file", str(witness), "--json"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["edges"] == 6 and doc["cycle"] is not None


def test_diff_pipeline():
    rc, out = run_cli(["diff", "--f", "id", "--g", "phi", "--c", "8", "--n-max", "100"])
    assert rc == 0
    assert "solutions: 12 14 16" in out
    rc, out = run_cli(
        ["diff", "--f", "id", "--g", "phi", "--c", "8", "--n-max", "100", "--json"]
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["solutions"] == [12, 14, 16]
    assert doc["t"] == 16
    assert doc["conditions"]["dominates"] is True
    assert doc["configuration"]["bound_passed"] is True


def test_diff_saves_configuration(tmp_path):
    from cototient.geometry import load_configuration

    saved = tmp_path / "built.json"
    rc, _ = run_cli(
        ["diff", "--f", "id", "--g", "phi", "--c", "8", "--n-max", "100",
         "--save-config", str(saved)]
    )
    assert rc == 0
    cfg = load_configuration(saved)
    assert cfg.c == 8
    assert set(cfg.points) == {(2, 1), (4, 2), (16, 8)}
    assert set(cfg.lines) == {(7, 6), (3, 2), (1, 1)}
    # the saved file feeds straight back into the config subcommand
    rc, out = run_cli(["config", "--file", str(saved), "--assert-forest"])
    assert rc == 0 and "cycle: none" in out


def test_diff_with_custom_rule(tmp_path):
    rules = tmp_path / "rules.json"
    rules.write_text(json.dumps({"name": "mysigma", "rule": "(p**(a+1) - 1) // (p - 1)"}))
    rc, out = run_cli(
        ["diff", "--f", "mysigma", "--g", "id", "--c", "1", "--n-max", "50",
         "--rules", str(rules), "--json"]
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["solutions"] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


def test_exit_codes():
    rc, _ = run_cli(["solve", "--c", "1"])
    assert rc == 2
    rc, _ = run_cli(["goldbach", "--k", "1"])
    assert rc == 2
    rc, _ = run_cli(["verify", "--criteria", "9"])
    assert rc == 2
    rc, _ = run_cli(["verify", "--criteria", "x"])
    assert rc == 2
    rc, _ = run_cli(["diff", "--f", "nope", "--g", "phi", "--c", "8", "--n-max", "50"])
    assert rc == 2


def test_console_script_wiring():
    out = subprocess.run(["cototient", "solve", "--c", "8"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout == "12 14 16\n"
