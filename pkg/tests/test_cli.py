import json
import subprocess
import sys

import pytest

from imaged import __version__
from imaged.cli import dump_data, load_morphism, main
from imaged.morphisms import Morphism


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_verify_thm2_json(capsys):
    code, doc = run_json(capsys, "verify", "thm2")
    assert code == 0
    assert doc["pass"] is True and doc["theorem"] == "thm2"
    assert doc["version"] == __version__
    assert all({"name", "pass", "counts"} <= set(s) for s in doc["stages"])
    assert "elapsedMs" in doc


def test_verify_thm4_corrupted_file_names_failing_stage(tmp_path, capsys):
    m = load_morphism("m342")
    img = list(m.images)
    img[0] = img[0][:200] + ("1" if img[0][200] == "0" else "0") + img[0][201:]
    path = tmp_path / "bad.txt"
    path.write_text(Morphism(tuple(img)).dumps())
    code, doc = run_json(capsys, "verify", "thm4", "--morphism", str(path))
    assert code == 1
    failed = [s for s in doc["stages"] if not s["pass"]]
    assert failed[0]["name"] == "avoids F"
    assert failed[0]["counterexample"] == "111"


def test_verify_thm5_target_one(capsys):
    code, doc = run_json(capsys, "verify", "thm5", "--target", "1")
    assert code == 0
    assert doc["nodesVisited"] == 1 and doc["maxDepth"] == 0


def test_verify_thm3_without_r3_hits_cap(capsys):
    code, doc = run_json(capsys, "verify", "thm3", "--no-rule", "R3", "--depth-cap", "60")
    assert code == 1
    assert doc["stages"][0]["counterexample"]["error"] == "cap exceeded"
    assert doc["maxDepth"] == 60


def test_lemma_sync(capsys):
    code, doc = run_json(capsys, "lemma-sync", "--morphism", "m37", "--alpha", "7/4",
                         "--beta", "289/148", "--n", "3")
    assert code == 0
    counts = doc["stages"][0]["counts"]
    assert counts["bound"] == "289/15" and counts["max_length"] == 19


@pytest.mark.parametrize("argv", [
    ["lemma-sync", "--morphism", "m37", "--alpha", "7/4", "--beta", "7/4", "--n", "3"],
    ["lemma-sync", "--morphism", "m37", "--alpha", "1.75", "--beta", "2", "--n", "3"],
    ["lemma-sync", "--morphism", "/no/such/file", "--alpha", "7/4", "--beta", "2", "--n", "3"],
    ["lemma-sync", "--morphism", "0/01", "--alpha", "7/4", "--beta", "289/148", "--n", "3"],
    ["oracle", "--morphism", "m37", "--alpha", "7/4", "--max-len", "10", "--query", "0" * 11],
    ["oracle", "--morphism", "m37", "--alpha", "7/4", "--max-len", "10", "--query", "0120"],
    ["free", "--alphabet", "4", "--beta", "7/4", "--length", "3"],
    ["verify", "thm9"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        code = exc.code
    assert code == 2


def test_malformed_morphism_file(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text("0 -> 01\nbogus line\n")
    assert main(["verify", "thm2", "--morphism", str(path)]) == 2


def test_error_report_is_json(capsys):
    code, doc = run_json(capsys, "lemma-sync", "--morphism", "m37", "--alpha", "7/4",
                         "--beta", "7/4", "--n", "3")
    assert code == 2 and "error" in doc and doc["version"] == __version__


def test_oracle_queries(capsys):
    assert run(capsys, "oracle", "--morphism", "m37", "--alpha", "7/4", "--max-len", "300",
               "--query", "0010") == (0, "absent\n")
    code, out = run(capsys, "oracle", "--morphism", "m37", "--alpha", "7/4", "--max-len", "300",
                    "--squares", "2")
    assert out.split() == ["0", "1", "01", "10"]
    code, out = run(capsys, "oracle", "--morphism", "m342", "--alpha", "7/4", "--max-len", "1952",
                    "--query", "1001")
    assert out.strip() == "absent"
    code, doc = run_json(capsys, "oracle", "--morphism", "m37", "--alpha", "7/4", "--max-len", "300",
                         "--factors", "7", "--count-only")
    assert doc["factors"]["count"] == 26


def test_free(capsys):
    assert run(capsys, "free", "--alphabet", "3", "--beta", "7/4", "--length", "2", "--count-only") == (0, "6\n")
    assert run(capsys, "free", "--alphabet", "3", "--beta", "7/4", "--length", "1")[1].split() == ["0", "1", "2"]
    # binary 7/4+-free words stop at length 3
    assert run(capsys, "free", "--alphabet", "2", "--beta", "7/4", "--length", "10", "--count-only")[1] == "0\n"
    assert run(capsys, "free", "--alphabet", "2", "--beta", "5/2", "--length", "10", "--count-only")[1] != "0\n"


def test_dump_data_round_trips():
    text = dump_data()
    for name in ("m37", "m342"):
        head = f"# {name} (sha256 "
        i = text.index(head)
        body = text[i:].split("\n\n", 1)[0].split("\n", 1)[1]
        assert Morphism.parse(body) == load_morphism(name)


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "imaged.cli", "free", "--alphabet", "3",
                          "--beta", "7/4", "--length", "3", "--count-only"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "12"
