import io
import json

import pytest

from matchstack.services.cli import main

def lines(out):
    return [line for line in out.splitlines() if line.strip()]

@pytest.fixture
def history_file(tmp_path):
    def write(*histories):
        path = tmp_path / "histories.jsonl"
        path.write_text("".join(json.dumps(h) + "\n" for h in histories), encoding="utf-8")
        return str(path)
    return write

def test_gen_exhaustive(capsys):
    assert main(["gen", "--n", "2", "--exhaustive"]) == 0
    assert [json.loads(line) for line in lines(capsys.readouterr().out)] == [[0, 0], [0, 1], [0, 2]]

def test_gen_empty_history(capsys):
    assert main(["gen", "--n", "0", "--exhaustive"]) == 0
    assert lines(capsys.readouterr().out) == ["[]"]

def test_gen_is_deterministic(capsys):
    assert main(["gen", "--n", "5", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "--n", "5", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    assert len(json.loads(first)) == 5

def test_gen_strip(capsys):
    assert main(["gen", "--n", "3", "--exhaustive", "--strip"]) == 0
    assert len(lines(capsys.readouterr().out)) == 9

def test_gen_conflicting_flags(capsys):
    assert main(["gen", "--n", "3", "--exhaustive", "--seed", "1"]) == 2
    assert capsys.readouterr().out == ""
    assert main(["gen", "--n", "-1"]) == 2

def test_analyze(capsys, history_file):
    assert main(["analyze", history_file([0], [], [0, 0])]) == 0
    k4, bare, prism = (json.loads(line) for line in lines(capsys.readouterr().out))
    assert k4["vector"] == ["1", "1", "1", "1"]
    assert (k4["degeneracy"], k4["dual_vertices"], k4["matchings"]) == (6, 4, 3)
    assert k4["tree"] == {"label": None, "children": []}
    assert bare["vector"] == ["0", "1", "1", "1"]
    assert (bare["degeneracy"], bare["dual_vertices"], bare["matchings"]) == (6, 2, 3)
    assert bare["tree"] is None
    assert (prism["degeneracy"], prism["matchings"]) == (8, 4)
    assert prism["bounds"] == {"theorem_36": True, "theorem_72": True, "corollary_72": True, "corollary_144": True}
    assert k4["bounds"]["theorem_36"] is False
    assert prism["stack_strip"] is True

def test_analyze_reads_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("[0, 0, 1]\n"))
    assert main(["analyze", "-"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["vertices"] == 6

def test_analyze_reports_the_bad_line(capsys, tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text("[0]\n{not json\n", encoding="utf-8")
    assert main(["analyze", str(path)]) == 3
    assert "line 2" in capsys.readouterr().err

def test_analyze_bad_face_index(history_file, capsys):
    assert main(["analyze", history_file([0], [0, 7])]) == 3
    assert "line 2" in capsys.readouterr().err

def test_verify(capsys):
    assert main(["verify", "--suite", "lemma1", "--max-n", "2"]) == 0
    captured = capsys.readouterr()
    report = json.loads(lines(captured.out)[-1])
    assert report["fail_count"] == 0
    assert report["instance_count"] == 10
    assert "lemma1" in captured.err

def test_verify_records(capsys):
    assert main(["verify", "--suite", "prop2", "--max-n", "2", "--records"]) == 0
    out = lines(capsys.readouterr().out)
    records, report = [json.loads(line) for line in out[:-1]], json.loads(out[-1])
    assert len(records) == report["instance_count"]
    assert all(r["pass"] for r in records)

def test_verify_records_carry_psi(capsys):
    assert main(["verify", "--suite", "small-props", "--records"]) == 0
    out = lines(capsys.readouterr().out)
    records = [json.loads(line) for line in out[:-1]]
    assert records
    assert all(isinstance(r["psi"], int) and r["pass"] == (r["psi"] >= r["bound"]) for r in records)

def test_verify_exit_codes(capsys):
    assert main(["verify", "--suite", "theorem", "--max-n", "3"]) == 1
    assert main(["verify", "--suite", "theorem", "--max-n", "3", "--allow-below", "5"]) == 0
    assert main(["verify", "--suite", "nonsense"]) == 2

def test_export_dual_dot(capsys, history_file):
    assert main(["export", history_file([0]), "--what", "dual", "--format", "dot"]) == 0
    dot = capsys.readouterr().out
    assert dot.count(" -- ") == 6
    assert dot.count("[label=") == 4

def test_export_tree_json(capsys, history_file):
    assert main(["export", history_file([0, 0]), "--what", "tree", "--format", "json"]) == 0
    assert capsys.readouterr().out.strip() == '{"label":null,"children":[{"label":1,"children":[]}]}'

def test_export_bare_triangle(capsys, history_file):
    assert main(["export", history_file([]), "--what", "tri"]) == 0
    assert json.loads(capsys.readouterr().out) == {"vertices": 3, "faces": [[0, 1, 2]], "outer": [0, 1, 2], "history": []}

def test_export_to_file(history_file, tmp_path):
    target = tmp_path / "tree.dot"
    assert main(["export", history_file([0, 1]), "--what", "tree", "--format", "dot", "--output", str(target)]) == 0
    assert target.read_text(encoding="utf-8").startswith("digraph")

def test_export_usage_errors(history_file):
    assert main(["export", history_file([0]), "--what", "tri", "--format", "dot"]) == 2
    assert main(["export", history_file([0]), "--what", "graph"]) == 2
    assert main(["export", history_file([]), "--what", "tree"]) == 2
    assert main(["export", history_file([0], [0, 0]), "--what", "tri"]) == 2

def test_no_command():
    assert main([]) == 2
