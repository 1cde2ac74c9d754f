import io
import json
import os

import pytest

from groundexplain.cli import EXIT_ERROR, EXIT_OK, EXIT_UNSAT, run

PROBLEMS = os.path.join(os.path.dirname(__file__), "..", "problems")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def problem(name):
    return os.path.join(PROBLEMS, name)


def write(tmp_path, text, name="p.p"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_explain_json_schema():
    code, out, _ = call("explain", problem("arrays.p"), "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert list(report) == ["status", "implicates", "explanations", "warnings", "stats"]
    assert report["status"] == "Saturated"
    assert [e["clause"] for e in report["implicates"]] == ["i = j", "b != c"]
    assert report["explanations"] == ["i != j", "b = c"]
    assert report["warnings"] == []
    assert list(report["stats"]) == ["generated", "kept", "elapsed_ms"]


def test_explain_text_and_consistency_filter():
    code, out, _ = call("explain", problem("arrays.p"), "--consistency-filter")
    assert code == EXIT_OK
    assert "explanation: i != j | b = c" in out
    assert "i = j  [Consistent]" in out
    code, out, _ = call("explain", problem("arrays.p"), "--consistency-filter", "--format", "json")
    assert [e["consistent"] for e in json.loads(out)["implicates"]] == ["Consistent", "Consistent"]


def test_explain_minimize_modes():
    _, out, _ = call("explain", problem("arrays.p"), "--minimize", "subsumption", "--format", "json")
    clauses = [e["clause"] for e in json.loads(out)["implicates"]]
    assert {"i = j", "b != c"} <= set(clauses)
    _, out, _ = call("explain", problem("fab.p"), "--minimize", "entailment", "--format", "json")
    assert json.loads(out)["implicates"] == [{"clause": "a != b"}]


def test_explain_limits_and_entailment_refusal(tmp_path):
    path = write(tmp_path, "abducible a, b.\naxiom f(f(X)) = g(X).\naxiom g(f(X)) = f(g(X)).\n"
                           "axiom h(X, Y) = h(Y, f(X)).\naxiom a = b.\n")
    code, out, _ = call("explain", path, "--max-clauses", "4", "--max-iterations", "3", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["warnings"] == ["limits"]
    code, _, err = call("explain", path, "--max-iterations", "3", "--minimize", "entailment")
    assert code == EXIT_ERROR and "EntailmentModeUnavailable" in err


def test_explain_stream():
    code, out, _ = call("explain", problem("fab.p"), "--stream")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "found: a != a | a != b"
    code, out, err = call("explain", problem("fab.p"), "--stream", "--format", "json")
    json.loads(out)
    assert "found:" in err


def test_explain_unsatisfiable_and_errors(tmp_path):
    code, out, _ = call("explain", write(tmp_path, "abducible a, b.\naxiom a = b.\ngoal a != b.\n"))
    assert code == EXIT_UNSAT and "status: Unsatisfiable" in out
    code, _, err = call("explain", problem("empty.p"))
    assert code == EXIT_ERROR and "EmptyAbducibleSet" in err
    code, _, err = call("explain", str(tmp_path / "missing.p"))
    assert code == EXIT_ERROR and "FileNotFound" in err
    code, _, err = call("explain", write(tmp_path, "abducible a.\naxiom f(a = b.\n"))
    assert code == EXIT_ERROR and ":2:" in err
    code, _, err = call("explain", write(tmp_path, "abducible a.\norder b.\n"))
    assert code == EXIT_ERROR and "ProblemError" in err
    assert call("frobnicate", "x")[0] == EXIT_ERROR


def test_check():
    code, out, _ = call("check", problem("two.p"), "--implicate", "a != c | b != d", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out) == {"clause": "a != c | b != d", "entailed": True, "method": "oracle"}
    _, out, _ = call("check", problem("two.p"), "--implicate", "a != c")
    assert "entailed: false" in out
    _, out, _ = call("check", problem("arrays.p"), "--implicate", "i = j | b != c", "--format", "json")
    assert json.loads(out)["entailed"] is True and json.loads(out)["method"] == "refutation"
    code, _, err = call("check", problem("two.p"), "--implicate", "X = a")
    assert code == EXIT_ERROR


def test_saturate_plain_and_abstracted():
    _, out, _ = call("saturate", problem("fab.p"), "--plain-sp", "--format", "json")
    plain = json.loads(out)
    assert plain["mode"] == "plain" and plain["ground_a_clauses"] == []
    _, out, _ = call("saturate", problem("fab.p"), "--format", "json")
    assert json.loads(out)["ground_a_clauses"] == ["a != a | a != b"]
    code, out, _ = call("saturate", problem("fab.p"), "--stream")
    assert code == EXIT_OK and "found: a != a | a != b" in out


def test_oracle_command(tmp_path):
    code, out, _ = call("oracle", problem("two.p"), "--max-len", "2", "--format", "json")
    assert code == EXIT_OK
    found = json.loads(out)["implicates"]
    assert "a = b" in found and "a != c | b != d" in found
    _, out, _ = call("oracle", problem("two.p"), "--max-len", "2", "--prime")
    assert "a != c | b != d" in out
    code, _, _ = call("oracle", write(tmp_path, "abducible a, b.\naxiom a = b.\naxiom a != b.\n"))
    assert code == EXIT_UNSAT


def test_help_exits_cleanly(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "explain" in capsys.readouterr().out


@pytest.mark.parametrize("seed", ["1", "2"])
def test_seed_does_not_change_results(seed):
    _, a, _ = call("explain", problem("two.p"), "--format", "json", "--seed", seed)
    _, b, _ = call("explain", problem("two.p"), "--format", "json")
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "stats"}
    assert strip(a) == strip(b)
