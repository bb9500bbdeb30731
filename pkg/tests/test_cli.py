import json

from click.testing import CliRunner

from ctakit.cli import cli, run_command
from ctakit.model import save_model


def _invoke(*args: str, input: str | None = None):
    return CliRunner().invoke(cli, list(args), input=input)


def _json(text: str):
    return json.loads(text[text.index("{"):])


class TestValidate:
    def test_example(self, example_path) -> None:
        result = _invoke("validate", str(example_path))
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["diagnostics"] == []
        assert data["topology"]["classification"] == "two-chain-no-globals"

    def test_stdin(self, example_path) -> None:
        result = _invoke("validate", "-", input=example_path.read_text(encoding="utf-8"))
        assert result.exit_code == 0

    def test_missing_file(self, tmp_path) -> None:
        result = _invoke("validate", str(tmp_path / "absent.json"))
        assert result.exit_code == 1
        assert "absent.json" in result.output

    def test_syntax_error(self, tmp_path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{", encoding="utf-8")
        result = _invoke("validate", str(path))
        assert result.exit_code == 1
        assert "line 1" in result.output


class TestReach:
    def test_explore(self, example_path) -> None:
        result = _invoke(
            "reach", str(example_path), "--target", "A:s2,B:q2,channel-empty", "--no-timing"
        )
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["status"] == "reachable"
        assert data["method"] == "explore"
        assert data["witness"][1] == {"kind": "elapse", "t": 1}
        assert "elapsed_ms" not in data

    def test_oca(self, example_path) -> None:
        args = ("reach", str(example_path), "--method", "oca", "--target", "A:s2,B:q2", "--no-timing")
        first = _invoke(*args)
        second = _invoke(*args)
        assert first.exit_code == 0
        assert json.loads(first.output)["status"] == "reachable"
        assert first.output == second.output

    def test_oca_on_cyclic_network(self, tmp_path, bounded_context) -> None:
        path = tmp_path / "cyclic.json"
        save_model(path, bounded_context)
        result = _invoke("reach", str(path), "--method", "oca", "--target", "A1:p2")
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert data["status"] == "error"
        assert data["witness"] is None

    def test_bmps(self, tmp_path, bounded_context) -> None:
        path = tmp_path / "net.json"
        save_model(path, bounded_context)
        result = _invoke(
            "reach", str(path), "--method", "bmps", "--contexts", "2", "--target", "A1:p2,A2:q3"
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["status"] == "reachable"

    def test_exhausted(self, example_path) -> None:
        result = _invoke("reach", str(example_path), "--target", "B:q2", "--max-steps", "2")
        assert result.exit_code == 0
        assert json.loads(result.output)["status"] == "exhausted"

    def test_bad_target(self, example_path) -> None:
        assert _invoke("reach", str(example_path), "--target", "A:nowhere").exit_code == 2
        assert _invoke("reach", str(example_path), "--target", "Z:s1").exit_code == 2
        assert _invoke("reach", str(example_path), "--target", "A").exit_code == 2

    def test_verdicts_jsonl(self, example_path, tmp_path, monkeypatch) -> None:
        log = tmp_path / "verdicts.jsonl"
        monkeypatch.setenv("CTA_VERDICTS_JSONL", str(log))
        result = _invoke("reach", str(example_path), "--target", "A:s2")
        assert result.exit_code == 0
        entry = json.loads(log.read_text(encoding="utf-8"))
        assert entry["target"] == "A:s2"
        assert entry["status"] == "reachable"


def test_simulate(example_path, tmp_path):
    trace = tmp_path / "trace.json"
    result = _invoke("simulate", str(example_path), "--steps", "6", "--seed", "3", "--trace", str(trace))
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert len(data["steps"]) == 6
    assert json.loads(trace.read_text(encoding="utf-8")) == data["steps"]


class TestGen:
    def test_subset_sum(self, tmp_path) -> None:
        out = tmp_path / "ss.json"
        result = _invoke("gen", "subset-sum", "--set", "3,5", "--target", "8", "--out", str(out))
        assert result.exit_code == 0
        assert json.loads(out.read_text(encoding="utf-8"))["alphabet"] == ["a1", "a2"]

    def test_subset_sum_rejects_zero(self) -> None:
        result = _invoke("gen", "subset-sum", "--set", "0,2", "--target", "2")
        assert result.exit_code == 2

    def test_two_counter(self, programs_dir) -> None:
        result = _invoke("gen", "two-counter", str(programs_dir / "inc_halt.json"))
        assert result.exit_code == 0
        data = json.loads(result.output)
        assert [a["id"] for a in data["automata"]] == ["A1", "A2", "A3"]

    def test_two_counter_selfloop(self, programs_dir) -> None:
        result = _invoke(
            "gen", "two-counter", str(programs_dir / "inc_halt.json"), "--variant", "selfloop"
        )
        assert result.exit_code == 0
        assert json.loads(result.output)["channels"] == [{"id": "c", "from": "A1", "to": "A2"}]


class TestExport:
    def test_region(self, example_path, tmp_path) -> None:
        dot = tmp_path / "a.dot"
        result = _invoke("export", str(example_path), "--what", "region:A", "--dot", str(dot))
        assert result.exit_code == 0
        assert dot.read_text(encoding="utf-8").startswith("digraph region")

    def test_oca(self, example_path, tmp_path) -> None:
        dot = tmp_path / "oca.dot"
        assert _invoke("export", str(example_path), "--what", "oca", "--dot", str(dot)).exit_code == 0
        assert dot.exists()

    def test_unknown_kind(self, example_path, tmp_path) -> None:
        result = _invoke("export", str(example_path), "--what", "zone", "--dot", str(tmp_path / "x.dot"))
        assert result.exit_code == 2


def test_crosscheck(programs_dir):
    result = _invoke("crosscheck", str(programs_dir / "inc_halt.json"), "--steps", "10")
    assert result.exit_code == 0
    data = _json(result.output)
    assert data["ok"] is True
    assert data["programs"][0]["halted"] is True


def test_run_command(example_path, capsys):
    assert run_command(["validate", str(example_path)]) == 0
    assert json.loads(capsys.readouterr().out)["diagnostics"] == []
    assert run_command(["reach", str(example_path), "--target", "Q:s1"]) == 2
