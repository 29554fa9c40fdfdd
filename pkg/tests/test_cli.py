import json
import subprocess
import sys

from revorder.cli import decode_answer, main, score_lines
from revorder.dataset import Bucket, DatasetSpec
from revorder.traces import ADD, DIV, Form, gen_div_trace, gen_mul_trace, serialize

DIV_COMPACT = "948÷12=7R-(12×70)(r|048)(r|801)#9R-(12×9)(r|801)(0)=79"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gen_goldens(capsys):
    assert run(capsys, "gen", "123+46")[1] == "123+46=r|961\n"
    assert run(capsys, "--form", "compact", "gen", "948/12")[1] == DIV_COMPACT + "\n"
    assert run(capsys, "gen", "948/12", "--form", "compact")[1] == DIV_COMPACT + "\n"
    code, out, _ = run(capsys, "gen", "948/12", "--rollback", "0:+1")
    assert code == 0 and "8R(-r|21)W=7R(948-12×70)" in out


def test_gen_bad_input(capsys):
    code, out, err = run(capsys, "gen", "1/0")
    assert code == 3 and out == "" and "division by zero" in err
    assert run(capsys, "gen", "12+")[0] == 3
    assert run(capsys, "gen", "948/12", "--rollback", "nope")[0] == 2


def test_gen_to_file(capsys, tmp_path):
    out = tmp_path / "t.txt"
    assert run(capsys, "gen", "12*4567", "--out", str(out))[0] == 0
    assert out.read_text(encoding="utf-8").strip() == serialize(gen_mul_trace(12, 4567), Form.VERBOSE)


def test_verify_file(capsys, tmp_path):
    path = tmp_path / "traces.txt"
    lines = [serialize(gen_div_trace(a, 7), form) for a in range(7, 300, 13) for form in Form]
    path.write_text("\n".join(lines) + "\n\n", encoding="utf-8")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0
    assert out.splitlines()[-1] == f"summary: {len(lines)}/{len(lines)} valid"


def test_verify_empty_file(capsys, tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("", encoding="utf-8")
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and out == "summary: 0/0 valid\n"


def test_verify_reports_bad_lines(capsys, tmp_path):
    path = tmp_path / "mixed.txt"
    path.write_text("\n".join([
        DIV_COMPACT,
        "948÷12=7R-(12×70)(r|048)(r|801)#9R-(12×9)(r|801)(0)=78",
        "garbage",
    ]), encoding="utf-8")
    code, out, _ = run(capsys, "verify", str(path))
    lines = out.splitlines()
    assert code == 4
    assert lines[0] == "line 1: VALID"
    assert lines[1].startswith("line 2: INVALID step=2")
    assert lines[2].startswith("line 3: INVALID parse error")
    assert lines[-1] == "summary: 1/3 valid"


def test_verify_missing_file(capsys, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "nope.txt"))[0] == 5


def test_csid(capsys):
    assert run(capsys, "csid", "123+179")[1] == "plain=2 revorder=1\n"
    assert run(capsys, "csid", "--worstcase", "mul_direct", "-n", "3")[1] == "mul_direct n=3 m=3: 57\n"
    assert run(capsys, "csid", "12*3")[0] == 3
    assert run(capsys, "csid")[0] == 2


def test_score(capsys, tmp_path):
    gold = tmp_path / "gold.txt"
    pred = tmp_path / "pred.txt"
    answers = [str(i * 7) for i in range(1000)]
    gold.write_text("\n".join(answers) + "\n", encoding="utf-8")
    pred.write_text("\n".join(answers) + "\n", encoding="utf-8")
    assert "precision=1.000000" in run(capsys, "score", str(pred), str(gold))[1]
    answers[500] = "x"
    pred.write_text("\n".join(answers) + "\n", encoding="utf-8")
    out = run(capsys, "score", str(pred), str(gold))[1]
    assert "exact=999 precision=0.999000" in out
    assert "line 501" in out
    pred.write_text("1\n2\n", encoding="utf-8")
    assert run(capsys, "score", str(pred), str(gold))[0] == 3


def test_score_decode():
    report = score_lines(["123+46=r|961", "948-960=-r|21 ", DIV_COMPACT], ["169", "-12", "79"], decode=True)
    assert report.precision == 1.0
    assert decode_answer("x=r|1a") == "r|1a"
    assert score_lines([], []).precision == 0.0


def test_synth(capsys, tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(DatasetSpec((Bucket(ADD, 2, 2, 0),)).to_dict()), encoding="utf-8")
    out = tmp_path / "empty.jsonl"
    assert run(capsys, "synth", "--spec", str(spec_path), "--seed", "1", "--out", str(out))[0] == 0
    assert out.read_bytes() == b""
    assert json.loads((tmp_path / "empty.jsonl.manifest.json").read_text())["records"] == 0

    assert run(capsys, "synth", "--bucket", "+:2:2:5", "--out", str(out))[0] == 2
    assert run(capsys, "synth", "--bucket", "÷:2:3:5", "--seed", "1", "--out", str(out))[0] == 3
    assert run(capsys, "synth", "--bucket", "bad", "--seed", "1", "--out", str(out))[0] == 2

    data = tmp_path / "d.jsonl"
    assert run(capsys, "--form", "verbose", "synth", "--bucket", "/:6:2:10", "--seed", "4",
               "--out", str(data))[0] == 0
    rows = [json.loads(line) for line in data.read_text(encoding="utf-8").splitlines()]
    assert len(rows) == 10 and all(r["op"] == DIV for r in rows)
    table = run(capsys, "stats", "--dataset", str(data))[1].splitlines()
    assert table[0].startswith("op\t")
    assert sum(int(line.split("\t")[-1]) for line in table[1:]) == 10


def test_stats_monotone(capsys):
    code, out, _ = run(capsys, "stats", "--op", "mul", "--sizes", "2-8", "--samples", "20", "--form", "compact")
    assert code == 0
    extras = [float(line.split("\t")[-1]) for line in out.splitlines()[1:]]
    assert len(extras) == 7 and extras == sorted(extras)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "revorder.cli", "gen", "123+46"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "123+46=r|961\n"
