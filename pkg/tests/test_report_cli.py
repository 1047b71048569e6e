import io
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from paircollect.cli import main, parse_a_rule
from paircollect.report import emit_report, format_value, parse_csv

GOLDEN = Path(__file__).parent / "golden"

# hand-checked against the run-count recurrence and the variance formula
GOLDEN_COMMANDS = {
    "pmf_y_3_2.jsonl": ["pmf", "--dist", "y", "--n", "3", "--j", "2", "--kmax", "6", "--exact"],
    "moments_m_3.csv": ["moments", "--target", "m", "--n", "3", "--format", "csv"],
    "oracle_2_4.csv": ["oracle", "--n", "2", "--len", "4", "--format", "csv"],
    "tail_x_2_3.jsonl": ["tail", "--dist", "x", "--n", "2", "--m", "3", "--exact"],
}


def render(rows, fmt, header=None):
    buf = io.StringIO()
    emit_report(rows, fmt, buf, header=header)
    return buf.getvalue()


def test_emit_examples():
    assert render([], "csv", header=["b", "a"]) == "a,b\n"
    assert render([], "jsonl") == ""
    assert render([{"p": Fraction(1, 2)}], "jsonl") == '{"p": "1/2"}\n'
    assert render([{"x": 0.1, "n": 3, "ok": True, "j": None}], "jsonl") == '{"j": null, "n": 3, "ok": true, "x": 0.10000000000000001}\n'
    assert render([{"b": 1, "a": Fraction(2, 3)}], "csv") == "a,b\n2/3,1\n"


def test_emit_rejects_mixed_schema():
    with pytest.raises(ValueError):
        render([{"a": 1}, {"b": 2}], "csv")
    with pytest.raises(ValueError):
        render([{"a": 1}], "xml")


def test_format_value():
    assert format_value(Fraction(4, 27)) == "4/27"
    assert format_value(Fraction(3)) == "3"
    assert format_value(1 / 3) == "0.33333333333333331"
    assert format_value(float("inf")) == "inf"


field = st.one_of(
    st.integers(-(10**12), 10**12),
    st.fractions(max_denominator=10**6).filter(lambda f: f.denominator > 1),
    st.floats(allow_nan=False, allow_infinity=False).filter(lambda x: x != int(x)),
    st.booleans(),
)


@given(st.lists(st.tuples(field, field), min_size=1, max_size=20))
def test_csv_round_trip(pairs):
    rows = [{"u": u, "v": v} for u, v in pairs]
    back = parse_csv(render(rows, "csv"))
    assert back == rows


def test_jsonl_lines_parse():
    text = render([{"x": 1e-300, "y": Fraction(5, 8)}, {"x": -2.5, "y": Fraction(1)}], "jsonl")
    rows = [json.loads(line) for line in text.splitlines()]
    assert rows == [{"x": 1e-300, "y": "5/8"}, {"x": -2.5, "y": "1"}]


@pytest.mark.parametrize("name", sorted(GOLDEN_COMMANDS))
def test_golden_outputs(name, tmp_path):
    out = tmp_path / name
    assert main(GOLDEN_COMMANDS[name] + ["--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / name).read_bytes()


def test_exact_outputs_have_no_floats(tmp_path):
    out = tmp_path / "o.jsonl"
    assert main(["pmf", "--dist", "x", "--n", "4", "--kmax", "10", "--exact", "--out", str(out)]) == 0
    for line in out.read_text().splitlines():
        assert not any(isinstance(v, float) for v in json.loads(line).values())


def test_oracle_rows_all_match(tmp_path):
    out = tmp_path / "o.jsonl"
    assert main(["oracle", "--n", "3", "--len", "7", "--out", str(out)]) == 0
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert rows and all(r["match"] for r in rows)


def test_stdout_and_stderr_split(capsys):
    assert main(["moments", "--target", "y", "--n", "2", "--j", "2"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out) == {"mean": "3", "n": 2, "param": 2, "target": "y", "variance": "2"}
    assert "paircollect moments" in captured.err


@pytest.mark.parametrize(
    "argv,code",
    [
        (["oracle", "--n", "5", "--len", "4"], 3),
        (["oracle", "--n", "3", "--len", "13"], 3),
        (["pmf", "--dist", "y", "--n", "3", "--kmax", "4"], 2),
        (["pmf", "--dist", "y", "--n", "1", "--j", "1", "--kmax", "4"], 2),
        (["moments", "--target", "s", "--n", "5", "--a", "2", "--asym"], 2),
        (["converge", "--law", "gumbel", "--regime", "sublinear", "--n-grid", "10", "--reps", "5", "--seed", "1"], 2),
        (["converge", "--law", "normal", "--regime", "sublinear", "--n-grid", "10", "--reps", "5", "--seed", "1", "--a-rule", "bogus"], 2),
        (["diagnose", "--check", "tail-limit"], 2),
        (["simulate", "--target", "y", "--n", "4", "--reps", "5", "--seed", "1"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    assert capsys.readouterr().out == ""


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["pmf", "--bogus"])
    assert info.value.code == 2


def test_a_rules():
    assert parse_a_rule("k:3")(100) == 3
    assert parse_a_rule("floor-frac:1/2")(101) == 50
    assert parse_a_rule("n-minus:1")(30) == 29
    assert parse_a_rule("floor-sqrt")(10**4) == 100
    assert parse_a_rule("n-minus-sqrt")(2000) == 1956
    for bad in ("k:x", "floor-frac:a/b", "sqrt", "floor-sqrt:2"):
        with pytest.raises(ValueError):
            parse_a_rule(bad)


def test_simulate_values_sorted(tmp_path):
    out = tmp_path / "v.csv"
    assert main(["simulate", "--target", "s", "--n", "4", "--a", "2", "--reps", "50", "--seed", "3", "--values", "--format", "csv", "--out", str(out)]) == 0
    rows = parse_csv(out.read_text())
    values = [r["value"] for r in rows]
    assert len(values) == 50 and values == sorted(values) and min(values) >= 4


def test_diagnose_rows(capsys):
    assert main(["diagnose", "--check", "dprime", "--n-grid", "1000", "--k", "10"]) == 0
    row = json.loads(capsys.readouterr().out)
    assert row["check"] == "dprime" and row["error"] < 0.1
    assert main(["diagnose", "--check", "cf-identity", "--k", "3"]) == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["k"] for r in rows] == [1, 2, 3]
    assert max(r["value"] for r in rows) < 1e-12
