import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mqshbc.errors import ParseError, ValidationError
from mqshbc.results import Column, SweepResult, from_csv, read_csv, read_reference, to_csv, write_csv


def sample():
    return SweepResult("demo", "frequency", [
        Column("frequency", "Hz", np.array([1e3, 1e4, 1e5])),
        Column("gain_db", "dB", np.array([-np.inf, -40.123456789012345, 0.1 + 0.2])),
        Column("regime", "", np.array(["MQS", "transitional", "EM"])),
    ], {"tool_version": "0.1.0", "config_hash": "abc"})


def test_round_trip_exact(tmp_path):
    res = sample()
    path = tmp_path / "out.csv"
    write_csv(res, path)
    back = read_csv(path)
    assert back.scenario == "demo" and back.kind == "frequency"
    assert back.provenance == res.provenance
    assert back.names == res.names
    assert [c.unit for c in back.columns] == ["Hz", "dB", ""]
    for a, b in zip(res.columns, back.columns):
        assert list(a.values) == list(b.values)


def test_crlf_and_header():
    text = to_csv(sample())
    assert text.count("\r\n") == len(text.splitlines())
    assert "frequency [Hz],gain_db [dB],regime []\r\n" in text
    assert "-inf" in text
    assert text.startswith("# scenario: demo\r\n")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(allow_nan=False), min_size=1, max_size=20))
def test_float_round_trip(values):
    res = SweepResult("h", "x", [Column("v", "1", np.array(values))])
    back = from_csv(to_csv(res))
    assert list(back["v"]) == [float(v) for v in values]


def test_invalid_results():
    with pytest.raises(ValidationError):
        SweepResult("x", "y", [Column("a", "", [1, 2]), Column("b", "", [1])])
    with pytest.raises(ValidationError):
        SweepResult("x", "y", [Column("a", "", [1]), Column("a", "", [1])])


def test_from_csv_errors():
    with pytest.raises(ParseError):
        from_csv("# only: comments\n")
    with pytest.raises(ParseError) as err:
        from_csv("a [1],b [2]\n1,2\n3\n")
    assert err.value.lineno == 3
    with pytest.raises(ParseError):
        from_csv("a,b\n1,2\n")


def write(tmp_path, text):
    p = tmp_path / "ref.csv"
    p.write_text(text)
    return p


def test_reference_with_header(tmp_path):
    x, y, xu, yu = read_reference(write(tmp_path, "# digitised\nfrequency [Hz],gain [dB]\n3e6,-40\n1e6,-50\n"))
    assert list(x) == [1e6, 3e6] and list(y) == [-50, -40]
    assert (xu, yu) == ("Hz", "dB")


def test_reference_without_header(tmp_path):
    x, y, xu, yu = read_reference(write(tmp_path, "1,2\n\n3,4\n"))
    assert list(y) == [2, 4] and xu is None and yu is None


@pytest.mark.parametrize("text,lineno", [
    ("x,y\n1,2\n3\n", 3),
    ("1,2\n3,4\nfoo,bar\n", 3),
    ("1,2,3\n", 1),
])
def test_reference_errors_report_line(tmp_path, text, lineno):
    with pytest.raises(ParseError) as err:
        read_reference(write(tmp_path, text))
    assert err.value.lineno == lineno
    assert f":{lineno}:" in str(err.value)


def test_reference_too_short(tmp_path):
    with pytest.raises(ParseError):
        read_reference(write(tmp_path, "1,2\n"))
