import pytest

from mqshbc.errors import InvariantViolation, LookupFailure, ParseError
from mqshbc.tissuedb import ENV_VAR, default_db_path, get_tissue, load_tissue_db, parse_tissue_db

RECORD = """\
name=demo eps_inf=4 sigma_ionic=0.2 \\
  term.1.delta_eps=50 term.1.tau=7.2e-12 term.1.alpha=0.1 \\
  term.2.delta_eps=7000 term.2.tau=3.5e-7 term.2.alpha=0.1 \\
  term.3.delta_eps=1.2e6 term.3.tau=3.2e-4 term.3.alpha=0.1 \\
  term.4.delta_eps=2.5e7 term.4.tau=2.3e-3 term.4.alpha=0.0
"""


def test_shipped_db_contents(tissue_db):
    assert {"muscle", "skin_dry"} <= set(tissue_db)
    m = tissue_db["muscle"]
    assert m.eps_inf == 4.0 and m.sigma_ionic == 0.2 and len(m.terms) == 4


def test_parse_record_with_comments():
    db = parse_tissue_db("# header\n\n" + RECORD + "# trailing\n")
    assert list(db) == ["demo"]
    assert db["demo"].terms[2].delta_eps == 1.2e6


def test_empty_file_is_parse_error(tmp_path):
    p = tmp_path / "empty.tdb"
    p.write_text("# only a comment\n")
    with pytest.raises(ParseError):
        load_tissue_db(p)


def test_alpha_out_of_range_names_field():
    bad = RECORD.replace("term.3.alpha=0.1", "term.3.alpha=1.2")
    with pytest.raises(InvariantViolation) as err:
        parse_tissue_db(bad, "x.tdb")
    assert err.value.field == "term.3.alpha"
    assert "x.tdb:4" in str(err.value)


@pytest.mark.parametrize("mutation,line", [
    (lambda s: s.replace("eps_inf=4", "eps_inf=four"), 1),
    (lambda s: s.replace("term.2.tau=3.5e-7", "term.2.tau=3.5e-7 bogus=1"), 3),
    (lambda s: s.replace("term.2.tau=3.5e-7", "term.2.tau=3.5e-7 term.2.tau=1"), 3),
    (lambda s: s.replace(" term.4.alpha=0.0", ""), 1),
    (lambda s: s.replace("sigma_ionic=0.2", "sigma_ionic"), 1),
    (lambda s: s + s, 6),
    (lambda s: s.rstrip("\n") + " \\\n", 1),
])
def test_parse_errors_carry_line_numbers(mutation, line):
    with pytest.raises(ParseError) as err:
        parse_tissue_db(mutation(RECORD), "db.tdb")
    assert err.value.lineno == line
    assert f"db.tdb:{line}:" in str(err.value)


def test_lookup_lists_names(tissue_db):
    with pytest.raises(LookupFailure) as err:
        get_tissue(tissue_db, "liver")
    assert "muscle" in str(err.value)
    assert isinstance(err.value, KeyError)


def test_environment_override(tmp_path, monkeypatch):
    p = tmp_path / "custom.tdb"
    p.write_text(RECORD)
    monkeypatch.setenv(ENV_VAR, str(p))
    assert default_db_path() == p
    assert list(load_tissue_db()) == ["demo"]


def test_non_utf8_rejected(tmp_path):
    p = tmp_path / "bin.tdb"
    p.write_bytes(b"\xff\xfe\x00name=x")
    with pytest.raises(ParseError):
        load_tissue_db(p)
