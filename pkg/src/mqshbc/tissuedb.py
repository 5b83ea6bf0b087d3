"""Reader for the plain-text tissue database.

One logical record per tissue made of whitespace-separated ``key=value``
tokens; a trailing backslash joins the next physical line.  Required keys are
``name``, ``eps_inf``, ``sigma_ionic`` and ``term.N.delta_eps``,
``term.N.tau``, ``term.N.alpha`` for N = 1..4.  ``#`` starts a comment.
"""

import os
from importlib import resources
from pathlib import Path

from .dielectrics import ColeColeModel, ColeColeTerm
from .errors import InvariantViolation, LookupFailure, ParseError

ENV_VAR = "MQS_TISSUE_DB"
N_TERMS = 4
_TERM_FIELDS = ("delta_eps", "tau", "alpha")
_REQUIRED = ("name", "eps_inf", "sigma_ionic") + tuple(
    f"term.{n}.{f}" for n in range(1, N_TERMS + 1) for f in _TERM_FIELDS)


def default_db_path():
    """Shipped database, unless ``MQS_TISSUE_DB`` points elsewhere."""
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("mqshbc") / "data" / "gabriel1996.tdb"))


def _records(lines, path):
    """Yield (start_line, [(token, line), ...]) per logical record."""
    tokens, start = [], None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        cont = line.endswith("\\")
        if cont:
            line = line[:-1]
        words = line.split()
        if words and start is None:
            start = lineno
        tokens.extend((w, lineno) for w in words)
        if not cont and tokens:
            yield start, tokens
            tokens, start = [], None
    if tokens:
        raise ParseError("record ends with a dangling line continuation", start, path)


def parse_tissue_db(text, path=None):
    """Parse database text into an ordered ``{name: ColeColeModel}`` dict."""
    models = {}
    for start, tokens in _records(text.splitlines(), path):
        fields = {}
        for token, lineno in tokens:
            key, sep, value = token.partition("=")
            if not sep or not key or not value:
                raise ParseError(f"expected key=value, got {token!r}", lineno, path)
            if key not in _REQUIRED:
                raise ParseError(f"unknown field {key!r}", lineno, path)
            if key in fields:
                raise ParseError(f"duplicate field {key!r}", lineno, path)
            if key != "name":
                try:
                    value = float(value)
                except ValueError:
                    raise ParseError(f"field {key!r} is not a number: {value!r}", lineno, path) from None
            fields[key] = (value, lineno)
        missing = [k for k in _REQUIRED if k not in fields]
        if missing:
            raise ParseError(f"record is missing field(s) {', '.join(missing)}", start, path)
        name = fields["name"][0]
        if name in models:
            raise ParseError(f"duplicate tissue {name!r}", start, path)
        terms = [ColeColeTerm(*(fields[f"term.{n}.{f}"][0] for f in _TERM_FIELDS))
                 for n in range(1, N_TERMS + 1)]
        try:
            models[name] = ColeColeModel(name, fields["eps_inf"][0], tuple(terms), fields["sigma_ionic"][0])
        except InvariantViolation as exc:
            lineno = fields[exc.field][1] if exc.field in fields else start
            where = f"{path}:{lineno}" if path is not None else f"line {lineno}"
            raise InvariantViolation(exc.field, f"{exc.args[0].split(': ', 1)[1]} ({where})") from None
    if not models:
        raise ParseError("tissue database contains no records", None, path)
    return models


def load_tissue_db(path=None):
    """Load and validate a tissue database file (default: shipped Gabriel set)."""
    path = Path(path) if path is not None else default_db_path()
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text: {exc}", None, path) from None
    return parse_tissue_db(text, path)


def get_tissue(db, name):
    """Look up ``name``; the error lists the available tissues."""
    try:
        return db[name]
    except KeyError:
        raise LookupFailure(f"unknown tissue {name!r}; available: {', '.join(db)}") from None
