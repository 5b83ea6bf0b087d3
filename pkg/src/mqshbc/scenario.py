"""Scenario files: INI-style sections describing one reproducible sweep.

Example::

    [scenario]
    name = fig7a
    command = sweep-freq

    [tx]
    radius = 0.05
    wire_radius = 0.8137e-3
    inductance = 260e-9          ; optional override of the computed value

    [rx]
    radius = 0.05
    wire_radius = 0.8137e-3
    center = 0, 0, 0.10

    [termination]
    cases = vna_50, low_source
    z0 = 50

    [sweep]
    axis = frequency
    start = 1e3
    stop = 1e10
    points = 400

Sections ``[body]`` and ``[output]`` are optional; see ``Scenario`` for every
key and its default.
"""

import configparser
import hashlib
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .coils import CoilPair, Loop, self_inductance
from .constants import AWG14_RADIUS
from .errors import LookupFailure, ParseError, ValidationError
from .link import Case, DEFAULT_LOW_SOURCE_RESISTANCE, DEFAULT_Z0, infer_load_capacitance
from .tissuedb import get_tissue, load_tissue_db

COMMANDS = ("sweep-freq", "sweep-distance", "sweep-offset", "tissue", "regime")
AXES = ("frequency", "distance", "offset")
SPACINGS = ("log", "linear")
FORMATS = ("csv", "svg", "both")
DEFAULT_BAND = (1e3, 1e10)
DEFAULT_POINTS = 400
DEFAULT_FIXED_FREQUENCY = 30e6


@dataclass(frozen=True)
class CoilSpec:
    loop: Loop
    inductance: float = None
    internal_factor: float = 0.0

    @property
    def self_inductance(self):
        if self.inductance is not None:
            return self.inductance
        return self_inductance(self.loop, self.internal_factor)


@dataclass(frozen=True)
class TerminationSpec:
    cases: tuple = (Case.VNA_50,)
    z0: float = DEFAULT_Z0
    source_resistance: float = DEFAULT_LOW_SOURCE_RESISTANCE
    load_capacitance: float = None
    load_resonance: float = None


@dataclass(frozen=True)
class BodySpec:
    tissue: str = "muscle"
    body_dimension: float = 0.08
    arm_radius: float = 0.04
    enabled: bool = False
    interpolated: bool = False
    tissue_db: str = None


@dataclass(frozen=True)
class SweepSpec:
    axis: str = "frequency"
    start: float = DEFAULT_BAND[0]
    stop: float = DEFAULT_BAND[1]
    points: int = DEFAULT_POINTS
    spacing: str = "log"
    frequency: float = DEFAULT_FIXED_FREQUENCY
    distance_start: float = None
    distance_stop: float = None
    distance_points: int = None

    def grid(self):
        return _grid(self.start, self.stop, self.points, self.spacing)

    def distance_grid(self, default=None):
        """Distances of the offset grid; ``default`` when none are configured."""
        if self.distance_start is None:
            return None if default is None else np.array([float(default)])
        return _grid(self.distance_start, self.distance_stop, self.distance_points or 2, "linear")


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario; ``text`` and ``overrides`` feed the config hash."""

    name: str
    command: str
    tx: CoilSpec
    rx: CoilSpec
    termination: TerminationSpec = field(default_factory=TerminationSpec)
    body: BodySpec = field(default_factory=BodySpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    output_path: str = None
    output_format: str = "csv"
    text: str = ""
    overrides: tuple = ()

    @property
    def pair(self):
        return CoilPair(self.tx.loop, self.rx.loop)

    def load_capacitance(self):
        t = self.termination
        if t.load_capacitance is not None:
            return t.load_capacitance
        if t.load_resonance is not None:
            return infer_load_capacitance(t.load_resonance, self.rx.self_inductance)
        return None

    @property
    def config_hash(self):
        h = hashlib.sha256(self.text.encode("utf-8"))
        for key, value in self.overrides:
            h.update(f"\n{key}={value}".encode("utf-8"))
        return h.hexdigest()

    def with_overrides(self, **changes):
        """Apply command-line overrides (``None`` values are ignored).

        Keys: ``points``, ``fmin``, ``fmax``, ``body``, ``interpolated``,
        ``tissue``, ``body_dimension``, ``tissue_db``.
        """
        changes = {k: v for k, v in changes.items() if v is not None}
        if not changes:
            return self
        sweep, body = self.sweep, self.body
        if "points" in changes:
            sweep = replace(sweep, points=int(changes["points"]))
        if "fmin" in changes:
            sweep = replace(sweep, start=float(changes["fmin"]))
        if "fmax" in changes:
            sweep = replace(sweep, stop=float(changes["fmax"]))
        for key in ("tissue", "body_dimension", "tissue_db"):
            if key in changes:
                body = replace(body, **{key: changes[key]})
        if "body" in changes:
            body = replace(body, enabled=bool(changes["body"]))
        if "interpolated" in changes:
            body = replace(body, interpolated=bool(changes["interpolated"]))
        overrides = self.overrides + tuple(sorted((k, repr(v)) for k, v in changes.items()))
        result = replace(self, sweep=sweep, body=body, overrides=overrides)
        validate(result)
        return result


def _grid(start, stop, points, spacing):
    if spacing == "log":
        return np.logspace(math.log10(start), math.log10(stop), int(points))
    return np.linspace(start, stop, int(points))


def _float(section, key, default=None):
    raw = section.get(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"[{section.name}] {key}: expected a number, got {raw!r}") from None


def _int(section, key, default=None):
    value = _float(section, key, None)
    if value is None:
        return default
    if value != int(value):
        raise ValidationError(f"[{section.name}] {key}: expected an integer, got {value!r}")
    return int(value)


def _vector(section, key, default):
    raw = section.get(key)
    if raw is None:
        return default
    try:
        values = tuple(float(x) for x in raw.replace(",", " ").split())
    except ValueError:
        raise ValidationError(f"[{section.name}] {key}: expected three numbers, got {raw!r}") from None
    if len(values) != 3:
        raise ValidationError(f"[{section.name}] {key}: expected three numbers, got {raw!r}")
    return values


def _bool(section, key, default):
    try:
        return section.getboolean(key, fallback=default)
    except ValueError:
        raise ValidationError(f"[{section.name}] {key}: expected a boolean, got {section.get(key)!r}") from None


def _coil(parser, name, default_center):
    if not parser.has_section(name):
        raise ValidationError(f"missing [{name}] section")
    s = parser[name]
    loop = Loop(
        radius=_float(s, "radius", 0.05),
        wire_radius=_float(s, "wire_radius", AWG14_RADIUS),
        turns=_int(s, "turns", 1),
        center=_vector(s, "center", default_center),
        axis=_vector(s, "axis", (0.0, 0.0, 1.0)),
    )
    inductance = _float(s, "inductance")
    if inductance is not None and not inductance > 0.0:
        raise ValidationError(f"[{name}] inductance must be positive, got {inductance!r}")
    return CoilSpec(loop, inductance, _float(s, "internal_factor", 0.0))


def parse_scenario(text, path=None):
    """Parse scenario text; raises ``ValidationError`` / ``ParseError``."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text, source=str(path) if path else "<scenario>")
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        raise ParseError(str(exc).splitlines()[0], lineno, path) from None
    if not parser.has_section("scenario"):
        raise ValidationError("missing [scenario] section")
    head = parser["scenario"]
    name = head.get("name", Path(path).stem if path else "scenario")
    command = head.get("command", "sweep-freq")

    empty = configparser.SectionProxy(parser, "DEFAULT")
    sec = lambda n: parser[n] if parser.has_section(n) else empty  # noqa: E731

    t = sec("termination")
    raw_cases = t.get("cases", "vna_50")
    try:
        cases = tuple(Case(c.strip()) for c in raw_cases.split(",") if c.strip())
    except ValueError as exc:
        raise ValidationError(f"[termination] cases: {exc}; choose from "
                              f"{', '.join(c.value for c in Case)}") from None
    termination = TerminationSpec(
        cases=cases,
        z0=_float(t, "z0", DEFAULT_Z0),
        source_resistance=_float(t, "source_resistance", DEFAULT_LOW_SOURCE_RESISTANCE),
        load_capacitance=_float(t, "load_capacitance"),
        load_resonance=_float(t, "load_resonance"),
    )

    b = sec("body")
    body = BodySpec(
        tissue=b.get("tissue", "muscle"),
        body_dimension=_float(b, "body_dimension", 0.08),
        arm_radius=_float(b, "arm_radius", 0.04),
        enabled=_bool(b, "enabled", False),
        interpolated=_bool(b, "interpolated", False),
        tissue_db=b.get("tissue_db"),
    )

    w = sec("sweep")
    axis = w.get("axis", {"sweep-distance": "distance", "sweep-offset": "offset"}.get(command, "frequency"))
    default_start, default_stop = DEFAULT_BAND if axis == "frequency" else (None, None)
    sweep = SweepSpec(
        axis=axis,
        start=_float(w, "start", default_start),
        stop=_float(w, "stop", default_stop),
        points=_int(w, "points", DEFAULT_POINTS),
        spacing=w.get("spacing", "log" if axis != "offset" else "linear"),
        frequency=_float(w, "frequency", DEFAULT_FIXED_FREQUENCY),
        distance_start=_float(w, "distance_start"),
        distance_stop=_float(w, "distance_stop"),
        distance_points=_int(w, "distance_points"),
    )

    needs_coils = command.startswith("sweep") or command == "coil"
    if needs_coils or parser.has_section("tx"):
        tx = _coil(parser, "tx", (0.0, 0.0, 0.0))
        rx = _coil(parser, "rx", (0.0, 0.0, 0.1))
    else:
        tx = rx = None

    o = sec("output")
    scenario = Scenario(name, command, tx, rx, termination, body, sweep,
                        o.get("path"), o.get("format", "csv"), text)
    validate(scenario)
    return scenario


def validate(s):
    """Check scenario invariants (before any computation)."""
    if s.command not in COMMANDS:
        raise ValidationError(f"unknown command {s.command!r}; choose from {', '.join(COMMANDS)}")
    w = s.sweep
    if w.axis not in AXES:
        raise ValidationError(f"[sweep] axis must be one of {', '.join(AXES)}, got {w.axis!r}")
    if w.spacing not in SPACINGS:
        raise ValidationError(f"[sweep] spacing must be log or linear, got {w.spacing!r}")
    expected = {"sweep-freq": "frequency", "sweep-distance": "distance", "sweep-offset": "offset",
                "tissue": "frequency", "regime": "frequency"}[s.command]
    if w.axis != expected:
        raise ValidationError(f"command {s.command} needs axis = {expected}, got {w.axis!r}")
    if w.start is None or w.stop is None:
        raise ValidationError("[sweep] start and stop are required")
    lower_ok = w.start >= 0.0 if w.axis == "offset" else w.start > 0.0
    if not (lower_ok and w.stop > w.start):
        raise ValidationError(f"[sweep] need {'0 <=' if w.axis == 'offset' else '0 <'} start < stop, "
                              f"got {w.start!r}, {w.stop!r}")
    if w.spacing == "log" and not w.start > 0.0:
        raise ValidationError("[sweep] log spacing needs start > 0")
    if w.points < 2:
        raise ValidationError(f"[sweep] points must be >= 2, got {w.points!r}")
    if not w.frequency > 0.0:
        raise ValidationError(f"[sweep] frequency must be positive, got {w.frequency!r}")
    if w.axis == "offset":
        if w.distance_start is not None and (
                not 0.0 < w.distance_start <= (w.distance_stop or 0.0) or (w.distance_points or 0) < 1):
            raise ValidationError("[sweep] need 0 < distance_start <= distance_stop and distance_points >= 1")
    if s.body.body_dimension is not None and not s.body.body_dimension > 0.0:
        raise ValidationError(f"[body] body_dimension must be positive, got {s.body.body_dimension!r}")
    if not s.body.arm_radius > 0.0:
        raise ValidationError(f"[body] arm_radius must be positive, got {s.body.arm_radius!r}")
    if s.output_format not in FORMATS:
        raise ValidationError(f"[output] format must be one of {', '.join(FORMATS)}")
    if s.command.startswith("sweep"):
        if s.tx is None:
            raise ValidationError("coil sections [tx] and [rx] are required for sweeps")
        t = s.termination
        if not t.cases:
            raise ValidationError("[termination] cases is empty")
        if not (t.z0 > 0.0 and t.source_resistance >= 0.0):
            raise ValidationError("[termination] need z0 > 0 and source_resistance >= 0")
        capacitive = any(c in (Case.CAPACITIVE_LOAD, Case.LOW_SOURCE_CAPACITIVE_LOAD) for c in t.cases)
        if capacitive and s.load_capacitance() is None:
            raise ValidationError("[termination] capacitive cases need load_capacitance or load_resonance")
        s.pair  # raises GeometryError for overlapping wires
    if s.command in ("tissue", "regime") or s.body.enabled:
        get_tissue(load_db(s), s.body.tissue)


def load_db(s):
    return load_tissue_db(s.body.tissue_db)


def shipped_scenarios():
    """Names of the scenarios bundled with the package."""
    root = resources.files("mqshbc") / "scenarios"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def resolve(name_or_path):
    """Path of a scenario given as a file path or a shipped scenario name."""
    p = Path(name_or_path)
    if p.is_file():
        return p
    shipped = resources.files("mqshbc") / "scenarios" / f"{name_or_path}.ini"
    if shipped.is_file():
        return Path(str(shipped))
    raise LookupFailure(f"no scenario file or shipped scenario {str(name_or_path)!r}; "
                        f"shipped: {', '.join(shipped_scenarios())}")


def load_scenario(name_or_path):
    path = resolve(name_or_path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8 text: {exc}", None, path) from None
    return parse_scenario(text, path)


def scenario_for_tissue(command, tissue, body_dimension=None, tissue_db=None):
    """Ad-hoc scenario for the ``tissue``/``regime`` commands without a file."""
    text = (f"[scenario]\nname = {tissue}\ncommand = {command}\n[body]\ntissue = {tissue}\n"
            + (f"body_dimension = {body_dimension!r}\n" if body_dimension is not None else ""))
    if tissue_db is not None:
        text += f"tissue_db = {tissue_db}\n"
    return parse_scenario(text)
