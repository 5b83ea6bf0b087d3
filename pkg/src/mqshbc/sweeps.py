"""Sweep drivers: turn a ``Scenario`` into a ``SweepResult``.

Column naming: the abscissa comes first; per-termination-case columns are
prefixed with the case name (``vna_50_gain_db``).  Gains are ``Vo/Vi``
magnitudes in dB; an exactly zero gain is written as ``-inf``.
"""

import hashlib
import math
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .coils import CoilPair, mutual_inductance, mutual_neumann
from .dielectrics import (InterpolatedPermittivityModel, classify_regime, evaluate_cole_cole,
                          evaluate_interpolated)
from .eddy import CylinderModel, transmission
from .errors import ConsistencyError, ConventionError, ValidationError
from .link import Case, LinkModel, Termination, find_peak, s21_from_gain, specialize, voltage_gain
from .results import Column, SweepResult, read_reference
from .scenario import load_db
from .tissuedb import default_db_path, get_tissue

BODY_COMPOSITION_NOTE = "first-order: |gain| x on-axis eddy transmission of a tissue cylinder"
DB_TOLERANCE = 1e-9


class UnitMismatchWarning(UserWarning):
    """Reference series units differ from the sweep's."""


def to_db(values):
    """20 log10 |values|; exact zeros map to -inf."""
    mag = np.abs(np.asarray(values))
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(mag)


def check_db(db, linear, name):
    """Emitted dB must be finite except at exact zeros and match 20 log10 |x|."""
    mag = np.abs(np.asarray(linear))
    db = np.asarray(db, dtype=float)
    zero = mag == 0.0
    if np.any(~np.isfinite(db[~zero])) or np.any(db[zero] != -np.inf):
        raise ConsistencyError(f"column {name}: non-finite dB at a non-zero magnitude")
    ref = 20.0 * np.log10(mag[~zero])
    if np.any(np.abs(db[~zero] - ref) > DB_TOLERANCE):
        raise ConsistencyError(f"column {name}: dB differs from 20 log10 |x|")


def _provenance(scenario, **extra):
    prov = {"tool_version": __version__, "config_hash": scenario.config_hash,
            "command": scenario.command}
    prov.update({k: str(v) for k, v in extra.items()})
    return prov


def _db_columns(prefix, gain):
    db = to_db(gain)
    check_db(db, gain, prefix)
    phase = np.degrees(np.angle(gain))
    return [Column(f"{prefix}_gain_db", "dB", db), Column(f"{prefix}_phase", "deg", phase)]


def _links(scenario, mutual):
    base = LinkModel(scenario.tx.self_inductance, scenario.rx.self_inductance, mutual,
                     Termination.resistive(scenario.termination.z0),
                     Termination.resistive(scenario.termination.z0))
    t = scenario.termination
    return {case: specialize(base, case, t.z0, t.source_resistance, scenario.load_capacitance())
            for case in t.cases}


def _body_model(scenario):
    tissue = get_tissue(load_db(scenario), scenario.body.tissue)
    return CylinderModel(scenario.body.arm_radius, tissue)


def run_sweep_freq(scenario, mutual=None):
    """Link response of every termination case over the frequency grid.

    ``M`` is computed once from the coil geometry (or taken from ``mutual``).
    ``vna_50`` additionally yields S21; with ``scenario.body.enabled`` each
    case also gets ``|gain| x eddy transmission`` (a first-order composition).
    """
    f = scenario.sweep.grid()
    m = mutual_inductance(scenario.pair) if mutual is None else float(mutual)
    links = _links(scenario, m)
    columns = [Column("frequency", "Hz", f)]
    prov = {"mutual_H": repr(m), "l_tx_H": repr(scenario.tx.self_inductance),
            "l_rx_H": repr(scenario.rx.self_inductance), "separation_m": repr(scenario.pair.separation)}
    eddy_t = None
    if scenario.body.enabled:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # out-of-band tissue evaluations
            eddy_t = np.atleast_1d(transmission(_body_model(scenario), f))
        prov["body_composition"] = BODY_COMPOSITION_NOTE
        prov["body_tissue"] = scenario.body.tissue
        prov["arm_radius_m"] = repr(scenario.body.arm_radius)
        columns.append(Column("eddy_transmission", "1", eddy_t))
    for case, link in links.items():
        name = Case(case).value
        gain = np.atleast_1d(voltage_gain(link, f))
        columns += _db_columns(name, gain)
        try:
            s = s21_from_gain(gain, link.source, link.load)
        except ConventionError:
            pass  # S21 is only defined between equal resistive references
        else:
            db = to_db(s)
            check_db(db, s, f"{name}_s21_db")
            columns.append(Column(f"{name}_s21_db", "dB", db))
        if eddy_t is not None:
            body_gain = np.abs(gain) * eddy_t
            db = to_db(body_gain)
            check_db(db, body_gain, f"{name}_gain_body_db")
            columns.append(Column(f"{name}_gain_body_db", "dB", db))
        if m != 0.0:
            peak = find_peak(lambda x, link=link: voltage_gain(link, x), f[0], f[-1])
            prov[f"peak_{name}_Hz"] = repr(peak)
            prov[f"peak_{name}_db"] = repr(float(to_db(voltage_gain(link, peak))))
    return SweepResult(scenario.name, "frequency", columns, _provenance(scenario, **prov))


def _coaxial_pair(scenario, distance):
    tx = scenario.tx.loop
    center = np.array(tx.center) + distance * np.array(tx.axis)
    return CoilPair(tx, scenario.rx.loop.moved(center=center, axis=tx.axis))


def run_sweep_distance(scenario):
    """Gain at the fixed sweep frequency versus coaxial separation."""
    d = scenario.sweep.grid()
    f = scenario.sweep.frequency
    m = np.array([mutual_inductance(_coaxial_pair(scenario, x)) for x in d])
    columns = [Column("distance", "m", d), Column("mutual", "H", m)]
    for case in scenario.termination.cases:
        gain = np.array([complex(voltage_gain(link, f)) for link in
                         (_links(scenario, x)[case] for x in m)])
        columns += _db_columns(Case(case).value, gain)
    return SweepResult(scenario.name, "distance", columns,
                       _provenance(scenario, frequency_Hz=repr(f)))


def run_sweep_offset(scenario):
    """Gain over a (distance x lateral offset) grid, long format.

    Rows iterate offsets fastest.  Every cell uses the Neumann quadrature, so
    the ``offset = 0`` cells are an independent check of the closed form.
    """
    offsets = scenario.sweep.grid()
    distances = scenario.sweep.distance_grid(default=scenario.pair.separation)
    f = scenario.sweep.frequency
    tx = scenario.tx.loop
    u, _ = tx.basis()
    rows_d, rows_o, rows_m = [], [], []
    for d in distances:
        for off in offsets:
            center = np.array(tx.center) + d * np.array(tx.axis) + off * u
            pair = CoilPair(tx, scenario.rx.loop.moved(center=center, axis=tx.axis))
            rows_d.append(d)
            rows_o.append(off)
            rows_m.append(mutual_neumann(pair))
    m = np.array(rows_m)
    columns = [Column("distance", "m", np.array(rows_d)), Column("offset", "m", np.array(rows_o)),
               Column("mutual", "H", m)]
    for case in scenario.termination.cases:
        gain = np.array([complex(voltage_gain(_links(scenario, x)[case], f)) for x in m])
        columns += _db_columns(Case(case).value, gain)
    return SweepResult(scenario.name, "offset", columns,
                       _provenance(scenario, frequency_Hz=repr(f), distances=len(distances),
                                   offsets=len(offsets)))


def _hybrid_properties(tissue, f, interpolated):
    """Cole-Cole everywhere, or the interpolated model inside its anchor band."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        props = evaluate_cole_cole(tissue, f)
        fields = ("eps_real", "eps_imag", "sigma_eff", "wavelength_lossless",
                  "wavelength_lossy", "skin_depth")
        out = {k: np.array(getattr(props, k), dtype=float) for k in fields}
        label = np.full(f.shape, "cole-cole", dtype=object)
        if interpolated:
            model = InterpolatedPermittivityModel.from_cole_cole(tissue)
            inside = (f >= model.f_low) & (f <= model.f_high)
            if np.any(inside):
                ip = evaluate_interpolated(model, f[inside])
                for k in fields:
                    out[k][inside] = getattr(ip, k)
                label[inside] = "interpolated"
    return out, label


def report_tissue(tissue, f_grid, interpolated=False, name="tissue", provenance=None):
    """Dielectric and propagation table for one tissue.

    ``tissue`` is a ``ColeColeModel`` (optionally swapped for the
    interpolated model below its upper anchor when ``interpolated``) or an
    ``InterpolatedPermittivityModel`` used as is.
    """
    f = np.asarray(f_grid, dtype=float)
    if isinstance(tissue, InterpolatedPermittivityModel):
        ip = evaluate_interpolated(tissue, f)
        fields = ("eps_real", "eps_imag", "sigma_eff", "wavelength_lossless",
                  "wavelength_lossy", "skin_depth")
        values = {k: np.atleast_1d(np.asarray(getattr(ip, k), dtype=float)) for k in fields}
        label = np.full(f.shape, "interpolated", dtype=object)
        tissue_name = "interpolated"
    else:
        values, label = _hybrid_properties(tissue, f, interpolated)
        tissue_name = tissue.tissue_name
    columns = [
        Column("frequency", "Hz", f),
        Column("eps_real", "1", values["eps_real"]),
        Column("eps_imag", "1", values["eps_imag"]),
        Column("sigma_eff", "S/m", values["sigma_eff"]),
        Column("wavelength_lossless", "m", values["wavelength_lossless"]),
        Column("wavelength_lossy", "m", values["wavelength_lossy"]),
        Column("skin_depth", "m", values["skin_depth"]),
        Column("model", "-", label),
    ]
    prov = {"tissue": tissue_name, "interpolated": str(bool(interpolated))}
    prov.update(provenance or {})
    return SweepResult(name, "tissue", columns, prov)


class _Lambda:
    def __init__(self, wavelength):
        self.wavelength_lossless = wavelength


def report_regime(tissue, body_dimension, f_grid, interpolated=False, name="regime", provenance=None):
    """``report_tissue`` plus the MQS / transitional / EM label per frequency."""
    result = report_tissue(tissue, f_grid, interpolated, name, provenance)
    labels = classify_regime(_Lambda(result["wavelength_lossless"]), body_dimension)
    regime = Column("regime", "-", np.array([str(x) for x in np.atleast_1d(labels)], dtype=object))
    out = result.with_columns([regime], body_dimension_m=repr(body_dimension))
    return SweepResult(out.scenario, "regime", out.columns, out.provenance)


def run_tissue(scenario):
    tissue = get_tissue(load_db(scenario), scenario.body.tissue)
    return report_tissue(tissue, scenario.sweep.grid(), scenario.body.interpolated, scenario.name,
                         _provenance(scenario, tissue_db_sha256=_db_digest(scenario)))


def run_regime(scenario):
    tissue = get_tissue(load_db(scenario), scenario.body.tissue)
    return report_regime(tissue, scenario.body.body_dimension, scenario.sweep.grid(),
                         scenario.body.interpolated, scenario.name,
                         _provenance(scenario, tissue_db_sha256=_db_digest(scenario)))


def _db_digest(scenario):
    path = Path(scenario.body.tissue_db) if scenario.body.tissue_db else default_db_path()
    return hashlib.sha256(path.read_bytes()).hexdigest()


RUNNERS = {
    "sweep-freq": run_sweep_freq,
    "sweep-distance": run_sweep_distance,
    "sweep-offset": run_sweep_offset,
    "tissue": run_tissue,
    "regime": run_regime,
}


def run(scenario):
    """Dispatch on ``scenario.command``."""
    return RUNNERS[scenario.command](scenario)


def _target_column(result, column):
    if column is not None:
        return result.column(column)
    for c in result.columns[1:]:
        if c.numeric and c.unit == "dB":
            return c
    for c in result.columns[1:]:
        if c.numeric:
            return c
    raise ValidationError("result has no numeric ordinate to compare against")


def overlay_reference(result, csv_path, column=None, name="reference"):
    """Attach a reference series (interpolated onto the abscissa) and its difference.

    The reference is interpolated linearly in ``log10(x)`` when all abscissae
    are positive, linearly in ``x`` otherwise; points outside the reference
    range are ``nan``.  Adds ``<name>`` and ``<name>_difference``
    (``target - reference``) columns.
    """
    x_ref, y_ref, x_unit, y_unit = read_reference(csv_path)
    target = _target_column(result, column)
    x = np.asarray(result.abscissa.values, dtype=float)
    if x_unit is not None and x_unit != result.abscissa.unit:
        warnings.warn(f"reference abscissa unit {x_unit!r} differs from {result.abscissa.unit!r}",
                      UnitMismatchWarning, stacklevel=2)
    if y_unit is not None and y_unit != target.unit:
        warnings.warn(f"reference ordinate unit {y_unit!r} differs from {target.unit!r}",
                      UnitMismatchWarning, stacklevel=2)
    if np.all(x > 0) and np.all(x_ref > 0):
        xs, xr = np.log10(x), np.log10(x_ref)
    else:
        xs, xr = x, x_ref
    y = np.interp(xs, xr, y_ref, left=math.nan, right=math.nan)
    diff = np.asarray(target.values, dtype=float) - y
    return result.with_columns(
        [Column(name, target.unit, y), Column(f"{name}_difference", target.unit, diff)],
        reference_target=target.name)
