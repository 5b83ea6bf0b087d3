"""Command-line interface: ``mqshbc <command> [options]``.

Exit codes: 0 success, 1 invalid input (scenario, tissue DB, reference
file, geometry), 2 numerical failure (singular circuit, violated invariant).
"""

import argparse
import math
import sys
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .coils import coupling_coefficient, mutual_inductance
from .errors import NumericalError, ValidationError
from .link import peak_frequency_approx
from .results import Column, SweepResult, to_csv, write_csv
from .scenario import load_scenario, scenario_for_tissue, shipped_scenarios
from .svgplot import heatmap, line_plot
from .sweeps import overlay_reference, run

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2


def _plot_columns(result):
    """Columns drawn on a line plot: the first ordinate's unit group."""
    numeric = [c for c in result.columns[1:] if c.numeric and not c.name.endswith("_difference")]
    if result.kind in ("tissue", "regime"):
        return [c for c in numeric if c.unit == "m"]
    db = [c for c in numeric if c.unit == "dB"]
    return db or numeric[:1]


def render_svg(result):
    """SVG picture of a ``SweepResult`` appropriate to its kind."""
    title = f"{result.scenario} ({result.kind})"
    if result.kind == "offset":
        d, off = result["distance"], result["offset"]
        value = next(c for c in result.columns if c.unit == "dB")
        ds, os_ = np.unique(d), np.unique(off)
        z = np.full((ds.size, os_.size), np.nan)
        z[np.searchsorted(ds, d), np.searchsorted(os_, off)] = value.values
        return heatmap(ds * 100.0, os_ * 100.0, z, "distance (cm)", "lateral offset (cm)",
                       f"{value.name} ({value.unit})", title)
    x = result.abscissa
    cols = _plot_columns(result)
    unit = cols[0].unit if cols else ""
    series = [(c.name, x.values, c.values) for c in cols]
    if result.kind == "regime":
        dim = float(result.provenance["body_dimension_m"])
        series += [("10 x body dimension", x.values[[0, -1]], np.full(2, 10 * dim)),
                   ("body dimension", x.values[[0, -1]], np.full(2, dim))]
    ylog = unit == "m"
    return line_plot(series, f"{x.name} ({x.unit})", f"({unit})", title, xlog=x.unit in ("Hz", "m"),
                     ylog=ylog)


def _write(result, out, fmt):
    if out is None:
        if fmt != "csv":
            raise ValidationError("--out is required for svg output")
        sys.stdout.write(to_csv(result))
        return []
    out = Path(out)
    written = []
    if fmt in ("csv", "both"):
        path = out.with_suffix(".csv") if fmt == "both" else out
        write_csv(result, path)
        written.append(path)
    if fmt in ("svg", "both"):
        path = out.with_suffix(".svg") if fmt == "both" else out
        path.write_text(render_svg(result), encoding="utf-8")
        written.append(path)
    return written


def _scenario(args, command):
    if args.scenario is not None:
        scenario = load_scenario(args.scenario)
        if command != "run" and scenario.command != command:
            scenario = _retarget(scenario, command)
    elif command in ("tissue", "regime"):
        scenario = scenario_for_tissue(command, args.tissue or "muscle", args.body_dimension, args.tissue_db)
    else:
        raise ValidationError(f"{command} needs --scenario (a path or one of: {', '.join(shipped_scenarios())})")
    return scenario.with_overrides(
        points=args.points, fmin=args.fmin, fmax=args.fmax, body=args.body or None,
        interpolated=args.interpolated or None, tissue=args.tissue,
        body_dimension=args.body_dimension, tissue_db=args.tissue_db)


def _retarget(scenario, command):
    """Reuse a frequency scenario's body settings for ``tissue``/``regime``."""
    if command in ("tissue", "regime") and scenario.sweep.axis == "frequency":
        return replace(scenario, command=command)
    raise ValidationError(f"scenario {scenario.name!r} is a {scenario.command} scenario, not {command}")


def _cmd_sweep(args, command):
    scenario = _scenario(args, command)
    result = run(scenario)
    if args.reference is not None:
        result = overlay_reference(result, args.reference)
    fmt = args.format or scenario.output_format
    out = args.out if args.out is not None else scenario.output_path
    for path in _write(result, out, fmt):
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def _cmd_coil(args):
    if args.scenario is None:
        raise ValidationError("coil needs --scenario")
    s = load_scenario(args.scenario)
    pair = s.pair
    m = mutual_inductance(pair)
    l_tx, l_rx = s.tx.self_inductance, s.rx.self_inductance
    values = [
        ("l_tx", "H", l_tx), ("l_rx", "H", l_rx), ("mutual", "H", m),
        ("coupling", "1", m / math.sqrt(l_tx * l_rx)),
        ("coupling_geometric", "1", coupling_coefficient(pair, s.tx.internal_factor)),
        ("separation", "m", pair.separation), ("lateral_offset", "m", pair.lateral_offset),
        ("peak_frequency_approx", "Hz", peak_frequency_approx(l_tx, s.termination.z0)),
    ]
    result = SweepResult(s.name, "coil", [Column(n, u, np.array([v])) for n, u, v in values],
                         {"tool_version": __version__, "config_hash": s.config_hash})
    if args.out is not None:
        write_csv(result, args.out)
    else:
        for n, u, v in values:
            print(f"{n} [{u}]: {float(v)!r}")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario file or shipped scenario name")
    common.add_argument("--tissue-db", help="tissue database file (default: $MQS_TISSUE_DB or shipped)")
    common.add_argument("--out", help="output path (CSV to stdout when omitted)")
    common.add_argument("--format", choices=("csv", "svg", "both"), help="output format")
    common.add_argument("--body", action="store_true", help="apply first-order eddy attenuation")
    common.add_argument("--interpolated", action="store_true",
                        help="use the interpolated permittivity model below 10 MHz")
    common.add_argument("--points", type=int, help="number of sweep points")
    common.add_argument("--fmin", type=float, help="sweep start (Hz, or m for distance sweeps)")
    common.add_argument("--fmax", type=float, help="sweep stop (Hz, or m for distance sweeps)")
    common.add_argument("--tissue", help="tissue name in the database")
    common.add_argument("--body-dimension", type=float, help="body dimension (m) for regime labels")
    common.add_argument("--reference", help="two-column reference CSV to overlay")

    parser = argparse.ArgumentParser(prog="mqshbc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sweep-freq": "link gain versus frequency",
        "sweep-distance": "link gain versus coaxial distance",
        "sweep-offset": "link gain over a distance x lateral-offset grid",
        "tissue": "dielectric and propagation properties of a tissue",
        "regime": "tissue properties with MQS / transitional / EM labels",
        "coil": "inductances and coupling of a scenario's coils",
        "run": "run a scenario's own command",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    sub.add_parser("version", help="print the tool version")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if args.command == "version":
                print(__version__)
                return EXIT_OK
            if args.command == "coil":
                return _cmd_coil(args)
            return _cmd_sweep(args, args.command)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
