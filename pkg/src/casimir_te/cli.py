"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
3 finished but some quadrature did not converge.
"""

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

import numpy as np

from .config import FORMATS, MODELS, PATHS, ConfigError, load_config
from .constants import thermal_frequency
from .materials import validity_check
from .quadrature import IntegrationSpec
from .spectrum import (
    RATIO_NAMES,
    ConductorImpedance,
    ContourPath,
    Dielectric,
    Geometry,
    PerfectConductor,
    in_model_band,
    ratio_report,
    spectral_density,
)

log = logging.getLogger("casimir_te")

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_FLAGGED = 0, 1, 2, 3

SPECTRUM_COLUMNS = ("omega", "f_c1", "err_c1", "f_c2", "err_c2", "flags")
VALIDITY_COLUMNS = ("omega", "skin_depth_cm", "inv_4a_per_cm", "sqrt2_over_delta_per_cm",
                    "wavelength_ok", "mean_free_path_ok", "model_band_ok",
                    "boyer_threshold", "below_boyer")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12e}"
    return str(x)


def _model(config):
    if config.model == "perfect":
        return PerfectConductor()
    if config.model == "dielectric":
        return Dielectric(config.dielectric)
    return ConductorImpedance(config.conductor)


def _omega_grid(config):
    if config.points == 1:
        return np.array([config.omega_min])
    return np.geomspace(config.omega_min, config.omega_max, config.points)


def _spec(config):
    return IntegrationSpec(rel_tol=config.rel_tol)


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    with fh:
        yield fh


# ------------------------------------------------------------------ spectrum

def spectrum_rows(config):
    """Rows of (omega, f_c1, err_c1, f_c2, err_c2, flags) in reduced units."""
    model = _model(config)
    geom = Geometry(config.separation_cm, config.temperature_k)
    spec = _spec(config)
    unit = thermal_frequency(geom.T) ** 3
    paths = ContourPath(config.path).parts()
    rows = []
    for w in _omega_grid(config):
        w = float(w)
        row = {"omega": w, "f_c1": "", "err_c1": "", "f_c2": "", "err_c2": ""}
        flags = []
        for part in paths:
            sv = spectral_density(model, part, w, geom, spec)
            row[f"f_{part.value}"] = sv.value / unit
            row[f"err_{part.value}"] = sv.err / unit
            if not sv.converged:
                flags.append(f"nonconverged_{part.value}")
        if not in_model_band(model, w):
            flags.append("out_of_band")
        if config.model != "perfect":
            rep = validity_check(config.conductor, w, geom.a,
                                 valid_max_omega=config.dielectric.valid_max_omega)
            if not rep.wavelength_criterion_ok:
                flags.append("wavelength_criterion")
            if not rep.mean_free_path_ok:
                flags.append("mean_free_path")
        row["flags"] = ";".join(flags)
        rows.append(row)
    return rows


def _spectrum_header(config):
    return [
        f"casimir-te spectrum: model={config.model} path={config.path} "
        f"a_um={config.separation_um:g} T_K={config.temperature_k:g}",
        "omega in s^-1; f_* and err_* are F_omega in units of (k_B T/hbar)^3, "
        "overall hbar/(pi^2 c^3) prefactor excluded",
    ]


def write_spectrum(config, rows, fh):
    if config.format == "json":
        doc = {"config": config.to_dict(), "units": _spectrum_header(config)[1],
               "columns": list(SPECTRUM_COLUMNS), "rows": rows}
        json.dump(doc, fh, indent=1)
        fh.write("\n")
        return
    for line in _spectrum_header(config):
        fh.write(f"# {line}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SPECTRUM_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in SPECTRUM_COLUMNS])


def cmd_spectrum(config):
    rows = spectrum_rows(config)
    with _sink(config.output) as fh:
        write_spectrum(config, rows, fh)
    flagged = any("nonconverged" in r["flags"] for r in rows)
    return EXIT_FLAGGED if flagged else EXIT_OK


# -------------------------------------------------------------------- ratios

def ratios_document(config):
    geom = Geometry(config.separation_cm, config.temperature_k)
    report = ratio_report(geom, _spec(config), Dielectric(config.dielectric),
                          ConductorImpedance(config.conductor),
                          config.omega_min, config.omega_max)
    unit = thermal_frequency(geom.T) ** 4
    names = dict(RATIO_NAMES)
    doc = {
        "config": config.to_dict(),
        "units": "integrals in units of (k_B T/hbar)^4, prefactor excluded",
        "baseline_analytic": report.baseline / unit,
        "integrals": {
            f"{n.model.name}_{n.path.value}": {"value": n.reduced, "err": n.reduced_err,
                                               "converged": n.converged}
            for n in (report.perfect_c1, report.perfect_c2, report.dielectric_c1,
                      report.dielectric_c2, report.conductor_c1, report.conductor_c2)
        },
        "ratios": {r.name: {"description": names[r.name], "value": r.value, "err": r.err}
                   for r in report.ratios},
        "converged": report.converged,
        "warnings": list(report.warnings),
        # two conventions are in circulation for the overall prefactor
        "prefactor_candidates": ["hbar/(pi^2 c^3)", "hbar/(pi c^3)"],
    }
    return doc


def format_ratios_text(doc):
    run = doc["config"]["run"]
    lines = [
        f"a = {run['separation_um']:g} um, T = {run['temperature_k']:g} K, "
        f"omega window [{run['omega_min']:g}, {run['omega_max']:g}] s^-1",
        f"perfect-conductor C1 baseline (analytic pi^4/90): {doc['baseline_analytic']:.9f}",
        f"perfect-conductor C1 numeric:                    "
        f"{doc['integrals']['perfect_c1']['value']:.9f}",
        "integrals in (k_B T/hbar)^4; multiply by (k_B T/hbar)^4 and by hbar/(pi^2 c^3) "
        "or hbar/(pi c^3) for a force per area",
    ]
    for name, r in doc["ratios"].items():
        lines.append(f"{name}  {r['description']:<32s} {r['value']: .6f} +/- {r['err']:.2g}")
    for w in doc["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def write_ratios(doc, fmt, fh):
    if fmt == "json":
        json.dump(doc, fh, indent=1)
        fh.write("\n")
        return
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("name", "description", "value", "err"))
    for name, r in doc["ratios"].items():
        writer.writerow((name, r["description"], _fmt(r["value"]), _fmt(r["err"])))


def cmd_ratios(config):
    doc = ratios_document(config)
    sys.stdout.write(format_ratios_text(doc))
    for w in doc["warnings"]:
        log.warning(w)
    if config.output not in (None, "-"):
        with _sink(config.output) as fh:
            write_ratios(doc, config.format, fh)
    return EXIT_OK if doc["converged"] else EXIT_FLAGGED


# ------------------------------------------------------------------ validity

def validity_rows(config):
    a = config.separation_cm
    boyer = config.boyer.threshold
    rows = []
    for w in _omega_grid(config):
        rep = validity_check(config.conductor, float(w), a,
                             valid_max_omega=config.dielectric.valid_max_omega, boyer=boyer)
        rows.append({
            "omega": rep.omega,
            "skin_depth_cm": rep.skin_depth,
            "inv_4a_per_cm": rep.inverse_quarter_gap,
            "sqrt2_over_delta_per_cm": rep.diffusion_wavevector,
            "wavelength_ok": rep.wavelength_criterion_ok,
            "mean_free_path_ok": rep.mean_free_path_ok,
            "model_band_ok": rep.model_band_ok,
            "boyer_threshold": boyer,
            "below_boyer": bool(rep.omega < boyer),
        })
    return rows


def cmd_validity(config):
    rows = validity_rows(config)
    with _sink(config.output) as fh:
        if config.format == "json":
            json.dump({"config": config.to_dict(), "columns": list(VALIDITY_COLUMNS),
                       "rows": rows}, fh, indent=1)
            fh.write("\n")
        else:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(VALIDITY_COLUMNS)
            for row in rows:
                writer.writerow([_fmt(row[c]) for c in VALIDITY_COLUMNS])
    return EXIT_OK


# --------------------------------------------------------- reproduce-figures

def cmd_reproduce(config, outdir):
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create {outdir}: {exc.strerror}") from exc
    status = EXIT_OK
    for name, model in (("fig1_dielectric.csv", "dielectric"), ("fig2_conductor.csv", "conductor")):
        cfg = config.replace(model=model, path="both", format="csv",
                             output=os.path.join(outdir, name))
        status = max(status, cmd_spectrum(cfg))
    doc = ratios_document(config)
    sys.stdout.write(format_ratios_text(doc))
    with _sink(os.path.join(outdir, "ratios.json")) as fh:
        write_ratios(doc, "json", fh)
    if not doc["converged"]:
        status = EXIT_FLAGGED
    return status


# ---------------------------------------------------------------------- main

def _common(parser):
    parser.add_argument("--config", help="INI file overlaid on the gold preset")
    parser.add_argument("--separation-um", type=float, help="plate separation in micrometres")
    parser.add_argument("--temperature-k", type=float, help="temperature in kelvin")
    parser.add_argument("--model", choices=MODELS)
    parser.add_argument("--path", choices=PATHS)
    parser.add_argument("--omega-min", type=float, help="s^-1")
    parser.add_argument("--omega-max", type=float, help="s^-1")
    parser.add_argument("--points", type=int, help="log-spaced frequencies")
    parser.add_argument("--rel-tol", type=float)
    parser.add_argument("--format", choices=FORMATS)
    parser.add_argument("--output", help="output file ('-' for stdout); directory for "
                                         "reproduce-figures")


_FLAG_KEYS = ("separation_um", "temperature_k", "model", "path", "omega_min", "omega_max",
              "points", "rel_tol", "format", "output")


def build_parser():
    parser = _Parser(prog="casimir-te", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (("spectrum", "write F_omega per frequency"),
                       ("ratios", "integrated ratios for all plate models"),
                       ("validity", "regime diagnostics per frequency"),
                       ("reproduce-figures", "both figure spectra plus the ratios")):
        _common(sub.add_parser(name, help=text))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        config = load_config(args.config)
        overrides = {k: getattr(args, k) for k in _FLAG_KEYS if getattr(args, k) is not None}
        outdir = None
        if args.command == "reproduce-figures":
            outdir = overrides.pop("output", "figures")
        config = config.replace(**overrides)
    except ConfigError as exc:
        print(f"casimir-te: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "spectrum":
            return cmd_spectrum(config)
        if args.command == "ratios":
            return cmd_ratios(config)
        if args.command == "validity":
            return cmd_validity(config)
        return cmd_reproduce(config, outdir)
    except OSError as exc:
        print(f"casimir-te: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
