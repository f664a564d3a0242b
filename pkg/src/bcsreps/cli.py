"""Command-line driver: configuration, dispatch, CSV and SVG output.

Every subcommand writes one CSV table (to ``--out`` or stdout) and,
optionally, an SVG plot of it (``--svg``). Parameters come from flags, a
``key = value`` config file (``--config``) or built-in defaults, in that
order of precedence.

Exit codes: 0 success, 2 usage or configuration error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from . import fockring, gap, thermo
from .errors import (ConfigError, ConsistencyError, DomainError, NumericError,
                     RenderError, SizeError)
from .material import EV, M_E, HBAR, density_of_states

REQUIRED = object()

_GRID = {"tau_min": (float, 0.001), "tau_max": (float, 1.0), "n_points": (int, 201)}

# key -> (type, default) per subcommand
COMMAND_KEYS = {
    "tc": {"gN0": (float, 0.2), "T_D": (float, 300.0), "G": (float, 0.01), "T_F": (float, 1e4)},
    "gap-curve": dict(_GRID),
    "hc-curve": {**_GRID, "standard_mode": (str, "two_fluid"), "gN0": (float, 0.2),
                 "Tc": (float, REQUIRED), "Tc_prime": (float, REQUIRED),
                 "epsilon_F_eV": (float, 5.0), "mass_ratio": (float, 1.0)},
    "cv-curve": {**_GRID, "gN0": (float, 0.2)},
    "free-energy": {"Tc": (float, REQUIRED), "Tc_prime": (float, REQUIRED),
                    "gN0": (float, REQUIRED), "T_min": (float, 0.0),
                    "T_max": (float, math.nan), "n_points": (int, 201)},
    "phase": {"Tc": (float, REQUIRED), "Tc_prime": (float, REQUIRED),
              "gN0": (float, REQUIRED), "T": (float, REQUIRED)},
    "fock-verify": {"pairs": (int, 3), "seed": (int, 0), "tol": (float, 1e-12)},
    "nu-count": {"k": (float, REQUIRED), "q": (float, REQUIRED), "L1": (float, REQUIRED),
                 "L2": (float, REQUIRED), "L3": (float, REQUIRED),
                 "lattice_budget": (int, 10**8)},
}
# hc-curve needs Tc and Tc_prime only for absolute fields
_ABSOLUTE_ONLY = {"Tc", "Tc_prime"}
KNOWN_KEYS = frozenset(k for keys in COMMAND_KEYS.values() for k in keys)

SCHEMAS = {
    "tc": ("name", "value"),
    "gap-curve": ("tau", "eta"),
    "hc-curve": ("tau", "R_H_novel", "R_H_standard"),
    "cv-curve": ("tau", "R_C"),
    "free-energy": ("T", "df_novel", "df_standard"),
    "phase": ("name", "value"),
    "fock-verify": ("name", "value"),
    "nu-count": ("name", "value"),
}
ABSOLUTE_HC_SCHEMA = ("tau", "H_novel_gauss", "H_standard_gauss")


@dataclass(frozen=True)
class RunConfig:
    command: str
    values: MappingProxyType
    out: str | None = None
    svg: str | None = None
    absolute_fields: bool = False

    def __getitem__(self, key):
        return self.values[key]


@dataclass(frozen=True)
class CurveFile:
    """A table with a header row; numbers are written with 12 significant digits."""

    header: tuple
    rows: tuple = field(default_factory=tuple)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.header):
                raise ValueError(f"row {r!r} does not match header {self.header!r}")
            for v in r:
                if isinstance(v, float) and not math.isfinite(v):
                    raise NumericError(f"non-finite value in column set {self.header}", v)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for r in self.rows:
            w.writerow([format_value(v) for v in r])
        return buf.getvalue()

    @property
    def numeric(self):
        return all(isinstance(v, (int, float)) and not isinstance(v, bool)
                   for r in self.rows for v in r)


def format_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

def read_config_file(path):
    """``key = value`` lines with ``#`` comments -> ``{key: (raw, line_no)}``."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{n}: expected 'key = value', got {text!r}")
            key, raw = (s.strip() for s in text.split("=", 1))
            if not key:
                raise ConfigError(f"{path}:{n}: empty key")
            entries[key] = (raw, n)
    return entries


def _convert(kind, key, raw, where):
    try:
        if kind is int:
            value = float(raw)
            if not value.is_integer():
                raise ValueError
            return int(value)
        if kind is float:
            value = float(raw)
            if math.isnan(value):
                raise ValueError
            return value
        return str(raw)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {key} = {raw!r} as {kind.__name__}") from None


def parse_config(command, path=None, flags=None, absolute_fields=False, out=None, svg=None):
    """Merge flags, config file and defaults into a :class:`RunConfig`.

    Unknown keys in the file are rejected with their line numbers. Keys
    that belong to other subcommands are accepted and ignored, so one file
    can serve several commands.
    """
    if command not in COMMAND_KEYS:
        raise ConfigError(f"unknown command {command!r}")
    spec = COMMAND_KEYS[command]
    flags = {k: v for k, v in (flags or {}).items() if v is not None}
    file_entries = read_config_file(path) if path else {}
    unknown = sorted((k, n) for k, (_, n) in file_entries.items() if k not in KNOWN_KEYS)
    if unknown:
        listing = ", ".join(f"{k} (line {n})" for k, n in unknown)
        raise ConfigError(f"unknown keys in {path}: {listing}")

    values, missing = {}, []
    for key, (kind, default) in spec.items():
        if key in flags:
            values[key] = _convert(kind, key, flags[key], f"--{key}")
        elif key in file_entries:
            raw, n = file_entries[key]
            values[key] = _convert(kind, key, raw, f"{path}:{n}")
        elif default is REQUIRED:
            if command == "hc-curve" and key in _ABSOLUTE_ONLY and not absolute_fields:
                continue
            missing.append(key)
        else:
            values[key] = default
    if missing:
        raise ConfigError(f"missing required keys for {command}: {', '.join(missing)}")
    _validate(command, values)
    return RunConfig(command, MappingProxyType(values), out=out, svg=svg,
                     absolute_fields=absolute_fields)


def _validate(command, v):
    if "n_points" in v and v["n_points"] < 2:
        raise ConfigError("n_points must be at least 2")
    if "tau_min" in v and not 0 <= v["tau_min"] < v["tau_max"]:
        raise ConfigError("grid needs 0 <= tau_min < tau_max")
    if command == "hc-curve" and v["standard_mode"] not in ("two_fluid", "coupling_integral"):
        raise ConfigError("standard_mode must be two_fluid or coupling_integral")


def tau_grid(cfg):
    return np.linspace(cfg["tau_min"], cfg["tau_max"], cfg["n_points"])


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_tc(cfg):
    tc = gap.bcs_tc(cfg["gN0"], cfg["T_D"])
    d0 = cfg["T_D"] * gap.bcs_gap_at(0.0, cfg["gN0"], cfg["T_D"])
    sol = gap.solve_novel(cfg["G"], cfg["T_F"])
    rows = (
        ("Tc_standard_numeric", tc.numeric),
        ("Tc_standard_closed_form", tc.closed_form),
        ("gap_ratio_standard", 2.0 * d0 / tc.numeric),
        ("Tc_novel", sol.Tc),
        ("epsilon0_over_Tc_novel", sol.epsilon(0.0) / sol.Tc),
    )
    return CurveFile(SCHEMAS["tc"], rows)


def cmd_gap_curve(cfg):
    tau = tau_grid(cfg)
    return CurveFile(SCHEMAS["gap-curve"], tuple(zip(tau.tolist(), gap.eta_curve(tau).tolist())))


def absolute_field_scales(Tc, Tc_prime, gN0, epsilon_F_eV, mass_ratio=1.0):
    """Zero-temperature fields (gauss) of both phases for a free-electron metal."""
    m = mass_ratio * M_E
    eF = epsilon_F_eV * EV
    N0 = density_of_states(m, math.sqrt(2 * m * eF) / HBAR)
    return (thermo.hc0_novel(gN0 / N0, eF, m, N0, Tc), thermo.hc0_standard(N0, Tc_prime))


def cmd_hc_curve(cfg):
    tau = tau_grid(cfg)
    novel = [thermo.hc_ratio_novel(t) for t in tau]
    standard = [thermo.hc_standard(t, cfg["standard_mode"], cfg["gN0"]) for t in tau]
    header = SCHEMAS["hc-curve"]
    if cfg.absolute_fields:
        h0, h0p = absolute_field_scales(cfg["Tc"], cfg["Tc_prime"], cfg["gN0"],
                                        cfg["epsilon_F_eV"], cfg["mass_ratio"])
        novel = [h0 * r for r in novel]
        standard = [h0p * r for r in standard]
        header = ABSOLUTE_HC_SCHEMA
    return CurveFile(header, tuple(zip(tau.tolist(), novel, standard)))


def cmd_cv_curve(cfg):
    tau = tau_grid(cfg)
    rows = tuple((float(t), thermo.specific_heat_ratio_novel(t, cfg["gN0"]).R_C if t > 0 else 0.0)
                 for t in tau)
    return CurveFile(SCHEMAS["cv-curve"], rows)


def cmd_free_energy(cfg):
    T_max = cfg["T_max"]
    if math.isnan(T_max):
        T_max = max(cfg["Tc"], cfg["Tc_prime"])
    T = np.linspace(cfg["T_min"], T_max, cfg["n_points"])
    curves = thermo.free_energy_curves(T, cfg["Tc"], cfg["Tc_prime"], cfg["gN0"])
    rows = tuple(zip(curves.T.tolist(), curves.df_novel.tolist(), curves.df_standard.tolist()))
    return CurveFile(SCHEMAS["free-energy"], rows)


def cmd_phase(cfg):
    params = thermo.CompetitionParams(cfg["Tc"], cfg["Tc_prime"], cfg["gN0"])
    verdict = thermo.phase_select(cfg["T"], params)
    rows = (
        ("T", verdict.T),
        ("winner", verdict.winner.value),
        ("df_novel", verdict.margins[thermo.Phase.NOVEL]),
        ("df_standard", verdict.margins[thermo.Phase.STANDARD]),
        ("field_ratio", params.field_ratio),
        ("tc_condition", verdict.tc_condition),
    )
    return CurveFile(SCHEMAS["phase"], rows)


def fock_report(P, seed=0, tol=1e-12):
    """Run the finite Fock-space checks; returns ``(rows, passed)``."""
    rng = np.random.default_rng(seed)
    ops = fockring.build_mode_operators(P)
    alphas = rng.uniform(-math.pi, math.pi, P)
    before = fockring.verify_ring(ops, tol)
    after = fockring.verify_ring(fockring.bogoliubov_transform(ops, alphas), tol)
    conj = fockring.conjugation_residual(ops, alphas)
    overlap = abs(fockring.vacuum_overlap_matrix(ops, alphas) - fockring.vacuum_overlap(alphas))

    xi = rng.uniform(-1.0, 1.0, P)
    delta, beta = 0.4, 2.0
    h = fockring.build_h02(ops, xi, delta)
    spectrum = float(np.max(np.abs(np.linalg.eigvalsh(h)
                                   - fockring.h02_closed_form_spectrum(xi, delta))))
    E = math.hypot(xi[0], delta)
    expected = delta / (2 * E) * math.tanh(beta * E / 2)
    anomalous = abs(fockring.thermal_anomalous_average(h, ops, beta, 0) - expected)

    checks = (
        ("ring_before", before.max_deviation, tol),
        ("ring_after", after.max_deviation, tol),
        ("vacuum_annihilated", before.vacuum_residual, tol),
        ("conjugation", conj, 1e-10),
        ("vacuum_overlap", overlap, tol),
        ("h02_spectrum", spectrum, 1e-10),
        ("anomalous_average", anomalous, 1e-10),
    )
    rows = [("pairs", P), ("seed", seed)]
    passed = True
    for name, dev, limit in checks:
        ok = dev <= limit
        passed &= ok
        rows.append((name, float(dev)))
        rows.append((f"{name}_ok", ok))
    rows.append(("passed", passed))
    return tuple(rows), passed


def cmd_fock_verify(cfg):
    rows, passed = fock_report(cfg["pairs"], cfg["seed"], cfg["tol"])
    table = CurveFile(SCHEMAS["fock-verify"], rows)
    if not passed:
        worst = max(v for k, v in rows if isinstance(v, float))
        raise NumericError("finite Fock-space checks exceeded tolerance:\n" + table.to_csv(), worst)
    return table


def cmd_nu_count(cfg):
    from .material import Box

    res = gap.nu_count(cfg["k"], cfg["q"], Box(cfg["L1"], cfg["L2"], cfg["L3"]),
                       budget=cfg["lattice_budget"])
    rows = (("nu_analytic", res.nu_analytic), ("nu_lattice", res.nu_lattice), ("ratio", res.ratio))
    return CurveFile(SCHEMAS["nu-count"], rows)


COMMANDS = {
    "tc": cmd_tc,
    "gap-curve": cmd_gap_curve,
    "hc-curve": cmd_hc_curve,
    "cv-curve": cmd_cv_curve,
    "free-energy": cmd_free_energy,
    "phase": cmd_phase,
    "fock-verify": cmd_fock_verify,
    "nu-count": cmd_nu_count,
}


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------

_COLORS = ("#1f4e99", "#b0332a", "#2a7f3b", "#7a4a9c")


def render_svg(curve: CurveFile, style=None):
    """Standalone SVG 1.1 line plot: first column on x, one path per other column.

    Coordinates are printed with fixed precision so equal input gives
    byte-identical output.
    """
    style = {"width": 640, "height": 420, "margin": 60, "title": "", **(style or {})}
    if not curve.rows:
        raise RenderError("cannot render an empty curve")
    if not curve.numeric or len(curve.header) < 2:
        raise RenderError("only numeric tables with two or more columns can be drawn")
    data = np.array(curve.rows, dtype=float)
    x, ys = data[:, 0], data[:, 1:]
    W, H, M = style["width"], style["height"], style["margin"]

    def span(a):
        lo, hi = float(np.min(a)), float(np.max(a))
        return (lo - 0.5, hi + 0.5) if hi == lo else (lo, hi)

    x0, x1 = span(x)
    y0, y1 = span(ys)
    sx = lambda v: M + (v - x0) / (x1 - x0) * (W - 2 * M)  # noqa: E731
    sy = lambda v: H - M - (v - y0) / (y1 - y0) * (H - 2 * M)  # noqa: E731

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<line x1="{M}" y1="{H - M}" x2="{W - M}" y2="{H - M}" stroke="black"/>',
        f'<line x1="{M}" y1="{M}" x2="{M}" y2="{H - M}" stroke="black"/>',
    ]
    for frac in (0.0, 0.5, 1.0):
        xv, yv = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        out.append(f'<text x="{sx(xv):.2f}" y="{H - M + 18}" font-size="11" '
                   f'text-anchor="middle">{format_value(xv)[:8]}</text>')
        out.append(f'<text x="{M - 6}" y="{sy(yv) + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{format_value(yv)[:8]}</text>')
    out.append(f'<text x="{W / 2:.1f}" y="{H - 15}" font-size="13" '
               f'text-anchor="middle">{curve.header[0]}</text>')
    if style["title"]:
        out.append(f'<text x="{W / 2:.1f}" y="25" font-size="14" '
                   f'text-anchor="middle">{style["title"]}</text>')
    for j, name in enumerate(curve.header[1:]):
        color = _COLORS[j % len(_COLORS)]
        pts = " ".join(f"{sx(a):.3f},{sy(b):.3f}" for a, b in zip(x, ys[:, j]))
        out.append(f'<path d="M {pts.replace(" ", " L ")}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"><title>{name}</title></path>')
        out.append(f'<text x="{W - M + 4}" y="{M + 16 * j}" font-size="12" '
                   f'fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="bcsreps", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, keys in COMMAND_KEYS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key = value file")
        sp.add_argument("--out", help="CSV path (default stdout)")
        sp.add_argument("--svg", help="also write an SVG plot here")
        if name == "hc-curve":
            sp.add_argument("--absolute-fields", action="store_true",
                            help="write fields in gauss instead of ratios")
        for key in keys:
            flag = "--" + key.replace("_", "-")
            # plain string; conversion and error reporting happen in parse_config
            sp.add_argument(flag, dest=key, default=None, metavar=key.upper())
    return p


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    flags = {k: getattr(ns, k) for k in COMMAND_KEYS[ns.command]}
    try:
        cfg = parse_config(ns.command, ns.config, flags,
                           absolute_fields=getattr(ns, "absolute_fields", False),
                           out=ns.out, svg=ns.svg)
        table = COMMANDS[ns.command](cfg)
        text = table.to_csv()
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        if cfg.svg:
            svg = render_svg(table, {"title": ns.command})
            with open(cfg.svg, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(svg)
    except (ConfigError, DomainError, SizeError, RenderError, OSError) as exc:
        print(f"bcsreps: error: {exc}", file=stderr)
        return 2
    except (NumericError, ConsistencyError, OverflowError, RuntimeError) as exc:
        print(f"bcsreps: numeric failure: {exc}", file=stderr)
        return 3
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
