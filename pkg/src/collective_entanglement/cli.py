"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
Data goes to ``--output`` or stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__, output, reference, thermal
from .dynamics import evolve_states
from .entanglement import wootters_concurrence
from .figures import FIGURES, figure
from .hilbert import MAX_QUBITS, DensityMatrixError, partial_trace
from .library import one_excitation_system, render_table, system_for, table_csv_rows, table_diffs
from .master_equation import DissipatorSpec, EvolutionGrid, InvariantViolation, evolve_rk4
from .reports import REPORTS, run_report
from .subspace import SubspaceClosureError, evolve_subspace, excited_projector, generate_subspace

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
TABLES = ("table1", "table2", "table4")
PRECISION = output.DEFAULT_PRECISION
COMMANDS = ("evolve", "concurrence", "subspace", "figure", "table", "report", "rates")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    scenario: str = ""
    target: Optional[str] = None
    n: int = 2
    excited: tuple[int, ...] = (1,)
    gamma: float = 1.0
    nbar: Optional[float] = None
    omega: Optional[float] = None
    temperature: Optional[float] = None
    convention: str = "angular"
    t_max: float = 5.0
    dt: Optional[float] = None
    samples: int = 200
    pairs: tuple[tuple[int, int], ...] = ((1, 2),)
    f: Optional[float] = None
    tau_c: Optional[float] = None
    gamma_dfs: Optional[float] = None
    output: Optional[str] = None
    format: Optional[str] = None
    precision: int = PRECISION

    def validate(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ConfigError(f"n must lie in [1, {MAX_QUBITS}], got {self.n}")
        if len(set(self.excited)) != len(self.excited):
            raise ConfigError(f"excited qubits must be distinct, got {list(self.excited)}")
        if any(not 1 <= q <= self.n for q in self.excited):
            raise ConfigError(f"excited qubits must lie in [1, {self.n}], got {list(self.excited)}")
        for a, b in self.pairs:
            if a == b or not (1 <= a <= self.n and 1 <= b <= self.n):
                raise ConfigError(f"pair ({a}, {b}) must name two distinct qubits in [1, {self.n}]")
        if not self.gamma > 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.t_max < 0:
            raise ConfigError(f"t-max must be non-negative, got {self.t_max}")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.dt is not None and not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.nbar is not None and self.nbar < 0:
            raise ConfigError(f"nbar must be non-negative, got {self.nbar}")
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format}")
        if self.convention not in ("angular", "ordinary"):
            raise ConfigError(f"convention must be angular or ordinary, got {self.convention}")
        if not 1 <= self.precision <= 17:
            raise ConfigError(f"precision must lie in [1, 17], got {self.precision}")
        return self

    def resolved_nbar(self) -> float:
        if self.nbar is not None:
            return self.nbar
        if self.omega is not None and self.temperature is not None:
            return thermal.nbar_from_temperature(self.omega, self.temperature, self.convention)
        if self.omega is not None or self.temperature is not None:
            raise ConfigError("omega and temperature must be given together")
        return 0.0


# -- parsing -------------------------------------------------------------------------


def _int_list(text):
    try:
        return tuple(int(x) for x in str(text).replace(" ", "").split(",") if x)
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _pairs(text):
    out = []
    for chunk in str(text).replace(" ", "").split(";"):
        if not chunk:
            continue
        vals = _int_list(chunk)
        if len(vals) != 2:
            raise ConfigError(f"a pair needs two qubit indices, got {chunk!r}")
        out.append(vals)
    if not out:
        raise ConfigError("empty pair list")
    return tuple(out)


CONVERTERS = {
    "scenario": str, "n": int, "excited": _int_list, "gamma": float, "nbar": float, "omega": float,
    "temperature": float, "convention": str, "t_max": float, "dt": float, "samples": int, "pairs": _pairs,
    "f": float, "tau_c": float, "gamma_dfs": float, "output": str, "format": str, "precision": int,
}
ALIASES = {"pair": "pairs"}


def _convert(key, value):
    try:
        return CONVERTERS[key](value)
    except ConfigError:
        raise
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {key}: {value!r}") from None


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        key = ALIASES.get(key, key)
        if key not in CONVERTERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = _convert(key, value)
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--n", type=str, help="number of qubits")
    common.add_argument("--excited", help="initially excited qubits, e.g. 1,2")
    common.add_argument("--gamma", help="collective decay rate")
    common.add_argument("--nbar", help="thermal occupation")
    common.add_argument("--omega", help="qubit frequency (see --convention)")
    common.add_argument("--temperature", help="bath temperature in kelvin")
    common.add_argument("--convention", help="omega as 'angular' (rad/s) or 'ordinary' (Hz)")
    common.add_argument("--t-max", dest="t_max", help="final time")
    common.add_argument("--dt", help="RK4 step")
    common.add_argument("--samples", help="number of output samples")
    common.add_argument("--pair", dest="pairs", help="qubit pairs, e.g. 1,2 or 1,2;3,4")
    common.add_argument("--f", help="pulse frequency for decoupling")
    common.add_argument("--tau-c", dest="tau_c", help="bath correlation time")
    common.add_argument("--gamma-dfs", dest="gamma_dfs", help="transfer rate into the protected subspace")
    common.add_argument("--output", help="output file (default stdout)")
    common.add_argument("--format", help="csv or json")
    common.add_argument("--precision", help="significant digits")

    parser = argparse.ArgumentParser(prog="collective-entanglement", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("evolve", "concurrence", "subspace", "rates"):
        sub.add_parser(name, parents=[common])
    sub.add_parser("figure", parents=[common]).add_argument("target", choices=FIGURES)
    sub.add_parser("table", parents=[common]).add_argument("target", choices=TABLES)
    sub.add_parser("report", parents=[common]).add_argument("target", choices=REPORTS)
    return parser


def make_config(args: argparse.Namespace) -> ScenarioConfig:
    values = read_config(args.config) if args.config else {}
    for key in CONVERTERS:
        raw = getattr(args, key, None)
        if raw is not None:
            values[key] = _convert(key, raw)
    values["scenario"] = args.command
    values["target"] = getattr(args, "target", None)
    if "format" in values:
        values["format"] = values["format"].lower()
    return ScenarioConfig(**values).validate()


# -- commands ------------------------------------------------------------------------


def _emit(cfg: ScenarioConfig, text: str):
    if cfg.output:
        output.write_text(cfg.output, text)
    else:
        sys.stdout.write(text)


def _params(cfg: ScenarioConfig, *keys):
    return {k: getattr(cfg, k) if k != "nbar" else cfg.resolved_nbar() for k in keys}


def _param_text(value):
    if isinstance(value, tuple):
        return ";".join(",".join(map(str, v)) if isinstance(v, tuple) else str(v) for v in value)
    return value


def _header(cfg, command, keys):
    params = {k: _param_text(v) for k, v in _params(cfg, *keys).items()}
    return output.provenance(command, params, cfg.precision)


def _named_system(n, excited):
    """Reduced system in the conventional basis order when one is known."""
    excited = tuple(sorted(excited))
    if len(excited) == 1 and n >= 2:
        if n == 2:
            return system_for("two_qubit_one_exc")
        return one_excitation_system(n, excited[0])
    if n == 4 and excited == (1, 2):
        return system_for("four_qubit_two_exc")
    if n == 3 and excited == (1, 2):
        return system_for("three_qubit_two_exc")
    return generate_subspace(n, excited_projector(n, excited))


def _sample_times(cfg):
    if cfg.t_max == 0 or cfg.samples == 1:
        return np.array([0.0]) if cfg.t_max == 0 else np.array([cfg.t_max])
    return np.linspace(0.0, cfg.t_max, cfg.samples)


def cmd_evolve(cfg: ScenarioConfig) -> int:
    nbar = cfg.resolved_nbar()
    spec = DissipatorSpec(cfg.n, cfg.gamma, nbar)
    keys = ("n", "excited", "gamma", "nbar", "t_max", "dt", "samples")
    fmt = cfg.format or "csv"
    if nbar == 0:
        system = _named_system(cfg.n, cfg.excited)
        times = _sample_times(cfg)
        coeffs = evolve_subspace(system, cfg.gamma, times).values
        labels = [str(e) for e in system.basis]
        if fmt == "csv":
            rows = [[t, *a] for t, a in zip(times, coeffs)]
            _emit(cfg, output.csv_text(["t", *labels], rows, _header(cfg, "evolve", keys), cfg.precision))
            return EXIT_OK
        states = system.reconstruct(coeffs)
        payload = {"route": "subspace", "basis": labels, "times": times, "coefficients": coeffs,
                   "states": [{"t": t, "re": rho.real, "im": rho.imag} for t, rho in zip(times, states)]}
    else:
        rho0 = excited_projector(cfg.n, cfg.excited).to_dense().astype(complex)
        grid = EvolutionGrid.for_spec(spec, cfg.t_max, samples=cfg.samples, dt=cfg.dt)
        times, states = evolve_rk4(spec, rho0, grid)
        dim = spec.dim
        if fmt == "csv":
            cols = ["t"] + [f"{part}_{i}_{j}" for i in range(dim) for j in range(dim) for part in ("re", "im")]
            rows = []
            for t, rho in zip(times, states):
                flat = np.stack([rho.real, rho.imag], axis=-1).reshape(-1)
                rows.append([t, *flat])
            _emit(cfg, output.csv_text(cols, rows, _header(cfg, "evolve", keys), cfg.precision))
            return EXIT_OK
        payload = {"route": "rk4", "times": times,
                   "states": [{"t": t, "re": rho.real, "im": rho.imag} for t, rho in zip(times, states)]}
    payload["params"] = {k: _param_text(v) for k, v in _params(cfg, *keys).items()}
    _emit(cfg, output.json_text(payload, cfg.precision))
    return EXIT_OK


def _pair_label(pair):
    return f"C{pair[0]}-{pair[1]}"


def cmd_concurrence(cfg: ScenarioConfig) -> int:
    spec = DissipatorSpec(cfg.n, cfg.gamma, cfg.resolved_nbar())
    rho0 = excited_projector(cfg.n, cfg.excited)
    grid = EvolutionGrid.for_spec(spec, cfg.t_max, samples=cfg.samples, dt=cfg.dt)
    times, states, route = evolve_states(spec, rho0, grid)
    values = np.array([[wootters_concurrence(partial_trace(rho, p)) for p in cfg.pairs] for rho in states])
    keys = ("n", "excited", "gamma", "nbar", "t_max", "dt", "samples", "pairs")
    labels = [_pair_label(p) for p in cfg.pairs]
    if (cfg.format or "csv") == "csv":
        rows = [[t, *v] for t, v in zip(times, values)]
        _emit(cfg, output.csv_text(["t", *labels], rows, _header(cfg, "concurrence", keys), cfg.precision))
    else:
        payload = {"route": route, "columns": ["t", *labels], "times": times, "concurrence": values,
                   "params": {k: _param_text(v) for k, v in _params(cfg, *keys).items()}}
        _emit(cfg, output.json_text(payload, cfg.precision))
    return EXIT_OK


def cmd_subspace(cfg: ScenarioConfig) -> int:
    system = _named_system(cfg.n, cfg.excited)
    labels = [str(e) for e in system.basis]
    fmt = cfg.format
    if fmt == "json":
        payload = {
            "n": cfg.n,
            "excited": list(cfg.excited),
            "basis": [{"label": str(e), "terms": e.describe(), "trace": e.trace} for e in system.basis],
            "generator": [[str(x) for x in row] for row in system.generator],
            "initial": [str(x) for x in system.initial],
            "closure_residual": system.closure_residual(),
        }
        _emit(cfg, output.json_text(payload, cfg.precision))
    elif fmt == "csv":
        _emit(cfg, output.csv_text(*_table_rows(labels, system.generator),
                                   _header(cfg, "subspace", ("n", "excited")), cfg.precision))
    else:
        lines = [f"b{i}  {e}  =  {e.describe()}" for i, e in enumerate(system.basis)]
        _emit(cfg, "\n".join(lines) + "\n\n" + render_table(labels, system.generator))
    return EXIT_OK


def _table_rows(labels, matrix):
    rows = list(table_csv_rows(labels, matrix))
    return rows[0], rows[1:]


def _diff_lines(diffs):
    lines = []
    for d in diffs:
        lines.append(f"# diff ({d.orientation}): {len(d.cells)} mismatched cells")
        for c in d.cells:
            lines.append(f"#   [{c.row}, {c.column}] printed {c.printed} regenerated {c.regenerated}")
    return lines


def _table4_rows():
    rows = thermal.lifetime_table()
    diffs = []
    for row, printed in zip(rows, reference.TABLE4):
        got = row.rounded()
        for name, a, b in zip(("nbar", "gamma_d", "gamma_eff", "lifetime_no_dd", "lifetime_dd"), printed, got):
            if abs(a - b) > 1e-12:
                diffs.append({"nbar": printed[0], "column": name, "printed": a, "regenerated": b})
    return rows, diffs


def cmd_table(cfg: ScenarioConfig) -> int:
    header = output.provenance("table", {"id": cfg.target}, cfg.precision)
    if cfg.target == "table4":
        rows, diffs = _table4_rows()
        columns = ["nbar", "gamma_d", "gamma_eff", "lifetime_no_dd", "lifetime_dd"]
        raw = [dataclasses.astuple(r) for r in rows]
        rounded = [r.rounded() for r in rows]
        diff_payload = {"table": "table4", "mismatches": len(diffs), "cells": diffs}
        if cfg.format == "json":
            text = output.json_text({"table": "table4", "columns": columns, "rows": raw, "rounded": rounded,
                                     "diff": diff_payload}, cfg.precision)
        elif cfg.format == "csv" or cfg.output:
            text = output.csv_text(columns, raw, header, cfg.precision)
        else:
            width = 16
            lines = ["".join(c.rjust(width) for c in columns)]
            lines += ["".join(output.format_value(v).rjust(width) for v in r) for r in rounded]
            lines.append(f"# diff against printed table: {len(diffs)} mismatched cells")
            text = "\n".join(lines) + "\n"
    else:
        system, printed, diffs = table_diffs(cfg.target)
        labels = [e.label for e in system.basis]
        diff_payload = {"table": cfg.target, "diffs": [d.as_dict() for d in diffs]}
        mismatches = min(len(d.cells) for d in diffs)
        if cfg.format == "json":
            text = output.json_text({"table": cfg.target, "labels": labels,
                                     "generator": [[str(x) for x in r] for r in system.generator],
                                     "diff": diff_payload}, cfg.precision)
        elif cfg.format == "csv" or cfg.output:
            text = output.csv_text(*_table_rows(labels, system.generator), header, cfg.precision)
        else:
            text = render_table(labels, system.generator) + "\n".join(_diff_lines(diffs)) + "\n"
        diffs = [c for d in diffs for c in d.cells] if mismatches else []
    _emit(cfg, text)
    if cfg.output and cfg.format != "json":
        stem, _ = os.path.splitext(cfg.output)
        output.write_text(f"{stem}_diff.json", output.json_text(diff_payload, cfg.precision))
    if diffs:
        print(f"{cfg.target}: regenerated table differs from the printed one; see the diff report",
              file=sys.stderr)
    return EXIT_OK


def cmd_figure(cfg: ScenarioConfig) -> int:
    data = figure(cfg.target, samples=cfg.samples)
    parts = [(data, cfg.output)]
    for key, extra in data.extra.items():
        if cfg.output:
            stem, ext = os.path.splitext(cfg.output)
            parts.append((extra, f"{stem}_{key}{ext or '.csv'}"))
        else:
            print(f"{cfg.target}: {extra.figure} written only with --output", file=sys.stderr)
    for fig, path in parts:
        if cfg.format == "json":
            text = output.json_text({"figure": fig.figure, "params": fig.params, "columns": fig.columns,
                                     "rows": fig.rows}, cfg.precision)
        else:
            params = {k: _param_text(tuple(v)) if isinstance(v, list) else v for k, v in fig.params.items()}
            text = output.csv_text(fig.columns, fig.rows.tolist(),
                                   output.provenance(f"figure {fig.figure}", params, cfg.precision), cfg.precision)
        if path:
            output.write_text(path, text)
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_report(cfg: ScenarioConfig) -> int:
    if cfg.format == "csv":
        raise ConfigError("reports are emitted as JSON only")
    _emit(cfg, output.json_text(run_report(cfg.target), cfg.precision))
    return EXIT_OK


def cmd_rates(cfg: ScenarioConfig) -> int:
    nbar = cfg.resolved_nbar()
    plan = thermal.MitigationPlan(pulse_frequency=cfg.f, correlation_time=cfg.tau_c, dfs_rate=cfg.gamma_dfs)
    report = thermal.rate_report(cfg.gamma, nbar, plan)
    values = {"gamma": cfg.gamma, "nbar": nbar}
    values.update(dataclasses.asdict(report))
    qec = thermal.qec_frequency_recommendation(report.gamma_eff or report.gamma_d)
    values["qec_gates_per_second_low"], values["qec_gates_per_second_high"] = qec.gates_per_second
    values["dd_valid"] = plan.dd_valid(cfg.gamma, nbar)
    values = {k: v for k, v in values.items() if v is not None}
    if cfg.format == "csv":
        _emit(cfg, output.csv_text(["quantity", "value"], list(values.items()),
                                   output.provenance("rates", {}, cfg.precision), cfg.precision))
    else:
        _emit(cfg, output.json_text(values, cfg.precision))
    return EXIT_OK


HANDLERS = {
    "evolve": cmd_evolve,
    "concurrence": cmd_concurrence,
    "subspace": cmd_subspace,
    "figure": cmd_figure,
    "table": cmd_table,
    "report": cmd_report,
    "rates": cmd_rates,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        return HANDLERS[cfg.scenario](cfg)
    except (InvariantViolation, SubspaceClosureError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DensityMatrixError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
