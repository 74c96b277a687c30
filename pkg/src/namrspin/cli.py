"""Command-line front end.

Every subcommand writes CSV (with a header row) or JSON to ``--out`` or to
stdout. Frequencies on the command line and in outputs are in Hz.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from namrspin.chain_model import (
    FrequencySample,
    build_lattice_coupling,
    build_quadratic_form,
    sample_errors,
    trial_stream,
)
from namrspin.compensation import naive_protocol_residual, verify_compensation
from namrspin.config import RunConfig, default_config_path, load_config
from namrspin.errors import ConfigError, DomainError, FitError, NumericalError, StructuralError
from namrspin.experiments import linear_fit, max_chain_length, sweep_fidelity_vs_n
from namrspin.mode_solver import (
    analytic_uniform_dispersion,
    chain_modes,
    collective_frequencies,
    mode_shift_statistics,
)
from namrspin.spin_dynamics import fidelity_vs_time

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_USAGE = 0, 2, 3, 4
TWO_PI = 2.0 * math.pi


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def fmt(x) -> str:
    return format(float(x), ".17g")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, str)) else fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=False) + "\n"


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config or default_config_path())
    spec = cfg.spec
    changes = {}
    if args.n is not None:
        changes["n"] = args.n
    if args.delta_max is not None:
        changes["delta_max"] = args.delta_max
    try:
        spec = spec.with_changes(**changes)
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    seed = cfg.seed if args.seed is None else args.seed
    trials = cfg.trials if args.trials is None else args.trials
    t_g = cfg.t_g if args.t_g_ms is None else args.t_g_ms * 1e-3
    if seed < 0:
        raise ConfigError("seed must be non-negative", "seed")
    if trials < 1:
        raise ConfigError("trials must be >= 1", "trials")
    if t_g <= 0:
        raise ConfigError("gate time must be positive", "t_g_seconds")
    return RunConfig(spec, t_g, trials, seed, args.out or cfg.output)


def cmd_modes(cfg: RunConfig, args) -> str:
    stats = mode_shift_statistics(cfg.spec, cfg.trials, cfg.seed)
    rows = [(k + 1, stats.reference[k] / TWO_PI, stats.mean[k] / TWO_PI, stats.std[k] / TWO_PI)
            for k in range(cfg.spec.n)]
    return _csv(["mode_index", "omega_tilde_hz", "shift_mean_hz", "shift_std_hz"], rows)


def cmd_dispersion(cfg: RunConfig, args) -> str:
    spec = cfg.spec
    numeric = chain_modes(spec, FrequencySample.uniform(spec)).omega_tilde
    analytic = analytic_uniform_dispersion(spec.n, spec.omega_r, spec.g)
    rows = [(k + 1, numeric[k] / TWO_PI, analytic[k] / TWO_PI) for k in range(spec.n)]
    return _csv(["mode_index", "omega_tilde_hz", "omega_analytic_hz"], rows)


def cmd_lattice_modes(cfg: RunConfig, args) -> str:
    spec = cfg.spec
    graph = build_lattice_coupling(args.rows, args.cols, spec.g)
    lattice_spec = spec.with_changes(n=graph.n)
    clean = collective_frequencies(build_quadratic_form(FrequencySample.uniform(lattice_spec), graph))
    sample = sample_errors(lattice_spec, trial_stream(cfg.seed, 0))
    noisy = collective_frequencies(build_quadratic_form(sample, graph))
    rows = [(k + 1, clean.omega_tilde[k] / TWO_PI, noisy.omega_tilde[k] / TWO_PI) for k in range(graph.n)]
    return _csv(["mode_index", "omega_tilde_hz", "omega_tilde_disordered_hz"], rows)


def cmd_sweep_n(cfg: RunConfig, args) -> str:
    n_max = args.n_max if args.n_max is not None else cfg.spec.n
    deltas = args.deltas if args.deltas is not None else [cfg.spec.delta_max]
    results = sweep_fidelity_vs_n(cfg.spec, range(args.n_min, n_max + 1), deltas, cfg.t_g,
                                  cfg.trials, cfg.seed, workers=args.workers)
    rows = [(r.n, r.delta_max, r.trials, r.mean_f, r.std_f) for r in results]
    return _csv(["n", "delta_max", "trials", "mean_fidelity", "std_fidelity"], rows)


def cmd_sweep_t(cfg: RunConfig, args) -> tuple[str, str]:
    spec = cfg.spec
    t_min = args.t_min_ms * 1e-3 if args.t_min_ms is not None else 0.9 * cfg.t_g
    t_max = args.t_max_ms * 1e-3 if args.t_max_ms is not None else 1.1 * cfg.t_g
    sample = sample_errors(spec, trial_stream(cfg.seed, 0))
    sweep = fidelity_vs_time(spec, sample, t_min, t_max, args.steps, cfg.t_g)
    table = _csv(["t_seconds", "fidelity"], zip(sweep.times, sweep.fidelities))
    summary = _json({"t_best_seconds": sweep.t_best, "max_fidelity": sweep.f_best})
    return table, summary


def _read_sweep_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"n", "delta_max", "mean_fidelity"} - set(reader.fieldnames or [])
        if missing:
            raise ConfigError(f"{path} lacks columns {sorted(missing)}")
        return [{"n": int(r["n"]), "delta_max": float(r["delta_max"]),
                 "mean_fidelity": float(r["mean_fidelity"])} for r in reader]


def cmd_fit(cfg: RunConfig, args) -> str:
    if args.input is None:
        raise UsageError("fit requires --input PATH (a sweep-n CSV)")
    try:
        rows = _read_sweep_csv(args.input)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.input}: {exc}") from exc
    deltas = sorted({r["delta_max"] for r in rows})
    if args.delta_max is not None:
        rows = [r for r in rows if math.isclose(r["delta_max"], args.delta_max, rel_tol=1e-12)]
    elif len(deltas) > 1:
        raise ConfigError(f"input mixes delta_max values {deltas}; select one with --delta-max", "delta_max")
    fit = linear_fit([(r["n"], r["mean_fidelity"]) for r in rows])
    out = {"slope": fit.slope, "intercept": fit.intercept, "pearson_r": fit.pearson_r, "n_max_at_f0": None}
    if args.f0 is not None:
        try:
            out["n_max_at_f0"] = max_chain_length(fit, args.f0)
        except DomainError:
            pass
    return _json(out)


def cmd_compensate(cfg: RunConfig, args) -> str:
    spec = cfg.spec
    sample = sample_errors(spec, trial_stream(cfg.seed, 0))
    check = verify_compensation(spec, sample, cfg.t_g)
    durations = check.schedule.durations()
    return _json({
        "n": spec.n,
        "delta_max": spec.delta_max,
        "seed": cfg.seed,
        "fidelity": check.fidelity,
        "total_time_seconds": check.total_time,
        "durations": [durations[link] for link in range(1, spec.n)],
    })


def cmd_naive_compare(cfg: RunConfig, args) -> str:
    rows = []
    for n in range(2, cfg.spec.n + 1):
        spec = cfg.spec.with_changes(n=n)
        sample = sample_errors(spec, trial_stream(cfg.seed, n))
        naive = naive_protocol_residual(spec, sample, cfg.t_g)
        compensated = verify_compensation(spec, sample, cfg.t_g).fidelity
        rows.append((n, spec.delta_max, naive, compensated))
    return _csv(["n", "delta_max", "fidelity_naive", "fidelity_compensated"], rows)


COMMANDS = {
    "modes": (cmd_modes, "mode frequencies and their disorder-induced shifts"),
    "dispersion": (cmd_dispersion, "numeric vs closed-form mode frequencies of the clean chain"),
    "sweep-n": (cmd_sweep_n, "ensemble fidelity against chain length"),
    "sweep-t": (cmd_sweep_t, "fidelity against gate time for one disorder draw"),
    "fit": (cmd_fit, "linear fit of a sweep-n table and the chain-length bound"),
    "compensate": (cmd_compensate, "build and verify the switched compensation schedule"),
    "naive-compare": (cmd_naive_compare, "always-on protocol vs compensation schedule"),
    "lattice-modes": (cmd_lattice_modes, "mode frequencies of a rectangular lattice"),
}


def _deltas(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid delta list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration (default: shipped defaults)")
    common.add_argument("--seed", type=int, help="master seed, overrides the config")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--n", type=int, help="number of resonators")
    common.add_argument("--delta-max", type=float, help="maximum relative frequency error")
    common.add_argument("--trials", type=int)
    common.add_argument("--t-g-ms", type=float, help="gate time in milliseconds")

    parser = _Parser(prog="namrspin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    subs = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}
    subs["sweep-n"].add_argument("--n-min", type=int, default=2)
    subs["sweep-n"].add_argument("--n-max", type=int, help="default: n from the config")
    subs["sweep-n"].add_argument("--deltas", type=_deltas, help="comma-separated delta_max values")
    subs["sweep-n"].add_argument("--workers", type=int, default=None)
    subs["sweep-t"].add_argument("--t-min-ms", type=float)
    subs["sweep-t"].add_argument("--t-max-ms", type=float)
    subs["sweep-t"].add_argument("--steps", type=int, default=2001)
    subs["fit"].add_argument("--input", help="sweep-n CSV to fit")
    subs["fit"].add_argument("--f0", type=float, help="fidelity floor for the chain-length bound")
    subs["lattice-modes"].add_argument("--rows", type=int, default=3)
    subs["lattice-modes"].add_argument("--cols", type=int, default=3)
    return parser


def _emit(text: str, out: str | None, stdout):
    if out:
        Path(out).write_text(text)
    else:
        stdout.write(text)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_help())
        cfg = _resolve(args)
        result = COMMANDS[args.command][0](cfg, args)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except ConfigError as exc:
        stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except (NumericalError, FitError) as exc:
        stderr.write(f"numerical error: {exc}\n")
        return EXIT_NUMERICAL
    except (DomainError, StructuralError) as exc:
        stderr.write(f"invalid input: {exc}\n")
        return EXIT_CONFIG

    if isinstance(result, tuple):
        table, summary = result
        _emit(table, cfg.output, stdout)
        stdout.write(summary)
    else:
        _emit(result, cfg.output, stdout)
    return EXIT_OK


def main():
    sys.exit(run())
