"""Command-line front end.

Every numeric flag is range-checked before any computation. Failures print a
one-line JSON error object on stderr and exit with a code per error kind.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import figures
from .distinguishability import d1_measure, d2_measure
from .lp import BRUTE_FORCE_MAX_N, brute_force_lp, build_lp, perturbation_test, solve_lp
from .optics import PBS_CONVENTION, synthesize
from .separation import build_map, success_probability
from .simplex import SimplexError
from .states import PHASE_RULES, beta_coefficients, build_fiducial
from .teleport import (TeleportReport, TeleportScenario, f_ave_formula, qubit_conclusive,
                       qubit_scenario, run_exact, run_monte_carlo)

SIG_DIGITS = 12
SWEEP_HEADER = ("xi", "p_success", "d1_alpha", "d1_beta", "d2_alpha", "d2_beta")

EXIT_CODES = {
    "usage-error": 2,
    "file-not-found": 3,
    "schema-error": 4,
    "domain-error": 5,
    "numerical-error": 6,
}


class CliError(Exception):
    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.kind]


# ---------------------------------------------------------------- formatting

def fmt(value) -> str:
    return format(float(value), f".{SIG_DIGITS}g")


def _rounded(obj):
    """Recursively round floats to the fixed output precision."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(fmt(obj))
        return 0.0 if v == 0 else v
    if isinstance(obj, (complex, np.complexfloating)):
        return [_rounded(obj.real), _rounded(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [_rounded(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_rounded(obj), indent=2) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------- input

def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    if not os.path.isfile(path):
        raise CliError("file-not-found", f"no such file: {path}")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def parse_fiducial(doc):
    """Validate ``{"n": int, "amplitudes": [...], "phases": [...]}`` and build the spec."""
    if not isinstance(doc, dict):
        raise CliError("schema-error", "fiducial document must be a JSON object")
    extra = set(doc) - {"n", "amplitudes", "phases"}
    if extra:
        raise CliError("schema-error", f"unexpected keys: {sorted(extra)}")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise CliError("schema-error", "'n' must be an integer")
    amps = doc.get("amplitudes")
    phases = doc.get("phases", [0.0] * n if n > 0 else [])
    for name, seq in (("amplitudes", amps), ("phases", phases)):
        if not isinstance(seq, list) or not all(_is_number(v) for v in seq):
            raise CliError("schema-error", f"'{name}' must be a list of finite numbers")
        if len(seq) != n:
            raise CliError("schema-error", f"'{name}' has {len(seq)} entries, expected n={n}")
    try:
        return build_fiducial(n, amps, phases)
    except ValueError as exc:
        raise CliError("domain-error", str(exc)) from exc


def load_fiducial(path: str):
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise CliError("schema-error", f"invalid JSON in {path}: {exc}") from exc
    return parse_fiducial(doc)


def parse_state(text: str, dim: int) -> np.ndarray:
    """Input state as a JSON list of reals or ``[re, im]`` pairs, or a path to one.

    An object ``{"amplitudes": [...]}`` is accepted too.
    """
    stripped = text.strip()
    if not stripped.startswith(("[", "{")):
        stripped = _read_text(text)
    try:
        doc = json.loads(stripped)
    except json.JSONDecodeError as exc:
        raise CliError("schema-error", f"invalid state JSON: {exc}") from exc
    if isinstance(doc, dict):
        doc = doc.get("amplitudes")
    if not isinstance(doc, list):
        raise CliError("schema-error", "state must be a list of amplitudes")
    vals = []
    for v in doc:
        if _is_number(v):
            vals.append(complex(v))
        elif isinstance(v, list) and len(v) == 2 and all(_is_number(t) for t in v):
            vals.append(complex(v[0], v[1]))
        else:
            raise CliError("schema-error", f"bad amplitude entry {v!r}")
    if len(vals) != dim:
        raise CliError("domain-error", f"state has dimension {len(vals)}, channel has {dim}")
    state = np.array(vals)
    if np.linalg.norm(state) == 0:
        raise CliError("domain-error", "state is the zero vector")
    return state


# ---------------------------------------------------------------- validation

def _xi(value, flag="--xi"):
    if not 0.0 <= value <= 1.0:
        raise CliError("domain-error", f"{flag} must lie in [0, 1], got {value}")
    return value


def _at_least(value, low, flag):
    if value < low:
        raise CliError("domain-error", f"{flag} must be >= {low}, got {value}")
    return value


def _seed(value):
    if not 0 <= value < 2 ** 64:
        raise CliError("domain-error", f"--seed must be an unsigned 64-bit integer, got {value}")
    return value


# ---------------------------------------------------------------- commands

def cmd_separate(args) -> str:
    xi = _xi(args.xi)
    spec = load_fiducial(args.fiducial)
    smap = build_map(spec, xi, args.phase_rule)
    return dump_json({
        "xi": xi,
        "p_success": smap.p_success,
        "b_coefficients": beta_coefficients(spec, xi),
        "kraus_success_diag": smap.success_diag,
        "kraus_failure_diag": smap.failure_diag,
    })


def cmd_sweep(args) -> str:
    lo, hi = _xi(args.xi_min, "--xi-min"), _xi(args.xi_max, "--xi-max")
    if lo > hi:
        raise CliError("domain-error", "--xi-min must not exceed --xi-max")
    steps = _at_least(args.steps, 1, "--steps")
    spec = load_fiducial(args.fiducial)
    d1a, d2a = d1_measure(spec, 0.0), d2_measure(spec, 0.0)
    rows = [(xi, success_probability(spec, xi), d1a, d1_measure(spec, xi), d2a, d2_measure(spec, xi))
            for xi in np.linspace(lo, hi, steps + 1)]
    if args.format == "json":
        return dump_json([dict(zip(SWEEP_HEADER, r)) for r in rows])
    return dump_csv(SWEEP_HEADER, rows)


def _lp_report(spec, xi, trials, rng):
    inst = build_lp(spec, beta_coefficients(spec, xi))
    sol = solve_lp(inst)
    brute = brute_force_lp(inst).p_opt if spec.n <= BRUTE_FORCE_MAX_N else None
    out = {
        "xi": xi,
        "p_closed_form": success_probability(spec, xi),
        "p_lp": sol.p_opt,
        "p_brute_force": brute,
        "leakless": sol.leakless,
        "max_constraint_residual": inst.constraint_residual(sol.x_vec),
    }
    if trials > 0:
        out["perturbation_trials"] = trials
        out["perturbation_ok"] = perturbation_test(spec, xi, trials, rng)
    return out


def cmd_lp_verify(args) -> str:
    trials = _at_least(args.trials, 0, "--trials")
    seed = _seed(args.seed)
    if args.xi_grid is not None:
        grid = np.linspace(0.0, 1.0, _at_least(args.xi_grid, 1, "--xi-grid") + 1)
    else:
        grid = [_xi(0.5 if args.xi is None else args.xi)]
    spec = load_fiducial(args.fiducial)
    rng = np.random.default_rng(seed)
    reports = [_lp_report(spec, float(xi), trials, rng) for xi in grid]
    return dump_json(reports if args.xi_grid is not None else reports[0])


def _report_dict(rep) -> dict:
    out = {
        "p_success": rep.p_success,
        "f_ave_formula": rep.f_ave_formula,
        "f_exact": rep.f_exact,
        "f_ave_monte_carlo": rep.f_ave_monte_carlo,
        "f_ave_stderr": rep.f_ave_stderr,
        "samples": rep.samples,
    }
    if rep.per_outcome_fidelities:
        out["per_outcome_fidelities"] = [
            {"l": r.l, "k": r.k, "probability": r.probability, "fidelity": r.fidelity}
            for r in rep.per_outcome_fidelities]
    return out


def cmd_teleport(args) -> str:
    xi = _xi(args.xi)
    samples = _at_least(args.samples, 1, "--samples")
    shards = _at_least(args.shards, 1, "--shards")
    seed = _seed(args.seed)
    spec = load_fiducial(args.fiducial)
    if spec.has_phases:
        raise CliError("domain-error", "channel fiducial must have zero phases")
    if args.exact_input is not None:
        state = parse_state(args.exact_input, spec.n)
        rep = run_exact(TeleportScenario(spec, xi, input_state=state))
    else:
        rep = run_monte_carlo(TeleportScenario(spec, xi, samples=samples, seed=seed, shards=shards),
                              workers=args.workers)
    return dump_json({"xi": xi, **_report_dict(rep)})


def cmd_qubit_teleport(args) -> str:
    try:
        q = qubit_conclusive(args.alpha_deg, args.beta_deg)
    except ValueError as exc:
        raise CliError("domain-error", str(exc)) from exc
    seed = _seed(args.seed)
    samples = _at_least(args.samples, 0, "--samples")
    spec, xi = qubit_scenario(args.alpha_deg, args.beta_deg)
    out = {"alpha_deg": args.alpha_deg, "beta_deg": args.beta_deg, **q._asdict()}
    if samples:
        rep = run_monte_carlo(TeleportScenario(spec, xi, samples=samples, seed=seed))
    else:
        rep = TeleportReport(success_probability(spec, xi), f_ave_formula(spec, xi))
    out.update(_report_dict(rep))
    return dump_json(out)


def cmd_optics(args) -> str:
    xi = _xi(args.xi)
    spec = load_fiducial(args.fiducial)
    if spec.has_phases:
        raise CliError("domain-error", "optical synthesis requires zero fiducial phases")
    if not 0 <= args.state < spec.n:
        raise CliError("domain-error", f"--state must lie in [0, {spec.n - 1}]")
    layout = synthesize(spec, xi, args.state)
    if args.text:
        lines = layout.components()
        lines.append(f"stage I phases (rad): {' '.join(fmt(p) for p in layout.stage1_phases)}")
        lines.append(f"PBS: {PBS_CONVENTION}")
        return "\n".join(lines) + "\n"
    return dump_json({
        "zeta_deg": layout.zeta_deg,
        "stage1_phases": layout.stage1_phases,
        "pbs_convention": PBS_CONVENTION,
        "modes": list(layout.modes),
        "components": layout.components(),
    })


def cmd_reproduce(args) -> str:
    steps = None if args.steps is None else _at_least(args.steps, 1, "--steps")
    if args.markers and args.figure != "fig4b":
        raise CliError("domain-error", "--markers applies to fig4b only")
    key = "fig4b_markers" if args.markers else args.figure
    rows = figures.fig4b_markers() if args.markers else figures.figure_rows(args.figure, steps)
    header = figures.HEADERS[key]
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        outputs = {args.figure: figures.figure_rows(args.figure, steps)}
        if args.figure == "fig4b":
            outputs["fig4b_markers"] = figures.fig4b_markers()
        for name, data in outputs.items():
            with open(os.path.join(args.out_dir, f"{name}.csv"), "w", encoding="utf-8") as fh:
                fh.write(dump_csv(figures.HEADERS[name], data))
    if args.format == "json":
        return dump_json([dict(zip(header, r)) for r in rows])
    return dump_csv(header, rows)


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("usage-error", message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="symsep", description="Parametric separation of symmetric pure states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_fiducial(p):
        p.add_argument("--fiducial", required=True,
                       help="fiducial JSON {n, amplitudes, phases}; '-' reads stdin")
        return p

    p = with_fiducial(sub.add_parser("separate", help="Kraus pair and success probability"))
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--phase-rule", choices=PHASE_RULES, default="linear")
    p.set_defaults(func=cmd_separate)

    p = with_fiducial(sub.add_parser("sweep", help="CSV of p_S and both measures over xi"))
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=100, help="grid intervals")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = with_fiducial(sub.add_parser("lp-verify", help="closed form vs LP optimum"))
    g = p.add_mutually_exclusive_group()
    g.add_argument("--xi", type=float)
    g.add_argument("--xi-grid", type=int, metavar="STEPS")
    p.add_argument("--trials", type=int, default=0, help="random perturbation samples")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lp_verify)

    p = with_fiducial(sub.add_parser("teleport", help="separation-assisted qudit teleportation"))
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exact-input", metavar="STATE_JSON",
                   help="input state (inline JSON or path); runs the exact engine")
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("qubit-teleport", help="qubit conclusive-teleportation figures of merit")
    p.add_argument("--alpha-deg", type=float, required=True)
    p.add_argument("--beta-deg", type=float, required=True)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_qubit_teleport)

    p = with_fiducial(sub.add_parser("optics", help="half-wave-plate angles of the network"))
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--state", type=int, default=0, help="index j of the prepared state")
    p.add_argument("--text", action="store_true", help="human-readable component list")
    p.set_defaults(func=cmd_optics)

    p = sub.add_parser("reproduce", help="tabular data for a figure")
    p.add_argument("figure", choices=figures.FIGURES)
    p.add_argument("--steps", type=int)
    p.add_argument("--markers", action="store_true", help="fig4b operating points instead of curves")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out-dir", help="also write <figure>.csv files here")
    p.set_defaults(func=cmd_reproduce)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        stdout.write(args.func(args))
        return 0
    except CliError as exc:
        err = {"error": exc.kind, "message": str(exc)}
    except (SimplexError, ArithmeticError, np.linalg.LinAlgError) as exc:
        err = {"error": "numerical-error", "message": str(exc)}
    except ValueError as exc:
        err = {"error": "domain-error", "message": str(exc)}
    stderr.write(json.dumps(err) + "\n")
    return EXIT_CODES[err["error"]]


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
