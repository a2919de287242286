"""Command-line front end.

Subcommands: ``bounds``, ``game-solve``, ``game-simulate``, ``gpt-table``,
``gpt-scan`` and ``profile``. Output is JSON (default) or CSV, on stdout or
``--out PATH``. Numbers are written with 12 significant digits so repeated
runs are byte-identical. Exit status: 0 success, 2 usage error, 3 domain error.

CSV columns
-----------
bounds         b,p1,overlap,helstrom,nc,gap
game-solve     b,a,theta,tan_2theta,q1,q2,beta1,beta2,entanglement_entropy,
               payoff,payoff_opt,nc_bound,margin,ns_residual,verdict
game-simulate  b,shots,seed,alpha,shots_used,payoff_estimate,std_error,n_eff,
               bound,required_gap,p_value_bound,verdict,count_a{a}_x{x}_y{y}...
gpt-table      effect,sigma1,sigma2,sigma1_perp,sigma2_perp
gpt-scan       p,p1,success,nc_bound,advantage   (p sweep rows, then p1 sweep rows)
profile        b,beta1,beta2,entanglement_entropy,payoff_opt,nc_bound,margin
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .discrimination import DiscriminationInstance, helstrom_bound, nc_bound, overlap
from .errors import QGuessError
from .game import certify, entanglement_profile, ns_residual, solve_optimal_instance, steered_assemblage
from .linalg import KET0, projector
from .polygon import TABLE1_COLS, TABLE1_ROWS, advantage_scan, table1
from .protocol import SimConfig, certificate, simulate_game

SIG_DIGITS = 12
ROUNDOFF = 1e-15

SUBCOMMANDS = ("bounds", "game-solve", "game-simulate", "gpt-table", "gpt-scan", "profile")


@dataclass
class Command:
    subcommand: str
    params: dict
    fmt: str = "json"
    out: str | None = None


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict
    csv_header: list[str]
    csv_rows: list[list]
    version: str = __version__
    seed: int | None = None

    def to_dict(self) -> dict:
        d = {"command": self.command, "version": self.version, "inputs": self.inputs, "results": self.results}
        if self.seed is not None:
            d["seed"] = self.seed
        return d


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _ranged(lo, hi, lo_open=False, hi_open=False, kind=float):
    def convert(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {kind.__name__} value: {text!r}")
        if not np.isfinite(value):
            raise argparse.ArgumentTypeError(f"value {text} is not finite")
        too_low = value <= lo if lo_open else value < lo
        too_high = value >= hi if hi_open else value > hi
        if too_low or too_high:
            left = "(" if lo_open else "["
            right = ")" if hi_open else "]"
            raise argparse.ArgumentTypeError(f"value {text} out of range {left}{lo}, {hi}{right}")
        return value

    convert.__name__ = kind.__name__
    return convert


_prob = _ranged(0.0, 1.0)
_weight = _ranged(0.0, 1.0, lo_open=True)
_alpha = _ranged(0.0, 1.0, lo_open=True, hi_open=True)
_steps = _ranged(2, 100_000, kind=int)
_shots = _ranged(1, 10**9, kind=int)
_seed = _ranged(0, 2**64 - 1, kind=int)
_n = _ranged(3, 64, kind=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qguess", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"qguess {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="PATH", default=None)
        return p

    p = common(sub.add_parser("bounds", help="Helstrom and noncontextual bounds for |0> vs a|0>+b|1>"))
    p.add_argument("--b", type=_prob, required=True)
    p.add_argument("--prior", type=_prob, default=0.5, help="prior of |0> (ignored if --q1/--q2 given)")
    p.add_argument("--q1", type=_weight, default=None)
    p.add_argument("--q2", type=_weight, default=None)

    p = common(sub.add_parser("game-solve", help="construct the optimal game instance"))
    p.add_argument("--b", type=_prob, required=True)

    p = common(sub.add_parser("game-simulate", help="finite-shot simulation and Hoeffding certificate"))
    p.add_argument("--b", type=_prob, required=True)
    p.add_argument("--shots", type=_shots, default=100_000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--alpha", type=_alpha, default=1e-6)

    p = common(sub.add_parser("gpt-table", help="hexagon outcome-probability table"))
    p.add_argument("--p", type=_prob, required=True)

    p = common(sub.add_parser("gpt-scan", help="contextual advantage scan data"))
    p.add_argument("--p-steps", type=_steps, default=101)
    p.add_argument("--prior-steps", type=_steps, default=101)
    p.add_argument("--prior", type=_prob, default=0.5, help="fixed prior for the p sweep")
    p.add_argument("--p", type=_prob, default=1.0, help="fixed p for the prior sweep")
    p.add_argument("--n", type=_n, default=6, help="polygon size (even)")

    p = common(sub.add_parser("profile", help="entanglement profile over b"))
    p.add_argument("--b-steps", type=_steps, default=9)
    return parser


def parse_args(argv) -> Command:
    ns = build_parser().parse_args(list(argv))
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "format", "out")}
    if ns.subcommand == "bounds" and (params["q1"] is None) != (params["q2"] is None):
        build_parser().error("--q1 and --q2 must be given together")
    return Command(ns.subcommand, params, ns.format, ns.out)


def _round(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not np.isfinite(x):
            return None
        if abs(x) < ROUNDOFF:
            return 0.0
        return float(f"{x:.{SIG_DIGITS}g}") + 0.0
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.ndarray):
        return _round(x.tolist())
    return x


def _fmt_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return f"{_round(x):.{SIG_DIGITS}g}"
    return str(x)


def _matrix(m) -> dict:
    m = np.asarray(m)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _run_bounds(params) -> Report:
    b = params["b"]
    a = float(np.sqrt(1.0 - b * b))
    if params["q1"] is not None:
        p1 = params["q1"] / (params["q1"] + params["q2"])
    else:
        p1 = params["prior"]
    inst = DiscriminationInstance(projector(KET0), projector([a, b]), p1)
    h, nc = helstrom_bound(inst), nc_bound(inst)
    s = overlap(inst.rho1, inst.rho2)
    results = {"helstrom": h, "nc": nc, "gap": h - nc, "overlap": s, "p1": p1}
    return Report("bounds", params, results, ["b", "p1", "overlap", "helstrom", "nc", "gap"], [[b, p1, s, h, nc, h - nc]])


def _run_game_solve(params) -> Report:
    inst = solve_optimal_instance(params["b"])
    achieved = inst.achieved_payoff()
    cert = certify(achieved, inst.nc_bound)
    asm = steered_assemblage(inst.state, inst.alice_povms)
    beta = inst.state.schmidt_weights
    entropy = inst.state.entanglement_entropy()
    resid = ns_residual(asm)
    results = {
        "b": inst.b,
        "a": inst.a,
        "theta": inst.theta,
        "tan_2theta": float(np.tan(2 * inst.theta)),
        "q1": inst.q1,
        "q2": inst.q2,
        "rho_b": _matrix(inst.rho_b),
        "sigma_psi": _matrix(inst.sigma_psi),
        "sigma_phi": _matrix(inst.sigma_phi),
        "bob_povm": [_matrix(e) for e in inst.bob_povm],
        "alice_povms": [[_matrix(e) for e in povm] for povm in inst.alice_povms],
        "schmidt_weights": list(beta),
        "bob_basis": _matrix(inst.state.bob_basis),
        "entanglement_entropy": entropy,
        "payoff": achieved,
        "payoff_opt": inst.payoff_opt,
        "nc_bound": inst.nc_bound,
        "ns_residual": resid,
        "certificate": {"verdict": cert.verdict.value, "margin": cert.margin},
    }
    header = [
        "b", "a", "theta", "tan_2theta", "q1", "q2", "beta1", "beta2", "entanglement_entropy",
        "payoff", "payoff_opt", "nc_bound", "margin", "ns_residual", "verdict",
    ]
    row = [
        inst.b, inst.a, inst.theta, results["tan_2theta"], inst.q1, inst.q2, float(beta[0]), float(beta[1]),
        entropy, achieved, inst.payoff_opt, inst.nc_bound, cert.margin, resid, cert.verdict.value,
    ]
    return Report("game-solve", params, results, header, [row])


def _run_game_simulate(params) -> Report:
    inst = solve_optimal_instance(params["b"])
    cfg = SimConfig(shots=params["shots"], seed=params["seed"], alpha=params["alpha"])
    res = simulate_game(inst, cfg)
    cert = certificate(res, cfg.alpha)
    counts = res.counts
    results = {
        "shots_used": res.shots_used,
        "counts": counts.tolist(),
        "payoff_estimate": res.payoff_estimate,
        "std_error": res.std_error,
        "n_eff": res.n_eff,
        "analytic_payoff": inst.achieved_payoff(),
        "bound": res.bound,
        "required_gap": cert.required_gap,
        "p_value_bound": cert.p_value_bound,
        "verdict": cert.verdict.value,
    }
    header = [
        "b", "shots", "seed", "alpha", "shots_used", "payoff_estimate", "std_error", "n_eff",
        "bound", "required_gap", "p_value_bound", "verdict",
    ]
    row = [
        params["b"], cfg.shots, cfg.seed, cfg.alpha, res.shots_used, res.payoff_estimate, res.std_error, res.n_eff,
        res.bound, cert.required_gap, cert.p_value_bound, cert.verdict.value,
    ]
    for idx in np.ndindex(counts.shape):
        header.append("count_a{}_x{}_y{}".format(*idx))
        row.append(int(counts[idx]))
    return Report("game-simulate", params, results, header, [row], seed=cfg.seed)


def _run_gpt_table(params) -> Report:
    p = params["p"]
    t = table1(p)
    results = {
        "c_value": 1 - p / 2,
        "s_value": (1 + p) / 2,
        "rows": list(TABLE1_ROWS),
        "columns": list(TABLE1_COLS),
        "table": t.tolist(),
    }
    rows = [[name, *t[i].tolist()] for i, name in enumerate(TABLE1_ROWS)]
    return Report("gpt-table", params, results, ["effect", *TABLE1_COLS], rows)


def _scan_dict(r) -> dict:
    return {"p": r.p, "p1": r.p1, "success": r.success, "nc_bound": r.nc_bound, "advantage": r.advantage}


def _run_gpt_scan(params) -> Report:
    n = params["n"]
    p_grid = np.linspace(0.0, 1.0, params["p_steps"])
    prior_grid = np.linspace(0.0, 1.0, params["prior_steps"])
    p_sweep = advantage_scan(p_grid, [params["prior"]], n=n)
    prior_sweep = advantage_scan([params["p"]], prior_grid, n=n)
    results = {
        "n": n,
        "p_sweep": [_scan_dict(r) for r in p_sweep],
        "prior_sweep": [_scan_dict(r) for r in prior_sweep],
    }
    rows = [[r.p, r.p1, r.success, r.nc_bound, r.advantage] for r in p_sweep + prior_sweep]
    return Report("gpt-scan", params, results, ["p", "p1", "success", "nc_bound", "advantage"], rows)


def _run_profile(params) -> Report:
    steps = params["b_steps"]
    grid = [(i + 1) / (steps + 1) for i in range(steps)]
    prof = entanglement_profile(grid)
    results = {
        "rows": [
            {
                "b": r.b,
                "schmidt_weights": list(r.schmidt_weights),
                "entanglement_entropy": r.entanglement_entropy,
                "payoff_opt": r.payoff_opt,
                "nc_bound": r.nc_bound,
                "margin": r.margin,
            }
            for r in prof
        ]
    }
    header = ["b", "beta1", "beta2", "entanglement_entropy", "payoff_opt", "nc_bound", "margin"]
    rows = [[r.b, *r.schmidt_weights, r.entanglement_entropy, r.payoff_opt, r.nc_bound, r.margin] for r in prof]
    return Report("profile", params, results, header, rows)


_DISPATCH = {
    "bounds": _run_bounds,
    "game-solve": _run_game_solve,
    "game-simulate": _run_game_simulate,
    "gpt-table": _run_gpt_table,
    "gpt-scan": _run_gpt_scan,
    "profile": _run_profile,
}


def run(cmd: Command) -> Report:
    return _DISPATCH[cmd.subcommand](cmd.params)


def render(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(_round(report.to_dict()), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(report.csv_header)
    for row in report.csv_rows:
        writer.writerow([_fmt_cell(x) for x in row])
    return buf.getvalue()


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    cmd = parse_args(argv)
    try:
        report = run(cmd)
    except QGuessError as exc:
        record = {"error": type(exc).__name__, "message": str(exc), "command": cmd.subcommand}
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return 3
    text = render(report, cmd.fmt)
    if cmd.out:
        with open(cmd.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
