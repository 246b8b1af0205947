"""Command-line interface.

Subcommands: plan, build, simulate, experiment, fit, compare, bench.
Reports are CSV, everything else JSON; every output artifact records the
master seed and the git state.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

from . import experiment, planner, qasm, simplify
from .builder import build as build_circuit
from .experiment import ExperimentConfig, git_stamp
from .simnoise import NoiseSpec, run_shots


def _plan_from_args(args) -> planner.RotationPlan:
    return planner.plan(args.theta, epsilon=args.epsilon, n=args.n,
                        no_reduce=args.no_reduce)


def cmd_plan(args) -> int:
    pl = _plan_from_args(args)
    print(json.dumps(asdict(pl), indent=2))
    return 0


def cmd_build(args) -> int:
    pl = _plan_from_args(args)
    circ = build_circuit(pl, style=args.style)
    if args.simplify_pipeline:
        if args.style != "naive":
            print("--simplify-pipeline needs --style naive", file=sys.stderr)
            return 2
        circ = simplify.simplify(circ)
    text = qasm.emit(circ)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    with open(args.config) as fh:
        cfg = json.load(fh)
    pl = planner.plan(cfg.get("theta", math.pi / 4), n=cfg["n"],
                      no_reduce=cfg.get("no_reduce", False))
    circ = build_circuit(pl, style=cfg.get("style", "simplified"),
                         target_init=cfg.get("input", "0"))
    from .builder import set_target_measurement
    circ = set_target_measurement(circ, cfg.get("basis", "z"))
    noise = NoiseSpec(cfg.get("delta", 0.0),
                      convention=cfg.get("convention", "mixed_state"))
    res = run_shots(circ, noise, cfg.get("shots", 100_000),
                    cfg.get("seed", 0))
    out = {"counts": res.counts, "shots": res.shots, "seed": res.seed,
           "git": git_stamp(), "n": pl.n, "k": pl.k, "delta": noise.delta}
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_experiment(args) -> int:
    with open(args.config) as fh:
        cfg = ExperimentConfig.from_json(fh.read())
    rows = experiment.run_experiment(cfg)
    experiment.write_report(rows, args.out, seed=cfg.seed,
                            convention=cfg.convention)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_fit(args) -> int:
    rows = experiment.read_report(args.report)
    meta = experiment.report_header_meta(args.report)
    deltas = sorted({r.delta for r in rows if r.delta > 0})
    fits = [experiment.fit_exponential(rows, d) for d in deltas]
    out = {"seed": meta.get("seed"), "git": git_stamp(),
           "fits": [f.to_jsonable() for f in fits]}
    if args.plot_data:
        out["plot_data"] = experiment.plot_data(rows, fits)
    print(json.dumps(out, indent=2))
    return 0


def cmd_compare(args) -> int:
    rows = []
    seed = None
    if args.reference != "table1":
        rows = experiment.read_report(args.report)
        seed = experiment.report_header_meta(args.report).get("seed")
    diff = experiment.compare_reference(rows, args.reference)
    print(json.dumps({"seed": seed, "git": git_stamp(),
                      **diff.to_jsonable()}, indent=2))
    if diff.gated and not diff.passed:
        return 1
    return 0


def cmd_bench(args) -> int:
    rows = experiment.benchmark_mode(args.n_max, theta=args.theta)
    print("# seed: n/a")
    print(f"# git: {git_stamp()}")
    print("n,k,qubits,toffolis,theta_star,angle_error,p_success,"
          "pf_vs_target,agf_vs_target,reduces_to")
    for r in rows:
        red = "" if r.reduces_to is None else r.reduces_to
        print(f"{r.n},{r.k},{r.qubits},{r.toffolis},{r.theta_star:.7f},"
              f"{r.angle_error:.6g},{r.p_success:.5f},{r.pf_vs_target:.5f},"
              f"{r.agf_vs_target:.5f},{red}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="rotbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_plan_args(p):
        p.add_argument("--theta", type=float, default=math.pi / 4)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--epsilon", type=float)
        g.add_argument("--n", type=int)
        p.add_argument("--no-reduce", action="store_true")

    p = sub.add_parser("plan", help="resolve (theta, epsilon|n) parameters")
    add_plan_args(p)
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("build", help="emit a circuit as OpenQASM")
    add_plan_args(p)
    p.add_argument("--out")
    p.add_argument("--style", choices=("naive", "simplified"),
                   default="simplified")
    p.add_argument("--simplify-pipeline", action="store_true",
                   help="run the rewrite passes on a naive build")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("simulate", help="run shots for one circuit config")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("experiment", help="run the full tomography grid")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("fit", help="fit the exponential success model")
    p.add_argument("--report", required=True)
    p.add_argument("--plot-data", action="store_true")
    p.set_defaults(fn=cmd_fit)

    p = sub.add_parser("compare", help="diff a report against a reference")
    p.add_argument("--report", default="")
    p.add_argument("--reference", required=True,
                   choices=("table1", "table2", "table3"))
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("bench", help="qubit/Toffoli scaling recipe")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--theta", type=float, default=math.pi / 4)
    p.set_defaults(fn=cmd_bench)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
