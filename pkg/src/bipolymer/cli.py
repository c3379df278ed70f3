"""Command-line entry point.

Subcommands: gen, phases, count, sample, oracle, verify, sweep.  Every
report echoes the fully resolved configuration (model, graph, truncation,
decay rate, certification margin) before its results, stdout is
byte-deterministic for a fixed argument vector, and wall time goes to
stderr so timing never perturbs the output bytes.

Exit codes: 0 on success, 2 on a precondition failure (malformed inputs,
violated parameter windows, cost guards, or a negative polymer-condition
margin when --require-certified is set), 1 on a runtime failure (a
collapsed estimate, budget exhaustion, or a failing acceptance criterion).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
import time

import numpy as np

from . import acceptance, bigraph, oracle, sampler, spin
from .phases import (
    hardcore_fixpoint_report,
    solve_coloring_fixpoint,
    solve_hardcore_fixpoints,
    verify_coloring_failure,
    verify_coloring_maximality,
    verify_hardcore_maximality,
)
from .polymer import size_cap, weight_decay_rate
from .spin import (
    enumerate_maximal_bicliques,
    polymer_condition_margin,
    second_interaction_level,
)

__all__ = ["main"]


def _fmt(x) -> str:
    """Shortest round-trip decimal for floats; plain str otherwise."""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _emit(key: str, value, indent: int = 0) -> None:
    print(f"{'  ' * indent}{key}: {_fmt(value)}")


def _build_system(args) -> tuple[spin.SpinSystem, str]:
    if getattr(args, "system", None):
        return spin.load_system(args.system), f"file:{args.system}"
    model = args.model
    if model == "hardcore":
        lam = args.lam if args.lam is not None else 1.0
        return spin.hardcore(lam), f"hardcore(lambda={_fmt(lam)})"
    if model == "colorings":
        if args.q is None:
            raise ValueError("--model colorings requires --q")
        return spin.colorings(args.q), f"colorings(q={args.q})"
    raise ValueError(f"unknown model {model!r}; use --model or --system FILE")


def _load_graph(args) -> tuple[bigraph.BipartiteRegularGraph, str]:
    if getattr(args, "graph", None):
        return bigraph.load_graph(args.graph), f"file:{args.graph}"
    if args.n is None or args.degree is None:
        raise ValueError("pass --graph FILE or both --n and --degree")
    seed = getattr(args, "graph_seed", 0)
    g = bigraph.generate(n=args.n, degree=args.degree, seed=seed)
    return g, f"generate(n={args.n}, degree={args.degree}, seed={seed})"


def _echo_instance(system, system_label, g, graph_label, kmax, eps) -> None:
    _emit("model", system_label, 1)
    _emit("graph", graph_label, 1)
    _emit("n", g.n, 1)
    _emit("degree", g.degree, 1)
    _emit("q", system.q, 1)
    _emit("second_interaction_level", second_interaction_level(system), 1)
    _emit("min_activity", float(system.lam.min()), 1)
    _emit("size_cap", size_cap(g.n, g.degree), 1)
    if kmax is not None:
        _emit("kmax", kmax, 1)
    if eps is not None:
        _emit("eps", eps, 1)
    _emit("decay_rate_tau", weight_decay_rate(system.q, g.degree), 1)
    margin = polymer_condition_margin(system, g.degree)
    _emit("polymer_condition_margin", margin, 1)
    _emit("certified", margin >= 0, 1)


def _resolve_kmax(args, g, eps) -> int:
    if args.kmax is not None:
        return args.kmax
    return sampler.default_kmax(g.n, g.degree, eps)


def _check_certified(args, system, g) -> None:
    if getattr(args, "require_certified", False):
        margin = polymer_condition_margin(system, g.degree)
        if margin < 0:
            raise ValueError(
                f"polymer condition margin {margin:.3f} is negative and "
                "--require-certified is set"
            )


# --------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    print("config:")
    _emit("subcommand", "gen", 1)
    _emit("n", args.n, 1)
    _emit("degree", args.degree, 1)
    _emit("seed", args.seed, 1)
    _emit("out", args.out, 1)
    g = bigraph.generate(n=args.n, degree=args.degree, seed=args.seed)
    bigraph.save_graph(g, args.out)
    print("result:")
    _emit("vertices", 2 * g.n, 1)
    _emit("edges", g.n * g.degree, 1)
    _emit("written", args.out, 1)
    return 0


def cmd_phases(args) -> int:
    print("config:")
    _emit("subcommand", "phases", 1)
    _emit("model", args.model, 1)
    if args.model == "colorings":
        _emit("q", args.q, 1)
    else:
        _emit("lambda", args.lam if args.lam is not None else 1.0, 1)
    _emit("degree", args.degree, 1)
    _emit("verify", args.verify or "none (solve only)", 1)

    if args.model == "colorings":
        if args.q is None:
            raise ValueError("--model colorings requires --q")
        system = spin.colorings(args.q)
        _emit("polymer_condition_margin",
              polymer_condition_margin(system, args.degree), 1)
        if args.verify == "maximality":
            rep = verify_coloring_maximality(args.q, args.degree)
            print("result:")
            _emit("verdict", rep.verdict, 1)
            _emit("log_h", rep.solution.log_h, 1)
            _emit("b_prime", rep.b_prime, 1)
            _emit("b_prime_threshold", rep.b_prime_threshold, 1)
            _emit("margin", rep.b_prime_threshold - rep.b_prime, 1)
            _emit("hessian_dominant", rep.hessian_dominant, 1)
            _emit("solver_residual", rep.solution.residual, 1)
            return 0 if rep.verdict else 1
        if args.verify == "failure":
            rep = verify_coloring_failure(args.q, args.degree)
            print("result:")
            _emit("verdict", rep.verdict, 1)
            _emit("log_h", rep.log_h, 1)
            _emit("log_h_bound", rep.log_h_bound, 1)
            _emit("b_prime", rep.b_prime, 1)
            _emit("b_prime_threshold", rep.b_prime_threshold, 1)
            _emit("margin", rep.b_prime - rep.b_prime_threshold, 1)
            return 0 if rep.verdict else 1
        sol = solve_coloring_fixpoint(args.q, args.degree)
        print("result:")
        _emit("u", sol.u, 1)
        _emit("log_h", sol.log_h, 1)
        _emit("a", sol.a, 1)
        _emit("b", sol.b, 1)
        _emit("b_prime", sol.b_prime, 1)
        _emit("residual", sol.residual, 1)
        return 0

    lam = args.lam if args.lam is not None else 1.0
    if lam <= 1.0:
        _emit("polymer_condition_margin",
              polymer_condition_margin(spin.hardcore(lam), args.degree), 1)
    else:
        # the solver accepts raw activities above 1, but the polymer
        # machinery (and its margin) is defined for normalized systems only
        _emit("polymer_condition_margin", "n/a (activity above 1)", 1)
    if args.verify == "maximality":
        rep = verify_hardcore_maximality(args.degree, lam)
        print("result:")
        _emit("verdict", rep.verdict, 1)
        _emit("x", rep.solution.x, 1)
        _emit("x_bound", rep.x_bound, 1)
        _emit("deviation", rep.deviation, 1)
        _emit("deviation_threshold", rep.deviation_threshold, 1)
        _emit("margin", rep.deviation_threshold - rep.deviation, 1)
        _emit("hessian_dominant", rep.hessian_dominant, 1)
        return 0 if rep.verdict else 1
    if args.verify == "failure":
        raise ValueError("--verify failure applies to --model colorings only")
    sol = solve_hardcore_fixpoints(args.degree, lam)
    print("result:")
    _emit("lambda_critical", sol.lambda_c, 1)
    _emit("unique_fixpoint", sol.unique, 1)
    _emit("x_symmetric", sol.x0, 1)
    _emit("x", sol.x, 1)
    _emit("y", sol.y, 1)
    _emit("residual", sol.residual, 1)
    return 0


def cmd_count(args) -> int:
    system, system_label = _build_system(args)
    g, graph_label = _load_graph(args)
    _check_certified(args, system, g)
    kmax = _resolve_kmax(args, g, args.eps)
    print("config:")
    _emit("subcommand", "count", 1)
    _echo_instance(system, system_label, g, graph_label, kmax, args.eps)
    _emit("fail_prob", args.fail_prob, 1)
    _emit("seed", args.seed, 1)
    bicliques = enumerate_maximal_bicliques(system)
    if args.biclique is not None:
        if not 0 <= args.biclique < len(bicliques):
            raise ValueError(
                f"--biclique must be in [0, {len(bicliques)}), "
                f"got {args.biclique}"
            )
        bc = bicliques[args.biclique]
        rep = sampler.estimate_z_st(
            g, system, bc, eps=args.eps, fail_prob=args.fail_prob,
            seed=args.seed, kmax=kmax,
        )
        print("result:")
        _emit("biclique", f"S={bc.s} T={bc.t}", 1)
        _emit("z_st_estimate", rep.z_st_estimate, 1)
        _emit("samples_used", rep.samples_used, 1)
        _emit("steps_per_sample", rep.steps_per_sample, 1)
        _emit("per_vertex_ratios",
              " ".join(_fmt(r) for r in rep.per_vertex_ratios), 1)
        _emit("certified", rep.certified, 1)
        return 0
    est = sampler.estimate_z_pmer(
        g, system, bicliques, eps=args.eps, fail_prob=args.fail_prob,
        seed=args.seed, kmax=kmax,
    )
    print("result:")
    _emit("bicliques", len(bicliques), 1)
    _emit("z_pmer_estimate", est, 1)
    _emit("log_z_pmer_estimate", math.log(est), 1)
    return 0


def cmd_sample(args) -> int:
    system, system_label = _build_system(args)
    g, graph_label = _load_graph(args)
    _check_certified(args, system, g)
    kmax = _resolve_kmax(args, g, args.eps)
    print("config:")
    _emit("subcommand", "sample", 1)
    _echo_instance(system, system_label, g, graph_label, kmax, args.eps)
    _emit("seed", args.seed, 1)
    _emit("count", args.count, 1)
    draws = sampler.sample_spin_assignments(
        g, system, enumerate_maximal_bicliques(system),
        eps=args.eps, seed=args.seed, n_samples=args.count, kmax=kmax,
    )
    print("result:")
    for i, sigma in enumerate(draws):
        print(f"  assignment {i}: " + " ".join(str(int(s)) for s in sigma))
    return 0


def cmd_oracle(args) -> int:
    system, system_label = _build_system(args)
    g, graph_label = _load_graph(args)
    kmax = args.kmax
    print("config:")
    _emit("subcommand", "oracle", 1)
    _echo_instance(system, system_label, g, graph_label, kmax, None)
    _emit("what", args.what, 1)
    print("result:")
    if args.what == "z":
        z = oracle.exact_partition_function(g, system)
        _emit("z", z, 1)
    elif args.what == "z-pmer":
        rep = oracle.exact_z_pmer(g, system, kmax=kmax)
        z = oracle.exact_partition_function(g, system)
        _emit("z", z, 1)
        _emit("z_pmer", rep.value, 1)
        _emit("ratio", rep.value / z, 1)
        for bc, zst in zip(rep.bicliques, rep.z_st_values):
            _emit(f"z_st S={bc.s} T={bc.t}", zst, 1)
    elif args.what == "phases":
        hists = oracle.exact_phase_decomposition(g, system)
        _emit("histograms", len(hists), 1)
        for h in hists[: args.top]:
            _emit(
                f"alpha={tuple(h.alpha)} beta={tuple(h.beta)}", h.mass, 1
            )
    elif args.what == "mu":
        bicliques = enumerate_maximal_bicliques(system)
        idx = args.biclique if args.biclique is not None else 0
        if not 0 <= idx < len(bicliques):
            raise ValueError(f"--biclique must be in [0, {len(bicliques)})")
        bc = bicliques[idx]
        mu = oracle.exact_mu_st(g, system, bc, kmax=kmax)
        _emit("biclique", f"S={bc.s} T={bc.t}", 1)
        _emit("configurations", len(mu), 1)
        for cfg, p in sorted(mu.items(), key=lambda kv: -kv[1])[: args.top]:
            label = "empty" if not cfg else "; ".join(
                f"{pp.vertices}->{pp.spins}" for pp in cfg
            )
            _emit(label, p, 1)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown oracle target {args.what!r}")
    return 0


def cmd_verify(args) -> int:
    numbers = None
    if args.criteria:
        numbers = sorted({int(tok) for tok in args.criteria.split(",")})
        known = {num for num, _ in acceptance.ALL_CRITERIA}
        bad = set(numbers) - known
        if bad:
            raise ValueError(f"unknown criteria {sorted(bad)}; known: 1..11")
    print("config:")
    _emit("subcommand", "verify", 1)
    _emit("criteria", numbers if numbers else "all", 1)
    print("result:")
    results = acceptance.run_all(numbers)
    all_pass = True
    for res in results:
        all_pass = all_pass and res.passed
        status = "PASS" if res.passed else "FAIL"
        print(f"  [{status}] {res.number:2d}  {res.title}")
        if args.details or not res.passed:
            for line in res.lines:
                print(f"          {line}")
    print(f"  {sum(r.passed for r in results)}/{len(results)} criteria passed")
    return 0 if all_pass else 1


def cmd_sweep(args) -> int:
    print("config:")
    _emit("subcommand", "sweep", 1)
    _emit("task", args.task, 1)
    rows: list[dict[str, object]] = []
    if args.task == "coloring":
        if args.q is None:
            raise ValueError("--task coloring requires --q")
        degrees = [int(t) for t in args.degrees.split(",")]
        _emit("q", args.q, 1)
        _emit("degrees", degrees, 1)
        for d in degrees:
            sol = solve_coloring_fixpoint(args.q, d)
            threshold = 1.0 / (15.0 * d * args.q)
            rows.append({
                "q": args.q,
                "degree": d,
                "log_h": sol.log_h,
                "b_prime": sol.b_prime,
                "b_prime_threshold": threshold,
                "maximal": sol.b_prime <= threshold,
            })
    elif args.task == "hardcore":
        degrees = [int(t) for t in args.degrees.split(",")]
        lams = [float(t) for t in (args.lambdas or "1.0").split(",")]
        _emit("degrees", degrees, 1)
        _emit("lambdas", lams, 1)
        for d in degrees:
            for lam in lams:
                sol = solve_hardcore_fixpoints(d, lam)
                # below the uniqueness threshold only the symmetric
                # fixpoint exists; report its spectrum instead of failing
                which = "symmetric" if sol.unique else "asymmetric"
                rep = hardcore_fixpoint_report(d, lam, which=which)
                rows.append({
                    "degree": d,
                    "lambda": lam,
                    "lambda_critical": sol.lambda_c,
                    "unique_fixpoint": sol.unique,
                    "x": sol.x0 if sol.unique else sol.x,
                    "y": sol.x0 if sol.unique else sol.y,
                    "second_value": rep.spectrum[1],
                    "dominant": rep.hessian_dominant,
                })
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown sweep task {args.task!r}")
    if not rows:
        raise ValueError("empty sweep grid")
    fields = list(rows[0].keys())
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: _fmt(v) for k, v in row.items()})
        print("result:")
        _emit("rows", len(rows), 1)
        _emit("written", args.csv, 1)
    else:
        print("result:")
        print("  " + ",".join(fields))
        for row in rows:
            print("  " + ",".join(_fmt(row[k]) for k in fields))
    return 0


# --------------------------------------------------------------------------
# parser


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["hardcore", "colorings"],
                   help="built-in interaction family")
    p.add_argument("--system", help="path to a saved spin-system file")
    p.add_argument("--q", type=int, help="number of spins (colorings)")
    p.add_argument("--lambda", dest="lam", type=float,
                   help="hard-core activity (default 1.0)")


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="path to a saved graph file")
    p.add_argument("--n", type=int, help="vertices per side (generate)")
    p.add_argument("--degree", "--delta", dest="degree", type=int,
                   help="regular degree (generate)")
    p.add_argument("--graph-seed", type=int, default=0,
                   help="generation seed when --graph is not given")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bipolymer",
        description="Polymer-expansion counting and sampling for spin "
                    "systems on regular bipartite graphs.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate and save a random regular graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", "--delta", dest="degree", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("phases", help="tree-recursion fixpoints and verdicts")
    p.add_argument("--model", choices=["hardcore", "colorings"], required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--degree", "--delta", dest="degree", type=int, required=True)
    p.add_argument("--verify", choices=["maximality", "failure"])
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("count", help="estimate restricted partition functions")
    _add_model_args(p)
    _add_graph_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--fail-prob", type=float, default=0.1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--kmax", type=int)
    p.add_argument("--biclique", type=int,
                   help="estimate one biclique's Z^{S,T} instead of Z^pmer")
    p.add_argument("--require-certified", action="store_true",
                   help="refuse instances with a negative polymer margin")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("sample", help="draw approximate spin assignments")
    _add_model_args(p)
    _add_graph_args(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--kmax", type=int)
    p.add_argument("--require-certified", action="store_true",
                   help="refuse instances with a negative polymer margin")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("oracle", help="exact brute-force references")
    _add_model_args(p)
    _add_graph_args(p)
    p.add_argument("--what", choices=["z", "z-pmer", "phases", "mu"],
                   default="z")
    p.add_argument("--kmax", type=int)
    p.add_argument("--biclique", type=int)
    p.add_argument("--top", type=int, default=10,
                   help="rows to print for phases/mu listings")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--criteria",
                   help="comma-separated criterion numbers (default: all)")
    p.add_argument("--details", action="store_true",
                   help="print per-case lines for passing criteria too")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="parameter grids as flat tables")
    p.add_argument("--task", choices=["coloring", "hardcore"], required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--degrees", required=True,
                   help="comma-separated degree grid")
    p.add_argument("--lambdas", help="comma-separated activity grid (hardcore)")
    p.add_argument("--csv", help="write rows to this CSV file")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rc = args.func(args)
    except ValueError as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        rc = 2
    except sampler.EstimateFailure as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        rc = 1
    except RuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        rc = 1
    finally:
        print(f"wall time: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return rc


if __name__ == "__main__":
    sys.exit(main())
