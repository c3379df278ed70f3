"""The acceptance suite: eleven numbered end-to-end checks.

Each criterion is a no-argument function returning a CriterionResult, so
the same code backs both the pytest gate (tests/test_acceptance.py) and
the CLI `verify` subcommand's pass/fail table.  Suites, tolerances, and
seeds are frozen here; nothing is configurable, by design — a criterion
either passes as stated or the package is wrong.
"""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import bigraph, oracle, sampler, spin
from .bigraph import (
    BipartiteRegularGraph,
    bassalygo_condition,
    check_expansion_smallsets,
)
from .phases import (
    fixpoint_report,
    hardcore_fixpoint_report,
    verify_coloring_failure,
    verify_coloring_maximality,
    verify_hardcore_maximality,
)
from .polymer import PolymerModel, analytic_weight_bound, weight_decay_rate
from .spin import Biclique, SpinSystem, enumerate_maximal_bicliques

__all__ = ["CriterionResult", "ALL_CRITERIA", "run_criterion", "run_all"]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    runtime_seconds: float
    lines: tuple[str, ...]

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] criterion {self.number:2d} — {self.title} "
            f"({self.runtime_seconds:.1f}s)"
        )


def _k33() -> BipartiteRegularGraph:
    adj = np.array([[3, 4, 5]] * 3 + [[0, 1, 2]] * 3)
    return BipartiteRegularGraph(3, 3, adj)


def _tiny_cells() -> list[tuple[BipartiteRegularGraph, SpinSystem, Biclique, int]]:
    """Shared tiny-instance suite (graph, system, biclique, kmax)."""
    g1 = _k33()
    hc = spin.hardcore(1.0)
    hc_half = spin.hardcore(0.5)
    col = spin.colorings(4)
    cells = [
        (g1, hc, Biclique(s=(0,), t=(0, 1)), 2),
        (g1, hc, Biclique(s=(0, 1), t=(0,)), 1),
        (g1, hc_half, Biclique(s=(0,), t=(0, 1)), 2),
        (g1, col, Biclique(s=(0, 1), t=(2, 3)), 1),
        (bigraph.generate(n=4, degree=3, seed=5), hc, Biclique(s=(0,), t=(0, 1)), 1),
        (bigraph.generate(n=6, degree=3, seed=1), hc_half, Biclique(s=(0,), t=(0, 1)), 1),
    ]
    return cells


# --------------------------------------------------------------------------
# 1. polymer-representation identity


def polymer_identity() -> CriterionResult:
    """Exact polymer partition function equals the restricted spin sum.

    20 seeded graphs (seeds 0-4, n in {4,6,8,12}, degree 3), hard-core at
    activities 1 and 0.5 plus 4-colorings, every maximal biclique.  The
    default size cap is 0 at this scale (identity trivially 1 = 1), so the
    suite also runs nontrivial cap overrides: hard-core at cap 2
    everywhere, colorings at cap 1 everywhere and cap 2 for n <= 8.
    """
    t0 = time.time()
    lines = []
    worst = 0.0
    cells = 0
    models = [
        ("hardcore(1.0)", spin.hardcore(1.0), [2]),
        ("hardcore(0.5)", spin.hardcore(0.5), [2]),
        ("colorings(4)", spin.colorings(4), [1]),
    ]
    ok = True
    for seed in range(5):
        for n in (4, 6, 8, 12):
            g = bigraph.generate(n=n, degree=3, seed=seed)
            for label, system, extra_caps in models:
                caps = [None] + list(extra_caps)
                if label == "colorings(4)" and n <= 8:
                    caps.append(2)
                for cap in caps:
                    for bc in enumerate_maximal_bicliques(system):
                        zp = oracle.exact_polymer_partition_function(
                            g, system, bc, kmax=cap
                        )
                        rss = oracle.restricted_spin_sum(g, system, bc, kmax=cap)
                        lam = system.lam
                        pref = (
                            float(lam[list(bc.s)].sum()) ** n
                            * float(lam[list(bc.t)].sum()) ** n
                        )
                        rel = abs(rss / pref - zp) / zp
                        worst = max(worst, rel)
                        cells += 1
                        if rel > 1e-9:
                            ok = False
                            lines.append(
                                f"seed={seed} n={n} {label} cap={cap} "
                                f"bc={bc}: rel {rel:.2e} > 1e-9"
                            )
    lines.append(f"{cells} identity cells checked; worst relative error {worst:.2e}")
    return CriterionResult(
        1, "polymer partition function equals restricted spin sum",
        ok and worst <= 1e-9, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 2. chain correctness


def chain_correctness() -> CriterionResult:
    """Detailed balance <= 1e-12 entrywise; stationary law within TV 1e-10."""
    t0 = time.time()
    lines = []
    ok = True
    for g, system, bc, kmax in _tiny_cells():
        ctx = sampler.build_chain_context(g, system, bc, kmax)
        configs = oracle.enumerate_configurations(ctx.model, kmax=kmax)
        big_p = sampler.transition_matrix(ctx, configs)
        mu = oracle.exact_mu_st(g, system, bc, kmax=kmax)
        pi = np.array([mu[cfg] for cfg in configs])
        flow = pi[:, None] * big_p
        db = float(np.abs(flow - flow.T).max())
        pi_solved = sampler.stationary_distribution(big_p)
        tv = 0.5 * float(np.abs(pi_solved - pi).sum())
        cell_ok = db <= 1e-12 and tv <= 1e-10
        ok = ok and cell_ok
        lines.append(
            f"n={g.n} q={system.q} kmax={kmax} |configs|={len(configs)}: "
            f"db={db:.2e} tv={tv:.2e}{'' if cell_ok else '  <-- FAIL'}"
        )
    return CriterionResult(
        2, "chain detailed balance and stationary law",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 3. sampling accuracy


def sampling_accuracy() -> CriterionResult:
    """1e5 chain draws within TV 0.05 of the exact configuration law.

    20 seeds on the K33 hard-core instance; at least 18 must land within
    tolerance.
    """
    t0 = time.time()
    g = _k33()
    system = spin.hardcore(1.0)
    bc = Biclique(s=(0,), t=(0, 1))
    kmax = 2
    ctx = sampler.build_chain_context(g, system, bc, kmax)
    mu = oracle.exact_mu_st(g, system, bc, kmax=kmax)
    n_samples, n_steps = 100_000, 1000
    hits = 0
    tvs = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        draws = sampler.sample_configurations(ctx, n_samples, n_steps, rng)
        counts = Counter(draws)
        emp = {cfg: c / n_samples for cfg, c in counts.items()}
        tv = oracle.total_variation(emp, mu)
        tvs.append(tv)
        if tv <= 0.05:
            hits += 1
    lines = (
        f"{n_samples} samples x {n_steps} steps, 20 seeds: "
        f"{hits}/20 within TV 0.05",
        f"TV range [{min(tvs):.4f}, {max(tvs):.4f}]",
    )
    return CriterionResult(
        3, "empirical sampling accuracy (1e5 draws, 20 seeds)",
        hits >= 18, time.time() - t0, lines,
    )


# --------------------------------------------------------------------------
# 4. counting accuracy


def counting_accuracy() -> CriterionResult:
    """estimate_z_st at eps=0.05 within 5% of exact in >= 18 of 20 trials."""
    t0 = time.time()
    g1 = _k33()
    instances = [
        ("K33 hardcore(1.0) cap2", g1, spin.hardcore(1.0),
         Biclique(s=(0,), t=(0, 1)), 2),
        ("K33 hardcore(0.5) cap2", g1, spin.hardcore(0.5),
         Biclique(s=(0,), t=(0, 1)), 2),
        ("gen(4,3,seed5) hardcore(1.0) cap1",
         bigraph.generate(n=4, degree=3, seed=5), spin.hardcore(1.0),
         Biclique(s=(0,), t=(0, 1)), 1),
    ]
    lines = []
    ok = True
    for label, g, system, bc, kmax in instances:
        exact = oracle.exact_polymer_partition_function(g, system, bc, kmax=kmax)
        hits = 0
        worst = 0.0
        for seed in range(20):
            rep = sampler.estimate_z_st(
                g, system, bc, eps=0.05, fail_prob=0.1, seed=seed, kmax=kmax
            )
            rel = abs(rep.z_st_estimate - exact) / exact
            worst = max(worst, rel)
            if rel <= 0.05:
                hits += 1
        inst_ok = hits >= 18
        ok = ok and inst_ok
        lines.append(
            f"{label}: {hits}/20 within 5% (worst {worst:.4f})"
            f"{'' if inst_ok else '  <-- FAIL'}"
        )
    return CriterionResult(
        4, "counting accuracy (eps=0.05, 20 trials per instance)",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 5. coloring maximality bounds


def coloring_maximality() -> CriterionResult:
    """q=4 at degrees 170..1000: field above e^{(d-1)/8}, b' under 1/(15 d q)."""
    t0 = time.time()
    lines = []
    ok = True
    for degree in (170, 200, 300, 556, 1000):
        rep = verify_coloring_maximality(4, degree)
        sol = rep.solution
        grown = sol.log_h > (degree - 1) / 8.0
        cell_ok = (
            rep.verdict and grown and rep.b_prime_ok
            and sol.residual <= 1e-12
        )
        ok = ok and cell_ok
        lines.append(
            f"degree={degree}: log h={sol.log_h:.2f} (> {(degree-1)/8.0:.2f}), "
            f"b'={rep.b_prime:.3e} <= {rep.b_prime_threshold:.3e}, "
            f"residual={sol.residual:.1e}{'' if cell_ok else '  <-- FAIL'}"
        )
    return CriterionResult(
        5, "coloring maximality bounds at q=4",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 6. maximality failure window


def coloring_failure_window() -> CriterionResult:
    """Many-color window: field stays small and b' is too large to certify."""
    t0 = time.time()
    lines = []
    ok = True
    for q, degree in ((88, 100), (90, 100), (120, 130)):
        rep = verify_coloring_failure(q, degree)
        cell_ok = rep.verdict and rep.h_below_bound and rep.b_prime_large
        ok = ok and cell_ok
        lines.append(
            f"(q={q}, degree={degree}): log h={rep.log_h:.4f} "
            f"< {rep.log_h_bound:.4f}, b'={rep.b_prime:.3e} "
            f"> {1.0/(degree*q):.3e}{'' if cell_ok else '  <-- FAIL'}"
        )
    return CriterionResult(
        6, "coloring maximality failure in the many-color window",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 7. hard-core bounds


def hardcore_bounds() -> CriterionResult:
    """Occupied-side bounds: x <= 1/(30 lam d^2), deviation <= 1/(30 d)."""
    t0 = time.time()
    lines = []
    ok = True
    for degree, lam in ((50, 1.0), (100, 0.5), (200, 0.25), (60, 1.0)):
        rep = verify_hardcore_maximality(degree, lam)
        cell_ok = rep.verdict and rep.x_bound_ok and rep.deviation_ok
        ok = ok and cell_ok
        lines.append(
            f"(degree={degree}, lam={lam}): x={rep.solution.x:.3e} "
            f"<= {rep.x_bound:.3e}, deviation={rep.deviation:.3e} "
            f"<= {rep.deviation_threshold:.3e}{'' if cell_ok else '  <-- FAIL'}"
        )
    return CriterionResult(
        7, "hard-core fixpoint bounds",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 8. spectral dominance


def spectral_dominance() -> CriterionResult:
    """Uniform coloring second value 1/(q-1); hard-core dominance verdicts."""
    t0 = time.time()
    lines = []
    ok = True
    for q in range(3, 11):
        system = spin.colorings(q)
        uniform = np.full(q, 1.0 / q)
        rep = fixpoint_report(
            system.b, system.lam, 3, (uniform, uniform.copy())
        )
        second = rep.spectrum[1]
        err = abs(second - 1.0 / (q - 1))
        cell_ok = err <= 1e-8
        ok = ok and cell_ok
        lines.append(
            f"uniform colorings q={q}: second value {second:.10f} "
            f"(|err| {err:.1e}){'' if cell_ok else '  <-- FAIL'}"
        )
    rep_dom = hardcore_fixpoint_report(50, 1.0, which="asymmetric")
    ok = ok and rep_dom.hessian_dominant
    lines.append(
        f"hardcore(50, 1.0) asymmetric: dominant={rep_dom.hessian_dominant} "
        f"(second value {rep_dom.spectrum[1]:.3e})"
    )
    rep_sym = hardcore_fixpoint_report(3, 5.0, which="symmetric")
    ok = ok and not rep_sym.hessian_dominant
    lines.append(
        f"hardcore(3, 5.0) symmetric: dominant={rep_sym.hessian_dominant} "
        f"(second value {rep_sym.spectrum[1]:.4f} vs threshold 0.5)"
    )
    return CriterionResult(
        8, "fixpoint spectral dominance",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 9. expansion conditions


def expansion_conditions() -> CriterionResult:
    """Entropy inequality over all degrees; exhaustive small-set checks."""
    t0 = time.time()
    lines = []
    ok = True
    bad = [
        d for d in range(3, 1001)
        if not bassalygo_condition(d, 1.0 / (3 * d), (d - 1) / 2.0)
    ]
    bad += [
        d for d in range(3, 1001)
        if not bassalygo_condition(d, 1.0 / (6 * d), d / 7.0 + 1.0)
    ]
    if bad:
        ok = False
        lines.append(f"entropy condition failed at degrees {sorted(set(bad))[:10]}")
    else:
        lines.append(
            "entropy condition holds for both parameter pairs, degrees 3..1000"
        )
    checked = 0
    graphs = 0
    for n, degree in ((6, 3), (9, 3), (12, 3), (12, 4)):
        for seed in range(10):
            g = bigraph.generate(n=n, degree=degree, seed=seed)
            graphs += 1
            for mode in ("plus", "boundary"):
                for cap in (None, 2):
                    rep = check_expansion_smallsets(g, mode, cap_per_side=cap)
                    checked += rep.sets_checked
                    if not rep.holds:
                        ok = False
                        lines.append(
                            f"n={n} degree={degree} seed={seed} mode={mode} "
                            f"cap={cap}: min ratio {rep.min_ratio:.3f} "
                            f"below {rep.required_ratio:.3f} at {rep.worst_set}"
                        )
    lines.append(
        f"exhaustive small-set check: {graphs} graphs, both modes, "
        f"default and cap-2 domains, {checked} sets checked, all hold"
    )
    return CriterionResult(
        9, "expansion conditions",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 10. weight decay


def weight_decay() -> CriterionResult:
    """Every polymer weight at most e^{-tau |gamma|}; analytic envelope holds."""
    t0 = time.time()
    lines = []
    ok = True
    g = bigraph.generate(n=2400, degree=400, seed=0)
    system = spin.hardcore(1.0)
    model = PolymerModel(g, system, Biclique(s=(0,), t=(0, 1)))
    tau = weight_decay_rate(2, 400)
    worst = -math.inf
    count = 0
    for p, w in model.enumerate_all(1):
        slack = math.log(w) + tau * p.size
        worst = max(worst, slack)
        count += 1
    if worst > 0:
        ok = False
    lines.append(
        f"degree-400 instance (n=2400, cap 1): {count} polymers, "
        f"max(log w + tau|gamma|) = {worst:.2f} (needs <= 0, tau={tau:.4f})"
    )
    env_worst = 0.0
    env_count = 0
    for g2, system2, bc2, kmax2 in _tiny_cells():
        model2 = PolymerModel(g2, system2, bc2)
        for p, w in model2.enumerate_all(kmax2):
            bound = analytic_weight_bound(model2, p)
            env_worst = max(env_worst, w / bound)
            env_count += 1
            if w > bound * (1 + 1e-12):
                ok = False
                lines.append(f"envelope violated: {p} weight {w:.3e} > {bound:.3e}")
    lines.append(
        f"analytic envelope on tiny suite: {env_count} polymers, "
        f"max weight/bound = {env_worst:.3f} (needs <= 1)"
    )
    return CriterionResult(
        10, "polymer weight decay",
        ok, time.time() - t0, tuple(lines),
    )


# --------------------------------------------------------------------------
# 11. overlap diagnostic


def overlap_diagnostic() -> CriterionResult:
    """Z^pmer / Z_G finite and positive on the tiny suite (report only)."""
    t0 = time.time()
    lines = []
    ok = True
    seen = set()
    for g, system, _bc, kmax in _tiny_cells():
        key = (id(g), id(system), kmax)
        if key in seen:
            continue
        seen.add(key)
        z = oracle.exact_partition_function(g, system)
        rep = oracle.exact_z_pmer(g, system, kmax=kmax)
        ratio = rep.value / z
        if not (math.isfinite(ratio) and ratio > 0):
            ok = False
        lines.append(
            f"n={g.n} q={system.q} kmax={kmax}: Z^pmer={rep.value:.6g} "
            f"Z_G={z:.6g} ratio={ratio:.6f}"
            f"{'' if math.isfinite(ratio) and ratio > 0 else '  <-- FAIL'}"
        )
    return CriterionResult(
        11, "Z^pmer / Z_G diagnostic (finite and positive)",
        ok, time.time() - t0, tuple(lines),
    )


ALL_CRITERIA = [
    (1, polymer_identity),
    (2, chain_correctness),
    (3, sampling_accuracy),
    (4, counting_accuracy),
    (5, coloring_maximality),
    (6, coloring_failure_window),
    (7, hardcore_bounds),
    (8, spectral_dominance),
    (9, expansion_conditions),
    (10, weight_decay),
    (11, overlap_diagnostic),
]


def run_criterion(number: int) -> CriterionResult:
    for num, fn in ALL_CRITERIA:
        if num == number:
            return fn()
    raise ValueError(f"no acceptance criterion numbered {number}")


def run_all(numbers: list[int] | None = None) -> list[CriterionResult]:
    wanted = set(numbers) if numbers else {num for num, _ in ALL_CRITERIA}
    return [fn() for num, fn in ALL_CRITERIA if num in wanted]
