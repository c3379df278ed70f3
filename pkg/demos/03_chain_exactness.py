#!/usr/bin/env python3
"""The polymer dynamics is exactly reversible -- check it, don't trust it.

Build the insert/remove chain on polymer configurations for one biclique
of K_{3,3} (hard-core) and verify three things against brute force:

  1. the analytic one-step transition matrix of the *actual* step
     function (same proposal tables, two uniforms integrated out) has
     rows summing to 1 and satisfies detailed balance against the exact
     configuration law to machine precision;
  2. solving for the stationary vector of that matrix reproduces the
     exact law;
  3. empirical histograms of independent chain runs converge to the
     same law as the step budget grows.

Runs in a few seconds; the longest row simulates 2e7 chain steps.
"""

import collections

import numpy as np

from bipolymer import bigraph, oracle, polymer, sampler, spin

K33_ADJ = [[3, 4, 5], [3, 4, 5], [3, 4, 5], [0, 1, 2], [0, 1, 2], [0, 1, 2]]


def main():
    g = bigraph.BipartiteRegularGraph(3, 3, K33_ADJ)
    system = spin.hardcore(1.0)
    bc = spin.enumerate_maximal_bicliques(system)[0]
    kmax = 2

    ctx = sampler.build_chain_context(g, system, bc, kmax)
    model = polymer.PolymerModel(g, system, bc)
    configs = oracle.enumerate_configurations(model, kmax)
    mu = oracle.exact_mu_st(g, system, bc, kmax)
    pi = np.array([mu[c] for c in configs])
    print(f"configurations: {len(configs)}, polymers: {len(ctx.polymers)}, "
          f"normalizer C = {ctx.c_norm}")

    big_p = sampler.transition_matrix(ctx, configs)
    row_err = float(np.abs(big_p.sum(axis=1) - 1.0).max())
    flow = pi[:, None] * big_p
    db_err = float(np.abs(flow - flow.T).max())
    print(f"max |row sum - 1|                : {row_err:.3e}")
    print(f"max detailed-balance violation   : {db_err:.3e}")

    solved = sampler.stationary_distribution(big_p)
    solve_tv = 0.5 * float(np.abs(solved - pi).sum())
    print(f"TV(solved stationary, exact law) : {solve_tv:.3e}")

    print("\nempirical convergence (20000 independent chains each row):")
    print(f"{'steps':>8}{'TV to exact law':>18}")
    for steps in (5, 20, 100, 1000):
        rng = np.random.default_rng(steps)
        counts = collections.Counter(
            sampler.sample_configurations(ctx, 20000, steps, rng)
        )
        emp = {c: counts.get(c, 0) / 20000 for c in configs}
        tv = 0.5 * sum(abs(emp[c] - mu[c]) for c in configs)
        print(f"{steps:>8}{tv:>18.5f}")
    print("\nthe residual at 1000 steps is pure sampling noise "
          "(20000 draws over 7 configurations).")


if __name__ == "__main__":
    main()
