#!/usr/bin/env python3
"""The polymer universe of one biclique, spelled out.

Fix the hard-core model on K_{3,3} and the biclique phase "left side
occupied".  Deviations from that ground state decompose into connected
polymers (vertex sets at pairwise distance <= 3, each vertex carrying a
spin its side's ground state forbids).  This script enumerates every
polymer up to size 2, prints its weight next to the analytic bound the
theory guarantees, and then rebuilds the restricted partition sums from
those weights.

The punchline is the last table: summing the biclique-resolved
restricted sums (with the ground-state prefactors) over both phases
overshoots the true Z by a bounded factor -- assignments reachable from
both phases are counted twice.  The counting pipeline estimates exactly
this overshoot target, never Z itself, which is why its output is
always compared against the biclique-resolved sum.

Runs in about a second.
"""

import math

from bipolymer import bigraph, oracle, polymer, spin

K33_ADJ = [[3, 4, 5], [3, 4, 5], [3, 4, 5], [0, 1, 2], [0, 1, 2], [0, 1, 2]]


def main():
    g = bigraph.BipartiteRegularGraph(3, 3, K33_ADJ)
    system = spin.hardcore(1.0)
    bicliques = spin.enumerate_maximal_bicliques(system)
    bc = bicliques[0]
    print(f"biclique under study: S={bc.s} T={bc.t}")

    model = polymer.PolymerModel(g, system, bc)
    universe = model.enumerate_all(2)
    print(f"polymers up to size 2: {len(universe)}")
    print(f"{'vertices':<12}{'spins':<10}{'weight':>12}{'analytic bound':>16}")
    for p, w in universe:
        bound = polymer.analytic_weight_bound(model, p)
        print(f"{str(p.vertices):<12}{str(p.spins):<10}{w:>12.6f}{bound:>16.6f}")
        assert w <= bound * (1 + 1e-12)

    tau = polymer.weight_decay_rate(system.q, g.degree)
    print(f"\ntarget decay rate tau(q={system.q}, degree={g.degree}) = {tau:.3f}")
    worst = max(math.log(w) + tau * p.size for p, w in universe)
    print(f"max over polymers of log w + tau*|gamma| = {worst:.3f}")
    print("(positive here: K33 is far below the degree the decay regime")
    print(" needs -- see demo 05 for where the certificate actually holds)")

    z = oracle.exact_partition_function(g, system)
    print(f"\nexact Z on K33 = {z}")
    print(f"{'kmax':<6}{'Z^(S,T)':>10}{'biclique-resolved sum':>24}{'ratio to Z':>12}")
    for kmax in (1, 2, 3):
        z_st = oracle.exact_polymer_partition_function(g, system, bc, kmax)
        report = oracle.exact_z_pmer(g, system, kmax)
        print(f"{kmax:<6}{z_st:>10.4f}{report.value:>24.4f}{report.value / z:>12.4f}")
    print("\nthe ratio stabilizes once kmax covers every reachable deviation;")
    print("on the complete bipartite K33 it lands exactly at 2 -- every")
    print("assignment is reachable from both phases, so everything is")
    print("counted twice.  the running algorithm works at small kmax, and")
    print("always reports against this overshoot target, never raw Z.")


if __name__ == "__main__":
    main()
