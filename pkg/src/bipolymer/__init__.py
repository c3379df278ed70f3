"""Approximate counting and sampling for spin systems on dense regular
bipartite graphs, via polymer expansions around maximal-biclique ground
states, with exact small-instance oracles and tree-recursion phase analysis.
"""

from bipolymer import bigraph, oracle, phases, polymer, sampler, spin
from bipolymer.bigraph import BipartiteRegularGraph, generate
from bipolymer.spin import Biclique, SpinSystem, colorings, hardcore

__version__ = "0.1.0"

__all__ = [
    "spin",
    "bigraph",
    "phases",
    "polymer",
    "oracle",
    "sampler",
    "SpinSystem",
    "Biclique",
    "colorings",
    "hardcore",
    "BipartiteRegularGraph",
    "generate",
    "__version__",
]
