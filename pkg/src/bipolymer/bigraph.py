"""Regular bipartite graphs: generation, neighborhoods, expansion checks.

Vertices are integers 0..2n-1; the left side L is [0, n) and the right side
R is [n, 2n).  Graphs are simple and degree-regular with every edge crossing
between the sides.  Generation follows the permutation model: the union of
degree-many independent uniform perfect matchings between L and R,
conditioned on the result being simple.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BipartiteRegularGraph",
    "generate",
    "graph_distance",
    "ball",
    "boundary",
    "closed_neighborhood",
    "check_expansion_smallsets",
    "ExpansionReport",
    "bassalygo_condition",
    "save_graph",
    "load_graph",
]

_REJECTION_CAP = 10_000
_REPAIR_PASS_CAP = 10_000
_EXPANSION_SIZE_CAP = 24


class BipartiteRegularGraph:
    """Immutable adjacency structure for a simple regular bipartite graph."""

    __slots__ = ("n", "degree", "adj", "_nbr_sets")

    def __init__(self, n: int, degree: int, adj: np.ndarray):
        adj = np.asarray(adj, dtype=np.int64)
        if adj.shape != (2 * n, degree):
            raise ValueError(
                f"adjacency shape {adj.shape} does not match n={n}, degree={degree}"
            )
        self.n = int(n)
        self.degree = int(degree)
        self.adj = np.sort(adj, axis=1)
        self.adj.setflags(write=False)
        self._nbr_sets: list[frozenset[int]] | None = None
        self._validate()

    def _validate(self) -> None:
        n, d = self.n, self.degree
        for v in range(2 * n):
            row = self.adj[v]
            if len(set(row.tolist())) != d:
                raise ValueError(f"vertex {v} has parallel edges")
            lo, hi = (n, 2 * n) if v < n else (0, n)
            if row.min() < lo or row.max() >= hi:
                raise ValueError(f"vertex {v} has a neighbor on its own side")
        # symmetry: each edge must appear from both endpoints
        pairs = set()
        for v in range(2 * n):
            for u in self.adj[v]:
                pairs.add((min(v, int(u)), max(v, int(u))))
        if len(pairs) != n * d:
            raise ValueError("adjacency is not symmetric")

    @property
    def num_vertices(self) -> int:
        return 2 * self.n

    def is_left(self, v: int) -> bool:
        return v < self.n

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        if self._nbr_sets is None:
            self._nbr_sets = [frozenset(row.tolist()) for row in self.adj]
        return self._nbr_sets[v]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteRegularGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.degree == other.degree
            and np.array_equal(self.adj, other.adj)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.degree, self.adj.tobytes()))

    def __repr__(self) -> str:
        return f"BipartiteRegularGraph(n={self.n}, degree={self.degree})"


def _matchings_to_adj(n: int, perms: np.ndarray) -> np.ndarray:
    """Stack of permutations (one per matching) -> (2n, degree) adjacency."""
    degree = perms.shape[0]
    adj = np.empty((2 * n, degree), dtype=np.int64)
    adj[:n] = perms.T + n
    inv = np.empty_like(perms)
    rows = np.arange(n)
    for k in range(degree):
        inv[k, perms[k]] = rows
    adj[n:] = inv.T
    return adj


def _generate_reject(n: int, degree: int, rng: np.random.Generator) -> np.ndarray:
    for _ in range(_REJECTION_CAP):
        perms = np.stack([rng.permutation(n) for _ in range(degree)])
        # simple iff no left vertex sees the same right vertex twice
        cols = np.sort(perms, axis=0)
        if degree == 1 or not (cols[1:] == cols[:-1]).any():
            return perms
    raise RuntimeError(
        f"no simple graph found in {_REJECTION_CAP} rejection rounds "
        f"(n={n}, degree={degree}); try the 'repair' method"
    )


def _generate_repair(n: int, degree: int, rng: np.random.Generator) -> np.ndarray:
    """Resolve parallel edges by random transpositions inside a matching.

    Rejection sampling dies for degree beyond ~4 (the collision count
    concentrates near degree^2/2 regardless of n), so dense instances start
    from independent matchings and swap away collisions instead.  The result
    is simple and degree-regular but no longer carries the exact
    conditioned-uniform law; use 'reject' when the law itself matters.
    """
    perms = np.stack([rng.permutation(n) for _ in range(degree)])
    for _ in range(_REPAIR_PASS_CAP):
        order = np.argsort(perms, axis=0, kind="stable")
        svals = np.take_along_axis(perms, order, axis=0)
        dup_pos, dup_col = np.nonzero(svals[1:] == svals[:-1])
        if dup_pos.size == 0:
            return perms
        for pos, i in zip(dup_pos.tolist(), dup_col.tolist()):
            k = int(order[pos + 1, i])
            j = int(rng.integers(n))
            perms[k, i], perms[k, j] = perms[k, j], perms[k, i]
    raise RuntimeError(
        f"collision repair did not converge (n={n}, degree={degree})"
    )


def generate(
    n: int, degree: int, seed: int, method: str = "auto"
) -> BipartiteRegularGraph:
    """Random simple degree-regular bipartite graph, deterministic per seed.

    Methods: 'reject' resamples the degree-many matchings until simple
    (exact conditioned-uniform law; hopeless for degree >= ~5 because the
    collision count does not shrink with n), 'repair' fixes collisions by
    random swaps (always fast, approximate law), 'auto' picks 'reject' for
    degree <= 4 and 'repair' above.
    """
    if degree < 1:
        raise ValueError("degree must be positive")
    if degree > n:
        raise ValueError(f"degree {degree} exceeds side size {n}: no simple graph")
    rng = np.random.default_rng(seed)
    if method == "auto":
        method = "reject" if degree <= 4 else "repair"
    if method == "reject":
        perms = _generate_reject(n, degree, rng)
    elif method == "repair":
        perms = _generate_repair(n, degree, rng)
    else:
        raise ValueError(f"unknown generation method {method!r}")
    return BipartiteRegularGraph(n, degree, _matchings_to_adj(n, perms))


def graph_distance(g: BipartiteRegularGraph, u: int, v: int) -> float:
    """BFS shortest-path distance; math.inf when u and v are disconnected."""
    if not (0 <= u < 2 * g.n and 0 <= v < 2 * g.n):
        raise ValueError("vertex id out of range")
    if u == v:
        return 0
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for w in frontier:
            dw = dist[w]
            for x in g.adj[w]:
                x = int(x)
                if x not in dist:
                    dist[x] = dw + 1
                    if x == v:
                        return dw + 1
                    nxt.append(x)
        frontier = nxt
    return math.inf


def ball(g: BipartiteRegularGraph, v: int, radius: int) -> set[int]:
    """All vertices within the given BFS radius of v (v included)."""
    out = {v}
    frontier = {v}
    for _ in range(radius):
        nxt = set()
        for w in frontier:
            nxt.update(int(x) for x in g.adj[w])
        nxt -= out
        out |= nxt
        frontier = nxt
    return out


def boundary(g: BipartiteRegularGraph, subset: Iterable[int]) -> set[int]:
    """Vertices outside the set with at least one neighbor inside it."""
    inside = set(subset)
    out: set[int] = set()
    for v in inside:
        out.update(int(x) for x in g.adj[v])
    return out - inside


def closed_neighborhood(g: BipartiteRegularGraph, subset: Iterable[int]) -> set[int]:
    inside = set(subset)
    return inside | boundary(g, inside)


class ExpansionReport:
    """Outcome of an exhaustive small-set expansion check."""

    __slots__ = ("mode", "holds", "min_ratio", "worst_set", "sets_checked",
                 "cap_per_side", "required_ratio")

    def __init__(self, mode, holds, min_ratio, worst_set, sets_checked,
                 cap_per_side, required_ratio):
        self.mode = mode
        self.holds = holds
        self.min_ratio = min_ratio
        self.worst_set = worst_set
        self.sets_checked = sets_checked
        self.cap_per_side = cap_per_side
        self.required_ratio = required_ratio

    def __repr__(self) -> str:
        return (
            f"ExpansionReport(mode={self.mode!r}, holds={self.holds}, "
            f"min_ratio={self.min_ratio}, sets_checked={self.sets_checked})"
        )


def check_expansion_smallsets(
    g: BipartiteRegularGraph,
    mode: str,
    cap_per_side: int | None = None,
) -> ExpansionReport:
    """Exhaustively check small-set expansion on a tiny graph.

    mode 'plus': every nonempty U with at most floor(n/(3 degree)) vertices
    per side must satisfy |U ∪ ∂U| >= (degree-1)/2 * |U|.
    mode 'boundary': per-side cap floor(n/(6 degree)), requirement
    |∂U| >= degree/7 * |U|.

    The quantifier domain is often empty at this scale (caps below 1); the
    report then says vacuously true with sets_checked = 0.  cap_per_side
    overrides the cap for diagnostic use.

    Cost is exponential in n; refuses graphs with more than 24 vertices.
    """
    if 2 * g.n > _EXPANSION_SIZE_CAP:
        raise ValueError(
            f"exhaustive expansion check is limited to {_EXPANSION_SIZE_CAP} "
            f"vertices, got {2 * g.n}"
        )
    if mode == "plus":
        default_cap = g.n // (3 * g.degree)
        required = (g.degree - 1) / 2.0
    elif mode == "boundary":
        default_cap = g.n // (6 * g.degree)
        required = g.degree / 7.0
    else:
        raise ValueError(f"unknown expansion mode {mode!r}")
    cap = default_cap if cap_per_side is None else int(cap_per_side)

    from itertools import combinations

    left = range(g.n)
    right = range(g.n, 2 * g.n)
    min_ratio = math.inf
    worst: tuple[int, ...] = ()
    checked = 0
    left_subsets = [
        ls for k in range(cap + 1) for ls in combinations(left, k)
    ]
    right_subsets = [
        rs for k in range(cap + 1) for rs in combinations(right, k)
    ]
    for ls in left_subsets:
        for rs in right_subsets:
            u = ls + rs
            if not u:
                continue
            checked += 1
            if mode == "plus":
                size = len(closed_neighborhood(g, u))
            else:
                size = len(boundary(g, u))
            ratio = size / len(u)
            if ratio < min_ratio:
                min_ratio = ratio
                worst = u
    holds = checked == 0 or min_ratio >= required
    return ExpansionReport(mode, holds, min_ratio, worst, checked, cap, required)


def _h2(x: float) -> float:
    """Binary entropy, log base 2, with H(0) = H(1) = 0."""
    if x < 0.0 or x > 1.0:
        raise ValueError(f"entropy argument {x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def bassalygo_condition(degree: int, a: float, b: float) -> bool:
    """Sufficient numeric condition for whp small-set expansion.

    Checks degree > (H(a) + H(ab)) / (H(a) - a*b*H(1/b)) with H binary
    entropy in base 2.  Requires 0 < a < 1, b >= 1, ab < 1 and a positive
    denominator (otherwise the criterion is inapplicable and an error is
    raised).  b = 1 is allowed: H(1) = 0 makes the denominator H(a).
    """
    if not (0.0 < a < 1.0):
        raise ValueError(f"need 0 < a < 1, got a={a}")
    if b < 1.0:
        raise ValueError(f"need b >= 1, got b={b}")
    if a * b >= 1.0:
        raise ValueError(f"need a*b < 1, got a*b={a * b}")
    den = _h2(a) - a * b * _h2(1.0 / b)
    if den <= 0.0:
        raise ValueError(
            f"denominator {den} is not positive; condition inapplicable"
        )
    return degree > (_h2(a) + _h2(a * b)) / den


def save_graph(g: BipartiteRegularGraph, path: str) -> None:
    """Write a graph to a line-oriented text file (one vertex per adj line)."""
    lines = ["# bipartite regular graph", f"n: {g.n}", f"delta: {g.degree}", "adj:"]
    for v in range(2 * g.n):
        lines.append(f"{v}: " + " ".join(str(int(u)) for u in g.adj[v]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_graph(path: str) -> BipartiteRegularGraph:
    """Inverse of save_graph.  Raises ValueError on malformed input."""
    n = degree = None
    rows: dict[int, list[int]] = {}
    in_adj = False
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("n:"):
                n = int(line.split(":")[1])
            elif line.startswith("delta:"):
                degree = int(line.split(":")[1])
            elif line.startswith("adj:"):
                in_adj = True
            elif in_adj:
                head, _, rest = line.partition(":")
                rows[int(head)] = [int(x) for x in rest.split()]
    if n is None or degree is None or len(rows) != 2 * n:
        raise ValueError(f"malformed graph file {path!r}")
    adj = np.array([rows[v] for v in range(2 * n)], dtype=np.int64)
    return BipartiteRegularGraph(n, degree, adj)
