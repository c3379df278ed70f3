"""Polymers: deviations from a biclique ground state, and their weights.

Fix a graph, a spin system, and a maximal biclique (S, T).  The ground
states for (S, T) put L-spins in S and R-spins in T; since the interaction
is 1 across S x T, such assignments factorize completely.  A polymer is a
connected set of vertices that deviate from this (L-vertices carrying spins
outside S, R-vertices outside T), together with those spins.  Connectivity
is taken in the distance-<=3 relation on the graph, and two polymers are
compatible when their vertex sets are more than distance 3 apart — so the
deviating part of any spin assignment splits uniquely into a set of
pairwise-compatible polymers.

The weight of a polymer (relative to the ground ensemble) is

    w(gamma) = [ prod_{u in V} lambda_{sigma(u)}
                 * prod_{internal edges} B_{sigma(u), sigma(v)}
                 * prod_{u in boundary(V)} F_u ]
               / [ (sum_S lambda)^{|V+ ∩ L|} * (sum_T lambda)^{|V+ ∩ R|} ]

where V+ is V plus its boundary and F_u sums, over the ground spins of u's
side, the activity times the interactions with u's deviating neighbors.
Configurations (sets of pairwise compatible polymers) multiply weights.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from bipolymer.bigraph import BipartiteRegularGraph, ball
from bipolymer.spin import Biclique, SpinSystem

__all__ = [
    "Polymer",
    "PolymerModel",
    "size_cap",
    "weight_decay_rate",
    "polymer_weight",
    "polymer_log_weight",
    "are_compatible",
    "enumerate_polymers_at",
    "configuration_weight",
    "analytic_weight_bound",
    "validate_configuration",
]

_DEFAULT_ENUM_BUDGET = 10_000_000
_EXACT_PRODUCT_MAX_SIZE = 8
_COMPAT_DIST = 3


@dataclass(frozen=True, order=True)
class Polymer:
    """A sorted tuple of deviating vertices with their spins, aligned."""

    vertices: tuple[int, ...]
    spins: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.spins):
            raise ValueError("one spin per vertex required")
        if not self.vertices:
            raise ValueError("a polymer has at least one vertex")
        if list(self.vertices) != sorted(set(self.vertices)):
            raise ValueError("vertices must be strictly sorted")

    @property
    def size(self) -> int:
        return len(self.vertices)

    def spin_map(self) -> dict[int, int]:
        return dict(zip(self.vertices, self.spins))


def size_cap(n: int, degree: int) -> int:
    """Largest admissible polymer size, floor(n / (6 degree))."""
    if n < 1 or degree < 1:
        raise ValueError("n and degree must be positive")
    return n // (6 * degree)


def weight_decay_rate(q: int, degree: int) -> float:
    """The decay exponent tau = 5 + 3 ln((q-1) degree^3).

    Under a positive polymer-condition margin every polymer weight is at
    most exp(-tau * size); see the weight-decay acceptance check.
    """
    return 5.0 + 3.0 * math.log((q - 1) * degree**3)


class PolymerModel:
    """All polymer machinery for one (graph, system, biclique) triple.

    `radius` sets the connectivity relation for polymer vertex sets
    (adjacent iff 1 <= dist <= radius).  The default 3 makes connectivity
    the exact complement of compatibility (dist > 3), which is what the
    decomposition identity behind the counting algorithm needs; radius=2 is
    exposed as a diagnostic variant only.
    """

    def __init__(
        self,
        g: BipartiteRegularGraph,
        system: SpinSystem,
        bc: Biclique,
        radius: int = 3,
    ):
        if radius not in (2, 3):
            raise ValueError("connectivity radius must be 2 or 3")
        s, t = bc.s, bc.t
        if max(s + t) >= system.q:
            raise ValueError("biclique spins out of range for this system")
        self.g = g
        self.system = system
        self.bc = bc
        self.radius = radius
        n, q = g.n, system.q
        s_set, t_set = set(s), set(t)
        self._dev_l = tuple(i for i in range(q) if i not in s_set)
        self._dev_r = tuple(j for j in range(q) if j not in t_set)
        self.sum_s = float(system.lam[list(s)].sum())
        self.sum_t = float(system.lam[list(t)].sum())
        self.log_sum_s = math.log(self.sum_s)
        self.log_sum_t = math.log(self.sum_t)
        self._ball_compat: dict[int, frozenset[int]] = {}
        self._rel_nbrs: dict[int, tuple[int, ...]] = {}

    # -- structure ---------------------------------------------------------

    def deviating_spins(self, v: int) -> tuple[int, ...]:
        return self._dev_l if v < self.g.n else self._dev_r

    def can_deviate(self, v: int) -> bool:
        return bool(self.deviating_spins(v))

    def compat_ball(self, v: int) -> frozenset[int]:
        """Vertices within distance 3 of v (compatibility exclusion zone)."""
        got = self._ball_compat.get(v)
        if got is None:
            got = frozenset(ball(self.g, v, _COMPAT_DIST))
            self._ball_compat[v] = got
        return got

    def relation_neighbors(self, v: int) -> tuple[int, ...]:
        """Deviation-capable vertices within the connectivity radius of v."""
        got = self._rel_nbrs.get(v)
        if got is None:
            near = ball(self.g, v, self.radius) - {v}
            got = tuple(sorted(u for u in near if self.can_deviate(u)))
            self._rel_nbrs[v] = got
        return got

    def is_connected_vertex_set(self, vertices: Sequence[int]) -> bool:
        vs = set(vertices)
        if not vs:
            return False
        seen = {next(iter(vs))}
        frontier = list(seen)
        while frontier:
            v = frontier.pop()
            for u in self.relation_neighbors(v):
                if u in vs and u not in seen:
                    seen.add(u)
                    frontier.append(u)
        return seen == vs

    def validate_polymer(self, p: Polymer) -> None:
        """Raise ValueError unless p satisfies the type invariants."""
        n = self.g.n
        for v, s in zip(p.vertices, p.spins):
            if not 0 <= v < 2 * n:
                raise ValueError(f"vertex {v} out of range")
            if s not in self.deviating_spins(v):
                raise ValueError(
                    f"spin {s} at vertex {v} is not a deviating spin here"
                )
        if not self.is_connected_vertex_set(p.vertices):
            raise ValueError("polymer vertex set is not connected")

    # -- weights -----------------------------------------------------------

    def boundary_factors(self, p: Polymer) -> dict[int, float]:
        """F_u for every boundary vertex u of the polymer."""
        g, lam, b = self.g, self.system.lam, self.system.b
        spin_of = p.spin_map()
        out: dict[int, float] = {}
        bnd: set[int] = set()
        for v in p.vertices:
            bnd.update(int(u) for u in g.adj[v])
        bnd -= set(p.vertices)
        for u in sorted(bnd):
            ground = self.bc.s if u < g.n else self.bc.t
            inside = [int(w) for w in g.adj[u] if int(w) in spin_of]
            total = 0.0
            for i in ground:
                term = lam[i]
                for w in inside:
                    term *= b[i, spin_of[w]]
                total += term
            out[u] = total
        return out

    def _weight_parts(self, p: Polymer):
        """(activity product, internal-edge product, boundary factors, nl, nr)."""
        g, lam, b = self.g, self.system.lam, self.system.b
        n = g.n
        spin_of = p.spin_map()
        for v, s in zip(p.vertices, p.spins):
            if s not in self.deviating_spins(v):
                raise ValueError(
                    f"spin {s} at vertex {v} is not a deviating spin here"
                )
        act = 1.0
        edge = 1.0
        for v, s in zip(p.vertices, p.spins):
            act *= float(lam[s])
            if v < n:
                for u in g.adj[v]:
                    u = int(u)
                    if u in spin_of:
                        edge *= float(b[s, spin_of[u]])
        factors = self.boundary_factors(p)
        vplus_l = sum(1 for v in p.vertices if v < n) + sum(
            1 for u in factors if u < n
        )
        vplus_r = (p.size + len(factors)) - vplus_l
        return act, edge, factors, vplus_l, vplus_r

    def log_weight(self, p: Polymer) -> float:
        """Natural log of the polymer weight; -inf for weight zero."""
        act, edge, factors, nl, nr = self._weight_parts(p)
        if edge == 0.0 or any(f == 0.0 for f in factors.values()):
            return -math.inf
        out = math.log(act) + math.log(edge)
        out += math.fsum(math.log(f) for f in factors.values())
        out -= nl * self.log_sum_s + nr * self.log_sum_t
        return out

    def weight(self, p: Polymer) -> float:
        """Polymer weight per the module formula.

        Exact product arithmetic for small polymers; log-space evaluation
        above size 8, where repeated boundary factors would otherwise
        underflow at large degree.
        """
        if p.size > _EXACT_PRODUCT_MAX_SIZE:
            lw = self.log_weight(p)
            return 0.0 if lw == -math.inf else math.exp(lw)
        act, edge, factors, nl, nr = self._weight_parts(p)
        num = act * edge
        for f in factors.values():
            num *= f
        return float(num / (self.sum_s**nl * self.sum_t**nr))

    def configuration_log_weight(self, config: Iterable[Polymer]) -> float:
        return math.fsum(self.log_weight(p) for p in config)

    def configuration_weight(self, config: Iterable[Polymer]) -> float:
        config = list(config)
        out = 1.0
        for p in config:
            out *= self.weight(p)
        return out

    # -- compatibility -----------------------------------------------------

    def compatible(self, p1: Polymer, p2: Polymer) -> bool:
        """True iff the vertex sets are more than distance 3 apart."""
        small, big = (p1, p2) if p1.size <= p2.size else (p2, p1)
        big_set = set(big.vertices)
        for v in small.vertices:
            if self.compat_ball(v) & big_set:
                return False
        return True

    # -- enumeration -------------------------------------------------------

    def _connected_sets(
        self, anchor: int, kmax: int, floor: int | None, budget: list[int]
    ):
        """Connectivity-relation-connected sets containing anchor, each once."""
        if kmax == 1:
            # singletons need no connectivity relation; skipping the
            # distance-3 ball BFS keeps size_cap=1 instances at large
            # degree (ball size ~degree^3) from paying for neighborhoods
            # they never use
            budget[0] -= 1
            if budget[0] < 0:
                raise RuntimeError(
                    "polymer enumeration exceeded its search budget; "
                    "lower kmax or raise the budget"
                )
            return [(anchor,)]

        def allowed(u: int) -> bool:
            return floor is None or u >= floor

        out: list[tuple[int, ...]] = []

        def rec(cur: set[int], cand: list[int], banned: set[int]):
            budget[0] -= 1
            if budget[0] < 0:
                raise RuntimeError(
                    "polymer enumeration exceeded its search budget; "
                    "lower kmax or raise the budget"
                )
            out.append(tuple(sorted(cur)))
            if len(cur) == kmax:
                return
            local_ban = set(banned)
            for u in cand:
                if u in local_ban:
                    continue
                grown = set(cand)
                grown.update(
                    w for w in self.relation_neighbors(u) if allowed(w)
                )
                grown -= cur
                grown.discard(u)
                grown -= local_ban
                rec(cur | {u}, sorted(grown), local_ban)
                local_ban.add(u)

        start_cand = [
            u for u in self.relation_neighbors(anchor) if allowed(u)
        ]
        rec({anchor}, start_cand, set())
        return out

    def enumerate_at(
        self,
        v: int,
        kmax: int,
        budget: int = _DEFAULT_ENUM_BUDGET,
        _floor: int | None = None,
    ) -> list[tuple[Polymer, float]]:
        """Every positive-weight polymer containing v with size <= kmax.

        Sorted by vertex set then spin tuple.  Empty when v cannot deviate
        or kmax < 1.
        """
        if kmax < 1 or not self.can_deviate(v):
            return []
        remaining = [budget]
        found: list[tuple[Polymer, float]] = []
        for vset in self._connected_sets(v, kmax, _floor, remaining):
            spin_choices = [self.deviating_spins(u) for u in vset]
            for spins in itertools.product(*spin_choices):
                remaining[0] -= 1
                if remaining[0] < 0:
                    raise RuntimeError(
                        "polymer enumeration exceeded its search budget; "
                        "lower kmax or raise the budget"
                    )
                p = Polymer(vset, spins)
                w = self.weight(p)
                if w > 0.0:
                    found.append((p, w))
        found.sort(key=lambda pw: (pw[0].vertices, pw[0].spins))
        return found

    def enumerate_all(
        self, kmax: int, budget: int = _DEFAULT_ENUM_BUDGET
    ) -> list[tuple[Polymer, float]]:
        """Every positive-weight polymer of size <= kmax, each exactly once.

        Runs the anchored enumeration per vertex restricted to vertex ids at
        least the anchor, so each polymer appears only from its minimum
        vertex.
        """
        found: list[tuple[Polymer, float]] = []
        for v in range(2 * self.g.n):
            found.extend(self.enumerate_at(v, kmax, budget, _floor=v))
        found.sort(key=lambda pw: (pw[0].vertices, pw[0].spins))
        return found


# -- functional wrappers (one-shot model construction is cheap) -------------


def polymer_weight(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    p: Polymer,
    radius: int = 3,
) -> float:
    return PolymerModel(g, system, bc, radius).weight(p)


def polymer_log_weight(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    p: Polymer,
    radius: int = 3,
) -> float:
    return PolymerModel(g, system, bc, radius).log_weight(p)


def are_compatible(g: BipartiteRegularGraph, p1: Polymer, p2: Polymer) -> bool:
    """True iff every cross pair of vertices is more than distance 3 apart."""
    big_set = set(p2.vertices)
    for v in p1.vertices:
        if ball(g, v, _COMPAT_DIST) & big_set:
            return False
    return True


def enumerate_polymers_at(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    v: int,
    kmax: int,
    budget: int = _DEFAULT_ENUM_BUDGET,
) -> list[tuple[Polymer, float]]:
    return PolymerModel(g, system, bc).enumerate_at(v, kmax, budget)


def configuration_weight(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    config: Iterable[Polymer],
) -> float:
    model = PolymerModel(g, system, bc)
    config = list(config)
    validate_configuration(model, config)
    return model.configuration_weight(config)


def validate_configuration(model: PolymerModel, config: Sequence[Polymer]) -> None:
    """Raise ValueError unless the polymers are pairwise compatible."""
    config = list(config)
    for p in config:
        model.validate_polymer(p)
    for i in range(len(config)):
        for j in range(i + 1, len(config)):
            if not model.compatible(config[i], config[j]):
                raise ValueError(
                    f"polymers {config[i]} and {config[j]} are incompatible"
                )


def analytic_weight_bound(model: PolymerModel, p: Polymer) -> float:
    """Closed-form upper bound on the weight of any valid polymer.

    (min lambda)^{-|V|} * (1 - (1-delta) min(lambda)/q)^{|boundary|}, with
    delta the largest sub-unit interaction entry.  Loose but certifiable;
    used as a sanity envelope by the acceptance checks.
    """
    from bipolymer.spin import second_interaction_level

    lam_min = float(model.system.lam.min())
    delta = second_interaction_level(model.system)
    n_boundary = len(model.boundary_factors(p))
    base = 1.0 - (1.0 - delta) * lam_min / model.system.q
    return lam_min ** (-p.size) * base**n_boundary
