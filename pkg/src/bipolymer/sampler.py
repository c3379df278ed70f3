"""Polymer Markov chain: sampling configurations, counting, spin assignments.

The chain state is a set of pairwise-compatible polymers.  One step:
pick a vertex v uniformly and flip a fair coin.  Heads proposes removing
the polymer covering v (no-op if none), accepted with probability
1/(C |gamma|).  Tails proposes inserting a polymer containing v, drawn
from q_v(gamma) = w(gamma) / (|gamma| C) with the complementary mass on
"propose nothing", accepted iff it is compatible with the current
configuration.  C = max(1, max_v sum_{gamma ni v} w/|gamma|) is a global
normalizer, so a size-k polymer is proposable from each of its k vertices
with the same density and the Metropolis-Hastings ratio collapses:
inserts always accept, removals accept at 1/(C |gamma|).  Detailed
balance against mu(Gamma) ~ prod w(gamma) is exact:
P(Gamma -> Gamma+gamma) = w/(4nC) and the reverse is 1/(4nC).

The chain is irreducible (any polymer can be removed, so the empty
configuration is reachable, and any compatible polymer can be inserted)
and aperiodic (the null proposal always holds mass at some vertex).

Every step consumes exactly two uniforms -- one for the (vertex, branch)
pick, one for the proposal/acceptance draw -- in both the numba kernel
and the pure-python step, so the two implementations follow identical
trajectories on a shared stream.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.special import logsumexp

from .bigraph import BipartiteRegularGraph
from .polymer import Polymer, PolymerModel, size_cap
from .spin import (
    Biclique,
    SpinSystem,
    enumerate_maximal_bicliques,
    ground_state_vector,
    polymer_condition_margin,
)

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency normally
    _HAVE_NUMBA = False

__all__ = [
    "ChainContext",
    "ChainState",
    "EstimateReport",
    "EstimateFailure",
    "default_kmax",
    "build_chain_context",
    "chain_step",
    "transition_matrix",
    "stationary_distribution",
    "sample_configuration",
    "sample_configurations",
    "estimate_z_st",
    "estimate_z_pmer",
    "sample_spin_assignment",
    "sample_spin_assignments",
]

_MASK_BITS = 64


def default_kmax(n: int, degree: int, eps: float) -> int:
    """Truncation size max(1, ceil(ln(2n/eps)/4)), capped by size_cap.

    Under the weight-decay condition the per-vertex tail mass beyond size
    k falls like e^(-4k), so this caps the truncation bias at eps/2.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    want = max(1, math.ceil(math.log(2 * n / eps) / 4.0))
    return min(want, size_cap(n, degree))


@dataclasses.dataclass
class ChainContext:
    """Frozen tables driving the chain for one (graph, system, biclique, kmax).

    Polymers are indexed 0..K-1.  Per-vertex proposal slices live in CSR
    arrays (`prop_start`, `prop_ids`, `prop_cum`), where `prop_cum` holds
    within-slice cumulative probabilities w/(|gamma| C).  `ball_masks`
    carry each polymer's distance-3 footprint as a bitmask over all 2n
    vertices (python ints, so any n works; `masks_u64` mirrors them for
    the numba kernel when 2n <= 64).
    """

    model: PolymerModel
    kmax: int
    avoid: frozenset[int]
    polymers: tuple[Polymer, ...]
    weights: np.ndarray
    sizes: np.ndarray
    ball_masks: tuple[int, ...]
    vertex_masks: tuple[int, ...]
    c_norm: float
    prop_start: np.ndarray
    prop_ids: np.ndarray
    prop_cum: np.ndarray
    cover_start: np.ndarray
    cover_ids: np.ndarray
    certified: bool

    @property
    def n_vertices(self) -> int:
        return 2 * self.model.g.n

    def kernel_ready(self) -> bool:
        return _HAVE_NUMBA and self.n_vertices <= _MASK_BITS

    def masks_u64(self) -> tuple[np.ndarray, np.ndarray]:
        ball = np.array(self.ball_masks, dtype=np.uint64)
        vert = np.array(self.vertex_masks, dtype=np.uint64)
        return ball, vert

    def index_of(self, config) -> frozenset[int]:
        lookup = {p: i for i, p in enumerate(self.polymers)}
        return frozenset(lookup[p] for p in config)


@dataclasses.dataclass
class ChainState:
    """Mutable chain state: coverage index plus the union vertex bitmask."""

    cov: np.ndarray            # int32 per vertex: polymer id or -1
    vertex_mask: int           # union of the present polymers' vertex bits
    step_count: int = 0

    def configuration(self, ctx: ChainContext) -> tuple[Polymer, ...]:
        ids = sorted({int(k) for k in self.cov if k >= 0})
        return tuple(ctx.polymers[k] for k in ids)


class EstimateFailure(RuntimeError):
    """A telescoping ratio collapsed below 1/2.

    The weight-decay precondition is likely violated.  Carries the
    partial report (with the offending ratio) as .report.
    """

    def __init__(self, message: str, report: "EstimateReport"):
        super().__init__(message)
        self.report = report


@dataclasses.dataclass(frozen=True)
class EstimateReport:
    """One telescoping estimate of Z^{S,T} and everything that shaped it."""

    biclique: Biclique
    z_st_estimate: float
    eps: float
    fail_prob: float
    samples_used: int
    seed: int
    per_vertex_ratios: tuple[float, ...]
    kmax: int
    steps_per_sample: int
    certified: bool


def build_chain_context(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    kmax: int,
    avoid: frozenset[int] = frozenset(),
    require_certified: bool = False,
) -> ChainContext:
    """Enumerate the polymer universe and precompute all chain tables.

    `avoid` drops every polymer touching the given vertices (the
    telescoping estimator's restricted models).  Certification means
    polymer_condition_margin >= 0; tiny test instances are uncertified
    diagnostics, which is the default-permitted mode.
    """
    certified = polymer_condition_margin(system, g.degree) >= 0
    if require_certified and not certified:
        raise ValueError(
            "polymer condition margin is negative; pass require_certified=False "
            "to run in uncertified diagnostic mode"
        )
    model = PolymerModel(g, system, bc)
    universe = [
        (p, w)
        for p, w in (model.enumerate_all(kmax) if kmax >= 1 else [])
        if not (set(p.vertices) & avoid)
    ]
    polymers = tuple(p for p, _ in universe)
    weights = np.array([w for _, w in universe], dtype=float)
    sizes = np.array([p.size for p in polymers], dtype=np.int64)
    nv = 2 * g.n

    ball_masks = []
    vertex_masks = []
    for p in polymers:
        bmask = 0
        for v in p.vertices:
            for u in model.compat_ball(v):
                bmask |= 1 << u
        vmask = 0
        for v in p.vertices:
            vmask |= 1 << v
        ball_masks.append(bmask)
        vertex_masks.append(vmask)

    by_vertex: list[list[int]] = [[] for _ in range(nv)]
    for k, p in enumerate(polymers):
        for v in p.vertices:
            by_vertex[v].append(k)

    per_vertex_mass = np.zeros(nv)
    for v in range(nv):
        per_vertex_mass[v] = math.fsum(
            weights[k] / sizes[k] for k in by_vertex[v]
        )
    c_norm = max(1.0, float(per_vertex_mass.max()) if nv else 1.0)

    prop_start = np.zeros(nv + 1, dtype=np.int64)
    prop_ids = []
    prop_cum = []
    for v in range(nv):
        prop_start[v + 1] = prop_start[v] + len(by_vertex[v])
        acc = 0.0
        for k in by_vertex[v]:
            acc += weights[k] / (sizes[k] * c_norm)
            prop_ids.append(k)
            prop_cum.append(acc)

    cover_start = np.zeros(len(polymers) + 1, dtype=np.int64)
    cover_ids = []
    for k, p in enumerate(polymers):
        cover_start[k + 1] = cover_start[k] + p.size
        cover_ids.extend(p.vertices)

    return ChainContext(
        model=model,
        kmax=kmax,
        avoid=avoid,
        polymers=polymers,
        weights=weights,
        sizes=sizes,
        ball_masks=tuple(ball_masks),
        vertex_masks=tuple(vertex_masks),
        c_norm=c_norm,
        prop_start=prop_start,
        prop_ids=np.array(prop_ids, dtype=np.int64),
        prop_cum=np.array(prop_cum, dtype=float),
        cover_start=cover_start,
        cover_ids=np.array(cover_ids, dtype=np.int64),
        certified=certified,
    )


def empty_state(ctx: ChainContext) -> ChainState:
    return ChainState(cov=np.full(ctx.n_vertices, -1, dtype=np.int32), vertex_mask=0)


def chain_step(
    state: ChainState,
    ctx: ChainContext,
    rng: np.random.Generator,
    _uniforms: tuple[float, float] | None = None,
) -> ChainState:
    """One reversible transition, mutating and returning `state`.

    Consumes exactly two uniforms whether or not the move is a no-op, so
    trajectories are reproducible across implementations.
    """
    if _uniforms is None:
        u1, u2 = rng.random(), rng.random()
    else:
        u1, u2 = _uniforms
    nv = ctx.n_vertices
    idx = int(u1 * 2 * nv)
    v, branch = idx >> 1, idx & 1
    if branch == 0:
        lo, hi = int(ctx.prop_start[v]), int(ctx.prop_start[v + 1])
        if lo < hi and u2 < ctx.prop_cum[hi - 1]:
            a, b = lo, hi - 1
            while a < b:
                mid = (a + b) // 2
                if ctx.prop_cum[mid] > u2:
                    b = mid
                else:
                    a = mid + 1
            k = int(ctx.prop_ids[a])
            if ctx.ball_masks[k] & state.vertex_mask == 0:
                for ci in range(int(ctx.cover_start[k]), int(ctx.cover_start[k + 1])):
                    state.cov[ctx.cover_ids[ci]] = k
                state.vertex_mask |= ctx.vertex_masks[k]
    else:
        k = int(state.cov[v])
        if k >= 0 and u2 < 1.0 / (ctx.c_norm * ctx.sizes[k]):
            for ci in range(int(ctx.cover_start[k]), int(ctx.cover_start[k + 1])):
                state.cov[ctx.cover_ids[ci]] = -1
            state.vertex_mask &= ~ctx.vertex_masks[k]
    state.step_count += 1
    return state


if _HAVE_NUMBA:

    @njit(cache=True)
    def _kernel(
        u,
        cov,
        mask,
        prop_start,
        prop_ids,
        prop_cum,
        sizes,
        ball_masks,
        vertex_masks,
        cover_start,
        cover_ids,
        c_norm,
    ):  # pragma: no cover - exercised via the dispatcher
        nv = cov.shape[0]
        four_n = 2 * nv
        for t in range(u.shape[0]):
            idx = int(u[t, 0] * four_n)
            v = idx >> 1
            if idx & 1 == 0:
                lo = prop_start[v]
                hi = prop_start[v + 1]
                if lo == hi:
                    continue
                u2 = u[t, 1]
                if u2 >= prop_cum[hi - 1]:
                    continue
                a = lo
                b = hi - 1
                while a < b:
                    mid = (a + b) // 2
                    if prop_cum[mid] > u2:
                        b = mid
                    else:
                        a = mid + 1
                k = prop_ids[a]
                if ball_masks[k] & mask != np.uint64(0):
                    continue
                for ci in range(cover_start[k], cover_start[k + 1]):
                    cov[cover_ids[ci]] = k
                mask |= vertex_masks[k]
            else:
                k = cov[v]
                if k < 0:
                    continue
                if u[t, 1] < 1.0 / (c_norm * sizes[k]):
                    for ci in range(cover_start[k], cover_start[k + 1]):
                        cov[cover_ids[ci]] = -1
                    mask &= ~vertex_masks[k]
        return mask


def _run_chain(ctx: ChainContext, n_steps: int, rng: np.random.Generator) -> ChainState:
    """Run a fresh chain from the empty configuration for n_steps."""
    state = empty_state(ctx)
    if n_steps == 0 or len(ctx.polymers) == 0:
        state.step_count = n_steps
        return state
    if ctx.kernel_ready():
        u = rng.random((n_steps, 2))
        ball, vert = ctx.masks_u64()
        mask = _kernel(
            u,
            state.cov,
            np.uint64(state.vertex_mask),
            ctx.prop_start,
            ctx.prop_ids,
            ctx.prop_cum,
            ctx.sizes,
            ball,
            vert,
            ctx.cover_start,
            ctx.cover_ids,
            ctx.c_norm,
        )
        state.vertex_mask = int(mask)
        state.step_count = n_steps
    else:
        for _ in range(n_steps):
            chain_step(state, ctx, rng)
    return state


def _check_config_size(ctx: ChainContext, state: ChainState) -> None:
    n, degree = ctx.model.g.n, ctx.model.g.degree
    covered = sum(1 for k in state.cov if k >= 0)
    if covered * degree > 12 * n:
        raise RuntimeError(
            f"configuration size invariant violated: {covered} covered vertices "
            f"exceeds 12n/degree = {12 * n / degree:.2f}"
        )


def _mixing_steps(n: int, eps: float, c_mixing: float) -> int:
    return math.ceil(c_mixing * n * math.log(max(n, 2) / eps))


def sample_configuration(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    eps: float,
    seed: int,
    kmax: int | None = None,
    c_mixing: float = 100.0,
    steps: int | None = None,
    require_certified: bool = False,
) -> tuple[Polymer, ...]:
    """One approximate draw from mu^{S,T} after T = ceil(C n ln(n/eps)) steps."""
    if kmax is None:
        kmax = default_kmax(g.n, g.degree, eps)
    ctx = build_chain_context(g, system, bc, kmax, require_certified=require_certified)
    n_steps = steps if steps is not None else _mixing_steps(g.n, eps, c_mixing)
    rng = np.random.default_rng(seed)
    state = _run_chain(ctx, n_steps, rng)
    _check_config_size(ctx, state)
    return state.configuration(ctx)


def sample_configurations(
    ctx: ChainContext,
    n_samples: int,
    n_steps: int,
    rng: np.random.Generator,
) -> list[tuple[Polymer, ...]]:
    """Independent chain draws sharing one context (fresh chain each)."""
    out = []
    for _ in range(n_samples):
        state = _run_chain(ctx, n_steps, rng)
        _check_config_size(ctx, state)
        out.append(state.configuration(ctx))
    return out


def transition_matrix(
    ctx: ChainContext, configs: list[tuple[Polymer, ...]]
) -> np.ndarray:
    """Exact one-step transition matrix of chain_step over `configs`.

    Integrates the two uniforms analytically, using the same proposal
    tables the samplers use, so detailed-balance checks certify the
    actual running chain.
    """
    lookup = {p: i for i, p in enumerate(ctx.polymers)}
    key_of = {frozenset(lookup[p] for p in cfg): i for i, cfg in enumerate(configs)}
    nv = ctx.n_vertices
    m = len(configs)
    big_p = np.zeros((m, m))
    for xi, cfg in enumerate(configs):
        ids = frozenset(lookup[p] for p in cfg)
        vmask = 0
        cov = {}
        for k in ids:
            vmask |= ctx.vertex_masks[k]
            for v in ctx.polymers[k].vertices:
                cov[v] = k
        stay = 0.0
        per_pick = 1.0 / (2 * nv)
        for v in range(nv):
            # removal branch
            k = cov.get(v)
            if k is None:
                stay += per_pick
            else:
                p_acc = 1.0 / (ctx.c_norm * ctx.sizes[k])
                big_p[xi, key_of[ids - {k}]] += per_pick * p_acc
                stay += per_pick * (1.0 - p_acc)
            # insertion branch
            lo, hi = int(ctx.prop_start[v]), int(ctx.prop_start[v + 1])
            total = float(ctx.prop_cum[hi - 1]) if hi > lo else 0.0
            stay += per_pick * (1.0 - total)
            prev = 0.0
            for j in range(lo, hi):
                k2 = int(ctx.prop_ids[j])
                pk = float(ctx.prop_cum[j]) - prev
                prev = float(ctx.prop_cum[j])
                if ctx.ball_masks[k2] & vmask == 0:
                    target = key_of.get(ids | {k2})
                    if target is None:
                        raise ValueError(
                            "config list does not close under insertion; "
                            "pass the full enumerate_configurations output"
                        )
                    big_p[xi, target] += per_pick * pk
                else:
                    stay += per_pick * pk
        big_p[xi, xi] += stay
    return big_p


def stationary_distribution(big_p: np.ndarray) -> np.ndarray:
    """Solve pi P = pi, sum(pi) = 1 for an irreducible stochastic matrix."""
    m = big_p.shape[0]
    a = (np.eye(m) - big_p + np.ones((m, m))).T
    return np.linalg.solve(a, np.ones(m))


def estimate_z_st(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bc: Biclique,
    eps: float,
    fail_prob: float,
    seed: int,
    kmax: int | None = None,
    c_samples: float = 4.0,
    c_mixing: float = 100.0,
    require_certified: bool = False,
) -> EstimateReport:
    """Telescoping-product estimate of Z^{S,T}.

    Vertex v_i in the natural order defines the i-th restriction (no
    polymer may touch v_1..v_i); the ratio rho_i = Z_i/Z_{i-1} is the
    probability under the (i-1)-th restricted measure that v_i is
    uncovered, estimated by the empirical mean of m chain samples with
    m = ceil(c_samples ln(2n/fail_prob)/eps^2).  Stages whose restricted
    universe has no polymer at v_i are exactly 1 and skipped.  The output
    is prod 1/rho_hat >= 1.  Any rho_hat <= 1/2 aborts with
    EstimateFailure: weights are then nowhere near the decay regime the
    estimator's variance bound assumes.
    """
    if not (0 < eps < 1) or not (0 < fail_prob < 1):
        raise ValueError("eps and fail_prob must lie in (0, 1)")
    if kmax is None:
        kmax = default_kmax(g.n, g.degree, eps)
    nv = 2 * g.n
    certified = polymer_condition_margin(system, g.degree) >= 0
    if kmax < 1:
        return EstimateReport(
            biclique=bc,
            z_st_estimate=1.0,
            eps=eps,
            fail_prob=fail_prob,
            samples_used=0,
            seed=seed,
            per_vertex_ratios=tuple([1.0] * nv),
            kmax=kmax,
            steps_per_sample=0,
            certified=certified,
        )

    m = math.ceil(c_samples * math.log(2 * g.n / fail_prob) / eps**2)
    eps_chain = eps / (8.0 * g.n)
    n_steps = _mixing_steps(g.n, eps_chain, c_mixing)
    children = np.random.SeedSequence(seed).spawn(nv)

    ratios = []
    samples_used = 0
    log_z = 0.0
    avoid: set[int] = set()
    for i in range(nv):
        v = i
        ctx = build_chain_context(
            g, system, bc, kmax, frozenset(avoid), require_certified
        )
        hosts = any(v in p.vertices for p in ctx.polymers)
        if not hosts:
            ratios.append(1.0)
            avoid.add(v)
            continue
        rng = np.random.default_rng(children[i])
        hits = 0
        for _ in range(m):
            state = _run_chain(ctx, n_steps, rng)
            if state.cov[v] < 0:
                hits += 1
        rho = hits / m
        samples_used += m
        ratios.append(rho)
        if rho <= 0.5:
            report = EstimateReport(
                biclique=bc,
                z_st_estimate=math.nan,
                eps=eps,
                fail_prob=fail_prob,
                samples_used=samples_used,
                seed=seed,
                per_vertex_ratios=tuple(ratios),
                kmax=kmax,
                steps_per_sample=n_steps,
                certified=certified,
            )
            raise EstimateFailure(
                f"telescoping ratio at vertex {v} collapsed to {rho:.3f} <= 0.5; "
                "the weight-decay precondition looks violated",
                report,
            )
        log_z -= math.log(rho)
        avoid.add(v)

    return EstimateReport(
        biclique=bc,
        z_st_estimate=math.exp(log_z),
        eps=eps,
        fail_prob=fail_prob,
        samples_used=samples_used,
        seed=seed,
        per_vertex_ratios=tuple(ratios),
        kmax=kmax,
        steps_per_sample=n_steps,
        certified=certified,
    )


def _biclique_log_terms(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bicliques: list[Biclique],
    reports: list[EstimateReport],
) -> np.ndarray:
    n = g.n
    terms = []
    for bc, rep in zip(bicliques, reports):
        lam = system.lam
        log_s = math.log(float(lam[list(bc.s)].sum()))
        log_t = math.log(float(lam[list(bc.t)].sum()))
        terms.append(n * (log_s + log_t) + math.log(rep.z_st_estimate))
    return np.array(terms)


def estimate_z_pmer(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bicliques: list[Biclique],
    eps: float,
    fail_prob: float,
    seed: int,
    kmax: int | None = None,
    c_samples: float = 4.0,
    c_mixing: float = 100.0,
) -> float:
    """Estimate the biclique-resolved partition sum, in log space.

    Each biclique gets an independent estimate at failure budget
    fail_prob/#bicliques; since the sum has positive terms, its relative
    error is at most the worst per-term relative error (union bound).
    """
    if not bicliques:
        raise ValueError("need at least one biclique")
    children = np.random.SeedSequence(seed).spawn(len(bicliques))
    reports = [
        estimate_z_st(
            g,
            system,
            bc,
            eps,
            fail_prob / len(bicliques),
            int(child.generate_state(1)[0]),
            kmax=kmax,
            c_samples=c_samples,
            c_mixing=c_mixing,
        )
        for bc, child in zip(bicliques, children)
    ]
    terms = _biclique_log_terms(g, system, bicliques, reports)
    return float(math.exp(logsumexp(terms)))


def sample_spin_assignments(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bicliques: list[Biclique],
    eps: float,
    seed: int,
    n_samples: int = 1,
    kmax: int | None = None,
    c_mixing: float = 100.0,
) -> list[np.ndarray]:
    """Draw spin assignments from the biclique-mixture law.

    A biclique is selected with probability proportional to
    (sum_S lam)^n (sum_T lam)^n Zhat^{S,T}; a configuration is drawn from
    its polymer measure; polymer vertices take their polymer spins and
    every free vertex samples its side's ground-state law independently.
    The Z^{S,T} estimates are computed once and shared across draws.
    """
    if not bicliques:
        raise ValueError("need at least one biclique")
    if kmax is None:
        kmax = default_kmax(g.n, g.degree, eps)
    n = g.n
    ss = np.random.SeedSequence(seed)
    est_children = ss.spawn(len(bicliques))
    reports = [
        estimate_z_st(
            g,
            system,
            bc,
            eps,
            eps,  # estimation failure folded into the eps TV budget
            int(child.generate_state(1)[0]),
            kmax=kmax,
            c_mixing=c_mixing,
        )
        for bc, child in zip(bicliques, est_children)
    ]
    terms = _biclique_log_terms(g, system, bicliques, reports)
    probs = np.exp(terms - logsumexp(terms))
    probs = probs / probs.sum()

    contexts: dict[int, ChainContext] = {}
    grounds: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    n_steps = _mixing_steps(n, eps, c_mixing)
    rng = np.random.default_rng(ss.spawn(1)[0])
    out = []
    for _ in range(n_samples):
        bi = int(rng.choice(len(bicliques), p=probs))
        if bi not in contexts:
            contexts[bi] = build_chain_context(g, system, bicliques[bi], kmax)
            grounds[bi] = (
                ground_state_vector(system, bicliques[bi].s),
                ground_state_vector(system, bicliques[bi].t),
            )
        ctx = contexts[bi]
        state = _run_chain(ctx, n_steps, rng)
        _check_config_size(ctx, state)
        g_s, g_t = grounds[bi]
        sigma = np.empty(2 * n, dtype=np.int64)
        left = rng.choice(system.q, size=n, p=g_s)
        right = rng.choice(system.q, size=n, p=g_t)
        sigma[:n] = left
        sigma[n:] = right
        spin_maps: dict[int, dict[int, int]] = {}
        for v in range(2 * n):
            k = int(state.cov[v])
            if k >= 0:
                sm = spin_maps.get(k)
                if sm is None:
                    sm = ctx.polymers[k].spin_map()
                    spin_maps[k] = sm
                sigma[v] = sm[v]
        out.append(sigma)
    return out


def sample_spin_assignment(
    g: BipartiteRegularGraph,
    system: SpinSystem,
    bicliques: list[Biclique] | None = None,
    eps: float = 0.05,
    seed: int = 0,
    kmax: int | None = None,
    c_mixing: float = 100.0,
) -> np.ndarray:
    """One approximate draw from the biclique-mixture spin law."""
    if bicliques is None:
        bicliques = enumerate_maximal_bicliques(system)
    return sample_spin_assignments(
        g, system, bicliques, eps, seed, n_samples=1, kmax=kmax, c_mixing=c_mixing
    )[0]
