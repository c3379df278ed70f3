"""Spin systems and their biclique structure.

A spin system on q spins is a symmetric interaction matrix B (q x q, entries
in [0, 1], largest entry equal to 1) together with a vector of vertex
activities lambda (entries in (0, 1], largest entry equal to 1).  The weight
of an assignment sigma on a graph G is

    w_G(sigma) = prod_v lambda_{sigma(v)} * prod_{(u,v) in E} B_{sigma(u), sigma(v)}

and the partition function Z_G is the sum of w_G over all assignments.

The dominant "phases" of such a system on dense regular bipartite graphs are
indexed by maximal bicliques of B: pairs (S, T) of spin subsets with
B_{i j} = 1 for every i in S, j in T, maximal under coordinatewise inclusion.
This module knows how to enumerate those, how to build the ground-state
distributions supported on them, and how to evaluate the degree condition
under which the polymer machinery in the rest of the package is guaranteed
to work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SpinSystem",
    "Biclique",
    "colorings",
    "hardcore",
    "is_biclique",
    "enumerate_maximal_bicliques",
    "ground_state_vector",
    "second_interaction_level",
    "polymer_condition_margin",
    "save_system",
    "load_system",
]

_ATOL = 1e-12
_MAX_Q_FOR_ENUMERATION = 20


class SpinSystem:
    """Symmetric interaction matrix plus activity vector, both normalized.

    Raises ValueError if B is not symmetric with entries in [0, 1] and max
    entry 1, or if any activity lies outside (0, 1] or the largest activity
    is not 1.
    """

    __slots__ = ("b", "lam")

    def __init__(self, b: np.ndarray, lam: np.ndarray):
        b = np.asarray(b, dtype=float)
        lam = np.asarray(lam, dtype=float)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"interaction matrix must be square, got shape {b.shape}")
        q = b.shape[0]
        if q < 2:
            raise ValueError("need at least two spins")
        if lam.shape != (q,):
            raise ValueError(
                f"activity vector has shape {lam.shape}, expected ({q},)"
            )
        if not np.allclose(b, b.T, rtol=0.0, atol=_ATOL):
            raise ValueError("interaction matrix must be symmetric")
        if b.min() < -_ATOL or b.max() > 1.0 + _ATOL:
            raise ValueError("interaction entries must lie in [0, 1]")
        if abs(b.max() - 1.0) > _ATOL:
            raise ValueError("largest interaction entry must equal 1")
        if lam.min() <= 0.0 or lam.max() > 1.0 + _ATOL:
            raise ValueError("activities must lie in (0, 1]")
        if abs(lam.max() - 1.0) > _ATOL:
            raise ValueError("largest activity must equal 1")
        self.b = np.clip(b, 0.0, 1.0)
        self.lam = np.clip(lam, None, 1.0)
        self.b.setflags(write=False)
        self.lam.setflags(write=False)

    @property
    def q(self) -> int:
        return self.b.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpinSystem):
            return NotImplemented
        return np.array_equal(self.b, other.b) and np.array_equal(self.lam, other.lam)

    def __hash__(self) -> int:
        return hash((self.b.tobytes(), self.lam.tobytes()))

    def __repr__(self) -> str:
        return f"SpinSystem(q={self.q})"


@dataclass(frozen=True, order=True)
class Biclique:
    """A pair (S, T) of spin subsets with B_{i j} = 1 on S x T.

    Spins are stored as sorted tuples.  Maximality (neither side can be
    extended) is a property of specific instances, not of the type.
    """

    s: tuple[int, ...]
    t: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "s", tuple(sorted(self.s)))
        object.__setattr__(self, "t", tuple(sorted(self.t)))
        if not self.s or not self.t:
            raise ValueError("both sides of a biclique must be nonempty")


def colorings(q: int) -> SpinSystem:
    """Proper q-colorings: B = J - I with all activities 1."""
    if q < 2:
        raise ValueError("colorings need q >= 2")
    b = np.ones((q, q)) - np.eye(q)
    return SpinSystem(b, np.ones(q))


def hardcore(lam: float) -> SpinSystem:
    """Hard-core model at fugacity lam: spins {0 = out, 1 = in}.

    B_{11} = 0 forbids adjacent occupied vertices; activity of spin 1 is lam.
    Fugacities above 1 are outside the normalized class and are rejected.
    """
    if not (0.0 < lam <= 1.0):
        raise ValueError(f"fugacity must lie in (0, 1], got {lam}")
    b = np.array([[1.0, 1.0], [1.0, 0.0]])
    return SpinSystem(b, np.array([1.0, lam]))


def is_biclique(system: SpinSystem, s: Iterable[int], t: Iterable[int]) -> bool:
    """True when B_{i j} = 1 for every i in s, j in t (both nonempty)."""
    s = sorted(set(s))
    t = sorted(set(t))
    if not s or not t:
        return False
    if min(s) < 0 or max(s) >= system.q or min(t) < 0 or max(t) >= system.q:
        raise ValueError("spin index out of range")
    return bool(np.all(system.b[np.ix_(s, t)] == 1.0))


def _closure_t(one_rows: list[int], s_mask: int, q: int) -> int:
    """Largest T for a given S: spins j with B_{i j} = 1 for all i in S."""
    t_mask = (1 << q) - 1
    for i in range(q):
        if s_mask >> i & 1:
            t_mask &= one_rows[i]
    return t_mask


def enumerate_maximal_bicliques(system: SpinSystem) -> list[Biclique]:
    """All maximal bicliques of the interaction matrix, sorted.

    Walks every subset of spins as a candidate S, closes it to the largest
    compatible T and re-closes S, then deduplicates.  Exponential in q, so
    guarded at q <= 20; every model this package targets has single-digit q.
    """
    q = system.q
    if q > _MAX_Q_FOR_ENUMERATION:
        raise ValueError(
            f"biclique enumeration is exponential in q; refusing q={q} > "
            f"{_MAX_Q_FOR_ENUMERATION}"
        )
    one_rows = [
        sum(1 << j for j in range(q) if system.b[i, j] == 1.0) for i in range(q)
    ]
    seen: set[tuple[int, int]] = set()
    for s_mask in range(1, 1 << q):
        t_mask = _closure_t(one_rows, s_mask, q)
        if t_mask == 0:
            continue
        s_closed = _closure_t(one_rows, t_mask, q)
        # (s_closed, t_mask) is now a maximal pair containing (s_mask, t_mask)
        seen.add((s_closed, t_mask))
    out = []
    for s_mask, t_mask in seen:
        s = tuple(i for i in range(q) if s_mask >> i & 1)
        t = tuple(j for j in range(q) if t_mask >> j & 1)
        out.append(Biclique(s, t))
    out.sort()
    return out


def ground_state_vector(system: SpinSystem, spins: Sequence[int]) -> np.ndarray:
    """Distribution g_S: proportional to lambda on S, zero elsewhere."""
    spins = sorted(set(spins))
    if not spins:
        raise ValueError("ground state needs a nonempty spin set")
    if min(spins) < 0 or max(spins) >= system.q:
        raise ValueError("spin index out of range")
    g = np.zeros(system.q)
    g[spins] = system.lam[spins]
    return g / g.sum()


def second_interaction_level(system: SpinSystem) -> float:
    """Largest interaction entry strictly below 1 (the gap parameter delta).

    For hard interactions (every entry 0 or 1) this is 0.  A matrix whose
    entries are all equal to 1 has no phase structure at all and is rejected.
    """
    below = system.b[system.b < 1.0]
    if below.size == 0:
        raise ValueError("all interaction entries equal 1; no gap to measure")
    return float(below.max())


def polymer_condition_margin(system: SpinSystem, degree: int) -> float:
    """Slack in the degree condition driving every guarantee in the package.

    Returns
        degree * (1 - delta) * lambda_min
            - 7 q (5 + ln((q - 1) degree^3 / lambda_min)),

    with delta the largest sub-unit interaction entry.  Positive margin means
    the polymer expansion for this system on degree-regular bipartite graphs
    is in the provably convergent regime; callers that need the guarantee
    should check margin > 0 rather than re-deriving the inequality.
    """
    if degree < 2:
        raise ValueError("degree must be at least 2")
    q = system.q
    delta = second_interaction_level(system)
    lam_min = float(system.lam.min())
    return degree * (1.0 - delta) * lam_min - 7.0 * q * (
        5.0 + math.log((q - 1) * degree**3 / lam_min)
    )


def save_system(system: SpinSystem, path: str) -> None:
    """Write a system to a small line-oriented text file."""
    q = system.q
    lines = ["# spin system", f"q: {q}"]
    lines.append("B: " + " ".join(repr(float(x)) for x in system.b.ravel()))
    lines.append("lambda: " + " ".join(repr(float(x)) for x in system.lam))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_system(path: str) -> SpinSystem:
    """Inverse of save_system.  Raises ValueError on malformed input."""
    fields: dict[str, str] = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
    try:
        q = int(fields["q"])
        b = np.array([float(x) for x in fields["B"].split()]).reshape(q, q)
        lam = np.array([float(x) for x in fields["lambda"].split()])
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed system file {path!r}: {exc}") from exc
    return SpinSystem(b, lam)
