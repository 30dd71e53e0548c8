"""Alignment cost functions and configuration predicates for agent swarms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedDigraph
from .manifolds import (
    CIRCLE,
    GRASSMANN,
    ManifoldDescriptor,
    ManifoldPoint,
    random_point,
)
from .means import Centroid, MeanResult, centroid, iam

__all__ = [
    "DEFAULT_PREDICATE_TOL",
    "SwarmState",
    "cost_PL",
    "cost_P",
    "swarm_centroid",
    "sync_error",
    "is_synchronized",
    "is_consensus",
    "is_anti_consensus",
    "is_balanced_config",
]

DEFAULT_PREDICATE_TOL = 1e-6


@dataclass(frozen=True)
class SwarmState:
    """Positions of N agents on one manifold, plus optional per-agent
    estimator arrays living in the ambient space."""

    descriptor: ManifoldDescriptor
    positions: tuple[ManifoldPoint, ...]
    estimators: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        positions = tuple(self.positions)
        if not positions:
            raise ValueError("a swarm needs at least one agent")
        if any(p.descriptor != self.descriptor for p in positions):
            raise ValueError("all positions must share the swarm's descriptor")
        object.__setattr__(self, "positions", positions)
        if self.estimators is not None:
            est = []
            for x in self.estimators:
                x = np.array(x, dtype=float)
                if x.shape != self.descriptor.shape:
                    raise ValueError(
                        f"estimator shape {x.shape} does not match "
                        f"manifold shape {self.descriptor.shape}"
                    )
                x.flags.writeable = False
                est.append(x)
            if len(est) != len(positions):
                raise ValueError("need one estimator per agent")
            object.__setattr__(self, "estimators", tuple(est))

    @property
    def n_agents(self) -> int:
        return len(self.positions)

    def positions_array(self) -> np.ndarray:
        """Stacked native-shape positions, shape (N, *manifold shape)."""
        return np.stack([p.data for p in self.positions])

    def estimators_array(self) -> np.ndarray | None:
        if self.estimators is None:
            return None
        return np.stack(self.estimators)

    @staticmethod
    def from_arrays(
        desc: ManifoldDescriptor,
        positions: np.ndarray,
        estimators: np.ndarray | None = None,
    ) -> "SwarmState":
        pts = tuple(ManifoldPoint(desc, y) for y in positions)
        est = None if estimators is None else tuple(estimators)
        return SwarmState(desc, pts, est)

    @staticmethod
    def random(desc: ManifoldDescriptor, n_agents: int, seed) -> "SwarmState":
        rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
        pts = tuple(random_point(desc, rng) for _ in range(n_agents))
        return SwarmState(desc, pts)


def _flat(s: SwarmState) -> np.ndarray:
    return s.positions_array().reshape(s.n_agents, -1)


def cost_PL(g: WeightedDigraph, s: SwarmState) -> float:
    """Graph-weighted alignment cost ``sum_jk a_jk <y_j, y_k> / (2 N^2)``.

    Its maximizers over weakly connected graphs are the synchronized states;
    for undirected graphs it equals a quadratic form on the graph Laplacian
    up to a constant.
    """
    n = s.n_agents
    if g.n_vertices != n:
        raise ValueError(f"graph has {g.n_vertices} vertices but swarm has {n} agents")
    e = _flat(s)
    gram = e @ e.T
    return float(np.sum(g.weights * gram) / (2.0 * n * n))


def cost_P(s: SwarmState) -> float:
    """Order parameter ``0.5 * ||C_e||^2`` for equal agent weights.

    Coincides with ``cost_PL`` of the unit-weighted complete graph up to the
    additive constant ``r^2 / (2N)``.
    """
    c = _flat(s).mean(axis=0)
    return float(0.5 * np.dot(c, c))


def swarm_centroid(s: SwarmState) -> Centroid:
    """Equal-weight centroid of the swarm positions."""
    return centroid(list(s.positions))


def sync_error(s: SwarmState) -> float:
    """Largest pairwise chordal distance."""
    e = _flat(s)
    diff = e[:, None, :] - e[None, :, :]
    return float(np.sqrt((diff * diff).sum(axis=-1)).max())


def is_synchronized(s: SwarmState, tol: float = DEFAULT_PREDICATE_TOL) -> bool:
    return sync_error(s) <= tol


def _neighbor_centroids(g: WeightedDigraph, s: SwarmState):
    """Per-agent weighted in-neighbor centroid (b_k normalized) or None for
    agents without in-edges."""
    stacked = s.positions_array()
    a = g.weights
    out = []
    for k in range(s.n_agents):
        w_total = float(a[:, k].sum())
        b = np.tensordot(a[:, k], stacked, axes=(0, 0))
        if np.linalg.norm(b) <= 1e-12 * max(1.0, w_total):
            out.append(None)
        else:
            out.append(Centroid(b / w_total, w_total))
    return out


def is_consensus(
    g: WeightedDigraph, s: SwarmState, tol: float = DEFAULT_PREDICATE_TOL
) -> bool:
    """Each agent attains (within ``tol``) the maximum of the linear form
    defined by its weighted in-neighbors; agents whose in-neighbor sum
    vanishes satisfy the condition trivially."""
    if g.n_vertices != s.n_agents:
        raise ValueError("graph size does not match swarm size")
    for k, c in enumerate(_neighbor_centroids(g, s)):
        if c is None:
            continue
        res: MeanResult = iam(s.descriptor, c)
        attained = float(np.sum(s.positions[k].data * c.value))
        if attained < res.optimal_value - tol:
            return False
    return True


def is_anti_consensus(
    g: WeightedDigraph, s: SwarmState, tol: float = DEFAULT_PREDICATE_TOL
) -> bool:
    """Mirror of :func:`is_consensus` with the minimum of the linear form."""
    if g.n_vertices != s.n_agents:
        raise ValueError("graph size does not match swarm size")
    for k, c in enumerate(_neighbor_centroids(g, s)):
        if c is None:
            continue
        res = iam(s.descriptor, Centroid(-c.value, c.total_weight))
        minimum = -res.optimal_value
        attained = float(np.sum(s.positions[k].data * c.value))
        if attained > minimum + tol:
            return False
    return True


def is_balanced_config(s: SwarmState, tol: float = DEFAULT_PREDICATE_TOL) -> bool:
    """The linear form of the swarm centroid is constant over the manifold.

    Closed forms: circle and SO(n) require ``C_e = 0``; Grass(p, n) requires
    ``C_e = (p/n) I``.  (On SO(n) a vanishing centroid is equivalent to a
    constant form for matrices realizable as centroids of rotations, which is
    cross-checked against brute force in the tests.)
    """
    c = swarm_centroid(s).value
    desc = s.descriptor
    if desc.kind == GRASSMANN:
        target = (desc.p / desc.n) * np.eye(desc.n)
        return float(np.linalg.norm(c - target)) <= tol
    if desc.kind == CIRCLE:
        return float(np.linalg.norm(c)) <= tol
    return float(np.linalg.norm(c)) <= tol
