"""Weighted digraphs, their Laplacians and degree structure, and connectivity
analysis for static graphs and piecewise-constant time-varying schedules."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "WeightedDigraph",
    "GraphSchedule",
    "GraphClasses",
    "ConnectivityResult",
    "UniformConnectivityResult",
    "degrees",
    "laplacian",
    "classify",
    "connectivity",
    "integrated_graph",
    "is_uniformly_connected",
    "complete",
    "ring_undirected",
    "directed_cycle",
    "random_digraph",
    "from_edges",
    "make_graph",
]

# exact degree comparison is used for integer weights, this tolerance otherwise
_BALANCE_TOL = 1e-12


@dataclass(frozen=True)
class WeightedDigraph:
    """Weighted directed graph on N vertices.

    ``weights[j, k]`` is the weight of the edge j -> k (j sends to k);
    zero means no edge.  Self-loops are forbidden and weights are
    nonnegative.  Instances are immutable.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if w.shape[0] < 1:
            raise ValueError("a graph needs at least one vertex")
        if not np.all(np.isfinite(w)):
            raise ValueError("edge weights must be finite")
        if np.any(w < 0):
            raise ValueError("edge weights must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise ValueError("self-loops are not allowed (a_kk must be 0)")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def n_vertices(self) -> int:
        return self.weights.shape[0]

    def edges(self) -> list[tuple[int, int]]:
        """Ordered (sender, receiver) pairs of all present edges."""
        js, ks = np.nonzero(self.weights)
        return list(zip(js.tolist(), ks.tolist()))


def degrees(g: WeightedDigraph) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(in_degrees, out_degrees)``.

    ``in_degrees[k] = sum_j a_jk`` (column sums) and
    ``out_degrees[k] = sum_j a_kj`` (row sums).
    """
    return g.weights.sum(axis=0), g.weights.sum(axis=1)


def laplacian(g: WeightedDigraph, kind: str = "in") -> np.ndarray:
    """Graph Laplacian ``D - A``.

    ``kind="in"`` uses in-degrees (zero column sums), ``kind="out"`` uses
    out-degrees (zero row sums).
    """
    din, dout = degrees(g)
    if kind == "in":
        return np.diag(din) - g.weights
    if kind == "out":
        return np.diag(dout) - g.weights
    raise ValueError(f"kind must be 'in' or 'out', got {kind!r}")


@dataclass(frozen=True)
class GraphClasses:
    is_undirected: bool
    is_bidirectional: bool
    is_balanced: bool


def classify(g: WeightedDigraph) -> GraphClasses:
    """Classify a graph as undirected (A = A^T), bidirectional (symmetric
    edge support) and/or balanced (in-degree = out-degree per vertex)."""
    a = g.weights
    undirected = bool(np.array_equal(a, a.T))
    bidirectional = bool(np.array_equal(a > 0, a.T > 0))
    din, dout = degrees(g)
    if np.array_equal(a, np.round(a)):
        balanced = bool(np.array_equal(din, dout))
    else:
        balanced = bool(np.max(np.abs(din - dout)) <= _BALANCE_TOL)
    return GraphClasses(undirected, bidirectional, balanced)


def _reachable(support: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(support.shape[0], dtype=bool)
    seen[start] = True
    stack = [start]
    while stack:
        v = stack.pop()
        for u in np.nonzero(support[v] & ~seen)[0]:
            seen[u] = True
            stack.append(int(u))
    return seen


def _reaches_all(weights: np.ndarray, start: int) -> bool:
    return bool(_reachable(weights > 0, start).all())


@dataclass(frozen=True)
class ConnectivityResult:
    strongly_connected: bool
    weakly_connected: bool


def connectivity(g: WeightedDigraph) -> ConnectivityResult:
    """Strong connectivity uses directed reachability; weak connectivity uses
    the support of ``A + A^T``."""
    a = g.weights
    strong = all(_reaches_all(a, k) for k in range(g.n_vertices))
    weak = _reaches_all(a + a.T, 0)
    return ConnectivityResult(strong, weak)


@dataclass(frozen=True)
class GraphSchedule:
    """Piecewise-constant sequence of graphs.

    ``segments`` is an ordered tuple of ``(start_time, graph)`` pairs; the
    graph of the last segment persists for all later times.  ``delta`` is the
    edge-persistence threshold (every present edge weighs at least ``delta``
    at all times) and ``horizon`` is the window length used by the
    uniform-connectivity test.
    """

    segments: tuple[tuple[float, WeightedDigraph], ...]
    delta: float
    horizon: float

    def __post_init__(self):
        segs = tuple((float(t), g) for t, g in self.segments)
        if not segs:
            raise ValueError("schedule needs at least one segment")
        starts = [t for t, _ in segs]
        if any(t2 <= t1 for t1, t2 in zip(starts, starts[1:])):
            raise ValueError("segment start times must be strictly increasing")
        sizes = {g.n_vertices for _, g in segs}
        if len(sizes) != 1:
            raise ValueError("all graphs in a schedule must share n_vertices")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        for t, g in segs:
            w = g.weights
            present = w[w > 0]
            if present.size and present.min() < self.delta:
                raise ValueError(
                    f"segment at t={t} has an edge weight below delta={self.delta}"
                )
        object.__setattr__(self, "segments", segs)

    @property
    def n_vertices(self) -> int:
        return self.segments[0][1].n_vertices

    @property
    def start_time(self) -> float:
        return self.segments[0][0]

    def graph_at(self, t: float) -> WeightedDigraph:
        if t < self.start_time:
            raise ValueError(f"t={t} is before the schedule start {self.start_time}")
        starts = [s for s, _ in self.segments]
        idx = bisect.bisect_right(starts, t) - 1
        return self.segments[idx][1]

    @staticmethod
    def constant(
        g: WeightedDigraph,
        delta: float | None = None,
        horizon: float = 1.0,
        t_start: float = 0.0,
    ) -> "GraphSchedule":
        if delta is None:
            present = g.weights[g.weights > 0]
            delta = float(present.min()) if present.size else 1.0
        return GraphSchedule(((t_start, g),), delta, horizon)

    @staticmethod
    def periodic(
        graphs: Sequence[WeightedDigraph],
        dwell: float | Sequence[float],
        cycles: int,
        delta: float,
        horizon: float,
        t_start: float = 0.0,
    ) -> "GraphSchedule":
        """Cycle through ``graphs``, each active for its dwell time (one
        shared value or one per graph), repeated ``cycles`` times (the last
        graph then persists)."""
        dwells = (
            [float(dwell)] * len(graphs)
            if isinstance(dwell, (int, float))
            else [float(d) for d in dwell]
        )
        if len(dwells) != len(graphs):
            raise ValueError("need one dwell per graph (or a single shared dwell)")
        if any(d <= 0 for d in dwells):
            raise ValueError("dwell must be positive")
        if cycles < 1:
            raise ValueError("cycles must be at least 1")
        segs = []
        t = t_start
        for _ in range(cycles):
            for g, d in zip(graphs, dwells):
                segs.append((t, g))
                t += d
        return GraphSchedule(tuple(segs), delta, horizon)


def _integral_matrix(s: GraphSchedule, t1: float, t2: float) -> np.ndarray:
    if t2 <= t1:
        raise ValueError("integration window must satisfy t1 < t2")
    if t1 < s.start_time:
        raise ValueError(
            f"window [{t1}, {t2}] is not covered by the schedule "
            f"(starts at {s.start_time})"
        )
    total = np.zeros((s.n_vertices, s.n_vertices))
    starts = [t for t, _ in s.segments]
    for i, (start, g) in enumerate(s.segments):
        end = starts[i + 1] if i + 1 < len(starts) else np.inf
        overlap = min(t2, end) - max(t1, start)
        if overlap > 0:
            total += overlap * g.weights
    return total


def integrated_graph(s: GraphSchedule, t1: float, t2: float) -> WeightedDigraph:
    """Time-integrated graph over ``[t1, t2]``: each entry is the integral of
    the weight over the window, or zero when that integral falls below the
    schedule's ``delta``."""
    raw = _integral_matrix(s, t1, t2)
    return WeightedDigraph(np.where(raw >= s.delta, raw, 0.0))


@dataclass(frozen=True)
class UniformConnectivityResult:
    result: bool
    root: int | None


def is_uniformly_connected(
    s: GraphSchedule, t_grid: Sequence[float]
) -> UniformConnectivityResult:
    """Check whether one vertex reaches all others in the integrated graph of
    every window ``[t, t + horizon]`` with ``t`` drawn from ``t_grid``.

    Returns the lowest-index witnessing root when one exists.
    """
    if len(t_grid) == 0:
        raise ValueError("t_grid must contain at least one window start")
    candidates = set(range(s.n_vertices))
    for t in t_grid:
        bar = integrated_graph(s, t, t + s.horizon)
        candidates = {k for k in candidates if _reaches_all(bar.weights, k)}
        if not candidates:
            return UniformConnectivityResult(False, None)
    return UniformConnectivityResult(True, min(candidates))


def complete(n: int, weight: float = 1.0) -> WeightedDigraph:
    """Complete graph: every ordered pair j != k carries ``weight``."""
    _check_generator_args(n, weight)
    a = np.full((n, n), float(weight))
    np.fill_diagonal(a, 0.0)
    return WeightedDigraph(a)


def ring_undirected(n: int, weight: float = 1.0) -> WeightedDigraph:
    """Undirected ring: each vertex is linked both ways to its two path
    neighbors (a single pair for n = 2, empty for n = 1)."""
    _check_generator_args(n, weight)
    a = np.zeros((n, n))
    if n >= 2:
        for k in range(n):
            a[k, (k + 1) % n] = weight
            a[(k + 1) % n, k] = weight
    return WeightedDigraph(a)


def directed_cycle(n: int, weight: float = 1.0) -> WeightedDigraph:
    """Directed cycle 0 -> 1 -> ... -> n-1 -> 0 (empty for n = 1)."""
    _check_generator_args(n, weight)
    a = np.zeros((n, n))
    if n >= 2:
        for k in range(n):
            a[k, (k + 1) % n] = weight
    return WeightedDigraph(a)


def random_digraph(n: int, p: float, seed: int) -> WeightedDigraph:
    """Each off-diagonal entry is independently 1 with probability ``p``,
    else 0; reproducible for a given seed."""
    _check_generator_args(n, 1.0)
    if not 0.0 <= p <= 1.0:
        raise ValueError("edge probability p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    a = (rng.random((n, n)) < p).astype(float)
    np.fill_diagonal(a, 0.0)
    return WeightedDigraph(a)


def from_edges(n: int, edges: Sequence[tuple[int, int, float]]) -> WeightedDigraph:
    """Build a graph from explicit ``(sender, receiver, weight)`` triples."""
    _check_generator_args(n, 1.0)
    a = np.zeros((n, n))
    for j, k, w in edges:
        if not (0 <= j < n and 0 <= k < n):
            raise ValueError(f"edge ({j}, {k}) is out of range for n={n}")
        a[j, k] = w
    return WeightedDigraph(a)


def _check_generator_args(n: int, weight: float) -> None:
    if n < 1:
        raise ValueError("graph generators need n >= 1")
    if not weight > 0:
        raise ValueError("edge weight must be positive")


def make_graph(spec: dict) -> WeightedDigraph:
    """Build a graph from a declarative spec dict (scenario-file form).

    Supported types: ``complete``, ``ring``, ``directed_cycle``, ``random``,
    ``edges``, ``explicit``.
    """
    kind = spec.get("type")
    if kind == "complete":
        return complete(int(spec["n"]), float(spec.get("weight", 1.0)))
    if kind == "ring":
        return ring_undirected(int(spec["n"]), float(spec.get("weight", 1.0)))
    if kind == "directed_cycle":
        return directed_cycle(int(spec["n"]), float(spec.get("weight", 1.0)))
    if kind == "random":
        return random_digraph(int(spec["n"]), float(spec["p"]), int(spec["seed"]))
    if kind == "edges":
        edges = [(int(j), int(k), float(w)) for j, k, w in spec["edges"]]
        return from_edges(int(spec["n"]), edges)
    if kind == "explicit":
        return WeightedDigraph(np.array(spec["weights"], dtype=float))
    raise ValueError(f"unknown graph type {kind!r}")
