"""Right-hand sides of the consensus flows, a projected fixed-step
integrator over graph schedules, and the discrete jump-to-the-mean update.

Sign conventions: the gradient flow ascends the alignment cost for
``alpha > 0`` (consensus) and descends it for ``alpha < 0``
(anti-consensus).  On the circle this reads
``theta_k' = 2 alpha sum_j a_jk sin(theta_j - theta_k)``, i.e. the classic
zero-frequency coupled-oscillator model for the complete graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

from .consensus import SwarmState
from .graph import GraphSchedule, WeightedDigraph
from .manifolds import (
    CIRCLE,
    GRASSMANN,
    SO,
    GrassmannBasis,
    ManifoldDescriptor,
    ManifoldPoint,
    membership_violation,
    project_many,
    projector_to_basis,
    tangent_project_many,
)
from .means import Centroid, iam

__all__ = [
    "GradientFlow",
    "EstimatorSync",
    "EstimatorAntiConsensus",
    "LocalFrameSONSync",
    "VicsekDiscrete",
    "FlowSpec",
    "IntegratorConfig",
    "Trajectory",
    "gradient_rhs",
    "circle_rhs",
    "so_n_rhs",
    "grassmann_projector_rhs",
    "grassmann_basis_rhs",
    "estimator_sync_rhs",
    "estimator_anti_rhs",
    "local_frame_son_rhs",
    "vicsek_step",
    "integrate",
]

# integration aborts when a projected state violates manifold invariants
# beyond this bound
_ABORT_TOL = 1e-6


@dataclass(frozen=True)
class GradientFlow:
    """Ascent (alpha > 0) or descent (alpha < 0) of the alignment cost."""

    alpha: float

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero (positive: consensus, negative: anti)")


@dataclass(frozen=True)
class EstimatorSync:
    """Linear consensus on ambient estimators, positions tracking them."""

    beta: float
    gamma_s: float

    def __post_init__(self):
        if not (self.beta > 0 and self.gamma_s > 0):
            raise ValueError("estimator synchronization requires beta > 0 and gamma_s > 0")


@dataclass(frozen=True)
class EstimatorAntiConsensus:
    """Coupled estimator / repulsion flow; requires gamma_b < 0."""

    beta: float
    gamma_b: float

    def __post_init__(self):
        if not (self.beta > 0 and self.gamma_b < 0):
            raise ValueError("estimator anti-consensus requires beta > 0 and gamma_b < 0")


@dataclass(frozen=True)
class LocalFrameSONSync:
    """Body-frame reformulation of the estimator synchronization on SO(n)."""

    beta: float
    gamma_s: float

    def __post_init__(self):
        if not (self.beta > 0 and self.gamma_s > 0):
            raise ValueError("local-frame synchronization requires beta > 0 and gamma_s > 0")


@dataclass(frozen=True)
class VicsekDiscrete:
    """Discrete-time jump of each agent to the mean of its in-neighborhood."""


FlowSpec = Union[
    GradientFlow, EstimatorSync, EstimatorAntiConsensus, LocalFrameSONSync, VicsekDiscrete
]


@dataclass(frozen=True)
class IntegratorConfig:
    step_size: float
    t_end: float
    method: str = "rk4"
    log_stride: int = 1
    seed: int = 0
    t_start: float = 0.0
    grassmann_representation: str = "basis"

    def __post_init__(self):
        if not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.method not in ("euler", "rk4"):
            raise ValueError("method must be 'euler' or 'rk4'")
        if self.log_stride < 1:
            raise ValueError("log_stride must be at least 1")
        if self.grassmann_representation not in ("basis", "projector"):
            raise ValueError("grassmann_representation must be 'basis' or 'projector'")


@dataclass
class Trajectory:
    """Logged run of a flow: snapshot states plus scalar metrics per logged
    time (columns P_L, P, sync_error, W, centroid_norm, manifold_drift)."""

    times: np.ndarray
    states: list[SwarmState]
    metrics: dict[str, np.ndarray]
    aborted: bool = False
    abort_reason: str = ""

    def final_state(self) -> SwarmState:
        return self.states[-1]


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------


def _bcast(values: np.ndarray, like: np.ndarray) -> np.ndarray:
    """Reshape per-agent scalars for broadcasting against stacked states."""
    return values.reshape(values.shape[0], *([1] * (like.ndim - 1)))


def _in_sums(a: np.ndarray, stacked: np.ndarray) -> np.ndarray:
    """``out[k] = sum_j a[j, k] * stacked[j]``."""
    return np.tensordot(a, stacked, axes=(0, 0))


def _neighbor_flow_raw(
    desc: ManifoldDescriptor, a: np.ndarray, y: np.ndarray, alpha: float
) -> np.ndarray:
    """In-neighbor flow ``2 alpha Proj_k(sum_j a_jk (y_j - y_k))``.

    For undirected graphs this is the gradient flow of the alignment cost;
    for directed graphs it is the same formula applied verbatim with the
    instantaneous weights.
    """
    din = a.sum(axis=0)
    m = _in_sums(a, y) - _bcast(din, y) * y
    return 2.0 * alpha * tangent_project_many(desc, y, m)


def gradient_rhs(g: WeightedDigraph, s: SwarmState, alpha: float) -> list[np.ndarray]:
    """Exact gradient of the alignment cost (times ``2 N^2 alpha``):
    ``alpha Proj_k(sum_j (a_jk + a_kj)(y_j - y_k))`` per agent."""
    if g.n_vertices != s.n_agents:
        raise ValueError("graph size does not match swarm size")
    b = g.weights + g.weights.T
    y = s.positions_array()
    m = _in_sums(b, y) - _bcast(b.sum(axis=0), y) * y
    v = alpha * tangent_project_many(s.descriptor, y, m)
    return list(v)


def circle_rhs(g: WeightedDigraph, s: SwarmState, alpha: float) -> np.ndarray:
    """Angular velocities ``2 alpha sum_j a_jk sin(theta_j - theta_k)``."""
    if s.descriptor.kind != CIRCLE:
        raise ValueError("circle_rhs needs a circle swarm")
    y = s.positions_array()
    theta = np.arctan2(y[:, 1], y[:, 0])
    sines = np.sin(theta[:, None] - theta[None, :])  # sines[j, k] = sin(th_j - th_k)
    return 2.0 * alpha * np.einsum("jk,jk->k", g.weights, sines)


def so_n_rhs(g: WeightedDigraph, s: SwarmState, alpha: float) -> list[np.ndarray]:
    """Body-frame velocities ``alpha sum_j a_jk (Q_k^T Q_j - Q_j^T Q_k)``."""
    if s.descriptor.kind != SO:
        raise ValueError("so_n_rhs needs an SO(n) swarm")
    q = s.positions_array()
    sums = _in_sums(g.weights, q)
    m = np.swapaxes(q, -1, -2) @ sums
    return list(alpha * (m - np.swapaxes(m, -1, -2)))


def grassmann_projector_rhs(
    g: WeightedDigraph, s: SwarmState, alpha: float
) -> list[np.ndarray]:
    """Projector velocities ``2 alpha (Pi_k S Pi_perp + Pi_perp S Pi_k)`` with
    ``S`` the weighted in-neighbor sum."""
    if s.descriptor.kind != GRASSMANN:
        raise ValueError("grassmann_projector_rhs needs a Grassmann swarm")
    pi = s.positions_array()
    sums = _in_sums(g.weights, pi)
    return list(2.0 * alpha * tangent_project_many(s.descriptor, pi, sums))


def grassmann_basis_rhs(
    g: WeightedDigraph, bases: Sequence[GrassmannBasis], alpha: float
) -> list[np.ndarray]:
    """Basis-form flow ``2 alpha sum_j a_jk (Y_j M_jk - Y_k M_jk^T M_jk)``
    with ``M_jk = Y_j^T Y_k``.

    The coefficient is chosen so that the induced projector velocity
    ``Y' Y^T + Y Y'^T`` coincides with :func:`grassmann_projector_rhs`.
    """
    if g.n_vertices != len(bases):
        raise ValueError("graph size does not match number of bases")
    y = np.stack([b.Y for b in bases])
    a = g.weights
    m = np.einsum("jna,knb->jkab", y, y)  # m[j, k] = Y_j^T Y_k
    t1 = np.einsum("jk,jna,jkab->knb", a, y, m)
    gram = np.einsum("jk,jkab,jkac->kbc", a, m, m)
    t2 = np.einsum("kna,kab->knb", y, gram)
    return list(2.0 * alpha * (t1 - t2))


def _basis_flow_raw(a: np.ndarray, y: np.ndarray, alpha: float) -> np.ndarray:
    """Stacked basis flow, equivalent to :func:`grassmann_basis_rhs`."""
    proj = y @ np.swapaxes(y, -1, -2)
    sy = _in_sums(a, proj) @ y
    return 2.0 * alpha * (sy - y @ (np.swapaxes(y, -1, -2) @ sy))


def _estimator_sync_raw(desc, a, y, x, beta, gamma_s):
    din = a.sum(axis=0)
    dx = beta * (_in_sums(a, x) - _bcast(din, x) * x)
    dy = gamma_s * tangent_project_many(desc, y, x)
    return dy, dx


def _estimator_anti_raw(desc, a, y, x, beta, gamma_b):
    din = a.sum(axis=0)
    dy = gamma_b * tangent_project_many(desc, y, x)
    dx = beta * (_in_sums(a, x) - _bcast(din, x) * x) + dy
    return dy, dx


def estimator_sync_rhs(
    g: WeightedDigraph, s: SwarmState, beta: float, gamma_s: float
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Estimator derivatives (linear consensus) and position tangent
    vectors (ascent of ``<y_k, x_k>``); returned as ``(xdot, ydot)``."""
    x = s.estimators_array()
    if x is None:
        raise ValueError("estimator flow needs a swarm with estimators")
    if g.n_vertices != s.n_agents:
        raise ValueError("graph size does not match swarm size")
    dy, dx = _estimator_sync_raw(s.descriptor, g.weights, s.positions_array(), x, beta, gamma_s)
    return list(dx), list(dy)


def estimator_anti_rhs(
    g: WeightedDigraph, s: SwarmState, beta: float, gamma_b: float
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Coupled anti-consensus derivatives ``(xdot, ydot)``; the position part
    is resolved first and feeds the estimator part.

    The caller is responsible for initializing the estimators to the
    embedded positions when starting a run.
    """
    x = s.estimators_array()
    if x is None:
        raise ValueError("estimator flow needs a swarm with estimators")
    if g.n_vertices != s.n_agents:
        raise ValueError("graph size does not match swarm size")
    dy, dx = _estimator_anti_raw(s.descriptor, g.weights, s.positions_array(), x, beta, gamma_b)
    return list(dx), list(dy)


def local_frame_son_rhs(
    g: WeightedDigraph,
    z: Sequence[np.ndarray],
    relative_positions: Mapping[tuple[int, int], np.ndarray],
    beta: float,
    gamma_s: float,
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Body-frame estimator update and body velocities on SO(n).

    ``z[k]`` is agent k's estimator expressed in its own frame and
    ``relative_positions[(j, k)]`` must provide ``Q_k^T Q_j`` for every edge
    j -> k; no global frame is consulted.  Returns ``(zdot, body_velocities)``
    with ``body_velocities[k] = Q_k^T Qdot_k = (gamma_s / 2)(Z_k - Z_k^T)``.
    """
    a = g.weights
    n_agents = g.n_vertices
    if len(z) != n_agents:
        raise ValueError("need one Z matrix per agent")
    omegas = [0.5 * gamma_s * (zk - zk.T) for zk in z]
    zdots = []
    for k in range(n_agents):
        acc = np.zeros_like(z[k])
        for j in range(n_agents):
            if a[j, k] == 0:
                continue
            rel = relative_positions.get((j, k))
            if rel is None:
                raise ValueError(f"missing relative position for edge ({j}, {k})")
            acc = acc + a[j, k] * (rel @ z[j] - z[k])
        zdots.append(omegas[k].T @ z[k] + beta * acc)
    return zdots, omegas


def vicsek_step(g: WeightedDigraph, s: SwarmState) -> SwarmState:
    """One discrete update: each agent jumps to the canonical mean of its
    weighted in-neighbors plus itself (self weight 1); agents whose mean is
    degenerate keep their position."""
    if g.n_vertices != s.n_agents:
        raise ValueError("graph size does not match swarm size")
    a = g.weights
    stacked = s.positions_array()
    new_points: list[ManifoldPoint] = []
    for k in range(s.n_agents):
        w_total = float(a[:, k].sum()) + 1.0
        b = (np.tensordot(a[:, k], stacked, axes=(0, 0)) + stacked[k]) / w_total
        res = iam(s.descriptor, Centroid(b, w_total))
        new_points.append(res.representative if res.unique else s.positions[k])
    return SwarmState(s.descriptor, tuple(new_points), s.estimators)


# ---------------------------------------------------------------------------
# integrator
# ---------------------------------------------------------------------------


class _StepFailure(Exception):
    pass


def _project_components(
    descs: tuple, state: tuple[np.ndarray, ...]
) -> tuple[np.ndarray, ...]:
    """Project manifold components of a state tuple (None entries are linear)."""
    out = []
    for d, comp in zip(descs, state):
        if d is None:
            out.append(comp)
            continue
        proj, ok = project_many(d, comp)
        if not bool(np.all(ok)):
            raise _StepFailure(f"projection onto {d.kind} collapsed during a step")
        out.append(proj)
    return tuple(out)


def _project_stiefel(y: np.ndarray) -> np.ndarray:
    u, s, vt = np.linalg.svd(y, full_matrices=False)
    if np.any(s < 1e-12):
        raise _StepFailure("basis orthonormalization collapsed during a step")
    return u @ vt


def _violation_many(desc: ManifoldDescriptor, stacked: np.ndarray) -> float:
    if desc.kind == CIRCLE:
        return float(np.max(np.abs(np.linalg.norm(stacked, axis=-1) - 1.0)))
    if desc.kind == SO:
        eye = np.eye(desc.n)
        gram = np.swapaxes(stacked, -1, -2) @ stacked
        v = float(np.max(np.linalg.norm(gram - eye, axis=(-2, -1))))
        if np.any(np.linalg.det(stacked) <= 0):
            return np.inf
        return v
    sym = np.max(np.linalg.norm(stacked - np.swapaxes(stacked, -1, -2), axis=(-2, -1)))
    idem = np.max(np.linalg.norm(stacked @ stacked - stacked, axis=(-2, -1)))
    tr = np.max(np.abs(np.trace(stacked, axis1=-2, axis2=-1) - desc.p))
    return float(max(sym, idem, tr))


def _stiefel_violation(y: np.ndarray) -> float:
    eye = np.eye(y.shape[-1])
    gram = np.swapaxes(y, -1, -2) @ y
    return float(np.max(np.linalg.norm(gram - eye, axis=(-2, -1))))


def _metrics_row(a, positions, estimators, drift):
    n = positions.shape[0]
    e = positions.reshape(n, -1)
    gram = e @ e.T
    p_l = float(np.sum(a * gram) / (2.0 * n * n))
    c = e.mean(axis=0)
    cn = float(np.linalg.norm(c))
    diff = e[:, None, :] - e[None, :, :]
    sync = float(np.sqrt((diff * diff).sum(axis=-1)).max())
    w = np.nan if estimators is None else float(0.5 * np.sum(estimators * estimators))
    return p_l, 0.5 * cn * cn, sync, w, cn, drift


_METRIC_KEYS = ("P_L", "P", "sync_error", "W", "centroid_norm", "manifold_drift")


def integrate(
    flow: FlowSpec,
    schedule: GraphSchedule,
    init: SwarmState,
    cfg: IntegratorConfig,
) -> Trajectory:
    """Run a flow over a graph schedule with fixed-step projected stepping.

    Every integrator stage evaluates the right-hand side at a state projected
    back onto the manifold; after each full step the positions are
    re-projected and the pre-projection invariant violation is logged as
    ``manifold_drift``.  Estimators default to a seeded uniform box sample
    (synchronization flows) or to the embedded initial positions
    (anti-consensus flow) when the initial state carries none.  A violation
    beyond 1e-6 after re-projection aborts the run and returns the partial
    trajectory flagged ``aborted``.
    """
    desc = init.descriptor
    n = init.n_agents
    if schedule.n_vertices != n:
        raise ValueError("schedule graph size does not match swarm size")
    h = cfg.step_size
    span = cfg.t_end - cfg.t_start
    n_steps = max(1, int(round(span / h)))

    if isinstance(flow, VicsekDiscrete):
        return _integrate_vicsek(schedule, init, cfg, n_steps)

    y0 = init.positions_array()
    rng = np.random.default_rng([cfg.seed, 2])

    if isinstance(flow, GradientFlow):
        use_basis = desc.kind == GRASSMANN and cfg.grassmann_representation == "basis"
        if use_basis:
            yb = np.stack([projector_to_basis(p).Y for p in init.positions])
            state = (yb,)
            descs = ("stiefel",)

            def deriv(t, st):
                a = schedule.graph_at(t).weights
                return (_basis_flow_raw(a, st[0], flow.alpha),)

            def to_output(st):
                return st[0] @ np.swapaxes(st[0], -1, -2), None

        else:
            state = (y0,)
            descs = (desc,)

            def deriv(t, st):
                a = schedule.graph_at(t).weights
                return (_neighbor_flow_raw(desc, a, st[0], flow.alpha),)

            def to_output(st):
                return st[0], None

    elif isinstance(flow, (EstimatorSync, EstimatorAntiConsensus)):
        x0 = init.estimators_array()
        if x0 is None:
            if isinstance(flow, EstimatorAntiConsensus):
                x0 = y0.copy()
            else:
                x0 = rng.uniform(-desc.radius, desc.radius, size=(n, *desc.shape))
        state = (y0, x0)
        descs = (desc, None)
        if isinstance(flow, EstimatorSync):

            def deriv(t, st):
                a = schedule.graph_at(t).weights
                dy, dx = _estimator_sync_raw(desc, a, st[0], st[1], flow.beta, flow.gamma_s)
                return (dy, dx)

        else:

            def deriv(t, st):
                a = schedule.graph_at(t).weights
                dy, dx = _estimator_anti_raw(desc, a, st[0], st[1], flow.beta, flow.gamma_b)
                return (dy, dx)

        def to_output(st):
            return st[0], st[1]

    elif isinstance(flow, LocalFrameSONSync):
        if desc.kind != SO:
            raise ValueError("local-frame flow is defined on SO(n) only")
        x0 = init.estimators_array()
        if x0 is None:
            x0 = rng.uniform(-desc.radius, desc.radius, size=(n, *desc.shape))
        z0 = np.swapaxes(y0, -1, -2) @ x0
        state = (y0, z0)
        descs = (desc, None)

        def deriv(t, st):
            q, z = st
            a = schedule.graph_at(t).weights
            omega = 0.5 * flow.gamma_s * (z - np.swapaxes(z, -1, -2))
            dq = q @ omega
            s = _in_sums(a, q @ z)
            tterm = np.swapaxes(q, -1, -2) @ s - _bcast(a.sum(axis=0), z) * z
            dz = np.swapaxes(omega, -1, -2) @ z + flow.beta * tterm
            return (dq, dz)

        def to_output(st):
            return st[0], st[0] @ st[1]

    else:
        raise ValueError(f"unsupported flow spec {flow!r}")

    def project(st):
        out = []
        for d, comp in zip(descs, st):
            if d is None:
                out.append(comp)
            elif d == "stiefel":
                out.append(_project_stiefel(comp))
            else:
                out.append(_project_components((d,), (comp,))[0])
        return tuple(out)

    def violation(st):
        worst = 0.0
        for d, comp in zip(descs, st):
            if d is None:
                continue
            v = _stiefel_violation(comp) if d == "stiefel" else _violation_many(d, comp)
            worst = max(worst, v)
        return worst

    times: list[float] = []
    states: list[SwarmState] = []
    rows: list[tuple] = []

    def log(i, st, drift):
        t = cfg.t_start + i * h
        positions, estimators = to_output(st)
        a = schedule.graph_at(t).weights
        times.append(t)
        states.append(SwarmState.from_arrays(desc, positions, estimators))
        rows.append(_metrics_row(a, positions, estimators, drift))

    def make_trajectory(aborted=False, reason=""):
        metric_arrays = {
            k: np.array([r[i] for r in rows]) for i, k in enumerate(_METRIC_KEYS)
        }
        return Trajectory(np.array(times), states, metric_arrays, aborted, reason)

    log(0, state, 0.0)
    for i in range(n_steps):
        t = cfg.t_start + i * h
        try:
            if cfg.method == "euler":
                k1 = deriv(t, state)
                raw = tuple(s + h * k for s, k in zip(state, k1))
            else:
                k1 = deriv(t, state)
                s2 = project(tuple(s + 0.5 * h * k for s, k in zip(state, k1)))
                k2 = deriv(t + 0.5 * h, s2)
                s3 = project(tuple(s + 0.5 * h * k for s, k in zip(state, k2)))
                k3 = deriv(t + 0.5 * h, s3)
                s4 = project(tuple(s + h * k for s, k in zip(state, k3)))
                k4 = deriv(t + h, s4)
                raw = tuple(
                    s + (h / 6.0) * (a1 + 2 * a2 + 2 * a3 + a4)
                    for s, a1, a2, a3, a4 in zip(state, k1, k2, k3, k4)
                )
            drift = violation(raw)
            state = project(raw)
        except _StepFailure as exc:
            return make_trajectory(True, str(exc))
        if not all(np.all(np.isfinite(c)) for c in state):
            return make_trajectory(True, f"non-finite state at t={t + h:.6g}")
        post = violation(state)
        if post > _ABORT_TOL:
            return make_trajectory(
                True, f"invariant violation {post:.3e} after re-projection at t={t + h:.6g}"
            )
        if (i + 1) % cfg.log_stride == 0 or i + 1 == n_steps:
            log(i + 1, state, drift)
    return make_trajectory()


def _integrate_vicsek(
    schedule: GraphSchedule, init: SwarmState, cfg: IntegratorConfig, n_steps: int
) -> Trajectory:
    h = cfg.step_size
    times = [cfg.t_start]
    states = [init]
    rows = [
        _metrics_row(
            schedule.graph_at(cfg.t_start).weights,
            init.positions_array(),
            init.estimators_array(),
            0.0,
        )
    ]
    current = init
    for i in range(n_steps):
        t = cfg.t_start + i * h
        current = vicsek_step(schedule.graph_at(t), current)
        if (i + 1) % cfg.log_stride == 0 or i + 1 == n_steps:
            t_next = cfg.t_start + (i + 1) * h
            times.append(t_next)
            states.append(current)
            rows.append(
                _metrics_row(
                    schedule.graph_at(t_next).weights,
                    current.positions_array(),
                    current.estimators_array(),
                    0.0,
                )
            )
    metric_arrays = {k: np.array([r[i] for r in rows]) for i, k in enumerate(_METRIC_KEYS)}
    return Trajectory(np.array(times), states, metric_arrays)
