"""Centroid and the closed-form projection means on each manifold.

The central object is the set of maximizers of the linear function
``f(c) = <c, C_e>`` over the manifold, where ``C_e`` is the Euclidean
centroid of the embedded agents.  On the circle this is the central
projection of ``C_e``; on SO(n) it comes from the polar decomposition of
``C_e`` (with a determinant correction when ``det C_e < 0``); on
Grass(p, n) it is the dominant-p eigenspace of ``C_e``.  The minimizers
(the "anti" mean) follow by negating ``C_e``.

``critical_rotations`` enumerates every critical point of ``f`` on SO(n)
in the generic case, which the tests use as an independent oracle for the
maximizer formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .manifolds import (
    CIRCLE,
    GRASSMANN,
    SO,
    ManifoldDescriptor,
    ManifoldPoint,
    circle,
    grassmann,
    rotation_group,
)

__all__ = [
    "WHOLE_MANIFOLD",
    "Centroid",
    "MeanResult",
    "centroid",
    "iam",
    "aiam",
    "iam_circle",
    "iam_so_n",
    "iam_grassmann",
    "critical_rotations",
    "iam_value",
]

WHOLE_MANIFOLD = "whole manifold"

# scale-relative degeneracy thresholds: near-zero centroid detection uses the
# manifold radius, eigenvalue/singular-value gaps use the centroid norm
_DEGENERATE_REL = 1e-9
_GAP_REL = 1e-9


@dataclass(frozen=True)
class Centroid:
    """Weighted Euclidean average of embedded points (generally off-manifold)."""

    value: np.ndarray
    total_weight: float

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.value))


def centroid(
    points: Sequence[ManifoldPoint], weights: Sequence[float] | None = None
) -> Centroid:
    """Weighted average of the embedded positions.

    Weights default to 1 for every point and must be positive.
    """
    if len(points) == 0:
        raise ValueError("centroid of an empty point set is undefined")
    desc = points[0].descriptor
    if any(p.descriptor != desc for p in points):
        raise ValueError("all points must share one manifold descriptor")
    if weights is None:
        weights = [1.0] * len(points)
    if len(weights) != len(points):
        raise ValueError("weights and points must have equal length")
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("weights must be positive")
    total = float(w.sum())
    stacked = np.stack([p.data for p in points])
    value = np.tensordot(w, stacked, axes=(0, 0)) / total
    return Centroid(value, total)


@dataclass(frozen=True)
class MeanResult:
    """Outcome of a linear-function maximization over a manifold.

    ``representative`` is one canonical maximizer; ``unique`` reports whether
    the maximizer set is a single point; when it is not, ``degenerate_set``
    describes the set (``WHOLE_MANIFOLD`` when the function is constant).
    ``optimal_value`` is the attained maximum of ``<c, C_e>``.
    """

    representative: ManifoldPoint
    unique: bool
    degenerate_set: str | None
    optimal_value: float


def iam_value(c: ManifoldPoint, C_e: np.ndarray) -> float:
    """Linear objective ``<c, C_e>`` (trace inner product for matrices)."""
    C_e = np.asarray(C_e, dtype=float)
    if C_e.shape != c.data.shape:
        raise ValueError(f"centroid shape {C_e.shape} != point shape {c.data.shape}")
    return float(np.sum(c.data * C_e))


def iam(desc: ManifoldDescriptor, c: Centroid) -> MeanResult:
    """Maximizer set of ``<c, C_e>`` over the manifold (the projection mean)."""
    value = np.asarray(c.value, dtype=float)
    if value.shape != desc.shape:
        raise ValueError(
            f"centroid shape {value.shape} does not match manifold shape {desc.shape}"
        )
    if desc.kind == CIRCLE:
        return iam_circle(value)
    if desc.kind == SO:
        return iam_so_n(value)
    return iam_grassmann(value, desc.p)


def aiam(desc: ManifoldDescriptor, c: Centroid) -> MeanResult:
    """Minimizer set of ``<c, C_e>``: the maximizer set for ``-C_e``.

    ``optimal_value`` is reported for the negated centroid, i.e. it equals
    minus the attained minimum of ``<c, C_e>``.
    """
    return iam(desc, Centroid(-np.asarray(c.value, dtype=float), c.total_weight))


def iam_circle(C_e: np.ndarray) -> MeanResult:
    """Central projection of the centroid onto the circle.

    Degenerates to the whole circle when ``C_e`` vanishes.
    """
    C_e = np.asarray(C_e, dtype=float)
    if C_e.shape != (2,):
        raise ValueError("circle centroid must be a 2-vector")
    norm = float(np.linalg.norm(C_e))
    if norm <= _DEGENERATE_REL:  # radius is 1
        rep = ManifoldPoint(circle(), np.array([1.0, 0.0]))
        return MeanResult(rep, False, WHOLE_MANIFOLD, norm)
    rep = ManifoldPoint(circle(), C_e / norm)
    return MeanResult(rep, True, None, norm)


def _canonical_svd(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """SVD with a deterministic sign convention on paired singular vectors."""
    u, s, vt = np.linalg.svd(m)
    for i in range(u.shape[1]):
        col = u[:, i]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size and col[nz[0]] < 0:
            u[:, i] = -col
            vt[i, :] = -vt[i, :]
    return u, s, vt


def iam_so_n(C_e: np.ndarray) -> MeanResult:
    """Rotation(s) maximizing ``trace(Q^T C_e)``.

    For ``det C_e >= 0`` the maximizer is the orientation-preserving polar
    factor of ``C_e`` and the optimum is the sum of singular values.  For
    ``det C_e < 0`` the polar factor (orientation-reversing) is corrected by
    reflecting along the right-singular direction of the smallest singular
    value, and the optimum drops by twice that value.  Degenerate inputs
    yield a canonical representative flagged non-unique.
    """
    C_e = np.asarray(C_e, dtype=float)
    if C_e.ndim != 2 or C_e.shape[0] != C_e.shape[1] or C_e.shape[0] < 2:
        raise ValueError("SO(n) centroid must be a square matrix with n >= 2")
    n = C_e.shape[0]
    desc = rotation_group(n)
    fro = float(np.linalg.norm(C_e))
    if fro <= _DEGENERATE_REL * desc.radius:
        rep = ManifoldPoint(desc, np.eye(n))
        return MeanResult(rep, False, WHOLE_MANIFOLD, float(np.sum(C_e * np.eye(n))))

    u, sigma, vt = _canonical_svd(C_e)
    gap_tol = _GAP_REL * fro
    det = float(np.linalg.det(C_e))

    if det < 0:
        # all singular values are positive here, so U = u vt has det -1
        h = vt[-1, :]  # right-singular vector of the smallest singular value
        q = (u @ vt) @ (np.eye(n) - 2.0 * np.outer(h, h))
        value = float(sigma.sum() - 2.0 * sigma[-1])
        unique = bool(sigma[-2] - sigma[-1] > gap_tol)
        degenerate = (
            None
            if unique
            else "reflections along the tied smallest singular directions"
        )
        return MeanResult(ManifoldPoint(desc, q), unique, degenerate, value)

    q = u @ vt
    if np.linalg.det(q) < 0:
        # det C_e = 0 up to round-off: flip the zero singular direction
        flip = np.eye(n)
        flip[-1, -1] = -1.0
        q = u @ flip @ vt
    value = float(sigma.sum())
    unique = bool(sigma[-1] > gap_tol)
    if unique:
        return MeanResult(ManifoldPoint(desc, q), True, None, value)
    null_mult = int(np.sum(sigma <= gap_tol))
    degenerate = f"rotations of the {null_mult}-dimensional null space of the centroid"
    return MeanResult(ManifoldPoint(desc, q), False, degenerate, value)


def iam_grassmann(C_e: np.ndarray, p: int) -> MeanResult:
    """Projector(s) onto dominant p-dimensional eigenspaces of ``C_e``.

    The optimum is the sum of the p largest eigenvalues; the maximizer is
    unique exactly when the p-th and (p+1)-th eigenvalues differ.
    """
    C_e = np.asarray(C_e, dtype=float)
    if C_e.ndim != 2 or C_e.shape[0] != C_e.shape[1]:
        raise ValueError("Grassmann centroid must be a square matrix")
    if np.linalg.norm(C_e - C_e.T) > 1e-9:
        raise ValueError("Grassmann centroid must be symmetric")
    n = C_e.shape[0]
    desc = grassmann(p, n)
    sym = 0.5 * (C_e + C_e.T)
    vals, vecs = np.linalg.eigh(sym)
    top = vecs[:, -p:]
    rep = ManifoldPoint(desc, top @ top.T)
    value = float(vals[-p:].sum())
    fro = float(np.linalg.norm(sym))
    gap_tol = _GAP_REL * fro
    gap = float(vals[-p] - vals[-p - 1])
    if gap > gap_tol:
        return MeanResult(rep, True, None, value)
    spread = float(vals[-1] - vals[0])
    degenerate = (
        WHOLE_MANIFOLD
        if spread <= gap_tol
        else "subspaces mixing the tied p-th and (p+1)-th eigendirections"
    )
    return MeanResult(rep, False, degenerate, value)


def critical_rotations(B: np.ndarray) -> list[ManifoldPoint]:
    """All rotations Q with ``Q^T B`` symmetric, for generic B.

    With ``B = U R`` a polar decomposition and ``R`` having distinct
    eigenvalues, the critical points of ``trace(Q^T B)`` on SO(n) are the
    2^(n-1) matrices ``U (I - 2 sum_{i in S} v_i v_i^T)`` over eigenvector
    subsets S whose parity matches the orientation of U.  Raises for
    (near-)repeated eigenvalues or a (near-)singular B, where the critical
    set is a continuum or the orientation is ambiguous.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1] or B.shape[0] < 2:
        raise ValueError("B must be a square matrix with n >= 2")
    n = B.shape[0]
    u, sigma, vt = _canonical_svd(B)
    gaps = sigma[:-1] - sigma[1:]
    if np.min(gaps) < 1e-6:
        raise ValueError(
            "eigenvalues of the polar factor R are nearly repeated; "
            "the critical set is a continuum"
        )
    if sigma[-1] < 1e-9 * sigma[0]:
        raise ValueError("B is nearly singular; polar orientation is ambiguous")
    u0 = u @ vt
    parity = 0 if np.linalg.det(u0) > 0 else 1
    v = vt.T
    desc = rotation_group(n)
    points = []
    for size in range(parity, n + 1, 2):
        for subset in combinations(range(n), size):
            refl = np.eye(n)
            for i in subset:
                refl -= 2.0 * np.outer(v[:, i], v[:, i])
            points.append(ManifoldPoint(desc, u0 @ refl))
    return points
