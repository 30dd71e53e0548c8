"""Geometry of the circle, the rotation groups SO(n) and the Grassmann
manifolds Grass(p, n) behind one embedding-centric interface.

Points carry their ambient representation: a unit vector in R^2 for the
circle, an n x n rotation matrix for SO(n), a rank-p orthogonal projector for
Grass(p, n).  All three embeddings have constant norm (1, sqrt(n), sqrt(p)),
which is what the mean and consensus machinery relies on.  The generic
operations are tangent projection, metric projection back onto the manifold
(used as the retraction), chordal distance, and uniform sampling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CIRCLE",
    "SO",
    "GRASSMANN",
    "MEMBERSHIP_TOL",
    "ManifoldDescriptor",
    "ManifoldPoint",
    "GrassmannBasis",
    "RetractionError",
    "circle",
    "rotation_group",
    "grassmann",
    "circle_point",
    "point_from_array",
    "angle_of",
    "membership_violation",
    "embed",
    "tangent_project",
    "project_to_manifold",
    "retract",
    "chordal_distance",
    "random_point",
    "principal_angles",
    "basis_to_projector",
    "projector_to_basis",
]

CIRCLE = "circle"
SO = "so"
GRASSMANN = "grassmann"

MEMBERSHIP_TOL = 1e-9


class RetractionError(RuntimeError):
    """The metric projection back onto the manifold failed (rank collapse)."""


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Identifies one of the three supported manifolds.

    ``kind`` is ``"circle"``, ``"so"`` or ``"grassmann"``; ``n`` is the matrix
    size for the matrix manifolds and ``p`` the subspace dimension for
    Grassmann (restricted to 1 <= p <= n/2).
    """

    kind: str
    n: int = 0
    p: int = 0

    def __post_init__(self):
        if self.kind == CIRCLE:
            if self.n or self.p:
                raise ValueError("circle descriptor takes no n or p")
        elif self.kind == SO:
            if self.n < 2:
                raise ValueError("SO(n) requires n >= 2")
            if self.p:
                raise ValueError("SO(n) descriptor takes no p")
        elif self.kind == GRASSMANN:
            if self.n < 2 or self.p < 1 or 2 * self.p > self.n:
                raise ValueError("Grass(p, n) requires 1 <= p <= n/2")
        else:
            raise ValueError(f"unknown manifold kind {self.kind!r}")

    @property
    def shape(self) -> tuple[int, ...]:
        """Native array shape of a point's ambient representation."""
        return (2,) if self.kind == CIRCLE else (self.n, self.n)

    @property
    def embedding_dim(self) -> int:
        return 2 if self.kind == CIRCLE else self.n * self.n

    @property
    def radius(self) -> float:
        """Common embedding norm of every point on the manifold."""
        if self.kind == CIRCLE:
            return 1.0
        if self.kind == SO:
            return float(np.sqrt(self.n))
        return float(np.sqrt(self.p))


def circle() -> ManifoldDescriptor:
    return ManifoldDescriptor(CIRCLE)


def rotation_group(n: int) -> ManifoldDescriptor:
    return ManifoldDescriptor(SO, n=n)


def grassmann(p: int, n: int) -> ManifoldDescriptor:
    return ManifoldDescriptor(GRASSMANN, n=n, p=p)


def membership_violation(desc: ManifoldDescriptor, data: np.ndarray) -> float:
    """How far an ambient array is from satisfying the manifold invariants.

    Returns +inf for a rotation candidate with nonpositive determinant.
    """
    if data.shape != desc.shape:
        raise ValueError(f"expected shape {desc.shape}, got {data.shape}")
    if desc.kind == CIRCLE:
        return float(abs(np.linalg.norm(data) - 1.0))
    if desc.kind == SO:
        ortho = np.linalg.norm(data.T @ data - np.eye(desc.n))
        if np.linalg.det(data) <= 0:
            return np.inf
        return float(ortho)
    sym = np.linalg.norm(data - data.T)
    idem = np.linalg.norm(data @ data - data)
    tr = abs(np.trace(data) - desc.p)
    return float(max(sym, idem, tr))


@dataclass(frozen=True)
class ManifoldPoint:
    """A point on a manifold in its ambient representation (validated)."""

    descriptor: ManifoldDescriptor
    data: np.ndarray

    def __post_init__(self):
        d = np.array(self.data, dtype=float)
        v = membership_violation(self.descriptor, d)
        if not v <= MEMBERSHIP_TOL:
            raise ValueError(
                f"array is not on {self.descriptor.kind} "
                f"(invariant violation {v:.3e})"
            )
        d.flags.writeable = False
        object.__setattr__(self, "data", d)


def point_from_array(desc: ManifoldDescriptor, data: np.ndarray) -> ManifoldPoint:
    return ManifoldPoint(desc, data)


def circle_point(angle: float) -> ManifoldPoint:
    return ManifoldPoint(circle(), np.array([np.cos(angle), np.sin(angle)]))


def angle_of(pt: ManifoldPoint) -> float:
    """Angle in (-pi, pi] of a circle point."""
    if pt.descriptor.kind != CIRCLE:
        raise ValueError("angle_of applies to circle points only")
    return float(np.arctan2(pt.data[1], pt.data[0]))


def embed(pt: ManifoldPoint) -> np.ndarray:
    """Flattened (row-major) ambient representation."""
    return pt.data.reshape(-1).copy()


# ---------------------------------------------------------------------------
# tangent projection / manifold projection, single-point and batched forms
# ---------------------------------------------------------------------------


def _sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def _skew(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m - np.swapaxes(m, -1, -2))


def tangent_project_many(
    desc: ManifoldDescriptor, bases: np.ndarray, vs: np.ndarray
) -> np.ndarray:
    """Orthogonally project ambient vectors onto tangent spaces.

    ``bases`` and ``vs`` are stacked with the native point shape in the
    trailing axes; projection acts independently along the leading axes.
    """
    if desc.kind == CIRCLE:
        radial = np.sum(vs * bases, axis=-1, keepdims=True)
        return vs - radial * bases
    if desc.kind == SO:
        m = np.swapaxes(bases, -1, -2) @ vs
        return bases @ _skew(m)
    s = _sym(vs)
    ps = bases @ s
    return ps + np.swapaxes(ps, -1, -2) - 2.0 * bases @ s @ bases


def tangent_project(base: ManifoldPoint, v: np.ndarray) -> np.ndarray:
    """Project an ambient array onto the tangent space at ``base``.

    Circle: remove the radial component.  SO(n): ``Q skew(Q^T B)``.
    Grassmann: ``Pi M Pi_perp + Pi_perp M Pi`` of the symmetrized input.
    Accepts the native point shape (or the flat embedding vector).
    """
    desc = base.descriptor
    v = np.asarray(v, dtype=float)
    if v.shape != desc.shape:
        if v.shape == (desc.embedding_dim,):
            v = v.reshape(desc.shape)
        else:
            raise ValueError(f"tangent input has shape {v.shape}, expected {desc.shape}")
    return tangent_project_many(desc, base.data, v)


def project_many(
    desc: ManifoldDescriptor, ambient: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Metric projection of stacked ambient arrays onto the manifold.

    Returns ``(projected, ok)`` where ``ok`` flags the entries whose
    projection is well defined (nonzero vector / orientation-preserving polar
    factor / definite dominant-p eigenvalue gap).
    """
    if desc.kind == CIRCLE:
        norms = np.linalg.norm(ambient, axis=-1, keepdims=True)
        ok = norms[..., 0] > 1e-12
        safe = np.where(norms > 1e-12, norms, 1.0)
        return ambient / safe, ok
    if desc.kind == SO:
        u, _, vt = np.linalg.svd(ambient)
        q = u @ vt
        ok = np.linalg.det(q) > 0
        return q, ok
    vals, vecs = np.linalg.eigh(_sym(ambient))
    p = desc.p
    top = vecs[..., -p:]
    proj = top @ np.swapaxes(top, -1, -2)
    gap = vals[..., -p] - vals[..., -p - 1]
    ok = gap > 1e-12
    return proj, ok


def project_to_manifold(desc: ManifoldDescriptor, ambient: np.ndarray) -> np.ndarray:
    """Metric projection of one ambient array onto the manifold.

    Raises :class:`RetractionError` when the projection is ill defined
    (zero vector, orientation flip, or eigenvalue-gap collapse).
    """
    ambient = np.asarray(ambient, dtype=float)
    proj, ok = project_many(desc, ambient[None])
    if not bool(ok[0]):
        raise RetractionError(
            f"projection onto {desc.kind} failed: "
            "the input is too far from the manifold (rank or orientation collapse)"
        )
    return proj[0]


def retract(base: ManifoldPoint, tangent: np.ndarray, step: float) -> ManifoldPoint:
    """First-order retraction: metric projection of ``base + step * tangent``.

    ``retract(base, v, 0)`` returns ``base``; for small steps the result
    agrees with ``base + step * v`` to second order.
    """
    desc = base.descriptor
    tangent = np.asarray(tangent, dtype=float)
    if tangent.shape != desc.shape:
        if tangent.shape == (desc.embedding_dim,):
            tangent = tangent.reshape(desc.shape)
        else:
            raise ValueError(
                f"tangent has shape {tangent.shape}, expected {desc.shape}"
            )
    return ManifoldPoint(desc, project_to_manifold(desc, base.data + step * tangent))


def chordal_distance(a: ManifoldPoint, b: ManifoldPoint) -> float:
    """Euclidean distance between the embedded points."""
    if a.descriptor != b.descriptor:
        raise ValueError("points live on different manifolds")
    return float(np.linalg.norm(a.data - b.data))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_rotations(n: int, count: int, rng) -> np.ndarray:
    """Stack of ``count`` rotations drawn from the Haar measure on SO(n)."""
    rng = _as_rng(rng)
    g = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(g)
    # sign-fix makes QR unique, hence Haar on O(n)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    q = q * d[:, None, :]
    neg = np.linalg.det(q) < 0
    q[neg, :, -1] *= -1.0
    return q


def random_frames(n: int, p: int, count: int, rng) -> np.ndarray:
    """Stack of ``count`` uniformly random orthonormal n x p frames."""
    rng = _as_rng(rng)
    g = rng.standard_normal((count, n, p))
    q, r = np.linalg.qr(g)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    return q * d[:, None, :]


def random_point(desc: ManifoldDescriptor, seed) -> ManifoldPoint:
    """Uniform sample: uniform angle, Haar rotation, or the projector of a
    uniformly random orthonormal frame."""
    rng = _as_rng(seed)
    if desc.kind == CIRCLE:
        theta = rng.uniform(0.0, 2.0 * np.pi)
        return ManifoldPoint(desc, np.array([np.cos(theta), np.sin(theta)]))
    if desc.kind == SO:
        return ManifoldPoint(desc, haar_rotations(desc.n, 1, rng)[0])
    y = random_frames(desc.n, desc.p, 1, rng)[0]
    return ManifoldPoint(desc, y @ y.T)


@dataclass(frozen=True)
class GrassmannBasis:
    """An n x p matrix with orthonormal columns spanning a subspace."""

    Y: np.ndarray

    def __post_init__(self):
        y = np.array(self.Y, dtype=float)
        if y.ndim != 2 or y.shape[0] < y.shape[1] or y.shape[1] < 1:
            raise ValueError("basis must be an n x p matrix with 1 <= p <= n")
        if np.linalg.norm(y.T @ y - np.eye(y.shape[1])) > MEMBERSHIP_TOL:
            raise ValueError("basis columns must be orthonormal")
        y.flags.writeable = False
        object.__setattr__(self, "Y", y)

    @property
    def n(self) -> int:
        return self.Y.shape[0]

    @property
    def p(self) -> int:
        return self.Y.shape[1]


def principal_angles(a: GrassmannBasis, b: GrassmannBasis) -> np.ndarray:
    """Principal angles between two subspaces, ascending, in [0, pi/2].

    The cosines are the singular values of ``Y_a^T Y_b``; the identity
    ``||Pi_a - Pi_b||^2 = 2 sum_i sin^2(phi_i)`` links them to the chordal
    distance between the projectors.
    """
    if (a.n, a.p) != (b.n, b.p):
        raise ValueError("bases must share the same (n, p)")
    cos = np.linalg.svd(a.Y.T @ b.Y, compute_uv=False)
    return np.arccos(np.clip(cos, 0.0, 1.0))


def basis_to_projector(basis: GrassmannBasis) -> ManifoldPoint:
    """Projector ``Y Y^T`` of the spanned subspace (any orthonormal basis of
    the same subspace yields the same projector)."""
    desc = grassmann(basis.p, basis.n)
    return ManifoldPoint(desc, basis.Y @ basis.Y.T)


def projector_to_basis(pt: ManifoldPoint) -> GrassmannBasis:
    """Some orthonormal basis of the range of a rank-p projector."""
    desc = pt.descriptor
    if desc.kind != GRASSMANN:
        raise ValueError("projector_to_basis applies to Grassmann points only")
    vals, vecs = np.linalg.eigh(pt.data)
    if vals[-desc.p] < 0.5:
        raise ValueError(
            f"matrix is not a rank-{desc.p} projector "
            f"(eigenvalue {vals[-desc.p]:.3f} at position p)"
        )
    return GrassmannBasis(vecs[:, -desc.p:])
