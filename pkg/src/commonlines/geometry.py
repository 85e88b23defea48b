"""3D primitives: frames, Haar sampling, plane embeddings, spherical
triangles, and exact orthogonal alignment.

A frame is an ordered pair of orthonormal vectors (a, b) in R^3; the viewing
direction c = a x b is implied and the basis (a, b, c) is always positively
oriented.  Everything downstream (common lines, certification,
reconstruction) is built on the operations in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    NotGeneric,
    NotIsometric,
    TriangleInequalityViolated,
)

DEFAULT_TOL = 1e-9

_E1 = np.array([1.0, 0.0, 0.0])


def _as_vec(v, dim):
    arr = np.asarray(v, dtype=float)
    if arr.shape != (dim,):
        raise ValueError(f"expected a vector of length {dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite components")
    return arr


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


def cross(u, v):
    """Cross product of two 3-vectors."""
    return np.cross(_as_vec(u, 3), _as_vec(v, 3))


@dataclass(frozen=True, eq=False)
class Frame:
    """Ordered orthonormal pair (a, b); one microscope orientation.

    Use :func:`make_frame` to build a frame from unnormalized input.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = _as_vec(self.a, 3)
        b = _as_vec(self.b, 3)
        if (
            abs(a @ a - 1.0) > 1e-6
            or abs(b @ b - 1.0) > 1e-6
            or abs(a @ b) > 1e-6
        ):
            raise ValueError("Frame vectors must be orthonormal; use make_frame")
        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "b", _frozen(b))

    @property
    def c(self):
        """Viewing direction a x b."""
        return np.cross(self.a, self.b)

    @property
    def matrix(self):
        """3x2 matrix with columns (a, b)."""
        return np.column_stack([self.a, self.b])

    def rotate(self, R):
        """Frame obtained by applying an orthogonal matrix on the left."""
        return make_frame(R @ self.a, R @ self.b)


def make_frame(a, b, tol=DEFAULT_TOL):
    """Gram-Schmidt a pair of independent vectors into a Frame.

    Already-orthonormal inputs pass through unchanged up to rounding.
    Raises DegenerateInput when a and b are numerically collinear.
    """
    a = _as_vec(a, 3)
    b = _as_vec(b, 3)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0 or np.linalg.norm(np.cross(a, b)) < tol * na * nb:
        raise DegenerateInput("frame axes are collinear or zero")
    a = a / na
    b_perp = b - (b @ a) * a
    b = b_perp / np.linalg.norm(b_perp)
    return Frame(a, b)


def random_frame(rng):
    """Haar-uniform frame: two Gaussian vectors, Gram-Schmidt normalized."""
    while True:
        g = rng.standard_normal((2, 3))
        try:
            return make_frame(g[0], g[1])
        except DegenerateInput:  # pragma: no cover - probability zero
            continue


def random_orthogonal(rng, det=None):
    """Haar-uniform element of O(3); fix the determinant sign with det=+-1."""
    f = random_frame(rng)
    R = np.column_stack([f.a, f.b, f.c])
    if det is None:
        det = 1 if rng.integers(2) == 0 else -1
    if det < 0:
        R = R @ np.diag([1.0, 1.0, -1.0])
    return R


def embed(frame, p):
    """Isometric embedding of a plane point: (x, y) -> x a + y b."""
    p = _as_vec(p, 2)
    return p[0] * frame.a + p[1] * frame.b


def project(frame, v):
    """Orthogonal projection onto the frame's plane coordinates (v.a, v.b)."""
    v = _as_vec(v, 3)
    return np.array([v @ frame.a, v @ frame.b])


def check_spherical_triangle(alpha, beta, gamma):
    """Slack of the strict spherical-triangle conditions (positive = strict).

    Returns the minimum slack over: each angle in (0, pi), the three
    two-sided inequalities, and the perimeter bound 2*pi.
    """
    angles = (alpha, beta, gamma)
    slacks = [min(t, np.pi - t) for t in angles]
    slacks.append(beta + gamma - alpha)
    slacks.append(alpha + gamma - beta)
    slacks.append(alpha + beta - gamma)
    slacks.append(2.0 * np.pi - (alpha + beta + gamma))
    return min(slacks)


def spherical_triangle_vertices(alpha, beta, gamma):
    """Canonical unit vertices of the spherical triangle with the given arcs.

    The returned vertices (L_ij, L_ik, L_jk) satisfy
    angle(L_ij, L_ik) = alpha, angle(L_ij, L_jk) = beta,
    angle(L_ik, L_jk) = gamma.  The placement is deterministic: L_ij = e1,
    L_ik in the upper xy-plane, and L_jk in the upper half-space (z >= 0),
    which fixes the global-rotation gauge for reconstructions.
    """
    if check_spherical_triangle(alpha, beta, gamma) <= 0.0:
        raise TriangleInequalityViolated(
            f"arcs ({alpha}, {beta}, {gamma}) violate the strict "
            "spherical triangle inequalities"
        )
    ca, sa = np.cos(alpha), np.sin(alpha)
    cb, sb = np.cos(beta), np.sin(beta)
    cg = np.cos(gamma)
    # Dihedral angle at L_ij via the spherical law of cosines.
    cos_c = np.clip((cg - ca * cb) / (sa * sb), -1.0, 1.0)
    sin_c = np.sqrt(max(0.0, 1.0 - cos_c * cos_c))
    l_ij = _E1.copy()
    l_ik = np.array([ca, sa, 0.0])
    l_jk = np.array([cb, sb * cos_c, sb * sin_c])
    return l_ij, l_ik, l_jk


def align_o3(src, dst, tol=1e-8, dep_tol=1e-10):
    """The unique orthogonal matrix mapping three independent vectors onto
    three others with the same Gram matrix.

    Raises DegenerateInput when src is nearly dependent and NotIsometric
    when the two Gram matrices disagree beyond tol.
    """
    S = np.column_stack([_as_vec(v, 3) for v in src])
    D = np.column_stack([_as_vec(v, 3) for v in dst])
    scale = np.prod(np.linalg.norm(S, axis=0))
    if scale == 0.0 or abs(np.linalg.det(S)) < dep_tol * scale:
        raise DegenerateInput("source vectors are nearly dependent")
    gram_s = S.T @ S
    gram_d = D.T @ D
    if np.max(np.abs(gram_s - gram_d)) > tol * max(1.0, np.max(np.abs(gram_s))):
        raise NotIsometric("Gram matrices of src and dst disagree")
    A0 = D @ np.linalg.inv(S)
    # Polar projection cleans up rounding while preserving the det sign.
    U, _, Vt = np.linalg.svd(A0)
    return U @ Vt


@dataclass(frozen=True, eq=False)
class FrameSet:
    """An ordered collection of N >= 3 frames (indices are 1-based in the
    data model; the underlying tuple is 0-based)."""

    frames: tuple

    def __post_init__(self):
        frames = tuple(self.frames)
        if len(frames) < 3:
            raise ValueError("a FrameSet needs at least 3 frames")
        if not all(isinstance(f, Frame) for f in frames):
            raise TypeError("FrameSet entries must be Frame instances")
        object.__setattr__(self, "frames", frames)

    @property
    def n(self):
        return len(self.frames)

    def __len__(self):
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    def __getitem__(self, idx):
        return self.frames[idx]

    def frame(self, i):
        """1-based accessor matching the pair indexing of the data model."""
        return self.frames[i - 1]

    def rotate(self, R):
        return FrameSet(tuple(f.rotate(R) for f in self.frames))

    def normals(self):
        """(N, 3) array of viewing directions c_i."""
        return np.array([f.c for f in self.frames])

    def check_generic(self, tol=1e-8):
        """Raise NotGeneric unless planes and intersection lines are all
        pairwise distinct within tol."""
        n = self.n
        normals = self.normals()
        lines = {}
        for i in range(n):
            for j in range(i + 1, n):
                lam = np.cross(normals[i], normals[j])
                norm = np.linalg.norm(lam)
                if norm < tol:
                    raise NotGeneric(f"frames {i + 1} and {j + 1} span the same plane")
                lines[(i + 1, j + 1)] = lam / norm
        keys = sorted(lines)
        for p in range(len(keys)):
            for q in range(p + 1, len(keys)):
                if np.linalg.norm(np.cross(lines[keys[p]], lines[keys[q]])) < tol:
                    raise NotGeneric(
                        f"intersection lines {keys[p]} and {keys[q]} coincide"
                    )


def random_frameset(n, rng, tol=1e-8, max_tries=100):
    """Generic FrameSet of n Haar-uniform frames; resamples on the
    (measure-zero, numerically rare) event of a genericity failure."""
    for _ in range(max_tries):
        fs = FrameSet(tuple(random_frame(rng) for _ in range(n)))
        try:
            fs.check_generic(tol)
        except NotGeneric:
            continue
        return fs
    raise NotGeneric(f"failed to sample a generic frame set in {max_tries} tries")
