"""Common-lines data in projective coordinates.

A detected common line between planes i and j is a projective quadruple
[v_ij : v_ji] subject to ||v_ij||^2 = ||v_ji||^2.  We store the canonical
representative with both halves unit length and the first nonzero
coordinate of v_ij positive, which makes serialization bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    CoincidentPlanes,
    DegenerateAngle,
    DegenerateInput,
    NormMismatch,
)
from .geometry import FrameSet, _as_vec, _frozen

DEFAULT_TOL = 1e-9

_SIGN_EPS = 1e-12


def _canonical_sign(u):
    for x in u:
        if abs(x) > _SIGN_EPS:
            return 1.0 if x > 0 else -1.0
    return 1.0


@dataclass(frozen=True, eq=False)
class CommonLinePair:
    """One common line between planes i < j, stored in canonical form.

    norm_residual records the relative mismatch |‖v_ij‖^2 - ‖v_ji‖^2| /
    (‖v_ij‖^2 + ‖v_ji‖^2) of the vectors the pair was built from; it is 0
    for pairs realized from frames and may be positive for pairs ingested
    leniently from files.
    """

    i: int
    j: int
    v_ij: np.ndarray
    v_ji: np.ndarray
    norm_residual: float = 0.0

    def __post_init__(self):
        if not (0 < self.i < self.j):
            raise ValueError("pair indices must satisfy 1 <= i < j")
        u = _as_vec(self.v_ij, 2)
        w = _as_vec(self.v_ji, 2)
        if abs(u @ u - 1.0) > 1e-6 or abs(w @ w - 1.0) > 1e-6:
            raise ValueError(
                "CommonLinePair stores unit halves; use CommonLinePair.from_vectors"
            )
        object.__setattr__(self, "v_ij", _frozen(u))
        object.__setattr__(self, "v_ji", _frozen(w))

    @classmethod
    def from_vectors(cls, i, j, v_ij, v_ji, tol=DEFAULT_TOL, strict=True):
        """Normalize an arbitrary representative of [v_ij : v_ji].

        With strict=True (the default) a violation of the norm-equality
        constraint beyond tol is rejected; strict=False records it in
        norm_residual instead, for later certification.
        """
        u = _as_vec(v_ij, 2)
        w = _as_vec(v_ji, 2)
        nu2 = float(u @ u)
        nw2 = float(w @ w)
        total = nu2 + nw2
        if total == 0.0 or nu2 == 0.0 or nw2 == 0.0:
            raise DegenerateInput(f"zero common-line vector for pair ({i}, {j})")
        residual = abs(nu2 - nw2) / total
        if strict and residual > tol:
            raise NormMismatch(
                f"pair ({i}, {j}): |v_ij|^2 and |v_ji|^2 differ by "
                f"relative {residual:.3e} > {tol:.3e}"
            )
        # Skip the division for halves that are already unit to the last
        # bit, so normalization is idempotent and canonical files survive a
        # load/save round trip byte-identically.
        if abs(nu2 - 1.0) > 1e-14:
            u = u / np.sqrt(nu2)
        if abs(nw2 - 1.0) > 1e-14:
            w = w / np.sqrt(nw2)
        s = _canonical_sign(u)
        return cls(i, j, s * u, s * w, norm_residual=residual)

    def quadruple(self):
        """The stored representative as a 4-vector (x_ij, y_ij, x_ji, y_ji)."""
        return np.concatenate([self.v_ij, self.v_ji])


@dataclass(frozen=True, eq=False)
class CommonLinesData:
    """A full collection of (n choose 2) common line pairs, keyed by (i, j)."""

    n: int
    pairs: dict

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("common lines data needs n >= 3")
        expected = {(i, j) for i, j in combinations(range(1, self.n + 1), 2)}
        if set(self.pairs) != expected:
            raise ValueError(
                f"expected exactly the {len(expected)} pairs (i, j) with "
                f"1 <= i < j <= {self.n}"
            )
        for (i, j), p in self.pairs.items():
            if (p.i, p.j) != (i, j):
                raise ValueError(f"pair stored under {(i, j)} carries indices {(p.i, p.j)}")
        object.__setattr__(self, "pairs", dict(self.pairs))

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        n = max(p.j for p in pairs)
        return cls(n, {(p.i, p.j): p for p in pairs})

    def pair(self, i, j):
        return self.pairs[(i, j)]

    def rep(self, i, j):
        """The stored unit vector v_ij in plane i, for any ordered (i, j)."""
        if i < j:
            return self.pairs[(i, j)].v_ij
        return self.pairs[(j, i)].v_ji

    def iter_pairs(self):
        for key in sorted(self.pairs):
            yield self.pairs[key]


@dataclass(frozen=True)
class TripleAngles:
    """Arc lengths of the spherical triangle attached to a triple (i, j, k)."""

    indices: tuple
    alpha: float
    beta: float
    gamma: float


def _raw_quadruples(frames):
    """Unnormalized quadruples for all pairs of a frame sequence.

    Uses the triple-product identity det[a_j, b_j, x] = (a_j x b_j) . x, so
    every pair costs four dot products.  Returns (keys, (P, 4) array) with
    1-based keys in sorted order.
    """
    A = np.array([f.a for f in frames])
    B = np.array([f.b for f in frames])
    C = np.array([f.c for f in frames])
    X = C @ A.T  # X[p, q] = c_p . a_q
    Y = C @ B.T
    keys = []
    quads = []
    nf = len(A)
    for i in range(nf):
        for j in range(i + 1, nf):
            keys.append((i + 1, j + 1))
            quads.append((-Y[j, i], X[j, i], Y[i, j], -X[i, j]))
    return keys, np.array(quads)


def realize_pair(frame_i, frame_j, i=1, j=2, tol=DEFAULT_TOL):
    """Common line pair realized by two frames, via the vector quadruple
    product: v_ij = (-det[a_j,b_j,b_i], det[a_j,b_j,a_i]) and
    v_ji = (det[a_i,b_i,b_j], -det[a_i,b_i,a_j])."""
    c_i = frame_i.c
    c_j = frame_j.c
    if np.linalg.norm(np.cross(c_i, c_j)) < tol:
        raise CoincidentPlanes(f"frames {i} and {j} span the same plane")
    v_ij = np.array([-(c_j @ frame_i.b), c_j @ frame_i.a])
    v_ji = np.array([c_i @ frame_j.b, -(c_i @ frame_j.a)])
    return CommonLinePair.from_vectors(i, j, v_ij, v_ji, tol=tol)


def realize_all(frames, tol_generic=1e-8):
    """Common lines data realized by a generic FrameSet."""
    if not isinstance(frames, FrameSet):
        frames = FrameSet(tuple(frames))
    frames.check_generic(tol_generic)
    keys, quads = _raw_quadruples(frames.frames)
    pairs = {}
    for (i, j), q in zip(keys, quads):
        pairs[(i, j)] = CommonLinePair.from_vectors(i, j, q[:2], q[2:])
    return CommonLinesData(frames.n, pairs)


def triple_angles(data, i, j, k, tol=DEFAULT_TOL):
    """Angles (alpha, beta, gamma) of a triple, computed from the stored
    representatives: alpha at plane i, beta at plane j, gamma at plane k."""
    if len({i, j, k}) != 3:
        raise ValueError("triple indices must be distinct")
    cos_a = float(np.clip(data.rep(i, j) @ data.rep(i, k), -1.0, 1.0))
    cos_b = float(np.clip(data.rep(j, i) @ data.rep(j, k), -1.0, 1.0))
    cos_g = float(np.clip(data.rep(k, i) @ data.rep(k, j), -1.0, 1.0))
    angles = (np.arccos(cos_a), np.arccos(cos_b), np.arccos(cos_g))
    for name, t in zip("alpha beta gamma".split(), angles):
        if min(t, np.pi - t) < tol:
            raise DegenerateAngle(
                f"{name} of triple ({i}, {j}, {k}) is within {tol} of 0 or pi"
            )
    return TripleAngles((i, j, k), *angles)


def pair_distance(p, q):
    """Sine of the angle between two pairs' unit 4-vector representatives,
    after optimal sign alignment.  Zero iff equal as projective points."""
    if (p.i, p.j) != (q.i, q.j):
        raise ValueError("pair_distance requires pairs with the same indices")
    if np.array_equal(p.quadruple(), q.quadruple()):
        return 0.0
    u = p.quadruple() / np.sqrt(2.0)
    w = q.quadruple() / np.sqrt(2.0)
    # Rejection norm = sine of the angle, stable near zero where the direct
    # sqrt(1 - cos^2) formula loses half the digits.
    return min(float(np.linalg.norm(u - (u @ w) * w)), 1.0)
