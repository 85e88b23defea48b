"""Plücker coordinates of frame sets and the projection back to common lines.

The 3 x 2N matrix [a_1 b_1 ... a_N b_N] spans a 3-plane of R^{2N}; its
(2N choose 3) minors are the Plücker coordinates.  Minors drawing columns
from only two frames are exactly the common-line coordinates; discarding
the rest projects back to common lines data.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import NotGeneric, RankDeficient, UndefinedProjection
from .geometry import FrameSet, _frozen, embed
from .lines import (
    CommonLinePair,
    CommonLinesData,
    _canonical_sign,
    _raw_quadruples,
    realize_pair,
)


@lru_cache(maxsize=None)
def column_triples(num_columns):
    """Lexicographic column triples indexing the stored minors."""
    return tuple(combinations(range(num_columns), 3))


@lru_cache(maxsize=None)
def _triple_positions(num_columns):
    return {cols: pos for pos, cols in enumerate(column_triples(num_columns))}


@dataclass(frozen=True, eq=False)
class PlueckerPoint:
    """Projective vector of all 3x3 minors of a 3 x 2n frame matrix, stored
    unit-normalized with the first nonzero coordinate positive."""

    n: int
    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        expected = len(column_triples(2 * self.n))
        if coords.shape != (expected,):
            raise ValueError(
                f"expected {expected} Plücker coordinates for n={self.n}"
            )
        norm = np.linalg.norm(coords)
        if norm == 0.0:
            raise ValueError("Plücker coordinates cannot all vanish")
        coords = coords / norm
        coords = _canonical_sign(coords) * coords
        object.__setattr__(self, "coords", _frozen(coords))

    def minor(self, cols):
        """Minor for an ordered column triple, with the permutation sign
        relative to the stored lexicographic order."""
        ordered = tuple(sorted(cols))
        if len(set(ordered)) != 3:
            return 0.0
        sign = 1.0
        cols = list(cols)
        for a in range(3):  # bubble parity of a 3-permutation
            for bpos in range(a + 1, 3):
                if cols[a] > cols[bpos]:
                    sign = -sign
        return sign * float(self.coords[_triple_positions(2 * self.n)[ordered]])


def pluecker_embed(frames, rank_tol=1e-9):
    """Plücker point of a frame sequence (invariant under a global O(3)
    transform, up to the projective normalization)."""
    frame_list = list(frames)
    n = len(frame_list)
    cols = np.empty((3, 2 * n))
    for idx, f in enumerate(frame_list):
        cols[:, 2 * idx] = f.a
        cols[:, 2 * idx + 1] = f.b
    svals = np.linalg.svd(cols, compute_uv=False)
    if svals[2] < rank_tol * svals[0]:
        raise RankDeficient("frame matrix has numerical rank below 3")
    minors = np.array(
        [np.linalg.det(cols[:, list(t)]) for t in column_triples(2 * n)]
    )
    return PlueckerPoint(n, minors)


def pluecker_project(point, n=None, tol=1e-12, pair_tol=1e-9):
    """Common lines data from a Plücker point, discarding the bad minors.

    For each pair (i, j) the four two-frame minors become, with the
    appropriate signs, the quadruple [x_ij : y_ij : x_ji : y_ji].  Raises
    UndefinedProjection when all four vanish for some pair.
    """
    if n is not None and n != point.n:
        raise ValueError(f"point stores n={point.n}, got n={n}")
    n = point.n
    pairs = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            ai, bi = 2 * (i - 1), 2 * (i - 1) + 1
            aj, bj = 2 * (j - 1), 2 * (j - 1) + 1
            quad = np.array(
                [
                    -point.minor((aj, bj, bi)),
                    point.minor((aj, bj, ai)),
                    point.minor((ai, bi, bj)),
                    -point.minor((ai, bi, aj)),
                ]
            )
            if np.max(np.abs(quad)) < tol:
                raise UndefinedProjection(
                    f"all four minors of pair ({i}, {j}) vanish"
                )
            pairs[(i, j)] = CommonLinePair.from_vectors(
                i, j, quad[:2], quad[2:], tol=pair_tol
            )
    return CommonLinesData(n, pairs)


@dataclass(frozen=True, eq=False)
class GaugeSplit:
    """A frameset split into its Plücker point and the gauge rotation
    [a_1, b_1, xi * a_1 x b_1]."""

    point: PlueckerPoint
    gauge: np.ndarray
    xi: int

    def __post_init__(self):
        object.__setattr__(self, "gauge", _frozen(self.gauge))


def eta_split(frames, tol=1e-9):
    """Split a generic frameset into (Plücker point, gauge rotation).

    The sign xi = sign det[L_12, L_13, L_23] makes the split injective,
    *provided* the embedded intersection directions L_ij are anchored to
    the frameset's own common lines data: we take L_ij as the embedding of
    the canonical stored representative v_ij.  (Anchoring to c_i x c_j
    instead would pick up a det(R) factor per column under a global
    transform R, leaving the determinant - hence xi - blind to improper
    transforms.)  With this choice L_ij -> R L_ij, so xi flips exactly
    under improper global transforms and the gauge column xi * c_1
    separates a frameset from its mirror sharing the same Plücker point.
    """
    if not isinstance(frames, FrameSet):
        frames = FrameSet(tuple(frames))
    f1, f2 = frames.frames[0], frames.frames[1]
    lams = [
        embed(f1, realize_pair(f1, f2).v_ij),
        embed(f1, realize_pair(f1, frames.frames[2]).v_ij),
        embed(f2, realize_pair(f2, frames.frames[2]).v_ij),
    ]
    det = np.linalg.det(np.column_stack(lams))
    if abs(det) < tol:
        raise NotGeneric("the first three intersection directions are dependent")
    xi = 1 if det > 0 else -1
    gauge = np.column_stack([f1.a, f1.b, xi * f1.c])
    return GaugeSplit(pluecker_embed(frames), gauge, xi)


def _rotation_from_vector(w):
    """Rodrigues' formula for exp of the skew matrix of w."""
    theta = np.linalg.norm(w)
    if theta < 1e-300:
        return np.eye(3)
    k = w / theta
    K = np.array(
        [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]]
    )
    return np.eye(3) + np.sin(theta) * K + (1.0 - np.cos(theta)) * (K @ K)


def _normalized_pair_vector(frames, reference=None):
    """Concatenated unit pair quadruples, sign-aligned to a reference so the
    map is smooth for finite differencing."""
    _, quads = _raw_quadruples(frames)
    quads = quads / np.linalg.norm(quads, axis=1, keepdims=True)
    if reference is not None:
        flips = np.sign(np.sum(quads * reference, axis=1))
        flips[flips == 0] = 1.0
        quads = quads * flips[:, None]
    return quads


def jacobian_rank_at(frames, step=1e-5, rank_tol=1e-6):
    """Numerical rank of the frames -> common-line-coordinates map.

    Each frame is perturbed through its 3-parameter rotation chart and the
    central-difference Jacobian of the concatenated normalized pair
    coordinates is taken; singular values above rank_tol (relative to the
    largest) count toward the rank.
    """
    if not isinstance(frames, FrameSet):
        frames = FrameSet(tuple(frames))
    base_frames = list(frames.frames)
    ref = _normalized_pair_vector(base_frames)
    columns = []
    for m in range(len(base_frames)):
        for axis in range(3):
            w = np.zeros(3)
            w[axis] = step
            plus = list(base_frames)
            plus[m] = plus[m].rotate(_rotation_from_vector(w))
            minus = list(base_frames)
            minus[m] = minus[m].rotate(_rotation_from_vector(-w))
            yp = _normalized_pair_vector(plus, ref)
            ym = _normalized_pair_vector(minus, ref)
            columns.append((yp - ym).ravel() / (2.0 * step))
    J = np.column_stack(columns)
    svals = np.linalg.svd(J, compute_uv=False)
    return int(np.sum(svals > rank_tol * svals[0]))
