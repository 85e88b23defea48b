"""Constructive recovery of realizing frames from valid common lines data.

The construction follows the sufficiency proofs: each triple of planes is
realized on a canonically placed spherical triangle, and triples sharing a
pair of indices are glued by the unique orthogonal map matching their
shared frames.  The output is deterministic (canonical gauge) and unique
up to a single global O(3) element.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import (
    DegenerateInput,
    IncompatibleTriples,
    InvalidData,
    NotIsometric,
    TriangleInequalityViolated,
)
from .geometry import Frame, FrameSet, align_o3, embed, spherical_triangle_vertices
from .lines import triple_angles
from .validity import Tolerances, is_valid, triangle_gram

_REFLECTION = np.diag([1.0, 1.0, -1.0])


@dataclass(frozen=True, eq=False)
class TripleFrames:
    """Frames realizing the three common line pairs of a triple (i, j, k)."""

    indices: tuple
    frames: tuple  # (F_i, F_j, F_k), positional w.r.t. indices

    def frame(self, idx):
        return self.frames[self.indices.index(idx)]

    def rotate(self, R):
        return TripleFrames(self.indices, tuple(f.rotate(R) for f in self.frames))


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    frames: FrameSet
    max_residual: float
    base_indices: tuple
    gauge_note: str = "canonical spherical-triangle placement of the base triple"


def _plane_isometry(u1, u2, w1, w2):
    """3x2 matrix of the unique plane isometry with u1 -> w1 and u2 -> w2.

    u1, u2 are unit 2-vectors, w1, w2 unit 3-vectors, and the pairs have
    equal inner products (the angle between them is the same).
    """
    s = u1[0] * u2[1] - u1[1] * u2[0]
    if s == 0.0:
        raise DegenerateInput("plane isometry needs independent source vectors")
    cos_t = w1 @ w2
    w_perp = w2 - cos_t * w1
    w_perp = w_perp / np.linalg.norm(w_perp)
    if s < 0:
        w_perp = -w_perp
    u1_perp = np.array([-u1[1], u1[0]])
    return np.outer(w1, u1) + np.outer(w_perp, u1_perp)


def reconstruct_triple(data, i, j, k, ineq_margin=1e-10):
    """Frames realizing the pairs of one triple, on the canonical triangle.

    The plane isometries send the stored representatives onto the triangle
    vertices: v_ij, v_ji -> L_ij, v_ik, v_ki -> L_ik, v_jk, v_kj -> L_jk.
    """
    cert = triangle_gram(data, i, j, k, ineq_margin)
    if not cert.passes:
        raise TriangleInequalityViolated(
            f"triple ({i}, {j}, {k}) fails the triangle certificate "
            f"(gram value {cert.gram_value:.3e})"
        )
    angles = triple_angles(data, i, j, k)
    l_ij, l_ik, l_jk = spherical_triangle_vertices(
        angles.alpha, angles.beta, angles.gamma
    )
    m_i = _plane_isometry(data.rep(i, j), data.rep(i, k), l_ij, l_ik)
    m_j = _plane_isometry(data.rep(j, i), data.rep(j, k), l_ij, l_jk)
    m_k = _plane_isometry(data.rep(k, i), data.rep(k, j), l_ik, l_jk)
    frames = tuple(Frame(m[:, 0], m[:, 1]) for m in (m_i, m_j, m_k))
    return TripleFrames((i, j, k), frames)


def gluing_rotation(left, right, tol=1e-8):
    """The unique orthogonal A mapping left's frames at the shared pair
    (i, j) onto right's.

    Raises IncompatibleTriples when no such A exists within tol, which
    signals a law-of-cosines violation between the two triples.
    """
    if left.indices[:2] != right.indices[:2]:
        raise ValueError("triples must share their leading index pair")
    i, j = left.indices[:2]
    fi, fj = left.frame(i), left.frame(j)
    gi, gj = right.frame(i), right.frame(j)
    # Third solve vector: the column of F_j least coplanar with F_i.
    if abs(np.linalg.det(np.column_stack([fi.a, fi.b, fj.a]))) >= abs(
        np.linalg.det(np.column_stack([fi.a, fi.b, fj.b]))
    ):
        src3, dst3 = fj.a, gj.a
    else:
        src3, dst3 = fj.b, gj.b
    try:
        A = align_o3((fi.a, fi.b, src3), (gi.a, gi.b, dst3), tol=tol)
    except (NotIsometric, DegenerateInput) as exc:
        raise IncompatibleTriples(
            f"triples {left.indices} and {right.indices}: {exc}"
        ) from exc
    residual = max(
        np.linalg.norm(A @ fi.a - gi.a),
        np.linalg.norm(A @ fi.b - gi.b),
        np.linalg.norm(A @ fj.a - gj.a),
        np.linalg.norm(A @ fj.b - gj.b),
    )
    if residual > tol:
        raise IncompatibleTriples(
            f"no orthogonal map glues triples {left.indices} and "
            f"{right.indices} (residual {residual:.3e})"
        )
    return A


def _resolve_base(data, base_triple, ineq_margin):
    if base_triple == "first":
        return (1, 2, 3)
    if base_triple == "best":
        best = None
        for triple in combinations(range(1, data.n + 1), 3):
            cert = triangle_gram(data, *triple, ineq_margin=ineq_margin)
            if best is None or cert.gram_value > best[0]:
                best = (cert.gram_value, triple)
        return best[1]
    triple = tuple(base_triple)
    if len(triple) != 3 or len(set(triple)) != 3:
        raise ValueError("base_triple must be 'first', 'best', or 3 distinct indices")
    return triple


def reconstruct_all(
    data,
    tolerances=None,
    base_triple="first",
    validate=True,
    glue_tol=1e-8,
    residual_tol=1e-8,
):
    """Assemble realizing frames for all planes from valid data.

    The base triple is reconstructed first; every other plane i is
    reconstructed through the triple (p, q, i) sharing the base's leading
    pair and glued on via the unique orthogonal map (with an incoming
    reflection applied when that map is improper, which fixes its
    determinant to +1).  A final pass verifies every pair and records the
    maximum realization residual.
    """
    tol = tolerances or Tolerances()
    if validate:
        report = is_valid(data, tol)
        if not report.ok:
            raise InvalidData(
                f"data is {report.verdict}; worst offender: "
                f"{report.worst_offenders[0] if report.worst_offenders else None}",
                report,
            )
    base_idx = _resolve_base(data, base_triple, tol.ineq_margin)
    p, q, r = base_idx
    base = reconstruct_triple(data, p, q, r, tol.ineq_margin)
    frames = {p: base.frame(p), q: base.frame(q), r: base.frame(r)}
    for i in range(1, data.n + 1):
        if i in frames:
            continue
        triple = reconstruct_triple(data, p, q, i, tol.ineq_margin)
        A = gluing_rotation(base, triple, tol=glue_tol)
        if np.linalg.det(A) < 0:
            triple = triple.rotate(_REFLECTION)
            A = _REFLECTION @ A
        frames[i] = triple.frame(i).rotate(A.T)
    frameset = FrameSet(tuple(frames[i] for i in range(1, data.n + 1)))
    max_residual = 0.0
    for pair in data.iter_pairs():
        diff = embed(frameset.frame(pair.i), pair.v_ij) - embed(
            frameset.frame(pair.j), pair.v_ji
        )
        max_residual = max(max_residual, float(np.linalg.norm(diff)))
    if validate and max_residual > residual_tol:
        raise IncompatibleTriples(
            f"assembled frames violate the input pairs (max residual "
            f"{max_residual:.3e} > {residual_tol:.3e})"
        )
    return ReconstructionResult(frameset, max_residual, base_idx)


def _stacked_pair_vectors(frameset):
    f1, f2 = frameset.frames[0], frameset.frames[1]
    return np.column_stack([f1.a, f1.b, f2.a, f2.b])


def frameset_distance_mod_o3(first, second):
    """Gauge-invariant distance between two framesets of the same size.

    Fits the global orthogonal transform on the first two frames (both
    determinant signs) and returns the minimized worst per-frame Frobenius
    mismatch of the (a, b) columns.
    """
    if first.n != second.n:
        raise ValueError("framesets must have the same number of frames")
    S = _stacked_pair_vectors(first)
    D = _stacked_pair_vectors(second)
    U, _, Vt = np.linalg.svd(D @ S.T)
    candidates = [U @ Vt, U @ _REFLECTION @ Vt]
    best = np.inf
    for R in candidates:
        worst = 0.0
        for f, g in zip(first.frames, second.frames):
            worst = max(worst, float(np.linalg.norm(R @ f.matrix - g.matrix)))
        best = min(best, worst)
    return best
