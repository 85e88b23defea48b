"""Noise injection and projection of noisy common lines data back onto the
valid set.

The projection minimizes the sum of squared projective pair distances
between the input and the data realized by a set of frames, so feasibility
is automatic: whatever the optimizer returns realizes *some* frameset and
is therefore valid.  Optimization is damped Gauss-Newton over per-frame
rotation charts with re-orthonormalization after every accepted step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    CommonLinesError,
    InitializationFailed,
)
from .geometry import Frame, FrameSet
from .grassmann import _rotation_from_vector
from .lines import CommonLinePair, CommonLinesData, _raw_quadruples, realize_all
from .reconstruct import reconstruct_triple
from .validity import triangle_gram


@dataclass(frozen=True)
class NoiseSpec:
    """Seeded Gaussian perturbation of the stored pair coordinates."""

    sigma: float
    seed: int = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")


@dataclass(frozen=True)
class ProjectionOptions:
    max_iters: int = 200
    grad_tol: float = 1e-12
    fd_step: float = 1e-6
    max_halvings: int = 25
    ineq_margin: float = 1e-10
    init_frames: FrameSet | None = None


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    projected: CommonLinesData
    frames: FrameSet
    objective: float
    iterations: int
    converged: bool
    objective_history: tuple = field(default=())


def perturb(data, spec):
    """Add per-coordinate Gaussian noise, then restore the constraints by
    rescaling each half to unit norm.  sigma = 0 is the identity."""
    rng = np.random.default_rng(spec.seed)
    pairs = {}
    for p in data.iter_pairs():
        if spec.sigma == 0.0:
            pairs[(p.i, p.j)] = p
            continue
        quad = p.quadruple() + rng.normal(0.0, spec.sigma, 4)
        pairs[(p.i, p.j)] = CommonLinePair.from_vectors(
            p.i, p.j, quad[:2] / np.linalg.norm(quad[:2]),
            quad[2:] / np.linalg.norm(quad[2:]),
        )
    return CommonLinesData(data.n, pairs)


def _procrustes(src, dst):
    """Orthogonal least-squares fit A with A @ src ~= dst (columns paired)."""
    U, _, Vt = np.linalg.svd(dst @ src.T)
    return U @ Vt


def _frame_pair_columns(frame):
    return np.column_stack([frame.a, frame.b])


def _best_effort_init(data, ineq_margin):
    """Initial frames: reconstruct the best-conditioned triple, then glue
    each remaining plane through a triple on two already-placed planes,
    accepting least-squares gluings even when the data is inconsistent."""
    triples = sorted(
        combinations(range(1, data.n + 1), 3),
        key=lambda t: -triangle_gram(data, *t, ineq_margin=ineq_margin).gram_value,
    )
    base = None
    for t in triples:
        try:
            base = reconstruct_triple(data, *t, ineq_margin=ineq_margin)
            break
        except CommonLinesError:
            continue
    if base is None:
        raise InitializationFailed("no triple admits a realization")
    placed = {idx: base.frame(idx) for idx in base.indices}
    remaining = [i for i in range(1, data.n + 1) if i not in placed]
    for i in remaining:
        best = None
        for p, q in combinations(sorted(placed), 2):
            cert = triangle_gram(data, p, q, i, ineq_margin=ineq_margin)
            if cert.passes and (best is None or cert.gram_value > best[0]):
                best = (cert.gram_value, (p, q))
        frame_i = None
        if best is not None:
            p, q = best[1]
            try:
                triple = reconstruct_triple(data, p, q, i, ineq_margin=ineq_margin)
                src = np.column_stack(
                    [_frame_pair_columns(triple.frame(p)),
                     _frame_pair_columns(triple.frame(q))]
                )
                dst = np.column_stack(
                    [_frame_pair_columns(placed[p]), _frame_pair_columns(placed[q])]
                )
                A = _procrustes(src, dst)
                frame_i = triple.frame(i).rotate(A)
            except CommonLinesError:
                frame_i = None
        if frame_i is None:
            # Deterministic fallback for planes with no usable triple.
            rng = np.random.default_rng(i)
            g = rng.standard_normal((2, 3))
            frame_i = Frame(*_gram_schmidt(g[0], g[1]))
        placed[i] = frame_i
    return FrameSet(tuple(placed[i] for i in range(1, data.n + 1)))


def _gram_schmidt(a, b):
    a = a / np.linalg.norm(a)
    b = b - (b @ a) * a
    return a, b / np.linalg.norm(b)


def _unit_quads(frames):
    _, quads = _raw_quadruples(frames)
    return quads / np.linalg.norm(quads, axis=1, keepdims=True)


def _residual(frames, target):
    """Per-pair residual u_n - (u_n . u_r) u_r; its squared norm summed over
    pairs is the sum of squared pair distances (sign-free by symmetry)."""
    u_r = _unit_quads(frames)
    dots = np.sum(target * u_r, axis=1)
    return (target - dots[:, None] * u_r).ravel()


def _apply_chart(frames, omega):
    out = []
    for idx, f in enumerate(frames):
        out.append(f.rotate(_rotation_from_vector(omega[3 * idx: 3 * idx + 3])))
    return out


def project_to_cn(noisy, opts=None, tol_generic=1e-8):
    """Project noisy common lines data onto the set realizable by frames.

    Returns the realized data of the minimizing frameset; it is valid by
    construction.  converged is False when the iteration cap is reached
    with a gradient still above tolerance.
    """
    opts = opts or ProjectionOptions()
    target = np.array([p.quadruple() for p in noisy.iter_pairs()])
    target = target / np.linalg.norm(target, axis=1, keepdims=True)
    if opts.init_frames is not None:
        frames = list(opts.init_frames.frames)
    else:
        frames = list(_best_effort_init(noisy, opts.ineq_margin).frames)
    nf = len(frames)

    def objective(fr):
        r = _residual(fr, target)
        return float(r @ r)

    f_cur = objective(frames)
    history = [f_cur]
    converged = False
    iterations = 0
    for iterations in range(1, opts.max_iters + 1):
        r0 = _residual(frames, target)
        # Central-difference Jacobian over the 3N chart parameters.
        J = np.empty((r0.size, 3 * nf))
        for col in range(3 * nf):
            w = np.zeros(3 * nf)
            w[col] = opts.fd_step
            rp = _residual(_apply_chart(frames, w), target)
            rm = _residual(_apply_chart(frames, -w), target)
            J[:, col] = (rp - rm) / (2.0 * opts.fd_step)
        grad = J.T @ r0
        if np.max(np.abs(grad)) <= opts.grad_tol or f_cur <= 1e-18:
            converged = True
            iterations -= 1
            break
        delta, *_ = np.linalg.lstsq(J, -r0, rcond=None)
        accepted = False
        t = 1.0
        for _ in range(opts.max_halvings):
            trial = _apply_chart(frames, t * delta)
            f_trial = objective(trial)
            if f_trial < f_cur:
                frames = trial
                f_cur = f_trial
                history.append(f_cur)
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # No descent along the Gauss-Newton direction: stationary.
            converged = bool(np.max(np.abs(grad)) <= max(opts.grad_tol, 1e-10))
            break
    projected = realize_all(FrameSet(tuple(frames)), tol_generic=tol_generic)
    return ProjectionResult(
        projected,
        FrameSet(tuple(frames)),
        f_cur,
        iterations,
        converged,
        tuple(history),
    )
