"""Semi-algebraic membership certification for valid common lines data.

Validity is certified by three families of conditions on the stored unit
representatives: the (n choose 2) norm-equality constraints, the
(n choose 3) Gram-form spherical triangle inequalities, and the
6 * (n choose 4) spherical law-of-cosines compatibilities between triples
sharing an edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DegenerateConfiguration

VERDICT_VALID = "Valid"
VERDICT_INVALID = "Invalid"
VERDICT_DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class Tolerances:
    """eq_tol bounds equality residuals; ineq_margin is the strictness
    margin required of the triangle inequality polynomial."""

    eq_tol: float = 1e-8
    ineq_margin: float = 1e-10

    def __post_init__(self):
        if self.eq_tol <= 0 or self.ineq_margin <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class TriangleCertificate:
    indices: tuple
    gram_value: float
    passes: bool


@dataclass(frozen=True)
class LocCertificate:
    indices: tuple  # ((i, j, k), (i, j, m)) with shared pair leading
    sigma: int
    residual_signed: float
    residual_squared: float
    passes: bool
    degenerate: bool = False


@dataclass(frozen=True)
class ValidityReport:
    n: int
    norm_checks: tuple  # of (i, j, residual)
    triangle_certificates: tuple
    loc_certificates: tuple
    verdict: str
    worst_offenders: tuple  # of (kind, indices, value), most severe first
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def ok(self):
        return self.verdict == VERDICT_VALID


def triangle_gram_value(cos_a, cos_b, cos_g):
    """Gram determinant of three unit vectors with pairwise cosines
    (cos_a, cos_b, cos_g); positive iff the angles bound a non-degenerate
    spherical triangle."""
    return (
        1.0
        - cos_a * cos_a
        - cos_b * cos_b
        - cos_g * cos_g
        + 2.0 * cos_a * cos_b * cos_g
    )


def triangle_gram(data, i, j, k, ineq_margin=1e-10):
    """Triangle certificate for a triple, evaluated on unit representatives."""
    cos_a = float(data.rep(i, j) @ data.rep(i, k))
    cos_b = float(data.rep(j, i) @ data.rep(j, k))
    cos_g = float(data.rep(k, i) @ data.rep(k, j))
    value = triangle_gram_value(cos_a, cos_b, cos_g)
    return TriangleCertificate((i, j, k), value, value > ineq_margin)


def _det2(u, v):
    return float(u[0] * v[1] - u[1] * v[0])


def loc_residual(data, triple_k, triple_m, eq_tol=1e-8, det_tol=1e-12):
    """Law-of-cosines compatibility between two triples sharing the pair
    (i, j) = triple_k[:2] = triple_m[:2].

    Both the signed residual L and the squared polynomial form are
    evaluated on unit representatives; they satisfy squared == signed**2.
    Raises DegenerateConfiguration when any of the four 2x2 determinants
    entering the sign sigma is below det_tol.
    """
    i, j, k = triple_k
    i2, j2, m = triple_m
    if (i, j) != (i2, j2) or len({i, j, k, m}) != 4:
        raise ValueError("triples must share exactly their leading pair (i, j)")
    v_ij = data.rep(i, j)
    v_ji = data.rep(j, i)
    v_ik = data.rep(i, k)
    v_jk = data.rep(j, k)
    v_im = data.rep(i, m)
    v_jm = data.rep(j, m)
    det_ik = _det2(v_ij, v_ik)
    det_im = _det2(v_ij, v_im)
    det_jk = _det2(v_ji, v_jk)
    det_jm = _det2(v_ji, v_jm)
    if min(abs(det_ik), abs(det_im), abs(det_jk), abs(det_jm)) < det_tol:
        raise DegenerateConfiguration(
            f"a common line of pair ({i}, {j}) coincides with one of triples "
            f"{triple_k} / {triple_m}; the compatibility sign is undefined"
        )
    a = float(data.rep(k, i) @ data.rep(k, j)) - float(v_ij @ v_ik) * float(v_ji @ v_jk)
    b = float(data.rep(m, i) @ data.rep(m, j)) - float(v_ij @ v_im) * float(v_ji @ v_jm)
    d1 = det_im * det_jm
    d2 = det_ik * det_jk
    sigma = 1 if d1 * d2 > 0 else -1
    signed = a * abs(d1) - sigma * b * abs(d2)
    squared = a * a * d1 * d1 - 2.0 * d1 * d2 * a * b + b * b * d2 * d2
    return LocCertificate(
        (tuple(triple_k), tuple(triple_m)),
        sigma,
        signed,
        squared,
        abs(signed) <= eq_tol,
    )


def _loc_pairs_for_subset(subset):
    """The six shared-edge triple pairs of a 4-subset, with the shared
    index pair leading in both triples."""
    p, q, r, s = subset
    return [
        ((p, q, r), (p, q, s)),
        ((p, r, q), (p, r, s)),
        ((p, s, q), (p, s, r)),
        ((q, r, p), (q, r, s)),
        ((q, s, p), (q, s, r)),
        ((r, s, p), (r, s, q)),
    ]


def is_valid(data, tolerances=None):
    """Full membership certification of common lines data.

    Verdict is Valid when every norm check, triangle certificate, and LOC
    certificate passes; Degenerate when any LOC certificate hit a vanishing
    determinant; Invalid otherwise.
    """
    tol = tolerances or Tolerances()
    n = data.n
    norm_checks = tuple(
        (p.i, p.j, p.norm_residual) for p in data.iter_pairs()
    )
    triangles = tuple(
        triangle_gram(data, i, j, k, tol.ineq_margin)
        for i, j, k in combinations(range(1, n + 1), 3)
    )
    locs = []
    degenerate = False
    for subset in combinations(range(1, n + 1), 4):
        for tk, tm in _loc_pairs_for_subset(subset):
            try:
                locs.append(loc_residual(data, tk, tm, tol.eq_tol))
            except DegenerateConfiguration:
                degenerate = True
                locs.append(
                    LocCertificate(
                        (tk, tm), 0, float("nan"), float("nan"), False, degenerate=True
                    )
                )
    locs = tuple(locs)

    offenders = []
    for i, j, residual in norm_checks:
        if residual > tol.eq_tol:
            offenders.append(("norm", (i, j), residual))
    for cert in triangles:
        if not cert.passes:
            offenders.append(("triangle", cert.indices, cert.gram_value))
    for cert in locs:
        if cert.degenerate:
            offenders.append(("loc-degenerate", cert.indices, float("nan")))
        elif not cert.passes:
            offenders.append(("loc", cert.indices, cert.residual_signed))

    def severity(entry):
        kind, _, value = entry
        if kind == "norm":
            return value / tol.eq_tol
        if kind == "triangle":
            return (tol.ineq_margin - value) / tol.ineq_margin
        if kind == "loc":
            return abs(value) / tol.eq_tol
        return float("inf")

    offenders.sort(key=severity, reverse=True)
    if degenerate:
        verdict = VERDICT_DEGENERATE
    elif offenders:
        verdict = VERDICT_INVALID
    else:
        verdict = VERDICT_VALID
    return ValidityReport(
        n, norm_checks, triangles, locs, verdict, tuple(offenders), tol
    )
