from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import sample_frameset

from commonlines import (
    Frame,
    FrameSet,
    NotGeneric,
    PlueckerPoint,
    RankDeficient,
    UndefinedProjection,
    eta_split,
    frameset_distance_mod_o3,
    jacobian_rank_at,
    pair_distance,
    pluecker_embed,
    pluecker_project,
    random_orthogonal,
    realize_all,
    reconstruct_all,
)
from commonlines.grassmann import column_triples

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_column_triples_counts():
    assert len(column_triples(4)) == 4
    assert len(column_triples(6)) == 20
    assert column_triples(4)[0] == (0, 1, 2)


def test_pluecker_point_validation():
    with pytest.raises(ValueError):
        PlueckerPoint(2, np.zeros(4))
    with pytest.raises(ValueError):
        PlueckerPoint(2, np.ones(5))


def test_point_normalization_and_sign():
    p = PlueckerPoint(2, np.array([0.0, -2.0, 0.0, 2.0]))
    s = np.sqrt(2) / 2
    assert np.allclose(p.coords, [0.0, s, 0.0, -s])


def test_minor_parity_and_repeats():
    p = PlueckerPoint(2, np.array([0.0, 1.0, 0.0, -1.0]))
    assert p.minor((0, 1, 3)) == -p.minor((1, 0, 3))
    assert p.minor((3, 1, 0)) == -p.minor((0, 1, 3))
    assert p.minor((1, 1, 3)) == 0.0


def test_embed_two_frames():
    # Columns (e1, e2, e1, e3): only the triples containing both planes'
    # independent columns survive.
    point = pluecker_embed([Frame(E1, E2), Frame(E1, E3)])
    s = np.sqrt(2) / 2
    assert np.allclose(point.coords, [0.0, s, 0.0, -s], atol=1e-15)
    assert np.count_nonzero(np.abs(point.coords) > 1e-12) == 2
    # the {a1, b1, b2} minor is det[e1, e2, e3] = 1 before normalization
    assert abs(point.minor((0, 1, 3)) - s) < 1e-15


def test_embed_rank_deficient():
    f = Frame(E1, E2)
    with pytest.raises(RankDeficient):
        pluecker_embed([f, f])


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_embed_o3_invariant(seed):
    fs, _ = sample_frameset(4, seed)
    R = random_orthogonal(np.random.default_rng(seed))
    a = pluecker_embed(fs)
    b = pluecker_embed(fs.rotate(R))
    assert np.max(np.abs(a.coords - b.coords)) < 1e-12


def test_embed_deterministic():
    fs, _ = sample_frameset(3, 17)
    a = pluecker_embed(fs)
    b = pluecker_embed(fs)
    assert np.array_equal(a.coords, b.coords)


def test_quadratic_relations_sampled():
    # Spot-check the three-term Plücker relation on sampled index pairs.
    fs, _ = sample_frameset(3, 2)
    point = pluecker_embed(fs)
    rng = np.random.default_rng(0)
    cols = 2 * fs.n
    for _ in range(50):
        picks = rng.choice(cols, size=5, replace=False)
        i, j, k, l, m = (int(x) for x in picks)
        lhs = (
            point.minor((i, j, k)) * point.minor((i, l, m))
            - point.minor((i, j, l)) * point.minor((i, k, m))
            + point.minor((i, j, m)) * point.minor((i, k, l))
        )
        assert abs(lhs) < 1e-12


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_project_commutes_with_realize(seed):
    fs, data = sample_frameset(5, seed)
    proj = pluecker_project(pluecker_embed(fs))
    for i, j in combinations(range(1, 6), 2):
        assert pair_distance(data.pair(i, j), proj.pair(i, j)) < 1e-10


def test_project_coordinate_frames():
    fs = FrameSet((Frame(E1, E2), Frame(E1, E3), Frame(E2, E3)))
    proj = pluecker_project(pluecker_embed(fs))
    assert np.allclose(proj.pair(1, 2).v_ij, (1, 0))
    assert np.allclose(proj.pair(1, 2).v_ji, (1, 0))


def test_project_n_mismatch():
    fs, _ = sample_frameset(3, 4)
    point = pluecker_embed(fs)
    with pytest.raises(ValueError):
        pluecker_project(point, n=4)
    pluecker_project(point, n=3)  # matching n is accepted


def test_project_undefined_on_zeroed_pair():
    fs, _ = sample_frameset(3, 6)
    point = pluecker_embed(fs)
    coords = np.array(point.coords)
    # zero every minor drawing columns from frames 1 and 2 only
    for pos, cols in enumerate(column_triples(6)):
        if set(cols) <= {0, 1, 2, 3}:
            coords[pos] = 0.0
    with pytest.raises(UndefinedProjection):
        pluecker_project(PlueckerPoint(3, coords))


def test_distinct_orbits_map_to_distinct_data():
    fs_a, data_a = sample_frameset(4, 50)
    fs_b, data_b = sample_frameset(4, 51)
    assert frameset_distance_mod_o3(fs_a, fs_b) > 0.01
    worst = max(
        pair_distance(data_a.pair(i, j), data_b.pair(i, j))
        for i, j in combinations(range(1, 5), 2)
    )
    assert worst > 1e-6


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_eta_split_equivariance(seed):
    fs, _ = sample_frameset(4, seed)
    rng = np.random.default_rng(seed)
    split = eta_split(fs)
    R = random_orthogonal(rng, det=1)
    rotated = eta_split(fs.rotate(R))
    assert np.max(np.abs(split.point.coords - rotated.point.coords)) < 1e-12
    assert np.max(np.abs(rotated.gauge - R @ split.gauge)) < 1e-9
    L = random_orthogonal(rng, det=-1)
    reflected = eta_split(fs.rotate(L))
    assert reflected.xi == -split.xi


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_eta_split_invertible(seed):
    fs, _ = sample_frameset(5, seed)
    R = random_orthogonal(
        np.random.default_rng(seed), det=(1 if seed % 2 else -1)
    )
    fs = fs.rotate(R)
    split = eta_split(fs)
    rebuilt = reconstruct_all(pluecker_project(split.point), base_triple="best")
    regauge = split.gauge @ eta_split(rebuilt.frames).gauge.T
    recovered = rebuilt.frames.rotate(regauge)
    worst = max(
        np.max(np.abs(f.matrix - g.matrix))
        for f, g in zip(fs, recovered)
    )
    assert worst < 1e-8


def test_eta_split_gauge_is_orthogonal():
    fs, _ = sample_frameset(3, 12)
    split = eta_split(fs)
    assert np.allclose(split.gauge.T @ split.gauge, np.eye(3), atol=1e-12)
    assert split.xi in (-1, 1)


def test_eta_split_degenerate_lines():
    # All three viewing directions lie in the xy-plane, so all pairwise
    # intersection lines are the z-axis and the split is undefined.
    def tilted(theta):
        c = np.array([np.cos(theta), np.sin(theta), 0.0])
        a = np.array([-np.sin(theta), np.cos(theta), 0.0])
        return Frame(a, np.cross(c, a))

    fs = FrameSet((tilted(0.0), tilted(1.0), tilted(2.0)))
    with pytest.raises(NotGeneric):
        eta_split(fs)


def test_jacobian_rank_small_cases():
    for n, expected in ((3, 6), (4, 9)):
        fs, _ = sample_frameset(n, 60 + n)
        assert jacobian_rank_at(fs) == expected
