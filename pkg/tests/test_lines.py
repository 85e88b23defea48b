import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from commonlines import (
    CoincidentPlanes,
    CommonLinePair,
    CommonLinesData,
    DegenerateAngle,
    Frame,
    NormMismatch,
    NotGeneric,
    FrameSet,
    embed,
    pair_distance,
    random_frame,
    realize_all,
    realize_pair,
    triple_angles,
)

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_realize_pair_coordinate_planes():
    p = realize_pair(Frame(E1, E2), Frame(E1, E3))
    assert np.allclose(p.v_ij, (1, 0))
    assert np.allclose(p.v_ji, (1, 0))


def test_realize_pair_coincident_planes():
    f = Frame(E1, E2)
    with pytest.raises(CoincidentPlanes):
        realize_pair(f, f)


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_realize_pair_embeds_agree(seed):
    rng = np.random.default_rng(seed)
    fi, fj = random_frame(rng), random_frame(rng)
    p = realize_pair(fi, fj)
    assert np.linalg.norm(embed(fi, p.v_ij) - embed(fj, p.v_ji)) < 1e-12
    # Independent oracle: the common direction spans the null space of the
    # two normals stacked as rows.
    _, _, vt = np.linalg.svd(np.vstack([fi.c, fj.c]))
    line = vt[-1]
    d = embed(fi, p.v_ij)
    assert np.linalg.norm(np.cross(d, line)) < 1e-10


@given(seeds)
@settings(max_examples=50, deadline=None)
def test_realize_pair_swap_consistency(seed):
    rng = np.random.default_rng(seed)
    fi, fj = random_frame(rng), random_frame(rng)
    p = realize_pair(fi, fj)
    q = realize_pair(fj, fi)
    swapped = CommonLinePair.from_vectors(1, 2, q.v_ji, q.v_ij)
    assert pair_distance(p, swapped) < 1e-12


@given(seeds, st.floats(min_value=-100, max_value=100))
@settings(max_examples=50, deadline=None)
def test_normalization_projective_invariance(seed, lam):
    if abs(lam) < 1e-6:
        return
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(2)
    u = u / np.linalg.norm(u)
    w = rng.standard_normal(2)
    w = w / np.linalg.norm(w)
    p = CommonLinePair.from_vectors(1, 2, u, w)
    q = CommonLinePair.from_vectors(1, 2, lam * u, lam * w)
    assert np.allclose(p.v_ij, q.v_ij, atol=1e-15, rtol=0)
    assert np.allclose(p.v_ji, q.v_ji, atol=1e-15, rtol=0)


def test_normalization_sign_flip_is_exact():
    # Negating both halves changes only signs, which is exact, so the
    # stored representative is bitwise identical.
    rng = np.random.default_rng(3)
    u = rng.standard_normal(2)
    u = u / np.linalg.norm(u)
    w = rng.standard_normal(2)
    w = w / np.linalg.norm(w)
    p = CommonLinePair.from_vectors(1, 2, u, w)
    q = CommonLinePair.from_vectors(1, 2, -u, -w)
    assert np.array_equal(p.v_ij, q.v_ij)
    assert np.array_equal(p.v_ji, q.v_ji)


def test_normalization_idempotent():
    p = CommonLinePair.from_vectors(1, 2, (-3.0, 4.0), (0.0, 5.0))
    q = CommonLinePair.from_vectors(1, 2, p.v_ij, p.v_ji)
    assert np.array_equal(p.v_ij, q.v_ij)
    assert np.array_equal(p.v_ji, q.v_ji)
    # first nonzero coordinate of v_ij is positive
    assert p.v_ij[0] > 0


def test_norm_mismatch_strict():
    with pytest.raises(NormMismatch):
        CommonLinePair.from_vectors(1, 2, (1.0, 0.0), (1.1, 0.0))


def test_norm_mismatch_lenient_records_residual():
    p = CommonLinePair.from_vectors(1, 2, (1.0, 0.0), (1.1, 0.0), strict=False)
    expected = abs(1.0 - 1.21) / (1.0 + 1.21)
    assert abs(p.norm_residual - expected) < 1e-15


def test_pair_rejects_bad_indices():
    with pytest.raises(ValueError):
        CommonLinePair.from_vectors(2, 2, (1, 0), (1, 0))


def test_realize_all_coordinate_frames():
    fs = FrameSet((Frame(E1, E2), Frame(E1, E3), Frame(E2, E3)))
    data = realize_all(fs)
    assert data.n == 3 and len(list(data.iter_pairs())) == 3
    # planes 1 and 2 share the e1 axis
    assert np.allclose(data.pair(1, 2).v_ij, (1, 0))
    assert np.allclose(data.pair(1, 2).v_ji, (1, 0))
    # planes 1 and 3 share the e2 axis: (0,1) in frame 1, (1,0) in frame 3
    assert np.allclose(np.abs(data.pair(1, 3).v_ij), (0, 1))
    assert np.allclose(np.abs(data.pair(1, 3).v_ji), (1, 0))


def test_realize_all_duplicate_frame():
    f = Frame(E1, E2)
    with pytest.raises(NotGeneric):
        realize_all(FrameSet((f, f, Frame(E2, E3))))


def test_realize_all_pair_count():
    from conftest import sample_frameset

    fs, data = sample_frameset(6, 0)
    assert len(list(data.iter_pairs())) == 15
    for p in data.iter_pairs():
        assert abs(p.v_ij @ p.v_ij - 1.0) < 1e-12
        assert abs(p.v_ji @ p.v_ji - 1.0) < 1e-12


def test_data_completeness_enforced():
    p = CommonLinePair.from_vectors(1, 2, (1, 0), (1, 0))
    with pytest.raises(ValueError):
        CommonLinesData(3, {(1, 2): p})


def test_rep_handles_both_orders():
    p12 = CommonLinePair.from_vectors(1, 2, (1, 0), (0, 1))
    p13 = CommonLinePair.from_vectors(1, 3, (0, 1), (1, 0))
    p23 = CommonLinePair.from_vectors(2, 3, (1, 0), (0, 1))
    data = CommonLinesData(3, {(1, 2): p12, (1, 3): p13, (2, 3): p23})
    assert np.allclose(data.rep(2, 1), (0, 1))
    assert np.allclose(data.rep(1, 2), (1, 0))


def test_triple_angles_counterexample(counterexample):
    t = triple_angles(counterexample, 1, 2, 3)
    assert np.allclose((t.alpha, t.beta, t.gamma), (np.pi / 4,) * 3, atol=1e-12)
    t = triple_angles(counterexample, 1, 2, 4)
    assert np.allclose(
        (t.alpha, t.beta, t.gamma), (np.pi / 2, np.pi / 2, np.pi / 4), atol=1e-12
    )


def test_triple_angles_degenerate():
    s = np.sqrt(2) / 2
    pairs = {
        (1, 2): CommonLinePair.from_vectors(1, 2, (1, 0), (1, 0)),
        (1, 3): CommonLinePair.from_vectors(1, 3, (1, 0), (s, s)),
        (2, 3): CommonLinePair.from_vectors(2, 3, (0, 1), (0, 1)),
    }
    data = CommonLinesData(3, pairs)
    with pytest.raises(DegenerateAngle):
        triple_angles(data, 1, 2, 3)


def test_pair_distance_self_and_negation():
    p = CommonLinePair.from_vectors(1, 2, (0.6, 0.8), (1.0, 0.0))
    assert pair_distance(p, p) == 0.0
    q = CommonLinePair.from_vectors(1, 2, (-0.6, -0.8), (-1.0, 0.0))
    assert pair_distance(p, q) < 1e-15


def test_pair_distance_orthogonal():
    p = CommonLinePair.from_vectors(1, 2, (1, 0), (1, 0))
    q = CommonLinePair.from_vectors(1, 2, (0, 1), (0, 1))
    assert abs(pair_distance(p, q) - 1.0) < 1e-15


def test_pair_distance_index_mismatch():
    p = CommonLinePair.from_vectors(1, 2, (1, 0), (1, 0))
    q = CommonLinePair.from_vectors(1, 3, (1, 0), (1, 0))
    with pytest.raises(ValueError):
        pair_distance(p, q)
