from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import sample_frameset

from commonlines import (
    CommonLinePair,
    CommonLinesData,
    InitializationFailed,
    NoiseSpec,
    ProjectionOptions,
    is_valid,
    pair_distance,
    perturb,
    project_to_cn,
    random_orthogonal,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def _max_pair_distance(a, b):
    return max(
        pair_distance(a.pair(i, j), b.pair(i, j))
        for i, j in combinations(range(1, a.n + 1), 2)
    )


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(sigma=-0.1)


def test_perturb_sigma_zero_is_identity():
    _, data = sample_frameset(4, 0)
    noisy = perturb(data, NoiseSpec(sigma=0.0, seed=3))
    assert _max_pair_distance(data, noisy) == 0.0


def test_perturb_deterministic():
    _, data = sample_frameset(4, 1)
    a = perturb(data, NoiseSpec(sigma=1e-2, seed=7))
    b = perturb(data, NoiseSpec(sigma=1e-2, seed=7))
    assert _max_pair_distance(a, b) == 0.0
    c = perturb(data, NoiseSpec(sigma=1e-2, seed=8))
    assert _max_pair_distance(a, c) > 0.0


def test_perturb_small_sigma_calibration():
    _, data = sample_frameset(6, 2)
    dists = []
    for seed in range(40):
        noisy = perturb(data, NoiseSpec(sigma=1e-3, seed=seed))
        for i, j in combinations(range(1, 7), 2):
            dists.append(pair_distance(data.pair(i, j), noisy.pair(i, j)))
    assert np.quantile(dists, 0.99) < 3.5e-3


def test_perturb_large_sigma_invalidates():
    _, data = sample_frameset(6, 3)
    noisy = perturb(data, NoiseSpec(sigma=0.3, seed=0))
    assert is_valid(noisy).verdict != "Valid"


def test_fixed_point_on_valid_data():
    _, data = sample_frameset(6, 4)
    result = project_to_cn(data)
    assert result.objective < 1e-16
    assert _max_pair_distance(data, result.projected) < 1e-8


def test_projection_of_projection_is_stable():
    _, data = sample_frameset(5, 5)
    noisy = perturb(data, NoiseSpec(sigma=1e-3, seed=0))
    first = project_to_cn(noisy)
    second = project_to_cn(first.projected)
    assert second.objective < 1e-12


@given(seeds)
@settings(max_examples=8, deadline=None)
def test_projection_valid_close_and_descending(seed):
    _, data = sample_frameset(6, seed)
    noisy = perturb(data, NoiseSpec(sigma=1e-3, seed=seed))
    result = project_to_cn(noisy)
    assert is_valid(result.projected).verdict == "Valid"
    assert _max_pair_distance(data, result.projected) <= 5e-3
    hist = result.objective_history
    assert all(b < a for a, b in zip(hist, hist[1:]))
    # realized data of the minimizer is exactly the reported projection
    assert result.projected.n == 6
    assert result.frames.n == 6


def test_objective_gauge_independent():
    _, data = sample_frameset(5, 9)
    noisy = perturb(data, NoiseSpec(sigma=1e-3, seed=1))
    # Same starting point, expressed in two gauges: the iteration commutes
    # with a global rotation, so the final objectives must agree.
    init = project_to_cn(noisy, ProjectionOptions(max_iters=0)).frames
    R = random_orthogonal(np.random.default_rng(0))
    plain = project_to_cn(noisy, ProjectionOptions(init_frames=init))
    rotated = project_to_cn(noisy, ProjectionOptions(init_frames=init.rotate(R)))
    assert abs(plain.objective - rotated.objective) < 1e-10


def test_counterexample_projects_outside(counterexample):
    result = project_to_cn(counterexample)
    assert is_valid(result.projected).verdict == "Valid"
    assert result.objective > 1e-6  # genuinely off the valid set


def test_initialization_failure():
    # Every triple violates the triangle inequality (one huge angle).
    a, b, g = 0.3, 0.3, 2.0
    pairs = {
        (1, 2): CommonLinePair.from_vectors(1, 2, (1, 0), (1, 0)),
        (1, 3): CommonLinePair.from_vectors(
            1, 3, (np.cos(a), np.sin(a)), (1, 0)
        ),
        (2, 3): CommonLinePair.from_vectors(
            2, 3, (np.cos(b), np.sin(b)), (np.cos(g), np.sin(g))
        ),
    }
    data = CommonLinesData(3, pairs)
    with pytest.raises(InitializationFailed):
        project_to_cn(data)


def test_max_iters_zero_reports_not_converged():
    _, data = sample_frameset(4, 10)
    noisy = perturb(data, NoiseSpec(sigma=1e-2, seed=0))
    result = project_to_cn(noisy, ProjectionOptions(max_iters=0))
    assert result.iterations == 0
    assert not result.converged
