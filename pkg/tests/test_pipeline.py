import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projclust.evaluation import accuracy
from projclust.model import MixtureParams, block_centers, sample_mixture
from projclust.pipeline import (
    CenterSet,
    centers,
    cluster,
    cluster_run,
    match_clusters,
    project_assign,
    projection_statistics,
    split,
)


def noiseless_matrix(k=3, n=12, reps=(4, 5, 6)):
    rng = np.random.default_rng(0)
    protos = (rng.random((k, n)) < 0.5).astype(float)
    labels = np.concatenate([[r] * c for r, c in enumerate(reps)])
    rng.shuffle(labels)
    return protos, protos[labels].T, labels


def test_split_partition():
    plan = split(4, seed=3)
    assert len(plan.half1) == len(plan.half2) == 2
    assert sorted(np.concatenate([plan.half1, plan.half2]).tolist()) == [0, 1, 2, 3]


def test_split_odd_and_deterministic():
    a = split(5, seed=9)
    assert (len(a.half1), len(a.half2)) == (3, 2)
    b = split(5, seed=9)
    assert np.array_equal(a.half1, b.half1) and np.array_equal(a.half2, b.half2)
    with pytest.raises(ValueError):
        split(5, seed=0, k=3)


def test_centers_noiseless_recovery():
    protos, A, _ = noiseless_matrix()
    C = centers(A, 3, seed=1).centers
    assert sorted(map(tuple, C)) == sorted(map(tuple, protos))


def test_centers_single_cluster_is_mean():
    rng = np.random.default_rng(1)
    A = rng.random((6, 9))
    assert np.allclose(centers(A, 1).centers[0], A.mean(axis=1))


def test_project_exact_center():
    C = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    for r in range(3):
        assert project_assign(C[r][:, None], C).assignment[0] == r


def test_project_single_center():
    rng = np.random.default_rng(2)
    out = project_assign(rng.random((4, 7)), np.zeros((1, 4)))
    assert out.assignment.tolist() == [0] * 7


def test_project_on_a_line():
    C = np.array([[0.0], [1.0]])
    # |0.3 * 1| = 0.3 <= |(0.3 - 1) * (0 - 1)| = 0.7
    S = projection_statistics(np.array([[0.3]]), C)
    assert S[0, 0, 1] == pytest.approx(0.3) and S[0, 1, 0] == pytest.approx(0.7)
    v = np.array([[0.3, 0.49, 0.51, 0.7, -3.0, 4.0]])
    assert project_assign(v, C).assignment.tolist() == [0, 0, 1, 1, 0, 1]


def test_project_tie_goes_to_lowest():
    C = np.array([[0.0], [1.0]])
    assert project_assign(np.array([[0.5]]), C).assignment[0] == 0


def test_project_errors():
    with pytest.raises(ValueError):
        project_assign(np.zeros((3, 2)), np.zeros((2, 4)))
    with pytest.raises(ValueError):
        project_assign(np.zeros((3, 2)), np.zeros((0, 3)))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 5), st.integers(1, 6))
def test_projection_rule_is_nearest_center(seed, k, n):
    rng = np.random.default_rng(seed)
    C = rng.standard_normal((k, n))
    V = rng.standard_normal((n, 40)) * 2
    got = project_assign(V, C).assignment
    d2 = ((V.T[:, None, :] - C[None]) ** 2).sum(axis=2)
    srt = np.sort(d2, axis=1)
    clear = srt[:, 1] - srt[:, 0] > 1e-9
    assert np.array_equal(got[clear], np.argmin(d2, axis=1)[clear])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_chosen_statistic_never_exceeds_rejected(seed, k):
    rng = np.random.default_rng(seed)
    C = rng.standard_normal((k, 3))
    V = rng.standard_normal((3, 25))
    got = project_assign(V, C).assignment
    S = projection_statistics(V, C)
    for j, r in enumerate(got):
        for s in range(k):
            if s != r:
                assert S[j, r, s] <= S[j, s, r] + 1e-12


def test_match_identity_and_reverse():
    rng = np.random.default_rng(3)
    T = rng.standard_normal((4, 5))
    assert match_clusters(T, T).tolist() == [0, 1, 2, 3]
    assert match_clusters(T, T[::-1]).tolist() == [3, 2, 1, 0]
    with pytest.raises(ValueError):
        match_clusters(T, T[:3])


def test_match_recovers_noisy_permutation_against_exhaustive_search():
    rng = np.random.default_rng(4)
    T = rng.standard_normal((3, 6)) * 5
    order = [2, 0, 1]
    N = T[order] + 1e-3 * rng.standard_normal((3, 6))
    # nu[order[i]] = theta[i] + noise, so theta_r pairs with nu index order.index(r)
    best = min(
        itertools.permutations(range(3)),
        key=lambda p: sum(((T[r] - N[p[r]]) ** 2).sum() for r in range(3)),
    )
    got = match_clusters(CenterSet(T), CenterSet(N))
    assert tuple(got) == best
    assert np.allclose(N[got], T, atol=1e-2)


def test_cluster_noiseless():
    protos, A, labels = noiseless_matrix(reps=(6, 6, 6))
    for seed in range(5):
        got = cluster(A, 3, seed=seed)
        assert accuracy(got, labels).accuracy == 1.0


def test_cluster_single_cluster():
    rng = np.random.default_rng(5)
    got = cluster(rng.random((5, 10)), 1)
    assert got.assignment.tolist() == [0] * 10


def test_cluster_deterministic():
    p = MixtureParams(block_centers(2, 60, 0.5), [0.5, 0.5], 0.5)
    d = sample_mixture(p, 60, seed=1)
    a = cluster(d.values, 2, seed=3)
    b = cluster(d.values, 2, seed=3)
    assert np.array_equal(a.assignment, b.assignment)


def test_cross_half_independence():
    """theta depends only on half 1 and nu only on half 2."""
    p = MixtureParams(block_centers(2, 60, 0.5), [0.5, 0.5], 0.5)
    A = sample_mixture(p, 80, seed=2).values
    run = cluster_run(A, 2, seed=4)
    B = A.copy()
    rng = np.random.default_rng(0)
    B[:, run.plan.half2] = rng.random((60, len(run.plan.half2))) < 0.5
    run_b = cluster_run(B, 2, seed=4)
    assert np.array_equal(run.theta.centers, run_b.theta.centers)
    C = A.copy()
    C[:, run.plan.half1] = rng.random((60, len(run.plan.half1))) < 0.5
    run_c = cluster_run(C, 2, seed=4)
    assert sorted(map(tuple, run.nu.centers)) == sorted(map(tuple, run_c.nu.centers))


def test_cluster_separated_instance_small():
    p = MixtureParams(block_centers(3, 150, 0.5), [1 / 3] * 3, 0.5)
    for seed in range(3):
        d = sample_mixture(p, 150, seed=seed)
        assert accuracy(cluster(d.values, 3, seed=seed), d.labels).accuracy == 1.0
