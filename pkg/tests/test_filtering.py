"""Filter unitaries, outcome distributions, and the outcome-to-constraint map."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticefilter import (
    ANOMALY_MASS_TOL,
    BadParameter,
    Equality,
    ExcludedSet,
    NoInformation,
    RankDeficient,
    StateVector,
    build_filter_unitary,
    build_shift_columns,
    constraint_from_outcome,
    dft,
    family_full_rank,
    gso,
    make_amplitude,
    outcome_distribution,
    psi_state,
    sample_outcome,
    stream,
)


def autocorrelation_prob(f, x):
    """|<psi_0, psi_x>|^2 computed from the raw tables, no filter machinery."""
    return abs(np.vdot(f.table, np.roll(f.table, x))) ** 2


def test_psi_state_layout_and_normalization():
    f = make_amplitude("gaussian", 11, s=2.0)
    s = psi_state(f, 4)
    for e in range(-5, 6):
        assert s.vector[(4 + e) % 11] == pytest.approx(f.table[e % 11])
    assert np.linalg.norm(s.vector) == pytest.approx(1.0)
    assert psi_state(f, 15).vector[4] == pytest.approx(f.table[0])


def test_state_vector_validation():
    with pytest.raises(BadParameter):
        StateVector(5, np.ones(4))
    with pytest.raises(BadParameter):
        StateVector(5, np.ones(5))  # norm sqrt(5)
    v = StateVector(4, np.full(4, 0.5))
    with pytest.raises(ValueError):
        v.vector[0] = 9.0  # frozen buffer


@pytest.mark.parametrize("q,k,y", [(7, 3, 0), (11, 11, 5), (13, 1, 12)])
def test_filter_rows_are_conjugated_gso(q, k, y):
    f = make_amplitude("laplace", q, s=2.5)
    U = build_filter_unitary(f, y, k, completion_seed=3)
    res = gso(build_shift_columns(f, y, k))
    for j in range(k):
        np.testing.assert_allclose(
            U.matrix[j], res.orthogonal_vectors[:, j].conj(), atol=1e-12
        )
    np.testing.assert_allclose(U.matrix @ U.matrix.conj().T, np.eye(q), atol=1e-10)
    assert (U.q, U.k, U.y) == (q, k, y)


def test_filter_is_deterministic_and_seed_changes_completion():
    f = make_amplitude("gaussian", 11, s=3.0)
    a = build_filter_unitary(f, 2, 4, completion_seed=1)
    b = build_filter_unitary(f, 2, 4, completion_seed=1)
    c = build_filter_unitary(f, 2, 4, completion_seed=2)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    np.testing.assert_allclose(a.matrix[:4], c.matrix[:4], atol=1e-12)
    assert np.abs(a.matrix[4:] - c.matrix[4:]).max() > 1e-3


def test_filter_rejects_bad_k_and_rank_deficiency():
    f = make_amplitude("gaussian", 7, s=2.0)
    with pytest.raises(BadParameter):
        build_filter_unitary(f, 0, 0)
    with pytest.raises(BadParameter):
        build_filter_unitary(f, 0, 8)
    g = dft(make_amplitude("bounded_uniform", 31, B=3))
    with pytest.raises(RankDeficient):
        build_filter_unitary(g, 0, 8)  # rank is 2B+1 = 7
    assert build_filter_unitary(g, 0, 7).full_rank == 7


@pytest.mark.parametrize(
    "family,params,expected",
    [
        ("gaussian", {"s": 3.0}, 13),
        ("delta", {"v": 2}, 13),
        ("one_sided_uniform", {"w": 13}, 1),
    ],
)
def test_family_full_rank_from_spectrum(family, params, expected):
    assert family_full_rank(make_amplitude(family, 13, **params)) == expected


def test_family_full_rank_dft_window():
    for B in (1, 2, 3):
        g = dft(make_amplitude("bounded_uniform", 31, B=B))
        assert family_full_rank(g) == 2 * B + 1


def test_outcome_distribution_matches_row_overlaps():
    f = make_amplitude("laplace", 11, s=2.0)
    U = build_filter_unitary(f, 1, 5, completion_seed=9)
    for x in (0, 3, 10):
        s = psi_state(f, x)
        p = outcome_distribution(U, s)
        assert p.sum() == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(p, np.abs(U.matrix @ s.vector) ** 2, atol=1e-12)


def test_first_row_probability_is_autocorrelation():
    f = make_amplitude("gaussian", 13, s=2.0)
    U = build_filter_unitary(f, 0, 1)
    for x in range(13):
        p = outcome_distribution(U, psi_state(f, x))
        assert p[0] == pytest.approx(autocorrelation_prob(f, x), abs=1e-12)


def test_outcome_distribution_dimension_mismatch():
    U = build_filter_unitary(make_amplitude("gaussian", 7, s=2.0), 0, 2)
    with pytest.raises(BadParameter):
        outcome_distribution(U, psi_state(make_amplitude("gaussian", 11, s=2.0), 0))


def test_impossible_band_carries_only_fp_leakage():
    # k = effective rank: any same-family shifted state lives in the row span,
    # so outcomes >= k only see floating-point dust
    g = dft(make_amplitude("bounded_uniform", 31, B=3))
    U = build_filter_unitary(g, 0, 7)
    for x in range(31):
        tail = outcome_distribution(U, psi_state(g, x))[7:].sum()
        assert tail < ANOMALY_MASS_TOL


def test_sampled_frequencies_match_analytic_table():
    f = make_amplitude("laplace", 7, s=2.0)
    U = build_filter_unitary(f, 0, 7)
    s = psi_state(f, 3)
    p = outcome_distribution(U, s)
    rng = stream(1234, 0, "filter-freq")
    n = 20_000
    counts = np.bincount([sample_outcome(U, s, rng) for _ in range(n)], minlength=7)
    # 4-sigma binomial bands per outcome
    for j in range(7):
        band = 4 * np.sqrt(max(p[j] * (1 - p[j]), 1e-12) / n)
        assert abs(counts[j] / n - p[j]) <= band + 1e-9


def test_window_state_against_point_check_rate():
    # measuring a width-(2B+1) window state against the point check at its
    # center rejects with probability exactly 1 - 1/(2B+1), whatever the
    # in-window offset
    q = 7
    point = make_amplitude("delta", q, v=0)
    for B in (1, 2):
        w = make_amplitude("bounded_uniform", q, B=B)
        U = build_filter_unitary(point, 3, 1)
        for e in range(-B, B + 1):
            p = outcome_distribution(U, psi_state(w, 3 + e))
            assert 1 - p[0] == pytest.approx(1 - 1 / (2 * B + 1), abs=1e-12)


def test_constraint_mapping_table():
    q, y, k = 11, 8, 5
    assert isinstance(constraint_from_outcome(y, k, q, 0), NoInformation)
    c2 = constraint_from_outcome(y, k, q, 2)
    assert isinstance(c2, ExcludedSet) and c2.values == frozenset({8, 9})
    # last informative row with k < q: tail membership, k-1 exclusions
    c4 = constraint_from_outcome(y, k, q, 4)
    assert isinstance(c4, ExcludedSet) and c4.values == frozenset({8, 9, 10, 0})
    # beyond the informative rows: all k shifts excluded
    c7 = constraint_from_outcome(y, k, q, 7)
    assert isinstance(c7, ExcludedSet)
    assert c7.values == frozenset({8, 9, 10, 0, 1}) and not c7.anomalous
    flagged = constraint_from_outcome(y, k, q, 7, effective_rank=5)
    assert flagged.anomalous
    unflagged = constraint_from_outcome(y, k, q, 7, effective_rank=9)
    assert not unflagged.anomalous


def test_constraint_equality_for_full_filter():
    c = constraint_from_outcome(3, 7, 7, 6)
    assert isinstance(c, Equality) and c.value == 2  # y - 1 mod q
    c0 = constraint_from_outcome(0, 7, 7, 6, sample_index=41)
    assert c0.value == 6 and c0.sample_index == 41


def test_constraint_validation():
    with pytest.raises(BadParameter):
        constraint_from_outcome(0, 0, 7, 0)
    with pytest.raises(BadParameter):
        constraint_from_outcome(0, 8, 7, 0)
    with pytest.raises(BadParameter):
        constraint_from_outcome(0, 3, 7, 7)
    with pytest.raises(BadParameter):
        constraint_from_outcome(0, 3, 7, -1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 30), st.integers(1, 13), st.integers(0, 2**31 - 1))
def test_any_filter_gives_a_probability_vector(x, k, seed):
    q = 13
    f = make_amplitude("gaussian", q, s=2.0)
    U = build_filter_unitary(f, 0, k, completion_seed=seed % 101)
    p = outcome_distribution(U, psi_state(f, x))
    assert p.shape == (q,)
    assert np.all(p >= 0) and p.sum() == pytest.approx(1.0, abs=1e-10)
