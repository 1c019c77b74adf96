"""Coset-state reduction, recovery, and the constant-modulus pipeline."""

import numpy as np
import pytest

from latticefilter import (
    BadParameter,
    CompositeModulus,
    InsufficientSamples,
    ScaleExceeded,
    dft,
    edcp_sample_set,
    edcp_solve,
    edcp_to_slwe,
    family_full_rank,
    friedl_constant_q,
    friedl_measurements,
    make_amplitude,
    reduced_state,
    stream,
)


def canonical_line_rep(u, q):
    """Scale u so its first nonzero coordinate is 1 (q prime)."""
    u = np.asarray(u, dtype=np.int64) % q
    lead = int(u[np.flatnonzero(u)[0]])
    return (u * pow(lead, q - 2, q)) % q


def code_of(vec, q):
    code = 0
    for v in vec:
        code = code * q + int(v)
    return code


def test_sample_set_layout_and_explicit_tables():
    n, q, m = 2, 5, 4
    D = make_amplitude("one_sided_uniform", q, w=3)
    s = np.array([7, 2])  # reduces to [2, 2]
    ss = edcp_sample_set(n, m, q, D, s, stream(800, 0, "edcp"), representation="explicit")
    assert ss.m == len(ss.samples) == m
    np.testing.assert_array_equal(ss.secret, [2, 2])
    for sample in ss.samples:
        assert sample.table.shape == (q, q**n)
        assert np.linalg.norm(sample.table) == pytest.approx(1.0)
        for j in range(q):
            col = code_of((sample.offset + j * sample.secret) % q, q)
            assert sample.table[j, col] == pytest.approx(D.table[j])
            assert np.count_nonzero(sample.table[j]) == (1 if D.table[j] else 0)


def test_sample_set_validation():
    D = make_amplitude("one_sided_uniform", 5, w=3)
    rng = stream(800, 1, "edcp")
    with pytest.raises(BadParameter):
        edcp_sample_set(2, 3, 5, D, np.array([1, 2]), rng, representation="dense")
    with pytest.raises(BadParameter):
        edcp_sample_set(2, 3, 7, D, np.array([1, 2]), rng)
    with pytest.raises(BadParameter):
        edcp_sample_set(3, 3, 5, D, np.array([1, 2]), rng)
    with pytest.raises(ScaleExceeded):
        edcp_sample_set(
            9, 1, 5, D, np.ones(9, dtype=int), rng, representation="explicit"
        )


def test_explicit_reduction_matches_closed_form_state():
    # the measured register-1 state must be the shifted transform table
    # exactly, whatever a came out; overlap 1 is the invariant, not ~1
    n, q = 2, 5
    D = make_amplitude("one_sided_uniform", q, w=3)
    ss = edcp_sample_set(
        n, 40, q, D, np.array([3, 1]), stream(801, 0, "make"), representation="explicit"
    )
    rng = stream(801, 0, "measure")
    for sample in ss.samples:
        a, state = edcp_to_slwe(sample, rng)
        target = reduced_state(sample, a.data)
        assert abs(np.vdot(target.vector, state.vector)) == pytest.approx(1.0, abs=1e-10)


def test_symbolic_reduction_uses_the_closed_form():
    n, q = 3, 7
    D = make_amplitude("one_sided_uniform", q, w=5)
    ss = edcp_sample_set(n, 10, q, D, np.array([1, 4, 2]), stream(801, 1, "make"))
    rng = stream(801, 1, "measure")
    for sample in ss.samples:
        a, state = edcp_to_slwe(sample, rng)
        np.testing.assert_allclose(
            state.vector, reduced_state(sample, a.data).vector, atol=1e-12
        )


def test_measured_vector_is_uniform():
    n, q = 2, 5
    D = make_amplitude("one_sided_uniform", q, w=3)
    ss = edcp_sample_set(
        n, 1500, q, D, np.array([3, 1]), stream(802, 0, "make"), representation="explicit"
    )
    rng = stream(802, 0, "measure")
    counts = np.zeros(q**n)
    for sample in ss.samples:
        a, _ = edcp_to_slwe(sample, rng)
        counts[code_of(a.data, q)] += 1
    freq = counts / ss.m
    p = 1 / q**n
    band = 4 * np.sqrt(p * (1 - p) / ss.m)
    assert np.all(np.abs(freq - p) <= band)


@pytest.mark.parametrize("trial", range(3))
def test_full_support_distribution_solves_by_equalities(trial):
    n, q = 2, 5
    D = make_amplitude("gaussian", q, s=2.0)
    assert family_full_rank(dft(D)) == q
    secret = stream(803, trial, "plant").integers(0, q, size=n)
    ss = edcp_sample_set(n, 400, q, D, secret, stream(803, trial, "make"))
    res = edcp_solve(ss, "ge", rng=stream(803, trial, "solve"))
    assert res.success
    np.testing.assert_array_equal(res.secret.data, secret % q)
    assert res.details["negated"] and res.details["mode"] == "ge"


@pytest.mark.parametrize("trial", range(3))
def test_window_distribution_solves_by_tail_filter(trial):
    n, q, w = 3, 7, 5
    D = make_amplitude("one_sided_uniform", q, w=w)
    assert family_full_rank(dft(D)) == w
    secret = stream(804, trial, "plant").integers(0, q, size=n)
    ss = edcp_sample_set(n, 400, q, D, secret, stream(804, trial, "make"))
    res = edcp_solve(ss, "ag", rng=stream(804, trial, "solve"))
    assert res.success
    np.testing.assert_array_equal(res.secret.data, secret % q)
    assert res.details["k"] == w


def test_zero_secret_is_recovered():
    n, q = 2, 5
    D = make_amplitude("gaussian", q, s=2.0)
    ss = edcp_sample_set(n, 400, q, D, np.zeros(n, dtype=int), stream(805, 0, "make"))
    res = edcp_solve(ss, "ge", rng=stream(805, 0, "solve"))
    assert res.success and not np.any(res.secret.data)


def test_solve_mode_validation():
    D = make_amplitude("gaussian", 5, s=2.0)
    ss = edcp_sample_set(2, 4, 5, D, np.array([1, 2]), stream(806, 0, "make"))
    with pytest.raises(BadParameter):
        edcp_solve(ss, "both", rng=stream(806, 0, "solve"))


def friedl_set(n, q, p, m, secret, seed, role="make"):
    D = make_amplitude("one_sided_uniform", q, w=p)
    return edcp_sample_set(n, m, q, D, secret, stream(seed, 0, role))


def test_double_fourier_law_at_smallest_size():
    # q = 3, p = 2: conditional distribution of z given t = <s, y> is
    #   t = 0      -> z = 0 with probability 1
    #   t = 1, 2   -> z = 0 w.p. 1/4, z = 1 w.p. 3/4
    # and overall z = 0 mass is 1/p = 1/2 for a secret with uniform t
    n, q, p, m = 3, 3, 2, 10_000
    secret = np.array([1, 2, 0])
    ss = friedl_set(n, q, p, m, secret, 807)
    pairs = friedl_measurements(ss, stream(807, 0, "measure"))
    assert len(pairs) == m

    ts = np.array([int(secret @ y % q) for _, y in pairs])
    zs = np.array([z for z, _ in pairs])

    # soundness is exact: a nonzero z never appears with t = 0
    assert not np.any(zs[ts == 0])

    for t in (1, 2):
        sel = zs[ts == t]
        band = 4 * np.sqrt(0.25 * 0.75 / sel.size)
        assert abs(np.mean(sel == 0) - 0.25) <= band

    band = 4 * np.sqrt(0.25 / m)
    assert abs(np.mean(zs == 0) - 0.5) <= band


def test_certificates_recover_the_planted_line():
    n, q, p = 3, 3, 2
    secret = np.array([1, 2, 1])  # already canonical: leading coordinate 1
    ss = friedl_set(n, q, p, 2000, secret, 808)
    got = friedl_constant_q(ss, rng=stream(808, 0, "solve"))
    np.testing.assert_array_equal(got.data, secret)


def test_recovery_is_canonical_for_scaled_plants():
    # certificates cannot tell s from c*s; the answer is pinned to the
    # representative with first nonzero coordinate 1
    n, q, p = 3, 3, 2
    secret = np.array([2, 1, 0])
    ss = friedl_set(n, q, p, 2000, secret, 809)
    got = friedl_constant_q(ss, rng=stream(809, 0, "solve"))
    expected = canonical_line_rep(secret, q)
    assert not np.array_equal(expected, secret % q)
    np.testing.assert_array_equal(got.data, expected)


def test_too_few_certificates_raise():
    ss = friedl_set(3, 3, 2, 4, np.array([1, 1, 1]), 810)
    with pytest.raises(InsufficientSamples):
        friedl_constant_q(ss, rng=stream(810, 0, "solve"))


def test_friedl_requires_prime_modulus_and_uniform_register1():
    with pytest.raises(CompositeModulus):
        ss = friedl_set(2, 6, 2, 50, np.array([1, 1]), 811)
        friedl_constant_q(ss, rng=stream(811, 0, "solve"))
    # register-1 distribution must be uniform on a prefix window
    bad = edcp_sample_set(
        2, 10, 5, make_amplitude("bounded_uniform", 5, B=1), np.array([1, 2]),
        stream(812, 0, "make"),
    )
    with pytest.raises(BadParameter):
        friedl_measurements(bad, stream(812, 0, "measure"))
    # p = 1 and p = q carry no constant-modulus structure
    for w in (1, 5):
        flat = edcp_sample_set(
            2, 10, 5, make_amplitude("one_sided_uniform", 5, w=w), np.array([1, 2]),
            stream(813, 0, "make"),
        )
        with pytest.raises(BadParameter):
            friedl_measurements(flat, stream(813, 0, "measure"))
