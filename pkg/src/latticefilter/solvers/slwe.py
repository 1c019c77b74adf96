"""Secret recovery from shifted-state samples via filter measurements.

An oracle hands out pairs (a, state) where the state is the amplitude
table cyclically shifted by the hidden value <a, u> mod q.  Each sample
is measured through a filter built at a fresh uniform origin y, and the
outcome is mapped to a constraint on the hidden shift:

  * equality path: a full q-row filter (needs a full-rank amplitude);
    outcome q-1 certifies <a, u> = y - 1 exactly, and 2n such equalities
    determine u by Gaussian elimination over Z_q.
  * tail path: a k-row filter where k is the amplitude's effective rank;
    outcome k-1 certifies <a, u> - y mod q lies outside {0..k-2}, i.e.
    y - <a, u> mod q lies in {1..q-k+1}, and enough such samples feed the
    linearization solver.

Neither path can return a wrong secret: equality constraints are exact,
and on the tail path any second consistent candidate would leave the
linearized system underdetermined on the degree-1 coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..amplitudes import Amplitude, make_amplitude
from ..errors import BadParameter
from ..filtering import (
    Equality,
    StateVector,
    build_filter_unitary,
    constraint_from_outcome,
    psi_state,
    sample_outcome,
)
from ..zq import Modulus, ZqVector, solve_linear_system
from .arora_ge import extract_secret, linearize, monomial_count, residuals_ok

#: Extra tail samples collected beyond the unknown count before each solve
#: attempt; retries are cheap, so the margin is small.
TAIL_RETRY_STEP = 3


@dataclass(frozen=True)
class LweSampleSet:
    """Planted instance: columns of `matrix` are the sample vectors a_i."""

    n: int
    m: int
    q: int
    matrix: np.ndarray
    secret: np.ndarray
    shifts: np.ndarray

    def __post_init__(self) -> None:
        A = np.asarray(self.matrix, dtype=np.int64) % self.q
        u = np.asarray(self.secret, dtype=np.int64) % self.q
        xs = np.asarray(self.shifts, dtype=np.int64) % self.q
        if A.shape != (self.n, self.m):
            raise BadParameter(f"matrix shape {A.shape}, expected {(self.n, self.m)}")
        if u.shape != (self.n,) or xs.shape != (self.m,):
            raise BadParameter("secret/shift shapes do not match n, m")
        if not np.array_equal((u @ A) % self.q, xs):
            raise BadParameter("shifts are inconsistent with matrix and secret")
        for name, arr in (("matrix", A), ("secret", u), ("shifts", xs)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def make_lwe_instance(
    n: int,
    m: int,
    q: int,
    rng: np.random.Generator,
    secret: np.ndarray | None = None,
) -> LweSampleSet:
    A = rng.integers(0, q, size=(n, m), dtype=np.int64)
    u = rng.integers(0, q, size=n, dtype=np.int64) if secret is None else np.asarray(secret) % q
    return LweSampleSet(n, m, q, A, u, (u @ A) % q)


class StateOracle:
    """Produces (a, shifted-state) pairs for a hidden planted secret."""

    def __init__(self, amplitude: Amplitude, secret: np.ndarray, rng: np.random.Generator):
        self.amplitude = amplitude
        self.secret = np.asarray(secret, dtype=np.int64) % amplitude.q
        self.n = self.secret.shape[0]
        self._rng = rng
        self.m_used = 0

    def draw(self) -> tuple[np.ndarray, StateVector]:
        q = self.amplitude.q
        a = self._rng.integers(0, q, size=self.n, dtype=np.int64)
        x = int(a @ self.secret % q)
        self.m_used += 1
        return a, psi_state(self.amplitude, x)


@dataclass(frozen=True)
class SolverResult:
    """Outcome of one solver run; secret is None exactly when success is False."""

    secret: ZqVector | None
    success: bool
    m_used: int
    constraints_collected: int
    details: dict[str, Any] = field(default_factory=dict)


def _failure(m_used: int, collected: int, **details: Any) -> SolverResult:
    return SolverResult(None, False, m_used, collected, dict(details))


def slwe_solve_ge(
    oracle,
    n: int,
    q: int,
    f: Amplitude,
    max_m: int,
    *,
    rng: np.random.Generator,
    completion_seed_base: int = 0,
) -> SolverResult:
    """Equality-path solver; stops at 2n equalities or max_m draws.

    f must have effective rank q (the full filter raises otherwise, which
    propagates).  Fails, never guesses, when the collected equalities do
    not determine u uniquely.
    """
    filters: dict[int, Any] = {}
    equalities: list[tuple[np.ndarray, int]] = []
    m_used = 0
    while m_used < max_m and len(equalities) < 2 * n:
        a, state = oracle.draw()
        m_used += 1
        y = int(rng.integers(q))
        U = filters.get(y)
        if U is None:
            U = build_filter_unitary(f, y, q, completion_seed=completion_seed_base + y)
            filters[y] = U
        j = sample_outcome(U, state, rng)
        con = constraint_from_outcome(y, q, q, j, effective_rank=U.full_rank)
        if isinstance(con, Equality):
            equalities.append((a, con.value))

    if not equalities:
        return _failure(m_used, 0)
    A = np.array([a for a, _ in equalities], dtype=np.int64)
    b = np.array([v for _, v in equalities], dtype=np.int64)
    sol = solve_linear_system(A, b, q)
    if sol.status != "unique":
        return _failure(m_used, len(equalities), solve_status=sol.status)
    return SolverResult(
        ZqVector(sol.x, Modulus(q)),
        True,
        m_used,
        len(equalities),
        {"equalities": len(equalities)},
    )


def solve_tail(
    oracle,
    n: int,
    q: int,
    g: Amplitude,
    k: int,
    max_m: int,
    *,
    rng: np.random.Generator,
    completion_seed_base: int = 0,
) -> SolverResult:
    """Tail-path solver for an amplitude of effective rank k < q.

    Keeps only outcome k-1 samples.  For such a sample the shifted value
    sits in the size-(q-k+1) tail starting at y+k-1, so the residual
    y - <a, u> lies in {1..q-k+1}; that set feeds the linearization.
    """
    if not 1 <= k < q:
        raise BadParameter(f"tail path needs 1 <= k < q, got k={k}, q={q}")
    support = list(range(1, q - k + 2))
    unknowns = monomial_count(n, len(support))
    filters: dict[int, Any] = {}
    pairs: list[tuple[np.ndarray, int]] = []
    m_used = 0
    attempts = 0

    while m_used < max_m:
        a, state = oracle.draw()
        m_used += 1
        y = int(rng.integers(q))
        U = filters.get(y)
        if U is None:
            U = build_filter_unitary(g, y, k, completion_seed=completion_seed_base + y)
            filters[y] = U
        j = sample_outcome(U, state, rng)
        if j != k - 1:
            continue
        pairs.append((a, y))
        if len(pairs) < unknowns or (len(pairs) - unknowns) % TAIL_RETRY_STEP:
            continue
        attempts += 1
        rows = linearize(pairs, support, n, q)
        u = extract_secret(rows, n, q)
        if u is not None and residuals_ok(pairs, u, support, q):
            return SolverResult(
                ZqVector(u, Modulus(q)),
                True,
                m_used,
                len(pairs),
                {"k": k, "support": support, "attempts": attempts},
            )

    return _failure(m_used, len(pairs), k=k, support=support, attempts=attempts)


def slwe_solve_ag(
    oracle,
    n: int,
    q: int,
    B: int,
    max_m: int,
    *,
    rng: np.random.Generator,
    completion_seed_base: int = 0,
) -> SolverResult:
    """Tail-path solver for states carrying dft(bounded_uniform(B)).

    k = 2B+1 filter rows.  At the boundary 2B+1 = q the transformed
    amplitude is a point mass, the filter has full rank, and the run is
    dispatched to the equality path.
    """
    k = 2 * B + 1
    if k > q:
        raise BadParameter(f"2B+1={k} exceeds q={q}")
    g = make_amplitude("dft_of", q, base=make_amplitude("bounded_uniform", q, B=B))
    if k == q:
        return slwe_solve_ge(
            oracle, n, q, g, max_m, rng=rng, completion_seed_base=completion_seed_base
        )
    return solve_tail(
        oracle, n, q, g, k, max_m, rng=rng, completion_seed_base=completion_seed_base
    )
