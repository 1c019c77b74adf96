"""One coordinate of the filtering step, simulated exactly.

A filter at origin y with k rows measures a hidden shifted state psi_x against
the orthonormal rows <alpha_0|, ..., <alpha_{k-1}| (normalized Gram-Schmidt of
psi_y..psi_{y+k-1}) plus a seeded orthonormal completion. Outcome j carries
the constraint that x is not among the first j shifts; the last-row outcome is
an equality (k = q) or a tail membership (k < q).

All probabilities are computed analytically (|U psi_x|^2); sampling is plain
inverse-CDF on that table, so tests can compare empirical against exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import Amplitude
from .circulant import EIGENVALUE_ZERO_RTOL, build_shift_columns, circulant_eigenvalues, gso
from .errors import BadParameter, RankDeficient

UNITARITY_TOL = 1e-10
STATE_NORM_TOL = 1e-12
#: Probability mass allowed on impossible-by-rank outcomes (fp leakage only).
ANOMALY_MASS_TOL = 1e-16


@dataclass(frozen=True)
class StateVector:
    """A normalized q-dimensional state."""

    q: int
    vector: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.vector, dtype=complex)
        if v.shape != (self.q,):
            raise BadParameter(f"vector shape {v.shape} does not match q={self.q}")
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > STATE_NORM_TOL:
            raise BadParameter(f"state is not normalized (norm={nrm!r})")
        v.setflags(write=False)
        object.__setattr__(self, "vector", v)


@dataclass(frozen=True)
class FilterUnitary:
    """The q x q filtering unitary at origin y with k informative rows.

    Rows 0..k-1 are the conjugated normalized Gram-Schmidt vectors of
    psi_y..psi_{y+k-1}; rows k..q-1 are a deterministic seeded completion.
    full_rank is the effective rank of the complete q-column shift set of the
    amplitude (outcomes >= k are impossible exactly when k == full_rank).
    """

    q: int
    k: int
    y: int
    matrix: np.ndarray
    completion_seed: int
    full_rank: int

    def __post_init__(self) -> None:
        M = np.asarray(self.matrix, dtype=complex)
        if M.shape != (self.q, self.q):
            raise BadParameter(f"matrix shape {M.shape} does not match q={self.q}")
        dev = float(np.abs(M @ M.conj().T - np.eye(self.q)).max())
        if dev > UNITARITY_TOL:
            raise BadParameter(f"matrix is not unitary (max deviation {dev:.3e})")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)


@dataclass(frozen=True)
class Equality:
    """The hidden value is exactly `value`."""

    value: int
    sample_index: int | None = None


@dataclass(frozen=True)
class ExcludedSet:
    """The hidden value lies outside `values`.

    anomalous marks the impossible-by-rank band (outcome >= k when k equals
    the shift set's effective rank); such outcomes can only arise from
    floating-point leakage and are reported, not used as constraints.
    """

    values: frozenset[int]
    anomalous: bool = False
    sample_index: int | None = None


@dataclass(frozen=True)
class NoInformation:
    """Outcome 0: any hidden value is consistent."""

    sample_index: int | None = None


Constraint = Equality | ExcludedSet | NoInformation


def psi_state(f: Amplitude, v: int) -> StateVector:
    """The shifted state psi_v: entry ((v+e) mod q) = f(e)."""
    return StateVector(f.q, np.roll(f.table, v % f.q))


def family_full_rank(f: Amplitude) -> int:
    """Effective rank of the full q-column shift set, via the spectrum.

    Counts eigenvalues above the relative zero threshold; equals the number of
    nonzero entries of DFT(f) (e.g. 2B+1 for f = dft(bounded_uniform(B))).
    """
    mags = np.abs(circulant_eigenvalues(f))
    return int(np.count_nonzero(mags > EIGENVALUE_ZERO_RTOL * mags.max()))


def build_filter_unitary(f: Amplitude, y: int, k: int, completion_seed: int = 0) -> FilterUnitary:
    """Construct the filter at origin y with k Gram-Schmidt rows.

    Deterministic given (f, y, k, completion_seed); the completion rows are
    seeded standard-normal complex vectors orthonormalized against rows
    0..k-1. Raises RankDeficient when k exceeds the effective rank of the
    requested columns.
    """
    q = f.q
    if not 1 <= k <= q:
        raise BadParameter(f"k must be in [1, q={q}], got {k}")
    res = gso(build_shift_columns(f, y, k))
    if res.effective_rank < k:
        raise RankDeficient(
            f"requested k={k} rows but the shift columns have rank {res.effective_rank}"
        )
    vectors = [res.orthogonal_vectors[:, j] for j in range(k)]
    rng = np.random.default_rng(completion_seed)
    attempts = 0
    while len(vectors) < q:
        v = rng.standard_normal(q) + 1j * rng.standard_normal(q)
        for _ in range(2):
            for u in vectors:
                v = v - np.vdot(u, v) * u
        nrm = float(np.linalg.norm(v))
        if nrm < 1e-6:
            # Degenerate draw; probability ~0 but redraw defensively.
            attempts += 1
            if attempts > 100:
                raise RankDeficient("could not complete an orthonormal basis")
            continue
        vectors.append(v / nrm)
    U = np.array(vectors).conj()
    return FilterUnitary(q, k, y % q, U, completion_seed, family_full_rank(f))


def outcome_distribution(U: FilterUnitary, s: StateVector) -> np.ndarray:
    """Measurement distribution: entry j = |<row_j, s>|^2. Sums to 1 to 1e-10."""
    if U.q != s.q:
        raise BadParameter(f"dimension mismatch: unitary q={U.q}, state q={s.q}")
    p = np.abs(U.matrix @ s.vector) ** 2
    total = float(p.sum())
    if abs(total - 1.0) > 1e-10:
        raise BadParameter(f"outcome distribution sums to {total!r}")
    return p / total


def sample_outcome(U: FilterUnitary, s: StateVector, rng: np.random.Generator) -> int:
    """Draw one outcome by inverse CDF over the exact distribution."""
    p = outcome_distribution(U, s)
    cdf = np.cumsum(p)
    j = int(np.searchsorted(cdf, rng.random(), side="right"))
    return min(j, U.q - 1)


def constraint_from_outcome(
    y: int,
    k: int,
    q: int,
    j: int,
    effective_rank: int | None = None,
    sample_index: int | None = None,
) -> Constraint:
    """Map a measured outcome j to the constraint it certifies.

    j = 0: no information. 0 < j < k-1: the value is none of y..y+j-1.
    j = k-1 with k = q: the value is exactly y+q-1 (= y-1 mod q). j = k-1 with
    k < q: the value is none of y..y+k-2, i.e. it lies in the size-(q-k+1)
    tail. j >= k: the value is outside y..y+k-1; when k equals the shift
    set's effective rank (pass it via effective_rank) this outcome is
    impossible up to floating-point leakage and is flagged anomalous.
    """
    if not 1 <= k <= q:
        raise BadParameter(f"k must be in [1, q={q}], got {k}")
    if not 0 <= j < q:
        raise BadParameter(f"outcome must be in [0, {q}), got {j}")
    y = y % q
    if j == 0:
        return NoInformation(sample_index=sample_index)
    if j >= k:
        return ExcludedSet(
            frozenset((y + i) % q for i in range(k)),
            anomalous=(effective_rank == k),
            sample_index=sample_index,
        )
    if j == k - 1 and k == q:
        return Equality((y + q - 1) % q, sample_index=sample_index)
    if j == k - 1:
        return ExcludedSet(
            frozenset((y + i) % q for i in range(k - 1)), sample_index=sample_index
        )
    return ExcludedSet(frozenset((y + i) % q for i in range(j)), sample_index=sample_index)
