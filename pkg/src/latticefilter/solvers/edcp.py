"""Coset-state secret recovery through reduction to shifted-state samples.

A coset sample over Z_q^n is the two-register state

    sum_j D(j) |j> |x + j s>,

with a per-sample offset x and the shared hidden vector s.  Fourier
transforming register 2 and measuring it yields a uniform vector a and
collapses register 1; a final Fourier transform on register 1 leaves the
table of dft(D) cyclically shifted by -<a, s>.  Those (a, state) pairs
are exactly the shifted-state samples the filter solvers consume, with
hidden secret -s; one negation at the end undoes the sign.

The constant-modulus pipeline instead Fourier transforms register 1 over
Z_p (D uniform on [0, p)) and measures both registers, producing pairs
(z, y) whose joint law ties z to <s, y> mod q.  A nonzero z certifies
<s, y> != 0.  Those certificates determine s only up to a nonzero scalar
factor (every multiple c*s satisfies them equally), so the recovery here
returns the scaled representative whose first nonzero coordinate is 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..amplitudes import Amplitude, dft, dft_matrix, make_amplitude
from ..errors import BadParameter, InsufficientSamples, ScaleExceeded
from ..filtering import StateVector, family_full_rank, psi_state
from ..zq import Modulus, ZqVector
from .arora_ge import arora_ge, monomial_count
from .slwe import SolverResult, slwe_solve_ge, solve_tail

SCALE_CAP = 10**6

#: Joint-measurement weights below this are exact zeros polluted by
#: floating point and are clipped before sampling.
WEIGHT_CLIP = 1e-20


@dataclass(frozen=True)
class EdcpSample:
    """One two-register coset state, explicit (dense table) or symbolic."""

    n: int
    q: int
    distribution: Amplitude
    offset: np.ndarray
    secret: np.ndarray
    table: np.ndarray | None = None


@dataclass(frozen=True)
class EdcpSampleSet:
    """m coset samples sharing one secret and one register-1 distribution."""

    n: int
    m: int
    q: int
    secret: np.ndarray
    distribution: Amplitude
    representation: str
    samples: tuple[EdcpSample, ...]

    def __post_init__(self) -> None:
        if any(not np.array_equal(s.secret, self.secret) for s in self.samples):
            raise BadParameter("samples disagree on the secret")


def _digit_codes(n: int, q: int) -> np.ndarray:
    """All of Z_q^n as rows, in code order (last coordinate fastest)."""
    return np.indices((q,) * n).reshape(n, -1).T


def _code(vec: np.ndarray, q: int) -> int:
    code = 0
    for v in vec:
        code = code * q + int(v)
    return code


def _explicit_table(n: int, q: int, D: Amplitude, x: np.ndarray, s: np.ndarray) -> np.ndarray:
    if q**n > SCALE_CAP:
        raise ScaleExceeded(f"q^n = {q ** n} exceeds {SCALE_CAP}")
    table = np.zeros((q, q**n), dtype=complex)
    for j in range(q):
        table[j, _code((x + j * s) % q, q)] = D.table[j]
    return table


def edcp_sample_set(
    n: int,
    m: int,
    q: int,
    distribution: Amplitude,
    secret: np.ndarray,
    rng: np.random.Generator,
    representation: str = "symbolic",
) -> EdcpSampleSet:
    """Draw m coset samples with uniform offsets for a planted secret."""
    if representation not in ("symbolic", "explicit"):
        raise BadParameter(f"representation must be symbolic or explicit, got {representation!r}")
    if distribution.q != q:
        raise BadParameter(f"distribution has q={distribution.q}, expected {q}")
    s = np.asarray(secret, dtype=np.int64) % q
    if s.shape != (n,):
        raise BadParameter(f"secret shape {s.shape}, expected {(n,)}")
    samples = []
    for _ in range(m):
        x = rng.integers(0, q, size=n, dtype=np.int64)
        table = _explicit_table(n, q, distribution, x, s) if representation == "explicit" else None
        samples.append(EdcpSample(n, q, distribution, x, s, table))
    return EdcpSampleSet(n, m, q, s, distribution, representation, tuple(samples))


def reduced_state(sample: EdcpSample, a: np.ndarray) -> StateVector:
    """Closed form for the register-1 state given measurement outcome a.

    Up to a global phase the conditional state is the dft(D) table
    shifted by -<a, s>, for every a, so the explicit simulation must
    reproduce this with overlap 1.
    """
    shift = int(-(np.asarray(a, dtype=np.int64) @ sample.secret) % sample.q)
    return psi_state(dft(sample.distribution), shift)


def edcp_to_slwe(sample: EdcpSample, rng: np.random.Generator) -> tuple[ZqVector, StateVector]:
    """One reduction step: measure register 2 in the Fourier basis.

    Returns the measured vector a (uniform) and the register-1 state.
    The explicit path works from the stored two-register table; the
    symbolic path uses reduced_state directly.  Both follow the same
    distribution, though they consume the generator differently, so
    matching them state-for-state requires conditioning on the same a.
    """
    n, q = sample.n, sample.q
    if sample.table is not None:
        codes = _digit_codes(n, q)
        # Row j of the table has at most one nonzero, at column code(x + j*s);
        # rows where D vanishes keep a dummy column and a zero amplitude.
        support_codes = np.zeros(q, dtype=np.int64)
        amps = np.zeros(q, dtype=complex)
        nz_rows, nz_cols = np.nonzero(sample.table)
        support_codes[nz_rows] = nz_cols
        amps[nz_rows] = sample.table[nz_rows, nz_cols]
        # <a, w_j> for every candidate measurement outcome a
        dots = (codes[support_codes] @ codes.T) % q
        phi = amps[:, None] * np.exp(2j * np.pi * dots / q) / q ** (n / 2)
        weights = (np.abs(phi) ** 2).sum(axis=0)
        weights = weights / weights.sum()
        a_code = int(np.searchsorted(np.cumsum(weights), rng.random()))
        a_code = min(a_code, q**n - 1)
        cond = phi[:, a_code] / np.sqrt(weights[a_code])
        out = dft_matrix(q) @ cond
        return ZqVector(codes[a_code], Modulus(q)), StateVector(q, out)
    a = rng.integers(0, q, size=n, dtype=np.int64)
    return ZqVector(a, Modulus(q)), reduced_state(sample, a)


class _ReductionOracle:
    """Adapts a coset sample set to the (a, state) draw interface."""

    def __init__(self, sample_set: EdcpSampleSet, rng: np.random.Generator):
        self._samples = iter(sample_set.samples)
        self._rng = rng
        self.m_used = 0

    def draw(self) -> tuple[np.ndarray, StateVector]:
        sample = next(self._samples)
        self.m_used += 1
        a, state = edcp_to_slwe(sample, self._rng)
        return a.data, state


def edcp_solve(
    sample_set: EdcpSampleSet,
    mode: str,
    *,
    rng: np.random.Generator,
    completion_seed_base: int = 0,
) -> SolverResult:
    """Reduce every sample and run the matching filter pipeline.

    The reduction plants -s as the shifted-state secret, so the recovered
    vector is negated once before being reported.  mode "ge" needs the
    transformed distribution to have full rank (a full-support D); mode
    "ag" uses the tail filter at the transformed distribution's effective
    rank, which for D uniform on [0, w) is exactly w.
    """
    if mode not in ("ge", "ag"):
        raise BadParameter(f"mode must be ge or ag, got {mode!r}")
    n, q = sample_set.n, sample_set.q
    g = dft(sample_set.distribution)
    oracle = _ReductionOracle(sample_set, rng)
    k = family_full_rank(g)
    if mode == "ge" or k == q:
        result = slwe_solve_ge(
            oracle, n, q, g, sample_set.m, rng=rng, completion_seed_base=completion_seed_base
        )
    else:
        result = solve_tail(
            oracle, n, q, g, k, sample_set.m, rng=rng, completion_seed_base=completion_seed_base
        )
    if not result.success:
        return result
    s = ZqVector((-result.secret.data) % q, Modulus(q))
    details = dict(result.details, mode=mode, negated=True)
    return SolverResult(s, True, result.m_used, result.constraints_collected, details)


def _register1_width(D: Amplitude) -> int:
    """Width p of a uniform-on-[0, p) register-1 distribution."""
    q = D.q
    nz = np.flatnonzero(np.abs(D.table) > 1e-12)
    p = nz.size
    expected = make_amplitude("one_sided_uniform", q, w=p)
    if not np.allclose(D.table, expected.table, atol=1e-12):
        raise BadParameter("register-1 distribution must be uniform on [0, p)")
    if not 1 < p < q:
        raise BadParameter(f"need 1 < p < q, got p={p}, q={q}")
    return p


def friedl_measurements(
    sample_set: EdcpSampleSet, rng: np.random.Generator
) -> list[tuple[int, np.ndarray]]:
    """Simulate the double-Fourier measurement for every sample.

    Each sample yields (z, y) with y uniform over Z_q^n and z drawn from
    the exact register-1 law given t = <s, y>:

        Pr[z | t] = |(1/p) * sum_j exp(2*pi*i*j*(z/p + t/q))|^2.

    At t = 0 that sum collapses to the point mass z = 0, which is why a
    nonzero z certifies <s, y> != 0.
    """
    n, q = sample_set.n, sample_set.q
    p = _register1_width(sample_set.distribution)
    s = sample_set.secret

    reg1 = np.arange(p)
    zs = np.arange(p)[:, None]
    table = np.empty((q, p))
    for t in range(q):
        amps = np.exp(2j * np.pi * reg1 * (zs / p + t / q)).mean(axis=1)
        table[t] = np.abs(amps) ** 2
    table[table < WEIGHT_CLIP] = 0.0
    table /= table.sum(axis=1, keepdims=True)
    cdf = np.cumsum(table, axis=1)

    out: list[tuple[int, np.ndarray]] = []
    for _ in range(sample_set.m):
        y = rng.integers(0, q, size=n, dtype=np.int64)
        t = int(s @ y % q)
        z = int(np.searchsorted(cdf[t], rng.random()))
        out.append((min(z, p - 1), y))
    return out


def friedl_constant_q(sample_set: EdcpSampleSet, *, rng: np.random.Generator) -> ZqVector:
    """Constant-modulus recovery from nonzero-z certificates.

    Collects the pairs with z != 0, each certifying <s, y> != 0, and
    first attempts the linearization solver over the residual set
    {1..q-1}.  Because every scalar multiple of s satisfies the same
    certificates, that system never pins the coordinates on its own; the
    fallback filters all candidates by consistency and returns the
    unique surviving scalar line, scaled so its first nonzero coordinate
    is 1.
    """
    n, q = sample_set.n, sample_set.q
    Modulus(q).require_prime()
    measurements = friedl_measurements(sample_set, rng)
    pairs = [(y, 0) for z, y in measurements if z != 0]
    if len(pairs) < monomial_count(n, q - 1):
        raise InsufficientSamples(
            f"{len(pairs)} nonzero-z pairs for {monomial_count(n, q - 1)} unknowns"
        )
    direct = arora_ge(pairs, range(1, q), n, q)
    if direct is not None:
        return direct

    if q**n > SCALE_CAP:
        raise ScaleExceeded(f"q^n = {q ** n} exceeds {SCALE_CAP}")
    Y = np.array([y for y, _ in pairs], dtype=np.int64)
    cands = _digit_codes(n, q)[1:]  # skip zero
    alive = cands[np.all((cands @ Y.T) % q != 0, axis=1)]
    lines = {tuple(_canonical_line_rep(u, q)) for u in alive}
    if len(lines) != 1:
        raise InsufficientSamples(
            f"{len(lines)} candidate lines remain; need more measurements"
        )
    rep = np.array(next(iter(lines)), dtype=np.int64)
    return ZqVector(rep, Modulus(q))


def _canonical_line_rep(u: np.ndarray, q: int) -> np.ndarray:
    lead = int(u[np.flatnonzero(u)[0]])
    inv = pow(lead, q - 2, q)
    return (u * inv) % q
