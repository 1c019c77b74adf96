"""Fidelity accounting for decoding a uniform superposition of secrets.

For a fixed coefficient matrix A, the superposed instance succeeds when
the measure-and-decode map sends (almost) every secret's sample states
back to that same secret; the leftover weight is the per-secret failure
mass.  At desk scale we enumerate every secret u, Monte-Carlo sample
outcome strings from the per-coordinate measurement distributions, and
run the classical decoder on each string.  The aggregate fidelity lower
bound is 1 minus the mean failure mass, and the plug-in binomial
variance of that mean is reported alongside it.

Decoder per mode:
  ge: keep coordinates with outcome q-1 as exact equations <a_i, u> = y_i - 1
      and solve.  When the amplitude's shifted states are exactly
      orthonormal (point masses), every outcome j pins <a_i, u> = y_i + j,
      so all m coordinates become equations; that special case is what
      makes tiny full-rank instances decode perfectly.
  ag: keep coordinates with outcome k-1 (k = effective rank) and solve by
      linearization over the tail residual set {1..q-k+1}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..amplitudes import Amplitude
from ..errors import BadParameter, ScaleExceeded
from ..filtering import build_filter_unitary, family_full_rank, psi_state
from ..zq import ZqMatrix, solve_linear_system
from .arora_ge import extract_secret, linearize, monomial_count

#: Shift-state Gram deviation below which outcomes identify shifts exactly.
ORTHONORMAL_TOL = 1e-12

SCALE_CAP = 10**6


@dataclass(frozen=True)
class FidelityReport:
    """Per-secret failure masses and the aggregate fidelity they imply."""

    per_secret_failure: np.ndarray
    fidelity: float
    trials: int
    seed: int | None
    sigma: float
    mode: str

    def __post_init__(self) -> None:
        fail = np.asarray(self.per_secret_failure, dtype=float)
        if np.any(fail < 0) or np.any(fail > 1):
            raise BadParameter("failure masses must lie in [0, 1]")
        if not 0.0 <= self.fidelity <= 1.0:
            raise BadParameter(f"fidelity {self.fidelity} outside [0, 1]")
        if abs(self.fidelity - (1.0 - float(fail.mean()))) > 1e-12:
            raise BadParameter("fidelity is not 1 - mean failure mass")
        fail.setflags(write=False)
        object.__setattr__(self, "per_secret_failure", fail)


def _all_secrets(n: int, q: int) -> np.ndarray:
    return np.indices((q,) * n).reshape(n, -1).T


def clwe_simulate(
    A: ZqMatrix,
    f: Amplitude,
    mode: str,
    rng: np.random.Generator | int,
    trials: int,
) -> FidelityReport:
    """Estimate decoder-failure mass for every secret under matrix A.

    rng may be a Generator or an integer seed; only an integer seed can
    be echoed into the report.  trials outcome strings are sampled per
    secret.
    """
    if mode not in ("ge", "ag"):
        raise BadParameter(f"mode must be ge or ag, got {mode!r}")
    seed = None
    if isinstance(rng, (int, np.integer)):
        seed = int(rng)
        rng = np.random.default_rng(seed)
    q = A.modulus.value
    if f.q != q:
        raise BadParameter(f"amplitude q={f.q} does not match matrix q={q}")
    n, m = A.data.shape
    if q**n > SCALE_CAP:
        raise ScaleExceeded(f"q^n = {q ** n} exceeds {SCALE_CAP}")

    k = q if mode == "ge" else family_full_rank(f)
    if mode == "ag" and k == q:
        mode = "ge"  # full-rank amplitude: the tail filter is the equality filter

    ys = rng.integers(0, q, size=m, dtype=np.int64)
    seed_base = int(rng.integers(2**31))

    # Outcome CDF per (filter origin, hidden shift), shared by all secrets.
    shifts = np.stack([psi_state(f, x).vector for x in range(q)], axis=1)
    cdf = np.empty((q, q, q))  # [y, outcome, shift]
    for y in range(q):
        U = build_filter_unitary(f, y, k, completion_seed=seed_base + y)
        probs = np.abs(U.matrix @ shifts) ** 2
        cdf[y] = np.cumsum(probs / probs.sum(axis=0, keepdims=True), axis=0)

    gram = shifts.conj().T @ shifts
    orthonormal = bool(np.abs(gram - np.eye(q)).max() < ORTHONORMAL_TOL)

    support = list(range(1, q - k + 2))
    unknowns = monomial_count(n, len(support))
    if mode == "ag":
        # Rows depend only on (a_i, y_i), never on the secret: build once.
        columns = [A.data[:, i] for i in range(m)]
        all_rows = linearize([(c, int(y)) for c, y in zip(columns, ys)], support, n, q)

    secrets = _all_secrets(n, q)
    failures = np.zeros(len(secrets))
    for idx, u in enumerate(secrets):
        xs = (u @ A.data) % q
        rows_cdf = cdf[ys, :, xs]  # (m, q)
        draws = rng.random((trials, m))
        outcomes = (rows_cdf[None, :, :] <= draws[:, :, None]).sum(axis=2)
        np.clip(outcomes, 0, q - 1, out=outcomes)

        bad = 0
        for t in range(trials):
            if mode == "ge":
                if orthonormal:
                    keep = np.arange(m)
                    values = (ys + outcomes[t]) % q
                else:
                    keep = np.flatnonzero(outcomes[t] == q - 1)
                    values = (ys[keep] - 1) % q
                if keep.size == 0:
                    bad += 1
                    continue
                sol = solve_linear_system(A.data[:, keep].T, values, q)
                if sol.status != "unique" or not np.array_equal(sol.x, u):
                    bad += 1
            else:
                keep = np.flatnonzero(outcomes[t] == k - 1)
                if keep.size < unknowns:
                    bad += 1
                    continue
                cand = extract_secret(all_rows[keep], n, q)
                if cand is None or not np.array_equal(cand, u):
                    bad += 1
        failures[idx] = bad / trials

    fidelity = 1.0 - float(failures.mean())
    var = float(np.sum(failures * (1.0 - failures) / trials)) / len(secrets) ** 2
    return FidelityReport(failures, fidelity, trials, seed, float(np.sqrt(var)), mode)
