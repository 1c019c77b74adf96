"""Secret recovery from bounded-residual samples by linearization.

Input samples are pairs (a, y) over Z_q with the promise that every
residual y - <a, u> lies in a known set S.  Each sample then satisfies

    prod_{v in S} (y - <a, u> - v) == 0  (mod q),

a polynomial identity of degree |S| in the entries of u.  Treating every
monomial u^alpha with 1 <= |alpha| <= |S| as a fresh unknown makes the
system linear.  Once enough samples pin the degree-1 unknowns, u is read
off directly and checked against the promise before being returned.

q must be prime and |S| < q: over Z_q the product over all q residues is
identically zero (Fermat), so a full support carries no information, and
primality keeps the multinomial weights invertible.
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

import numpy as np

from ..errors import BadParameter, CompositeModulus, InsufficientSamples
from ..zq import Modulus, ZqVector, is_prime, rref


def monomial_count(n: int, degree: int) -> int:
    """Number of monomials in n variables with total degree in 1..degree."""
    return math.comb(n + degree, degree) - 1


def _monomials(n: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples ordered by total degree, then lexicographically.

    Degree-1 monomials come first, so columns 0..n-1 of the linearized
    system always correspond to u_0..u_{n-1}.
    """
    out: list[tuple[int, ...]] = []
    for d in range(1, degree + 1):
        seen = set()
        for combo in combinations_with_replacement(range(n), d):
            alpha = [0] * n
            for j in combo:
                alpha[j] += 1
            seen.add(tuple(alpha))
        out.extend(sorted(seen, reverse=True))
    return out


def _multinomial(alpha: Sequence[int]) -> int:
    total = sum(alpha)
    value = math.factorial(total)
    for aj in alpha:
        value //= math.factorial(aj)
    return value


def _residual_poly(y: int, support: Sequence[int], q: int) -> np.ndarray:
    """Coefficients of prod_{v in S} ((y - v) - t) in t, over Z_q."""
    coeffs = np.zeros(len(support) + 1, dtype=np.int64)
    coeffs[0] = 1
    deg = 0
    for v in support:
        c = (y - v) % q
        nxt = np.zeros_like(coeffs)
        nxt[: deg + 1] = (c * coeffs[: deg + 1]) % q
        nxt[1 : deg + 2] = (nxt[1 : deg + 2] - coeffs[: deg + 1]) % q
        coeffs = nxt
        deg += 1
    return coeffs % q


def _coerce(pairs: Iterable[tuple[np.ndarray | ZqVector, int]], q: int) -> list[tuple[np.ndarray, int]]:
    return [
        (np.asarray(a.data if isinstance(a, ZqVector) else a, dtype=np.int64) % q, int(y) % q)
        for a, y in pairs
    ]


def linearize(
    pairs: Sequence[tuple[np.ndarray | ZqVector, int]],
    support: Sequence[int],
    n: int,
    q: int,
) -> np.ndarray:
    """Augmented linear system over Z_q, one row per sample.

    Columns follow _monomials order; the last column is the right-hand
    side.  Rows can be subset and re-solved cheaply, which batch callers
    exploit when the same sample pool is resampled many times.
    """
    degree = len(support)
    mons = _monomials(n, degree)
    weights = np.array([_multinomial(alpha) % q for alpha in mons], dtype=np.int64)
    degrees = np.array([sum(alpha) for alpha in mons], dtype=np.int64)
    alpha_mat = np.array(mons, dtype=np.int64)

    coerced = _coerce(pairs, q)
    rows = np.zeros((len(coerced), len(mons) + 1), dtype=np.int64)
    for i, (a, y) in enumerate(coerced):
        poly = _residual_poly(y, support, q)
        a_pows = np.ones((n, degree + 1), dtype=np.int64)
        for d in range(1, degree + 1):
            a_pows[:, d] = (a_pows[:, d - 1] * a) % q
        mono_vals = np.ones(len(mons), dtype=np.int64)
        for j in range(n):
            mono_vals = (mono_vals * a_pows[j, alpha_mat[:, j]]) % q
        rows[i, :-1] = (poly[degrees] * weights % q) * mono_vals % q
        rows[i, -1] = (-poly[0]) % q
    return rows


def extract_secret(rows: np.ndarray, n: int, q: int) -> np.ndarray | None:
    """Degree-1 unknowns from a linearized system, or None if any is free.

    A variable counts as pinned only when its pivot row is zero on every
    free column, so partial rank never yields a guessed coordinate.
    """
    reduced, pivots = rref(rows, q)
    ncols = rows.shape[1] - 1
    if any(p == ncols for p in pivots):
        return None  # inconsistent: promise violated somewhere upstream
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    values: dict[int, int] = {}
    for r, p in enumerate(pivots):
        if p < n and (len(free) == 0 or not np.any(reduced[r, free])):
            values[p] = int(reduced[r, ncols])
    if any(j not in values for j in range(n)):
        return None
    return np.array([values[j] for j in range(n)], dtype=np.int64)


def residuals_ok(
    pairs: Sequence[tuple[np.ndarray | ZqVector, int]],
    u: np.ndarray,
    support: Sequence[int],
    q: int,
) -> bool:
    support_set = {int(v) % q for v in support}
    for a, y in _coerce(pairs, q):
        if int((y - int(a @ u)) % q) not in support_set:
            return False
    return True


def arora_ge(
    samples: Iterable[tuple[np.ndarray | ZqVector, int]],
    error_support: Iterable[int],
    n: int,
    q: int,
) -> ZqVector | None:
    """Recover u from samples whose residuals all lie in error_support.

    Returns None when the linearized system leaves any degree-1 unknown
    free or the candidate fails the residual check; a wrong vector is
    never returned.  Raises InsufficientSamples when the sample count is
    below the number of linearized unknowns (the system can then never
    pin them all), and CompositeModulus for non-prime q.
    """
    if not is_prime(q):
        raise CompositeModulus(f"modulus {q} is not prime")
    support = sorted({int(v) % q for v in error_support})
    if not support:
        raise BadParameter("error support is empty")
    if len(support) >= q:
        raise BadParameter("full-residue support carries no information")

    pairs = list(samples)
    if len(pairs) < monomial_count(n, len(support)):
        raise InsufficientSamples(
            f"{len(pairs)} samples for {monomial_count(n, len(support))} linearized unknowns"
        )

    rows = linearize(pairs, support, n, q)
    u = extract_secret(rows, n, q)
    if u is None:
        return None
    if not residuals_ok(pairs, u, support, q):
        return None
    return ZqVector(u, Modulus(q))
