"""Exact arithmetic over Z_q: centered representatives, Gaussian elimination,
kernel bases.

All elimination routines require a prime modulus (inverses via Fermat); they
raise CompositeModulus otherwise. Moduli are capped at 2^16 so that q^2 fits
comfortably in int64 intermediates and trial-division primality stays cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BadParameter, CompositeModulus

MAX_MODULUS = 1 << 16


def is_prime(q: int) -> bool:
    """Trial-division primality check, adequate for q <= 2^16."""
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """A validated modulus q with its primality precomputed."""

    value: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, (int, np.integer)) or isinstance(self.value, bool):
            raise BadParameter(f"modulus must be an integer, got {self.value!r}")
        if self.value < 2:
            raise BadParameter(f"modulus must be >= 2, got {self.value}")
        if self.value > MAX_MODULUS:
            raise BadParameter(f"modulus {self.value} exceeds cap {MAX_MODULUS}")
        object.__setattr__(self, "value", int(self.value))
        object.__setattr__(self, "_prime", is_prime(self.value))

    @property
    def prime(self) -> bool:
        return self._prime  # type: ignore[attr-defined]

    def require_prime(self) -> None:
        if not self.prime:
            raise CompositeModulus(f"modulus {self.value} is composite")

    def __int__(self) -> int:
        return self.value


def _as_modulus(q: int | Modulus) -> Modulus:
    return q if isinstance(q, Modulus) else Modulus(q)


def centered(x, q: int | Modulus):
    """Centered representative of x mod q in [-floor(q/2), q - floor(q/2)).

    For odd q this is the symmetric range [-(q-1)/2, (q-1)/2]; for even q the
    convention is [-q/2, q/2), so e.g. centered(2, 4) == -2. Accepts scalars
    or integer arrays.
    """
    qv = int(_as_modulus(q))
    h = qv // 2
    r = (np.asarray(x, dtype=np.int64) + h) % qv - h
    if np.isscalar(x) or np.ndim(x) == 0:
        return int(r)
    return r


def _reduce(data, q: Modulus) -> np.ndarray:
    arr = np.asarray(data, dtype=np.int64) % int(q)
    return arr


@dataclass(frozen=True)
class ZqVector:
    """An element of Z_q^n, stored with entries reduced to [0, q)."""

    data: np.ndarray
    modulus: Modulus

    def __post_init__(self) -> None:
        q = _as_modulus(self.modulus)
        arr = _reduce(self.data, q)
        if arr.ndim != 1:
            raise BadParameter(f"vector must be 1-D, got shape {arr.shape}")
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "modulus", q)

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def q(self) -> int:
        return int(self.modulus)

    def centered(self) -> np.ndarray:
        return centered(self.data, self.modulus)

    def __add__(self, other: "ZqVector") -> "ZqVector":
        self._check(other)
        return ZqVector(self.data + other.data, self.modulus)

    def __sub__(self, other: "ZqVector") -> "ZqVector":
        self._check(other)
        return ZqVector(self.data - other.data, self.modulus)

    def __neg__(self) -> "ZqVector":
        return ZqVector(-self.data, self.modulus)

    def dot(self, other: "ZqVector") -> int:
        self._check(other)
        return int(np.dot(self.data, other.data) % self.q)

    def _check(self, other: "ZqVector") -> None:
        if self.q != other.q:
            raise BadParameter(f"modulus mismatch: {self.q} vs {other.q}")
        if len(self) != len(other):
            raise BadParameter(f"length mismatch: {len(self)} vs {len(other)}")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ZqVector)
            and self.q == other.q
            and bool(np.array_equal(self.data, other.data))
        )


@dataclass(frozen=True)
class ZqMatrix:
    """A matrix over Z_q, entries reduced to [0, q)."""

    data: np.ndarray
    modulus: Modulus

    def __post_init__(self) -> None:
        q = _as_modulus(self.modulus)
        arr = _reduce(self.data, q)
        if arr.ndim != 2:
            raise BadParameter(f"matrix must be 2-D, got shape {arr.shape}")
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "modulus", q)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]

    @property
    def q(self) -> int:
        return int(self.modulus)

    def centered(self) -> np.ndarray:
        return centered(self.data, self.modulus)

    def matvec(self, v: ZqVector | np.ndarray) -> ZqVector:
        arr = v.data if isinstance(v, ZqVector) else _reduce(v, self.modulus)
        if arr.shape[0] != self.shape[1]:
            raise BadParameter(f"cannot multiply {self.shape} by vector of length {arr.shape[0]}")
        return ZqVector(self.data @ arr, self.modulus)

    def __matmul__(self, other: "ZqMatrix") -> "ZqMatrix":
        if not isinstance(other, ZqMatrix):
            return NotImplemented
        if self.q != other.q:
            raise BadParameter(f"modulus mismatch: {self.q} vs {other.q}")
        return ZqMatrix(self.data @ other.data, self.modulus)

    def transpose(self) -> "ZqMatrix":
        return ZqMatrix(self.data.T, self.modulus)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ZqMatrix)
            and self.q == other.q
            and bool(np.array_equal(self.data, other.data))
        )

    @classmethod
    def random(cls, rows: int, cols: int, q: int | Modulus, rng: np.random.Generator) -> "ZqMatrix":
        qq = _as_modulus(q)
        return cls(rng.integers(0, int(qq), size=(rows, cols)), qq)


SolveStatus = Literal["unique", "no_solution", "underdetermined"]


@dataclass(frozen=True)
class LinearSolution:
    """Outcome of solve_linear_system. `x` is set only for status 'unique'."""

    status: SolveStatus
    x: np.ndarray | None = None


def rref(A, q: int | Modulus) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of A over prime Z_q.

    Pivot selection is the first nonzero entry in row-major scan order
    (leftmost unsolved column, topmost nonzero row), so the output is
    deterministic. Returns (R, pivot_columns).
    """
    qm = _as_modulus(q)
    qm.require_prime()
    qv = int(qm)
    R = _reduce(A, qm).copy()
    if R.ndim != 2:
        raise BadParameter(f"expected 2-D array, got shape {R.shape}")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            R[[r, p]] = R[[p, r]]
        inv = pow(int(R[r, c]), qv - 2, qv)
        R[r] = (R[r] * inv) % qv
        for rr in range(rows):
            if rr != r and R[rr, c]:
                R[rr] = (R[rr] - R[rr, c] * R[r]) % qv
        pivots.append(c)
        r += 1
    return R, pivots


def solve_linear_system(A, b, q: int | Modulus) -> LinearSolution:
    """Solve A x = b over prime Z_q by Gaussian elimination.

    Returns a LinearSolution whose status is 'unique' (with x), 'no_solution'
    (inconsistent), or 'underdetermined' (consistent, rank < ncols).
    Raises CompositeModulus for non-prime q.
    """
    qm = _as_modulus(q)
    qm.require_prime()
    Aarr = _reduce(A, qm)
    barr = _reduce(b, qm)
    if Aarr.ndim != 2 or barr.ndim != 1 or Aarr.shape[0] != barr.shape[0]:
        raise BadParameter(
            f"incompatible shapes A={Aarr.shape} b={barr.shape}"
        )
    n = Aarr.shape[1]
    aug = np.hstack([Aarr, barr[:, None]])
    R, pivots = rref(aug, qm)
    if n in pivots:
        return LinearSolution("no_solution")
    if len(pivots) < n:
        return LinearSolution("underdetermined")
    x = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(pivots):
        x[c] = R[row, n]
    return LinearSolution("unique", x)


def kernel_basis(A, q: int | Modulus) -> np.ndarray:
    """Column basis of {x in Z_q^m : A x = 0} over prime Z_q.

    Output is (m, m - rank); column j is the standard RREF nullspace vector
    for the j-th free column (free variable set to 1, pivot variables to the
    negated RREF entries), so the basis is deterministic.
    """
    qm = _as_modulus(q)
    qm.require_prime()
    qv = int(qm)
    Aarr = _reduce(A, qm)
    m = Aarr.shape[1]
    R, pivots = rref(Aarr, qm)
    free = [c for c in range(m) if c not in pivots]
    basis = np.zeros((m, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for row, pc in enumerate(pivots):
            basis[pc, j] = (-R[row, fc]) % qv
    return basis


def rank(A, q: int | Modulus) -> int:
    """Rank of A over prime Z_q."""
    return len(rref(A, q)[1])
