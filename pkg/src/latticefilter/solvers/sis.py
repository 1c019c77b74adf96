"""Short-vector sampling and the recursive composite-modulus solver.

Two routes to short kernel vectors of A over Z_q:

  * sis_state_sample draws uniformly from {z : Az = 0 mod q, |z|_inf <= B}.
    That uniform law is exactly the measurement distribution of the ideal
    superposition over the box-bounded kernel, so rejection sampling from
    the box is a faithful simulation, not an approximation.
  * sis_solve_composite / sis_solve_general peel one factor of q at a
    time: each round solves independent (rows x block) kernel systems
    mod p_i, stacks the short solutions into a block-diagonal Y_i, and
    divides A Y_i by p_i.  The product Y_1 ... Y_k is a nonzero integer
    vector with Ax = 0 mod q and |x|_inf at most the product of the
    per-round bounds, because every partial product keeps at most one
    nonzero entry per row (the block supports are disjoint).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import (
    BadParameter,
    BadShape,
    EmptySolutionSet,
    ScaleExceeded,
    Timeout,
)
from ..zq import Modulus, ZqMatrix, ZqVector, centered, kernel_basis, rank

#: Enumeration refuses kernels larger than this many points.
ENUMERATION_CAP = 10**6

#: Rejection sampling gives up after this many box draws.
REJECTION_MAX_DRAWS = 10**6

_REJECTION_CHUNK = 4096

SubSolver = Callable[[np.ndarray, int], np.ndarray]


@dataclass(frozen=True)
class SisInstance:
    """Matrix A over Z_q with an infinity-norm target for solutions."""

    n: int
    m: int
    q: int
    beta: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        A = np.asarray(self.matrix, dtype=np.int64) % self.q
        if A.shape != (self.n, self.m):
            raise BadParameter(f"matrix shape {A.shape}, expected {(self.n, self.m)}")
        if self.beta < 1:
            raise BadParameter(f"beta must be >= 1, got {self.beta}")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @classmethod
    def random(
        cls, n: int, m: int, q: int, beta: int, rng: np.random.Generator
    ) -> "SisInstance":
        return cls(n, m, q, beta, rng.integers(0, q, size=(n, m), dtype=np.int64))


def verify_sis(A: np.ndarray, q: int, x: np.ndarray, beta: int) -> bool:
    """Nonzero, in the kernel mod q, and short -- all three at once."""
    x = np.asarray(x, dtype=np.int64)
    return (
        bool(np.any(x))
        and not np.any((np.asarray(A, dtype=np.int64) @ x) % q)
        and int(np.abs(x).max()) <= beta
    )


def sis_state_sample(
    A: ZqMatrix,
    B: int,
    rng: np.random.Generator,
    method: str = "enumeration",
    max_draws: int = REJECTION_MAX_DRAWS,
) -> ZqVector:
    """One draw from the uniform law on the box-bounded kernel of A.

    The box is the centered [-B, B]^m; B < q/2 keeps its residues
    distinct.  The zero vector belongs to the set and can be drawn, but
    an instance whose box-kernel holds nothing else is rejected outright
    in enumeration mode since it cannot ever produce a usable short
    vector.
    """
    A.modulus.require_prime()
    q = A.modulus.value
    n, m = A.data.shape
    if not 1 <= B < q / 2:
        raise BadParameter(f"need 1 <= B < q/2, got B={B}, q={q}")
    if method == "enumeration":
        K = kernel_basis(A.data, q)
        d = K.shape[1]
        if q**d > ENUMERATION_CAP:
            raise ScaleExceeded(f"kernel has q^{d} points, cap is {ENUMERATION_CAP}")
        if d == 0:
            raise EmptySolutionSet("kernel is trivial")
        coeffs = np.indices((q,) * d).reshape(d, -1).T
        points = (coeffs @ K.T) % q
        in_box = np.all(np.abs(centered(points, q)) <= B, axis=1)
        points = points[in_box]
        if not np.any(points):
            raise EmptySolutionSet("box-kernel set contains only the zero vector")
        pick = int(rng.integers(len(points)))
        return ZqVector(points[pick], A.modulus)
    if method == "rejection":
        drawn = 0
        while drawn < max_draws:
            chunk = min(_REJECTION_CHUNK, max_draws - drawn)
            z = rng.integers(-B, B + 1, size=(chunk, m), dtype=np.int64)
            ok = ~np.any((A.data @ z.T) % q, axis=0)
            drawn += chunk
            hits = np.flatnonzero(ok)
            if hits.size:
                return ZqVector(z[hits[0]] % q, A.modulus)
        raise Timeout(f"no kernel point in {max_draws} box draws")
    raise BadParameter(f"method must be enumeration or rejection, got {method!r}")


def kernel_subsolver(block: np.ndarray, p: int) -> np.ndarray:
    """First kernel basis vector of the block mod p, centered.

    Exists whenever the block has more columns than rank; the composite
    pipeline guarantees that by shape (rows = n-1, columns = n).
    """
    K = kernel_basis(np.asarray(block, dtype=np.int64) % p, p)
    if K.shape[1] == 0:
        raise EmptySolutionSet(f"block has trivial kernel mod {p}")
    z = centered(K[:, 0], p)
    assert np.any(z), "kernel basis vector reduced to zero"
    return z


def state_subsolver(
    B: int, rng: np.random.Generator, method: str = "enumeration", max_tries: int = 100
) -> SubSolver:
    """Wrap sis_state_sample as a per-block subsolver, redrawing on zero."""

    def solve(block: np.ndarray, p: int) -> np.ndarray:
        M = ZqMatrix(np.asarray(block, dtype=np.int64) % p, Modulus(p))
        for _ in range(max_tries):
            z = sis_state_sample(M, B, rng, method).centered()
            if np.any(z):
                return z
        raise Timeout(f"no nonzero draw in {max_tries} tries")

    return solve


def _compose(
    A: np.ndarray,
    q: int,
    factors: Sequence[int],
    widths: Sequence[int],
    subsolvers: Sequence[SubSolver],
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Run the peeling recursion; returns (x, partial products)."""
    M = np.asarray(A, dtype=np.int64) % q
    partials: list[np.ndarray] = []
    X: np.ndarray | None = None
    q_rem = q
    for p, width, solver in zip(factors, widths, subsolvers):
        cols = M.shape[1]
        if cols % width:
            raise BadShape(f"{cols} columns do not split into width-{width} blocks")
        blocks = cols // width
        Y = np.zeros((cols, blocks), dtype=np.int64)
        for j in range(blocks):
            block = M[:, j * width : (j + 1) * width]
            z = np.asarray(solver(block % p, p), dtype=np.int64)
            if z.shape != (width,) or not np.any(z):
                raise BadShape(f"subsolver returned invalid block solution {z!r}")
            assert not np.any((block % p) @ z % p), "subsolver output not in kernel"
            Y[j * width : (j + 1) * width, j] = z
        prod = M @ Y
        assert not np.any(prod % p), "block solutions did not clear the factor"
        q_rem //= p
        M = (prod // p) % max(q_rem, 1)
        X = Y if X is None else X @ Y
        partials.append(X.copy())
    assert X is not None and X.shape[1] == 1
    return X[:, 0], partials


def sis_solve_general(
    A: ZqMatrix,
    factorization: Sequence[tuple[int, int]],
    subsolvers: Sequence[SubSolver],
    return_partials: bool = False,
):
    """Compose per-factor block subsolvers into a full kernel vector.

    factorization lists (p_i, m_i): the modulus factor peeled at round i
    and the block width handed to that round's subsolver.  Requires
    prod p_i = q and prod m_i = m.  With k = 1 this is just the single
    subsolver run on A itself.
    """
    q = A.modulus.value
    m = A.data.shape[1]
    factors = [p for p, _ in factorization]
    widths = [w for _, w in factorization]
    if int(np.prod(factors)) != q:
        raise BadParameter(f"factors {factors} do not multiply to q={q}")
    if int(np.prod(widths)) != m:
        raise BadShape(f"widths {widths} do not multiply to m={m}")
    if len(subsolvers) != len(factors):
        raise BadParameter("need one subsolver per factor")
    x, partials = _compose(A.data, q, factors, widths, subsolvers)
    assert np.any(x), "composed solution is zero"
    assert not np.any((A.data @ x) % q), "composed solution not in kernel mod q"
    return (x, partials) if return_partials else x


def sis_solve_composite(
    A: ZqMatrix,
    factor_list: Sequence[int],
    return_partials: bool = False,
):
    """Short integer kernel vector for q = p_1 ... p_k, prime factors.

    A must have n-1 rows and m = n^k columns.  The output is an integer
    vector (not reduced mod q) with Ax = 0 mod q, x != 0, and
    |x|_inf <= prod floor(p_i / 2); those three facts are hard-asserted.
    """
    q = A.modulus.value
    rows, m = A.data.shape
    n = rows + 1
    k = len(factor_list)
    if any(p < 2 for p in factor_list):
        raise BadParameter(f"factors must be >= 2, got {list(factor_list)}")
    if int(np.prod(list(factor_list))) != q:
        raise BadParameter(f"factors {list(factor_list)} do not multiply to q={q}")
    for p in factor_list:
        Modulus(int(p)).require_prime()
    if m != n**k:
        raise BadShape(f"m={m} but n^k = {n}^{k} = {n ** k}")
    out = sis_solve_general(
        A,
        [(int(p), n) for p in factor_list],
        [kernel_subsolver] * k,
        return_partials=True,
    )
    x, partials = out
    bound = int(np.prod([p // 2 for p in factor_list]))
    assert int(np.abs(x).max()) <= bound, "norm bound violated"
    return (x, partials) if return_partials else x
