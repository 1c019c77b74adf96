"""Shift-column sets, their Gram-Schmidt data, and circulant eigenvalue tools.

The shifted noise states psi_v(i) = f(i - v mod q) form the columns of a
circulant matrix; its eigenvalue magnitudes are sqrt(q)*|f^|, and the norm of
the last Gram-Schmidt vector of the first k columns is the quantity that
controls filtering success. The bounds implemented here are deliberately the
loose analytic ones (they are what the success-rate guarantees cite); exact
values come from gso() or the dual-norm identity.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import Amplitude, dft
from .errors import BadParameter, DuplicateNodes, SingularGram

GSO_RANK_TOL = 1e-9
GRAM_CONDITION_CAP = 1e12
NODE_SEPARATION_TOL = 1e-12
EIGENVALUE_ZERO_RTOL = 1e-12


@dataclass(frozen=True)
class ShiftColumnSet:
    """Columns psi_y, psi_{y+1}, ..., psi_{y+k-1} of the amplitude f.

    Column j holds the state shifted to v = y+j: entry ((v+e) mod q, j) is
    f(e). Equivalently columns[:, j] = roll(f.table, y+j).
    """

    amplitude: Amplitude
    y: int
    columns: np.ndarray

    @property
    def q(self) -> int:
        return self.amplitude.q

    @property
    def k(self) -> int:
        return self.columns.shape[1]


@dataclass(frozen=True)
class GsoResult:
    """Normalized Gram-Schmidt vectors, residual norms, and effective rank.

    orthogonal_vectors[:, j] is the normalized residual of column j, or a zero
    column when the residual fell below the rank tolerance; norms[j] is the
    pre-normalization residual norm (0.0 for skipped columns).
    """

    orthogonal_vectors: np.ndarray
    norms: np.ndarray
    effective_rank: int


def build_shift_columns(f: Amplitude, y: int, k: int) -> ShiftColumnSet:
    """The first k shifted columns starting at origin y (taken mod q)."""
    if not 1 <= k <= f.q:
        raise BadParameter(f"k must be in [1, q={f.q}], got {k}")
    cols = np.column_stack([np.roll(f.table, (y + j) % f.q) for j in range(k)])
    return ShiftColumnSet(f, y % f.q, cols)


def gso(columns: np.ndarray | ShiftColumnSet, tol: float = GSO_RANK_TOL) -> GsoResult:
    """Modified Gram-Schmidt over C with one re-orthogonalization pass.

    A residual whose norm falls below tol * (largest column/residual norm seen
    so far) is recorded with norm 0.0 and skipped; everything later is
    orthogonalized only against the accepted vectors. The second projection
    pass ("twice is enough") keeps residuals as small as ~1e-8 relative
    accurate in double precision, which the gaussian family needs at q = 31.
    """
    cols = columns.columns if isinstance(columns, ShiftColumnSet) else np.asarray(columns, dtype=complex)
    if cols.ndim != 2:
        raise BadParameter(f"expected 2-D column array, got shape {cols.shape}")
    n, k = cols.shape
    basis = np.zeros((n, k), dtype=complex)
    norms = np.zeros(k)
    accepted: list[int] = []
    max_norm = 0.0
    for j in range(k):
        v = cols[:, j].astype(complex)
        for _ in range(2):
            for i in accepted:
                v = v - np.vdot(basis[:, i], v) * basis[:, i]
        nrm = float(np.linalg.norm(v))
        ref = max(max_norm, float(np.linalg.norm(cols[:, j])))
        if nrm <= tol * ref:
            continue
        basis[:, j] = v / nrm
        norms[j] = nrm
        accepted.append(j)
        max_norm = max(max_norm, nrm)
    return GsoResult(basis, norms, len(accepted))


def circulant_eigenvalues(f: Amplitude) -> np.ndarray:
    """Eigenvalues of the full shift-column matrix of f, as sqrt(q) * DFT(f).

    Index convention: entry z is the eigenvalue whose eigenvector is the
    Fourier mode u_z(r) = omega^{-r z}/sqrt(q) of the y = 0 shift matrix
    (columns psi_0..psi_{q-1}). Shifting the origin y multiplies each
    eigenvalue by a unit phase, so magnitudes are origin-independent, and the
    bounds below use magnitudes only.
    """
    return np.sqrt(f.q) * dft(f).table


def gso_last_norm_bound(eigenvalues: np.ndarray, k: int, n: int) -> float:
    """Analytic lower bound on the k-th Gram-Schmidt norm of the shift set.

    eigenvalues must be the full circulant spectrum pre-ordered with the
    nonzero entries first (the k = n case needs all of them nonzero; the
    k < n case needs exactly the first k nonzero). Bounds:

        k = n:  min|lambda| / sqrt(n)
        k < n:  sqrt(n) / (k * 2^(n-k)) * min_{i<k} |lambda_i|

    Raises BadParameter when the nonzero/zero pattern does not match k.
    """
    lam = np.asarray(eigenvalues, dtype=complex)
    if lam.ndim != 1 or lam.shape[0] != n:
        raise BadParameter(f"expected {n} eigenvalues, got shape {lam.shape}")
    if not 1 <= k <= n:
        raise BadParameter(f"k must be in [1, n={n}], got {k}")
    mags = np.abs(lam)
    zero_tol = EIGENVALUE_ZERO_RTOL * float(mags.max())
    if np.any(mags[:k] <= zero_tol):
        raise BadParameter("the first k eigenvalues must be nonzero")
    if k < n and np.any(mags[k:] > zero_tol):
        raise BadParameter(
            "eigenvalues beyond index k must vanish; pre-order nonzeros first"
        )
    if k == n:
        return float(mags.min() / np.sqrt(n))
    return float(np.sqrt(n) / (k * 2.0 ** (n - k)) * mags[:k].min())


def dual_last_column_norm(columns: np.ndarray | ShiftColumnSet) -> float:
    """l2 norm of the last column of the dual basis D = B (B^H B)^{-1}.

    The dual-norm identity says this equals 1 / (last Gram-Schmidt norm) for
    linearly independent columns. Raises SingularGram when the Gram matrix's
    condition number exceeds 1e12 (the identity is numerically meaningless
    past that point).
    """
    B = columns.columns if isinstance(columns, ShiftColumnSet) else np.asarray(columns, dtype=complex)
    if not np.all(np.isfinite(B)):
        raise SingularGram("Gram matrix condition number exceeds 1e12")
    # Work through QR: D = Q R^{-H}, so the last dual norm is |R^{-H} e_last|.
    # Solving with R instead of the Gram matrix keeps the error linear in
    # cond(R) rather than quadratic.
    R = np.linalg.qr(B, mode="r")
    cond_R = np.linalg.cond(R)
    if not np.isfinite(cond_R) or cond_R**2 > GRAM_CONDITION_CAP:
        raise SingularGram("Gram matrix condition number exceeds 1e12")
    e_last = np.zeros(R.shape[0])
    e_last[-1] = 1.0
    return float(np.linalg.norm(np.linalg.solve(R.conj().T, e_last)))


def vandermonde_inverse_last_column(nodes: np.ndarray) -> np.ndarray:
    """Last column of V^{-1} for the Vandermonde matrix V[i, j] = c_j^i.

    Entry j is (-1)^(k-1) / prod_{l != j} (c_l - c_j), i.e. the leading
    coefficient of the j-th Lagrange basis polynomial. Raises DuplicateNodes
    when two nodes are within 1e-12 of each other.
    """
    c = np.asarray(nodes, dtype=complex)
    if c.ndim != 1 or c.shape[0] < 1:
        raise BadParameter(f"expected a 1-D node array, got shape {c.shape}")
    k = c.shape[0]
    diff = c[None, :] - c[:, None]
    off = ~np.eye(k, dtype=bool)
    if k > 1 and np.abs(diff[off]).min() <= NODE_SEPARATION_TOL:
        raise DuplicateNodes("nodes closer than 1e-12")
    out = np.empty(k, dtype=complex)
    sign = (-1.0) ** (k - 1)
    for j in range(k):
        out[j] = sign / np.prod(diff[j, off[j]])
    return out


def sine_product_check(n: int) -> tuple[float, float]:
    """(prod_{l=1}^{n-1} sin(l pi / n), n / 2^(n-1)) — equal in exact arithmetic."""
    if n < 1:
        raise BadParameter(f"n must be >= 1, got {n}")
    prod = float(np.prod(np.sin(np.arange(1, n) * np.pi / n))) if n > 1 else 1.0
    return prod, float(n / 2.0 ** (n - 1))
