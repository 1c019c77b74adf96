"""Error-amplitude tables over Z_q and their discrete Fourier transforms.

An Amplitude is an l2-normalized complex table f(0..q-1); density families
(bounded uniform, gaussian, laplace, super-gaussian) are evaluated at the
centered representatives of Z_q, so "width" means width around 0 mod q.

The DFT here is the direct O(q^2) summation with omega = exp(2*pi*i/q) and a
1/sqrt(q) factor. No FFT: q is arbitrary (usually prime), the tables are tiny,
and exactness of the convention matters more than speed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter
from .zq import centered

NORM_TOL = 1e-12

#: Families accepted by make_amplitude, with their parameter names.
FAMILIES = {
    "bounded_uniform": ("B",),
    "one_sided_uniform": ("w",),
    "gaussian": ("s",),
    "laplace": ("s",),
    "super_gaussian": ("B", "p"),
    "delta": ("v",),
    "dft_of": ("base",),
    "custom": ("table",),
}


@dataclass(frozen=True)
class Amplitude:
    """An l2-normalized amplitude table over Z_q."""

    q: int
    table: np.ndarray
    family_tag: str

    def __post_init__(self) -> None:
        if self.q < 2:
            raise BadParameter(f"q must be >= 2, got {self.q}")
        t = np.asarray(self.table, dtype=complex)
        if t.shape != (self.q,):
            raise BadParameter(f"table shape {t.shape} does not match q={self.q}")
        nrm = float(np.linalg.norm(t))
        if abs(nrm - 1.0) > NORM_TOL:
            raise BadParameter(f"table is not l2-normalized (norm={nrm!r})")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.table.imag == 0.0))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Amplitude)
            and self.q == other.q
            and bool(np.array_equal(self.table, other.table))
        )


@dataclass(frozen=True)
class Eta:
    """Minimum |f^| over Z_q and where it is attained (first index on ties)."""

    value: float
    argmin_index: int


def _normalized(raw: np.ndarray, q: int, tag: str) -> Amplitude:
    nrm = float(np.linalg.norm(raw))
    if nrm == 0.0:
        raise BadParameter(f"{tag}: table has zero norm")
    return Amplitude(q, np.asarray(raw, dtype=complex) / nrm, tag)


def make_amplitude(family: str, q: int, **params) -> Amplitude:
    """Build a named amplitude family over Z_q.

    Families and parameters:
      bounded_uniform(B)     uniform on centered [-B, B], needs 0 <= B, 2B+1 <= q
      one_sided_uniform(w)   uniform on [0, w), needs 1 <= w <= q
      gaussian(s)            exp(-(x/s)^2), s > 0
      laplace(s)             exp(-|x/s|), s > 0
      super_gaussian(B, p)   exp(-|x/B|^p), B > 0, 0 < p < 2
      delta(v)               point mass at v in [0, q)
      dft_of(base)           the DFT of an existing Amplitude with the same q
      custom(table)          any nonzero length-q table, normalized here
    """
    if q < 2:
        raise BadParameter(f"q must be >= 2, got {q}")
    if family not in FAMILIES:
        raise BadParameter(f"unknown family {family!r}; expected one of {sorted(FAMILIES)}")
    extra = set(params) - set(FAMILIES[family])
    missing = set(FAMILIES[family]) - set(params)
    if extra or missing:
        raise BadParameter(
            f"{family} takes parameters {FAMILIES[family]}, got {sorted(params)}"
        )
    xs = centered(np.arange(q), q).astype(float)

    if family == "bounded_uniform":
        B = params["B"]
        if not isinstance(B, (int, np.integer)) or B < 0:
            raise BadParameter(f"B must be a nonnegative integer, got {B!r}")
        if 2 * B + 1 > q:
            raise BadParameter(f"support 2B+1={2 * B + 1} exceeds q={q}")
        raw = (np.abs(xs) <= B).astype(float)
        return _normalized(raw, q, f"bounded_uniform(B={int(B)})")

    if family == "one_sided_uniform":
        w = params["w"]
        if not isinstance(w, (int, np.integer)) or not 1 <= w <= q:
            raise BadParameter(f"width w must be an integer in [1, {q}], got {w!r}")
        raw = (np.arange(q) < w).astype(float)
        return _normalized(raw, q, f"one_sided_uniform(w={int(w)})")

    if family in ("gaussian", "laplace"):
        s = float(params["s"])
        if s <= 0:
            raise BadParameter(f"width s must be > 0, got {s}")
        raw = np.exp(-((xs / s) ** 2)) if family == "gaussian" else np.exp(-np.abs(xs / s))
        return _normalized(raw, q, f"{family}(s={s:g})")

    if family == "super_gaussian":
        B, p = float(params["B"]), float(params["p"])
        if B <= 0:
            raise BadParameter(f"width B must be > 0, got {B}")
        if not 0 < p < 2:
            raise BadParameter(f"exponent p must be in (0, 2), got {p}")
        raw = np.exp(-np.abs(xs / B) ** p)
        return _normalized(raw, q, f"super_gaussian(B={B:g},p={p:g})")

    if family == "delta":
        v = params["v"]
        if not isinstance(v, (int, np.integer)) or not 0 <= v < q:
            raise BadParameter(f"v must be an integer in [0, {q}), got {v!r}")
        raw = np.zeros(q)
        raw[int(v)] = 1.0
        return _normalized(raw, q, f"delta(v={int(v)})")

    if family == "dft_of":
        base = params["base"]
        if not isinstance(base, Amplitude):
            raise BadParameter(f"base must be an Amplitude, got {type(base).__name__}")
        if base.q != q:
            raise BadParameter(f"base has q={base.q}, expected {q}")
        return dft(base)

    # custom
    table = np.asarray(params["table"], dtype=complex)
    if table.shape != (q,):
        raise BadParameter(f"custom table shape {table.shape} does not match q={q}")
    return _normalized(table, q, "custom")


def dft_matrix(q: int) -> np.ndarray:
    """Unitary DFT matrix M[y, x] = omega^{x y} / sqrt(q), omega = exp(2 pi i/q)."""
    idx = np.arange(q)
    return np.exp(2j * np.pi * np.outer(idx, idx) / q) / np.sqrt(q)


def dft(f: Amplitude) -> Amplitude:
    """Direct-summation DFT: f^(y) = (1/sqrt q) sum_x omega^{x y} f(x).

    Unitary, so the result is again a valid Amplitude. Applying it twice gives
    index reversal (f evaluated at -x mod q); four times is the identity.
    """
    table = dft_matrix(f.q) @ f.table
    return Amplitude(f.q, table, f"dft({f.family_tag})")


def bounded_uniform_dft_closed_form(q: int, B: int, y: int) -> float:
    """Closed form for the DFT of the bounded uniform amplitude at index y.

    For y != 0:
        sqrt(1/(q(2B+1))) * sin((2 pi/q)((2B+1)/2) y) / sin((2 pi/q)(y/2))
    and sqrt((2B+1)/q) at y = 0. Requires 0 <= B with 2B+1 <= q and y in
    [0, q). When gcd(2B+1, q) = 1 the numerator never vanishes for y != 0, so
    the value is bounded away from 0; for gcd = v > 1 it vanishes at exactly
    q/v - 1 indices.
    """
    if q < 2:
        raise BadParameter(f"q must be >= 2, got {q}")
    if not isinstance(B, (int, np.integer)) or B < 0 or 2 * B + 1 > q:
        raise BadParameter(f"need 0 <= B with 2B+1 <= q; got B={B!r}, q={q}")
    if not 0 <= y < q:
        raise BadParameter(f"y must be in [0, {q}), got {y}")
    k = 2 * B + 1
    if y == 0:
        return float(np.sqrt(k / q))
    return float(
        np.sqrt(1.0 / (q * k))
        * np.sin((2.0 * np.pi / q) * (k / 2.0) * y)
        / np.sin((2.0 * np.pi / q) * (y / 2.0))
    )


def min_abs_dft(f: Amplitude) -> Eta:
    """eta(f): the minimum of |f^| over Z_q, with its first attaining index."""
    mags = np.abs(dft(f).table)
    idx = int(np.argmin(mags))
    return Eta(float(mags[idx]), idx)
