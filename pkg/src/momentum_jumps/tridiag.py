"""Eigenvalues of real symmetric tridiagonal matrices by Sturm-sequence bisection."""

from __future__ import annotations

import numba
import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, NumericalError

EPS = np.finfo(float).eps


@numba.njit(cache=True, nogil=True)
def _sturm_count(diag, off2, x, pivmin):
    """Number of eigenvalues strictly below x (LDL^T pivot signs)."""
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    count = 1 if q < 0 else 0
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@numba.njit(cache=True, nogil=True)
def _bisect_eigenvalues(diag, off2, k, lo, hi, pivmin, abstol):
    out = np.empty(k)
    for j in range(k):
        a = lo
        b = hi
        # invariant: count(a) <= j < count(b), so eigenvalue j lies in [a, b)
        for _ in range(2000):
            mid = 0.5 * (a + b)
            if b - a <= abstol or mid <= a or mid >= b:
                break
            if _sturm_count(diag, off2, mid, pivmin) > j:
                b = mid
            else:
                a = mid
        out[j] = a
        lo = a  # eigenvalues are ascending
    return out


def gershgorin_bounds(diag, off):
    r = np.zeros_like(diag)
    r[:-1] += np.abs(off)
    r[1:] += np.abs(off)
    return float(np.min(diag - r)), float(np.max(diag + r))


def lowest_eigenvalues(diag, off, k: int) -> np.ndarray:
    """The k smallest eigenvalues, ascending, of the tridiagonal matrix (diag, off).

    Deterministic bisection on the Sturm count; each eigenvalue is resolved to
    adjacent floats, or to 1e-3 ulp of the matrix norm when smaller than that.
    """
    diag = np.ascontiguousarray(diag, dtype=float)
    off = np.ascontiguousarray(off, dtype=float)
    n = diag.shape[0]
    if off.shape[0] != n - 1:
        raise DomainError(f"off-diagonal length {off.shape[0]} does not match dimension {n}")
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    lo, hi = gershgorin_bounds(diag, off)
    scale = max(abs(lo), abs(hi), np.finfo(float).tiny)
    pad = 2.0 * EPS * scale * n
    lo, hi = lo - pad, hi + pad
    off2 = off * off
    pivmin = np.finfo(float).tiny * max(1.0, float(off2.max(initial=0.0)))
    # bisect to adjacent floats except for eigenvalues far below the matrix norm
    vals = _bisect_eigenvalues(diag, off2, k, lo, hi, pivmin, 1e-3 * EPS * scale)
    if not np.all(np.isfinite(vals)):
        raise NumericalError("bisection produced non-finite eigenvalues")
    return vals


def eigenvectors(diag, off, eigenvalues, iterations: int = 3) -> np.ndarray:
    """Unit eigenvectors for the given eigenvalues by inverse iteration.

    Columns of the returned (n, k) array, re-orthogonalized against earlier
    columns so near-degenerate pairs stay orthogonal.
    """
    diag = np.asarray(diag, dtype=float)
    off = np.asarray(off, dtype=float)
    n = diag.shape[0]
    lo, hi = gershgorin_bounds(diag, off)
    norm = max(abs(lo), abs(hi))
    vecs = np.empty((n, len(eigenvalues)))
    rng = np.random.default_rng(12345)
    for j, lam in enumerate(eigenvalues):
        shift = lam + 10.0 * EPS * norm
        ab = np.zeros((3, n))
        ab[0, 1:] = off
        ab[1] = diag - shift
        ab[2, :-1] = off
        v = rng.standard_normal(n)
        for _ in range(iterations):
            v = solve_banded((1, 1), ab, v)
            v -= vecs[:, :j] @ (vecs[:, :j].T @ v)
            v /= np.linalg.norm(v)
        # fixed sign convention: largest component positive
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        vecs[:, j] = v
    return vecs
