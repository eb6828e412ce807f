"""Dense complex Hermitian kernels: log-determinant and linear solves.

All log-determinants are base-2 so that downstream rates come out in bits.
Positive definiteness is decided by whether the Cholesky factorization
succeeds, never by eigenvalue thresholding.
"""

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NotHermitian, NotPositiveDefinite

HERMITIAN_TOL = 1e-10
SOLVE_RESIDUAL_TOL = 1e-8

_LN2 = np.log(2.0)


def _as_complex_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _check_hermitian(a):
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > HERMITIAN_TOL:
        raise NotHermitian(f"max |A - A^H| = {dev:.3e} exceeds {HERMITIAN_TOL:.0e}")


def hermitian_part(a):
    """Exactly Hermitian symmetrization (A + A^H) / 2."""
    a = np.asarray(a, dtype=np.complex128)
    return 0.5 * (a + a.conj().T)


def cholesky_hpd(a):
    """Lower Cholesky factor of a Hermitian positive definite matrix."""
    a = _as_complex_matrix(a)
    _check_hermitian(a)
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def logdet_hpd(a):
    """log2 det(A) for Hermitian positive definite A, via Cholesky."""
    chol = cholesky_hpd(a)
    return float(2.0 * np.sum(np.log(np.abs(np.diag(chol)))) / _LN2)


def solve_hpd(a, b):
    """Solve A X = B for Hermitian positive definite A."""
    a = _as_complex_matrix(a, "A")
    b = np.asarray(b, dtype=np.complex128)
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"A is {a.shape}, B has {b.shape[0]} rows")
    chol = cholesky_hpd(a)
    x = scipy.linalg.cho_solve((chol, True), b)
    resid = np.linalg.norm(a @ x - b)
    if resid > SOLVE_RESIDUAL_TOL * max(1.0, np.linalg.norm(b)):
        raise NotPositiveDefinite(f"solve residual {resid:.3e} too large")
    return x


def inv_hpd(a):
    """Inverse of a Hermitian positive definite matrix, symmetrized."""
    a = np.asarray(a, dtype=np.complex128)
    return hermitian_part(solve_hpd(a, np.eye(a.shape[0], dtype=np.complex128)))
