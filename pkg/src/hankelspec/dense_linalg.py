"""Dense complex linear algebra and the discrete Fourier transform.

The small-order kernels (LU with partial pivoting, cyclic Jacobi for
Hermitian matrices) are written out here. Large Hermitian problems, batched
singular values and the FFT are delegated to numpy/LAPACK; the hand-written
kernels double as independent oracles for those paths in the test suite.
"""

from __future__ import annotations

import numpy as np

from .errors import NotHermitian, SingularMatrix

PIVOT_RTOL = 1e-14
HERMITIAN_RTOL = 1e-12


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(b) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    if b.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError("vector has non-finite entries")
    return b


def lu_factor(A) -> tuple[np.ndarray, np.ndarray]:
    """LU factorisation with partial pivoting, ``P A = L U`` packed in place.

    Returns the packed factors and the row permutation. Raises
    :class:`SingularMatrix` when a pivot drops below ``1e-14 * max|A|``.
    """
    A = as_matrix(A)
    n, m = A.shape
    if n != m:
        raise ValueError(f"lu_factor needs a square matrix, got {A.shape}")
    lu = A.copy()
    perm = np.arange(n)
    threshold = PIVOT_RTOL * np.max(np.abs(A)) if n else 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= threshold or lu[p, k] == 0:
            raise SingularMatrix(
                f"pivot {abs(lu[p, k]):.3e} at step {k} below {threshold:.3e}"
            )
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm


def lu_solve_factored(lu: np.ndarray, perm: np.ndarray, b) -> np.ndarray:
    b = as_vector(b)
    n = lu.shape[0]
    if b.shape[0] != n:
        raise ValueError(f"dimension mismatch: matrix {n}, rhs {b.shape[0]}")
    y = b[perm].copy()
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1 :] @ y[i + 1 :]) / lu[i, i]
    return y


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting."""
    lu, perm = lu_factor(A)
    return lu_solve_factored(lu, perm, b)


def _check_hermitian(A: np.ndarray) -> None:
    if A.shape[0] != A.shape[1]:
        raise NotHermitian(f"matrix is not square: {A.shape}")
    scale = np.max(np.abs(A)) if A.size else 0.0
    defect = np.max(np.abs(A - A.conj().T)) if A.size else 0.0
    if defect > HERMITIAN_RTOL * scale:
        raise NotHermitian(f"|A - A*|_max = {defect:.3e} exceeds {HERMITIAN_RTOL:g}*|A|_max")


def jacobi_eigh(A, *, tol: float = 1e-15, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigensolver for a complex Hermitian matrix.

    Each rotation first removes the phase of the off-diagonal pivot with a
    diagonal unitary, then applies the classical real 2x2 rotation.
    """
    A = as_matrix(A)
    _check_hermitian(A)
    n = A.shape[0]
    a = 0.5 * (A + A.conj().T)
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ rot
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigen(A, *, method: str = "lapack") -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    ``method="jacobi"`` runs the in-package cyclic Jacobi solver; the default
    ``"lapack"`` uses ``numpy.linalg.eigh`` and is the only practical choice
    for the Hankel sections of order several hundred.
    """
    A = as_matrix(A)
    _check_hermitian(A)
    if method == "jacobi":
        return jacobi_eigh(A)
    if method != "lapack":
        raise ValueError(f"unknown method {method!r}")
    w, v = np.linalg.eigh(0.5 * (A + A.conj().T))
    return w, v


def min_singular_value(A) -> float:
    A = as_matrix(A)
    if A.size == 0:
        raise ValueError("min_singular_value of an empty matrix")
    return float(np.linalg.svd(A, compute_uv=False)[-1])


def min_singular_values(stack) -> np.ndarray:
    """Smallest singular value of each matrix in a ``(..., n, n)`` stack."""
    stack = np.asarray(stack, dtype=complex)
    return np.linalg.svd(stack, compute_uv=False)[..., -1]


def dft(samples) -> np.ndarray:
    """Coefficients ``c[n] = (1/M) sum_m x[m] exp(-2 pi i n m / M)``."""
    x = as_vector(samples)
    if x.shape[0] < 1:
        raise ValueError("dft needs at least one sample")
    return np.fft.fft(x) / x.shape[0]


def inverse_dft(coefficients) -> np.ndarray:
    """Inverse of :func:`dft`: ``x[m] = sum_n c[n] exp(2 pi i n m / M)``."""
    c = as_vector(coefficients)
    if c.shape[0] < 1:
        raise ValueError("inverse_dft needs at least one coefficient")
    return np.fft.ifft(c) * c.shape[0]
