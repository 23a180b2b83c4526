"""Small dense complex linear algebra for 2x2 and 4x4 quantum objects.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Products,
Kronecker products, adjoints and traces delegate to numpy; the Hermitian
eigensolver is a cyclic Jacobi iteration so that positive-semidefiniteness
checks do not depend on LAPACK behaviour for tiny matrices.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from .errors import NumericalError, ShapeError, ValidationError

DEFAULT_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
_TINY = 1e-150

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(a: Any) -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array, raising on anything else."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix contains NaN or infinite entries")
    return m


def mat_mul(a: Any, b: Any) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a: Any, b: Any) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a: Any) -> np.ndarray:
    return as_matrix(a).conj().T


def trace(a: Any) -> complex:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))


def max_abs_diff(a: Any, b: Any) -> float:
    """Entrywise max-norm of ``a - b``."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b)))


def allclose(a: Any, b: Any, tol: float = DEFAULT_TOL) -> bool:
    return max_abs_diff(a, b) <= tol


def hermiticity_residual(a: Any) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"non-square matrix {a.shape}")
    return max_abs_diff(a, a.conj().T)


def _off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def eig_hermitian(a: Any, tol: float = JACOBI_TOL, *, max_sweeps: int = JACOBI_MAX_SWEEPS) -> list[float]:
    """Eigenvalues of a Hermitian matrix in ascending order.

    Cyclic complex Jacobi: each off-diagonal pair is first made real by a
    diagonal phase, then annihilated with a real plane rotation.  Sweeps
    stop once the off-diagonal Frobenius mass drops below
    ``tol * max(1, ||a||_F)``.

    Raises ``ValidationError`` if ``a`` is not Hermitian within ``tol`` and
    ``NumericalError`` if ``max_sweeps`` sweeps do not converge.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if n != a.shape[1]:
        raise ShapeError(f"eigenvalues of non-square matrix {a.shape}")
    resid = hermiticity_residual(a)
    if resid > tol:
        raise ValidationError(f"matrix is not Hermitian (residual {resid:.3e} > {tol:.1e})")

    w = 0.5 * (a + a.conj().T)
    threshold = tol * max(1.0, float(np.linalg.norm(w)))
    for _ in range(max_sweeps):
        if _off_diagonal_norm(w) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = w[p, q]
                mag = abs(apq)
                if mag < _TINY:
                    w[p, q] = w[q, p] = 0.0
                    continue
                # phase on row/column q makes w[p, q] real and positive
                phase = np.exp(1j * np.angle(apq))
                w[:, q] *= np.conj(phase)
                w[q, :] *= phase
                theta = (w[q, q].real - w[p, p].real) / (2.0 * mag)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                col_p, col_q = w[:, p].copy(), w[:, q].copy()
                w[:, p] = c * col_p - s * col_q
                w[:, q] = s * col_p + c * col_q
                row_p, row_q = w[p, :].copy(), w[q, :].copy()
                w[p, :] = c * row_p - s * row_q
                w[q, :] = s * row_p + c * row_q
                w[p, q] = w[q, p] = 0.0
    else:
        if _off_diagonal_norm(w) > threshold:
            raise NumericalError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    diag = np.diag(w)
    if not np.all(np.isfinite(diag)):
        raise NumericalError("NaN encountered in Jacobi eigensolver")
    return sorted(float(v.real) for v in diag)


def min_eigenvalue(a: Any) -> float:
    """Smallest eigenvalue of the Hermitian part of ``a``."""
    a = as_matrix(a)
    return eig_hermitian(0.5 * (a + a.conj().T))[0]


def matrix_to_json(a: Any) -> list[list[list[float]]]:
    """Row-major nested lists of ``[re, im]`` pairs."""
    a = as_matrix(a)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def matrix_from_json(obj: Sequence[Sequence[Sequence[float]]]) -> np.ndarray:
    try:
        rows = [[complex(float(re), float(im)) for re, im in row] for row in obj]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"malformed matrix: {exc}") from exc
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("matrix rows must be non-empty and of equal length")
    return as_matrix(rows)
