"""Dense complex linear algebra primitives.

Matrices are plain numpy arrays of dtype complex128, row-major. These thin
wrappers add the shape checking the rest of the package relies on and fix
the index conventions (tensor_product puts its first factor on the
slow-varying index).
"""

from __future__ import annotations

import numpy as np

# Dense complex matrix: 2-D complex128 ndarray. Stored matrices must be finite.
ComplexMatrix = np.ndarray


def as_complex_matrix(data, *, require_finite: bool = True) -> ComplexMatrix:
    """Coerce to a 2-D complex128 array, rejecting NaN/Inf entries."""
    mat = np.asarray(data, dtype=np.complex128)
    if mat.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={mat.ndim}")
    if require_finite and not np.all(np.isfinite(mat.view(np.float64))):
        raise ValueError("matrix contains non-finite entries")
    return mat


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Matrix product with explicit shape checking."""
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("matmul operands must be 2-D")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"incompatible shapes for matmul: {a.shape} x {b.shape}")
    return a @ b


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return a.conj().T


def trace(a: ComplexMatrix) -> complex:
    """Sum of diagonal entries; requires a square matrix."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; a's index varies slowest."""
    return np.kron(a, b)
