"""Complex 3D tensor primitives: unitary FFTs, pointwise algebra, norms.

A "tensor" throughout this package is a dense, C-ordered complex128
ndarray of shape (nx, ny, nz); the last index varies fastest in memory,
which is also the layout the binary tensor-file format assumes.
"""

import numpy as np

from .errors import DimensionError

# Guard against absurd allocations when dims come from untrusted files.
MAX_ELEMENTS = 2**33


def as_tensor3(a):
    """Coerce ``a`` to a C-ordered complex128 3D array, validating shape."""
    t = np.ascontiguousarray(a, dtype=np.complex128)
    if t.ndim != 3:
        raise DimensionError(f"expected a 3D tensor, got ndim={t.ndim}")
    if min(t.shape) < 1:
        raise DimensionError(f"empty tensor dims {t.shape}")
    if t.size > MAX_ELEMENTS:
        raise DimensionError(f"tensor dims {t.shape} exceed element limit")
    return t


def _check_same_dims(a, b):
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def fft3(t):
    """Separable 3D DFT with unitary normalization (an exact isometry)."""
    return np.fft.fftn(as_tensor3(t), norm="ortho")


def ifft3(t):
    """Exact inverse of :func:`fft3` (unitary 3D inverse DFT)."""
    return np.fft.ifftn(as_tensor3(t), norm="ortho")


def hadamard(a, b):
    """Pointwise complex product of two tensors of equal dims."""
    a, b = as_tensor3(a), as_tensor3(b)
    _check_same_dims(a, b)
    return a * b


def inner(a, b):
    """Complex inner product sum(a * conj(b))."""
    a, b = as_tensor3(a), as_tensor3(b)
    _check_same_dims(a, b)
    return complex(np.sum(a * np.conj(b)))


def frob_norm(t):
    """Frobenius norm, sqrt(inner(t, t)); real and nonnegative."""
    return float(np.linalg.norm(as_tensor3(t)))
