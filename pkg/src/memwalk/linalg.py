"""
Fixed-size complex linear algebra for the 4-state walk.

Vectors are read-only ``complex128`` arrays of shape ``(4,)`` and matrices
read-only arrays of shape ``(4, 4)``, stored dense and row-major.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from numpy.typing import ArrayLike, NDArray

__all__ = [
    "C4Vector",
    "C4Matrix",
    "as_vector",
    "as_matrix",
    "basis",
    "mat_vec",
    "mat_mul",
    "adjoint",
    "is_unitary",
    "norm_sq",
    "inner",
]

C4Vector = NDArray[np.complex128]
C4Matrix = NDArray[np.complex128]


def _frozen(a: NDArray[np.complex128]) -> NDArray[np.complex128]:
    a.setflags(write=False)
    return a


def as_vector(components: ArrayLike) -> C4Vector:
    """Return a read-only copy of ``components`` as a 4-vector."""
    v = np.array(components, dtype=np.complex128)
    if v.shape != (4,):
        raise ValueError(f"expected 4 components, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return _frozen(v)


def as_matrix(entries: ArrayLike) -> C4Matrix:
    """Return a read-only copy of ``entries`` as a 4x4 matrix."""
    m = np.array(entries, dtype=np.complex128)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return _frozen(m)


def basis(j: int) -> C4Vector:
    """Chirality basis vector ``|j>`` for j in 0..3."""
    if j not in (0, 1, 2, 3):
        raise ValueError(f"chirality must be in 0..3, got {j}")
    e = np.zeros(4, dtype=np.complex128)
    e[j] = 1.0
    return _frozen(e)


def mat_vec(m: C4Matrix, v: C4Vector) -> C4Vector:
    return _frozen(np.asarray(m) @ np.asarray(v))


def mat_mul(*ms: C4Matrix) -> C4Matrix:
    """Left-to-right product ``ms[0] @ ms[1] @ ...``."""
    if not ms:
        return _frozen(np.eye(4, dtype=np.complex128))
    out = np.asarray(ms[0], dtype=np.complex128)
    for m in ms[1:]:
        out = out @ m
    return _frozen(np.array(out))


def adjoint(m: C4Matrix) -> C4Matrix:
    return _frozen(np.array(np.asarray(m).conj().T))


def is_unitary(m: C4Matrix, tol: float = 1e-12) -> bool:
    """True iff every entry of ``m m^dagger - I`` is within ``tol`` in modulus."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m)
    dev = m @ m.conj().T - np.eye(m.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


def norm_sq(v: C4Vector | Iterable[complex]) -> float:
    v = np.asarray(v)
    return float(np.sum(v.real**2 + v.imag**2))


def inner(u: C4Vector, v: C4Vector) -> complex:
    """``<u|v>``, conjugate-linear in the first argument."""
    return complex(np.vdot(u, v))
