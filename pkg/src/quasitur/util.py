"""Small shared helpers: array coercion, hashing, report formatting."""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import DimMismatchError


def as_operator(a) -> np.ndarray:
    """Coerce ``a`` to a square complex matrix with finite entries."""
    mat = np.ascontiguousarray(a, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimMismatchError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValueError("operator contains non-finite entries")
    return mat


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def float_repr(x: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def operator_hash(a: np.ndarray) -> str:
    """Stable hex digest identifying a matrix by shape and exact entries."""
    mat = np.ascontiguousarray(np.asarray(a, dtype=complex))
    h = hashlib.sha256()
    h.update(str(mat.shape).encode())
    h.update(mat.tobytes())
    return h.hexdigest()[:16]


def matrix_to_json(a: np.ndarray) -> list:
    """Encode a complex matrix as nested lists of ``[re, im]`` pairs."""
    mat = np.asarray(a, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_json(data) -> np.ndarray:
    """Decode the ``[re, im]`` nested-list encoding back to a matrix."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ValueError("matrix entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]
