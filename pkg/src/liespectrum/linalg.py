"""Dense complex linear algebra primitives with an explicit tolerance policy.

All matrices are plain ``numpy`` arrays of complex128; everything downstream
expresses ranks, kernels and invertibility through the helpers here so the
tolerance knobs live in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputValidationError, SizeLimitError

# Hard ceiling on the entry count of any dense matrix we are willing to form.
MAX_MATRIX_ENTRIES = 1 << 26


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical decision thresholds.

    rank_tol_rel     relative cutoff on singular values for rank decisions
    singularity_tol  cutoff on min singular value of the self-adjoint total
                     operator, after normalizing by its largest singular value
    match_tol        tolerance for comparing / deduplicating character vectors
    """

    rank_tol_rel: float = 1e-10
    singularity_tol: float = 1e-8
    match_tol: float = 1e-6

    def __post_init__(self):
        for name in ("rank_tol_rel", "singularity_tol", "match_tol"):
            if not getattr(self, name) > 0:
                raise InputValidationError(f"{name} must be strictly positive")


DEFAULT_POLICY = TolerancePolicy()


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array; reject non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise InputValidationError(f"{name} must be 2-dimensional, got ndim={a.ndim}")
    if a.size and not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise InputValidationError(f"{name} contains NaN or Inf entries")
    return a


def max_abs(m: np.ndarray) -> float:
    """Entrywise max-modulus norm; 0.0 for empty input."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values in descending order."""
    return np.linalg.svd(m, compute_uv=False)


def numerical_rank(m, pol: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Number of singular values above ``rank_tol_rel`` times the largest.

    The zero matrix has rank 0 by convention.
    """
    a = as_complex_matrix(m)
    if a.size == 0:
        raise InputValidationError("numerical_rank of an empty matrix")
    s = singular_values(a)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > pol.rank_tol_rel * s[0]))


def min_singular_value(m) -> float:
    """Smallest singular value of a square matrix."""
    a = as_complex_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise InputValidationError(
            f"min_singular_value requires a square matrix, got {a.shape}"
        )
    if a.size == 0:
        raise InputValidationError("min_singular_value of an empty matrix")
    return float(singular_values(a)[-1])


def kron(a, b) -> np.ndarray:
    """Kronecker product with the row-major convention
    ``kron(a, b)[i*br + k, j*bc + l] = a[i, j] * b[k, l]``."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    if a.size == 0 or b.size == 0:
        raise InputValidationError("kron of an empty matrix")
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows * cols > MAX_MATRIX_ENTRIES:
        raise SizeLimitError(
            f"kron result would have {rows}x{cols} entries "
            f"(limit {MAX_MATRIX_ENTRIES})"
        )
    return np.kron(a, b)


def commutator(a, b) -> np.ndarray:
    """ab - ba for square matrices of equal size."""
    a = as_complex_matrix(a, "a")
    b = as_complex_matrix(b, "b")
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise InputValidationError(
            f"commutator requires equal square shapes, got {a.shape} and {b.shape}"
        )
    return a @ b - b @ a


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_complex_matrix(m).conj().T


def nullspace_basis(m: np.ndarray, pol: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal basis (columns) of the kernel at the rank tolerance."""
    if m.shape[0] == 0:
        return np.eye(m.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(m)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.sum(s > pol.rank_tol_rel * s[0]))
    return vh[r:].conj().T


def stack_rank(flats: list[np.ndarray], pol: TolerancePolicy = DEFAULT_POLICY) -> int:
    """Rank of a list of flattened matrices stacked as rows."""
    if not flats:
        return 0
    return numerical_rank(np.array(flats), pol)


def orthonormal_row_span(
    flats: list[np.ndarray], pol: TolerancePolicy = DEFAULT_POLICY
) -> np.ndarray:
    """Orthonormal rows spanning the same space as the given row vectors."""
    if not flats:
        return np.zeros((0, 0), dtype=complex)
    a = np.array(flats, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((0, a.shape[1]), dtype=complex)
    r = int(np.sum(s > pol.rank_tol_rel * s[0]))
    return vh[:r]
