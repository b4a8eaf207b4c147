"""Seeded random problem instances for the verification harness and tests.

All draws are upper triangular (or strictly upper triangular), which makes
solvability automatic, so generated instances never trip the solvability
validator.  Generic two-generator closures usually blow past a small target
dimension, so the sampler mixes structured families that are closed by
construction and falls back to closing a small generating set, retrying a
bounded number of times.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    OperatorLieAlgebra,
    Ideal,
    build_algebra,
    character_space_basis,
    close_under_bracket,
    derived_subalgebra,
)
from .linalg import DEFAULT_POLICY, TolerancePolicy


def complex_normal(rng: np.random.Generator, *shape) -> np.ndarray:
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.sqrt(2.0)


def random_upper_triangular(
    rng: np.random.Generator, d: int, strict: bool = False
) -> np.ndarray:
    return np.triu(complex_normal(rng, d, d), 1 if strict else 0)


def _abelian_diagonal(rng, d, nmax):
    k = int(rng.integers(1, min(nmax, d) + 1))
    return [np.diag(complex_normal(rng, d)) for _ in range(k)]


def _diagonal_plus_row(rng, d, nmax):
    # One diagonal element plus elementary matrices sharing a row; the shared
    # row makes the elementary part abelian, so the family is closed.
    i = int(rng.integers(0, d - 1))
    cols = list(range(i + 1, d))
    rng.shuffle(cols)
    k = int(rng.integers(1, min(nmax - 1, len(cols)) + 1))
    mats = [np.diag(complex_normal(rng, d))]
    for j in cols[:k]:
        e = np.zeros((d, d), dtype=complex)
        e[i, j] = complex_normal(rng)
        mats.append(e)
    return mats


def _last_column_nilpotent(rng, d, nmax):
    # Strictly upper matrices supported on the last column commute.
    k = int(rng.integers(1, nmax + 1))
    mats = []
    for _ in range(k):
        e = np.zeros((d, d), dtype=complex)
        e[int(rng.integers(0, d - 1)), d - 1] = complex_normal(rng)
        mats.append(e)
    return mats


def _closed_generators(rng, d, nmax, pol, attempts=8):
    # Close one or two random triangular generators; keep only small closures.
    for _ in range(attempts):
        strict = bool(rng.integers(0, 2))
        k = int(rng.integers(1, 3))
        gens = [random_upper_triangular(rng, d, strict) for _ in range(k)]
        basis = close_under_bracket(gens, pol)
        if len(basis) <= nmax:
            return basis
    return None


def random_solvable_algebra(
    rng: np.random.Generator,
    dmax: int,
    nmax: int,
    pol: TolerancePolicy = DEFAULT_POLICY,
) -> OperatorLieAlgebra:
    """A random solvable algebra with ambient_dim <= dmax and dim <= nmax."""
    if dmax < 1 or nmax < 1:
        raise ValueError("dmax and nmax must be >= 1")
    d = int(rng.integers(1, dmax + 1))
    family = int(rng.integers(0, 4))
    mats = None
    if family == 3:
        mats = _closed_generators(rng, d, nmax, pol)
    if mats is None and family == 1 and d >= 2 and nmax >= 2:
        mats = _diagonal_plus_row(rng, d, nmax)
    if mats is None and family == 2 and d >= 2:
        mats = _last_column_nilpotent(rng, d, nmax)
    if mats is None:
        mats = _abelian_diagonal(rng, d, nmax)
    return build_algebra(mats, pol)


def random_commuting_diagonal_family(
    rng: np.random.Generator, d: int, n: int, pol: TolerancePolicy = DEFAULT_POLICY
) -> OperatorLieAlgebra:
    """An abelian algebra of n simultaneously diagonal matrices on C^d."""
    if n > d:
        raise ValueError("a diagonal family on C^d has at most d independent members")
    while True:
        diags = [np.diag(complex_normal(rng, d)) for _ in range(n)]
        alg = build_algebra(diags, pol)
        if alg.dim == n:
            return alg


def random_character(
    rng: np.random.Generator,
    alg: OperatorLieAlgebra,
    scale: float = 1.0,
    pol: TolerancePolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """A random exact character: a Gaussian vector in the character subspace."""
    basis = character_space_basis(alg, pol)
    if basis.shape[1] == 0:
        return np.zeros(alg.dim, dtype=complex)
    coeffs = scale * complex_normal(rng, basis.shape[1])
    return basis @ coeffs


def random_ideal_containing_derived(
    rng: np.random.Generator,
    alg: OperatorLieAlgebra,
    pol: TolerancePolicy = DEFAULT_POLICY,
) -> Ideal:
    """A random trailing-basis ideal of a re-based copy of the algebra.

    Any subspace containing the derived subalgebra is an ideal, so the ideal
    is a random trailing block of size at least max(dim derived, 1).
    """
    derived = derived_subalgebra(alg, pol)
    parent = derived.parent
    lo = max(derived.dim, 1)
    k = int(rng.integers(lo, parent.dim + 1))
    return Ideal(
        parent=parent, member_indices=tuple(range(parent.dim - k, parent.dim))
    )
