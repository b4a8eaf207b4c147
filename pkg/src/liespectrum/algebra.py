"""Solvable Lie algebras of complex matrices.

An algebra is stored as an ordered basis of d x d matrices together with its
structure constants c[i, j, k], where the bracket is the matrix commutator
[x, y] = xy - yx and

    [x_i, x_j] = sum_k c[i, j, k] x_k.

Characters (linear functionals vanishing on the derived subalgebra) are plain
1-D complex arrays of coefficients in the dual basis.  Simultaneous
triangularization follows the constructive proof of Lie's theorem: every
nonzero solvable algebra has a codimension-1 ideal containing its derived
subalgebra, the joint eigenspace of that ideal is invariant under a
complementary element, and deflating by a common eigenvector recurses on a
quotient of smaller ambient dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CharacterError,
    ClosureError,
    InputValidationError,
    SolvabilityError,
    TriangularizationError,
)
from .linalg import (
    DEFAULT_POLICY,
    TolerancePolicy,
    as_complex_matrix,
    commutator,
    kron,
    max_abs,
    nullspace_basis,
    orthonormal_row_span,
    singular_values,
    stack_rank,
)

# Residual tolerances for the structural invariants (relative to input scale).
CLOSURE_TOL = 1e-10
CHARACTER_TOL = 1e-10
IDEAL_TOL = 1e-10
TRIANGULAR_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class OperatorLieAlgebra:
    """A solvable Lie algebra of matrices acting on C^ambient_dim.

    ``product_split`` is set only by :func:`direct_product` and records the
    basis sizes (n1, n2) of the two factors, with factor-1 elements first.
    """

    ambient_dim: int
    basis: tuple[np.ndarray, ...]
    structure_constants: np.ndarray
    product_split: tuple[int, int] | None = None
    space_split: tuple[int, int] | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bracket_coefficients(self, i: int, j: int) -> np.ndarray:
        return self.structure_constants[i, j]

    def basis_scale(self) -> float:
        return max(max_abs(b) for b in self.basis)


@dataclass(frozen=True, eq=False)
class Ideal:
    """An ideal spanned by a trailing block of the parent's basis."""

    parent: OperatorLieAlgebra
    member_indices: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.member_indices)

    def basis_matrices(self) -> list[np.ndarray]:
        return [self.parent.basis[i] for i in self.member_indices]


def _prune_independent(
    mats: list[np.ndarray], pol: TolerancePolicy
) -> list[np.ndarray]:
    """Greedy maximal linearly independent sublist, preserving order."""
    kept: list[np.ndarray] = []
    flats: list[np.ndarray] = []
    for m in mats:
        cand = flats + [m.ravel()]
        if stack_rank(cand, pol) > len(kept):
            kept.append(m)
            flats = cand
    return kept


def _solve_structure_constants(
    basis: list[np.ndarray], pol: TolerancePolicy
) -> np.ndarray:
    """Least-squares coefficients of each commutator against the basis.

    Raises ClosureError naming the first pair whose commutator leaves the span.
    """
    n = len(basis)
    a = np.array([b.ravel() for b in basis]).T
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            cm = commutator(basis[i], basis[j])
            coeffs, *_ = np.linalg.lstsq(a, cm.ravel(), rcond=None)
            residual = max_abs(cm - (a @ coeffs).reshape(cm.shape))
            scale = max(1.0, max_abs(basis[i]) * max_abs(basis[j]))
            if residual > CLOSURE_TOL * scale:
                raise ClosureError(
                    f"bracket of basis elements {i} and {j} leaves the span "
                    f"(residual {residual:.3e}, allowed {CLOSURE_TOL * scale:.3e})"
                )
            c[i, j] = coeffs
            c[j, i] = -coeffs
    return c


def _derived_series_dims(basis: list[np.ndarray], pol: TolerancePolicy) -> list[int]:
    """Dimensions of the derived series, ending at 0 for solvable input."""
    dims = [len(basis)]
    current = [b.ravel() for b in basis]
    d = basis[0].shape[0]
    while dims[-1] > 0:
        rows = orthonormal_row_span(current, pol)
        mats = [rows[k].reshape(d, d) for k in range(rows.shape[0])]
        comms = [
            commutator(mats[i], mats[j]).ravel()
            for i in range(len(mats))
            for j in range(i + 1, len(mats))
        ]
        next_dim = stack_rank(comms, pol)
        if next_dim >= dims[-1]:
            raise SolvabilityError(
                "derived series does not reach zero; dimensions so far "
                f"{dims + [next_dim]}"
            )
        dims.append(next_dim)
        current = comms
    return dims


def build_algebra(
    basis_candidates, pol: TolerancePolicy = DEFAULT_POLICY
) -> OperatorLieAlgebra:
    """Validate a spanning set and assemble the algebra.

    Linearly dependent inputs are pruned (not an error).  A bracket leaving
    the span raises ClosureError; a non-terminating derived series raises
    SolvabilityError.
    """
    mats = [as_complex_matrix(m, f"basis[{k}]") for k, m in enumerate(basis_candidates)]
    if not mats:
        raise InputValidationError("an algebra needs at least one basis matrix")
    d = mats[0].shape[0]
    for k, m in enumerate(mats):
        if m.shape != (d, d):
            raise InputValidationError(
                f"basis[{k}] has shape {m.shape}, expected ({d}, {d})"
            )
    if d == 0:
        raise InputValidationError("ambient dimension must be positive")
    basis = _prune_independent(mats, pol)
    if not basis:
        raise InputValidationError("all candidate basis matrices are zero")
    c = _solve_structure_constants(basis, pol)
    _derived_series_dims(basis, pol)
    return OperatorLieAlgebra(
        ambient_dim=d, basis=tuple(basis), structure_constants=c
    )


def close_under_bracket(
    generators, pol: TolerancePolicy = DEFAULT_POLICY
) -> list[np.ndarray]:
    """Basis of the smallest Lie algebra containing the generators.

    Repeatedly adjoins commutators that grow the span; terminates because the
    span dimension is bounded by d^2.
    """
    mats = [as_complex_matrix(m, f"generators[{k}]") for k, m in enumerate(generators)]
    if not mats:
        raise InputValidationError("need at least one generator")
    d = mats[0].shape[0]
    for k, m in enumerate(mats):
        if m.shape != (d, d):
            raise InputValidationError(
                f"generators[{k}] has shape {m.shape}, expected ({d}, {d})"
            )
    basis = _prune_independent(mats, pol)
    flats = [b.ravel() for b in basis]
    grew = True
    while grew:
        grew = False
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                cm = commutator(basis[i], basis[j])
                if stack_rank(flats + [cm.ravel()], pol) > len(basis):
                    basis.append(cm)
                    flats.append(cm.ravel())
                    grew = True
    return basis


def derived_subalgebra(
    alg: OperatorLieAlgebra, pol: TolerancePolicy = DEFAULT_POLICY
) -> Ideal:
    """The ideal spanned by all commutators of basis elements.

    The parent algebra is re-based when necessary so the ideal occupies the
    trailing basis positions: complementary original basis elements come
    first, an orthonormal basis of the commutator span last.  The zero ideal
    (abelian algebra) keeps the original parent.
    """
    d = alg.ambient_dim
    comms = [
        commutator(alg.basis[i], alg.basis[j]).ravel()
        for i in range(alg.dim)
        for j in range(i + 1, alg.dim)
    ]
    rows = orthonormal_row_span(comms, pol)
    r = rows.shape[0]
    if r == 0:
        return Ideal(parent=alg, member_indices=())
    derived_mats = [rows[k].reshape(d, d) for k in range(r)]
    complement: list[np.ndarray] = []
    flats = [m.ravel() for m in derived_mats]
    for b in alg.basis:
        if len(complement) == alg.dim - r:
            break
        if stack_rank(flats + [b.ravel()], pol) > r + len(complement):
            complement.append(b)
            flats.append(b.ravel())
    rebased = build_algebra(complement + derived_mats, pol)
    if rebased.dim != alg.dim:
        raise TriangularizationError(
            "re-basing around the derived subalgebra changed the dimension "
            f"({alg.dim} -> {rebased.dim}); rank tolerance too loose or tight"
        )
    return Ideal(
        parent=rebased, member_indices=tuple(range(alg.dim - r, alg.dim))
    )


def validate_ideal(ideal: Ideal, pol: TolerancePolicy = DEFAULT_POLICY) -> None:
    """Check trailing-contiguity and [L, I] within span(I) via structure constants."""
    alg = ideal.parent
    n = alg.dim
    members = ideal.member_indices
    if list(members) != list(range(n - len(members), n)):
        raise InputValidationError(
            f"ideal must be spanned by trailing basis vectors, got {members}"
        )
    member_set = set(members)
    c = alg.structure_constants
    scale = max(1.0, max_abs(c))
    for i in range(n):
        for j in members:
            for k in range(n):
                if k not in member_set and abs(c[i, j, k]) > IDEAL_TOL * scale:
                    raise InputValidationError(
                        f"not an ideal: [x_{i}, x_{j}] has component "
                        f"{c[i, j, k]:.3e} along non-member x_{k}"
                    )


def character_residual(alg: OperatorLieAlgebra, f: np.ndarray) -> float:
    """Largest |f([x_i, x_j])| over basis pairs, via structure constants."""
    f = np.asarray(f, dtype=complex).ravel()
    if f.size != alg.dim:
        raise InputValidationError(
            f"character has {f.size} coefficients, algebra has dimension {alg.dim}"
        )
    worst = 0.0
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            worst = max(worst, abs(np.dot(alg.structure_constants[i, j], f)))
    return worst


def is_character(
    alg: OperatorLieAlgebra, f, pol: TolerancePolicy = DEFAULT_POLICY
) -> bool:
    """True iff f vanishes on the derived subalgebra within tolerance."""
    f = np.asarray(f, dtype=complex).ravel()
    f_scale = float(np.max(np.abs(f))) if f.size else 0.0
    scale = max(1.0, max_abs(alg.structure_constants) * max(1.0, f_scale))
    return character_residual(alg, f) <= CHARACTER_TOL * scale


def require_character(
    alg: OperatorLieAlgebra, f, pol: TolerancePolicy = DEFAULT_POLICY
) -> np.ndarray:
    f = np.asarray(f, dtype=complex).ravel()
    if not is_character(alg, f, pol):
        raise CharacterError(
            "functional does not vanish on the derived subalgebra "
            f"(residual {character_residual(alg, f):.3e})"
        )
    return f


def character_space_basis(
    alg: OperatorLieAlgebra, pol: TolerancePolicy = DEFAULT_POLICY
) -> np.ndarray:
    """Orthonormal columns spanning {f : f([x_i, x_j]) = 0 for all i < j}."""
    n = alg.dim
    rows = [
        alg.structure_constants[i, j]
        for i in range(n)
        for j in range(i + 1, n)
    ]
    if not rows:
        return np.eye(n, dtype=complex)
    return nullspace_basis(np.array(rows), pol)


def direct_product(
    a1: OperatorLieAlgebra, a2: OperatorLieAlgebra
) -> OperatorLieAlgebra:
    """The algebra {x (x) 1 + 1 (x) y} on the Kronecker product space.

    Basis order is all x_i (x) 1 first, then all 1 (x) y_j; cross brackets
    vanish so the structure constants are block diagonal.  The result
    records both the basis split (n1, n2) and the space split (d1, d2).
    """
    d1, d2 = a1.ambient_dim, a2.ambient_dim
    n1, n2 = a1.dim, a2.dim
    eye1 = np.eye(d1, dtype=complex)
    eye2 = np.eye(d2, dtype=complex)
    basis = [kron(x, eye2) for x in a1.basis] + [kron(eye1, y) for y in a2.basis]
    n = n1 + n2
    c = np.zeros((n, n, n), dtype=complex)
    c[:n1, :n1, :n1] = a1.structure_constants
    c[n1:, n1:, n1:] = a2.structure_constants
    return OperatorLieAlgebra(
        ambient_dim=d1 * d2,
        basis=tuple(basis),
        structure_constants=c,
        product_split=(n1, n2),
        space_split=(d1, d2),
    )


def split_character(
    prod: OperatorLieAlgebra, f
) -> tuple[np.ndarray, np.ndarray]:
    """Restrict a product-algebra functional to the two factors."""
    if prod.product_split is None:
        raise InputValidationError(
            "split_character needs an algebra built by direct_product"
        )
    n1, n2 = prod.product_split
    f = np.asarray(f, dtype=complex).ravel()
    if f.size != n1 + n2:
        raise InputValidationError(
            f"character has {f.size} coefficients, expected {n1 + n2}"
        )
    return f[:n1].copy(), f[n1:].copy()


def join_character(f1, f2) -> np.ndarray:
    """Concatenate factor functionals; exact inverse of split_character."""
    return np.concatenate(
        [np.asarray(f1, dtype=complex).ravel(), np.asarray(f2, dtype=complex).ravel()]
    )


def kron_with_identity(alg: OperatorLieAlgebra, d_extra: int) -> OperatorLieAlgebra:
    """Embed x -> x (x) 1 on C^(d * d_extra); structure constants are reused."""
    if d_extra < 1:
        raise InputValidationError("identity factor dimension must be >= 1")
    eye = np.eye(d_extra, dtype=complex)
    return OperatorLieAlgebra(
        ambient_dim=alg.ambient_dim * d_extra,
        basis=tuple(kron(x, eye) for x in alg.basis),
        structure_constants=alg.structure_constants.copy(),
    )


def identity_kron(alg: OperatorLieAlgebra, d_extra: int) -> OperatorLieAlgebra:
    """Embed x -> 1 (x) x on C^(d_extra * d); structure constants are reused."""
    if d_extra < 1:
        raise InputValidationError("identity factor dimension must be >= 1")
    eye = np.eye(d_extra, dtype=complex)
    return OperatorLieAlgebra(
        ambient_dim=alg.ambient_dim * d_extra,
        basis=tuple(kron(eye, x) for x in alg.basis),
        structure_constants=alg.structure_constants.copy(),
    )


# ---------------------------------------------------------------------------
# Simultaneous triangularization
# ---------------------------------------------------------------------------


def _unitary_with_first_column(v: np.ndarray) -> np.ndarray:
    """Householder-based unitary whose first column is v / ||v||."""
    v = v / np.linalg.norm(v)
    m = v.size
    phi = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    u = v.copy()
    u[0] += phi
    h = np.eye(m, dtype=complex) - 2.0 * np.outer(u, u.conj()) / np.vdot(u, u)
    h[:, 0] *= -phi
    return h


def _joint_eigenspace(mats: list[np.ndarray], pol: TolerancePolicy) -> np.ndarray:
    """Orthonormal basis of a joint eigenspace of the solvable span of mats.

    Returns the full simultaneous eigenspace for one weight: every input
    matrix acts on the returned column span as a scalar.  Recursion follows
    Lie's theorem; the invariance of the ideal's weight space under the
    complementary element is checked numerically and a violation raises
    TriangularizationError.
    """
    m = mats[0].shape[0]
    basis = _prune_independent(mats, pol)
    if not basis:
        return np.eye(m, dtype=complex)
    if len(basis) == 1:
        z = basis[0]
        w = np.eye(m, dtype=complex)
    else:
        n = len(basis)
        comms = [
            commutator(basis[i], basis[j]).ravel()
            for i in range(n)
            for j in range(i + 1, n)
        ]
        rows = [r for r in orthonormal_row_span(comms, pol)]
        if len(rows) >= n:
            raise TriangularizationError(
                "derived span is not proper; the span is not solvable"
            )
        # Extend the derived span to a codimension-1 ideal.
        for b in basis:
            if len(rows) >= n - 1:
                break
            if stack_rank(rows + [b.ravel()], pol) > len(rows):
                rows.append(b.ravel())
        z = next(
            b for b in basis if stack_rank(rows + [b.ravel()], pol) > len(rows)
        )
        ideal_mats = [np.asarray(r).reshape(m, m) for r in rows]
        w = _joint_eigenspace(ideal_mats, pol)
    b_small = w.conj().T @ z @ w
    invariance = max_abs(z @ w - w @ b_small)
    if invariance > TRIANGULAR_RESIDUAL_TOL * max(1.0, max_abs(z)):
        raise TriangularizationError(
            f"weight space is not invariant (residual {invariance:.3e})"
        )
    evs = np.linalg.eigvals(b_small)
    nu = evs[np.lexsort((evs.imag, evs.real))[0]]
    eig_basis = nullspace_basis(b_small - nu * np.eye(b_small.shape[0]), pol)
    if eig_basis.shape[1] == 0:
        residual = float(singular_values(b_small - nu * np.eye(b_small.shape[0]))[-1])
        raise TriangularizationError(
            f"no eigenvector within tolerance (residual {residual:.3e})"
        )
    return w @ eig_basis


def triangularize(
    alg: OperatorLieAlgebra, pol: TolerancePolicy = DEFAULT_POLICY
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Unitary S with S* x S upper triangular for every basis element x.

    Returns (S, weights) where weights are the deduplicated diagonal
    functionals: weight j maps x_i to (S* x_i S)[j, j].  Each weight is a
    character of the algebra.
    """
    d = alg.ambient_dim
    cur = [b.copy() for b in alg.basis]
    s_total = np.eye(d, dtype=complex)
    for j in range(d - 1):
        blocks = [c[j:, j:] for c in cur]
        q = _joint_eigenspace(blocks, pol)
        u = _unitary_with_first_column(q[:, 0])
        g = np.eye(d, dtype=complex)
        g[j:, j:] = u
        cur = [g.conj().T @ c @ g for c in cur]
        s_total = s_total @ g
    worst = 0.0
    for x, t in zip(alg.basis, cur):
        denom = max(1.0, max_abs(x))
        worst = max(worst, max_abs(np.tril(t, -1)) / denom)
    if worst > TRIANGULAR_RESIDUAL_TOL:
        raise TriangularizationError(
            f"triangularization residual {worst:.3e} exceeds "
            f"{TRIANGULAR_RESIDUAL_TOL:.1e}"
        )
    weights = [np.array([t[j, j] for t in cur]) for j in range(d)]
    return s_total, dedup_characters(weights, pol.match_tol)


def sort_characters(chars: list[np.ndarray]) -> list[np.ndarray]:
    """Canonical order: lexicographic by (real, imaginary) coefficient parts."""
    return sorted(
        chars, key=lambda v: tuple(np.stack([v.real, v.imag], axis=1).ravel())
    )


def dedup_characters(chars: list[np.ndarray], tol: float) -> list[np.ndarray]:
    """Canonically sorted list with near-duplicates (max-norm <= tol) removed."""
    out: list[np.ndarray] = []
    for ch in sort_characters(chars):
        if all(np.max(np.abs(ch - o)) > tol for o in out):
            out.append(ch)
    return out
