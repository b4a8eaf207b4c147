"""Twisted Koszul (Chevalley-Eilenberg) chain complexes as explicit matrices.

Coordinate convention, fixed once for the whole package: degree p of the
complex is H (x) Wedge^p L with basis vectors e_h<x_S> indexed by pairs
(S, h), where S runs over the p-element subsets of {0, .., n-1} in
lexicographic order and h over 0..d-1.  The flat coordinate of (S, h) is
``s * d + h`` with s the lexicographic position of S, i.e. the H index
varies fastest inside each subset block.  Under this convention all the
comparison maps below (factor swap, regrouping, product split, degree sign)
are exact permutation or diagonal-sign matrices.

The boundary sends e<x_{i_1} ^ .. ^ x_{i_p}> to

    sum_k (-1)^(k+1) (x_{i_k} - f(x_{i_k})) e <.. x_{i_k} deleted ..>
  - sum_{k<l} (-1)^(k+l) e <[x_{i_k}, x_{i_l}] ^ .. both deleted ..>

with [x, y] = xy - yx and matrices acting on column vectors.  The sign of
the bracket sum is the one under which the boundary squares to zero for a
left module action; it amounts to reading the classical formula through the
opposite product on the algebra.  Squaring to zero is asserted whenever a
complex is assembled.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .algebra import OperatorLieAlgebra, require_character
from .errors import InputValidationError, NumericalInconsistencyError
from .linalg import (
    DEFAULT_POLICY,
    TolerancePolicy,
    adjoint,
    max_abs,
    numerical_rank,
    singular_values,
)

NILPOTENCY_TOL = 1e-10


def exterior_basis(n: int, p: int) -> list[tuple[int, ...]]:
    """All p-element subsets of {0, .., n-1} in lexicographic order."""
    if not 0 <= p <= n:
        raise InputValidationError(f"degree {p} out of range for n={n}")
    return list(combinations(range(n), p))


def wedge_insert(
    element_index: int, target: tuple[int, ...]
) -> tuple[int, tuple[int, ...]] | None:
    """Normalize element ^ target into the ordered basis.

    Returns (sign, sorted subset) where the sign is the parity of moving the
    element from the front past every smaller member, or None when the
    element already occurs in the subset.
    """
    if element_index in target:
        return None
    passed = sum(1 for t in target if t < element_index)
    merged = tuple(sorted(target + (element_index,)))
    return (-1) ** passed, merged


def boundary_matrix(
    alg: OperatorLieAlgebra,
    f,
    p: int,
    pol: TolerancePolicy = DEFAULT_POLICY,
) -> np.ndarray:
    """Matrix of the degree-p boundary in the flat coordinates above."""
    f = require_character(alg, f, pol)
    n, d = alg.dim, alg.ambient_dim
    if not 1 <= p <= n:
        raise InputValidationError(f"boundary degree {p} out of range 1..{n}")
    sources = exterior_basis(n, p)
    targets = exterior_basis(n, p - 1)
    pos = {t: i for i, t in enumerate(targets)}
    mat = np.zeros((d * len(targets), d * len(sources)), dtype=complex)
    eye = np.eye(d, dtype=complex)
    diag = np.arange(d)
    for s, subset in enumerate(sources):
        col = s * d
        for k, ik in enumerate(subset, start=1):
            reduced = tuple(x for x in subset if x != ik)
            row = pos[reduced] * d
            sign = (-1) ** (k + 1)
            mat[row : row + d, col : col + d] += sign * (
                alg.basis[ik] - f[ik] * eye
            )
        for k in range(1, len(subset) + 1):
            for l in range(k + 1, len(subset) + 1):
                ik, il = subset[k - 1], subset[l - 1]
                rest = tuple(x for x in subset if x not in (ik, il))
                coeffs = alg.structure_constants[ik, il]
                for m in np.flatnonzero(np.abs(coeffs) > 0):
                    inserted = wedge_insert(int(m), rest)
                    if inserted is None:
                        continue
                    wsign, merged = inserted
                    row = pos[merged] * d
                    scalar = -((-1) ** (k + l)) * wsign * coeffs[m]
                    mat[row + diag, col + diag] += scalar
    return mat


@dataclass(frozen=True, eq=False)
class KoszulComplex:
    """Graded dimensions and boundary matrices of one twisted complex.

    ``boundaries[p - 1]`` is the map from degree p to degree p - 1, for
    p = 1..n; boundaries outside that range are zero and are treated as
    absent.
    """

    algebra: OperatorLieAlgebra
    character: np.ndarray
    graded_dims: tuple[int, ...]
    boundaries: tuple[np.ndarray, ...]

    @property
    def top_degree(self) -> int:
        return self.algebra.dim

    def boundary(self, p: int) -> np.ndarray | None:
        if 1 <= p <= self.top_degree:
            return self.boundaries[p - 1]
        return None

    def total_dim(self) -> int:
        return sum(self.graded_dims)

    def degree_offsets(self) -> list[int]:
        offs = [0]
        for m in self.graded_dims:
            offs.append(offs[-1] + m)
        return offs


def nilpotency_residual(d_outer: np.ndarray, d_inner: np.ndarray) -> float:
    """Relative max-norm of the composite of consecutive boundaries."""
    scale = max(1.0, max_abs(d_outer) * max_abs(d_inner))
    return max_abs(d_outer @ d_inner) / scale


def build_complex(
    alg: OperatorLieAlgebra, f, pol: TolerancePolicy = DEFAULT_POLICY
) -> KoszulComplex:
    """Assemble all boundaries and assert that consecutive ones compose to zero.

    A nilpotency violation is an internal sign-convention failure, never a
    user error, and raises NumericalInconsistencyError.
    """
    f = require_character(alg, f, pol)
    n, d = alg.dim, alg.ambient_dim
    dims = tuple(d * comb(n, p) for p in range(n + 1))
    boundaries = tuple(boundary_matrix(alg, f, p, pol) for p in range(1, n + 1))
    for p in range(1, n):
        res = nilpotency_residual(boundaries[p - 1], boundaries[p])
        if res > NILPOTENCY_TOL:
            raise NumericalInconsistencyError(
                f"boundary composite at degree {p + 1} has relative residual "
                f"{res:.3e}; this is an internal sign error"
            )
    return KoszulComplex(
        algebra=alg, character=f, graded_dims=dims, boundaries=boundaries
    )


def homology_dimensions(
    cx: KoszulComplex, pol: TolerancePolicy = DEFAULT_POLICY
) -> list[int]:
    """dim H_p = dim C_p - rank d_p - rank d_(p+1) for p = 0..n."""
    n = cx.top_degree
    ranks = [numerical_rank(b, pol) for b in cx.boundaries]
    dims = []
    for p in range(n + 1):
        inner = ranks[p - 1] if p >= 1 else 0
        outer = ranks[p] if p < n else 0
        h = cx.graded_dims[p] - inner - outer
        if h < 0:
            raise NumericalInconsistencyError(
                f"negative homology dimension at degree {p}: "
                f"dim={cx.graded_dims[p]}, rank_in={inner}, rank_out={outer}"
            )
        dims.append(h)
    return dims


def hodge_operator(cx: KoszulComplex) -> np.ndarray:
    """The self-adjoint operator d + d* on the direct sum of all degrees.

    Degree-p coordinates occupy one contiguous block, degrees ordered 0..n;
    the boundary from degree p lands in the degree p - 1 block.
    """
    total = cx.total_dim()
    offs = cx.degree_offsets()
    d_total = np.zeros((total, total), dtype=complex)
    for p in range(1, cx.top_degree + 1):
        b = cx.boundaries[p - 1]
        d_total[offs[p - 1] : offs[p], offs[p] : offs[p + 1]] = b
    return d_total + adjoint(d_total)


def hodge_extremes(cx: KoszulComplex) -> tuple[float, float]:
    """(smallest, largest) singular value of d + d*, computed blockwise.

    Because the boundary squares to zero, the square of d + d* is block
    diagonal over degrees, so its singular values are the union over p of
    the singular values of [d_p ; d_(p+1)*] stacked, padded with zeros when
    that stack is wide.  This avoids forming (and squaring) the full
    operator.
    """
    n = cx.top_degree
    smin, smax = np.inf, 0.0
    for p in range(n + 1):
        blocks = []
        if p >= 1:
            blocks.append(cx.boundaries[p - 1])
        if p + 1 <= n:
            blocks.append(adjoint(cx.boundaries[p]))
        stacked = np.vstack(blocks)
        cols = stacked.shape[1]
        s = singular_values(stacked) if stacked.size else np.zeros(0)
        if s.size < cols:
            s = np.concatenate([s, np.zeros(cols - s.size)])
        smin = min(smin, float(s[-1]) if s.size else 0.0)
        smax = max(smax, float(s[0]) if s.size else 0.0)
    return smin, smax


# ---------------------------------------------------------------------------
# Comparison maps between complexes over tensor-product spaces
# ---------------------------------------------------------------------------


def _commutation_permutation(d1: int, d2: int) -> np.ndarray:
    """Permutation sending the (i, j) Kronecker index of C^d1 (x) C^d2 to the
    (j, i) index of C^d2 (x) C^d1."""
    perm = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i in range(d1):
        for j in range(d2):
            perm[j * d1 + i, i * d2 + j] = 1.0
    return perm


def swap_factors_blocks(d1: int, d2: int, n: int) -> list[np.ndarray]:
    """Per-degree unitaries exchanging the two Hilbert factors.

    Conjugating the complex of {x (x) 1} on C^d1 (x) C^d2 by these blocks
    yields the complex of {1 (x) x} on C^d2 (x) C^d1 exactly.
    """
    if d1 < 1 or d2 < 1:
        raise InputValidationError("factor dimensions must be positive")
    perm = _commutation_permutation(d1, d2)
    return [np.kron(np.eye(comb(n, p), dtype=complex), perm) for p in range(n + 1)]


def swap_factors_map(d1: int, d2: int, n: int) -> np.ndarray:
    """Block-diagonal total-space form of :func:`swap_factors_blocks`."""
    return _block_diag(swap_factors_blocks(d1, d2, n))


def regroup_right_factor_map(d1: int, d2: int, n: int) -> np.ndarray:
    """Total-space map (C^d1 (x) C^d2) (x) Wedge -> (C^d1 (x) Wedge) (x) C^d2.

    With the flat coordinate convention of this module the regrouping is the
    identity permutation: position (s, i1 * d2 + i2) equals position
    ((s * d1 + i1), i2).  The map is returned explicitly so callers can treat
    it uniformly with the other comparison maps.
    """
    if d1 < 1 or d2 < 1:
        raise InputValidationError("factor dimensions must be positive")
    total = d1 * d2 * sum(comb(n, p) for p in range(n + 1))
    return np.eye(total, dtype=complex)


def degree_sign_blocks(d: int, n: int) -> list[np.ndarray]:
    """(-1)^p times the identity on each degree-p block."""
    return [
        ((-1) ** p) * np.eye(d * comb(n, p), dtype=complex) for p in range(n + 1)
    ]


def degree_sign_matrix(d: int, n: int) -> np.ndarray:
    """Diagonal +/-1 operator equal to (-1)^p on degree p of the total space."""
    if d < 1 or n < 0:
        raise InputValidationError("invalid dimensions for the sign operator")
    return _block_diag(degree_sign_blocks(d, n))


def split_product_blocks(prod: OperatorLieAlgebra) -> list[np.ndarray]:
    """Per-total-degree unitaries from the product complex onto the direct sum
    over (p, q) with p + q = k of (H1 (x) Wedge^p L1) (x) (H2 (x) Wedge^q L2).

    Requires an algebra built by direct_product so the ambient dimensions and
    the basis split are known.  Summands are ordered by ascending p; a basis
    subset of the product algebra lists all factor-1 indices before factor-2
    indices, so no sign arises.
    """
    if prod.product_split is None or prod.space_split is None:
        raise InputValidationError(
            "split_product_blocks needs an algebra built by direct_product"
        )
    n1, n2 = prod.product_split
    d1, d2 = prod.space_split
    d_total = prod.ambient_dim
    n = n1 + n2
    maps = []
    for k in range(n + 1):
        subsets = exterior_basis(n, k)
        source_dim = d_total * len(subsets)
        p_range = [p for p in range(k + 1) if p <= n1 and k - p <= n2]
        summand_dims = {
            p: (d1 * comb(n1, p), d2 * comb(n2, k - p)) for p in p_range
        }
        target_dim = sum(a * b for a, b in summand_dims.values())
        offsets = {}
        acc = 0
        for p in p_range:
            offsets[p] = acc
            a, b = summand_dims[p]
            acc += a * b
        pos1 = {p: {s: i for i, s in enumerate(exterior_basis(n1, p))} for p in p_range}
        pos2 = {
            p: {s: i for i, s in enumerate(exterior_basis(n2, k - p))}
            for p in p_range
        }
        mat = np.zeros((target_dim, source_dim), dtype=complex)
        for s, subset in enumerate(subsets):
            first = tuple(i for i in subset if i < n1)
            second = tuple(i - n1 for i in subset if i >= n1)
            p = len(first)
            if p not in summand_dims:
                continue
            s1 = pos1[p][first]
            s2 = pos2[p][second]
            dim2_block = summand_dims[p][1]
            for i1 in range(d1):
                for i2 in range(d2):
                    src = s * d_total + i1 * d2 + i2
                    dst = offsets[p] + (s1 * d1 + i1) * dim2_block + (s2 * d2 + i2)
                    mat[dst, src] = 1.0
        maps.append(mat)
    return maps


def split_product_map(prod: OperatorLieAlgebra) -> np.ndarray:
    """Block-diagonal total-space form of :func:`split_product_blocks`."""
    return _block_diag(split_product_blocks(prod))


def tensor_boundary_blocks(
    k1: KoszulComplex, k2: KoszulComplex
) -> list[np.ndarray]:
    """Boundaries of the tensor product of two complexes, degree k -> k - 1.

    Block from summand (p, q) to (p - 1, q) is d1_p (x) 1, and to (p, q - 1)
    is (-1)^p (x) d2_q; summands ordered by ascending p, matching
    :func:`split_product_blocks`.
    """
    n1, n2 = k1.top_degree, k2.top_degree
    dims1, dims2 = k1.graded_dims, k2.graded_dims
    out = []
    for k in range(1, n1 + n2 + 1):
        src_ps = [p for p in range(k + 1) if p <= n1 and k - p <= n2]
        dst_ps = [p for p in range(k) if p <= n1 and (k - 1) - p <= n2]
        src_off = _summand_offsets(src_ps, dims1, dims2, k)
        dst_off = _summand_offsets(dst_ps, dims1, dims2, k - 1)
        rows = sum(dims1[p] * dims2[k - 1 - p] for p in dst_ps)
        cols = sum(dims1[p] * dims2[k - p] for p in src_ps)
        mat = np.zeros((rows, cols), dtype=complex)
        for p in src_ps:
            q = k - p
            c0 = src_off[p]
            width = dims1[p] * dims2[q]
            if p >= 1 and (p - 1) in dst_off:
                block = np.kron(k1.boundaries[p - 1], np.eye(dims2[q]))
                mat[dst_off[p - 1] : dst_off[p - 1] + block.shape[0], c0 : c0 + width] = block
            if q >= 1 and p in dst_off:
                block = ((-1) ** p) * np.kron(np.eye(dims1[p]), k2.boundaries[q - 1])
                mat[dst_off[p] : dst_off[p] + block.shape[0], c0 : c0 + width] = block
        out.append(mat)
    return out


def _summand_offsets(ps, dims1, dims2, k):
    offs = {}
    acc = 0
    for p in ps:
        offs[p] = acc
        acc += dims1[p] * dims2[k - p]
    return offs


def _block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    total_r = sum(b.shape[0] for b in blocks)
    total_c = sum(b.shape[1] for b in blocks)
    out = np.zeros((total_r, total_c), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
