"""Joint spectra of solvable matrix Lie algebras.

A character f belongs to the joint spectrum when the twisted Koszul complex
it defines has nonvanishing homology; equivalently, when the self-adjoint
operator d + d* on the total space is singular.  Both criteria are computed
for every decision and must agree.

The full spectrum is searched over the finite candidate set of simultaneous
triangularization weights.  The definition ranges over all characters (a
continuum), so candidate completeness is an operational decision rather than
a theorem; every result therefore records the candidates that were tested,
and the test suite backs the decision with negative sampling away from the
weights and with exact oracles in the commutative and single-operator cases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    Ideal,
    OperatorLieAlgebra,
    build_algebra,
    dedup_characters,
    direct_product,
    identity_kron,
    join_character,
    kron_with_identity,
    require_character,
    sort_characters,
    split_character,
    triangularize,
    validate_ideal,
)
from .errors import (
    EmptySpectrumError,
    InputValidationError,
    NumericalInconsistencyError,
    SizeLimitError,
)
from .koszul import build_complex, hodge_extremes, homology_dimensions
from .linalg import DEFAULT_POLICY, TolerancePolicy

DEFAULT_DIMENSION_CAP = 32768


@dataclass(frozen=True)
class MembershipDiagnostics:
    """Evidence behind one membership decision."""

    homology_dims: tuple[int, ...]
    t_min_singular: float
    t_max_singular: float


@dataclass(frozen=True, eq=False)
class SpectralPoint:
    character: np.ndarray
    diagnostics: MembershipDiagnostics


@dataclass(frozen=True, eq=False)
class SpectrumResult:
    algebra: OperatorLieAlgebra
    points: tuple[SpectralPoint, ...]
    candidates_tested: tuple[np.ndarray, ...]

    def characters(self) -> list[np.ndarray]:
        return [p.character for p in self.points]


@dataclass(frozen=True)
class MatchReport:
    """Outcome of a greedy nearest-neighbor comparison of two character sets."""

    equal: bool
    max_distance: float
    left_size: int
    right_size: int


@dataclass(frozen=True, eq=False)
class CheckReport:
    """Verdict of one spectral-identity check, with matching distances."""

    passed: bool
    details: dict = field(default_factory=dict)


def check_dimension_cap(alg: OperatorLieAlgebra, cap: int) -> None:
    total = alg.ambient_dim * (2 ** alg.dim)
    if total > cap:
        raise SizeLimitError(
            f"total complex dimension {total} exceeds the cap {cap}"
        )


def contains(
    alg: OperatorLieAlgebra,
    f,
    pol: TolerancePolicy = DEFAULT_POLICY,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> tuple[bool, MembershipDiagnostics]:
    """Spectral membership of a character, with diagnostics.

    Membership holds iff the smallest singular value of d + d* is at most
    ``singularity_tol`` times its largest.  Homology dimensions are computed
    independently from boundary ranks; if the two criteria disagree a
    NumericalInconsistencyError carries both witnesses.
    """
    check_dimension_cap(alg, cap)
    f = require_character(alg, f, pol)
    cx = build_complex(alg, f, pol)
    smin, smax = hodge_extremes(cx)
    dims = homology_dimensions(cx, pol)
    member_by_t = smin <= pol.singularity_tol * smax or smax == 0.0
    member_by_rank = any(h > 0 for h in dims)
    if member_by_t != member_by_rank:
        raise NumericalInconsistencyError(
            "membership criteria disagree: "
            f"min/max singular values {smin:.3e}/{smax:.3e} say "
            f"{member_by_t}, homology dims {dims} say {member_by_rank}"
        )
    return member_by_t, MembershipDiagnostics(
        homology_dims=tuple(dims), t_min_singular=smin, t_max_singular=smax
    )


def compute_spectrum(
    alg: OperatorLieAlgebra,
    pol: TolerancePolicy = DEFAULT_POLICY,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> SpectrumResult:
    """Joint spectrum as a finite set of characters with diagnostics.

    Candidates are the deduplicated triangularization weights.  An empty
    result is impossible for a nonzero solvable algebra on a nonzero space
    and raises EmptySpectrumError with all candidate diagnostics.
    """
    check_dimension_cap(alg, cap)
    _, candidates = triangularize(alg, pol)
    points = []
    rejected = []
    for f in candidates:
        member, diag = contains(alg, f, pol, cap)
        if member:
            points.append(SpectralPoint(character=f, diagnostics=diag))
        else:
            rejected.append((f, diag))
    if not points:
        raise EmptySpectrumError(
            "no triangularization weight is a spectral point; "
            f"rejected candidates and diagnostics: {rejected}"
        )
    points.sort(key=lambda p: tuple(
        np.stack([p.character.real, p.character.imag], axis=1).ravel()
    ))
    return SpectrumResult(
        algebra=alg, points=tuple(points), candidates_tested=tuple(candidates)
    )


def match_character_sets(
    left: list[np.ndarray], right: list[np.ndarray], tol: float
) -> MatchReport:
    """Greedy nearest-neighbor set comparison in the coefficient max-norm.

    Both sides are deduplicated at ``tol`` first; equality requires the same
    size and every greedy pair within ``tol``.  The reported distance is the
    largest matched-pair distance (inf when the sizes differ or a point has
    no partner within tolerance).
    """
    a = dedup_characters(list(left), tol)
    b = dedup_characters(list(right), tol)
    if len(a) != len(b):
        return MatchReport(False, float("inf"), len(a), len(b))
    remaining = list(b)
    worst = 0.0
    for x in a:
        dists = [float(np.max(np.abs(x - y))) if x.size else 0.0 for y in remaining]
        if not dists:
            return MatchReport(False, float("inf"), len(a), len(b))
        j = int(np.argmin(dists))
        if dists[j] > tol:
            return MatchReport(False, float("inf"), len(a), len(b))
        worst = max(worst, dists[j])
        remaining.pop(j)
    return MatchReport(True, worst, len(a), len(b))


def subset_distance(
    sub: list[np.ndarray], superset: list[np.ndarray]
) -> float:
    """Largest distance from a point of ``sub`` to its nearest point of
    ``superset`` (inf when the superset is empty)."""
    worst = 0.0
    for x in sub:
        if not superset:
            return float("inf")
        worst = max(
            worst, min(float(np.max(np.abs(x - y))) for y in superset)
        )
    return worst


def project_spectrum(
    result: SpectrumResult, ideal: Ideal, pol: TolerancePolicy = DEFAULT_POLICY
) -> list[np.ndarray]:
    """Restrict every spectral character to the ideal's coefficients."""
    validate_ideal(ideal, pol)
    if ideal.parent is not result.algebra:
        raise InputValidationError(
            "project_spectrum needs the ideal of the very algebra the "
            "spectrum was computed for (use ideal.parent)"
        )
    k = result.algebra.dim - ideal.dim
    return dedup_characters(
        [p.character[k:].copy() for p in result.points], pol.match_tol
    )


def check_ideal_projection(
    alg: OperatorLieAlgebra,
    ideal: Ideal,
    pol: TolerancePolicy = DEFAULT_POLICY,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> CheckReport:
    """Spectrum of an ideal versus the restricted spectrum of the algebra.

    Computes both sides independently: the ideal's own spectrum via its
    sub-algebra of matrices, and the restriction of the parent spectrum.
    """
    validate_ideal(ideal, pol)
    if alg is not ideal.parent:
        raise InputValidationError(
            "check_ideal_projection needs the ideal's own parent algebra"
        )
    if ideal.dim == 0:
        raise InputValidationError("the zero ideal has no spectrum to compare")
    sub = build_algebra(ideal.basis_matrices(), pol)
    sub_spectrum = compute_spectrum(sub, pol, cap)
    full_spectrum = compute_spectrum(alg, pol, cap)
    projected = project_spectrum(full_spectrum, ideal, pol)
    match = match_character_sets(
        projected, sub_spectrum.characters(), pol.match_tol
    )
    return CheckReport(
        passed=match.equal,
        details={
            "projected": projected,
            "ideal_spectrum": sub_spectrum.characters(),
            "max_distance": match.max_distance,
            "ideal_dim": ideal.dim,
        },
    )


def check_product_factorization(
    a1: OperatorLieAlgebra,
    a2: OperatorLieAlgebra,
    pol: TolerancePolicy = DEFAULT_POLICY,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> CheckReport:
    """Spectrum of the direct product versus the product of the spectra.

    The left side is computed on the Kronecker product space; the right side
    joins every pair of factor spectral points.  Sets are compared by greedy
    matching at ``match_tol``.
    """
    total = a1.ambient_dim * a2.ambient_dim * 2 ** (a1.dim + a2.dim)
    if total > cap:
        raise SizeLimitError(
            f"product complex dimension {total} exceeds the cap {cap}"
        )
    prod = direct_product(a1, a2)
    left = compute_spectrum(prod, pol, cap)
    sp1 = compute_spectrum(a1, pol, cap)
    sp2 = compute_spectrum(a2, pol, cap)
    right = [
        join_character(f, g)
        for f in sp1.characters()
        for g in sp2.characters()
    ]
    match = match_character_sets(left.characters(), right, pol.match_tol)
    return CheckReport(
        passed=match.equal,
        details={
            "product_points": left.characters(),
            "factor1_points": sp1.characters(),
            "factor2_points": sp2.characters(),
            "expected_points": sort_characters(right),
            "max_distance": match.max_distance,
        },
    )


def check_tensor_embedding(
    alg: OperatorLieAlgebra,
    d2: int,
    pol: TolerancePolicy = DEFAULT_POLICY,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> CheckReport:
    """Spectra of the two identity-tensor embeddings of an algebra.

    For L acting on C^d1 and a trivial factor C^d2, the embeddings
    x -> x (x) 1 on C^(d1*d2) and x -> 1 (x) x on C^(d2*d1) must have equal
    spectra (they are exchanged by the unitary factor swap), and both must
    be contained in the spectrum of L itself.  The containments hold as
    exact equalities on every instance observed so far; only the inclusions
    are asserted, and strictness is recorded in the report.
    """
    first = kron_with_identity(alg, d2)
    second = identity_kron(alg, d2)
    check_dimension_cap(first, cap)
    sp_first = compute_spectrum(first, pol, cap)
    sp_second = compute_spectrum(second, pol, cap)
    sp_base = compute_spectrum(alg, pol, cap)
    flip = match_character_sets(
        sp_first.characters(), sp_second.characters(), pol.match_tol
    )
    incl_first = subset_distance(sp_first.characters(), sp_base.characters())
    incl_second = subset_distance(sp_second.characters(), sp_base.characters())
    passed = (
        flip.equal
        and incl_first <= pol.match_tol
        and incl_second <= pol.match_tol
    )
    return CheckReport(
        passed=passed,
        details={
            "flip_max_distance": flip.max_distance,
            "inclusion_first_distance": incl_first,
            "inclusion_second_distance": incl_second,
            "first_points": sp_first.characters(),
            "second_points": sp_second.characters(),
            "base_points": sp_base.characters(),
            "inclusion_first_strict": len(sp_first.points) < len(sp_base.points),
            "inclusion_second_strict": len(sp_second.points) < len(sp_base.points),
        },
    )
