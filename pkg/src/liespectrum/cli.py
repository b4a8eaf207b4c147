"""Command-line front end.

Subcommands: spectrum, member, product, verify, export.  Problem files are
JSON with complex entries encoded as [re, im] pairs:

    {
      "dimension": 2,
      "label": "optional",
      "basis": [ [[[1.0, 0.0], [0.0, 0.0]],
                  [[0.0, 0.0], [0.0, 0.0]]], ... ]
    }

Exit codes: 0 success / all checks pass, 1 property-check failure,
2 invalid input, 3 size limit exceeded.  Reports are deterministic for
fixed inputs and seed; the wall time is confined to the single
``wall_time_s`` field.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time

import numpy as np

from .algebra import OperatorLieAlgebra, build_algebra
from .errors import (
    InputValidationError,
    NumericalInconsistencyError,
    ProblemFileError,
    SizeLimitError,
)
from .generate import random_ideal_containing_derived, random_solvable_algebra
from .koszul import build_complex, nilpotency_residual
from .linalg import TolerancePolicy
from .spectrum import (
    DEFAULT_DIMENSION_CAP,
    check_ideal_projection,
    check_product_factorization,
    check_tensor_embedding,
    compute_spectrum,
    contains,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID_INPUT = 2
EXIT_SIZE_LIMIT = 3


# ---------------------------------------------------------------------------
# Problem files
# ---------------------------------------------------------------------------


def _decode_complex_matrix(raw, where: str) -> list[list[complex]]:
    if not isinstance(raw, list) or not raw:
        raise ProblemFileError(f"{where}: matrix must be a nonempty list of rows")
    width = None
    out = []
    for r, row in enumerate(raw):
        if not isinstance(row, list):
            raise ProblemFileError(f"{where} row {r}: not a list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ProblemFileError(
                f"{where} row {r}: ragged rows ({len(row)} vs {width})"
            )
        decoded = []
        for c, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(v, (int, float)) for v in cell)
            ):
                raise ProblemFileError(
                    f"{where} entry ({r},{c}): expected [re, im] pair"
                )
            decoded.append(complex(cell[0], cell[1]))
        out.append(decoded)
    return out


def parse_problem(data: dict, where: str = "problem") -> tuple[list, str]:
    if not isinstance(data, dict):
        raise ProblemFileError(f"{where}: top level must be an object")
    if "dimension" not in data or "basis" not in data:
        raise ProblemFileError(f"{where}: needs 'dimension' and 'basis' fields")
    d = data["dimension"]
    if not isinstance(d, int) or d < 1:
        raise ProblemFileError(f"{where}: dimension must be a positive integer")
    raw_basis = data["basis"]
    if not isinstance(raw_basis, list) or not raw_basis:
        raise ProblemFileError(f"{where}: basis must be a nonempty list")
    mats = []
    for k, raw in enumerate(raw_basis):
        m = _decode_complex_matrix(raw, f"{where}.basis[{k}]")
        if len(m) != d or len(m[0]) != d:
            raise ProblemFileError(
                f"{where}.basis[{k}]: shape {len(m)}x{len(m[0])}, expected {d}x{d}"
            )
        mats.append(np.array(m, dtype=complex))
    label = data.get("label", "")
    if not isinstance(label, str):
        raise ProblemFileError(f"{where}: label must be a string")
    return mats, label


def load_problem_file(path: str, pol: TolerancePolicy):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProblemFileError(f"{path}: not valid UTF-8 JSON: {exc}") from exc
    mats, label = parse_problem(data, path)
    algebra = build_algebra(mats, pol)
    return algebra, {"path": path, "sha256": digest, "label": label}


def problem_dict(alg: OperatorLieAlgebra, label: str = "") -> dict:
    """Serialize an algebra in the problem-file schema (for replay)."""
    return {
        "dimension": alg.ambient_dim,
        "label": label,
        "basis": [
            [[[float(z.real), float(z.imag)] for z in row] for row in mat]
            for mat in alg.basis
        ],
    }


def parse_character_arg(text: str, n: int) -> np.ndarray:
    try:
        parts = [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise InputValidationError(f"cannot parse character '{text}': {exc}") from exc
    if len(parts) != 2 * n:
        raise InputValidationError(
            f"character needs {2 * n} numbers (re,im per coefficient), got {len(parts)}"
        )
    values = np.array(parts).reshape(n, 2)
    return values[:, 0] + 1j * values[:, 1]


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.12e}{z.imag:+.12e}j"


def _character_payload(f: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in f]


def _points_payload(points) -> list:
    return [
        {
            "coefficients": _character_payload(p.character),
            "homology_dims": list(p.diagnostics.homology_dims),
            "t_min_sv": p.diagnostics.t_min_singular,
            "t_max_sv": p.diagnostics.t_max_singular,
        }
        for p in points
    ]


def _characters_payload(chars) -> list:
    return [_character_payload(f) for f in chars]


def _base_report(args, command: str) -> dict:
    return {
        "tool": "liespectrum",
        "command": command,
        "tolerances": {
            "rank_tol_rel": args.tol_rank,
            "singularity_tol": args.tol_sing,
            "match_tol": args.tol_match,
        },
        "cap": args.cap,
    }


def _policy(args) -> TolerancePolicy:
    return TolerancePolicy(
        rank_tol_rel=args.tol_rank,
        singularity_tol=args.tol_sing,
        match_tol=args.tol_match,
    )


def _emit(report: dict, args, text_lines: list[str], out) -> None:
    if args.format == "json":
        json.dump(report, out, sort_keys=True, indent=2)
        out.write("\n")
    else:
        for line in text_lines:
            out.write(line + "\n")
        out.write(f"wall_time_s={report['wall_time_s']:.6f}\n")


def _spectrum_lines(payload: dict) -> list[str]:
    lines = [
        f"d={payload['dimension']} n={payload['basis_size']} "
        f"label={payload['label']!r} points={len(payload['points'])}"
    ]
    for pt in payload["points"]:
        coeffs = " ".join(
            _fmt_complex(complex(re, im)) for re, im in pt["coefficients"]
        )
        lines.append(
            f"point {coeffs} | homology={pt['homology_dims']} "
            f"| t_min_sv={pt['t_min_sv']:.3e}"
        )
    return lines


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_spectrum(args, out) -> int:
    pol = _policy(args)
    start = time.perf_counter()
    algebra, source = load_problem_file(args.file, pol)
    result = compute_spectrum(algebra, pol, args.cap)
    report = _base_report(args, "spectrum")
    report["inputs"] = [source]
    report["payload"] = {
        "dimension": algebra.ambient_dim,
        "basis_size": algebra.dim,
        "label": source["label"],
        "points": _points_payload(result.points),
        "candidates_tested": _characters_payload(result.candidates_tested),
    }
    report["wall_time_s"] = time.perf_counter() - start
    _emit(report, args, _spectrum_lines(report["payload"]), out)
    return EXIT_OK


def cmd_member(args, out) -> int:
    pol = _policy(args)
    start = time.perf_counter()
    algebra, source = load_problem_file(args.file, pol)
    f = parse_character_arg(args.character, algebra.dim)
    member, diag = contains(algebra, f, pol, args.cap)
    report = _base_report(args, "member")
    report["inputs"] = [source]
    report["payload"] = {
        "character": _character_payload(f),
        "member": member,
        "homology_dims": list(diag.homology_dims),
        "t_min_sv": diag.t_min_singular,
        "t_max_sv": diag.t_max_singular,
    }
    report["wall_time_s"] = time.perf_counter() - start
    verdict = "member" if member else "non-member"
    lines = [
        f"{verdict} | homology={list(diag.homology_dims)} "
        f"| t_min_sv={diag.t_min_singular:.3e}"
    ]
    _emit(report, args, lines, out)
    return EXIT_OK


def cmd_product(args, out) -> int:
    pol = _policy(args)
    start = time.perf_counter()
    a1, src1 = load_problem_file(args.file1, pol)
    a2, src2 = load_problem_file(args.file2, pol)
    check = check_product_factorization(a1, a2, pol, args.cap)
    report = _base_report(args, "product")
    report["inputs"] = [src1, src2]
    det = check.details
    report["payload"] = {
        "verdict": "pass" if check.passed else "fail",
        "max_match_distance": det["max_distance"],
        "factor1": {"points": _characters_payload(det["factor1_points"])},
        "factor2": {"points": _characters_payload(det["factor2_points"])},
        "product": {"points": _characters_payload(det["product_points"])},
    }
    report["wall_time_s"] = time.perf_counter() - start
    lines = [
        f"factor1 points: {len(det['factor1_points'])}",
        f"factor2 points: {len(det['factor2_points'])}",
        f"product points: {len(det['product_points'])}",
        f"verdict: {report['payload']['verdict']} "
        f"(max match distance {det['max_distance']:.3e})",
    ]
    _emit(report, args, lines, out)
    return EXIT_OK if check.passed else EXIT_CHECK_FAILED


def run_verification(
    seed: int,
    trials: int,
    dmax: int,
    nmax: int,
    pol: TolerancePolicy,
    cap: int = DEFAULT_DIMENSION_CAP,
) -> dict:
    """Randomized harness over the spectral identities.

    Per trial: draw two solvable algebras; check boundary nilpotency and the
    agreement of the two membership criteria on every weight character, the
    ideal projection identity on a random ideal containing the derived
    subalgebra, both identity-tensor embeddings, and the product
    factorization of the pair.
    """
    rng = np.random.default_rng(seed)
    trial_rows = []
    failures = []
    worst = {
        "nilpotency_residual": 0.0,
        "projection_distance": 0.0,
        "embedding_distance": 0.0,
        "product_distance": 0.0,
    }
    for t in range(trials):
        a1 = random_solvable_algebra(rng, dmax, nmax, pol)
        a2 = random_solvable_algebra(rng, dmax, nmax, pol)
        row = {
            "trial": t,
            "d1": a1.ambient_dim,
            "n1": a1.dim,
            "d2": a2.ambient_dim,
            "n2": a2.dim,
        }
        ok = True
        try:
            sp = compute_spectrum(a1, pol, cap)
            nil = 0.0
            for f in sp.candidates_tested:
                cx = build_complex(a1, f, pol)
                for p in range(1, cx.top_degree):
                    nil = max(
                        nil,
                        nilpotency_residual(cx.boundaries[p - 1], cx.boundaries[p]),
                    )
            row["nilpotency_residual"] = nil
            row["spectrum_points"] = len(sp.points)
            worst["nilpotency_residual"] = max(worst["nilpotency_residual"], nil)

            ideal = random_ideal_containing_derived(rng, a1, pol)
            proj = check_ideal_projection(ideal.parent, ideal, pol, cap)
            row["projection_distance"] = proj.details["max_distance"]
            ok = ok and proj.passed
            worst["projection_distance"] = max(
                worst["projection_distance"], proj.details["max_distance"]
            )

            emb_dist = 0.0
            for d_extra in (1, 2):
                emb = check_tensor_embedding(a1, d_extra, pol, cap)
                ok = ok and emb.passed
                emb_dist = max(
                    emb_dist,
                    emb.details["flip_max_distance"],
                    emb.details["inclusion_first_distance"],
                    emb.details["inclusion_second_distance"],
                )
            row["embedding_distance"] = emb_dist
            worst["embedding_distance"] = max(worst["embedding_distance"], emb_dist)

            prod = check_product_factorization(a1, a2, pol, cap)
            row["product_distance"] = prod.details["max_distance"]
            ok = ok and prod.passed
            worst["product_distance"] = max(
                worst["product_distance"], prod.details["max_distance"]
            )
        except SizeLimitError:
            raise
        except NumericalInconsistencyError as exc:
            ok = False
            row["error"] = str(exc)
        row["passed"] = ok
        if not ok:
            failures.append(
                {
                    "trial": t,
                    "algebra1": problem_dict(a1, f"verify seed={seed} trial={t} algebra1"),
                    "algebra2": problem_dict(a2, f"verify seed={seed} trial={t} algebra2"),
                }
            )
        trial_rows.append(row)
    return {
        "seed": seed,
        "trials": trials,
        "dmax": dmax,
        "nmax": nmax,
        "passed_trials": sum(1 for r in trial_rows if r["passed"]),
        "trial_results": trial_rows,
        "worst": worst,
        "failures": failures,
    }


def cmd_verify(args, out) -> int:
    if args.trials < 1:
        raise InputValidationError("verify needs a positive trial count")
    pol = _policy(args)
    start = time.perf_counter()
    payload = run_verification(
        args.seed, args.trials, args.dmax, args.nmax, pol, args.cap
    )
    report = _base_report(args, "verify")
    report["seed"] = args.seed
    report["payload"] = payload
    report["wall_time_s"] = time.perf_counter() - start
    lines = []
    for row in payload["trial_results"]:
        status = "pass" if row["passed"] else "FAIL"
        detail = (
            f"nil={row.get('nilpotency_residual', float('nan')):.2e} "
            f"proj={row.get('projection_distance', float('nan')):.2e} "
            f"emb={row.get('embedding_distance', float('nan')):.2e} "
            f"prod={row.get('product_distance', float('nan')):.2e}"
            if "error" not in row
            else f"error: {row['error']}"
        )
        lines.append(
            f"trial {row['trial']}: d1={row['d1']} n1={row['n1']} "
            f"d2={row['d2']} n2={row['n2']} {detail} -> {status}"
        )
    lines.append(
        f"summary: {payload['passed_trials']}/{payload['trials']} trials passed; "
        f"worst nilpotency={payload['worst']['nilpotency_residual']:.2e} "
        f"projection={payload['worst']['projection_distance']:.2e} "
        f"embedding={payload['worst']['embedding_distance']:.2e} "
        f"product={payload['worst']['product_distance']:.2e}"
    )
    if payload["failures"]:
        lines.append("failing instances (problem-file JSON, replayable):")
        lines.append(json.dumps(payload["failures"], sort_keys=True, indent=2))
    _emit(report, args, lines, out)
    all_passed = payload["passed_trials"] == payload["trials"]
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


def _extract_points(report: dict) -> list[dict]:
    payload = report.get("payload", {})
    if "points" in payload:
        return payload["points"]
    if "product" in payload and "points" in payload["product"]:
        return [{"coefficients": c} for c in payload["product"]["points"]]
    raise InputValidationError("report carries no spectral points to export")


def cmd_export(args, out) -> int:
    if args.report == "-":
        raw = sys.stdin.read()
    else:
        try:
            with open(args.report, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputValidationError(f"cannot read {args.report}: {exc}") from exc
    try:
        report = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputValidationError(f"report is not valid JSON: {exc}") from exc
    if args.format == "json":
        json.dump(report, out, sort_keys=True, indent=2)
        out.write("\n")
        return EXIT_OK
    points = _extract_points(report)
    if points:
        width = len(points[0]["coefficients"])
    else:
        width = 0
    writer = csv.writer(out, lineterminator="\n")
    header = []
    for i in range(width):
        header += [f"re_{i}", f"im_{i}"]
    writer.writerow(header)
    for pt in points:
        row = []
        for re, im in pt["coefficients"]:
            row += [repr(float(re)), repr(float(im))]
        writer.writerow(row)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--tol-rank", type=float, default=1e-10, metavar="T",
                        help="relative singular-value cutoff for ranks")
    shared.add_argument("--tol-sing", type=float, default=1e-8, metavar="T",
                        help="normalized singularity threshold for membership")
    shared.add_argument("--tol-match", type=float, default=1e-6, metavar="T",
                        help="tolerance for comparing character sets")
    shared.add_argument("--cap", type=int, default=DEFAULT_DIMENSION_CAP,
                        help="maximum total complex dimension")
    shared.add_argument("--format", choices=["text", "json"], default="text",
                        help="output format")

    parser = argparse.ArgumentParser(
        prog="liespectrum",
        description="Joint spectra of solvable matrix Lie algebras via "
        "twisted Koszul homology",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[shared],
                       help="compute the full joint spectrum of a problem file")
    p.add_argument("file", help="problem file (JSON)")

    p = sub.add_parser("member", parents=[shared],
                       help="test one character for spectral membership")
    p.add_argument("file", help="problem file (JSON)")
    p.add_argument("character",
                   help="flat re,im,... list of coefficients in basis order")

    p = sub.add_parser("product", parents=[shared],
                       help="verify the product factorization for two problem files")
    p.add_argument("file1")
    p.add_argument("file2")

    p = sub.add_parser("verify", parents=[shared],
                       help="run the randomized verification harness")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--nmax", type=int, default=2)

    p = sub.add_parser("export", help="convert a JSON report to csv or json")
    p.add_argument("report", help="report file, or - for stdin")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    return p


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "member": cmd_member,
    "product": cmd_product,
    "verify": cmd_verify,
    "export": cmd_export,
}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args, out)
    except InputValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE_LIMIT
    except NumericalInconsistencyError as exc:
        print(f"numerical check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
