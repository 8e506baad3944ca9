"""Command-line front end: tuple ingestion, dilations, commuting pieces,
classification, and the verification suites.

Exit codes: 0 success (warnings allowed), 1 assertion failure in a check
suite, 2 input or precondition error. Reports embed the full run
configuration and are byte-deterministic for a fixed seed; matrices are
serialized as nested [re, im] pairs, which round-trip doubles exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from ._linalg import opnorm
from .cuntz import spectral_atoms, spherical_decomposition
from .dilate import (
    cuntz_state_rep,
    pure_embedding,
    schaeffer_dilation,
    standard_commuting_dilation_pure,
)
from .errors import DilationLabError, PreconditionError
from .piece import maximal_commuting_piece, rank_stability_warnings
from .tuples import OperatorTuple, is_row_contraction, is_spherical_unitary, row_sum
from .verify import run_checks

SCHEMA_VERSION = 1
CHECK_SUITES = ("prop6", "thm15", "thm9", "lemma10", "chain", "corollary5")


@dataclass(frozen=True)
class RunConfig:
    degree: int = 5
    tol: float = 1e-10
    rank_tol: float = 1e-9
    seed: int = 0
    fmt: str = "json"
    max_dump_entries: int = 10 ** 6

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError(f"truncation degree must be >= 2, got {self.degree}")
        if self.tol <= 0 or self.rank_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.fmt not in ("json", "markdown"):
            raise ValueError(f"unknown output format: {self.fmt}")


# ---------------------------------------------------------------------------
# tuple file format

def tuple_to_jsonable(t: OperatorTuple, name: str | None = None,
                      description: str | None = None) -> dict:
    body = {
        "n": t.n,
        "dim": t.dim,
        "matrices": [[[[float(x.real), float(x.imag)] for x in row]
                      for row in mat] for mat in t.mats],
    }
    if name is not None:
        body["name"] = name
    if description is not None:
        body["description"] = description
    return body


def tuple_from_jsonable(obj) -> OperatorTuple:
    if not isinstance(obj, dict):
        raise ValueError("tuple file must be a JSON object")
    try:
        n, dim = int(obj["n"]), int(obj["dim"])
        raw = obj["matrices"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"tuple file missing/invalid field: {exc}") from exc
    if not (isinstance(raw, list) and len(raw) == n):
        raise ValueError(f"expected {n} matrices, got {type(raw).__name__}")
    mats = np.zeros((n, dim, dim), dtype=np.complex128)
    for i, mat in enumerate(raw):
        if len(mat) != dim or any(len(row) != dim for row in mat):
            raise ValueError(f"matrix {i} is not {dim}x{dim}")
        for r, row in enumerate(mat):
            for c, entry in enumerate(row):
                if not (isinstance(entry, list) and len(entry) == 2):
                    raise ValueError(
                        f"matrix {i} entry ({r},{c}) is not a [re, im] pair")
                mats[i, r, c] = complex(float(entry[0]), float(entry[1]))
    return OperatorTuple(mats)


def load_tuple_file(path: str) -> OperatorTuple:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read tuple file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON in {path}: {exc}") from exc
    return tuple_from_jsonable(obj)


def save_tuple_file(path: str, t: OperatorTuple, **meta) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(tuple_to_jsonable(t, **meta), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# report plumbing

def _sanitize(obj):
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return _sanitize(obj.tolist())
    return obj


def build_report(command: str, config: RunConfig, results: list,
                 warnings: list[str], passed: bool) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": asdict(config),
        "results": _sanitize(results),
        "warnings": list(warnings),
        "pass": bool(passed),
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = [f"# dilation-lab report: {report['command']}", ""]
    lines.append(f"- pass: {str(report['pass']).lower()}")
    lines.append(f"- schema_version: {report['schema_version']}")
    lines.append("")
    lines.append("## config")
    lines.append("")
    for key, value in report["config"].items():
        lines.append(f"- {key}: {value}")
    lines.append("")
    lines.append("## results")
    for res in report["results"]:
        lines.append("")
        lines.append(f"### {res.get('name', res.get('kind', 'result'))}")
        lines.append("")
        for key, value in res.items():
            if key == "assertions":
                lines.append("| assertion | value | bound | pass |")
                lines.append("|---|---|---|---|")
                for a in value:
                    bound = a.get("bound", a.get("expected", ""))
                    lines.append(
                        f"| {a['name']} | {a.get('value')} | {bound} | "
                        f"{str(a['pass']).lower()} |")
            else:
                lines.append(f"- {key}: {value}")
    lines.append("")
    if report["warnings"]:
        lines.append("## warnings")
        lines.append("")
        lines.extend(f"- {w}" for w in report["warnings"])
        lines.append("")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands

def cmd_piece(args, config: RunConfig) -> tuple[dict, int]:
    t = load_tuple_file(args.input)
    result = maximal_commuting_piece(t, tol=1e-8, rank_tol=config.rank_tol)
    warnings = list(result.warnings) + rank_stability_warnings(t, config.rank_tol)
    body = {
        "name": "maximal-commuting-piece",
        "ambient_dim": t.dim,
        "piece_dim": result.subspace.dim,
        "commutator_residual": float(result.residual),
        "piece_matrices": tuple_to_jsonable(result.piece)["matrices"],
    }
    return build_report("piece", config, [body], warnings, True), 0


def cmd_dilate(args, config: RunConfig) -> tuple[dict, int]:
    t = load_tuple_file(args.input)
    method = args.method
    if method == "pure":
        dil = pure_embedding(t, config.degree, tol=max(config.tol, 1e-8),
                             rank_tol=config.rank_tol)
    elif method == "symmetric":
        dil = standard_commuting_dilation_pure(
            t, config.degree, tol=max(config.tol, 1e-8), rank_tol=config.rank_tol)
    elif method == "schaeffer":
        dil = schaeffer_dilation(t, config.degree, tol=config.tol,
                                 rank_tol=config.rank_tol)
    elif method == "cuntz-state":
        if t.dim != 1:
            raise PreconditionError(
                "cuntz-state input must be a tuple of scalars (dim 1)")
        w = [complex(m[0, 0]) for m in t.mats]
        dil = cuntz_state_rep(w, config.degree, tol=config.tol,
                              rank_tol=config.rank_tol)
    else:
        raise ValueError(f"unknown dilation method: {method}")
    residuals = dil.residual_report()
    body = {
        "name": f"dilation-{method}",
        "kind": dil.kind,
        "ambient_dim": dil.ambient_dim,
        "defect_rank": dil.defect_rank,
        "safe_degree": dil.safe_degree,
        "tail_bound": dil.tail_bound,
        "residuals": residuals,
    }
    for key in ("leakage", "orbit_dim", "orbit_full_dim"):
        if key in dil.extras:
            body[key] = dil.extras[key]
    if args.dump_matrices:
        entries = dil.base.n * dil.ambient_dim ** 2
        if entries > config.max_dump_entries:
            raise PreconditionError(
                f"matrix dump of {entries} entries exceeds the limit "
                f"{config.max_dump_entries}; raise --max-dump-entries or "
                f"lower the truncation degree")
        dump = {
            "kind": dil.kind,
            "ambient_dim": dil.ambient_dim,
            "dilation": tuple_to_jsonable(dil.dilation),
            "embed": [[[float(x.real), float(x.imag)] for x in row]
                      for row in dil.embed],
        }
        with open(args.dump_matrices, "w", encoding="utf-8") as fh:
            json.dump(dump, fh, indent=2)
            fh.write("\n")
    return build_report("dilate", config, [body], [], True), 0


def _classify_one(t: OperatorTuple, config: RunConfig) -> dict:
    tol = max(config.tol, 1e-9)
    if is_spherical_unitary(t, tol):
        atoms = spectral_atoms(t, tol=tol, rank_tol=config.rank_tol,
                               seed=config.seed)
        return {
            "mode": "spherical-unitary",
            "atoms": [{"point": [[c.real, c.imag] for c in point],
                       "multiplicity": mult} for point, mult in atoms.atoms],
        }
    if is_row_contraction(t, tol) and opnorm(row_sum(t) - np.eye(t.dim)) <= tol:
        dil = schaeffer_dilation(t, config.degree, tol=config.tol,
                                 rank_tol=config.rank_tol)
        decomp = spherical_decomposition(
            dil.dilation, safe_degree=dil.safe_degree, tol=config.tol,
            rank_tol=config.rank_tol, window=dil.window_subspace())
        body = {
            "mode": "cuntz-dilation",
            "ambient_dim": dil.ambient_dim,
            "piece_dim": decomp.piece.dim,
            "spherical_part_dim": decomp.spherical_part.dim,
            "residual_part_dim": decomp.residual_part.dim,
            "window_note": decomp.residuals["note"],
        }
        if decomp.piece.dim > 0:
            atoms = spectral_atoms(decomp.piece, tol=tol,
                                   rank_tol=config.rank_tol, seed=config.seed)
            body["atoms"] = [{"point": [[c.real, c.imag] for c in point],
                              "multiplicity": mult} for point, mult in atoms.atoms]
        else:
            body["atoms"] = []
            body["note"] = "no spherical part"
        return body
    raise PreconditionError(
        "classification needs a spherical unitary or a row with "
        f"sum T_i T_i* = I (residual {opnorm(row_sum(t) - np.eye(t.dim)):.3e})")


def cmd_classify(args, config: RunConfig) -> tuple[dict, int]:
    inputs = args.input
    if not inputs or len(inputs) > 2:
        raise ValueError("classify takes one or two --input files")
    results = []
    tuples = [load_tuple_file(path) for path in inputs]
    for path, t in zip(inputs, tuples):
        body = _classify_one(t, config)
        body["input"] = os.path.basename(path)
        results.append(body)
    warnings: list[str] = []
    if len(tuples) == 2:
        from .cuntz import SphericalAtoms, equivalent_spherical
        sides = []
        for body, t in zip(results, tuples):
            atoms = tuple((tuple(complex(re, im) for re, im in entry["point"]),
                           entry["multiplicity"]) for entry in body["atoms"])
            sides.append(SphericalAtoms(n=t.n, atoms=atoms))
        verdict = equivalent_spherical(sides[0], sides[1], tol=1e-8)
        results.append({"name": "equivalence",
                        "verdict": "equivalent" if verdict else "inequivalent"})
        if any(not body["atoms"] for body in results[:2]):
            warnings.append("comparison covers spherical parts only; at least "
                            "one input has none")
    return build_report("classify", config, results, warnings, True), 0


def cmd_check(args, config: RunConfig) -> tuple[dict, int]:
    names = list(CHECK_SUITES) if args.suite == "all" else [args.suite]
    reports = run_checks(names, M=config.degree, seed=config.seed,
                         tol=config.tol, rank_tol=config.rank_tol,
                         trials=args.trials)
    passed = all(r["pass"] for r in reports)
    return build_report("check", config, reports, [], passed), (0 if passed else 1)


# ---------------------------------------------------------------------------
# entry point

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dilation-lab",
        description="Dilations, commuting pieces, and classification of "
                    "contractive operator tuples at desk scale.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=5,
                        help="Fock truncation degree (default 5)")
    common.add_argument("--tol", type=float, default=1e-10,
                        help="comparison tolerance (default 1e-10)")
    common.add_argument("--rank-tol", type=float, default=1e-9,
                        help="rank decision tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0,
                        help="random seed (env DILATION_LAB_SEED overrides)")
    common.add_argument("--format", choices=("json", "markdown"),
                        default="json", dest="fmt")
    common.add_argument("--output", default=None,
                        help="write the report here instead of stdout")
    common.add_argument("--max-dump-entries", type=int, default=10 ** 6)
    sub = parser.add_subparsers(dest="command", required=True)
    p_piece = sub.add_parser("piece", parents=[common],
                             help="maximal commuting piece of a tuple")
    p_piece.add_argument("--input", required=True)
    p_dilate = sub.add_parser("dilate", parents=[common],
                              help="construct a dilation")
    p_dilate.add_argument("--input", required=True)
    p_dilate.add_argument("--method", required=True,
                          choices=("pure", "symmetric", "schaeffer", "cuntz-state"))
    p_dilate.add_argument("--dump-matrices", default=None,
                          help="also write the dilation matrices to this file")
    p_classify = sub.add_parser("classify", parents=[common],
                                help="spherical decomposition / equivalence")
    p_classify.add_argument("--input", action="append", required=True,
                            help="tuple file (repeat for equivalence check)")
    p_check = sub.add_parser("check", parents=[common],
                             help="run verification suites")
    p_check.add_argument("suite", choices=CHECK_SUITES + ("all",))
    p_check.add_argument("--trials", type=int, default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        seed = args.seed
        env_seed = os.environ.get("DILATION_LAB_SEED")
        if env_seed is not None:
            seed = int(env_seed)
        config = RunConfig(degree=args.degree, tol=args.tol,
                           rank_tol=args.rank_tol, seed=seed, fmt=args.fmt,
                           max_dump_entries=args.max_dump_entries)
    except ValueError as exc:
        print(f"dilation-lab: invalid configuration: {exc}", file=sys.stderr)
        return 2
    handlers = {"piece": cmd_piece, "dilate": cmd_dilate,
                "classify": cmd_classify, "check": cmd_check}
    try:
        report, code = handlers[args.command](args, config)
    except (ValueError, PreconditionError) as exc:
        print(f"dilation-lab: {exc}", file=sys.stderr)
        return 2
    except DilationLabError as exc:
        print(f"dilation-lab: {exc}", file=sys.stderr)
        return 1
    _emit(render(report, config.fmt), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
