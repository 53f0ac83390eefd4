"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 computation failure.
Every subcommand writes one JSON document to stdout (or ``--output``);
nothing is written when a command fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import geometry, invariants, spectra
from .homotopy import TrackerConfig
from .jsonio import (
    FormatError,
    dumps,
    encode_complex,
    encode_vector,
    load_tensor,
    tensor_to_json,
    unipoly_to_json,
)
from .resultant import ResultantDegeneracyError
from .tensor import (
    Tensor,
    diagonal_tensor,
    is_symmetric,
    mode_transform,
    random_orthogonal,
    random_tensor,
    singular_tensor,
)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = 42
    tol_residual: float = 1e-8
    tol_singular: float = spectra.SINGULAR_RTOL
    samples: int | None = None
    parallel: bool = False
    output: str | None = None

    def __post_init__(self):
        if self.tol_residual <= 0 or self.tol_singular <= 0:
            raise UsageError("tolerances must be positive")
        if self.samples is not None and self.samples < 1:
            raise UsageError("--samples must be positive")

    @property
    def tracker(self) -> TrackerConfig:
        return TrackerConfig(parallel=self.parallel)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return text == "on"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol-residual", type=_positive_float, default=1e-8)
    p.add_argument("--tol-singular", type=_positive_float, default=spectra.SINGULAR_RTOL)
    p.add_argument("--samples", type=int, default=None, help="lambda samples for interpolation")
    p.add_argument("--parallel", type=_on_off, default=False, metavar="{on,off}")
    p.add_argument("--output", "-o", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="etensor", description="Spectral objects of complex tensors.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a tensor JSON file")
    g.add_argument("kind", choices=["random", "symmetric", "diagonal", "singular"])
    g.add_argument("--order", type=int, required=True)
    g.add_argument("--dim", type=int, required=True)
    g.add_argument("--values", default=None, help="comma-separated diagonal values")
    _common(g)

    for name, text in [
        ("det", "tensor determinant"),
        ("charpoly", "E-characteristic polynomial"),
        ("eigen", "eigenvector classes"),
        ("disc-check", "discriminant factorization check (symmetric tensors)"),
        ("invariants", "trace-formula audit (order 3, dim 2)"),
        ("verify", "run every applicable property check"),
    ]:
        p = sub.add_parser(name, help=text)
        p.add_argument("input", help="tensor JSON file")
        _common(p)
        if name == "invariants":
            p.add_argument("--random-pairs", type=int, default=0,
                           help="also audit this many random symmetric pairs")
        if name == "verify":
            p.add_argument("--disc", action="store_true", help="check the discriminant factorization")
            p.add_argument("--orthogonal", action="store_true", help="check orthogonal invariance of chi")
    return parser


# ---------------------------------------------------------------------------
# commands


def cmd_gen(args, cfg: RunConfig) -> dict:
    order, dim = args.order, args.dim
    if order < 3 or dim < 2:
        raise UsageError("need --order >= 3 and --dim >= 2")
    if args.kind == "diagonal":
        if args.values is None:
            raise UsageError("diagonal tensors need --values")
        try:
            values = [complex(v) for v in args.values.split(",")]
        except ValueError:
            raise UsageError(f"bad --values {args.values!r}") from None
        if len(values) != dim:
            raise UsageError(f"--values must list {dim} numbers")
        return tensor_to_json(diagonal_tensor(order, values))
    if args.kind == "singular":
        T, x = singular_tensor(order, dim, cfg.seed)
        out = tensor_to_json(T)
        out["witness"] = encode_vector(x)
        return out
    return tensor_to_json(random_tensor(order, dim, cfg.seed, symmetric=args.kind == "symmetric"))


def cmd_det(T: Tensor, cfg: RunConfig) -> dict:
    return {"det": encode_complex(spectra.determinant(T))}


def cmd_charpoly(T: Tensor, cfg: RunConfig) -> dict:
    cp = spectra.echar_poly(T, samples=cfg.samples, seed=cfg.seed)
    out = unipoly_to_json(cp.poly)
    out.update(degree=cp.degree, degree_expected=cp.degree_expected, parity=cp.parity,
               constant_term=encode_complex(cp.constant_term()), radius=cp.radius, samples=cp.samples)
    return out


def cmd_eigen(T: Tensor, cfg: RunConfig) -> dict:
    report = spectra.eigenpairs(T, cfg.tracker, seed=cfg.seed, singular_rtol=cfg.tol_singular)
    return report.to_json()


def _require_symmetric(T: Tensor) -> None:
    if not is_symmetric(T, geometry.SYMMETRY_CHECK_RTOL):
        raise UsageError("the discriminant check requires a symmetric tensor")


def cmd_disc_check(T: Tensor, cfg: RunConfig) -> dict:
    _require_symmetric(T)
    return geometry.discriminant_report(T, samples=cfg.samples)


def cmd_invariants(T: Tensor, cfg: RunConfig, random_pairs: int = 0) -> dict:
    if T.order != 3 or T.dim != 2:
        raise UsageError("invariants needs an order-3 tensor of dimension 2")
    A, B = invariants.symmetric_slices(T)
    out = {"input": invariants.det_trace_crosscheck(A, B),
           "det": encode_complex(spectra.determinant(T))}
    if random_pairs:
        out["random"] = [invariants.det_trace_crosscheck(*invariants.random_symmetric_pair(cfg.seed + k))
                         for k in range(random_pairs)]
    return out


def _check(name: str, passed: bool, **detail) -> dict:
    return {"name": name, "pass": bool(passed), **detail}


def cmd_verify(T: Tensor, cfg: RunConfig, disc: bool = False, orthogonal: bool = False) -> dict:
    if disc:
        _require_symmetric(T)
    m, n = T.order, T.n
    checks = []
    report = spectra.eigenpairs(T, cfg.tracker, seed=cfg.seed, singular_rtol=cfg.tol_singular)
    det = report.determinant
    scale = spectra.determinant_scale(T)
    checks.append(_check("path_failures", True, value=report.path_failures, informational=True))
    worst = max((c.residual for c in report), default=0.0)
    checks.append(_check("minors_residual", worst <= cfg.tol_residual, max=worst, tol=cfg.tol_residual))
    iso = [c for c in report if c.kind != "zero" and abs(c.xtx) <= 1e-6 * np.linalg.norm(c.rep) ** 2]
    checks.append(_check("isotropy_audit", not iso, isotropic_classes=len(iso)))
    if report.singular:
        checks.append(_check("zero_eigenvalue_class", bool(report.of_kind("zero")),
                             det_relative=abs(det) / scale, classes=len(report.of_kind("zero"))))
    else:
        expected = spectra.eigenvector_count(m, n)
        checks.append(_check("count_formula", report.count == expected and report.path_failures == 0,
                             count=report.count, expected=expected))
        checks.append(_check("e_pair_exists", bool(report.of_kind("E")), e_pairs=len(report.of_kind("E"))))
        checks.append(_check("no_zero_eigenvalue", not report.of_kind("zero")))
        cp = spectra.echar_poly(T, samples=cfg.samples, seed=cfg.seed)
        target = det if m % 2 == 0 else det**2
        err = abs(cp.constant_term() - target) / abs(target)
        checks.append(_check("constant_term", err <= 1e-6, rel_error=err))
        checks.append(_check("charpoly_degree", cp.degree == cp.degree_expected,
                             degree=cp.degree, expected=cp.degree_expected))
        ev = spectra.e_eigenvalues(T, report=report)
        dist = spectra.multiset_distance(ev, spectra.charpoly_roots(cp))
        checks.append(_check("roots_match_eigenvalues", dist <= 1e-6,
                             max_pair_distance=dist if np.isfinite(dist) else -1.0))
        if orthogonal:
            G = random_orthogonal(T.dim, cfg.seed)
            cp2 = spectra.echar_poly(mode_transform(T, G, range(1, m + 1)), samples=cfg.samples, seed=cfg.seed)
            a, b = cp.poly.coeffs, cp2.poly.coeffs
            k = max(a.size, b.size)
            a, b = np.pad(a, (0, k - a.size)), np.pad(b, (0, k - b.size))
            rel = float(np.max(np.abs(a - b)) / np.max(np.abs(a)))
            checks.append(_check("orthogonal_invariance", rel <= 1e-6, rel_error=rel))
        if disc:
            rep = geometry.discriminant_report(T, samples=cfg.samples)
            checks.append(_check(
                "discriminant_proportional", rep["constant_spread"] <= 1e-6,
                measured_constant=rep["measured_constant"], constant_spread=rep["constant_spread"],
                strict_rel_deviation=rep["max_rel_deviation"],
            ))
            sp = [geometry.singular_point_check(T, c) for c in report.of_kind("E")]
            checks.append(_check("e_pairs_are_singular_points", all(sp), checked=len(sp)))
    return {
        "order": m,
        "dim": T.dim,
        "det": encode_complex(det),
        "singular": report.singular,
        "count": report.count,
        "checks": checks,
        "warnings": report.warnings,
        "pass": all(c["pass"] for c in checks),
    }


def _summary(result: dict) -> str:
    lines = []
    for c in result["checks"]:
        tag = "info" if c.get("informational") else ("PASS" if c["pass"] else "FAIL")
        lines.append(f"[{tag}] {c['name']}")
    lines.append("verify: " + ("PASS" if result["pass"] else "FAIL"))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(seed=args.seed, tol_residual=args.tol_residual, tol_singular=args.tol_singular,
                        samples=args.samples, parallel=args.parallel, output=args.output)
        if args.command == "gen":
            result = cmd_gen(args, cfg)
        else:
            T = load_tensor(args.input)
            if args.command == "det":
                result = cmd_det(T, cfg)
            elif args.command == "charpoly":
                result = cmd_charpoly(T, cfg)
            elif args.command == "eigen":
                result = cmd_eigen(T, cfg)
            elif args.command == "disc-check":
                result = cmd_disc_check(T, cfg)
            elif args.command == "invariants":
                result = cmd_invariants(T, cfg, args.random_pairs)
            else:
                result = cmd_verify(T, cfg, disc=args.disc, orthogonal=args.orthogonal)
        text = dumps(result)
    except (UsageError, FormatError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"etensor: error: {exc}", file=sys.stderr)
        return 1
    except (ResultantDegeneracyError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"etensor: computation failed: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    if args.command == "verify":
        print(_summary(result), file=sys.stderr)
        return 0 if result["pass"] else 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
