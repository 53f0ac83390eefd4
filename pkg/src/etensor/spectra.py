"""Determinant, E-characteristic polynomial and eigenvector enumeration of tensors."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .homotopy import (
    TrackerConfig,
    canonical_rep,
    projective_distance,
    solve_projective,
    solve_square,
)
from .polynomial import (
    MultiPoly,
    MultiPolySystem,
    UniPoly,
    circle_nodes,
    interpolate,
    poly_roots,
)
from .resultant import DegreeProfile, ResultantDegeneracyError, build_layout, macaulay_resultant
from .tensor import Tensor, contract, random_tensor

SINGULAR_RTOL = 1e-8
ISOTROPIC_RTOL = 1e-8
CLASS_RADIUS = 1e-6
ODD_COEFF_RTOL = 1e-8


class SingularTensorError(ValueError):
    """The operation needs a nonsingular tensor."""


class ZeroImageError(ValueError):
    """``T x^{m-1} = 0``: ``x`` is an eigenvector of eigenvalue zero."""


class CharPolyError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# counting formulas


def eigenvector_count(m: int, n: int) -> int:
    """Generic number of eigenvector classes, ``((m-1)^{n+1} - 1) / (m-2)``."""
    return ((m - 1) ** (n + 1) - 1) // (m - 2)


def charpoly_degree(m: int, n: int) -> int:
    c = eigenvector_count(m, n)
    return c if m % 2 == 0 else 2 * c


def det_degree(m: int, n: int) -> int:
    """Degree of ``Det`` as a form in the tensor entries: ``(n+1)(m-1)^n``."""
    return (n + 1) * (m - 1) ** n


# ---------------------------------------------------------------------------
# polynomial systems built from a tensor


def tensor_forms(T: Tensor, extra_vars: int = 0) -> list[MultiPoly]:
    """The ``n+1`` forms ``(T x^{m-1})_i``, optionally padded with unused variables."""
    nv = T.dim + extra_vars
    forms = []
    for i in range(T.dim):
        terms: dict = {}
        for idx in itertools.product(range(T.dim), repeat=T.order - 1):
            c = T.data[(i,) + idx]
            if c == 0:
                continue
            e = [0] * nv
            for j in idx:
                e[j] += 1
            e = tuple(e)
            terms[e] = terms.get(e, 0) + c
        forms.append(MultiPoly(nv, terms))
    return forms


def _quadric(nv: int, dim: int) -> MultiPoly:
    """``x^T x`` on the first ``dim`` of ``nv`` variables."""
    return MultiPoly(nv, {tuple(2 * int(j == i) for j in range(nv)): 1.0 for i in range(dim)})


def determinant_system(T: Tensor) -> MultiPolySystem:
    return MultiPolySystem(T.dim, tuple(tensor_forms(T)))


def echar_system(T: Tensor, lam: complex) -> MultiPolySystem:
    """The system whose resultant is the E-characteristic polynomial at ``lam``.

    Even m: ``T x^{m-1} - lam (x^T x)^{(m-2)/2} x`` in ``x``.
    Odd m: ``T x^{m-1} - lam beta^{m-2} x`` and ``x^T x - beta^2`` in ``(x, beta)``.
    """
    m, d = T.order, T.dim
    if m % 2 == 0:
        q = _quadric(d, d) ** ((m - 2) // 2)
        polys = [f - (q * MultiPoly.variable(d, i)).scale(lam) for i, f in enumerate(tensor_forms(T))]
        return MultiPolySystem(d, tuple(polys))
    nv = d + 1
    beta = MultiPoly.variable(nv, d)
    shift = beta ** (m - 2)
    polys = [f - (shift * MultiPoly.variable(nv, i)).scale(lam) for i, f in enumerate(tensor_forms(T, 1))]
    polys.append(_quadric(nv, d) - beta ** 2)
    return MultiPolySystem(nv, tuple(polys))


def fixed_point_system(T: Tensor) -> MultiPolySystem:
    """Affine system ``T x^{m-1} - x = 0``."""
    d = T.dim
    polys = [f - MultiPoly.variable(d, i) for i, f in enumerate(tensor_forms(T))]
    return MultiPolySystem(d, tuple(polys))


# ---------------------------------------------------------------------------
# determinant


def determinant(T: Tensor, seed: int = 0) -> complex:
    """Resultant of the forms ``T x^{m-1}``."""
    sysm = determinant_system(T)
    layout = build_layout(DegreeProfile((T.order - 1,) * T.dim))
    return complex(macaulay_resultant(sysm, layout, seed=seed).value)


@functools.lru_cache(maxsize=None)
def _unit_det_scale(order: int, dim: int) -> float:
    vals = []
    for k in range(9):
        R = random_tensor(order, dim, seed=900_000 + k)
        vals.append(abs(determinant(R.scaled(1.0 / R.norm()))))
    return float(np.median(vals))


def determinant_scale(T: Tensor) -> float:
    """Typical ``|Det|`` of random tensors with the same shape and Frobenius norm.

    Measured once per shape as the median over nine fixed-seed unit-norm
    random tensors, then rescaled by ``||T||^{(n+1)(m-1)^n}``.
    """
    return _unit_det_scale(T.order, T.dim) * T.norm() ** det_degree(T.order, T.n)


def is_singular(T: Tensor, rtol: float = SINGULAR_RTOL, det: complex | None = None) -> bool:
    if T.norm() == 0:
        return True
    det = determinant(T) if det is None else det
    return abs(det) <= rtol * determinant_scale(T)


# ---------------------------------------------------------------------------
# E-characteristic polynomial


@dataclass
class CharPoly:
    poly: UniPoly
    parity: str
    degree_expected: int
    radius: float = 1.0
    samples: int = 0
    odd_residual: float = 0.0

    @property
    def degree(self) -> int:
        return self.poly.degree

    def constant_term(self) -> complex:
        return complex(self.poly.coeffs[0]) if self.poly.coeffs.size else 0j


def charpoly_radius(T: Tensor) -> float:
    """Interpolation radius tied to the tensor norm."""
    return max(1.0, T.norm() / math.sqrt(T.dim))


def echar_poly(T: Tensor, samples: int | None = None, radius: float | None = None,
               seed: int = 0) -> CharPoly:
    """Interpolate ``chi_T`` from resultant evaluations on a circle.

    ``samples`` defaults to ``degree_expected + 3``; the fit allows degree
    ``samples - 1`` so the extra top coefficients come back as (truncated)
    zeros.  For odd m the odd-power coefficients must vanish; they are
    checked against ``1e-8`` of the largest scaled coefficient and zeroed.
    """
    m, n = T.order, T.n
    deg = charpoly_degree(m, n)
    samples = samples or deg + 3
    if samples < deg + 1:
        raise ValueError(f"need at least {deg + 1} samples")
    radius = radius or charpoly_radius(T)
    # a fixed off-axis phase keeps real-symmetric nodes away from special values
    nodes = circle_nodes(samples, radius, phase=0.1234)
    layout = build_layout(DegreeProfile(echar_system(T, 1.0).degrees))
    values = []
    failures = 0
    for k, lam in enumerate(nodes):
        try:
            values.append((lam, macaulay_resultant(echar_system(T, lam), layout, seed=seed + k).value))
        except ResultantDegeneracyError:
            failures += 1
    if len(values) < deg + 1:
        raise CharPolyError(f"{failures} of {samples} resultant samples were degenerate")
    p = interpolate(values, degree=len(values) - 1, radius=radius)
    odd_res = 0.0
    if m % 2 == 1 and p.coeffs.size:
        scaled = p.coeffs * radius ** np.arange(p.coeffs.size)
        top = np.max(np.abs(scaled))
        odd_res = float(np.max(np.abs(scaled[1::2]), initial=0.0) / top) if top else 0.0
        if odd_res > ODD_COEFF_RTOL:
            raise CharPolyError(f"odd-power coefficients of chi are not negligible ({odd_res:.2e})")
        c = np.array(p.coeffs)
        c[1::2] = 0
        p = UniPoly(c)
    return CharPoly(p, "even" if m % 2 == 0 else "odd", deg, radius, samples, odd_res)


# ---------------------------------------------------------------------------
# eigenvectors


@dataclass
class EigenClass:
    rep: np.ndarray
    xtx: complex
    kind: str  # "E", "isotropic" or "zero"
    lambdas: list = field(default_factory=list)
    residual: float = 0.0
    multiplicity: int = 1

    def to_json(self) -> dict:
        return {
            "rep": [[float(z.real), float(z.imag)] for z in self.rep],
            "xtx": [float(self.xtx.real), float(self.xtx.imag)],
            "kind": self.kind,
            "lambdas": [[float(z.real), float(z.imag)] for z in self.lambdas],
            "residual": float(self.residual),
        }


@dataclass
class EigenReport:
    """Eigenvector classes of a tensor plus solver bookkeeping."""

    classes: list
    path_failures: int = 0
    affine_solutions: int = 0
    determinant: complex = 0j
    singular: bool = False
    warnings: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.classes)

    def __len__(self):
        return len(self.classes)

    def __getitem__(self, i):
        return self.classes[i]

    @property
    def count(self) -> int:
        return len(self.classes)

    def of_kind(self, kind: str) -> list:
        return [c for c in self.classes if c.kind == kind]

    def to_json(self) -> dict:
        return {
            "classes": [c.to_json() for c in self.classes],
            "count": self.count,
            "path_failures": self.path_failures,
            "warnings": list(self.warnings),
        }


def minors_residual(T: Tensor, x) -> float:
    """Largest normalized 2x2 minor ``|x_i v_j - x_j v_i| / (||x|| ||v||)``, ``v = T x^{m-1}``."""
    x = np.asarray(x, dtype=complex)
    v = contract(T, x)
    denom = np.linalg.norm(x) * np.linalg.norm(v) + 1e-300
    W = np.outer(x, v) - np.outer(v, x)
    return float(np.max(np.abs(W)) / denom)


def kernel_residual(T: Tensor, x) -> float:
    """``||T x^{m-1}|| / (||T|| ||x||^{m-1})``.

    Used for zero-eigenvalue classes, where the normalized minors are 0/0.
    """
    x = np.asarray(x, dtype=complex)
    denom = max(T.norm(), 1e-300) * np.linalg.norm(x) ** (T.order - 1)
    return float(np.linalg.norm(contract(T, x)) / denom)


def normalized_eigenvalue(T: Tensor, x) -> complex:
    """``lambda`` at the normalization ``x^T x = 1`` (principal square root)."""
    x = np.asarray(x, dtype=complex)
    y = x / np.sqrt(x @ x)
    return complex(y @ contract(T, y))


def _classify(T: Tensor, x, kind: str | None = None, multiplicity: int = 1) -> EigenClass:
    rep = canonical_rep(x)
    xtx = complex(rep @ rep)
    if kind is None:
        kind = "isotropic" if abs(xtx) <= ISOTROPIC_RTOL * np.linalg.norm(rep) ** 2 else "E"
    lambdas = []
    if kind == "E":
        lam = normalized_eigenvalue(T, rep)
        lambdas = [lam] if T.order % 2 == 0 else [lam, -lam]
    residual = kernel_residual(T, rep) if kind == "zero" else minors_residual(T, rep)
    return EigenClass(rep, xtx, kind, lambdas, residual, multiplicity)


def _group_classes(points, radius: float = CLASS_RADIUS) -> list[list[np.ndarray]]:
    groups: list[list[np.ndarray]] = []
    for x in points:
        for g in groups:
            if projective_distance(g[0], x) <= radius:
                g.append(x)
                break
        else:
            groups.append([x])
    return groups


def eigenpairs(T: Tensor, cfg: TrackerConfig | None = None, seed: int = 0,
               singular_rtol: float = SINGULAR_RTOL) -> EigenReport:
    """Enumerate the eigenvector classes of ``T``.

    Nonzero solutions of ``T x^{m-1} = x`` give the classes with nonzero
    eigenvalue (each appears ``m-2`` times, once per ``(m-2)``-th root of
    unity scaling).  When ``|Det(T)|`` is below ``singular_rtol`` of the
    reference scale, the projective solutions of ``T x^{m-1} = 0`` are added
    as zero-eigenvalue classes.
    """
    cfg = cfg or TrackerConfig()
    m = T.order
    det = determinant(T)
    singular = is_singular(T, singular_rtol, det)
    report = EigenReport([], determinant=det, singular=singular)
    if T.norm() == 0:
        report.warnings.append("zero tensor: every vector is an eigenvector of eigenvalue zero")
        return report
    sols = solve_square(fixed_point_system(T), cfg, seed=seed)
    report.path_failures = sols.path_failures
    if sols.nonisolated_warning:
        report.warnings.append("clustered or unpolished endpoints: solution set may not be isolated")
    zero_radius = 1e-6 * T.norm() ** (-1.0 / (m - 2))
    nonzero = [x for x in sols.points if np.linalg.norm(x) > zero_radius]
    report.affine_solutions = len(nonzero)
    for g in _group_classes(nonzero):
        if len(g) != m - 2:
            report.warnings.append(f"class met {len(g)} times among affine solutions, expected {m - 2}")
        report.classes.append(_classify(T, g[0], multiplicity=len(g)))
    if singular:
        zsols = solve_projective(determinant_system(T), cfg=cfg, seed=seed + 7)
        report.path_failures += zsols.path_failures
        for x in zsols.points:
            if any(projective_distance(c.rep, x) <= CLASS_RADIUS for c in report.classes):
                continue
            report.classes.append(_classify(T, x, kind="zero"))
        if not report.of_kind("zero"):
            report.warnings.append("determinant is negligible but no kernel point was found")
    if len(nonzero) != (m - 2) * len([c for c in report.classes if c.kind != "zero"]):
        report.warnings.append("affine solution count is not (m-2) times the nonzero-eigenvalue class count")
    return report


def e_eigenvalues(T: Tensor, cfg: TrackerConfig | None = None, seed: int = 0,
                  report: EigenReport | None = None) -> np.ndarray:
    """E-eigenvalues of a nonsingular tensor, gathered from its E-pair classes."""
    report = report or eigenpairs(T, cfg, seed)
    if report.singular:
        raise SingularTensorError("tensor is singular; use eigenpairs() for its eigenvector classes")
    return np.array([lam for c in report.of_kind("E") for lam in c.lambdas], dtype=complex)


def charpoly_roots(cp: CharPoly) -> np.ndarray:
    if cp.poly.degree < 1:
        return np.zeros(0, dtype=complex)
    return poly_roots(cp.poly)


def multiset_distance(a, b) -> float:
    """Largest pairing distance under the optimal one-to-one matching.

    Infinite when the sizes differ.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size != b.size:
        return math.inf
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def projective_map_step(T: Tensor, x) -> np.ndarray:
    """Canonical representative of ``[T x^{m-1}]``."""
    x = np.asarray(x, dtype=complex)
    v = contract(T, x)
    if np.linalg.norm(v) <= 1e-14 * max(T.norm(), 1e-300) * np.linalg.norm(x) ** (T.order - 1):
        raise ZeroImageError("T x^{m-1} = 0; x is an eigenvector of eigenvalue zero")
    return canonical_rep(v)
