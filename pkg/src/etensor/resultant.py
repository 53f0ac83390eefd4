"""Multivariate resultants of square homogeneous systems via Macaulay matrices.

The resultant is normalized so that ``Res(x_0^{d_0}, ..., x_n^{d_n}) = 1``.
It is evaluated as Macaulay's quotient ``det(M) / det(M')``: ``M`` is the
matrix of the shifted polynomials in degree ``D = sum(d_i - 1) + 1`` and
``M'`` its minor on the non-reduced monomials.
"""

from __future__ import annotations

import functools
import itertools
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .polynomial import MultiPoly, MultiPolySystem, UniPoly

MAX_SUBSTITUTIONS = 5
DEGENERACY_RTOL = 1e-12


class ResultantDegeneracyError(ArithmeticError):
    """Raised when ``det(M')`` stays negligible after every substitution."""


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        if len(degrees) < 2:
            raise ValueError("a resultant needs at least two polynomials")
        if min(degrees) < 1:
            raise ValueError("degrees must be positive")
        object.__setattr__(self, "degrees", degrees)

    @property
    def nvars(self) -> int:
        return len(self.degrees)

    @property
    def total_degree(self) -> int:
        return sum(d - 1 for d in self.degrees) + 1


def homogeneous_monomials(nvars: int, degree: int) -> list[tuple]:
    """Exponent tuples of the given total degree, lexicographically descending."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for j in combo:
            e[j] += 1
        out.append(tuple(e))
    return out


@dataclass(frozen=True)
class MacaulayLayout:
    """Row/column index structure of the Macaulay matrix for one profile.

    Row ``r`` holds ``x^{shift[r]} * f_{owner[r]}`` and is paired with column
    ``r``; the monomial of column ``r`` is divisible by ``x_i^{d_i}`` for
    ``i = owner[r]`` and for no smaller ``i``.
    """

    profile: DegreeProfile
    monomials: tuple
    index: dict
    owner: np.ndarray
    shifts: tuple
    nonreduced: np.ndarray

    @property
    def size(self) -> int:
        return len(self.monomials)


@functools.lru_cache(maxsize=None)
def build_layout(profile: DegreeProfile) -> MacaulayLayout:
    D = profile.total_degree
    d = profile.degrees
    monos = homogeneous_monomials(profile.nvars, D)
    owner, shifts, nonreduced = [], [], []
    for e in monos:
        divisible = [i for i in range(profile.nvars) if e[i] >= d[i]]
        i = divisible[0]
        s = list(e)
        s[i] -= d[i]
        owner.append(i)
        shifts.append(tuple(s))
        if len(divisible) > 1:
            nonreduced.append(len(owner) - 1)
    return MacaulayLayout(
        profile=profile,
        monomials=tuple(monos),
        index={e: k for k, e in enumerate(monos)},
        owner=np.array(owner),
        shifts=tuple(shifts),
        nonreduced=np.array(nonreduced, dtype=int),
    )


def profile_of(system: MultiPolySystem) -> DegreeProfile:
    return DegreeProfile(tuple(system.degrees))


def macaulay_matrix(system: MultiPolySystem, layout: MacaulayLayout) -> np.ndarray:
    N = layout.size
    M = np.zeros((N, N), dtype=complex)
    idx = layout.index
    for r in range(N):
        f = system[layout.owner[r]]
        s = layout.shifts[r]
        for e, c in f.terms.items():
            M[r, idx[tuple(a + b for a, b in zip(s, e))]] = c
    return M


@dataclass(frozen=True)
class ResultantValue:
    """Resultant value with the smallest-pivot condition estimate of ``M'``.

    ``condition`` is ``min|pivot| / max|entry|`` of the reduced minor (1.0
    when the minor is empty); ``substitutions`` counts the random
    determinant-one changes of variables that were needed.
    """

    value: complex
    condition: float
    substitutions: int = 0

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


def _lu_det(A: np.ndarray) -> tuple[complex, float]:
    """Determinant via pivoted LU, plus ``min|pivot| / max|a_ij|``."""
    if A.size == 0:
        return 1.0 + 0j, 1.0
    with warnings.catch_warnings():
        # exactly singular minors are expected and handled by the caller
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    diag = np.diag(lu)
    sign = (-1) ** int(np.sum(piv != np.arange(piv.size)))
    scale = np.max(np.abs(A))
    cond = float(np.min(np.abs(diag)) / scale) if scale > 0 else 0.0
    return complex(sign * np.prod(diag)), cond


def _random_special_linear(nvars: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.standard_normal((nvars, nvars)) + 1j * rng.standard_normal((nvars, nvars))
    G, _ = np.linalg.qr(G)  # unitary, well conditioned
    det = np.linalg.det(G)
    return G / det ** (1.0 / nvars)


def _check_system(system: MultiPolySystem, layout: MacaulayLayout) -> None:
    prof = layout.profile
    if len(system) != prof.nvars or system.nvars != prof.nvars:
        raise ValueError(f"system must have {prof.nvars} polynomials in {prof.nvars} variables")
    for k, (f, d) in enumerate(zip(system, prof.degrees)):
        if any(sum(e) != d for e in f.terms):
            raise ValueError(f"polynomial {k} is not homogeneous of degree {d}")


def macaulay_resultant(system: MultiPolySystem, layout: MacaulayLayout | None = None,
                       seed: int = 0) -> ResultantValue:
    """Resultant of ``nvars`` homogeneous forms in ``nvars`` variables.

    If ``det(M')`` is negligible (smallest pivot below ``1e-12`` of the
    matrix scale), the variables are changed by a random determinant-one
    matrix, which leaves the resultant unchanged, and the evaluation is
    retried up to five times before :class:`ResultantDegeneracyError`.
    """
    if layout is None:
        layout = build_layout(profile_of(system))
    _check_system(system, layout)
    if any(f.is_zero() for f in system):
        # the remaining forms always share a projective zero
        return ResultantValue(0j, 1.0, 0)
    rng = np.random.default_rng(seed)
    current = system
    for attempt in range(MAX_SUBSTITUTIONS + 1):
        M = macaulay_matrix(current, layout)
        nr = layout.nonreduced
        det_sub, cond = _lu_det(M[np.ix_(nr, nr)])
        if nr.size == 0 or cond >= DEGENERACY_RTOL:
            det_full, _ = _lu_det(M)
            return ResultantValue(det_full / det_sub, cond, attempt)
        current = system.substitute_linear(_random_special_linear(system.nvars, rng))
    raise ResultantDegeneracyError(
        f"reduced Macaulay minor stayed singular after {MAX_SUBSTITUTIONS} substitutions"
    )


def resultant(system: MultiPolySystem, seed: int = 0) -> complex:
    """Convenience wrapper returning only the value."""
    return macaulay_resultant(system, seed=seed).value


def sylvester_matrix(f: UniPoly, df: int, g: UniPoly, dg: int) -> np.ndarray:
    """Sylvester matrix of two binary forms of formal degrees ``df``, ``dg``.

    ``f`` stores the coefficient of ``x0^{df-k} x1^k`` at position ``k``.  Rows are
    ``x0^{dg-1-k} x1^k f`` followed by ``x0^{df-1-k} x1^k g``; columns run over
    ``x0^{D-j} x1^j``.
    """
    if df == 0 and dg == 0:
        raise ValueError("both formal degrees are zero")
    fc = np.pad(f.coeffs, (0, df + 1 - f.coeffs.size)) if f.degree <= df else None
    gc = np.pad(g.coeffs, (0, dg + 1 - g.coeffs.size)) if g.degree <= dg else None
    if fc is None or gc is None:
        raise ValueError("formal degree below actual degree")
    N = df + dg
    S = np.zeros((N, N), dtype=complex)
    for k in range(dg):
        S[k, k: k + df + 1] = fc
    for k in range(df):
        S[dg + k, k: k + dg + 1] = gc
    return S


def sylvester_resultant(f: UniPoly, df: int, g: UniPoly, dg: int) -> complex:
    """Resultant of binary forms ``f`` (degree ``df``) and ``g`` (degree ``dg``).

    Coefficient ``k`` of each :class:`UniPoly` multiplies ``x0^{d-k} x1^k``.
    """
    return complex(np.linalg.det(sylvester_matrix(f, df, g, dg)))


def binary_form(p: UniPoly, degree: int) -> MultiPoly:
    """Binary form with coefficient ``p.coeffs[k]`` on ``x0^{degree-k} x1^k``."""
    return MultiPoly(2, {(degree - k, k): c for k, c in enumerate(p.coeffs)})
