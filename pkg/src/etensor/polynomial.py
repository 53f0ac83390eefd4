"""Univariate and sparse multivariate complex polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

# Relative threshold below which interpolated coefficients are dropped.
TRUNCATION_RTOL = 1e-9
NEWTON_MAX_STEPS = 100


class UniPoly:
    """Dense univariate polynomial, coefficients in ascending degree.

    The zero polynomial has an empty coefficient array and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex).ravel()
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def __call__(self, z):
        return poly_eval(self, z)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        return poly_add(self, other)

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return poly_mul(self, other)
        return poly_scale(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly([1.0])
        for _ in range(k):
            out = poly_mul(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs.shape == other.coeffs.shape and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self):
        return f"UniPoly({self.coeffs.tolist()})"

    def allclose(self, other: "UniPoly", rtol: float = 1e-9) -> bool:
        a, b = self.coeffs, other.coeffs
        k = max(a.size, b.size)
        a = np.pad(a, (0, k - a.size))
        b = np.pad(b, (0, k - b.size))
        scale = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0), 1e-300)
        return bool(np.all(np.abs(a - b) <= rtol * scale))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "UniPoly":
        out = cls([lead])
        for r in roots:
            out = poly_mul(out, cls([-r, 1.0]))
        return out

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "UniPoly":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs)


def poly_eval(p: UniPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in p.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


def poly_add(p: UniPoly, q: UniPoly) -> UniPoly:
    k = max(p.coeffs.size, q.coeffs.size)
    return UniPoly(np.pad(p.coeffs, (0, k - p.coeffs.size)) + np.pad(q.coeffs, (0, k - q.coeffs.size)))


def poly_mul(p: UniPoly, q: UniPoly) -> UniPoly:
    if p.is_zero() or q.is_zero():
        return UniPoly()
    return UniPoly(np.convolve(p.coeffs, q.coeffs))


def poly_scale(p: UniPoly, alpha: complex) -> UniPoly:
    return UniPoly(p.coeffs * complex(alpha))


def poly_derivative(p: UniPoly) -> UniPoly:
    if p.degree < 1:
        return UniPoly()
    return UniPoly(p.coeffs[1:] * np.arange(1, p.coeffs.size))


def _coefficient_scale(p: UniPoly, z: complex) -> float:
    return float(np.sum(np.abs(p.coeffs) * np.abs(z) ** np.arange(p.coeffs.size)))


def poly_roots(p: UniPoly, polish: bool = True) -> np.ndarray:
    """All complex roots with multiplicity.

    Companion-matrix eigenvalues, each followed by at most 100 Newton steps.
    Newton keeps the best iterate, so a root that does not converge is
    returned with the residual it achieved rather than dropped.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no well-defined roots")
    if p.degree < 1:
        raise ValueError("a constant polynomial has no roots")
    c = p.coeffs
    # np.roots builds the companion matrix from descending coefficients
    roots = np.roots(c[::-1]).astype(complex)
    if not polish:
        return roots
    dp = poly_derivative(p)
    out = np.empty_like(roots)
    for k, z in enumerate(roots):
        out[k] = _newton_polish(p, dp, z)
    return out


def _newton_polish(p: UniPoly, dp: UniPoly, z: complex, rtol: float = 1e-10) -> complex:
    best, best_res = z, abs(poly_eval(p, z))
    for _ in range(NEWTON_MAX_STEPS):
        fz = poly_eval(p, z)
        if abs(fz) <= 1e-2 * rtol * max(_coefficient_scale(p, z), 1e-300):
            break
        dz = poly_eval(dp, z)
        if dz == 0:
            break
        z = z - fz / dz
        res = abs(poly_eval(p, z))
        if res < best_res:
            best, best_res = z, res
        elif res > 10 * best_res:
            break
    return best


def poly_root_residual(p: UniPoly, z: complex) -> float:
    """``|p(z)|`` relative to ``sum |c_k| |z|^k``."""
    return abs(poly_eval(p, z)) / max(_coefficient_scale(p, z), 1e-300)


def circle_nodes(count: int, radius: float = 1.0, phase: float = 0.0) -> np.ndarray:
    return radius * np.exp(1j * (phase + 2 * np.pi * np.arange(count) / count))


def interpolate(samples, degree: int | None = None, radius: float = 1.0) -> UniPoly:
    """Least-squares polynomial through ``(z, value)`` samples.

    The fit is done in the scaled variable ``z / radius`` so that nodes on the
    circle of that radius give a well-conditioned Vandermonde system.
    Coefficients of the scaled fit below ``1e-9 * max`` are set to zero.
    ``degree`` defaults to ``len(samples) - 1``.
    """
    z = np.array([s[0] for s in samples], dtype=complex)
    v = np.array([s[1] for s in samples], dtype=complex)
    if degree is None:
        degree = z.size - 1
    if z.size < degree + 1:
        raise ValueError(f"need at least {degree + 1} samples, got {z.size}")
    if np.unique(np.round(z, 14)).size != z.size:
        raise ValueError("duplicate interpolation nodes")
    V = np.vander(z / radius, degree + 1, increasing=True)
    a, _, rank, _ = np.linalg.lstsq(V, v, rcond=None)
    if rank < degree + 1:
        raise ValueError("rank-deficient interpolation system")
    a = truncate_small(a)
    return UniPoly(a / radius ** np.arange(degree + 1))


def truncate_small(a: np.ndarray, rtol: float = TRUNCATION_RTOL) -> np.ndarray:
    a = np.array(a, dtype=complex)
    top = np.max(np.abs(a), initial=0.0)
    a[np.abs(a) < rtol * top] = 0
    return a


# ---------------------------------------------------------------------------
# multivariate


@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Sparse polynomial ``sum c_e x^e`` in ``nvars`` variables.

    ``terms`` maps exponent tuples to nonzero coefficients.
    """

    nvars: int
    terms: Mapping[tuple, complex]

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = tuple(int(k) for k in e)
            if len(e) != self.nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for {self.nvars} variables")
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c != 0})

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, x) -> complex:
        return multipoly_eval(self, x)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + other.scale(-1)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.constant(self.nvars, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, alpha: complex) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: alpha * c for e, c in self.terms.items()})

    def coefficient(self, exponent) -> complex:
        return self.terms.get(tuple(exponent), 0j)

    def derivative(self, j: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[j] > 0:
                d = list(e)
                d[j] -= 1
                out[tuple(d)] = c * e[j]
        return MultiPoly(self.nvars, out)

    def substitute_linear(self, G) -> "MultiPoly":
        """Return ``x -> f(G x)``."""
        G = np.asarray(G, dtype=complex)
        images = [MultiPoly(self.nvars, {_unit(self.nvars, k): G[j, k] for k in range(self.nvars)})
                  for j in range(self.nvars)]
        out = MultiPoly(self.nvars, {})
        for e, c in self.terms.items():
            term = MultiPoly.constant(self.nvars, c)
            for j, k in enumerate(e):
                if k:
                    term = term * images[j] ** k
            out = out + term
        return out

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    @classmethod
    def constant(cls, nvars: int, c: complex) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, j: int, c: complex = 1.0) -> "MultiPoly":
        return cls(nvars, {_unit(nvars, j): c})

    def __repr__(self):
        return f"MultiPoly(nvars={self.nvars}, terms={self.terms!r})"


def _unit(n: int, j: int) -> tuple:
    e = [0] * n
    e[j] = 1
    return tuple(e)


def multipoly_eval(f: MultiPoly, x) -> complex:
    x = np.asarray(x, dtype=complex)
    if x.shape != (f.nvars,):
        raise ValueError(f"point of length {f.nvars} expected, got shape {x.shape}")
    total = 0j
    for e, c in f.terms.items():
        total += c * np.prod(x ** np.array(e))
    return complex(total)


@dataclass(frozen=True, eq=False)
class MultiPolySystem:
    nvars: int
    polys: tuple

    def __post_init__(self):
        polys = tuple(self.polys)
        for f in polys:
            if f.nvars != self.nvars:
                raise ValueError("all polynomials must share nvars")
        object.__setattr__(self, "polys", polys)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    @property
    def degrees(self) -> list[int]:
        return [f.degree for f in self.polys]

    def is_square(self) -> bool:
        return len(self.polys) == self.nvars

    def evaluate(self, x) -> np.ndarray:
        return np.array([multipoly_eval(f, x) for f in self.polys])

    def substitute_linear(self, G) -> "MultiPolySystem":
        return MultiPolySystem(self.nvars, tuple(f.substitute_linear(G) for f in self.polys))


class CompiledSystem:
    """Vectorized evaluator of a system and its Jacobian at a batch of points."""

    def __init__(self, system: MultiPolySystem):
        self.nvars = system.nvars
        self.npolys = len(system)
        monos = sorted({e for f in system for e in f.terms})
        index = {e: k for k, e in enumerate(monos)}
        self.exps = np.array(monos, dtype=int).reshape(len(monos), self.nvars)
        self.coef = np.zeros((self.npolys, len(monos)), dtype=complex)
        for i, f in enumerate(system):
            for e, c in f.terms.items():
                self.coef[i, index[e]] = c
        self.maxdeg = int(self.exps.max(initial=0))
        self.abscoef = np.abs(self.coef)

    def _powers(self, X: np.ndarray) -> np.ndarray:
        # (P, nvars, maxdeg+1)
        return X[:, :, None] ** np.arange(self.maxdeg + 1)

    def _monomials(self, pw: np.ndarray, exps: np.ndarray) -> np.ndarray:
        cols = np.arange(self.nvars)
        return np.prod(pw[:, cols[None, :], exps], axis=2)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        mon = self._monomials(self._powers(X), self.exps)
        return mon @ self.coef.T

    def eval_and_jacobian(self, X: np.ndarray):
        X = np.atleast_2d(X)
        pw = self._powers(X)
        mon = self._monomials(pw, self.exps)
        F = mon @ self.coef.T
        J = np.empty((X.shape[0], self.npolys, self.nvars), dtype=complex)
        for j in range(self.nvars):
            ej = self.exps[:, j]
            dexps = self.exps.copy()
            dexps[:, j] = np.maximum(ej - 1, 0)
            dmon = self._monomials(pw, dexps) * ej
            J[:, :, j] = dmon @ self.coef.T
        return F, J

    def scale(self, X: np.ndarray, floor: float = 1.0) -> np.ndarray:
        """Per-point residual scale: ``max(floor, max_i sum_k |c_ik x^e_k|)``."""
        X = np.atleast_2d(X)
        mon = np.abs(self._monomials(self._powers(X), self.exps))
        return np.maximum(floor, (mon @ self.abscoef.T).max(axis=1))

    def relative_residual(self, X: np.ndarray, floor: float = 1.0) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.max(np.abs(self(X)), axis=1, initial=0.0) / self.scale(X, floor)
