"""The parameterized hypersurface of a symmetric tensor and its discriminant.

For a symmetric tensor ``T`` and a parameter ``lam``::

    p(x)    = (1/m) x^T T x^{m-1} - (lam/2) x^T x - (1/m - 1/2) lam
    q(x, t) = (1/m) x^T T x^{m-1} - t^{m-2} (lam/2) x^T x - t^m (1/m - 1/2) lam

The discriminant of ``p`` is evaluated directly as the resultant of the
derivative system of ``q`` and compared with the factorization
``lam^{(m-1)^{n+1}} Det^{m-3} chi`` (odd m) or ``... chi^2`` (even m).
"""

from __future__ import annotations

import numpy as np

from .polynomial import MultiPoly, MultiPolySystem, UniPoly, poly_eval
from .resultant import DegreeProfile, build_layout, macaulay_resultant
from .spectra import EigenClass, determinant, echar_poly, tensor_forms
from .tensor import Tensor, apply_form, contract, is_symmetric

SYMMETRY_CHECK_RTOL = 1e-10
SINGULAR_POINT_TOL = 1e-8


class NotSymmetricError(ValueError):
    pass


def require_symmetric(T: Tensor) -> None:
    if not is_symmetric(T, SYMMETRY_CHECK_RTOL):
        raise NotSymmetricError("this operation requires a symmetric tensor")


def p_value(T: Tensor, lam: complex, x) -> complex:
    x = np.asarray(x, dtype=complex)
    m = T.order
    return apply_form(T, x) / m - lam / 2 * (x @ x) - (1 / m - 0.5) * lam


def p_value_and_grad(T: Tensor, lam: complex, x) -> tuple[complex, np.ndarray]:
    """Value of ``p`` and its gradient ``T x^{m-1} - lam x`` (exact for symmetric T)."""
    require_symmetric(T)
    x = np.asarray(x, dtype=complex)
    return p_value(T, lam, x), contract(T, x) - lam * x


def q_value(T: Tensor, lam: complex, x, t: complex) -> complex:
    x = np.asarray(x, dtype=complex)
    m = T.order
    return apply_form(T, x) / m - t ** (m - 2) * lam / 2 * (x @ x) - t**m * (1 / m - 0.5) * lam


def q_gradient(T: Tensor, lam: complex, x, t: complex) -> np.ndarray:
    """``(dq/dx, dq/dt)`` from the calculus, for a symmetric tensor."""
    x = np.asarray(x, dtype=complex)
    m = T.order
    gx = contract(T, x) - lam * t ** (m - 2) * x
    gt = -(m - 2) / 2 * lam * t ** (m - 3) * ((x @ x) - t**2)
    return np.append(gx, gt)


def gradient_system(T: Tensor, lam: complex) -> MultiPolySystem:
    """Derivative system of ``q`` in the variables ``(x_0, ..., x_n, t)``.

    ``T x^{m-1} - lam t^{m-2} x`` and ``((m-2)/2) t^{m-3} lam (x^T x - t^2)``,
    every polynomial homogeneous of degree ``m - 1``.
    """
    require_symmetric(T)
    m, d = T.order, T.dim
    nv = d + 1
    t = MultiPoly.variable(nv, d)
    tpow = t ** (m - 2)
    polys = [f - (tpow * MultiPoly.variable(nv, i)).scale(lam) for i, f in enumerate(tensor_forms(T, 1))]
    quad = MultiPoly(nv, {tuple(2 * int(j == i) for j in range(nv)): 1.0 for i in range(d)}) - t**2
    polys.append((t ** (m - 3) * quad).scale((m - 2) / 2 * lam))
    return MultiPolySystem(nv, tuple(polys))


def discriminant_closed_form(T: Tensor, chi: UniPoly | None = None, det: complex | None = None) -> UniPoly:
    """``lam^{(m-1)^{n+1}} Det^{m-3} chi`` for odd m, with ``chi^2`` for even m."""
    m, n = T.order, T.n
    chi = echar_poly(T).poly if chi is None else chi
    det = determinant(T) if det is None else det
    factor = chi if m % 2 == 1 else chi * chi
    return UniPoly.monomial((m - 1) ** (n + 1), det ** (m - 3)) * factor


def discriminant_direct_sample(T: Tensor, lam: complex, seed: int = 0) -> complex:
    """Resultant of :func:`gradient_system` at a nonzero ``lam``."""
    if lam == 0:
        raise ValueError("the derivative system degenerates at lam = 0")
    sysm = gradient_system(T, lam)
    layout = build_layout(DegreeProfile((T.order - 1,) * (T.dim + 1)))
    return complex(macaulay_resultant(sysm, layout, seed=seed).value)


def normalization_constant(m: int, n: int) -> float:
    """Factor the ``(m-2)/2`` coefficient of the last derivative contributes.

    Scaling one polynomial by ``a`` scales the resultant by ``a`` to the product
    of the other degrees, here ``(m-1)^{n+1}``.
    """
    return ((m - 2) / 2) ** ((m - 1) ** (n + 1))


def discriminant_report(T: Tensor, lambdas=None, samples: int | None = None) -> dict:
    """Compare direct discriminant samples with the closed-form factorization.

    The report carries the closed-form coefficients, every direct sample,
    the per-sample ratio ``direct / closed``, the maximal relative deviation
    with and without the ``(m-2)/2`` normalization constant, and the measured
    constant (mean ratio).
    """
    require_symmetric(T)
    m, n = T.order, T.n
    chi = echar_poly(T)
    closed = discriminant_closed_form(T, chi.poly, determinant(T))
    if lambdas is None:
        count = samples or closed.degree + 3
        lambdas = chi.radius * np.exp(1j * (0.377 + 2 * np.pi * np.arange(count) / count))
    lambdas = np.asarray(lambdas, dtype=complex)
    direct = np.array([discriminant_direct_sample(T, lam, seed=k) for k, lam in enumerate(lambdas)])
    closed_vals = poly_eval(closed, lambdas)
    ratio = direct / closed_vals
    const = normalization_constant(m, n)
    dev_raw = np.abs(direct - closed_vals) / np.abs(closed_vals)
    dev_norm = np.abs(direct - const * closed_vals) / np.abs(const * closed_vals)
    return {
        "order": m,
        "dim": T.dim,
        "closed_form": [[float(c.real), float(c.imag)] for c in closed.coeffs],
        "closed_degree": closed.degree,
        "lambdas": [[float(z.real), float(z.imag)] for z in lambdas],
        "direct": [[float(z.real), float(z.imag)] for z in direct],
        "closed_values": [[float(z.real), float(z.imag)] for z in closed_vals],
        "measured_constant": [float(np.mean(ratio).real), float(np.mean(ratio).imag)],
        "constant_spread": float(np.max(np.abs(ratio - np.mean(ratio))) / abs(np.mean(ratio))),
        "predicted_constant": const,
        "max_rel_deviation": float(dev_raw.max()),
        "max_rel_deviation_normalized": float(dev_norm.max()),
    }


def singular_point_check(T: Tensor, eig: EigenClass, tol: float = SINGULAR_POINT_TOL) -> bool:
    """Whether an E-eigenvector is a singular point of ``p`` at its eigenvalue.

    The class representative is normalized to ``x^T x = 1``; ``|p|`` and
    ``||grad p||`` (relative to ``||T||``) must both be below ``tol``.
    """
    require_symmetric(T)
    if eig.kind != "E":
        return False
    x = eig.rep / np.sqrt(eig.rep @ eig.rep)
    lam = x @ contract(T, x)
    return point_is_singular(T, lam, x, tol)


def point_is_singular(T: Tensor, lam: complex, x, tol: float = SINGULAR_POINT_TOL) -> bool:
    x = np.asarray(x, dtype=complex)
    val, grad = p_value_and_grad(T, lam, x)
    scale = max(1.0, T.norm()) * max(1.0, np.linalg.norm(x)) ** (T.order - 1)
    return bool(abs(val) <= tol * scale and np.linalg.norm(grad) <= tol * scale)
