"""Congruence action on order-3 tensors and the 2x2 trace formula for Det.

The trace formula is evaluated exactly as displayed for a pair of symmetric
2x2 slices ``[A, B]`` and audited against the resultant determinant under
three ways of reading ``(A, B)`` as slices of a tensor.  Disagreement is
reported, never corrected.
"""

from __future__ import annotations

import numpy as np

from .spectra import determinant
from .tensor import Tensor, mode_transform, slice_matrices

CONVENTIONS = ("first", "middle", "last")


def congruence_action(G, T: Tensor, atol: float = 1e-10) -> Tensor:
    """``(G.T)_ijk = sum_pq t_ipq g_jp g_kq`` for an orthogonal ``G``."""
    if T.order != 3:
        raise ValueError("the congruence action is defined for order-3 tensors")
    G = np.asarray(G, dtype=complex)
    if G.shape != (T.dim, T.dim) or not np.allclose(G.T @ G, np.eye(T.dim), atol=atol, rtol=0):
        raise ValueError("G must be orthogonal (G^T G = I)")
    return mode_transform(T, G, (2, 3))


def trace_invariants(mats) -> dict:
    """``Tr(A_i)`` and ``Tr(A_i A_j)`` for ``i <= j``."""
    out = {}
    for i, A in enumerate(mats):
        out[(i,)] = complex(np.trace(A))
        for j in range(i, len(mats)):
            out[(i, j)] = complex(np.trace(A @ mats[j]))
    return out


def _check_pair(A, B) -> tuple[np.ndarray, np.ndarray]:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    for M in (A, B):
        if M.shape != (2, 2):
            raise ValueError("A and B must be 2x2")
        if np.max(np.abs(M - M.T)) > 1e-12 * max(1.0, np.max(np.abs(M))):
            raise ValueError("A and B must be symmetric")
    return A, B


def det_trace_formula(A, B) -> complex:
    """``[Tr A Tr B - Tr AB + (Tr A)^2 - Tr A^2] [Tr B^2 - (Tr B)^2]``."""
    A, B = _check_pair(A, B)
    trA, trB = np.trace(A), np.trace(B)
    first = trA * trB - np.trace(A @ B) + trA**2 - np.trace(A @ A)
    second = np.trace(B @ B) - trB**2
    return complex(first * second)


def tensor_from_slices(A, B, convention: str = "first") -> Tensor:
    """Order-3, dim-2 tensor whose slices along one index are ``A`` and ``B``.

    ``first``: ``t_ijk = S_i[j, k]``; ``middle``: ``t_jik = S_i[j, k]``;
    ``last``: ``t_jki = S_i[j, k]``.
    """
    S = np.stack([np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)])
    if convention == "first":
        data = S
    elif convention == "middle":
        data = np.transpose(S, (1, 0, 2))
    elif convention == "last":
        data = np.transpose(S, (1, 2, 0))
    else:
        raise ValueError(f"unknown slot convention {convention!r}")
    return Tensor(data)


def det_trace_crosscheck(A, B, conventions=CONVENTIONS) -> dict:
    """Formula value next to the resultant determinant for each slot convention."""
    A, B = _check_pair(A, B)
    formula = det_trace_formula(A, B)
    rows = {}
    for conv in conventions:
        oracle = determinant(tensor_from_slices(A, B, conv))
        dev = abs(formula - oracle)
        scale = max(abs(formula), abs(oracle))
        rows[conv] = {
            "oracle": [oracle.real, oracle.imag],
            "abs_deviation": dev,
            "rel_deviation": dev / scale if scale > 0 else 0.0,
        }
    return {
        "A": [[[z.real, z.imag] for z in row] for row in A],
        "B": [[[z.real, z.imag] for z in row] for row in B],
        "formula": [formula.real, formula.imag],
        "conventions": rows,
    }


def symmetric_slices(T: Tensor) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric parts of the two first-index slices of an order-3, dim-2 tensor.

    ``x^T A x`` only sees the symmetric part, so ``Det`` is unchanged.
    """
    if T.order != 3 or T.dim != 2:
        raise ValueError("trace formula needs an order-3 tensor of dimension 2")
    A, B = slice_matrices(T)
    return (A + A.T) / 2, (B + B.T) / 2


def random_symmetric_pair(seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(2):
        M = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        out.append((M + M.T) / 2)
    return out[0], out[1]
