"""Dense complex tensors: storage, contraction, slicing and test-tensor generators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class Tensor:
    """Order-m, dimension-(n+1) complex hypermatrix.

    ``data`` has shape ``(dim,) * order``; flattening it in C order gives the
    row-major lexicographic entry list used by the JSON format.
    """

    data: np.ndarray
    symmetric_hint: bool = False
    order: int = field(init=False)
    dim: int = field(init=False)

    def __post_init__(self):
        arr = np.array(self.data, dtype=complex)
        if arr.ndim < 3:
            raise ValueError(f"tensor order must be >= 3, got {arr.ndim}")
        if len(set(arr.shape)) != 1 or arr.shape[0] < 2:
            raise ValueError(f"tensor must be cubical with dim >= 2, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "order", arr.ndim)
        object.__setattr__(self, "dim", arr.shape[0])

    @classmethod
    def from_entries(cls, order: int, dim: int, entries, symmetric: bool = False) -> "Tensor":
        flat = np.asarray(entries, dtype=complex).ravel()
        if flat.size != dim**order:
            raise ValueError(f"expected {dim ** order} entries for order={order}, dim={dim}; got {flat.size}")
        return cls(flat.reshape((dim,) * order), symmetric_hint=symmetric)

    @classmethod
    def zeros(cls, order: int, dim: int) -> "Tensor":
        return cls(np.zeros((dim,) * order, dtype=complex), symmetric_hint=True)

    @property
    def entries(self) -> np.ndarray:
        return self.data.ravel()

    @property
    def n(self) -> int:
        """Projective dimension (``dim - 1``)."""
        return self.dim - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def scaled(self, alpha: complex) -> "Tensor":
        return Tensor(alpha * self.data, symmetric_hint=self.symmetric_hint)

    def __add__(self, other: "Tensor") -> "Tensor":
        if self.data.shape != other.data.shape:
            raise ValueError("tensor shapes differ")
        return Tensor(self.data + other.data, symmetric_hint=self.symmetric_hint and other.symmetric_hint)

    def __repr__(self):
        return f"Tensor(order={self.order}, dim={self.dim}, symmetric_hint={self.symmetric_hint})"


def _as_vector(T: Tensor, x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.shape != (T.dim,):
        raise ValueError(f"vector of length {T.dim} expected, got shape {x.shape}")
    return x


def contract(T: Tensor, x) -> np.ndarray:
    """Return ``T x^{m-1}``, i.e. contract every index but the first with ``x``."""
    x = _as_vector(T, x)
    out = T.data
    for _ in range(T.order - 1):
        out = out @ x
    return out


def apply_form(T: Tensor, x) -> complex:
    """Degree-m form ``x^T (T x^{m-1})``."""
    x = _as_vector(T, x)
    return complex(x @ contract(T, x))


def symmetrize(T: Tensor) -> Tensor:
    """Average ``T`` over all permutations of its indices.

    Each index orbit gets one value written to all of its positions, so the
    result is exactly symmetric and an already-symmetric input comes back
    unchanged.
    """
    out = np.empty_like(T.data)
    for key in itertools.combinations_with_replacement(range(T.dim), T.order):
        positions = set(itertools.permutations(key))
        vals = [T.data[p] for p in sorted(positions)]
        v = vals[0] if all(w == vals[0] for w in vals) else sum(vals) / len(vals)
        for p in positions:
            out[p] = v
    return Tensor(out, symmetric_hint=True)


def is_symmetric(T: Tensor, rtol: float = SYMMETRY_RTOL) -> bool:
    scale = max(T.norm(), 1e-300)
    for p in itertools.permutations(range(T.order)):
        if np.linalg.norm(np.transpose(T.data, p) - T.data) > rtol * scale:
            return False
    return True


def mode_transform(T: Tensor, G, modes) -> Tensor:
    """Apply the matrix ``G`` on each listed mode (1-based).

    For mode k the result is ``sum_p G[i_k, p] * T[..., p, ...]``; with
    ``modes = (2, 3)`` on an order-3 tensor this is the simultaneous
    conjugation ``A_i -> G A_i G^T`` of the slice matrices.
    """
    G = np.asarray(G, dtype=complex)
    if G.shape != (T.dim, T.dim):
        raise ValueError(f"G must be {T.dim}x{T.dim}, got {G.shape}")
    modes = sorted(set(modes))
    if not modes:
        return T
    if modes[0] < 1 or modes[-1] > T.order:
        raise ValueError(f"modes must lie in 1..{T.order}")
    out = T.data
    for k in modes:
        out = np.moveaxis(np.tensordot(G, out, axes=(1, k - 1)), 0, k - 1)
    all_modes = len(modes) == T.order
    return Tensor(out, symmetric_hint=T.symmetric_hint and all_modes)


def slice_matrices(T: Tensor) -> list[np.ndarray]:
    """Matrices ``A_i`` with ``(T x^2)_i = x^T A_i x`` (order-3 tensors only)."""
    if T.order != 3:
        raise ValueError(f"slice matrices need an order-3 tensor, got order {T.order}")
    return [np.array(T.data[i]) for i in range(T.dim)]


def diagonal_tensor(order: int, values) -> Tensor:
    values = np.asarray(values, dtype=complex)
    dim = values.size
    data = np.zeros((dim,) * order, dtype=complex)
    for i, v in enumerate(values):
        data[(i,) * order] = v
    return Tensor(data, symmetric_hint=True)


def _complex_normal(rng: np.random.Generator, size) -> np.ndarray:
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def random_tensor(order: int, dim: int, seed: int, symmetric: bool = False) -> Tensor:
    """Tensor with independent standard normal real and imaginary parts.

    The draw is fully determined by ``seed``.
    """
    if order < 3 or dim < 2:
        raise ValueError("need order >= 3 and dim >= 2")
    rng = np.random.default_rng(seed)
    T = Tensor(_complex_normal(rng, (dim,) * order))
    return symmetrize(T) if symmetric else T


def singular_tensor(order: int, dim: int, seed: int) -> tuple[Tensor, np.ndarray]:
    """Random tensor with a planted nonzero kernel point ``x*``: ``T x*^{m-1} = 0``.

    A rank-one correction ``v ⊗ w^{⊗(m-1)} / (w^T x*)^{m-1}`` with
    ``v = T0 x*^{m-1}`` is subtracted from a random ``T0``.
    """
    if order < 3 or dim < 2:
        raise ValueError("need order >= 3 and dim >= 2")
    rng = np.random.default_rng(seed)
    T0 = Tensor(_complex_normal(rng, (dim,) * order))
    x = _complex_normal(rng, dim)
    while True:
        w = _complex_normal(rng, dim)
        if abs(w @ x) >= 1e-8 * np.linalg.norm(w) * np.linalg.norm(x):
            break
    v = contract(T0, x)
    corr = v
    for _ in range(order - 1):
        corr = np.multiply.outer(corr, w)
    T = Tensor(T0.data - corr / (w @ x) ** (order - 1))
    return T, x


def random_orthogonal(dim: int, seed: int) -> np.ndarray:
    """Haar-random real orthogonal matrix with determinant +1."""
    rng = np.random.default_rng(seed)
    Q, R = np.linalg.qr(rng.standard_normal((dim, dim)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q
