"""Total-degree homotopy continuation for small square polynomial systems.

Paths of ``H(x, s) = (1 - s) * gamma * G(x) + s * F(x)`` are tracked from the
roots of ``G = {x_i^{d_i} - 1}`` at ``s = 0`` to ``s = 1`` with an Euler
predictor and a Newton corrector.  All paths of a batch advance together as
numpy arrays, each with its own step size.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .polynomial import CompiledSystem, MultiPoly, MultiPolySystem

log = logging.getLogger(__name__)

DIVERGENCE_NORM = 1e8
# endpoint Jacobians with smaller relative singular value count as singular
SINGULAR_JACOBIAN_RTOL = 1e-8


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-7
    corrector_tol: float = 1e-10
    max_corrections: int = 3
    polish_tol: float = 1e-12
    dedup_radius: float = 1e-6
    max_polish_steps: int = 50
    parallel: bool = False
    workers: int = 4

    def __post_init__(self):
        for name in ("initial_step", "min_step", "corrector_tol", "polish_tol", "dedup_radius"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.min_step >= self.initial_step:
            raise ValueError("min_step must be smaller than initial_step")


@dataclass
class SolutionSet:
    points: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    path_failures: int = 0
    merged: int = 0
    paths: int = 0
    nonisolated_warning: bool = False

    def __len__(self):
        return len(self.points)

    def as_array(self, nvars: int | None = None) -> np.ndarray:
        if not self.points:
            return np.zeros((0, nvars or 0), dtype=complex)
        return np.array(self.points)


def start_solutions(degrees) -> np.ndarray:
    roots = [np.exp(2j * np.pi * np.arange(d) / d) for d in degrees]
    return np.array(list(itertools.product(*roots)), dtype=complex).reshape(-1, len(degrees))


@dataclass
class _PathResult:
    x: np.ndarray
    ok: np.ndarray
    residual: np.ndarray
    polished: np.ndarray
    singular: np.ndarray


class _Tracker:
    def __init__(self, system: MultiPolySystem, cfg: TrackerConfig, gamma: complex):
        self.F = CompiledSystem(system)
        self.deg = np.array(system.degrees)
        self.cfg = cfg
        self.gamma = gamma

    def _G(self, X):
        return X ** self.deg - 1.0

    def _Gx(self, X):
        d = self.deg
        P, n = X.shape
        J = np.zeros((P, n, n), dtype=complex)
        J[:, np.arange(n), np.arange(n)] = d * X ** (d - 1)
        return J

    def _H(self, X, s):
        F, JF = self.F.eval_and_jacobian(X)
        G = self._G(X)
        JG = self._Gx(X)
        a = ((1 - s) * self.gamma)[:, None]
        b = s[:, None]
        H = a * G + b * F
        Hx = a[:, :, None] * JG + b[:, :, None] * JF
        Hs = F - self.gamma * G
        return H, Hx, Hs

    def track(self, X0: np.ndarray) -> _PathResult:
        cfg = self.cfg
        P = X0.shape[0]
        X = X0.copy()
        s = np.zeros(P)
        h = np.full(P, cfg.initial_step)
        streak = np.zeros(P, dtype=int)
        active = np.ones(P, dtype=bool)
        failed = np.zeros(P, dtype=bool)
        while active.any():
            idx = np.flatnonzero(active)
            x, si = X[idx], s[idx]
            hi = np.minimum(h[idx], 1.0 - si)
            _, Hx, Hs = self._H(x, si)
            dxds = _batched_solve(Hx, -Hs)
            xp = x + hi[:, None] * dxds
            snew = si + hi
            # snap values that rounding pushed to within 1 ulp of the end
            snew[1.0 - snew < 1e-15] = 1.0
            conv = np.zeros(idx.size, dtype=bool)
            bad = ~np.all(np.isfinite(xp), axis=1)
            for _ in range(cfg.max_corrections):
                H, Hx, _ = self._H(xp, snew)
                dx = _batched_solve(Hx, -H)
                bad |= ~np.all(np.isfinite(dx), axis=1)
                dx[bad] = 0
                xp = xp + dx
                step = np.linalg.norm(dx, axis=1)
                conv = step <= cfg.corrector_tol * (1.0 + np.linalg.norm(xp, axis=1))
                if conv[~bad].all():
                    break
            acc = conv & ~bad
            # accepted
            a_idx = idx[acc]
            X[a_idx] = xp[acc]
            s[a_idx] = snew[acc]
            streak[a_idx] += 1
            grow = a_idx[streak[a_idx] >= 3]
            h[grow] = np.minimum(2 * h[grow], cfg.initial_step)
            streak[grow] = 0
            # rejected
            r_idx = idx[~acc]
            h[r_idx] /= 2
            streak[r_idx] = 0
            too_small = r_idx[h[r_idx] < cfg.min_step]
            diverged = a_idx[np.linalg.norm(X[a_idx], axis=1) > DIVERGENCE_NORM]
            failed[too_small] = True
            failed[diverged] = True
            active[too_small] = False
            active[diverged] = False
            active[a_idx[s[a_idx] >= 1.0]] = False
        ok = ~failed
        polished = np.zeros(P, dtype=bool)
        resid = np.full(P, np.inf)
        singular = np.zeros(P, dtype=bool)
        if ok.any():
            Xp, res, pol = self.polish(X[ok])
            X[ok] = Xp
            resid[ok] = res
            polished[ok] = pol
            singular[ok] = self.singular_endpoints(Xp)
        return _PathResult(X, ok, resid, polished, singular)

    def singular_endpoints(self, X):
        _, J = self.F.eval_and_jacobian(X)
        sv = np.linalg.svd(J, compute_uv=False)
        return sv[:, -1] <= SINGULAR_JACOBIAN_RTOL * np.maximum(sv[:, 0], 1e-300)

    def residual(self, X):
        return self.F.relative_residual(X)

    def polish(self, X):
        """Newton on the target system until the relative residual reaches ``polish_tol``."""
        cfg = self.cfg
        X = X.copy()
        res = self.residual(X)
        for _ in range(cfg.max_polish_steps):
            todo = res > cfg.polish_tol
            if not todo.any():
                break
            F, J = self.F.eval_and_jacobian(X[todo])
            dx = _batched_solve(J, -F)
            finite = np.all(np.isfinite(dx), axis=1)
            Xn = X[todo] + np.where(finite[:, None], dx, 0)
            rn = self.residual(Xn)
            better = rn < res[todo]
            sel = np.flatnonzero(todo)[better]
            if sel.size == 0:
                break
            X[sel] = Xn[better]
            res[sel] = rn[better]
        return X, res, res <= cfg.polish_tol


def _batched_solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full_like(b, np.nan)
        for k in range(A.shape[0]):
            try:
                out[k] = np.linalg.solve(A[k], b[k])
            except np.linalg.LinAlgError:
                pass
        return out


def _gamma(seed: int) -> complex:
    rng = np.random.default_rng(seed)
    return complex(np.exp(2j * np.pi * rng.random()))


def solve_square(system: MultiPolySystem, cfg: TrackerConfig | None = None, seed: int = 0) -> SolutionSet:
    """Track all ``prod(d_i)`` total-degree paths of a square system.

    Failed paths (step below ``min_step`` or divergence) are counted in
    ``path_failures``; endpoints closer than ``dedup_radius`` (relative) are
    merged and counted in ``merged``.  ``nonisolated_warning`` is set when
    merged, unpolishable or singular-Jacobian endpoints suggest singular or
    positive-dimensional solution sets.
    """
    cfg = cfg or TrackerConfig()
    if not system.is_square():
        raise ValueError(f"square system required: {len(system)} equations in {system.nvars} unknowns")
    if min(system.degrees) < 1:
        raise ValueError("every polynomial must have degree >= 1")
    tracker = _Tracker(system, cfg, _gamma(seed))
    X0 = start_solutions(system.degrees)
    if cfg.parallel and X0.shape[0] > 1:
        chunks = np.array_split(np.arange(X0.shape[0]), min(cfg.workers, X0.shape[0]))
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(lambda ix: tracker.track(X0[ix]), chunks))
        result = _PathResult(
            np.concatenate([p.x for p in parts]),
            np.concatenate([p.ok for p in parts]),
            np.concatenate([p.residual for p in parts]),
            np.concatenate([p.polished for p in parts]),
            np.concatenate([p.singular for p in parts]),
        )
    else:
        result = tracker.track(X0)
    return _collect(result, cfg, X0.shape[0])


def _collect(result: _PathResult, cfg: TrackerConfig, paths: int) -> SolutionSet:
    out = SolutionSet(paths=paths)
    # endpoints whose residual never reached the corrector tolerance are not solutions
    good = result.ok & (result.residual <= cfg.corrector_tol)
    out.path_failures = int(np.sum(~good))
    if np.any(result.ok & ~result.polished) or np.any(good & result.singular):
        out.nonisolated_warning = True
    for k in np.flatnonzero(good):
        x = result.x[k]
        dup = False
        for y in out.points:
            if np.linalg.norm(x - y) <= cfg.dedup_radius * max(1.0, np.linalg.norm(y)):
                dup = True
                break
        if dup:
            out.merged += 1
            continue
        out.points.append(x)
        out.residuals.append(float(result.residual[k]))
    if out.merged:
        out.nonisolated_warning = True
    if out.path_failures:
        log.debug("%d of %d paths failed", out.path_failures, paths)
    return out


def canonical_rep(x) -> np.ndarray:
    """Projective representative with largest-modulus coordinate equal to 1.

    Ties (within a relative ``1e-9``) go to the lowest index.
    """
    x = np.asarray(x, dtype=complex)
    mags = np.abs(x)
    top = mags.max()
    if top == 0:
        raise ValueError("the zero vector has no projective class")
    k = int(np.flatnonzero(mags >= top * (1 - 1e-9))[0])
    return x / x[k]


def projective_distance(x, y) -> float:
    """Sine of the angle between the complex lines spanned by ``x`` and ``y``."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return float(np.linalg.norm(x - np.vdot(y, x) * y))


def solve_projective(system: MultiPolySystem, chart=None, cfg: TrackerConfig | None = None,
                     seed: int = 0, residual_tol: float = 1e-8) -> SolutionSet:
    """Nonzero projective common zeros of homogeneous forms in ``nvars`` variables.

    ``nvars - 1`` random linear combinations of the input forms together with
    the affine chart ``chart . x = 1`` make a square system; its solutions
    are kept when the residual of the full original system is at most
    ``residual_tol`` and are returned as canonical representatives.
    """
    cfg = cfg or TrackerConfig()
    n1 = system.nvars
    if len(system) < 1 or len(system) > n1:
        raise ValueError("need between 1 and nvars homogeneous forms")
    rng = np.random.default_rng(seed)
    if chart is None:
        chart = rng.standard_normal(n1) + 1j * rng.standard_normal(n1)
    chart = np.asarray(chart, dtype=complex)
    mix = rng.standard_normal((n1 - 1, len(system))) + 1j * rng.standard_normal((n1 - 1, len(system)))
    combos = []
    for row in mix:
        f = MultiPoly(n1, {})
        for c, g in zip(row, system):
            f = f + g.scale(c)
        combos.append(f)
    terms = {tuple(int(i == j) for i in range(n1)): chart[j] for j in range(n1)}
    terms[(0,) * n1] = -1.0
    square = MultiPolySystem(n1, tuple(combos) + (MultiPoly(n1, terms),))
    sols = solve_square(square, cfg, seed=seed + 1)
    full = CompiledSystem(system)
    out = SolutionSet(paths=sols.paths, path_failures=sols.path_failures, merged=sols.merged,
                      nonisolated_warning=sols.nonisolated_warning)
    for x in sols.points:
        if not np.any(x):
            continue
        u = x / np.linalg.norm(x)
        res = float(full.relative_residual(u[None], floor=1e-300)[0])
        if res <= residual_tol:
            rep = canonical_rep(x)
            if any(projective_distance(rep, y) <= cfg.dedup_radius for y in out.points):
                out.merged += 1
                continue
            out.points.append(rep)
            out.residuals.append(res)
    return out
