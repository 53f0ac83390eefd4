import math

import numpy as np
import pytest

from etensor.homotopy import (
    TrackerConfig,
    canonical_rep,
    projective_distance,
    solve_projective,
    solve_square,
    start_solutions,
)
from etensor.polynomial import MultiPoly, MultiPolySystem
from etensor.spectra import fixed_point_system, tensor_forms
from etensor.tensor import diagonal_tensor, random_tensor, singular_tensor

from oracles import match_points, random_affine_pair, sylvester_elimination_roots


def test_config_validation():
    with pytest.raises(ValueError):
        TrackerConfig(min_step=0.1, initial_step=0.05)
    with pytest.raises(ValueError):
        TrackerConfig(corrector_tol=0)


def test_start_solutions_count():
    assert start_solutions([2, 3]).shape == (6, 2)
    assert np.allclose(start_solutions([3])[:, 0] ** 3, 1)


def test_univariate():
    sols = solve_square(MultiPolySystem(1, (MultiPoly(1, {(2,): 1, (0,): -1}),)))
    assert match_points(sols.as_array(), [[1], [-1]]) < 1e-10


def test_decoupled_grid():
    sysm = MultiPolySystem(2, (MultiPoly(2, {(2, 0): 1, (0, 0): -1}), MultiPoly(2, {(0, 3): 1, (0, 0): -1})))
    sols = solve_square(sysm)
    grid = [[a, b] for a in (1, -1) for b in np.exp(2j * np.pi * np.arange(3) / 3)]
    assert sols.paths == 6 and sols.path_failures == 0
    assert match_points(sols.as_array(), grid) < 1e-10


def test_diagonal_fixed_point_system():
    # x0^2 - x0 = 0 and 2 x1^2 - x1 = 0
    sols = solve_square(fixed_point_system(diagonal_tensor(3, [1, 2])))
    assert match_points(sols.as_array(), [[0, 0], [1, 0], [0, 0.5], [1, 0.5]]) < 1e-10


def test_residuals_after_polish():
    sols = solve_square(fixed_point_system(random_tensor(4, 3, seed=2)))
    assert max(sols.residuals) <= 1e-10


def test_bezout_bookkeeping():
    for seed in range(5):
        sysm = fixed_point_system(random_tensor(3, 3, seed))
        sols = solve_square(sysm, seed=seed)
        assert sols.paths == math.prod(sysm.degrees) == 8
        assert len(sols) + sols.path_failures + sols.merged == sols.paths


def test_serial_determinism():
    sysm = fixed_point_system(random_tensor(4, 2, seed=11))
    a = solve_square(sysm, seed=3)
    b = solve_square(sysm, seed=3)
    assert np.array_equal(a.as_array(), b.as_array())


def test_parallel_matches_serial():
    sysm = fixed_point_system(random_tensor(4, 3, seed=12))
    a = solve_square(sysm, seed=3)
    b = solve_square(sysm, TrackerConfig(parallel=True, workers=3), seed=3)
    assert match_points(a.as_array(), b.as_array()) <= 1e-6


def test_nonisolated_solutions_flagged():
    # x0 (x0 + x1 - 1) = 0, x1 (x0 + x1 - 1) = 0 has the line x0 + x1 = 1
    line = MultiPoly(2, {(1, 0): 1, (0, 1): 1, (0, 0): -1})
    sysm = MultiPolySystem(2, (MultiPoly.variable(2, 0) * line, MultiPoly.variable(2, 1) * line))
    sols = solve_square(sysm)
    assert sols.nonisolated_warning
    assert len(sols) + sols.path_failures + sols.merged == 4


@pytest.mark.parametrize("seed", range(20))
def test_sylvester_oracle_equivalence(seed):
    sysm = random_affine_pair(seed)
    _, pts = sylvester_elimination_roots(sysm)
    sols = solve_square(sysm, seed=seed)
    assert sols.paths == math.prod(sysm.degrees)
    assert len(sols) + sols.path_failures + sols.merged == sols.paths
    assert match_points(sols.as_array(), pts) <= 1e-6


def test_canonical_rep():
    assert np.allclose(canonical_rep([2, 1]), [1, 0.5])
    assert np.allclose(canonical_rep([1j, -1j]), [1, -1])
    with pytest.raises(ValueError):
        canonical_rep([0, 0])


def test_projective_distance():
    assert projective_distance([1, 2], [2j, 4j]) < 1e-15
    assert projective_distance([1, 0], [0, 1]) == pytest.approx(1)


def test_projective_planted_kernel():
    T, x = singular_tensor(3, 2, seed=0)
    sols = solve_projective(MultiPolySystem(2, tuple(tensor_forms(T))), seed=1)
    assert min(projective_distance(p, x) for p in sols.points) <= 1e-6


def test_projective_diagonal_empty():
    sols = solve_projective(MultiPolySystem(2, tuple(tensor_forms(diagonal_tensor(3, [1, 2])))))
    assert len(sols) == 0


def test_projective_single_form():
    sols = solve_projective(MultiPolySystem(2, (MultiPoly(2, {(2, 0): 1, (0, 2): 1}),)))
    assert match_points(sols.as_array(), [[1, 1j], [1, -1j]]) < 1e-8
