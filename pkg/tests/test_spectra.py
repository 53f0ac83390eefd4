import json

import numpy as np
import pytest

from etensor.homotopy import canonical_rep, projective_distance
from etensor.polynomial import UniPoly
from etensor.resultant import sylvester_resultant
from etensor.spectra import (
    SingularTensorError,
    ZeroImageError,
    charpoly_degree,
    charpoly_roots,
    det_degree,
    determinant,
    determinant_scale,
    e_eigenvalues,
    echar_poly,
    eigenpairs,
    eigenvector_count,
    is_singular,
    minors_residual,
    multiset_distance,
    projective_map_step,
)
from etensor.tensor import Tensor, mode_transform, random_orthogonal, random_tensor, singular_tensor

R5 = 2 / np.sqrt(5)
DIAG_LAMBDAS = [1, -1, 2, -2, R5, -R5]


def test_count_formulas():
    assert [eigenvector_count(m, n) for m, n in [(3, 1), (4, 1), (3, 2), (4, 2)]] == [3, 4, 7, 13]
    assert [charpoly_degree(m, n) for m, n in [(4, 1), (3, 1), (3, 2)]] == [4, 6, 14]
    assert det_degree(3, 1) == 4 and det_degree(4, 2) == 27


def test_determinant_diagonal_matches_sylvester(diag12):
    # Tx^2 = (x0^2, 2 x1^2)
    oracle = sylvester_resultant(UniPoly([1]), 2, UniPoly([0, 0, 2]), 2)
    assert abs(determinant(diag12) - oracle) <= 1e-8
    assert abs(determinant(diag12) - 4) <= 1e-8


def test_determinant_zero_tensor():
    assert determinant(Tensor.zeros(3, 2)) == 0


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3)])
def test_determinant_of_singular_tensor(m, d):
    T, _ = singular_tensor(m, d, seed=4)
    assert abs(determinant(T)) <= 1e-6 * determinant_scale(T)
    assert is_singular(T)


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3)])
def test_determinant_homogeneity(m, d):
    T = random_tensor(m, d, seed=1)
    alpha = 0.7 - 0.4j
    lhs = determinant(T.scaled(alpha))
    rhs = alpha ** det_degree(m, d - 1) * determinant(T)
    assert abs(lhs - rhs) <= 1e-8 * abs(rhs)


def test_charpoly_diagonal(diag12):
    cp = echar_poly(diag12)
    assert cp.parity == "odd" and cp.degree == cp.degree_expected == 6
    assert abs(cp.constant_term() - 16) <= 1e-6
    assert multiset_distance(charpoly_roots(cp), DIAG_LAMBDAS) <= 1e-8
    assert not np.any(cp.poly.coeffs[1::2])


@pytest.mark.parametrize("m,d", [(4, 2), (3, 2), (3, 3)])
@pytest.mark.parametrize("seed", [0, 1])
def test_charpoly_constant_term_and_degree(m, d, seed):
    T = random_tensor(m, d, seed)
    cp = echar_poly(T)
    det = determinant(T)
    target = det if m % 2 == 0 else det**2
    assert abs(cp.constant_term() - target) <= 1e-6 * abs(target)
    assert cp.degree == charpoly_degree(m, d - 1)


def test_charpoly_sample_count_validated(diag12):
    with pytest.raises(ValueError):
        echar_poly(diag12, samples=3)


@pytest.mark.parametrize("m", [3, 4])
def test_orthogonal_invariance(m):
    T = random_tensor(m, 2, seed=5)
    G = random_orthogonal(2, seed=6)
    a = echar_poly(T).poly
    b = echar_poly(mode_transform(T, G, range(1, m + 1))).poly
    assert a.allclose(b, 1e-6)


def test_eigenpairs_diagonal(diag12):
    rep = eigenpairs(diag12)
    assert rep.count == 3 and rep.path_failures == 0 and not rep.warnings
    assert all(c.kind == "E" for c in rep)
    expect = [[1, 0], [0, 1], [1, 0.5]]
    for e in expect:
        assert min(projective_distance(c.rep, e) for c in rep) <= 1e-10
    by_rep = {tuple(np.round(c.rep.real, 6)): sorted(np.real(c.lambdas)) for c in rep}
    assert np.allclose(by_rep[(1.0, 0.0)], [-1, 1])
    assert np.allclose(by_rep[(0.0, 1.0)], [-2, 2])
    assert np.allclose(by_rep[(1.0, 0.5)], [-R5, R5])


def test_e_eigenvalues_diagonal(diag12):
    assert multiset_distance(e_eigenvalues(diag12), DIAG_LAMBDAS) <= 1e-8


def test_random_order3_dim3_has_seven_classes():
    rep = eigenpairs(random_tensor(3, 3, seed=2))
    assert rep.count == 7 and rep.path_failures == 0


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3)])
def test_singular_tensor_has_zero_class(m, d):
    T, x = singular_tensor(m, d, seed=3)
    rep = eigenpairs(T)
    zero = rep.of_kind("zero")
    assert rep.singular and len(zero) >= 1
    assert min(projective_distance(c.rep, x) for c in zero) <= 1e-6
    assert all(c.residual <= 1e-8 for c in rep)
    with pytest.raises(SingularTensorError):
        e_eigenvalues(T, report=rep)


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3), (4, 3)])
def test_eigenclass_invariants(m, d):
    T = random_tensor(m, d, seed=8)
    rep = eigenpairs(T)
    assert not rep.singular and not rep.of_kind("zero")
    for c in rep:
        assert c.residual <= 1e-8
        assert minors_residual(T, c.rep) <= 1e-8
        assert np.max(np.abs(c.rep)) == pytest.approx(1.0)
        assert (c.kind == "isotropic") == (abs(c.xtx) <= 1e-8 * np.linalg.norm(c.rep) ** 2)
        if c.kind == "E" and m % 2 == 1:
            assert c.lambdas[1] == -c.lambdas[0]
        for alpha in (2, 1j, -1):
            assert np.allclose(canonical_rep(alpha * c.rep), c.rep, atol=1e-12)


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3), (4, 3)])
def test_affine_scaling_bookkeeping(m, d):
    rep = eigenpairs(random_tensor(m, d, seed=9))
    assert rep.path_failures == 0
    nonzero_classes = [c for c in rep if c.kind != "zero"]
    assert rep.affine_solutions == (m - 2) * len(nonzero_classes)
    assert all(c.multiplicity == m - 2 for c in nonzero_classes)


def test_no_isotropic_eigenvectors_generically():
    worst = np.inf
    total = 0
    for m, d in [(3, 2), (3, 3), (4, 2)]:
        for seed in range(17):
            for c in eigenpairs(random_tensor(m, d, 1000 + seed)):
                worst = min(worst, abs(c.xtx) / np.linalg.norm(c.rep) ** 2)
                total += 1
    assert total > 0 and worst > 1e-6


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2)])
def test_roots_match_eigenvalues(m, d):
    T = random_tensor(m, d, seed=21)
    assert multiset_distance(e_eigenvalues(T), charpoly_roots(echar_poly(T))) <= 1e-6


def test_minors_residual_examples(diag12):
    assert minors_residual(diag12, [1, 0]) == 0
    assert minors_residual(diag12, [1, 1]) == pytest.approx(1 / np.sqrt(10))


def test_projective_map_step(diag12):
    assert np.allclose(projective_map_step(diag12, [1, 0]), [1, 0])
    assert np.allclose(projective_map_step(diag12, [1, 0.5]), [1, 0.5])
    T = np.zeros((2, 2, 2))
    T[0, 0, 0] = 1
    with pytest.raises(ZeroImageError):
        projective_map_step(Tensor(T), [0, 1])


def test_fixed_points_of_map_are_eigenclasses():
    T = random_tensor(3, 2, seed=4)
    for c in eigenpairs(T):
        assert projective_distance(projective_map_step(T, c.rep), c.rep) <= 1e-8


def test_eigen_report_json_shape(diag12):
    out = json.loads(json.dumps(eigenpairs(diag12).to_json()))
    assert set(out) == {"classes", "count", "path_failures", "warnings"}
    c = out["classes"][0]
    assert set(c) == {"rep", "xtx", "kind", "lambdas", "residual"}
    assert c["kind"] in ("E", "isotropic", "zero")
    assert len(c["rep"]) == 2 and len(c["rep"][0]) == 2


def test_zero_tensor_report():
    rep = eigenpairs(Tensor.zeros(3, 2))
    assert rep.singular and rep.warnings


def test_multiset_distance():
    assert multiset_distance([1, 2], [2, 1]) == 0
    assert multiset_distance([1], [1, 2]) == np.inf
