import numpy as np
import pytest

from etensor.geometry import (
    NotSymmetricError,
    discriminant_closed_form,
    discriminant_direct_sample,
    discriminant_report,
    gradient_system,
    normalization_constant,
    p_value,
    p_value_and_grad,
    point_is_singular,
    q_gradient,
    q_value,
    singular_point_check,
)
from etensor.polynomial import MultiPoly, UniPoly
from etensor.spectra import determinant, echar_poly, eigenpairs
from etensor.tensor import diagonal_tensor, random_tensor


def sym(m, d, seed):
    return random_tensor(m, d, seed, symmetric=True)


def test_p_at_axis_eigenpair(diag12):
    val, grad = p_value_and_grad(diag12, 1.0, [1, 0])
    assert abs(val) < 1e-15 and np.linalg.norm(grad) < 1e-15


def test_p_at_origin_lambda_zero(diag12):
    val, grad = p_value_and_grad(diag12, 0.0, [0, 0])
    assert val == 0 and not np.any(grad)


def test_non_symmetric_rejected():
    with pytest.raises(NotSymmetricError):
        p_value_and_grad(random_tensor(3, 2, seed=0), 1.0, [1, 0])
    with pytest.raises(NotSymmetricError):
        gradient_system(random_tensor(3, 2, seed=0), 1.0)


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3)])
def test_p_gradient_finite_differences(m, d):
    T = sym(m, d, 1)
    lam = 0.3 + 0.8j
    x = np.random.default_rng(2).standard_normal(d)
    _, g = p_value_and_grad(T, lam, x)
    h = 1e-5
    fd = np.array([(p_value(T, lam, x + h * e) - p_value(T, lam, x - h * e)) / (2 * h) for e in np.eye(d)])
    assert np.linalg.norm(fd - g) <= 1e-5 * np.linalg.norm(g)


def test_gradient_system_example():
    T = diagonal_tensor(3, [1, 1])
    sysm = gradient_system(T, 1.0)
    assert sysm.nvars == 3 and sysm.degrees == [2, 2, 2]
    expect = [
        MultiPoly(3, {(2, 0, 0): 1, (1, 0, 1): -1}),
        MultiPoly(3, {(0, 2, 0): 1, (0, 1, 1): -1}),
        MultiPoly(3, {(2, 0, 0): 0.5, (0, 2, 0): 0.5, (0, 0, 2): -0.5}),
    ]
    for f, g in zip(sysm, expect):
        assert f.terms == pytest.approx(g.terms)


def test_gradient_system_lambda_zero():
    assert gradient_system(sym(3, 2, 0), 0.0)[-1].is_zero()


@pytest.mark.parametrize("m", [3, 4])
def test_gradient_system_vanishes_at_lifted_eigenpairs(m):
    T = sym(m, 2, 4)
    sysm = gradient_system(T, 1.0)
    for c in eigenpairs(T).of_kind("E"):
        x = c.rep / np.sqrt(c.rep @ c.rep)
        lam = c.lambdas[0]
        vals = gradient_system(T, lam).evaluate(np.append(x, 1.0))
        assert np.max(np.abs(vals)) <= 1e-8 * max(1.0, T.norm())
    assert sysm.degrees == [m - 1] * 3


@pytest.mark.parametrize("m,d", [(3, 2), (4, 2), (3, 3)])
def test_euler_identity(m, d):
    T = sym(m, d, 5)
    rng = np.random.default_rng(6)
    lam = 0.4 - 1.1j
    for _ in range(100):
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        t = complex(rng.standard_normal(), rng.standard_normal())
        g = q_gradient(T, lam, x, t)
        lhs = m * q_value(T, lam, x, t)
        rhs = x @ g[:-1] + t * g[-1]
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


def test_q_gradient_matches_finite_differences():
    T = sym(4, 2, 7)
    lam, x, t = 0.9 + 0.2j, np.array([0.3, -0.7]), 1.3
    g = q_gradient(T, lam, x, t)
    h = 1e-6
    fd = [(q_value(T, lam, x + h * e, t) - q_value(T, lam, x - h * e, t)) / (2 * h) for e in np.eye(2)]
    fd.append((q_value(T, lam, x, t + h) - q_value(T, lam, x, t - h)) / (2 * h))
    assert np.allclose(fd, g, rtol=1e-6, atol=1e-8)


def test_closed_form_displayed_specials():
    T3 = sym(3, 2, 8)
    chi3 = echar_poly(T3).poly
    assert discriminant_closed_form(T3, chi3).allclose(UniPoly.monomial(4) * chi3, 1e-14)
    T4 = sym(4, 2, 8)
    chi4, det4 = echar_poly(T4).poly, determinant(T4)
    expect = UniPoly.monomial(9, det4) * chi4 * chi4
    assert discriminant_closed_form(T4, chi4, det4).allclose(expect, 1e-14)


def test_closed_form_det_factor_absent_for_order_three():
    T = sym(3, 2, 9)
    chi = echar_poly(T).poly
    a = discriminant_closed_form(T, chi, det=5.0)
    b = discriminant_closed_form(T, chi, det=-3.0 + 1j)
    assert a == b


def test_direct_sample_rejects_zero():
    with pytest.raises(ValueError):
        discriminant_direct_sample(sym(3, 2, 0), 0.0)


@pytest.mark.parametrize("m", [3, 4])
def test_direct_sample_vanishes_at_eigenvalue(m):
    T = sym(m, 2, 10)
    rep = eigenpairs(T)
    lam = rep.of_kind("E")[0].lambdas[0]
    ref = abs(discriminant_direct_sample(T, abs(lam) * np.exp(0.7j)))
    assert abs(discriminant_direct_sample(T, lam)) <= 1e-8 * ref


@pytest.mark.parametrize("m", [3, 4])
def test_direct_over_closed_is_constant(m):
    """Direct samples are a fixed multiple of the closed form.

    The multiple is ``((m-2)/2)^{(m-1)^{n+1}}`` from the scaled last
    derivative, times ``-1`` for even m where ``Res(T x^{m-1} - lam t^{m-2} x,
    x^T x - t^2) = -chi^2``.
    """
    rep = discriminant_report(sym(m, 2, 11))
    assert rep["constant_spread"] <= 1e-6
    expect = normalization_constant(m, 1) * (-1 if m % 2 == 0 else 1)
    assert complex(*rep["measured_constant"]) == pytest.approx(expect, rel=1e-6)


@pytest.mark.parametrize("m", [3, 4])
def test_lambda_power_factor_limit(m):
    T = sym(m, 2, 12)
    k = (m - 1) ** 2
    r = [discriminant_direct_sample(T, lam) / lam**k for lam in (1e-2, 1e-3, 1e-4)]
    assert abs(r[2] - r[1]) < abs(r[1] - r[0])
    assert np.isfinite(r[2]) and abs(r[2]) > 1e-8 * abs(r[0])


def test_report_json_shape():
    rep = discriminant_report(sym(3, 2, 13), samples=9)
    assert len(rep["lambdas"]) == len(rep["direct"]) == 9
    for key in ("closed_form", "direct", "max_rel_deviation", "measured_constant"):
        assert key in rep


def test_singular_point_check_diagonal(diag12):
    rep = eigenpairs(diag12)
    axis = next(c for c in rep if np.allclose(c.rep, [1, 0]))
    assert singular_point_check(diag12, axis)


@pytest.mark.parametrize("m", [3, 4])
def test_singular_points_are_eigenvectors(m):
    T = sym(m, 2, 14)
    assert all(singular_point_check(T, c) for c in eigenpairs(T).of_kind("E"))
    rng = np.random.default_rng(15)
    for _ in range(20):
        x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        x = x / np.sqrt(x @ x)
        lam = complex(rng.standard_normal(), rng.standard_normal())
        assert not point_is_singular(T, lam, x)


def test_perturbed_eigenvector_is_not_singular():
    T = sym(3, 2, 16)
    c = eigenpairs(T).of_kind("E")[0]
    x = c.rep / np.sqrt(c.rep @ c.rep) + np.array([1e-3, -2e-3])
    assert not point_is_singular(T, c.lambdas[0], x)
