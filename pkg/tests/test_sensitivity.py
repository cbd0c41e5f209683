import numpy as np
import pytest

from jetnormal.geometry import PatchNeighborhood
from jetnormal.jet import fit_jet
from jetnormal.sensitivity import dalpha_dw, dnormal_dw, weight_jacobian
from oracles import central_difference, normal_equations_solve, normal_of


def noisy_patch(rng, n_p, h=1.0):
    xy = rng.uniform(-h, h, (n_p - 1, 2))
    z = 0.4 * xy[:, 0] + 0.3 * xy[:, 0] * xy[:, 1] - 0.6 * xy[:, 1] ** 2 + 0.1 * xy[:, 0] ** 3
    z = z + 0.02 * h * rng.standard_normal(n_p - 1)
    return PatchNeighborhood.from_local(np.vstack([[0, 0, 0], np.column_stack([xy, z])]))


def fd_jacobians(patch, w, n):
    pts = patch.local_points
    da = np.column_stack([central_difference(lambda v: normal_equations_solve(pts, v, n), w, i) for i in range(len(w))])
    dn = np.column_stack(
        [central_difference(lambda v: normal_of(normal_equations_solve(pts, v, n)), w, i) for i in range(len(w))]
    )
    return da, dn


def rel_err(approx, exact):
    return np.max(np.abs(approx - exact)) / np.max(np.abs(exact))


def test_zero_residual_gives_zero_jacobian():
    rng = np.random.default_rng(0)
    xy = rng.uniform(-1, 1, (15, 2))
    z = 0.5 * xy[:, 0] - xy[:, 1] ** 2
    p = PatchNeighborhood.from_local(np.vstack([[0, 0, 0], np.column_stack([xy, z])]))
    fit = fit_jet(p, rng.uniform(0.5, 1, 16), 2)
    np.testing.assert_allclose(dalpha_dw(fit, p), 0.0, atol=1e-10)
    np.testing.assert_allclose(dnormal_dw(fit, p), 0.0, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matches_finite_differences(n):
    rng = np.random.default_rng(10 + n)
    p = noisy_patch(rng, 30)
    w = rng.uniform(0.2, 1.0, 30)
    fit = fit_jet(p, w, n)
    da, dn = fd_jacobians(p, w, n)
    assert rel_err(dalpha_dw(fit, p), da) <= 1e-5
    assert rel_err(dnormal_dw(fit, p), dn) <= 1e-5


def test_duplicated_points_share_columns():
    rng = np.random.default_rng(1)
    p = noisy_patch(rng, 20)
    pts = np.vstack([p.local_points, p.local_points[7]])
    dup = PatchNeighborhood.from_local(pts)
    w = rng.uniform(0.2, 1.0, 21)
    w[20] = w[7]
    fit = fit_jet(dup, w, 2)
    da = dalpha_dw(fit, dup)
    np.testing.assert_allclose(da[:, 7], da[:, 20], atol=1e-10)


def test_tangency_and_homogeneity():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3):
        p = noisy_patch(rng, 40, h=float(rng.uniform(0.1, 2)))
        w = rng.uniform(0.05, 1.0, 40)
        fit = fit_jet(p, w, n)
        jac = weight_jacobian(fit, p)
        assert np.all(np.abs(fit.normal @ jac.d_normal) <= 1e-8)
        assert np.max(np.abs(jac.d_alpha @ w)) <= 1e-8
        assert jac.d_alpha.shape == (len(fit.coefficients.coeffs), 40)
        assert jac.d_normal.shape == (3, 40)
