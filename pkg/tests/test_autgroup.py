import numpy as np
import pytest

from cartan_hartogs.autgroup import (
    jacobian_at_base,
    jacobian_det_sq,
    normalizing_map,
)
from cartan_hartogs.domain import (
    DomainParams,
    Point,
    aux_xy,
    contains,
    point_to_vec,
    sample_interior,
    special_K,
    vec_to_point,
)
from cartan_hartogs.errors import DomainMembershipError
from cartan_hartogs.oracle import holomorphic_jacobian

CONFIGS = [(1, 1), (2, 1), (2, 2), (3, 1)]


def params_for(p, r):
    return DomainParams(r=r, p=p, K=special_K(p))


def test_normalizing_map_at_origin_is_identity():
    params = params_for(2, 1)
    F = normalizing_map(params, np.zeros((2, 2)))
    assert np.allclose(F.A, np.eye(2), atol=1e-14)
    pt = sample_interior(params, 0, 1)[0]
    image = F(pt)
    assert np.allclose(image.Z, pt.Z, atol=1e-13)
    assert np.allclose(image.w, pt.w, atol=1e-13)


def test_normalizer_constraint():
    # conj(A)^t A == (I - Z0 conj(Z0))^(-1) within 1e-10
    rng = np.random.default_rng(10)
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 11, 25):
            A = normalizing_map(params, pt.Z).A
            want = np.linalg.inv(np.eye(p) - pt.Z @ pt.Z.conj())
            got = A.conj().T @ A
            assert np.abs(got - want).max() <= 1e-10 * np.abs(want).max()


def test_normalizer_sends_base_to_origin():
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 12, 25):
            image = normalizing_map(params, pt.Z)(pt)
            assert np.abs(image.Z).max() < 1e-12


def test_apply_worked_example():
    # Z0 = Z = 0.5, K = 1: w* = w / sqrt(0.75)
    params = DomainParams(r=1, p=1, K=1.0)
    F = normalizing_map(params, np.array([[0.5]]))
    image = F(Point(np.array([[0.5]]), np.array([0.3])))
    assert abs(image.Z[0, 0]) < 1e-15
    assert abs(image.w[0] - 0.3 * 0.75**-0.5) < 1e-14


def test_apply_preserves_membership():
    for p, r in CONFIGS:
        params = params_for(p, r)
        bases = sample_interior(params, 13, 125)
        points = sample_interior(params, 14, 125)
        for base, pt in zip(bases, points):
            image = normalizing_map(params, base.Z)(pt)
            assert contains(params, image.Z, image.w)


def test_x_invariance():
    # X(F(point)) == X(point) within 1e-12 on 500 pairs per configuration
    for p, r in CONFIGS:
        params = params_for(p, r)
        bases = sample_interior(params, 15, 500)
        points = sample_interior(params, 16, 500)
        worst = 0.0
        for base, pt in zip(bases, points):
            F = normalizing_map(params, base.Z)
            worst = max(worst, abs(aux_xy(params, F(pt)).X - aux_xy(params, pt).X))
        assert worst <= 1e-12


def test_jacobian_blocks_at_origin():
    params = params_for(2, 2)
    blocks = jacobian_at_base(params, Point(np.zeros((2, 2)), np.array([0.1, 0.2])))
    assert np.allclose(blocks.dzstar_dz, np.eye(3), atol=1e-14)
    assert np.abs(blocks.dwstar_dz).max() == 0.0
    assert np.allclose(blocks.dwstar_dw, np.eye(2), atol=1e-14)


def test_jacobian_dwdw_scalar_example():
    params = DomainParams(r=1, p=1, K=1.0)
    blocks = jacobian_at_base(params, Point(np.array([[0.5]]), np.array([0.2])))
    assert abs(blocks.dwstar_dw[0, 0] - 0.75**-0.5) < 1e-14


def test_assembled_block_triangular():
    params = params_for(2, 1)
    pt = sample_interior(params, 17, 1)[0]
    J = jacobian_at_base(params, pt).assembled
    assert np.abs(J[params.m :, : params.m]).max() == 0.0


def test_jacobian_det_sq_values():
    params = DomainParams(r=1, p=1, K=1.0)
    assert abs(jacobian_det_sq(params, np.zeros((1, 1))) - 1.0) < 1e-15
    got = jacobian_det_sq(params, np.array([[0.5]]))
    assert abs(got - 0.75**-3) <= 1e-12 * got


def test_jacobian_det_sq_outside_domain():
    params = DomainParams(r=1, p=1, K=1.0)
    with pytest.raises(DomainMembershipError):
        jacobian_det_sq(params, np.array([[1.5]]))


def test_normalizing_map_outside_domain():
    params = DomainParams(r=1, p=1, K=1.0)
    with pytest.raises(DomainMembershipError):
        normalizing_map(params, np.array([[1.5]]))


def test_det_identity_on_samples():
    # |det J|^2 == det(I - Z conj(Z))^-(p+1+r/K) within 1e-8, 200 points
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 18, 200):
            J = jacobian_at_base(params, pt).assembled
            got = abs(np.linalg.det(J)) ** 2
            want = jacobian_det_sq(params, pt.Z)
            assert abs(got - want) <= 1e-8 * want


def test_jacobian_matches_finite_differences():
    # every block vs central differences of the map with Z0 frozen, 50 points
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 19, 50):
            F = normalizing_map(params, pt.Z)

            def fmap(x):
                return point_to_vec(F(vec_to_point(x, r)))

            J_fd = holomorphic_jacobian(fmap, point_to_vec(pt), step=1e-4)
            J = jacobian_at_base(params, pt).assembled
            assert (np.abs(J_fd - J) / (1.0 + np.abs(J))).max() <= 1e-5
