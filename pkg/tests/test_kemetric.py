import math

import numpy as np
import pytest

from cartan_hartogs.autgroup import jacobian_at_base, normalizing_map
from cartan_hartogs.domain import (
    DomainParams,
    Point,
    aux_xy,
    gram_eigvals,
    point_to_vec,
    sample_interior,
    special_K,
    vec_to_point,
)
from cartan_hartogs.errors import DomainMembershipError
from cartan_hartogs.kemetric import (
    boundary_blowup_probe,
    generating_function,
    ma_residual,
    metric_blocks_closed,
    metric_origin,
    metric_pullback,
)
from cartan_hartogs.oracle import FDConfig, holomorphic_jacobian, wirtinger_hessian_mixed

CONFIGS = [(1, 1), (2, 1), (2, 2), (3, 1)]


def params_for(p, r):
    return DomainParams(r=r, p=p, K=special_K(p))


def origin(params):
    return Point(np.zeros((params.p, params.p)), np.zeros(params.r))


def test_generating_function_ball_origin():
    params = DomainParams(r=1, p=1, K=1.0)
    assert generating_function(params, origin(params)) == 0.0


def test_generating_function_p2_origin():
    params = params_for(2, 1)
    want = -(3.0 / 5.0) * math.log(4.0 / 3.0)
    assert abs(generating_function(params, origin(params)) - want) < 1e-14


def test_generating_function_matches_ball_potential():
    # p = 1, K = 1: g == -log(1 - |z|^2 - |w|^2)
    params = DomainParams(r=1, p=1, K=1.0)
    for pt in sample_interior(params, 20, 50):
        want = -math.log(1.0 - abs(pt.Z[0, 0]) ** 2 - abs(pt.w[0]) ** 2)
        assert abs(generating_function(params, pt) - want) < 1e-12


def test_metric_origin_at_zero():
    params = params_for(2, 1)
    T = metric_origin(params, np.zeros(1))
    want = np.diag([1.0 / params.K] * 3 + [1.0])
    assert np.allclose(T, want, atol=1e-15)


def test_metric_origin_lower_block_example():
    # r = 1, |w*|^2 = 1/2: scalar block Y + Y^2/2 = 4
    params = DomainParams(r=1, p=1, K=1.0)
    T = metric_origin(params, np.array([math.sqrt(0.5)]))
    assert abs(T[-1, -1] - 4.0) < 1e-12


def test_metric_origin_determinant_identity():
    # det == K^(r-N) (1-X)^-(N+1)
    rng = np.random.default_rng(21)
    for p, r in CONFIGS:
        params = params_for(p, r)
        for _ in range(20):
            u = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            u *= rng.uniform(0.0, 0.97) / np.linalg.norm(u)
            X = float(np.vdot(u, u).real)
            det = np.linalg.det(metric_origin(params, u))
            want = params.K ** (r - params.N) * (1.0 - X) ** -(params.N + 1)
            assert abs(det - want) <= 1e-10 * abs(want)


def test_metric_origin_rejects_exterior():
    params = DomainParams(r=1, p=1, K=1.0)
    with pytest.raises(DomainMembershipError):
        metric_origin(params, np.array([1.0]))


def test_pullback_reduces_to_origin_slice():
    params = params_for(2, 2)
    w = np.array([0.3 + 0.1j, -0.2j])
    pt = Point(np.zeros((2, 2)), w)
    assert np.allclose(metric_pullback(params, pt), metric_origin(params, w), atol=1e-13)


def test_t22_worked_example():
    params = DomainParams(r=1, p=1, K=1.0)
    blocks = metric_blocks_closed(params, Point(np.array([[0.5]]), np.array([0.5])))
    assert abs(blocks.T22[0, 0] - 3.0) < 1e-13
    # cross-check against the ball Hessian d^2(-log(1-|z|^2-|w|^2))/dw dconj(w) = 3
    assert abs(blocks.assembled[-1, -1] - 3.0) < 1e-13


def test_blocks_at_origin_slice():
    params = params_for(2, 1)
    blocks = metric_blocks_closed(params, Point(np.zeros((2, 2)), np.array([0.4])))
    Y = aux_xy(params, Point(np.zeros((2, 2)), np.array([0.4]))).Y
    assert np.allclose(blocks.T11, (Y / params.K) * np.eye(3), atol=1e-14)
    assert np.abs(blocks.T12).max() == 0.0


def test_route_equivalence():
    # closed blocks == pullback within 1e-8, 200 points per configuration
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 22, 200):
            A = metric_blocks_closed(params, pt).assembled
            B = metric_pullback(params, pt)
            assert (np.abs(A - B) / (1.0 + np.abs(B))).max() <= 1e-8


def test_metric_is_hermitian_positive_definite():
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 23, 50):
            T = metric_pullback(params, pt)
            assert np.abs(T - T.conj().T).max() <= 1e-12 * np.abs(T).max()
            assert np.linalg.eigvalsh(T).min() > 0.0


def test_metric_matches_wirtinger_hessian():
    # the FD mixed Hessian of g is the primary oracle: 1e-5 relative, step 1e-4
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 24, 50):
            H = wirtinger_hessian_mixed(
                lambda q: generating_function(params, q), pt, FDConfig(step=1e-4)
            )
            T = metric_pullback(params, pt)
            assert (np.abs(H - T) / (1.0 + np.abs(T))).max() <= 1e-5


def test_transformation_law_random_base():
    # T(point) == J_F(point) T(F(point)) conj(J_F(point))^t for normalizers
    # with random base, the Jacobian taken by finite differences
    for p, r in [(1, 1), (2, 1)]:
        params = params_for(p, r)
        bases = sample_interior(params, 25, 10)
        points = sample_interior(params, 26, 10)
        for base, pt in zip(bases, points):
            F = normalizing_map(params, base.Z)
            J = holomorphic_jacobian(
                lambda x: point_to_vec(F(vec_to_point(x, r))), point_to_vec(pt), step=1e-4
            )
            lhs = metric_pullback(params, pt)
            rhs = J @ metric_pullback(params, F(pt)) @ J.conj().T
            assert (np.abs(lhs - rhs) / (1.0 + np.abs(lhs))).max() <= 1e-8


def test_ma_residual_special_k():
    for p, r in CONFIGS:
        params = params_for(p, r)
        for pt in sample_interior(params, 27, 200):
            assert ma_residual(params, pt) <= 1e-8
            assert ma_residual(params, pt, route="numeric") <= 1e-6


def test_ma_residual_zero_matrix_any_K():
    # at Z = 0 both sides reduce to K^(r-N) (1-X)^-(N+1) for every K
    for K in (0.7, 1.0, 2.5):
        params = DomainParams(r=2, p=2, K=K)
        pt = Point(np.zeros((2, 2)), np.array([0.3, 0.4j]))
        assert ma_residual(params, pt) <= 1e-12


def test_ma_residual_negative_control():
    # K = 1 (not special for p = 2): exponents differ, so the identity fails
    params = DomainParams(r=1, p=2, K=1.0)
    pt = Point(np.diag([0.5, 0.0]).astype(complex), np.zeros(1))
    assert ma_residual(params, pt) > 1e-3


def test_ma_residual_bad_route():
    params = DomainParams(r=1, p=1, K=1.0)
    with pytest.raises(ValueError):
        ma_residual(params, origin(params), route="exact")


def test_probe_w_ward_diverges():
    params = params_for(2, 1)
    pt = sample_interior(params, 28, 1)[0]
    v = np.zeros(params.N, dtype=complex)
    v[params.m] = 1.0
    values = boundary_blowup_probe(params, pt, v)
    assert values[-1] - values[0] >= 10.0


def test_probe_z_ward_diverges():
    params = params_for(2, 1)
    Z = sample_interior(params, 29, 1)[0].Z * 0.4
    pt = Point(Z, np.zeros(1))
    v = np.zeros(params.N, dtype=complex)
    v[0] = 1.0
    values = boundary_blowup_probe(params, pt, v)
    assert values[-1] - values[0] >= 10.0


def test_probe_stationary():
    params = params_for(2, 1)
    pt = sample_interior(params, 30, 1)[0]
    values = boundary_blowup_probe(params, pt, np.zeros(params.N), steps=12)
    assert len(values) == 12
    assert len(set(values)) == 1
    assert math.isfinite(values[0])


def test_probe_reaches_cutoff():
    params = params_for(2, 1)
    pt = sample_interior(params, 31, 1)[0]
    v = np.zeros(params.N, dtype=complex)
    v[params.m] = 1.0
    values = boundary_blowup_probe(params, pt, v, steps=64)
    # the walk stops at the cutoff, well before the step budget
    assert len(values) < 64
