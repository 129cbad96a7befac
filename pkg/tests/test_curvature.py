import numpy as np
import pytest

from cartan_hartogs.autgroup import normalizing_map
from cartan_hartogs.curvature import (
    Tangent,
    curvature_bounds,
    hsc,
    hsc_origin,
    sharp_directions,
    trace_quartic_terms,
)
from cartan_hartogs.domain import (
    DomainParams,
    Point,
    point_to_vec,
    sample_interior,
    special_K,
    vec_to_point,
)
from cartan_hartogs.errors import DegenerateDirectionError
from cartan_hartogs.oracle import holomorphic_jacobian

CONFIGS = [(1, 1), (2, 1), (2, 2), (3, 1)]


def params_for(p, r):
    return DomainParams(r=r, p=p, K=special_K(p))


def random_tangent(rng, params):
    return Tangent(
        rng.standard_normal(params.m) + 1j * rng.standard_normal(params.m),
        rng.standard_normal(params.r) + 1j * rng.standard_normal(params.r),
    )


def test_hsc_origin_p1_is_minus_two():
    params = DomainParams(r=2, p=1, K=1.0)
    rng = np.random.default_rng(40)
    for _ in range(25):
        w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        w *= rng.uniform(0.0, 0.95) / np.linalg.norm(w)
        tan = random_tangent(rng, params)
        assert abs(hsc_origin(params, w, tan) + 2.0) < 1e-12


def test_sharp_directions_attain_bounds():
    for p in (1, 2, 3):
        params = params_for(p, 1)
        lo, hi = curvature_bounds(params)
        t_low, t_high = sharp_directions(p)
        w0 = np.zeros(1)
        assert abs(hsc_origin(params, w0, t_low) - lo) <= 1e-10
        assert abs(hsc_origin(params, w0, t_high) - hi) <= 1e-10


def test_bounds_values():
    assert curvature_bounds(DomainParams(r=1, p=1, K=1.0)) == (-2.0, -2.0)
    lo, hi = curvature_bounds(params_for(2, 1))
    assert abs(lo + 8.0 / 3.0) < 1e-15 and abs(hi + 4.0 / 3.0) < 1e-15
    lo, hi = curvature_bounds(params_for(3, 1))
    assert abs(lo + 7.0 / 2.0) < 1e-15 and abs(hi + 7.0 / 6.0) < 1e-15


def test_hsc_scale_invariance():
    params = params_for(2, 1)
    rng = np.random.default_rng(41)
    pt = sample_interior(params, 42, 1)[0]
    tan = random_tangent(rng, params)
    base = hsc(params, pt, tan)
    for c in (2.0, -0.5, 1.7j, 0.3 - 2.1j):
        scaled = Tangent(c * tan.dz, c * tan.dw)
        assert abs(hsc(params, pt, scaled) - base) <= 1e-12 * max(1.0, abs(base))


def test_hsc_zero_tangent_rejected():
    params = params_for(2, 1)
    with pytest.raises(DegenerateDirectionError):
        hsc_origin(params, np.zeros(1), Tangent(np.zeros(3), np.zeros(1)))


def test_hsc_origin_rejects_exterior_wstar():
    from cartan_hartogs.errors import DomainMembershipError

    params = params_for(2, 1)
    with pytest.raises(DomainMembershipError):
        hsc_origin(params, np.array([1.0]), Tangent(np.zeros(3), np.array([1.0])))


def test_hsc_range_special_k():
    for p, r in CONFIGS:
        params = params_for(p, r)
        lo, hi = curvature_bounds(params)
        rng = np.random.default_rng(43)
        for pt in sample_interior(params, 44, 250):
            omega = hsc(params, pt, random_tangent(rng, params))
            assert lo - 1e-6 <= omega <= hi + 1e-6


def test_hsc_automorphism_invariance():
    # transport through a random normalizer: omega(point, v) == omega(F(point), v J_F)
    for p, r in [(1, 1), (2, 1), (2, 2)]:
        params = params_for(p, r)
        rng = np.random.default_rng(45)
        bases = sample_interior(params, 46, 15)
        points = sample_interior(params, 47, 15)
        for base, pt in zip(bases, points):
            F = normalizing_map(params, base.Z)
            J = holomorphic_jacobian(
                lambda x: point_to_vec(F(vec_to_point(x, r))), point_to_vec(pt), step=1e-4
            )
            tan = random_tangent(rng, params)
            vstar = np.concatenate([tan.dz, tan.dw]) @ J
            before = hsc(params, pt, tan)
            after = hsc(params, F(pt), Tangent(vstar[: params.m], vstar[params.m :]))
            assert abs(after - before) <= 1e-9 * max(1.0, abs(before))


def test_trace_quartic_terms_witnesses():
    # rank-1: left equality; identity: right equality
    t1, t2, t3 = trace_quartic_terms(np.diag([1.0, 0.0]).astype(complex))
    assert (t1, t2, t3) == (1.0, 1.0, 2.0)
    t1, t2, t3 = trace_quartic_terms(np.eye(2, dtype=complex))
    assert (t1, t2, t3) == (2.0, 4.0, 4.0)


def test_trace_quartic_chain_random():
    rng = np.random.default_rng(48)
    for p in (2, 3):
        for _ in range(1000):
            G = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
            t1, t2, t3 = trace_quartic_terms((G + G.T) / 2.0)
            scale = max(1.0, t3)
            assert t1 <= t2 + 1e-12 * scale
            assert t2 <= t3 + 1e-12 * scale
            assert t1 >= 0.0 and t2 >= 0.0


def test_curvature_numerator_is_real():
    # the imaginary residue of the curvature contraction stays tiny
    params = params_for(3, 1)
    rng = np.random.default_rng(49)
    for pt in sample_interior(params, 50, 25):
        omega = hsc(params, pt, random_tangent(rng, params))
        assert isinstance(omega, float)
