import numpy as np
import pytest

from ssrr.certificate import (
    Certificate,
    CornerFrame,
    Subsolution,
    build_corner_frame,
    certificate_from_json,
    certificate_to_json,
    certify_nonexistence,
    check_certificate,
    choose_beta,
    dilate_angles,
    shock_ray_margin,
    subsolution_eval,
)
from ssrr.errors import DegenerateThetaError, NotStrongTypeError
from ssrr.gas import GasModel
from ssrr.polar import max_deflection, polar_trace
from ssrr.reflection import ReflectionConfig, local_config, solve_reflection
from ssrr.shock import UpstreamData
from ssrr._vec import rotate


def synthetic_frame(theta_t, alpha_t, a=1.0, theta=None, alpha=None):
    theta = theta_t if theta is None else theta
    alpha = alpha_t if alpha is None else alpha
    ang = np.radians(alpha_t + theta_t)
    gv_t = np.array([np.cos(ang), np.sin(ang)])
    return CornerFrame(
        xi_r=np.zeros(2), theta=theta, alpha=alpha, a=a,
        theta_t=theta_t, alpha_t=alpha_t,
        gv=gv_t * np.array([a, 1.0]), gv_t=gv_t,
        psi_ref=-5.0, rho_d=1.5, L3=np.sqrt(max(0.0, 1 - a * a)),
    )


def rotated_config(delta_deg):
    up = UpstreamData(GasModel(2.0), 1.0, [3.0, 0.0])
    w = rotate([1.0, 0.0], np.radians(delta_deg))
    return ReflectionConfig(up, w, w)


def strong_solution(cfg):
    return [s for s in solve_reflection(cfg) if s.type.label == "strong"][0]


def test_dilation_identity_when_a_is_one():
    th, al = dilate_angles(37.0, 41.0, 1.0)
    assert th == pytest.approx(37.0, abs=1e-12)
    assert al == pytest.approx(41.0, abs=1e-12)


def test_dilation_window_preserved_random():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        theta = float(rng.uniform(1e-3, 90.0 - 1e-3))
        s = float(rng.uniform(90.0 + 1e-3, 180.0 - 1e-3))
        alpha = s - theta
        a = float(rng.uniform(0.05, 1.0))
        th_t, al_t = dilate_angles(theta, alpha, a)
        assert 0.0 < th_t < 90.0
        assert 90.0 < al_t + th_t < 180.0


def test_dilation_preserves_weak_window_too():
    rng = np.random.default_rng(55)
    for _ in range(200):
        theta = float(rng.uniform(1e-3, 90.0 - 1e-3))
        s = float(rng.uniform(theta + 1e-3, 90.0 - 1e-3))
        alpha = s - theta
        a = float(rng.uniform(0.05, 1.0))
        th_t, al_t = dilate_angles(theta, alpha, a)
        assert al_t + th_t < 90.0


def test_build_corner_frame_strong():
    cfg = rotated_config(2.0)
    frame = build_corner_frame(cfg, strong_solution(cfg))
    assert 0.0 < frame.a < 1.0
    assert frame.a == pytest.approx(np.sqrt(1.0 - frame.L3**2), rel=1e-12)
    assert 90.0 < frame.alpha_t + frame.theta_t < 180.0
    assert 90.0 < frame.alpha + frame.theta < 90.0 + frame.theta


def test_build_corner_frame_rejects_degenerate_and_weak():
    up = UpstreamData(GasModel(2.0), 1.0, [3.0, 0.0])
    cfg0 = ReflectionConfig(up, [1.0, 0.0], [1.0, 0.0])
    sols = solve_reflection(cfg0)
    with pytest.raises(DegenerateThetaError):
        build_corner_frame(cfg0, sols[0])
    cfg = rotated_config(2.0)
    weak = [s for s in solve_reflection(cfg) if s.type.label == "weak"][0]
    with pytest.raises(NotStrongTypeError):
        build_corner_frame(cfg, weak)


def test_choose_beta_examples():
    # narrow window: beta must exceed (90 + margin - alpha~)/theta~
    frame = synthetic_frame(30.0, 61.0)  # alpha~ + theta~ = 91
    beta = choose_beta(frame)
    margin = min(1.0, 0.5 * 1.0)
    assert 61.0 + beta * 30.0 > 90.0 + margin
    assert shock_ray_margin(61.0, 30.0, beta) > 0.0
    feasible = [
        1.0 - 2.0**-k
        for k in range(1, 41)
        if 61.0 + (1.0 - 2.0**-k) * 30.0 > 90.0 + margin
        and shock_ray_margin(61.0, 30.0, 1.0 - 2.0**-k) > 0.0
    ]
    assert beta == min(feasible)
    # critical window is empty
    with pytest.raises(NotStrongTypeError):
        choose_beta(synthetic_frame(30.0, 60.0))
    # wide window: beta = 1/2 is already feasible
    frame = synthetic_frame(80.0, 90.0)  # alpha~ + theta~ = 170
    beta = choose_beta(frame)
    assert beta == 0.5
    assert 90.0 + 0.5 * 80.0 > 91.0


def test_subsolution_eval_closed_form():
    frame = synthetic_frame(30.0, 70.0)
    sub = Subsolution(frame.psi_ref, 0.01, 0.9, frame)
    psi, (d_r, d_phi_r), lap = subsolution_eval(sub, 0.1, np.radians(27.0))
    # slip at the wall
    _, (_, d_phi0), _ = subsolution_eval(sub, 0.1, 0.0)
    assert d_phi0 == pytest.approx(0.0, abs=1e-16)
    # frozen value, confirmed by the finite-difference Laplacian oracle below
    assert -lap == pytest.approx(-0.017316662256073454, abs=1e-15)
    eps, b = 0.01, 0.9
    f = lambda r, p: eps * r * np.cos(b * p)
    r0, p0, h = 0.1, np.radians(27.0), 1e-5
    frr = (f(r0 + h, p0) - 2 * f(r0, p0) + f(r0 - h, p0)) / h**2
    fr = (f(r0 + h, p0) - f(r0 - h, p0)) / (2 * h)
    fpp = (f(r0, p0 + h) - 2 * f(r0, p0) + f(r0, p0 - h)) / h**2
    assert lap == pytest.approx(frr + fr / r0 + fpp / r0**2, abs=1e-7)
    # Psi(0+, phi) -> psi_ref uniformly
    psi_small, _, _ = subsolution_eval(sub, 1e-12, np.radians(15.0))
    assert psi_small == pytest.approx(frame.psi_ref, abs=1e-13)
    with pytest.raises(ValueError):
        subsolution_eval(sub, -0.1, 0.1)


def test_check_certificate_certified():
    cfg = rotated_config(2.0)
    frame = build_corner_frame(cfg, strong_solution(cfg))
    beta = choose_beta(frame)
    cert = check_certificate(frame, beta, 1e-3)
    assert cert.status == "certified"
    assert cert.delta_interior > 0
    assert cert.delta_shock > 0
    assert cert.wall_residual == 0.0
    assert cert.corner_descent == -1e-3
    assert cert.delta_interior_undilated == pytest.approx(frame.a * cert.delta_interior)
    assert cert.delta_shock_undilated == pytest.approx(
        np.hypot(*frame.gv_t) * cert.delta_shock
    )
    # closed-form bracket agrees with the direct ray evaluation
    assert cert.delta_shock == pytest.approx(
        shock_ray_margin(frame.alpha_t, frame.theta_t, beta), abs=1e-10
    )
    # interior margin bound holds at every grid sample
    sub = Subsolution(frame.psi_ref, 1e-3, beta, frame)
    r = np.logspace(-6, 0, 64)
    phi = np.linspace(0, np.radians(frame.theta_t), 64)
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    _, _, lap = subsolution_eval(sub, rr, pp)
    assert np.all(-lap * rr <= -cert.delta_interior * 1e-3 + 1e-15)


def test_check_certificate_epsilon_scales_out():
    cfg = rotated_config(2.0)
    frame = build_corner_frame(cfg, strong_solution(cfg))
    beta = choose_beta(frame)
    a = check_certificate(frame, beta, 1e-3)
    b = check_certificate(frame, beta, 0.25)
    assert a.delta_interior == pytest.approx(b.delta_interior, rel=1e-12)
    assert a.delta_shock == pytest.approx(b.delta_shock, rel=1e-12)


def test_check_certificate_validation():
    frame = synthetic_frame(30.0, 70.0)
    with pytest.raises(ValueError):
        check_certificate(frame, 1.5, 1e-3)
    with pytest.raises(ValueError):
        check_certificate(frame, 0.9, 1e-3, n_r=32)
    with pytest.raises(ValueError):
        check_certificate(frame, 0.9, 2.0)


def test_beta_to_one_limit():
    frame = synthetic_frame(40.0, 80.0)  # alpha~ + theta~ = 120
    expect = -np.cos(np.radians(120.0))
    for beta in (1.0 - 2.0**-12, 1.0 - 2.0**-20):
        cert = check_certificate(frame, beta, 1e-3)
        assert cert.delta_shock == pytest.approx(expect, abs=1e-3)
    c1 = check_certificate(frame, 1.0 - 2.0**-12, 1e-3)
    c2 = check_certificate(frame, 1.0 - 2.0**-20, 1e-3)
    assert abs(c2.delta_shock - expect) < abs(c1.delta_shock - expect)


def test_forced_weak_bypass_fails_with_negative_shock_margin():
    ts = np.degrees(max_deflection(polar_trace(
        local_config(2.0, 0.0, np.sqrt(2.0)).upstream, np.zeros(2), 96))[0])
    cfg = local_config(2.0, 0.9 * ts, np.sqrt(2.0))
    weak = [s for s in solve_reflection(cfg) if s.type.label == "weak"][0]
    assert weak.L3 < 1.0  # transonic weak root exists near detachment
    frame = build_corner_frame(cfg, weak, require_strong=False)
    assert frame.alpha_t + frame.theta_t < 90.0
    cert = check_certificate(frame, 0.9, 1e-3)
    assert cert.status == "failed"
    assert cert.delta_shock < 0.0
    assert "delta_shock" in cert.reason


def test_shock_margin_monotone_and_crossing():
    theta_t = 40.0
    for beta in (0.9, 0.99, 0.999):
        vals = [shock_ray_margin(al, theta_t, beta) for al in np.linspace(30.0, 139.0, 80)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
        # delta_shock < 0 whenever alpha~ + beta theta~ <= 90
        al_edge = 90.0 - beta * theta_t
        assert shock_ray_margin(al_edge, theta_t, beta) < 0.0
        # bisect the crossing; it sits on the strong side of the boundary
        lo, hi = al_edge, 139.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if shock_ray_margin(mid, theta_t, beta) < 0.0:
                lo = mid
            else:
                hi = mid
        crossing = 0.5 * (lo + hi) + beta * theta_t
        assert crossing > 90.0
        if beta == 0.9:
            first = crossing
    # the crossing approaches the critical boundary as beta -> 1
    last = None
    for beta in (0.9, 0.99, 0.999, 0.9999):
        lo, hi = 90.0 - beta * theta_t, 139.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if shock_ray_margin(mid, theta_t, beta) < 0.0:
                lo = mid
            else:
                hi = mid
        gap = 0.5 * (lo + hi) + beta * theta_t - 90.0
        if last is not None:
            assert gap < last
        last = gap
    assert last < 0.01


def test_certify_nonexistence_end_to_end():
    cert = certify_nonexistence(rotated_config(2.0))
    assert cert.status == "certified"
    assert cert.delta_interior > 0 and cert.delta_shock > 0
    assert cert.frame is not None

    # pseudo-normal configuration: theta = 90
    up = UpstreamData(GasModel(2.0), 1.0, [3.0, 0.0])
    cert0 = certify_nonexistence(ReflectionConfig(up, [1.0, 0.0], [1.0, 0.0]))
    assert cert0.status == "degenerate_theta"

    # detachment
    cert_d = certify_nonexistence(rotated_config(10.0))
    assert cert_d.status == "not_strong_type"
    assert "detachment" in cert_d.reason


def test_certificate_json_roundtrip():
    cert = certify_nonexistence(rotated_config(2.0))
    text = certificate_to_json(cert)
    back = certificate_from_json(text)
    assert back.status == cert.status
    assert back.beta == cert.beta
    assert back.delta_interior == cert.delta_interior
    assert back.delta_shock == cert.delta_shock
    assert back.frame.theta == cert.frame.theta
    assert back.delta_shock_undilated == cert.delta_shock_undilated
    # failure certificates serialize too
    text2 = certificate_to_json(certify_nonexistence(rotated_config(10.0)))
    back2 = certificate_from_json(text2)
    assert back2.status == "not_strong_type"
    assert back2.frame is None
