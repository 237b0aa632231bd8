import numpy as np
import pytest

from ssrr.errors import DegenerateShockError, NoShockError
from ssrr.gas import GasModel, pi_map
from ssrr.shock import (
    ShockPoint,
    UpstreamData,
    admissible,
    downstream_density,
    g_eval,
    g_grad_v,
    normal_jump,
    oblique_jump,
    shock_normal_from_velocities,
)
from ssrr._vec import perp, rotate, unit

PHI = (1.0 + np.sqrt(5.0)) / 2.0


def bisect_cubic():
    # independent oracle: the golden case reduces to rho^3 - 2 rho^2 + 1 = 0
    f = lambda r: r**3 - 2.0 * r**2 + 1.0
    a, b = 1.3, 2.0
    assert f(a) < 0 < f(b)
    for _ in range(200):
        m = 0.5 * (a + b)
        if f(m) < 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def test_normal_jump_golden():
    rho_d, zn_d = normal_jump(GasModel(2.0), 1.0, 2.0)
    oracle = bisect_cubic()
    assert abs(oracle - PHI) < 1e-14
    assert abs(rho_d - PHI) < 1e-12
    assert abs(zn_d - 2.0 / PHI) < 1e-12
    # Bernoulli invariant on both sides
    gas = GasModel(2.0)
    lhs = pi_map(gas, 1.0) + 0.5 * 2.0**2
    rhs = pi_map(gas, rho_d) + 0.5 * zn_d**2
    assert lhs == pytest.approx(4.0, abs=1e-14)
    assert abs(lhs - rhs) < 1e-13


def test_normal_jump_sonic_limit():
    gas = GasModel(2.0)
    rho_d, zn_d = normal_jump(gas, 1.0, np.sqrt(2.0) * (1.0 + 1e-10))
    assert rho_d == pytest.approx(1.0, abs=1e-8)
    assert zn_d == pytest.approx(np.sqrt(2.0), abs=1e-8)


def test_normal_jump_monotone_in_speed():
    gas = GasModel(2.0)
    rho_a, _ = normal_jump(gas, 1.0, 2.0)
    rho_b, _ = normal_jump(gas, 1.0, 2.5)
    assert rho_b > rho_a


def test_normal_jump_requires_supersonic():
    gas = GasModel(2.0)
    with pytest.raises(NoShockError):
        normal_jump(gas, 1.0, np.sqrt(2.0))
    with pytest.raises(NoShockError):
        normal_jump(gas, 1.0, 1.0)


def golden_upstream():
    return UpstreamData(GasModel(2.0), 1.0, [3.0, 0.0])


def test_upstream_psi0_forced():
    up = golden_upstream()
    assert up.psi0 == pytest.approx(-pi_map(up.gas, 1.0) - 4.5, abs=1e-14)
    assert up.psi([1.0, 0.0]) == pytest.approx(up.psi0 + 3.0)


def test_oblique_jump_golden():
    up = golden_upstream()
    sp = oblique_jump(up, [1.0, 0.0], [1.0, 0.0])
    assert sp.v_d == pytest.approx([np.sqrt(5.0), 0.0], abs=1e-12)
    assert sp.rho_d == pytest.approx(PHI, abs=1e-12)
    assert sp.zt == 0.0
    # mass flux and tangential continuity
    assert sp.upstream.rho * sp.zn_u == pytest.approx(sp.rho_d * sp.zn_d, rel=1e-13)
    assert np.dot(sp.z_u, sp.t) == pytest.approx(np.dot(sp.z_d, sp.t), abs=1e-13)


def test_oblique_jump_mirror_symmetry():
    up = golden_upstream()
    xi = np.array([0.5, 0.0])
    z = up.z(xi)
    n = rotate(unit(z), -0.4)
    n_m = rotate(unit(z), 0.4)  # reflection of n across z
    a = oblique_jump(up, xi, n)
    b = oblique_jump(up, xi, n_m)
    assert a.rho_d == pytest.approx(b.rho_d, rel=1e-13)
    assert a.zt == pytest.approx(-b.zt, rel=1e-12)


def test_oblique_jump_requires_supersonic_normal():
    up = golden_upstream()
    with pytest.raises(NoShockError):
        oblique_jump(up, [1.0, 0.0], perp(unit(up.z([1.0, 0.0]))))


def test_shock_normal_from_velocities():
    assert shock_normal_from_velocities([3.0, 0.0], [np.sqrt(5.0), 0.0]) == pytest.approx([1.0, 0.0])
    assert shock_normal_from_velocities([0.0, 1.0], [0.0, 0.0]) == pytest.approx([0.0, 1.0])
    with pytest.raises(DegenerateShockError):
        shock_normal_from_velocities([1.0, 1.0], [1.0, 1.0])


def test_g_zero_on_polar_and_density_probe():
    up = golden_upstream()
    sp = oblique_jump(up, [1.0, 0.0], [1.0, 0.0])
    assert abs(g_eval(up, sp.v_d, sp.xi)) < 1e-12
    assert downstream_density(up, sp.v_d, sp.xi) == pytest.approx(sp.rho_d, rel=1e-12)


def test_g_rejects_vanishing_shock():
    up = golden_upstream()
    with pytest.raises(DegenerateShockError):
        g_eval(up, up.v, [1.0, 0.0])


def test_g_vacuum_error():
    from ssrr.errors import VacuumError

    up = golden_upstream()
    with pytest.raises(VacuumError):
        g_eval(up, [20.0, 0.0], [0.0, 0.0])


def test_normal_jump_batch_requires_supersonic():
    from ssrr.shock import normal_jump_batch

    gas = GasModel(2.0)
    with pytest.raises(NoShockError):
        normal_jump_batch(gas, 1.0, np.array([2.0, 1.0]))


def _polar_points(up, xi, count, seed=0):
    rng = np.random.default_rng(seed)
    z = up.z(xi)
    Mn_max = float(np.hypot(*z)) / up.c
    pts = []
    for _ in range(count):
        Mn = 1.0 + (Mn_max - 1.0) * float(rng.uniform(0.02, 0.999))
        side = 1 if rng.uniform() < 0.5 else -1
        phi = np.arccos(min(1.0, Mn / Mn_max))
        n = rotate(unit(z), -side * phi)
        pts.append(oblique_jump(up, xi, n))
    return pts


def test_tangential_shift_invariance():
    up = golden_upstream()
    xi = np.array([1.0, 0.0])
    for sp in _polar_points(up, xi, 25, seed=5):
        g0 = g_eval(up, sp.v_d, sp.xi)
        for s in (-10.0, -1.0, 1.0, 10.0):
            g1 = g_eval(up, sp.v_d, sp.xi + s * sp.t)
            assert abs(g1 - g0) < 1e-12


def test_gradient_matches_finite_differences():
    up = golden_upstream()
    xi = np.array([1.0, 0.0])
    h = 1e-6 * (1.0 + float(np.hypot(*up.v)))
    for sp in _polar_points(up, xi, 30, seed=9):
        gv = g_grad_v(up, sp.v_d, sp.xi)
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            fd = (g_eval(up, sp.v_d + e, xi) - g_eval(up, sp.v_d - e, xi)) / (2 * h)
            assert fd == pytest.approx(gv[k], rel=1e-6, abs=1e-8)


def test_gradient_sign_facts():
    up = golden_upstream()
    xi = np.array([1.0, 0.0])
    for sp in _polar_points(up, xi, 40, seed=11):
        gv = g_grad_v(up, sp.v_d, sp.xi)
        assert np.dot(gv, sp.n) > 0.0
        zt = np.dot(sp.z_d, sp.t)
        if abs(zt) > 1e-12:
            assert np.sign(np.dot(gv, sp.t)) == -np.sign(zt)


def test_gradient_normal_component_golden():
    up = golden_upstream()
    sp = oblique_jump(up, [1.0, 0.0], [1.0, 0.0])
    gv = g_grad_v(up, sp.v_d, sp.xi)
    assert np.dot(gv, sp.n) == pytest.approx(0.8541019662496846, abs=1e-12)
    assert np.dot(gv, sp.t) == pytest.approx(0.0, abs=1e-13)


def test_admissible():
    up = golden_upstream()
    sp = oblique_jump(up, [1.0, 0.0], [1.0, 0.0])
    assert admissible(sp)
    # swap up/down states: an expansion shock
    swapped_up = UpstreamData(up.gas, sp.rho_d, sp.v_d)
    swapped = ShockPoint(swapped_up, sp.xi, sp.n, up.rho, up.v)
    assert not admissible(swapped)
    # zero strength boundary case
    sonic = ShockPoint(up, [1.0, 0.0], [1.0, 0.0], up.rho, up.v)
    assert admissible(sonic)


def test_observer_shift_invariance():
    up = golden_upstream()
    xi = np.array([1.0, 0.0])
    rng = np.random.default_rng(21)
    for sp in _polar_points(up, xi, 10, seed=13):
        g0 = g_eval(up, sp.v_d, sp.xi)
        gv0 = g_grad_v(up, sp.v_d, sp.xi)
        for _ in range(3):
            w = rng.normal(scale=1.5, size=2)
            up_s = up.shifted(w)
            assert up_s.psi0 == pytest.approx(up.psi0 + np.dot(up.v, w) - 0.5 * np.dot(w, w), rel=1e-13)
            g1 = g_eval(up_s, sp.v_d - w, sp.xi - w)
            gv1 = g_grad_v(up_s, sp.v_d - w, sp.xi - w)
            assert abs(g1 - g0) < 1e-10
            assert np.allclose(gv1, gv0, atol=1e-10)


def test_bernoulli_consistency_after_jump():
    gas = GasModel(1.4)
    rng = np.random.default_rng(4)
    for _ in range(20):
        rho_u = float(rng.uniform(0.4, 2.0))
        c_u = np.sqrt(gas.gamma * rho_u ** (gas.gamma - 1.0))
        zn_u = c_u * (1.0 + float(rng.uniform(0.01, 2.0)))
        rho_d, zn_d = normal_jump(gas, rho_u, zn_u)
        lhs = pi_map(gas, rho_u) + 0.5 * zn_u**2
        rhs = pi_map(gas, rho_d) + 0.5 * zn_d**2
        assert abs(lhs - rhs) < 1e-12
