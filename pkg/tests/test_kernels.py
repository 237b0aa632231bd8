"""Backend equivalence and residual quality of the jump kernels."""

import numpy as np
import pytest

from ssrr import _kernels
from ssrr.gas import GasModel, pi_map


def _bernoulli_residual(gamma, rho_u, zn_u, rho_d):
    gas = GasModel(gamma)
    zn_d = rho_u * zn_u / rho_d
    return pi_map(gas, rho_d) + 0.5 * zn_d**2 - pi_map(gas, rho_u) - 0.5 * zn_u**2


@pytest.mark.parametrize("gamma", [1.0, 1.4, 2.0, 3.0])
def test_backends_agree(gamma):
    rng = np.random.default_rng(42)
    rho_u = 0.8
    c_u = np.sqrt(gamma * rho_u ** (gamma - 1.0))
    zn = c_u * (1.0 + rng.uniform(1e-6, 3.0, size=64))
    via_numpy = _kernels._jump_batch_np(gamma, rho_u, zn)
    via_scalar = np.array([_kernels.jump_density(gamma, rho_u, z) for z in zn])
    via_batch = _kernels.jump_density_batch(gamma, rho_u, zn)
    assert np.allclose(via_numpy, via_scalar, rtol=1e-13, atol=0.0)
    assert np.allclose(via_batch, via_scalar, rtol=1e-14, atol=0.0)


@pytest.mark.parametrize("gamma", [1.0, 1.4, 2.0, 3.0, 4.0])
def test_residuals_below_tolerance(gamma):
    rng = np.random.default_rng(3)
    for _ in range(50):
        rho_u = float(rng.uniform(0.3, 2.5))
        c_u = np.sqrt(gamma * rho_u ** (gamma - 1.0))
        zn_u = c_u * (1.0 + float(rng.uniform(1e-4, 2.5)))
        rho_d = _kernels.jump_density(gamma, rho_u, zn_u)
        assert rho_d >= rho_u
        assert abs(_bernoulli_residual(gamma, rho_u, zn_u, rho_d)) < 1e-13


def test_numpy_batch_sonic_snap():
    # lanes at vanishing strength return the sonic bracket end
    gamma = 1.4
    zn = np.array([np.sqrt(gamma) * (1.0 + 1e-15), np.sqrt(gamma) * 2.0])
    out = _kernels._jump_batch_np(gamma, 1.0, zn)
    assert out[0] == pytest.approx(1.0, abs=1e-9)
    assert out[1] > 1.0
